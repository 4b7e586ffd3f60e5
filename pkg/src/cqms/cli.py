"""Command-line entry point.

    cqms <command> [--seed N] [--dim D] [--kraus K] [--lambda R]
                   [--times a,b,c] [--in PATH] [--out PATH]

Exit codes: 0 success, 1 I/O, 2 usage, 3 domain error, 4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from . import channels as ch
from . import covariance as cv
from . import numerics as nm
from . import poincare as pc
from . import qms
from . import stinespring as st
from .errors import CQMSError
from .verify import SUITES, run_suite

log = logging.getLogger("cqms")

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get("CQMS_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"CQMS_SEED must be an integer, got {env!r}") from exc


def _parse_times(text: str) -> list[float]:
    try:
        times = [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --times value {text!r}") from exc
    if not times:
        raise UsageError("--times is empty")
    if any(t < 0 for t in times):
        raise UsageError("times must be non-negative")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise UsageError("times must be strictly ascending")
    return times


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise OSError(f"cannot parse {path}: {exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _load_channel(path: str) -> ch.QuantumChannel:
    try:
        return ch.channel_from_json(_read_json(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise OSError(f"{path} is not a channel file: {exc}") from exc


def cmd_gen_channel(args) -> int:
    if args.dim is None or args.dim < 1 or args.kraus is None or args.kraus < 1:
        raise UsageError("gen-channel needs --dim >= 1 and --kraus >= 1")
    t = ch.random_unital_cp(args.dim, args.kraus, args.seed)
    _write_text(args.out, _dump(ch.channel_to_json(t)))
    return EXIT_OK


def cmd_dilate(args) -> int:
    if args.inp is None:
        raise UsageError("dilate needs --in")
    t = _load_channel(args.inp)
    dil = st.dilate(t)
    if args.out:
        _write_text(args.out, _dump(dil.to_json()))
    print(f"ancilla_dim: {dil.ancilla_dim}, residual: {dil.residual:.3g}")
    return EXIT_OK if dil.residual < 1e-8 else EXIT_VERIFY


def _group_for(name: str | None, d: int) -> cv.GroupRep:
    if name is None:
        name = "pauli" if d == 2 else "weyl"
    if name == "pauli":
        if d != 2:
            raise UsageError("the Pauli group acts on qubits only")
        return cv.pauli_rep()
    if name == "weyl":
        return cv.weyl_group_rep(d)
    raise UsageError(f"unknown group {name!r}")


def cmd_twirl(args) -> int:
    if args.inp is None:
        raise UsageError("twirl needs --in")
    t = _load_channel(args.inp)
    rep = _group_for(args.group, t.dim)
    tw = cv.twirl(t, rep)
    _write_text(args.out, _dump(ch.channel_to_json(tw)))
    print(f"covariance residual: {cv.check_covariance(tw, rep):.3g}", file=sys.stderr)
    return EXIT_OK


def _observable(name: str, d: int) -> np.ndarray:
    paulis = {"x": nm.SIGMA_X, "y": nm.SIGMA_Y, "z": nm.SIGMA_Z}
    if name.lower() in paulis:
        if d != 2:
            raise UsageError(f"Pauli observable {name!r} needs a qubit")
        return paulis[name.lower()]
    if name.startswith("p") and name[1:].isdigit():
        j = int(name[1:])
        if j >= d:
            raise UsageError(f"projector index {j} out of range for dim {d}")
        e = np.zeros((d, d), dtype=np.complex128)
        e[j, j] = 1.0
        return e
    raise UsageError(f"unknown observable {name!r} (use x, y, z or pJ)")


def _load_generator(path: str, rate: float) -> qms.LindbladGenerator:
    obj = _read_json(path)
    try:
        if "jumps" in obj:
            gen = qms.generator_from_json(obj)
            return qms.LindbladGenerator(gen.dim, gen.jumps, rate if rate else gen.rate)
        return qms.LindbladGenerator.from_channel(ch.channel_from_json(obj), rate or 1.0)
    except (ValueError, KeyError, TypeError) as exc:
        raise OSError(f"{path} is neither a generator nor a channel file: {exc}") from exc


def cmd_qms(args) -> int:
    if args.inp is None:
        raise UsageError("qms needs --in")
    times = _parse_times(args.times or "0,1")
    if args.rate is not None and args.rate <= 0:
        raise UsageError("--lambda must be positive")
    gen = _load_generator(args.inp, args.rate)
    names = [s.strip() for s in args.observables.split(",") if s.strip()]
    obs = [_observable(n, gen.dim) for n in names]
    if not 0 <= args.rho0 < gen.dim:
        raise UsageError(f"--rho0 {args.rho0} out of range")
    rho0 = np.zeros((gen.dim, gen.dim), dtype=np.complex128)
    rho0[args.rho0, args.rho0] = 1.0

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["t"]
    for n in names:
        header += [f"re_{n}", f"im_{n}"]
    w.writerow(header + ["semigroup_residual"])
    for t in times:
        tt = qms.evolve(gen, t)
        half = qms.evolve(gen, t / 2)
        row = [repr(t)]
        for x in obs:
            val = np.trace(rho0 @ tt(x))
            row += [repr(float(val.real)), repr(float(val.imag))]
        row.append(f"{np.linalg.norm(tt.matrix - half.matrix @ half.matrix):.3e}")
        w.writerow(row)
    _write_text(args.out, buf.getvalue())
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed)
    _write_text(args.out, _dump(report))
    return EXIT_OK if not report["failures"] else EXIT_VERIFY


def cmd_invariance(args) -> int:
    """CSV of max Jacobian defects of both cone densities under sample transforms."""
    rng = np.random.default_rng(args.seed)
    pts = pc.random_cone_points(rng, 32)
    transforms = [("rotation_z_0.7", pc.rotation([0, 0, 1], 0.7)),
                  ("boost_z_0.6", pc.boost([0, 0, 1], 0.6)),
                  ("boost_x_1.0", pc.boost([1, 0, 0], 1.0))]
    for i in range(3):
        transforms.append((f"random_{i}", pc.random_lorentz(rng, 1.0)))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["transform", "density", "max_defect"])
    for tid, L in transforms:
        for dens in ("standard", "inverse_square"):
            w.writerow([tid, dens, f"{pc.measure_invariance_check(L, dens, pts):.6e}"])
    _write_text(args.out, buf.getvalue())
    return EXIT_OK


def cmd_grid(args) -> int:
    grid = pc.build_orbit_grid(args.n_radial, args.n_angular, args.r_min, args.r_max,
                               density=args.density)
    _write_text(args.out, _dump(grid.to_json()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--dim", type=int)
    common.add_argument("--kraus", type=int)
    common.add_argument("--lambda", dest="rate", type=float)
    common.add_argument("--times")
    common.add_argument("--in", dest="inp")
    common.add_argument("--out")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="cqms", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("gen-channel", parents=[common]).set_defaults(func=cmd_gen_channel)
    sub.add_parser("dilate", parents=[common]).set_defaults(func=cmd_dilate)
    tw = sub.add_parser("twirl", parents=[common])
    tw.add_argument("--group", choices=["pauli", "weyl"])
    tw.set_defaults(func=cmd_twirl)
    for name in ("qms", "evolve"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("--observables", default="z")
        q.add_argument("--rho0", type=int, default=0)
        q.set_defaults(func=cmd_qms)
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("suite", nargs="?", default="all", choices=[*SUITES, "all"])
    v.set_defaults(func=cmd_verify)
    sub.add_parser("invariance", parents=[common]).set_defaults(func=cmd_invariance)
    g = sub.add_parser("grid", parents=[common])
    g.add_argument("--n-radial", type=int, default=4)
    g.add_argument("--n-angular", type=int, default=8)
    g.add_argument("--r-min", type=float, default=0.5)
    g.add_argument("--r-max", type=float, default=2.0)
    g.add_argument("--density", choices=["standard", "inverse_square"], default="standard")
    g.set_defaults(func=cmd_grid)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.seed = _resolve_seed(args.seed)
        log.info("seed %d", args.seed)
        return args.func(args)
    except UsageError as exc:
        print(f"cqms: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CQMSError as exc:
        print(f"cqms: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"cqms: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"cqms: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
