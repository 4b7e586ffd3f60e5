"""Seeded verification suites behind ``cqms verify``.

Each suite returns a list of ``Check`` records; a check fails when its
residual exceeds its threshold. Informational checks are reported but never
fail.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import channels as ch
from . import covariance as cv
from . import imprimitivity as im
from . import numerics as nm
from . import poincare as pc
from . import qms
from . import stinespring as st
from .errors import NotCPError


@dataclass
class Check:
    case: str
    residual: float
    threshold: float
    informational: bool = False

    @property
    def passed(self) -> bool:
        return self.informational or bool(self.residual <= self.threshold)


def _max(name, values, threshold):
    return Check(name, float(max(values)), threshold)


def channel_corpus(rng: np.random.Generator, size: int = 100):
    """Seeded (d, k, channel) triples with d in {2, 3, 4}, k in 1..d^2."""
    out = []
    for _ in range(size):
        d = int(rng.integers(2, 5))
        k = int(rng.integers(1, d * d + 1))
        out.append((d, k, ch.random_unital_cp(d, k, rng)))
    return out


def suite_channels(rng) -> list[Check]:
    corpus = channel_corpus(rng)
    roundtrip, unital, cp_min = [], [], []
    for _, _, t in corpus:
        c = ch.choi_matrix(t)
        back = ch.kraus_from_choi(c)
        roundtrip.append(ch.choi_distance(back, c))
        unital.append(ch.validate_channel(back).residuals["unital"])
        cp_min.append(-c.min_eigenvalue())
    checks = [_max("kraus_choi_roundtrip", roundtrip, 1e-9),
              _max("unital_after_roundtrip", unital, 1e-10),
              _max("choi_psd", cp_min, 1e-10)]
    transpose_choi = ch.choi_from_map(ch.transpose_map, 2)
    lam = transpose_choi.min_eigenvalue()
    try:
        ch.kraus_from_choi(transpose_choi)
        flagged = False
    except NotCPError:
        flagged = True
    checks.append(Check("transpose_not_cp", 0.0 if flagged else 1.0, 0.0))
    checks.append(Check("transpose_choi_eigenvalue", lam + 1.0, 1e-9))
    return checks


def suite_stinespring(rng) -> list[Check]:
    corpus = channel_corpus(rng)
    recon, iso, minimal = [], [], []
    for _, _, t in corpus:
        dil = st.dilate(t)
        recon.append(st.verify_dilation(t, dil))
        v = dil.isometry_v
        iso.append(np.linalg.norm(nm.dag(v) @ v - np.eye(t.dim)))
        rank = np.linalg.matrix_rank(ch.choi_matrix(t).matrix, tol=1e-10)
        minimal.append(abs(dil.ancilla_dim - rank))
    gram = []
    for _ in range(10):
        t = ch.random_unital_cp(3, int(rng.integers(1, 10)), rng)
        g = st.kernel_gram(t, st.random_kernel_samples(3, 20, rng))
        gram.append(-np.linalg.eigvalsh(nm.hermitize(g, 1e-8))[0])
    witness = st.kernel_witness(ch.transpose_map, 2)
    return [_max("reconstruction", recon, 1e-10),
            _max("isometry", iso, 1e-12),
            _max("minimal_ancilla", minimal, 0),
            _max("kernel_psd", gram, 1e-9),
            Check("transpose_kernel_witness", witness, -1e-3)]


def suite_si(rng) -> list[Check]:
    weyl, si_res, rep_res, transport = [], [], [], []
    for n in range(2, 17):
        u, v = im.standard_weyl_pair(n)
        weyl.append(max(im.weyl_residuals(u, v, n).values()))
        for mult in (1, 2, 3):
            si = im.canonical_si(n, mult)
            si_res.append(im.verify_si(si))
            rep_res.append(im.representation_residual(si))
            if n <= 8:
                g = nm.random_unitary(si.dim, rng)
                moved = im.transport_si(si, g)
                transport.append(im.verify_si(moved))
                if im.pvm_multiplicity(moved.pvm).ranks != [mult] * n:
                    transport.append(1.0)
    swn, kdim = [], []
    for n in range(2, 6):
        a = im.standard_weyl_pair(n)
        w = nm.random_unitary(n, rng)
        b = (w @ a[0] @ nm.dag(w), w @ a[1] @ nm.dag(w))
        g = im.find_intertwiner(a, b)
        swn.append(max(np.linalg.norm(g @ a[0] - b[0] @ g),
                       np.linalg.norm(g @ a[1] - b[1] @ g)))
        kdim.append(abs(im.intertwiner_kernel_dim(a, b) - 1))
    return [_max("weyl_relations", weyl, 1e-12),
            _max("si_covariance", si_res, 1e-12),
            _max("si_representation", rep_res, 1e-12),
            _max("si_transport", transport, 1e-12),
            _max("stone_von_neumann", swn, 1e-8),
            _max("intertwiner_kernel_dim", kdim, 0)]


def suite_covariance(rng) -> list[Check]:
    reps = [cv.pauli_rep(), cv.weyl_group_rep(3)]
    cov, dil, cocycle, idem, valid = [], [], [], [], []
    for r in reps:
        for _ in range(10):
            k = int(rng.integers(1, r.dim ** 2 + 1))
            t = cv.twirl(ch.random_unital_cp(r.dim, k, rng), r)
            cov.append(cv.check_covariance(t, r))
            res = cv.covariant_dilation(t, r)
            dil.append(res.residual)
            cocycle.append(res.cocycle_residual)
            idem.append(ch.choi_distance(cv.twirl(t, r), t))
            rep = ch.validate_channel(t)
            valid.append(0.0 if (rep.cp and rep.unital) else 1.0)
    return [_max("twirl_covariance", cov, 1e-10),
            _max("covariant_dilation", dil, 1e-8),
            _max("ancilla_cocycle", cocycle, 1e-8),
            _max("twirl_idempotent", idem, 1e-10),
            _max("twirl_cp_unital", valid, 0.0)]


def suite_qms(rng) -> list[Check]:
    unital_gen, semigroup, cp, unital = [], [], [], []
    for _ in range(6):
        d = int(rng.integers(2, 4))
        jumps = [rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
                 for _ in range(int(rng.integers(1, 4)))]
        gen = qms.LindbladGenerator.from_jumps(jumps, rate=float(rng.uniform(0.2, 1.0)))
        unital_gen.append(np.linalg.norm(gen(np.eye(d))))
        s, t = rng.uniform(0, 1, size=2)
        semigroup.append(qms.semigroup_residual(gen, s, t))
        for tt in (0.1, 1.0, 10.0):
            sup = qms.evolve(gen, tt)
            cp.append(-qms.choi_min_eigenvalue(sup))
            unital.append(qms.unital_residual(sup))
    damp = qms.amplitude_damping()
    t = np.log(2)
    closed = np.exp(-t) * (nm.SIGMA_Z + np.eye(2)) - np.eye(2)
    damp_res = np.linalg.norm(qms.evolve(damp, t)(nm.SIGMA_Z) - closed)

    pauli = cv.pauli_rep()
    erg_gen = qms.LindbladGenerator.from_jumps(qms.covariantize_jumps(nm.PAULI[1:], pauli))
    erg = qms.fixed_point_space(erg_gen)
    deph = qms.fixed_point_space(qms.LindbladGenerator.from_jumps([nm.SIGMA_Z]))
    power = np.linalg.norm(qms.evolve(erg_gen, 50.0).matrix - qms.fixed_point_projector(erg_gen))
    cov = qms.qms_covariance_check(erg_gen, pauli, [0.1, 1.0, 5.0])
    return [_max("generator_unital", unital_gen, 1e-10),
            _max("semigroup", semigroup, 1e-9),
            _max("evolved_cp", cp, 1e-8),
            _max("evolved_unital", unital, 1e-9),
            Check("amplitude_damping_closed_form", float(damp_res), 1e-8),
            Check("ergodic_dimension", abs(erg.dimension - 1), 0),
            Check("dephasing_dimension", abs(deph.dimension - 2), 0),
            Check("ergodic_power_limit", float(power), 1e-6),
            Check("qms_covariance", max(cov.evolved, cov.generator), 1e-9)]


def suite_poincare(rng) -> list[Check]:
    pairing, char, homo = [], [], []
    for _ in range(1000):
        L = pc.random_lorentz(rng, 2.0)
        x, p = rng.normal(size=4), rng.normal(size=4)
        res = pc.dual_action_check(L, x, p)
        pairing.append(res.pairing)
        char.append(res.character)
    for _ in range(100):
        a, b = pc.random_lorentz(rng), pc.random_lorentz(rng)
        ab = pc.sl2c_to_lorentz(a.sl2c @ b.sl2c)
        homo.append(np.linalg.norm(ab.lorentz4 - a.lorentz4 @ b.lorentz4))
        homo.append(np.linalg.norm(pc.sl2c_to_lorentz(-a.sl2c).lorentz4 - a.lorentz4))
    std_defect, invsq_defect = [], []
    pts = pc.random_cone_points(rng, 32)
    for _ in range(10):
        L = pc.boost(rng.normal(size=3), rng.uniform(0, 1.0))
        std_defect.append(pc.measure_invariance_check(L, "standard", pts))
        invsq_defect.append(pc.measure_invariance_check(L, "inverse_square", pts))
    fiber = []
    p_ref = np.array([1.0, 0.0, 0.0, 1.0])
    for _ in range(10):
        L = pc.random_lorentz(rng)
        for q in (p_ref, L.act(p_ref)):
            dims = [pc.fiber_space(q, 0.0, c).shape[1] for c in (None, "minus", "plus")]
            fiber.append(float(dims != [2, 1, 1]))
    grid = pc.build_orbit_grid(4, 8, 0.5, 2.0)
    phi = pc.make_section(grid, lambda p: np.column_stack(
        [np.exp(-p[:, 0]) * (1 + p[:, 1]), np.exp(-p[:, 0]) * p[:, 2]]))
    rot = pc.PoincareElement(pc.rotation([0, 0, 1], 2 * np.pi / 8), np.zeros(4))
    rot_norm = abs(pc.section_norm(pc.induced_rep_apply(rot, phi)) - pc.section_norm(phi))
    bst = pc.PoincareElement(pc.boost([0, 0, 1], 0.5), np.zeros(4))
    boost_norm = abs(pc.section_norm(pc.induced_rep_apply(bst, phi))
                     / pc.section_norm(phi) - 1.0)
    return [_max("minkowski_invariance", pairing, 1e-10),
            _max("character_duality", char, 1e-10),
            _max("covering_homomorphism", homo, 1e-9),
            _max("standard_density_invariance", std_defect, 1e-6),
            Check("inverse_square_density_defect", float(max(invsq_defect)), 0.0,
                  informational=True),
            _max("fiber_dimensions", fiber, 0.0),
            Check("rotation_norm_invariance", float(rot_norm), 1e-10),
            Check("boost_norm_change", float(boost_norm), 0.0, informational=True)]


SUITES: dict[str, Callable] = {
    "channels": suite_channels,
    "stinespring": suite_stinespring,
    "si": suite_si,
    "covariance": suite_covariance,
    "qms": suite_qms,
    "poincare": suite_poincare,
}


def _summarize(name: str, seed: int, checks: list[Check]) -> dict:
    return {
        "suite": name,
        "seed": seed,
        "cases": len(checks),
        "failures": [c.case for c in checks if not c.passed],
        "max_residuals": {c.case: c.residual for c in checks if not c.informational},
        "informational": {c.case: c.residual for c in checks if c.informational},
    }


def run_suite(name: str, seed: int) -> dict:
    """Run one suite (or 'all') and return the JSON-ready report."""
    if name == "all":
        parts = {}
        for i, sub in enumerate(SUITES):
            # one child generator per suite, derived from the single seed
            parts[sub] = _summarize(sub, seed, SUITES[sub](np.random.default_rng([seed, i])))
        return {
            "suite": "all",
            "seed": seed,
            "cases": sum(p["cases"] for p in parts.values()),
            "failures": [f"{k}.{f}" for k, p in parts.items() for f in p["failures"]],
            "max_residuals": {f"{k}.{c}": v for k, p in parts.items()
                              for c, v in p["max_residuals"].items()},
            "informational": {f"{k}.{c}": v for k, p in parts.items()
                              for c, v in p["informational"].items()},
        }
    if name not in SUITES:
        raise KeyError(name)
    index = list(SUITES).index(name)
    return _summarize(name, seed, SUITES[name](np.random.default_rng([seed, index])))
