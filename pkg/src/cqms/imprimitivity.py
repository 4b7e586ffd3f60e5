"""Finite systems of imprimitivity for the cyclic group Z_n.

Conventions: U = clock = diag(1, w, ..., w^{n-1}) with w = exp(2 pi i / n),
V = shift e_j -> e_{j+1 mod n}, so that UV = w VU. The group Z_n acts on
M = {0, ..., n-1} by j -> j - g, hence g^{-1} . j = j + g and the regular
representation U_g = V^g satisfies U_g E({j}) U_g^{-1} = E({j + g}).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

from . import numerics as nm
from .errors import DimensionError, NotEquivalentError, NotUnitaryError


def clock(n: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(n) / n))


def shift(n: int, g: int = 1) -> np.ndarray:
    """Permutation matrix e_j -> e_{j+g mod n}."""
    s = np.zeros((n, n), dtype=np.complex128)
    j = np.arange(n)
    s[(j + g) % n, j] = 1.0
    return s


def standard_weyl_pair(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n < 2:
        raise ValueError(f"Weyl pair needs n >= 2, got {n}")
    return clock(n), shift(n)


def weyl_residuals(u, v, n: int) -> dict:
    eye = np.eye(u.shape[0])
    w = np.exp(2j * np.pi / n)
    return {
        "u_power": float(np.linalg.norm(np.linalg.matrix_power(u, n) - eye)),
        "v_power": float(np.linalg.norm(np.linalg.matrix_power(v, n) - eye)),
        "commutation": float(np.linalg.norm(u @ v - w * v @ u)),
    }


@dataclass(frozen=True)
class PVM:
    """Projection valued measure on M = {0, ..., n-1}, stored by singletons."""

    projections: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return len(self.projections)

    @property
    def dim(self) -> int:
        return self.projections[0].shape[0]

    def __call__(self, subset) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for j in subset:
            out = out + self.projections[j]
        return out

    def residuals(self) -> dict:
        eye = np.eye(self.dim)
        idem = max(np.linalg.norm(p @ p - p) for p in self.projections)
        herm = max(np.linalg.norm(p - nm.dag(p)) for p in self.projections)
        total = np.linalg.norm(sum(self.projections) - eye)
        ortho = 0.0
        for j, p in enumerate(self.projections):
            for l, q in enumerate(self.projections):
                if j != l:
                    ortho = max(ortho, np.linalg.norm(p @ q))
        return {"idempotent": float(idem), "hermitian": float(herm),
                "resolution": float(total), "orthogonal": float(ortho)}


@dataclass(frozen=True)
class WeylSI:
    n: int
    u_rep: tuple[np.ndarray, ...]
    pvm: PVM

    @property
    def dim(self) -> int:
        return self.pvm.dim

    def inverse_action(self, g: int, j: int) -> int:
        """g^{-1} . j for the action j -> j - g."""
        return (j + g) % self.n

    def to_json(self) -> dict:
        return {"n": self.n, "D": self.dim,
                "U": [nm.matrix_to_json(u) for u in self.u_rep],
                "E": [nm.matrix_to_json(e) for e in self.pvm.projections]}


def si_from_json(obj) -> WeylSI:
    u = tuple(nm.matrix_from_json(m) for m in obj["U"])
    e = tuple(nm.matrix_from_json(m) for m in obj["E"])
    return WeylSI(int(obj["n"]), u, PVM(e))


def canonical_si(n: int, multiplicity: int = 1) -> WeylSI:
    """The SI induced from the trivial subgroup {0}, with given multiplicity."""
    if n < 2 or multiplicity < 1:
        raise ValueError(f"invalid SI parameters n={n}, multiplicity={multiplicity}")
    eye_m = np.eye(multiplicity, dtype=np.complex128)
    projs = []
    for j in range(n):
        p = np.zeros((n, n), dtype=np.complex128)
        p[j, j] = 1.0
        projs.append(np.kron(p, eye_m))
    reps = tuple(np.kron(shift(n, g), eye_m) for g in range(n))
    return WeylSI(n, reps, PVM(tuple(projs)))


def verify_si(si: WeylSI) -> float:
    """max_{g, j} ||U_g E({j}) U_g^{-1} - E(g^{-1}{j})||_F."""
    worst = 0.0
    for g, u in enumerate(si.u_rep):
        for j in range(si.n):
            lhs = u @ si.pvm.projections[j] @ nm.dag(u)
            rhs = si.pvm.projections[si.inverse_action(g, j)]
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def representation_residual(si: WeylSI) -> float:
    """max_{g,h} ||U_g U_h - U_{g+h}||_F."""
    worst = 0.0
    for g, ug in enumerate(si.u_rep):
        for h, uh in enumerate(si.u_rep):
            worst = max(worst, float(np.linalg.norm(ug @ uh - si.u_rep[(g + h) % si.n])))
    return worst


@dataclass(frozen=True)
class MultiplicityReport:
    ranks: list
    homogeneous: bool
    multiplicity: int | None


def pvm_multiplicity(p: PVM, tol: float = 1e-10) -> MultiplicityReport:
    ranks = []
    for e in p.projections:
        s = np.linalg.svd(e, compute_uv=False)
        ranks.append(int(np.sum(s > tol)))
    homogeneous = len(set(ranks)) == 1
    return MultiplicityReport(ranks, homogeneous, ranks[0] if homogeneous else None)


def transport_si(si: WeylSI, g) -> WeylSI:
    """Conjugate both the representation and the PVM by a unitary g."""
    g = nm.as_matrix(g, square=True)
    if g.shape[0] != si.dim:
        raise DimensionError(f"unitary of size {g.shape[0]} for an SI of dimension {si.dim}")
    if not nm.is_unitary(g, 1e-10):
        raise NotUnitaryError("transport_si needs a unitary")
    gi = nm.dag(g)
    return WeylSI(si.n, tuple(g @ u @ gi for u in si.u_rep),
                  PVM(tuple(g @ e @ gi for e in si.pvm.projections)))


def intertwiner_kernel(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Singular values and right singular vectors of the stacked Sylvester map
    g -> (g U_a - U_b g, g V_a - V_b g), in row-major vec form."""
    (ua, va), (ub, vb) = a, b
    n = ua.shape[0]
    eye = np.eye(n)
    op = np.vstack([np.kron(eye, ua.T) - np.kron(ub, eye),
                    np.kron(eye, va.T) - np.kron(vb, eye)])
    _, s, vh = np.linalg.svd(op)
    return s, nm.dag(vh)


def find_intertwiner(a, b, tol: float = 1e-8) -> np.ndarray:
    """Unitary g with g U_a = U_b g and g V_a = V_b g.

    The kernel vector of the joint Sylvester system is reshaped and
    projected onto the unitaries by polar decomposition.
    """
    (ua, va), (ub, vb) = [tuple(nm.as_matrix(m, square=True) for m in pair)
                          for pair in (a, b)]
    if ua.shape != ub.shape:
        raise DimensionError("Weyl pairs act on spaces of different dimension")
    n = ua.shape[0]
    s, vecs = intertwiner_kernel((ua, va), (ub, vb))
    scale = max(1.0, s[0])
    if s[-1] > tol * scale:
        raise NotEquivalentError(
            f"no intertwiner: smallest singular value {s[-1]:.3e}")
    g = nm.polar_unitary(vecs[:, -1].reshape(n, n))
    res = max(np.linalg.norm(g @ ua - ub @ g), np.linalg.norm(g @ va - vb @ g))
    if res > tol:
        raise NotEquivalentError(f"unitarized intertwiner residual {res:.3e}")
    return g


def intertwiner_kernel_dim(a, b, tol: float = 1e-8) -> int:
    s, _ = intertwiner_kernel(a, b)
    n2 = a[0].shape[0] ** 2
    s_full = np.zeros(n2)
    s_full[: min(n2, s.size)] = s[:n2]
    return int(np.sum(s_full <= tol * max(1.0, s[0])))


def action_orbits(n: int, subgroup_generators: Sequence[int]) -> list[list[int]]:
    """Orbits on M of the subgroup of Z_n generated by the given elements.

    The subgroup generated by g_1, ..., g_r is the one generated by
    gcd(n, g_1, ..., g_r); orbits are its cosets.
    """
    step = n
    for g in subgroup_generators:
        step = gcd(step, int(g) % n)
    if step == 0:
        step = n
    return [list(range(r, n, step)) for r in range(step)]


def is_transitive(n: int, subgroup_generators: Sequence[int]) -> bool:
    return len(action_orbits(n, subgroup_generators)) == 1
