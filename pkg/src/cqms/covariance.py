"""Group-covariant channels: twirling, covariance residuals and covariant
Stinespring dilations for finite (possibly projective) representations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import numerics as nm
from .channels import QuantumChannel, apply_heisenberg, choi_matrix, kraus_from_choi
from .errors import DimensionError, NoAncillaRepError, NotCovariantError
from .imprimitivity import clock, shift
from .stinespring import DilationResult, dilate


@dataclass(frozen=True)
class GroupRep:
    """Unitaries U_g of a finite group with multiplication table ``mult[g][h] = gh``.

    ``phases[g][h]`` is the 2-cocycle w(g, h) with U_g U_h = w(g, h) U_gh;
    it is computed from the unitaries when not given.
    """

    unitaries: tuple[np.ndarray, ...]
    mult: tuple[tuple[int, ...], ...]
    phases: np.ndarray | None = None

    def __post_init__(self):
        us = tuple(nm.as_matrix(u, square=True) for u in self.unitaries)
        object.__setattr__(self, "unitaries", us)
        if self.phases is None:
            object.__setattr__(self, "phases", cocycle_table(us, self.mult))

    @property
    def group_order(self) -> int:
        return len(self.unitaries)

    @property
    def dim(self) -> int:
        return self.unitaries[0].shape[0]

    def residual(self) -> float:
        """max ||U_g U_h - w(g,h) U_gh|| together with unitarity defects."""
        worst = 0.0
        eye = np.eye(self.dim)
        for g, ug in enumerate(self.unitaries):
            worst = max(worst, float(np.linalg.norm(nm.dag(ug) @ ug - eye)))
            for h, uh in enumerate(self.unitaries):
                gh = self.mult[g][h]
                diff = ug @ uh - self.phases[g, h] * self.unitaries[gh]
                worst = max(worst, float(np.linalg.norm(diff)))
        return worst

    def to_json(self) -> dict:
        return {"order": self.group_order,
                "unitaries": [nm.matrix_to_json(u) for u in self.unitaries],
                "mult": [list(r) for r in self.mult],
                "phases": [[[float(z.real), float(z.imag)] for z in row]
                           for row in self.phases]}


def grouprep_from_json(obj) -> GroupRep:
    us = tuple(nm.matrix_from_json(m) for m in obj["unitaries"])
    mult = tuple(tuple(int(x) for x in row) for row in obj["mult"])
    phases = None
    if obj.get("phases") is not None:
        phases = np.array([[complex(re, im) for re, im in row] for row in obj["phases"]])
    return GroupRep(us, mult, phases)


def cocycle_table(unitaries: Sequence[np.ndarray], mult) -> np.ndarray:
    n = len(unitaries)
    d = unitaries[0].shape[0]
    w = np.empty((n, n), dtype=np.complex128)
    for g in range(n):
        for h in range(n):
            z = np.trace(nm.dag(unitaries[mult[g][h]]) @ unitaries[g] @ unitaries[h]) / d
            w[g, h] = z / abs(z) if abs(z) > 1e-12 else 1.0
    return w


def cyclic_rep(u, n: int | None = None) -> GroupRep:
    """Z_n represented by powers of a unitary u (u^n = 1 assumed)."""
    u = nm.as_matrix(u, square=True)
    if n is None:
        n, p = 1, u.copy()
        while np.linalg.norm(p - np.eye(u.shape[0])) > 1e-10:
            p, n = p @ u, n + 1
            if n > 64:
                raise ValueError("unitary has no small finite order")
    powers = tuple(np.linalg.matrix_power(u, g) for g in range(n))
    mult = tuple(tuple((g + h) % n for h in range(n)) for g in range(n))
    return GroupRep(powers, mult)


def weyl_group_rep(n: int) -> GroupRep:
    """Z_n x Z_n acting by the clock-shift operators U^a V^b, element a * n + b."""
    u, v = clock(n), shift(n)
    ops, mult = [], []
    for a in range(n):
        for b in range(n):
            ops.append(np.linalg.matrix_power(u, a) @ np.linalg.matrix_power(v, b))
    for a in range(n):
        for b in range(n):
            mult.append(tuple(((a + c) % n) * n + (b + e) % n
                              for c in range(n) for e in range(n)))
    return GroupRep(tuple(ops), tuple(mult))


def pauli_rep() -> GroupRep:
    """The qubit Pauli group {I, X, Y, Z} as a projective rep of Z_2 x Z_2."""
    # index bits (x, z): I=0b00, X=0b10, Y=0b11, Z=0b01; product is XOR
    ops = {0: nm.PAULI[0], 2: nm.SIGMA_X, 3: nm.SIGMA_Y, 1: nm.SIGMA_Z}
    mult = tuple(tuple(g ^ h for h in range(4)) for g in range(4))
    return GroupRep(tuple(ops[g] for g in range(4)), mult)


def _check_dims(t: QuantumChannel, r: GroupRep):
    if t.dim != r.dim:
        raise DimensionError(f"channel dim {t.dim} vs representation dim {r.dim}")


def twirl(t: QuantumChannel, r: GroupRep) -> QuantumChannel:
    """T'(X) = |G|^{-1} sum_g U_g^* T(U_g X U_g^*) U_g, compressed to a minimal Kraus set."""
    _check_dims(t, r)
    scale = 1.0 / np.sqrt(r.group_order)
    kraus = [scale * nm.dag(u) @ l @ u for u in r.unitaries for l in t.heisenberg_kraus()]
    return kraus_from_choi(choi_matrix(QuantumChannel(t.dim, tuple(kraus))))


def check_covariance(t: QuantumChannel, r: GroupRep) -> float:
    """max_g max_{E_ab} ||T(U_g X U_g^*) - U_g T(X) U_g^*||_F."""
    _check_dims(t, r)
    worst = 0.0
    for u in r.unitaries:
        ud = nm.dag(u)
        for _, _, e in nm.matrix_units(t.dim):
            lhs = apply_heisenberg(t, u @ e @ ud)
            rhs = u @ apply_heisenberg(t, e) @ ud
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def kraus_mixing_matrices(kraus: Sequence[np.ndarray], r: GroupRep,
                          tol: float = 1e-8) -> list[np.ndarray]:
    """m(g) with L_i U_g = sum_j m(g)_ij U_g L_j, one per group element.

    Solved as U_g^* L_i U_g = sum_j m_ij L_j in least squares (minimum-norm
    when the Kraus set is linearly dependent). Raises NoAncillaRepError
    when the fit leaves a residual above ``tol``.
    """
    basis = np.stack([nm.vec(l) for l in kraus], axis=1)
    out = []
    for u in r.unitaries:
        rhs = np.stack([nm.vec(nm.dag(u) @ l @ u) for l in kraus], axis=1)
        sol, *_ = np.linalg.lstsq(basis, rhs, rcond=None)
        fit = np.linalg.norm(basis @ sol - rhs)
        if fit > tol * max(1.0, np.linalg.norm(rhs)):
            raise NoAncillaRepError(f"Kraus span not invariant (fit residual {fit:.3e})")
        out.append(sol.T)
    return out


@dataclass(frozen=True)
class CovariantDilation:
    dilation: DilationResult
    ancilla_rep: GroupRep
    residual: float
    cocycle_residual: float
    mixing: tuple[np.ndarray, ...]


def intertwining_residual(v: np.ndarray, r: GroupRep, ancilla: Sequence[np.ndarray]) -> float:
    return max(float(np.linalg.norm(v @ u - np.kron(u, w) @ v))
               for u, w in zip(r.unitaries, ancilla))


def cocycle_residual(ops: Sequence[np.ndarray], mult) -> float:
    """max_{g,h} min_phase ||m(g) m(h) - phase * m(gh)||_F."""
    worst = 0.0
    for g, mg in enumerate(ops):
        for h, mh in enumerate(ops):
            target = ops[mult[g][h]]
            prod = mg @ mh
            z = np.vdot(target, prod)
            phase = z / abs(z) if abs(z) > 1e-14 else 1.0
            worst = max(worst, float(np.linalg.norm(prod - phase * target)))
    return worst


def covariant_dilation(t: QuantumChannel, r: GroupRep, tol: float = 1e-8) -> CovariantDilation:
    """Dilation V together with ancilla unitaries u_g such that
    V U_g = (U_g (x) u_g) V for every group element.

    The u_g are the unitarized Kraus-mixing matrices of the minimal Kraus
    set produced by ``dilate``. This is one realization; any other ancilla
    basis gives an equivalent dilation.
    """
    pre = check_covariance(t, r)
    if pre > tol:
        raise NotCovariantError(f"channel covariance residual {pre:.3e} exceeds {tol:.1e}")
    dil = dilate(t)
    mixing = kraus_mixing_matrices(dil.kraus(), r, tol)
    ancilla = tuple(nm.polar_unitary(m) for m in mixing)
    res = intertwining_residual(dil.isometry_v, r, ancilla)
    if res > tol:
        raise NoAncillaRepError(f"intertwining residual {res:.3e} exceeds {tol:.1e}")
    anc_rep = GroupRep(ancilla, r.mult)
    return CovariantDilation(dil, anc_rep, res, cocycle_residual(ancilla, r.mult),
                             tuple(mixing))
