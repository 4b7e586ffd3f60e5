"""Lindblad generators and the quantum Markov semigroups they generate.

The generator is purely dissipative with one global rate:

    Theta(X) = -(lam/2) sum_j (L_j^* L_j X + X L_j^* L_j - 2 L_j^* X L_j)

Superoperators act on row-major vec(X); see ``numerics``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import numerics as nm
from .channels import ChoiMatrix, QuantumChannel, kraus_from_choi
from .covariance import GroupRep
from .errors import DimensionError

KERNEL_TOL = 1e-9


@dataclass(frozen=True)
class LindbladGenerator:
    dim: int
    jumps: tuple[np.ndarray, ...]
    rate: float = 1.0

    def __post_init__(self):
        jumps = tuple(nm.as_matrix(l, square=True) for l in self.jumps)
        for l in jumps:
            if l.shape != (self.dim, self.dim):
                raise DimensionError(f"jump of shape {l.shape} in a dim-{self.dim} generator")
        if not self.rate > 0:
            raise ValueError(f"rate must be positive, got {self.rate}")
        object.__setattr__(self, "jumps", jumps)

    @classmethod
    def from_jumps(cls, jumps: Sequence, rate: float = 1.0, dim: int | None = None):
        jumps = [nm.as_matrix(l, square=True) for l in jumps]
        if dim is None:
            if not jumps:
                raise ValueError("dim is required when there are no jumps")
            dim = jumps[0].shape[0]
        return cls(dim, tuple(jumps), rate)

    @classmethod
    def from_channel(cls, t: QuantumChannel, rate: float = 1.0):
        return cls(t.dim, t.heisenberg_kraus(), rate)

    def __call__(self, x) -> np.ndarray:
        return lindblad_apply(self, x)

    def to_json(self) -> dict:
        return {"dim": self.dim, "lambda": self.rate,
                "jumps": [nm.matrix_to_json(l) for l in self.jumps]}


def generator_from_json(obj) -> LindbladGenerator:
    jumps = [nm.matrix_from_json(m) for m in obj["jumps"]]
    return LindbladGenerator(int(obj["dim"]), tuple(jumps), float(obj.get("lambda", 1.0)))


@dataclass(frozen=True)
class Superoperator:
    """Heisenberg-picture map as a d^2 x d^2 matrix on row-major vec(X)."""

    dim: int
    matrix: np.ndarray

    def __call__(self, x) -> np.ndarray:
        x = nm.as_matrix(x)
        return (self.matrix @ nm.vec(x)).reshape(self.dim, self.dim)

    def __matmul__(self, other: "Superoperator") -> "Superoperator":
        return Superoperator(self.dim, self.matrix @ other.matrix)

    def choi(self) -> ChoiMatrix:
        d = self.dim
        # Schrodinger adjoint is the Hilbert-Schmidt adjoint of the matrix
        s = nm.dag(self.matrix).reshape(d, d, d, d)
        return ChoiMatrix(d, s.transpose(2, 0, 3, 1).reshape(d * d, d * d))

    def to_channel(self) -> QuantumChannel:
        return kraus_from_choi(self.choi())


def lindblad_apply(gen: LindbladGenerator, x) -> np.ndarray:
    x = nm.as_matrix(x)
    if x.shape != (gen.dim, gen.dim):
        raise DimensionError(f"operator of shape {x.shape} for a dim-{gen.dim} generator")
    out = np.zeros_like(x)
    for l in gen.jumps:
        ld = nm.dag(l)
        ll = ld @ l
        out += ll @ x + x @ ll - 2.0 * ld @ x @ l
    return -0.5 * gen.rate * out


def superop_matrix(gen: LindbladGenerator) -> Superoperator:
    d = gen.dim
    eye = np.eye(d)
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    for l in gen.jumps:
        ld = nm.dag(l)
        ll = ld @ l
        m += np.kron(ll, eye) + np.kron(eye, ll.T) - 2.0 * np.kron(ld, l.T)
    return Superoperator(d, -0.5 * gen.rate * m)


def evolve(gen: LindbladGenerator, t: float) -> Superoperator:
    """T_t = exp(t Theta) as a superoperator."""
    if t < 0:
        raise ValueError(f"evolution time must be non-negative, got {t}")
    return Superoperator(gen.dim, nm.expm(t * superop_matrix(gen).matrix))


def evolve_channel(gen: LindbladGenerator, t: float) -> QuantumChannel:
    return evolve(gen, t).to_channel()


def semigroup_residual(gen: LindbladGenerator, s: float, t: float) -> float:
    """||T_{s+t} - T_s T_t||_F."""
    lhs = evolve(gen, s + t).matrix
    rhs = evolve(gen, s).matrix @ evolve(gen, t).matrix
    return float(np.linalg.norm(lhs - rhs))


@dataclass(frozen=True)
class FixedPointSpace:
    dimension: int
    basis: list
    ergodic: bool


def fixed_point_space(gen: LindbladGenerator, tol: float = KERNEL_TOL) -> FixedPointSpace:
    """Kernel of Theta. Ergodic when it is one-dimensional (the scalars)."""
    ker = nm.null_space(superop_matrix(gen).matrix, tol)
    basis = [ker[:, i].reshape(gen.dim, gen.dim) for i in range(ker.shape[1])]
    return FixedPointSpace(len(basis), basis, len(basis) == 1)


def fixed_point_projector(gen: LindbladGenerator, tol: float = KERNEL_TOL) -> np.ndarray:
    """Spectral projection onto ker(Theta) along the range of Theta.

    Built from right and left kernel vectors, R (L^* R)^{-1} L^*; this is
    the limit of T_t as t -> infinity when the rest of the spectrum has
    negative real part.
    """
    m = superop_matrix(gen).matrix
    right = nm.null_space(m, tol)
    left = nm.null_space(nm.dag(m), tol)
    return right @ np.linalg.solve(nm.dag(left) @ right, nm.dag(left))


def choi_min_eigenvalue(s: Superoperator) -> float:
    return s.choi().min_eigenvalue()


def unital_residual(s: Superoperator) -> float:
    return float(np.linalg.norm(s(np.eye(s.dim)) - np.eye(s.dim)))


def generator_covariance_residual(gen: LindbladGenerator, r: GroupRep) -> float:
    """max_g max_{E_ab} ||Theta(U X U^*) - U Theta(X) U^*||_F."""
    worst = 0.0
    for u in r.unitaries:
        ud = nm.dag(u)
        for _, _, e in nm.matrix_units(gen.dim):
            diff = lindblad_apply(gen, u @ e @ ud) - u @ lindblad_apply(gen, e) @ ud
            worst = max(worst, float(np.linalg.norm(diff)))
    return worst


def superop_covariance_residual(s: Superoperator, r: GroupRep) -> float:
    worst = 0.0
    for u in r.unitaries:
        ud = nm.dag(u)
        for _, _, e in nm.matrix_units(s.dim):
            worst = max(worst, float(np.linalg.norm(s(u @ e @ ud) - u @ s(e) @ ud)))
    return worst


@dataclass(frozen=True)
class QMSCovariance:
    evolved: float
    generator: float


def qms_covariance_check(gen: LindbladGenerator, r: GroupRep,
                         times: Sequence[float]) -> QMSCovariance:
    if r.dim != gen.dim:
        raise DimensionError(f"generator dim {gen.dim} vs representation dim {r.dim}")
    evolved = max((superop_covariance_residual(evolve(gen, t), r) for t in times),
                  default=0.0)
    return QMSCovariance(evolved, generator_covariance_residual(gen, r))


def covariantize_jumps(jumps: Sequence[np.ndarray], r: GroupRep) -> list[np.ndarray]:
    """Union of the orbits {U_g L U_g^*}, dropping members equal to an earlier
    one up to a phase."""
    out: list[np.ndarray] = []
    for l in jumps:
        for u in r.unitaries:
            cand = u @ l @ nm.dag(u)
            scale = np.linalg.norm(cand)
            # parallel iff Cauchy-Schwarz is tight
            dup = any(abs(abs(np.vdot(prev, cand)) - np.linalg.norm(prev) * scale)
                      < 1e-10 * scale ** 2 for prev in out)
            if not dup:
                out.append(cand)
    return out


def amplitude_damping(rate: float = 1.0) -> LindbladGenerator:
    return LindbladGenerator(2, (nm.SIGMA_MINUS,), rate)
