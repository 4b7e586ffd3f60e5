"""Stinespring dilation of unital CP maps in finite dimension.

The dilation isometry is assembled directly from a minimal Kraus set:
``V u = (+)_j L_j u`` with the system leg first, so row ``a * k + j`` of V
is row ``a`` of ``L_j`` and ``V^* (X (x) 1_k) V = sum_j L_j^* X L_j``.
The abstract positive-definite kernel is kept as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from . import numerics as nm
from .channels import (QuantumChannel, apply_heisenberg, choi_matrix,
                       kraus_from_choi, kraus_sum)
from .errors import DimensionError, NotUnitalError

HeisenbergMap = Union[QuantumChannel, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class DilationResult:
    isometry_v: np.ndarray
    ancilla_dim: int
    residual: float

    @property
    def dim(self) -> int:
        return self.isometry_v.shape[1]

    def kraus(self) -> list[np.ndarray]:
        d, k = self.dim, self.ancilla_dim
        blocks = self.isometry_v.reshape(d, k, d)
        return [blocks[:, j, :] for j in range(k)]

    def to_json(self) -> dict:
        return {"ancilla_dim": self.ancilla_dim,
                "isometry": nm.matrix_to_json(self.isometry_v),
                "residual": self.residual}


@dataclass(frozen=True)
class KernelSample:
    x: np.ndarray
    y: np.ndarray
    u: np.ndarray


def _as_callable(t: HeisenbergMap):
    if isinstance(t, QuantumChannel):
        return lambda x: apply_heisenberg(t, x)
    return t


def kernel_gram(t: HeisenbergMap, samples: Sequence[KernelSample]) -> np.ndarray:
    """G[i, j] = <u_i, Y_i^* T(X_i^* X_j) Y_j u_j>.

    ``t`` may be a channel or any linear Heisenberg map given as a callable,
    which is how non-CP maps are probed.
    """
    if not samples:
        raise ValueError("kernel_gram needs at least one sample")
    f = _as_callable(t)
    d = samples[0].x.shape[0]
    for s in samples:
        if s.x.shape != (d, d) or s.y.shape[1] != s.u.shape[0] or s.y.shape[0] != d:
            raise DimensionError("inconsistent kernel sample dimensions")
    n = len(samples)
    g = np.empty((n, n), dtype=np.complex128)
    yu = [s.y @ s.u for s in samples]
    for i, si in enumerate(samples):
        xi_star = nm.dag(si.x)
        for j, sj in enumerate(samples):
            g[i, j] = np.vdot(yu[i], f(xi_star @ sj.x) @ yu[j])
    return g


def random_kernel_samples(d: int, n: int, seed=None) -> list[KernelSample]:
    rng = np.random.default_rng(seed)

    def cg(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    return [KernelSample(cg(d, d), cg(d, d), cg(d)) for _ in range(n)]


def matrix_unit_samples(d: int) -> list[KernelSample]:
    """All triples (E_ab, 1, e_c): the witness set for non-CP maps."""
    eye = np.eye(d, dtype=np.complex128)
    return [KernelSample(e, eye, eye[:, c])
            for _, _, e in nm.matrix_units(d) for c in range(d)]


def kernel_witness(t: HeisenbergMap, d: int) -> float:
    """Smallest Gram eigenvalue over the matrix-unit sample set.

    Non-negative exactly when the map is completely positive.
    """
    g = kernel_gram(t, matrix_unit_samples(d))
    return float(np.linalg.eigvalsh(nm.hermitize(g))[0])


def isometry_from_kraus(kraus: Sequence[np.ndarray]) -> np.ndarray:
    ks = np.asarray(kraus)
    k, d, _ = ks.shape
    return ks.transpose(1, 0, 2).reshape(d * k, d)


def dilate(t: QuantumChannel) -> DilationResult:
    """Minimal Stinespring isometry for a CP unital Heisenberg map.

    Raises NotCPError (from the Kraus extraction) or NotUnitalError.
    """
    t = t.heisenberg()
    unital_res = np.linalg.norm(kraus_sum(t) - np.eye(t.dim))
    if unital_res > 1e-10:
        raise NotUnitalError(f"sum L*L differs from identity by {unital_res:.3e}")
    minimal = kraus_from_choi(choi_matrix(t))
    v = isometry_from_kraus(minimal.kraus)
    partial = DilationResult(v, minimal.num_kraus, 0.0)
    return DilationResult(v, minimal.num_kraus, reconstruction_residual(t, partial))


def reconstruction_residual(t: HeisenbergMap, dil: DilationResult) -> float:
    f = _as_callable(t)
    v, k = dil.isometry_v, dil.ancilla_dim
    eye_k = np.eye(k)
    worst = 0.0
    for _, _, e in nm.matrix_units(dil.dim):
        r = f(e) - nm.dag(v) @ np.kron(e, eye_k) @ v
        worst = max(worst, float(np.linalg.norm(r)))
    return worst


def totality_rank(dil: DilationResult, tol: float = 1e-10) -> int:
    """Rank of span{(X (x) 1) V u} over matrix units X and basis vectors u."""
    d, k, v = dil.dim, dil.ancilla_dim, dil.isometry_v
    eye_k = np.eye(k)
    cols = [np.kron(e, eye_k) @ v for _, _, e in nm.matrix_units(d)]
    span = np.hstack(cols)
    s = np.linalg.svd(span, compute_uv=False)
    return int(np.sum(s > tol * s[0]))


def verify_dilation(t: HeisenbergMap, dil: DilationResult) -> float:
    """Max Frobenius residual of T(X) - V^*(X (x) 1)V over matrix units."""
    if isinstance(t, QuantumChannel) and t.dim != dil.dim:
        raise DimensionError("channel and dilation dimensions differ")
    return reconstruction_residual(t, dil)


def system_bath_embedding(u, v, basis_f) -> np.ndarray:
    """W(u (x) v) = (+)_i <f_i, v> u.

    ``basis_f`` holds an orthonormal basis (as columns) of the space ``v``
    lives in; the output is the direct sum of ``len(basis)`` copies of the
    system space, block i carrying ``<f_i, v> u``.
    """
    u = np.asarray(u, dtype=np.complex128).reshape(-1)
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    f = nm.as_matrix(basis_f, square=True)
    if f.shape[0] != v.size:
        raise DimensionError(f"basis of size {f.shape[0]} for a vector of size {v.size}")
    if np.linalg.norm(nm.dag(f) @ f - np.eye(f.shape[1])) > 1e-12:
        raise ValueError("basis_f is not orthonormal")
    coeffs = nm.dag(f) @ v
    return np.concatenate([c * u for c in coeffs])


def dilation_from_json(obj) -> DilationResult:
    v = nm.matrix_from_json(obj["isometry"])
    return DilationResult(v, int(obj["ancilla_dim"]), float(obj["residual"]))
