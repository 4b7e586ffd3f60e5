"""Dense complex linear algebra shared by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Vectorization is row-major throughout: ``vec(X) = X.reshape(-1)`` so that
``vec(A @ X @ B) == kron(A, B.T) @ vec(X)``.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DimensionError, NonHermitianError

HERMITIAN_TOL = 1e-10


def as_matrix(m, *, square: bool = False) -> np.ndarray:
    """Coerce ``m`` to a finite 2-d complex array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dag(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x).reshape(-1)


def unvec(v: np.ndarray, d: int | None = None) -> np.ndarray:
    v = np.asarray(v)
    if d is None:
        d = int(round(np.sqrt(v.size)))
    return v.reshape(d, -1)


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def matrix_units(d: int):
    """Yield ``(i, j, E_ij)`` for the standard basis of d x d matrices."""
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[i, j] = 1.0
            yield i, j, e


def partial_trace(m, dim_a: int, dim_b: int, keep: str = "A") -> np.ndarray:
    """Trace out one factor of a bipartite operator on C^dimA (x) C^dimB."""
    m = as_matrix(m, square=True)
    if m.shape[0] != dim_a * dim_b:
        raise DimensionError(
            f"matrix of size {m.shape[0]} does not split as {dim_a} x {dim_b}")
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    keep = keep.upper()
    if keep == "A":
        return np.einsum("ibjb->ij", t)
    if keep == "B":
        return np.einsum("aiaj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def hermitize(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return (h + h*)/2, refusing matrices that are not Hermitian to ``tol``.

    The tolerance is relative to max(1, ||h||_F).
    """
    h = as_matrix(h, square=True)
    skew = np.linalg.norm(h - dag(h))
    if skew > tol * max(1.0, np.linalg.norm(h)):
        raise NonHermitianError(f"matrix is not Hermitian (||h - h*|| = {skew:.3e})")
    return 0.5 * (h + dag(h))


def herm_eig(h, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix with eigenvalues descending.

    Within a degenerate cluster the eigenvectors are an arbitrary orthonormal
    basis of the eigenspace.
    """
    w, v = np.linalg.eigh(hermitize(h, tol))
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def expm(m) -> np.ndarray:
    """Matrix exponential (Pade scaling and squaring, via scipy)."""
    return scipy.linalg.expm(as_matrix(m, square=True))


def random_isometry(n: int, m: int, seed=None) -> np.ndarray:
    """Seeded Haar-like isometry C^n -> C^m as an m x n matrix with W*W = I.

    ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    if m < n:
        raise DimensionError(f"isometry needs m >= n, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    q, r = np.linalg.qr(g)
    # fix the column phases so the result is a function of the sample only
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases[np.newaxis, :]


def random_unitary(n: int, seed=None) -> np.ndarray:
    return random_isometry(n, n, seed)


def random_hermitian(n: int, seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + dag(a))


def null_space(m, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (as columns) of the kernel of ``m``.

    A direction counts as kernel when its singular value is below
    ``tol * sigma_max``. The zero matrix has the full space as kernel.
    """
    m = as_matrix(m)
    ncols = m.shape[1]
    if m.size == 0 or not np.any(m):
        return np.eye(ncols, dtype=np.complex128)
    _, s, vh = np.linalg.svd(m)
    s_full = np.zeros(ncols)
    s_full[: s.size] = s
    mask = s_full <= tol * s_full.max()
    return dag(vh)[:, mask]


def polar_unitary(g) -> np.ndarray:
    """Unitary factor of the polar decomposition g = W P."""
    u, _, vh = np.linalg.svd(as_matrix(g, square=True))
    return u @ vh


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = as_matrix(u, square=True)
    return np.linalg.norm(dag(u) @ u - np.eye(u.shape[0])) < tol


def matrix_to_json(m) -> dict:
    m = as_matrix(m)
    flat = m.reshape(-1)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if len(data) != rows * cols:
        raise ValueError(f"matrix JSON has {len(data)} entries, expected {rows * cols}")
    arr = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    return as_matrix(arr.reshape(rows, cols))


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=np.complex128)
PAULI = (np.eye(2, dtype=np.complex128), SIGMA_X, SIGMA_Y, SIGMA_Z)
