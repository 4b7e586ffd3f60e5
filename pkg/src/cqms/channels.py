"""Completely positive maps in Kraus, Choi and superoperator form.

Channels are stored in the Heisenberg picture, ``T(X) = sum_j L_j^* X L_j``.
The Schrodinger adjoint ``rho -> sum_j L_j rho L_j^*`` is derived on demand.

Choi convention (row-major, bit-exact)::

    C = sum_{i,j} E_ij (x) Phi_S(E_ij),    C[(i, a), (j, b)] = Phi_S(E_ij)[a, b]

so a single Kraus operator L contributes |psi><psi| with
``psi[i * d + a] = L[a, i]``, i.e. ``psi = vec(L.T)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import numerics as nm
from .errors import DimensionError, NotCPError

HEISENBERG = "heisenberg"
SCHRODINGER = "schrodinger"

UNITAL_TOL = 1e-10
CP_TOL = 1e-10


@dataclass(frozen=True)
class QuantumChannel:
    """A square channel given by its Kraus operators ``L_j``."""

    dim: int
    kraus: tuple[np.ndarray, ...]
    picture: str = HEISENBERG

    def __post_init__(self):
        ops = tuple(nm.as_matrix(k, square=True) for k in self.kraus)
        for k in ops:
            if k.shape != (self.dim, self.dim):
                raise DimensionError(
                    f"Kraus operator of shape {k.shape} in a dim-{self.dim} channel")
        if self.picture not in (HEISENBERG, SCHRODINGER):
            raise ValueError(f"unknown picture {self.picture!r}")
        object.__setattr__(self, "kraus", ops)

    @classmethod
    def from_kraus(cls, kraus: Sequence, picture: str = HEISENBERG) -> "QuantumChannel":
        kraus = [nm.as_matrix(k, square=True) for k in kraus]
        if not kraus:
            raise ValueError("a channel needs at least one Kraus operator")
        return cls(kraus[0].shape[0], tuple(kraus), picture)

    @classmethod
    def identity(cls, d: int) -> "QuantumChannel":
        return cls(d, (np.eye(d, dtype=np.complex128),))

    @property
    def num_kraus(self) -> int:
        return len(self.kraus)

    def heisenberg(self) -> "QuantumChannel":
        if self.picture == HEISENBERG:
            return self
        return QuantumChannel(self.dim, tuple(nm.dag(k) for k in self.kraus), HEISENBERG)

    def heisenberg_kraus(self) -> tuple[np.ndarray, ...]:
        """The ``L_j`` with T(X) = sum L_j^* X L_j, whatever the stored picture."""
        return self.heisenberg().kraus

    def __call__(self, x) -> np.ndarray:
        return apply_heisenberg(self, x)


def _same_dims(x: np.ndarray, d: int):
    if x.shape != (d, d):
        raise DimensionError(f"operator of shape {x.shape} on a dim-{d} channel")


def apply_heisenberg(t: QuantumChannel, x) -> np.ndarray:
    """T(X) = sum_j L_j^* X L_j."""
    x = nm.as_matrix(x)
    _same_dims(x, t.dim)
    ks = np.asarray(t.heisenberg_kraus())
    return np.einsum("jba,bc,jcd->ad", ks.conj(), x, ks)


def apply_schrodinger(t: QuantumChannel, rho) -> np.ndarray:
    """Phi_S(rho) = sum_j L_j rho L_j^*, the predual of ``apply_heisenberg``."""
    rho = nm.as_matrix(rho)
    _same_dims(rho, t.dim)
    ks = np.asarray(t.heisenberg_kraus())
    return np.einsum("jab,bc,jdc->ad", ks, rho, ks.conj())


@dataclass(frozen=True)
class ChoiMatrix:
    dim: int
    matrix: np.ndarray

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(nm.hermitize(self.matrix))[0])


def choi_matrix(t: QuantumChannel) -> ChoiMatrix:
    ks = t.heisenberg_kraus()
    psi = np.stack([k.T.reshape(-1) for k in ks], axis=1)
    return ChoiMatrix(t.dim, psi @ nm.dag(psi))


def choi_from_map(heisenberg_map: Callable[[np.ndarray], np.ndarray], d: int) -> ChoiMatrix:
    """Choi matrix of an arbitrary linear Heisenberg-picture map.

    Works for maps that are not CP (e.g. the transpose), which have no
    Kraus form. The Schrodinger adjoint is obtained from the Hilbert-Schmidt
    duality ``<Phi_S(E_ij), E_ab> = <E_ij, T(E_ab)>``.
    """
    s_heis = np.empty((d * d, d * d), dtype=np.complex128)
    for a, b, e in nm.matrix_units(d):
        s_heis[:, a * d + b] = nm.vec(heisenberg_map(e))
    s_schr = nm.dag(s_heis)
    # s_schr[(a, b), (i, j)] = Phi_S(E_ij)[a, b]  ->  C[(i, a), (j, b)]
    c = s_schr.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d * d, d * d)
    return ChoiMatrix(d, c)


def _phase_normalize(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    idx = np.flatnonzero(np.abs(v) > tol * max(1.0, np.abs(v).max()))
    if idx.size == 0:
        return v
    z = v[idx[0]]
    return v * (abs(z) / z)


def kraus_from_choi(c: ChoiMatrix, tol: float | None = None) -> QuantumChannel:
    """Minimal Kraus set from the eigen-decomposition of a Choi matrix.

    Operators come out ordered by descending Choi eigenvalue. Inside a
    degenerate cluster ties are broken lexicographically on the
    phase-normalized eigenvector, which keeps output deterministic even
    though the Kraus list itself is only defined up to unitary mixing.
    ``tol`` defaults to ``1e-12 * lambda_max``; the NotCP threshold is
    ``max(tol, CP_TOL)``.
    """
    d = c.dim
    w, v = nm.herm_eig(c.matrix)
    lam_max = max(float(w[0]), 0.0)
    if tol is None:
        tol = 1e-12 * lam_max
    neg_tol = max(tol, CP_TOL * max(1.0, lam_max))
    if w[-1] < -neg_tol:
        raise NotCPError(f"Choi matrix has eigenvalue {w[-1]:.3e} < 0")
    keep = [i for i in range(w.size) if w[i] > tol]
    if not keep:
        return QuantumChannel(d, (np.zeros((d, d), dtype=np.complex128),))
    vecs = [_phase_normalize(v[:, i]) for i in keep]
    scale = max(1.0, lam_max)

    def key(i):
        vv = vecs[i]
        parts = np.round(np.column_stack([vv.real, vv.imag]).reshape(-1), 10)
        return (-round(w[keep[i]] / scale, 9), tuple(-parts))

    order = sorted(range(len(keep)), key=key)
    kraus = tuple(np.sqrt(w[keep[i]]) * vecs[i].reshape(d, d).T for i in order)
    return QuantumChannel(d, kraus)


def choi_distance(a, b) -> float:
    ca = a.matrix if isinstance(a, ChoiMatrix) else choi_matrix(a).matrix
    cb = b.matrix if isinstance(b, ChoiMatrix) else choi_matrix(b).matrix
    return float(np.linalg.norm(ca - cb))


def kraus_sum(t: QuantumChannel) -> np.ndarray:
    ks = np.asarray(t.heisenberg_kraus())
    return np.einsum("jba,jbc->ac", ks.conj(), ks)


@dataclass
class ChannelReport:
    cp: bool
    unital: bool
    trace_preserving_adjoint: bool
    residuals: dict = field(default_factory=dict)


def validate_channel(t: QuantumChannel) -> ChannelReport:
    """Check complete positivity (Choi PSD) and unitality (sum L*L = I).

    For a Heisenberg map unitality is the same statement as trace
    preservation of its Schrodinger adjoint, so both flags agree.
    """
    c = choi_matrix(t)
    lam_min = c.min_eigenvalue()
    unital_res = float(np.linalg.norm(kraus_sum(t) - np.eye(t.dim)))
    herm_res = float(np.linalg.norm(c.matrix - nm.dag(c.matrix)))
    cp = lam_min >= -CP_TOL * max(1.0, np.linalg.norm(c.matrix, 2))
    return ChannelReport(
        cp=bool(cp),
        unital=unital_res < UNITAL_TOL,
        trace_preserving_adjoint=unital_res < UNITAL_TOL,
        residuals={"choi_min_eigenvalue": lam_min, "unital": unital_res,
                   "choi_hermiticity": herm_res},
    )


def compose(t1: QuantumChannel, t2: QuantumChannel) -> QuantumChannel:
    """Kraus set {L_i M_j}: the map X -> T1(T2(X)) in the Heisenberg picture.

    With T1 = sum L* . L and T2 = sum M* . M, T1(T2(X)) = sum (M L)* X (M L),
    so the Heisenberg Kraus operators of the composite are M_j L_i.
    """
    if t1.dim != t2.dim:
        raise DimensionError(f"cannot compose dims {t1.dim} and {t2.dim}")
    if t1.picture != t2.picture:
        raise ValueError("cannot compose channels stored in different pictures")
    a, b = t1.heisenberg_kraus(), t2.heisenberg_kraus()
    kraus = tuple(m @ l for l in a for m in b)
    return QuantumChannel(t1.dim, kraus)


def random_unital_cp(d: int, k: int, seed=None) -> QuantumChannel:
    """k Kraus blocks sliced from a random isometry C^d -> C^d (x) C^k.

    Rows of the isometry are indexed system-first, ``(a, j) -> a * k + j``.
    """
    if k < 1:
        raise ValueError(f"need at least one Kraus operator, got k={k}")
    v = nm.random_isometry(d, d * k, seed).reshape(d, k, d)
    return QuantumChannel(d, tuple(v[:, j, :] for j in range(k)))


def unitary_channel(u) -> QuantumChannel:
    return QuantumChannel.from_kraus([u])


def dephasing(d: int = 2) -> QuantumChannel:
    kraus = []
    for i in range(d):
        p = np.zeros((d, d), dtype=np.complex128)
        p[i, i] = 1.0
        kraus.append(p)
    return QuantumChannel(d, tuple(kraus))


def depolarizing(p: float) -> QuantumChannel:
    """Qubit depolarizing channel X -> (1 - p) X + p tr(X)/2 I."""
    w = [np.sqrt(1 - 3 * p / 4)] + [np.sqrt(p / 4)] * 3
    return QuantumChannel(2, tuple(c * s for c, s in zip(w, nm.PAULI)))


def transpose_map(x: np.ndarray) -> np.ndarray:
    """The transpose: positive and unital but not completely positive."""
    return np.asarray(x).T.copy()


def channel_to_json(t: QuantumChannel) -> dict:
    return {"dim": t.dim, "picture": t.picture,
            "kraus": [nm.matrix_to_json(k) for k in t.kraus]}


def channel_from_json(obj) -> QuantumChannel:
    try:
        kraus = [nm.matrix_from_json(k) for k in obj["kraus"]]
        picture = str(obj.get("picture", HEISENBERG)).lower()
        dim = int(obj["dim"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed channel JSON: {exc}") from exc
    return QuantumChannel(dim, tuple(kraus), picture)
