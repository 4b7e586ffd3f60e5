"""Light-cone side of the construction at desk scale.

Signature (+, -, -, -). SL(2, C) covers the proper orthochronous Lorentz
group through h sigma(p) h^* = sigma(delta(h) p) with
sigma(p) = p0 1 + p1 sigma_x + p2 sigma_y + p3 sigma_z.

Gamma matrices are in the chiral (Weyl) basis,

    gamma^0 = [[0, 1], [1, 0]],  gamma^k = [[0, sigma_k], [-sigma_k, 0]],
    chirality = diag(-1_2, 1_2),

and the fiber condition is (p_slash - m) v = 0 with
p_slash = p0 gamma^0 - p1 gamma^1 - p2 gamma^2 - p3 gamma^3.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numerics as nm
from .errors import OffOrbitError

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
_SIGMAS = (nm.PAULI[0], nm.SIGMA_X, nm.SIGMA_Y, nm.SIGMA_Z)

ORBIT_TOL = 1e-9


def minkowski_form(k, g) -> float:
    k, g = np.asarray(k, dtype=float), np.asarray(g, dtype=float)
    return float(k[0] * g[0] - k[1] * g[1] - k[2] * g[2] - k[3] * g[3])


def minkowski_rows(k: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Row-wise pairing of two (N, 4) arrays."""
    return k[..., 0] * g[..., 0] - np.sum(k[..., 1:] * g[..., 1:], axis=-1)


def sigma_of(p) -> np.ndarray:
    return sum(c * s for c, s in zip(np.asarray(p, dtype=float), _SIGMAS))


@dataclass(frozen=True)
class LorentzElement:
    sl2c: np.ndarray
    lorentz4: np.ndarray

    @classmethod
    def from_sl2c(cls, h) -> "LorentzElement":
        return sl2c_to_lorentz(h)

    @classmethod
    def identity(cls) -> "LorentzElement":
        return cls(np.eye(2, dtype=np.complex128), np.eye(4))

    def __matmul__(self, other: "LorentzElement") -> "LorentzElement":
        return LorentzElement(self.sl2c @ other.sl2c, self.lorentz4 @ other.lorentz4)

    def inverse(self) -> "LorentzElement":
        return LorentzElement(np.linalg.inv(self.sl2c), ETA @ self.lorentz4.T @ ETA)

    def spinor_factor(self) -> np.ndarray:
        """S(h^{*-1}) = (h^*)^{-1}, the action on a 2-component fiber."""
        return np.linalg.inv(nm.dag(self.sl2c))

    def act(self, p) -> np.ndarray:
        return np.asarray(p, dtype=float) @ self.lorentz4.T


def sl2c_to_lorentz(h) -> LorentzElement:
    """delta(h)[mu, nu] = tr(sigma_mu h sigma_nu h^*) / 2."""
    h = nm.as_matrix(h, square=True)
    if h.shape != (2, 2):
        raise ValueError("SL(2,C) element must be 2 x 2")
    det = np.linalg.det(h)
    if abs(det - 1.0) > 1e-10:
        raise ValueError(f"det h = {det:.6g}, expected 1")
    hd = nm.dag(h)
    lam = np.empty((4, 4))
    for mu in range(4):
        for nu in range(4):
            lam[mu, nu] = 0.5 * np.trace(_SIGMAS[mu] @ h @ _SIGMAS[nu] @ hd).real
    return LorentzElement(h, lam)


def _unit(axis) -> np.ndarray:
    n = np.asarray(axis, dtype=float)
    return n / np.linalg.norm(n)


def rotation(axis, angle: float) -> LorentzElement:
    n = _unit(axis)
    gen = sum(c * s for c, s in zip(n, _SIGMAS[1:]))
    return sl2c_to_lorentz(nm.expm(-0.5j * angle * gen))


def boost(axis, rapidity: float) -> LorentzElement:
    n = _unit(axis)
    gen = sum(c * s for c, s in zip(n, _SIGMAS[1:]))
    return sl2c_to_lorentz(nm.expm(0.5 * rapidity * gen))


def random_lorentz(rng: np.random.Generator, max_rapidity: float = 2.0) -> LorentzElement:
    """Rotation about a random axis followed by a boost of rapidity <= max_rapidity."""
    rot = rotation(rng.normal(size=3), rng.uniform(0, 2 * np.pi))
    bst = boost(rng.normal(size=3), rng.uniform(0, max_rapidity))
    return bst @ rot


def is_lorentz(L: LorentzElement, tol: float = 1e-9) -> bool:
    lam = L.lorentz4
    return (np.linalg.norm(lam.T @ ETA @ lam - ETA) < tol
            and lam[0, 0] > 0 and np.linalg.det(lam) > 0)


@dataclass(frozen=True)
class DualActionResiduals:
    pairing: float
    character: float


def dual_action_check(L: LorentzElement, x, p) -> DualActionResiduals:
    """|{Lx, Lp} - {x, p}| and |exp(i{p, L^-1 x}) - exp(i{Lp, x})|."""
    lx, lp = L.act(x), L.act(p)
    linv_x = L.inverse().act(x)
    pairing = abs(minkowski_form(lx, lp) - minkowski_form(x, p))
    char = abs(np.exp(1j * minkowski_form(p, linv_x)) - np.exp(1j * minkowski_form(lp, x)))
    return DualActionResiduals(pairing, float(char))


@dataclass(frozen=True)
class PoincareElement:
    h: LorentzElement
    a: np.ndarray

    @classmethod
    def identity(cls) -> "PoincareElement":
        return cls(LorentzElement.identity(), np.zeros(4))

    @classmethod
    def translation(cls, a) -> "PoincareElement":
        return cls(LorentzElement.identity(), np.asarray(a, dtype=float))

    def distance(self, other: "PoincareElement") -> float:
        return float(max(np.linalg.norm(self.h.lorentz4 - other.h.lorentz4),
                         np.linalg.norm(self.a - other.a)))


def poincare_compose(g1: PoincareElement, g2: PoincareElement) -> PoincareElement:
    """(h1, a1)(h2, a2) = (h1 h2, a1 + delta(h1) a2)."""
    return PoincareElement(g1.h @ g2.h, g1.a + g1.h.act(g2.a))


def poincare_inverse(g: PoincareElement) -> PoincareElement:
    hinv = g.h.inverse()
    return PoincareElement(hinv, -hinv.act(g.a))


def orbit_membership(p, mass: float = 0.0, kind: str = "light-like") -> bool:
    """Membership in the forward light cone (kind='light-like', mass ignored),
    the forward mass hyperboloid (kind='massive') or the space-like
    hyperboloid p^2 = -m^2 (kind='space-like')."""
    p = np.asarray(p, dtype=float)
    sq = minkowski_form(p, p)
    tol = ORBIT_TOL * max(1.0, float(np.dot(p, p)))
    if kind == "light-like":
        return abs(sq) < tol and p[0] > 0
    if kind == "massive":
        return abs(sq - mass ** 2) < tol and p[0] > 0
    if kind == "space-like":
        return abs(sq + mass ** 2) < tol
    raise ValueError(f"unknown orbit kind {kind!r}")


def inverse_square_density(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return 1.0 / (2.0 * np.sum(p[..., 1:] ** 2, axis=-1))


def standard_density(p) -> np.ndarray:
    return 1.0 / (2.0 * np.asarray(p, dtype=float)[..., 0])


DENSITIES: dict[str, Callable] = {
    "inverse_square": inverse_square_density,
    "standard": standard_density,
}


def measure_weight(p) -> tuple[float, float]:
    """(1 / (2 |p|^2), 1 / (2 p0)) at a forward cone point away from the tip."""
    p = np.asarray(p, dtype=float)
    if np.linalg.norm(p[1:]) == 0.0:
        raise ValueError("measure density is singular at the cone tip")
    return float(inverse_square_density(p)), float(standard_density(p))


def on_shell(spatial: np.ndarray, mass: float = 0.0) -> np.ndarray:
    spatial = np.atleast_2d(spatial)
    p0 = np.sqrt(np.sum(spatial ** 2, axis=1) + mass ** 2)
    return np.column_stack([p0, spatial])


def random_cone_points(rng: np.random.Generator, n: int, r_min: float = 0.2,
                       r_max: float = 3.0) -> np.ndarray:
    dirs = rng.normal(size=(n, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return on_shell(dirs * rng.uniform(r_min, r_max, size=(n, 1)))


def _cone_jacobian(L: LorentzElement, k: np.ndarray, mass: float, rel_step: float) -> float:
    """|det d(Lp)_spatial / dp_spatial| by central differences on the orbit."""
    step = rel_step * max(np.linalg.norm(k), 1e-300)
    jac = np.empty((3, 3))
    for c in range(3):
        dk = np.zeros(3)
        dk[c] = step
        hi = L.act(on_shell(k + dk, mass)[0])[1:]
        lo = L.act(on_shell(k - dk, mass)[0])[1:]
        jac[:, c] = (hi - lo) / (2 * step)
    return abs(np.linalg.det(jac))


def measure_invariance_check(L: LorentzElement, density: str = "standard",
                             sample_points=None, rng_seed: int = 0, n_samples: int = 64,
                             rel_step: float = 1e-5) -> float:
    """Max relative change-of-variables defect |rho(Lp) J(p) - rho(p)| / rho(p).

    Zero (up to differencing error) exactly when rho d^3p is invariant.
    """
    rho = DENSITIES[density]
    if sample_points is None:
        sample_points = random_cone_points(np.random.default_rng(rng_seed), n_samples)
    worst = 0.0
    for p in np.atleast_2d(sample_points):
        lp = L.act(p)
        j = _cone_jacobian(L, p[1:], 0.0, rel_step)
        base = rho(p)
        worst = max(worst, float(abs(rho(lp) * j - base) / base))
    return worst


@dataclass(frozen=True)
class OrbitGrid:
    """Quadrature on the forward orbit in spherical momentum coordinates.

    Radial and polar (cos theta) nodes are Gauss-Legendre, azimuthal nodes
    are the uniform angles 2 pi k / n_azimuth, so rotations about z by
    multiples of 2 pi / n_azimuth permute the grid.
    """

    mass: float
    points: np.ndarray
    weights: np.ndarray
    density: str = "standard"
    shape: tuple = field(default=())

    def to_json(self) -> dict:
        return {"mass": self.mass, "density": self.density,
                "points": self.points.tolist(), "weights": self.weights.tolist()}


def build_orbit_grid(n_radial: int, n_angular: int, r_min: float, r_max: float,
                     density: str = "standard", mass: float = 0.0) -> OrbitGrid:
    """Product grid with n_radial radii, n_angular azimuths and n_angular // 2
    polar nodes; weight = density x r^2 dr dcos(theta) dphi."""
    if not 0 < r_min < r_max:
        raise ValueError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
    if n_radial < 1 or n_angular < 2:
        raise ValueError("grid needs n_radial >= 1 and n_angular >= 2")
    n_polar = max(1, n_angular // 2)
    xr, wr = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * (r_max - r_min) * xr + 0.5 * (r_max + r_min)
    wr = 0.5 * (r_max - r_min) * wr
    ct, wct = np.polynomial.legendre.leggauss(n_polar)
    phi = 2 * np.pi * np.arange(n_angular) / n_angular
    wphi = np.full(n_angular, 2 * np.pi / n_angular)

    R, CT, PHI = np.meshgrid(r, ct, phi, indexing="ij")
    WR, WCT, WPHI = np.meshgrid(wr, wct, wphi, indexing="ij")
    st = np.sqrt(1 - CT ** 2)
    spatial = np.stack([R * st * np.cos(PHI), R * st * np.sin(PHI), R * CT], axis=-1)
    pts = on_shell(spatial.reshape(-1, 3), mass)
    vol = (R ** 2 * WR * WCT * WPHI).reshape(-1)
    w = DENSITIES[density](pts) * vol
    return OrbitGrid(mass, pts, w, density, (n_radial, n_polar, n_angular))


Sampler = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SectionState:
    """A section stored as an evaluable sampler plus its values on the grid.

    ``sampler`` maps an (N, 4) array of momenta to (N, f) fiber values.
    """

    grid: OrbitGrid
    sampler: Sampler
    values: np.ndarray

    @property
    def fiber_dim(self) -> int:
        return self.values.shape[1]


def make_section(grid: OrbitGrid, sampler: Sampler) -> SectionState:
    vals = np.asarray(sampler(grid.points), dtype=np.complex128)
    if vals.ndim == 1:
        vals = vals[:, None]
        base = sampler
        sampler = lambda p: np.asarray(base(p), dtype=np.complex128)[:, None]  # noqa: E731
    return SectionState(grid, sampler, vals)


def induced_rep_apply(g: PoincareElement, phi: SectionState,
                      tol: float = 1e-8) -> SectionState:
    """(U_{h,x} phi)(p) = exp(i {x, p}) S(h^{*-1}) phi(delta(h)^{-1} p).

    Two-component fibers carry the spinor factor; one-component (scalar)
    fibers carry only the phase and the pull-back.
    """
    hinv = g.h.inverse()
    spin = g.h.spinor_factor()
    x = np.asarray(g.a, dtype=float)
    mass = phi.grid.mass
    inner = phi.sampler
    fdim = phi.fiber_dim
    if fdim not in (1, 2):
        raise ValueError(f"unsupported fiber dimension {fdim}")

    def sampler(p: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(p)
        q = p @ hinv.lorentz4.T
        shell = np.abs(minkowski_rows(q, q) - mass ** 2) / np.maximum(1.0, q[:, 0] ** 2)
        if np.any(shell > tol) or np.any(q[:, 0] <= 0):
            raise OffOrbitError(f"pull-back left the orbit (defect {shell.max():.3e})")
        vals = inner(q)
        if fdim == 2:
            vals = vals @ spin.T
        return np.exp(1j * minkowski_rows(np.broadcast_to(x, p.shape), p))[:, None] * vals

    return SectionState(phi.grid, sampler, sampler(phi.grid.points))


def section_norm(phi: SectionState) -> float:
    """Squared norm sum_p w(p) p0^{-1} <phi(p), phi(p)>."""
    g = phi.grid
    inner = np.sum(np.abs(phi.values) ** 2, axis=1)
    return float(np.sum(g.weights * inner / g.points[:, 0]))


def stabilizer_check(h: LorentzElement, p_ref=(1.0, 0.0, 0.0, 1.0)) -> float:
    p_ref = np.asarray(p_ref, dtype=float)
    return float(np.linalg.norm(h.act(p_ref) - p_ref))


def gamma_matrices() -> tuple[np.ndarray, ...]:
    zero = np.zeros((2, 2))
    g0 = np.block([[zero, nm.PAULI[0]], [nm.PAULI[0], zero]])
    gk = [np.block([[zero, s], [-s, zero]]) for s in _SIGMAS[1:]]
    return (g0.astype(np.complex128), *gk)


def chirality_operator() -> np.ndarray:
    return np.diag([-1.0, -1.0, 1.0, 1.0]).astype(np.complex128)


def slash(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    g = gamma_matrices()
    return p[0] * g[0] - p[1] * g[1] - p[2] * g[2] - p[3] * g[3]


def fiber_space(p, mass: float = 0.0, chirality: str | None = None,
                tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (columns) of {v : (p_slash - m) v = 0}, optionally
    intersected with the chirality eigenspace (``'minus'``: Gamma v = -v,
    ``'plus'``: Gamma v = +v). An empty space has shape (4, 0)."""
    eqs = [slash(p) - mass * np.eye(4)]
    if chirality in ("plus", "minus"):
        sign = 1.0 if chirality == "plus" else -1.0
        eqs.append(chirality_operator() - sign * np.eye(4))
    elif chirality not in (None, "none"):
        raise ValueError(f"unknown chirality {chirality!r}")
    stacked = np.vstack(eqs)
    return nm.null_space(stacked, tol)


def grid_from_json(obj) -> OrbitGrid:
    pts = np.asarray(obj["points"], dtype=float)
    return OrbitGrid(float(obj["mass"]), pts, np.asarray(obj["weights"], dtype=float),
                     obj.get("density", "standard"))
