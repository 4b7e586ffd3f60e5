import numpy as np
import pytest

from cqms import imprimitivity as im
from cqms import numerics as nm
from cqms.errors import NotEquivalentError, NotUnitaryError


def test_pauli_case():
    u, v = im.standard_weyl_pair(2)
    np.testing.assert_allclose(u, np.diag([1, -1]), atol=1e-15)
    np.testing.assert_array_equal(v, nm.SIGMA_X)
    np.testing.assert_allclose(u @ v, -v @ u, atol=1e-15)


def test_n3_direct_multiplication():
    u, v = im.standard_weyl_pair(3)
    w = np.exp(2j * np.pi / 3)
    assert np.linalg.norm(u @ v - w * v @ u) < 1e-12
    # shift direction e_j -> e_{j+1}
    np.testing.assert_array_equal(v @ np.eye(3)[:, 2], np.eye(3)[:, 0])


@pytest.mark.parametrize("n", range(2, 17))
def test_weyl_relations(n):
    u, v = im.standard_weyl_pair(n)
    assert nm.is_unitary(u, 1e-13) and nm.is_unitary(v, 1e-13)
    assert max(im.weyl_residuals(u, v, n).values()) < 1e-12


def test_weyl_pair_rejects_small_n():
    with pytest.raises(ValueError):
        im.standard_weyl_pair(1)


def test_canonical_si_qubit():
    si = im.canonical_si(2, 1)
    np.testing.assert_array_equal(si.pvm.projections[0], np.diag([1, 0]))
    np.testing.assert_array_equal(si.pvm.projections[1], np.diag([0, 1]))
    assert im.verify_si(si) == 0.0
    # induced from the trivial subgroup: the action is regular, one orbit
    assert im.action_orbits(2, [1]) == [[0, 1]]


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("mult", [1, 2, 3])
def test_canonical_si_invariants(n, mult):
    si = im.canonical_si(n, mult)
    assert si.dim == n * mult
    assert im.verify_si(si) < 1e-12
    assert im.representation_residual(si) < 1e-12
    assert max(si.pvm.residuals().values()) < 1e-12
    rep = im.pvm_multiplicity(si.pvm)
    assert rep.ranks == [mult] * n and rep.homogeneous and rep.multiplicity == mult


def test_pvm_evaluates_subsets():
    si = im.canonical_si(3, 2)
    np.testing.assert_array_equal(si.pvm([0, 1, 2]), np.eye(6))
    np.testing.assert_array_equal(si.pvm([]), np.zeros((6, 6)))


def test_verify_si_negative_control(rng):
    si = im.canonical_si(3, 1)
    w = nm.random_unitary(3, rng)
    broken = im.WeylSI(3, si.u_rep, im.PVM(tuple(w @ e @ w.conj().T for e in si.pvm.projections)))
    assert im.verify_si(broken) > 0.1


def test_transport(rng):
    si = im.canonical_si(2, 1)
    same = im.transport_si(si, np.eye(2))
    for a, b in zip(same.u_rep, si.u_rep):
        np.testing.assert_array_equal(a, b)
    g = nm.random_unitary(2, rng)
    moved = im.transport_si(si, g)
    assert im.verify_si(moved) < 1e-12
    back = im.transport_si(moved, g.conj().T)
    for a, b in zip(back.pvm.projections, si.pvm.projections):
        assert np.linalg.norm(a - b) < 1e-12
    with pytest.raises(NotUnitaryError):
        im.transport_si(si, 2 * np.eye(2))


def test_multiplicity_invariance(rng):
    si = im.canonical_si(4, 3)
    moved = im.transport_si(si, nm.random_unitary(12, rng))
    assert im.pvm_multiplicity(moved.pvm).ranks == [3, 3, 3, 3]
    assert abs(im.verify_si(moved) - im.verify_si(si)) < 1e-12


def test_inhomogeneous_pvm():
    pvm = im.PVM((np.diag([1, 0, 0]).astype(complex), np.diag([0, 1, 1]).astype(complex)))
    rep = im.pvm_multiplicity(pvm)
    assert rep.ranks == [1, 2] and not rep.homogeneous and rep.multiplicity is None


def test_intertwiner_identity():
    a = im.standard_weyl_pair(4)
    g = im.find_intertwiner(a, a)
    phase = g[0, 0]
    assert abs(abs(phase) - 1) < 1e-10
    assert np.linalg.norm(g - phase * np.eye(4)) < 1e-10


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_intertwiner_recovers_transport(n, rng):
    a = im.standard_weyl_pair(n)
    w = nm.random_unitary(n, rng)
    b = (w @ a[0] @ w.conj().T, w @ a[1] @ w.conj().T)
    g = im.find_intertwiner(a, b)
    phase = np.vdot(w, g) / abs(np.vdot(w, g))
    assert np.linalg.norm(g - phase * w) < 1e-8
    assert im.intertwiner_kernel_dim(a, b) == 1


def test_intertwiner_swapped_roles():
    a = im.standard_weyl_pair(2)
    b = (nm.SIGMA_X, nm.SIGMA_Z)
    assert np.linalg.norm(b[0] @ b[1] + b[1] @ b[0]) < 1e-15
    g = im.find_intertwiner(a, b)
    assert np.linalg.norm(g @ a[0] - b[0] @ g) < 1e-8
    assert np.linalg.norm(g @ a[1] - b[1] @ g) < 1e-8
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert abs(abs(np.vdot(hadamard, g)) - 2) < 1e-8


def test_intertwiner_not_equivalent():
    a = im.standard_weyl_pair(3)
    b = (a[0].conj(), a[1])  # relation with w^{-1}: not equivalent
    with pytest.raises(NotEquivalentError):
        im.find_intertwiner(a, b)


def orbit_oracle(n, gens):
    """Enumerate the generated subgroup, then its cosets."""
    sub = {0}
    while True:
        new = {(s + g) % n for s in sub for g in gens} | sub
        if new == sub:
            break
        sub = new
    seen, orbits = set(), []
    for j in range(n):
        if j not in seen:
            orb = sorted({(j + s) % n for s in sub})
            seen.update(orb)
            orbits.append(orb)
    return orbits


@pytest.mark.parametrize("n,gens", [(4, [1]), (4, [2]), (5, [2]), (6, [4]), (6, [2, 3]),
                                    (12, [8, 6]), (7, [])])
def test_action_orbits(n, gens):
    assert im.action_orbits(n, gens) == orbit_oracle(n, gens)


def test_action_orbits_examples():
    assert im.action_orbits(4, [1]) == [[0, 1, 2, 3]] and im.is_transitive(4, [1])
    assert im.action_orbits(4, [2]) == [[0, 2], [1, 3]] and not im.is_transitive(4, [2])
    assert im.is_transitive(5, [2])


def test_si_json():
    si = im.canonical_si(3, 2)
    obj = si.to_json()
    assert obj["n"] == 3 and obj["D"] == 6 and len(obj["U"]) == 3 and len(obj["E"]) == 3
    back = im.si_from_json(obj)
    assert im.verify_si(back) == 0.0
