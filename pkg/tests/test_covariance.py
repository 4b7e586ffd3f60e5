import numpy as np
import pytest

from cqms import channels as ch
from cqms import covariance as cv
from cqms import numerics as nm
from cqms.errors import NotCovariantError

HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)

BELL = np.array([[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1j, -1j, 0]]).T / np.sqrt(2)


def test_reps_are_representations():
    for r in (cv.pauli_rep(), cv.weyl_group_rep(3), cv.cyclic_rep(nm.SIGMA_Z)):
        assert r.residual() < 1e-12
    assert cv.cyclic_rep(nm.SIGMA_Z).group_order == 2
    p = cv.pauli_rep()
    # X Y = i Z
    assert p.phases[2, 3] == pytest.approx(1j)
    assert np.allclose(cv.cyclic_rep(HADAMARD).phases, 1)


def test_twirl_fixes_covariant_channel():
    t = ch.depolarizing(0.4)
    assert ch.choi_distance(cv.twirl(t, cv.pauli_rep()), t) < 1e-12
    ident = ch.QuantumChannel.identity(2)
    assert ch.choi_distance(cv.twirl(ident, cv.pauli_rep()), ident) < 1e-12


def test_twirl_random_is_bell_diagonal():
    t = cv.twirl(ch.random_unital_cp(2, 3, 8), cv.pauli_rep())
    assert cv.check_covariance(t, cv.pauli_rep()) < 1e-10
    c = ch.choi_matrix(t).matrix
    in_bell = BELL.conj().T @ c @ BELL
    off = in_bell - np.diag(np.diag(in_bell))
    assert np.linalg.norm(off) < 1e-10
    assert np.trace(c).real == pytest.approx(2)


def test_twirl_properties():
    rng = np.random.default_rng(3)
    for r in (cv.pauli_rep(), cv.weyl_group_rep(3)):
        for _ in range(5):
            t = cv.twirl(ch.random_unital_cp(r.dim, int(rng.integers(1, 5)), rng), r)
            rep = ch.validate_channel(t)
            assert rep.cp and rep.unital
            assert ch.choi_distance(cv.twirl(t, r), t) < 1e-10


def test_check_covariance_cases():
    assert cv.check_covariance(ch.QuantumChannel.identity(2), cv.pauli_rep()) == 0.0
    deph = ch.dephasing(2)
    # dephasing commutes with the basis permutation sigma_x
    assert cv.check_covariance(deph, cv.cyclic_rep(nm.SIGMA_X)) < 1e-15
    # but not with the Hadamard; measured value 1/sqrt(2)
    assert cv.check_covariance(deph, cv.cyclic_rep(HADAMARD)) > 0.1


def is_monomial_with_phases(m, tol=1e-10):
    a = np.abs(m)
    return (np.all((a < tol) | (np.abs(a - 1) < tol))
            and np.all(np.sum(a > tol, axis=0) == 1) and np.all(np.sum(a > tol, axis=1) == 1))


def test_mixing_of_pauli_kraus_is_permutation_with_phases():
    t = ch.depolarizing(0.6)
    for m in cv.kraus_mixing_matrices(t.kraus, cv.pauli_rep()):
        assert is_monomial_with_phases(m)


def test_covariant_dilation_identity():
    res = cv.covariant_dilation(ch.QuantumChannel.identity(2), cv.pauli_rep())
    assert res.residual < 1e-14
    for u in res.ancilla_rep.unitaries:
        np.testing.assert_allclose(u, [[1.0]], atol=1e-14)


def test_covariant_dilation_depolarizing():
    r = cv.pauli_rep()
    res = cv.covariant_dilation(ch.depolarizing(0.5), r)
    assert res.residual < 1e-8
    assert res.cocycle_residual < 1e-8
    v = res.dilation.isometry_v
    for u, w in zip(r.unitaries, res.ancilla_rep.unitaries):
        assert np.linalg.norm(v @ u - np.kron(u, w) @ v) < 1e-8
        assert nm.is_unitary(w, 1e-10)


def test_covariant_dilation_dephasing_diagonal():
    res = cv.covariant_dilation(ch.dephasing(2), cv.cyclic_rep(nm.SIGMA_Z))
    assert res.residual < 1e-10
    for w in res.ancilla_rep.unitaries:
        assert np.linalg.norm(w - np.diag(np.diag(w))) < 1e-12


def test_covariant_dilation_rejects_non_covariant():
    with pytest.raises(NotCovariantError):
        cv.covariant_dilation(ch.dephasing(2), cv.cyclic_rep(HADAMARD))


@pytest.mark.parametrize("seed", range(5))
def test_covariant_dilation_weyl3(seed):
    r = cv.weyl_group_rep(3)
    t = cv.twirl(ch.random_unital_cp(3, 1 + seed, seed), r)
    res = cv.covariant_dilation(t, r)
    assert res.residual < 1e-8
    assert cv.cocycle_residual(res.mixing, r.mult) < 1e-8
    assert res.ancilla_rep.residual() < 1e-8


def test_grouprep_json():
    r = cv.weyl_group_rep(2)
    back = cv.grouprep_from_json(r.to_json())
    assert back.group_order == 4
    np.testing.assert_allclose(back.phases, r.phases)
