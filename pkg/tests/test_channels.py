import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cqms import channels as ch
from cqms import numerics as nm
from cqms.errors import DimensionError, NotCPError

from conftest import cgauss

P0 = np.diag([1.0, 0.0]).astype(complex)
P1 = np.diag([0.0, 1.0]).astype(complex)


def choi_oracle(kraus, d):
    """Direct sum over matrix units with the Schrodinger map rho -> sum L rho L*."""
    c = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d))
            e[i, j] = 1
            phi = sum(l @ e @ l.conj().T for l in kraus)
            c += np.kron(e, phi)
    return c


def test_apply_identity_and_unitality(rng):
    x = cgauss(rng, 3, 3)
    np.testing.assert_allclose(ch.apply_heisenberg(ch.QuantumChannel.identity(3), x), x)
    t = ch.random_unital_cp(3, 4, 1)
    np.testing.assert_allclose(ch.apply_heisenberg(t, np.eye(3)), np.eye(3), atol=1e-12)


def test_dephasing_kills_off_diagonal():
    out = ch.apply_heisenberg(ch.dephasing(2), nm.SIGMA_X)
    # oracle: P0 X P0 + P1 X P1 written out
    oracle = P0 @ nm.SIGMA_X @ P0 + P1 @ nm.SIGMA_X @ P1
    np.testing.assert_allclose(out, oracle)
    np.testing.assert_allclose(out, np.zeros((2, 2)))


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        ch.apply_heisenberg(ch.QuantumChannel.identity(2), np.eye(3))


def test_hermiticity_preserved(rng):
    t = ch.random_unital_cp(3, 2, 4)
    x = cgauss(rng, 3, 3)
    np.testing.assert_allclose(ch.apply_heisenberg(t, x).conj().T,
                               ch.apply_heisenberg(t, x.conj().T), atol=1e-12)


def test_schrodinger_is_dual(rng):
    t = ch.random_unital_cp(3, 3, 9)
    x, rho = cgauss(rng, 3, 3), cgauss(rng, 3, 3)
    lhs = np.trace(ch.apply_schrodinger(t, rho) @ x)
    rhs = np.trace(rho @ ch.apply_heisenberg(t, x))
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_choi_identity():
    c = ch.choi_matrix(ch.QuantumChannel.identity(2)).matrix
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(c, 2 * np.outer(phi, phi))
    assert np.trace(c).real == pytest.approx(2)
    assert np.linalg.matrix_rank(c) == 1


def test_choi_depolarizing_oracle():
    t = ch.depolarizing(1.0)
    x = nm.random_hermitian(2, 0)
    np.testing.assert_allclose(ch.apply_heisenberg(t, x), np.trace(x) / 2 * np.eye(2), atol=1e-14)
    c = ch.choi_matrix(t).matrix
    np.testing.assert_allclose(c, choi_oracle(t.kraus, 2), atol=1e-14)
    np.testing.assert_allclose(c, np.eye(4) / 2, atol=1e-14)
    assert np.linalg.matrix_rank(c) == 4


@pytest.mark.parametrize("d,k", [(2, 1), (2, 3), (3, 4), (4, 2)])
def test_choi_matches_oracle(d, k):
    t = ch.random_unital_cp(d, k, d * 10 + k)
    c = ch.choi_matrix(t)
    np.testing.assert_allclose(c.matrix, choi_oracle(t.kraus, d), atol=1e-13)
    np.testing.assert_allclose(ch.choi_from_map(t, d).matrix, c.matrix, atol=1e-13)
    assert c.min_eigenvalue() >= -1e-10


def test_kraus_from_choi_identity():
    t = ch.kraus_from_choi(ch.choi_matrix(ch.QuantumChannel.identity(2)))
    assert t.num_kraus == 1
    l = t.kraus[0]
    np.testing.assert_allclose(l / l[0, 0], np.eye(2), atol=1e-12)


def test_kraus_from_choi_dephasing():
    c = ch.choi_matrix(ch.dephasing(2))
    t = ch.kraus_from_choi(c)
    assert t.num_kraus == 2
    assert ch.choi_distance(t, c) < 1e-12
    for l in t.kraus:
        assert np.linalg.matrix_rank(l) == 1


def test_kraus_from_choi_not_cp():
    c = ch.ChoiMatrix(1, np.array([[-0.1]]))
    with pytest.raises(NotCPError):
        ch.kraus_from_choi(c)
    with pytest.raises(NotCPError):
        ch.kraus_from_choi(ch.choi_from_map(ch.transpose_map, 2))


def test_transpose_choi_is_swap():
    c = ch.choi_from_map(ch.transpose_map, 2)
    swap = np.eye(4)[[0, 2, 1, 3]]
    np.testing.assert_allclose(c.matrix, swap)
    assert c.min_eigenvalue() == pytest.approx(-1.0, abs=1e-12)


def test_kraus_order_descending():
    t = ch.QuantumChannel.from_kraus([np.sqrt(0.3) * np.eye(2), np.sqrt(0.7) * nm.SIGMA_Z])
    out = ch.kraus_from_choi(ch.choi_matrix(t))
    norms = [np.linalg.norm(l) for l in out.kraus]
    assert norms == sorted(norms, reverse=True)
    # deterministic, so two runs give identical lists
    again = ch.kraus_from_choi(ch.choi_matrix(t))
    for a, b in zip(out.kraus, again.kraus):
        np.testing.assert_array_equal(a, b)


def test_validate_channel():
    rep = ch.validate_channel(ch.QuantumChannel.identity(2))
    assert rep.cp and rep.unital
    rep = ch.validate_channel(ch.QuantumChannel.from_kraus([2 * np.eye(2)]))
    assert rep.cp and not rep.unital
    assert rep.residuals["unital"] == pytest.approx(np.linalg.norm(3 * np.eye(2)))
    rep = ch.validate_channel(ch.random_unital_cp(3, 4, 2))
    assert rep.cp and rep.unital and rep.trace_preserving_adjoint


def test_compose(rng):
    t1, t2 = ch.random_unital_cp(3, 2, 5), ch.random_unital_cp(3, 3, 6)
    x = cgauss(rng, 3, 3)
    both = ch.compose(t1, t2)
    assert both.num_kraus == 6
    np.testing.assert_allclose(both(x), t1(t2(x)), atol=1e-12)
    assert ch.validate_channel(both).unital
    assert ch.choi_distance(ch.compose(ch.QuantumChannel.identity(3), t1), t1) < 1e-12
    deph = ch.dephasing(2)
    assert ch.choi_distance(ch.compose(deph, deph), deph) < 1e-12
    with pytest.raises(DimensionError):
        ch.compose(t1, ch.QuantumChannel.identity(2))


def test_random_unital_cp():
    t = ch.random_unital_cp(2, 1, 0)
    l = t.kraus[0]
    assert np.linalg.norm(l.conj().T @ l - np.eye(2)) < 1e-12
    t = ch.random_unital_cp(3, 4, 11)
    assert t.num_kraus == 4
    assert np.linalg.norm(ch.kraus_sum(t) - np.eye(3)) < 1e-12
    rep = ch.validate_channel(t)
    assert rep.cp and rep.unital
    for a, b in zip(t.kraus, ch.random_unital_cp(3, 4, 11).kraus):
        np.testing.assert_array_equal(a, b)


def test_json_roundtrip():
    t = ch.random_unital_cp(2, 3, 7)
    obj = ch.channel_to_json(t)
    assert obj["picture"] == "heisenberg" and obj["dim"] == 2 and len(obj["kraus"]) == 3
    back = ch.channel_from_json(obj)
    assert ch.choi_distance(back, t) == 0.0


def test_cp_iff_choi_psd_corpus():
    rng = np.random.default_rng(1)
    for _ in range(100):
        d = int(rng.integers(2, 5))
        t = ch.random_unital_cp(d, int(rng.integers(1, d * d + 1)), rng)
        assert ch.validate_channel(t).cp
    # non-CP: transpose and a Hermiticity-preserving map with a negative Choi direction
    assert ch.choi_from_map(ch.transpose_map, 2).min_eigenvalue() < -0.5
    bad = lambda x: x - 0.9 * np.trace(x) * np.eye(3)  # noqa: E731
    assert ch.choi_from_map(bad, 3).min_eigenvalue() < -1e-3


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(1, 16), st.integers(0, 2 ** 32 - 1))
def test_roundtrip_property(d, k, seed):
    t = ch.random_unital_cp(d, min(k, d * d), seed)
    c = ch.choi_matrix(t)
    back = ch.kraus_from_choi(c)
    assert ch.choi_distance(back, c) < 1e-9
    assert ch.validate_channel(back).unital
    assert back.num_kraus <= d * d
