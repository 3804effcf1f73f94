import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from spinopt import matcore as mc
from spinopt.errors import (BranchAmbiguity, DimensionCap, MalformedInput, NotAntiHermitian,
                            NotHermitian, NotSymmetricUnitary, NotUnitary)
from spinopt.kron import IX, IZ


def taylor_exp(X, terms=30):
    out = np.eye(X.shape[0], dtype=complex)
    term = np.eye(X.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ X / k
        out = out + term
    return out


def random_ah(n, rng, scale=1.0):
    H = mc.random_hermitian(n, rng)
    H -= np.trace(H) / n * np.eye(n)
    return -1j * scale * H / np.linalg.norm(H)


def test_herm_eig_identity():
    e = mc.herm_eig(np.eye(4))
    assert np.allclose(e.values, 1.0)
    assert np.allclose(e.vectors, np.eye(4))


def test_herm_eig_pauli_z():
    e = mc.herm_eig(-1j * IZ)
    assert np.allclose(e.values, [-1.0, 1.0], atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 8, 16])
def test_herm_eig_reassembly(rng, n):
    H = mc.random_hermitian(n, rng)
    e = mc.herm_eig(H)
    V = e.vectors
    assert np.all(np.diff(e.values) >= 0)
    assert np.linalg.norm(V @ V.conj().T - np.eye(n)) < 1e-10
    assert np.linalg.norm(V @ np.diag(e.values) @ V.conj().T - H) < 1e-10 * n
    assert abs(e.values.sum() - np.trace(H).real) < 1e-10


def test_herm_eig_degenerate_cluster_is_orthonormal(rng):
    Q = mc.haar_unitary(6, rng)
    H = Q @ np.diag([1.0, 1.0, 1.0, 2.0, 2.0, 5.0]) @ Q.conj().T
    e = mc.herm_eig(H)
    assert np.linalg.norm(e.vectors.conj().T @ e.vectors - np.eye(6)) < 1e-12
    assert np.allclose(e.values, [1, 1, 1, 2, 2, 5], atol=1e-12)


def test_herm_eig_deterministic(rng):
    H = mc.random_hermitian(5, rng)
    a = mc.herm_eig(H)
    b = mc.herm_eig(H.copy())
    assert np.array_equal(a.vectors, b.vectors)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        mc.herm_eig(np.array([[0, 1], [0, 0]]))


def test_dimension_cap():
    with pytest.raises(DimensionCap):
        mc.as_matc(np.eye(17))


def test_expm_zero_and_diagonal():
    assert np.allclose(mc.expm_ah(np.zeros((3, 3))), np.eye(3))
    E = mc.expm_ah(np.pi / 4 * IZ)
    assert np.allclose(E, np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)]), atol=1e-15)
    assert np.allclose(E, taylor_exp(np.pi / 4 * IZ), atol=1e-14)


def test_expm_matches_taylor_and_scipy(rng):
    X = random_ah(4, rng, scale=2.0)
    E = mc.expm_ah(X)
    assert np.linalg.norm(E - taylor_exp(X)) < 1e-10
    assert np.linalg.norm(E - scipy.linalg.expm(X)) < 1e-12
    assert mc.is_unitary(E, 1e-12)
    assert abs(np.linalg.det(E) - 1) < 1e-10


def test_expm_rejects_hermitian():
    with pytest.raises(NotAntiHermitian):
        mc.expm_ah(np.eye(2))


def test_logu_examples():
    assert np.allclose(mc.logu(np.eye(3)), 0)
    D = np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)])
    assert np.allclose(mc.logu(D), np.pi / 4 * IZ, atol=1e-14)
    with pytest.raises(BranchAmbiguity):
        mc.logu(np.diag([-1, -1, 1, 1]).astype(complex))
    with pytest.raises(NotUnitary):
        mc.logu(2 * np.eye(2))


def test_sym_unitary_diag_examples():
    O, ph = mc.sym_unitary_diag(np.eye(3))
    assert np.allclose(O @ O.T, np.eye(3)) and np.allclose(ph, 0)
    S = np.diag([np.exp(0.4j), np.exp(-0.4j)])
    O, ph = mc.sym_unitary_diag(S)
    assert np.allclose(sorted(ph), [-0.4, 0.4])
    assert abs(np.linalg.det(O) - 1) < 1e-12
    with pytest.raises(NotSymmetricUnitary):
        mc.sym_unitary_diag(mc.expm_ah(0.3 * IX + 0.2 * IZ) @ np.diag([1, 1j]))


def _random_so(n, rng):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] *= -1
    return Q


def test_sym_unitary_diag_1000_random(rng):
    for n in (2, 4):
        O0 = np.array([_random_so(n, rng) for _ in range(500)])
        th = rng.uniform(-np.pi, np.pi, size=(500, n))
        S = np.einsum("bij,bj,bkj->bik", O0, np.exp(1j * th), O0)
        O, ph = mc.sym_unitary_diag(S)
        rec = np.einsum("bij,bj,bkj->bik", O, np.exp(1j * ph), O)
        assert np.max(np.abs(rec - S)) < 1e-9
        assert np.max(np.abs(np.linalg.det(O) - 1)) < 1e-10
        assert O.dtype == np.float64


def test_sym_unitary_diag_degenerate(rng):
    O0 = _random_so(4, rng)
    S = O0 @ np.diag(np.exp(1j * np.array([0.3, 0.3, -0.3, -0.3]))) @ O0.T
    O, ph = mc.sym_unitary_diag(S)
    assert np.linalg.norm(O @ np.diag(np.exp(1j * ph)) @ O.T - S) < 1e-9


def test_sym_sqrt_squares_back(rng):
    O0 = _random_so(4, rng)
    S = O0 @ np.diag(np.exp(1j * np.array([1.0, 2.0, -0.5, -2.5]))) @ O0.T
    r = mc.sym_sqrt(S)
    assert np.allclose(r, r.T) and np.allclose(r @ r, S)
    assert abs(np.linalg.det(r) - 1) < 1e-10


def test_json_round_trip(rng):
    U = mc.haar_unitary(4, rng)
    assert np.array_equal(mc.from_json(mc.to_json(U)), U)
    with pytest.raises(MalformedInput):
        mc.from_json({"dim": 2, "re": [1, 0, 0], "im": [0, 0, 0, 0]})


def test_predicates():
    assert mc.is_anti_hermitian(IX) and not mc.is_hermitian(IX)
    assert mc.is_traceless(IZ) and mc.is_unitary(IX)
    assert mc.is_symmetric(np.eye(2)) and not mc.is_symmetric(IX)


anti_herm = st.integers(0, 2 ** 31 - 1).map(lambda s: random_ah(3, np.random.default_rng(s)))


@settings(max_examples=40, deadline=None)
@given(X=anti_herm, s=st.floats(-2, 2), t=st.floats(-2, 2))
def test_one_parameter_group(X, s, t):
    lhs = mc.expm_ah((s + t) * X)
    rhs = mc.expm_ah(s * X) @ mc.expm_ah(t * X)
    assert np.linalg.norm(lhs - rhs) < 1e-10
    assert mc.is_unitary(lhs, 1e-12)


@settings(max_examples=40, deadline=None)
@given(X=anti_herm, r=st.floats(0.0, np.pi - 1e-3))
def test_log_inverts_exp(X, r):
    Y = X * r / max(np.max(np.abs(np.linalg.eigvals(X))), 1e-12)
    assert np.linalg.norm(mc.logu(mc.expm_ah(Y)) - Y) < 1e-9
