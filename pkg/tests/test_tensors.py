import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpflow import tensors as tn
from cpflow import verify as vf
from cpflow.errors import NotPositiveDefinite, SingularMatrix

I = np.eye(3)


def entries9():
    return st.lists(
        st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False),
        min_size=9, max_size=9,
    ).map(lambda v: np.array(v).reshape(3, 3))


def test_inner_identity():
    assert tn.inner(I, I) == 3.0


def test_inner_is_trace_of_product(rng):
    X = rng.standard_normal((3, 3))
    Y = rng.standard_normal((3, 3))
    np.testing.assert_allclose(tn.inner(X, Y), np.trace(X @ Y.T), rtol=1e-13)


def test_dev3_identity_is_zero():
    assert tn.norm(tn.dev3(I)) == 0.0


def test_dev3_diagonal():
    np.testing.assert_allclose(tn.dev3(np.diag([1.0, 1.0, 4.0])), np.diag([-1.0, -1.0, 2.0]))


@given(entries9())
@settings(max_examples=200, deadline=None)
def test_dev3_roundtrip_and_trace(X):
    d = tn.dev3(X)
    assert abs(tn.trace(d)) <= 1e-13 * max(1.0, tn.norm(X))
    np.testing.assert_allclose(d + (tn.trace(X) / 3.0) * I, X, atol=1e-13)


@given(entries9())
@settings(max_examples=200, deadline=None)
def test_dev_norm_pythagoras(X):
    lhs = tn.inner(tn.dev3(X), tn.dev3(X))
    rhs = tn.inner(X, X) - tn.trace(X) ** 2 / 3.0
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_principal_invariants_identity():
    assert tn.principal_invariants(I) == (3.0, 3.0, 1.0)


def test_principal_invariants_diagonal():
    i1, i2, i3 = tn.principal_invariants(np.diag([2.0, 3.0, 4.0]))
    assert (i1, i2, i3) == (9.0, 26.0, 24.0)


def test_invariants_similarity(rng):
    for _ in range(50):
        A = rng.standard_normal((3, 3))
        B = rng.standard_normal((3, 3))
        np.testing.assert_allclose(
            tn.principal_invariants(A @ B), tn.principal_invariants(B @ A),
            rtol=1e-10, atol=1e-10,
        )


def test_det_cof_inv_basics():
    assert tn.det3(I) == 1.0
    np.testing.assert_allclose(tn.inv3(I), I)
    np.testing.assert_allclose(tn.cof3(np.diag([2.0, 3.0, 4.0])), np.diag([12.0, 8.0, 6.0]))


def test_inv3_roundtrip(rng):
    for _ in range(50):
        X = vf.random_F(rng)
        np.testing.assert_allclose(X @ tn.inv3(X), I, atol=1e-12)


def test_cof3_transpose_identity(rng):
    X = rng.standard_normal((3, 3))
    np.testing.assert_allclose(X @ tn.cof3(X).T, tn.det3(X) * I, atol=1e-12)


def test_inv3_rejects_singular():
    with pytest.raises(SingularMatrix):
        tn.inv3(np.diag([1.0, 1.0, 0.0]))


def test_eig_sym_trivial_cases():
    lam, _ = tn.eig_sym(I)
    np.testing.assert_allclose(lam, [1.0, 1.0, 1.0])
    lam, V = tn.eig_sym(np.diag([16.0, 4.0, 9.0]))
    np.testing.assert_allclose(lam, [4.0, 9.0, 16.0])
    np.testing.assert_allclose(V.T @ V, I, atol=1e-14)


def test_eig_sym_reconstruction(rng):
    for _ in range(200):
        S = tn.symmetrize(rng.standard_normal((3, 3)))
        lam, V = tn.eig_sym(S)
        assert lam[0] <= lam[1] <= lam[2]
        np.testing.assert_allclose(V @ np.diag(lam) @ V.T, S, atol=1e-10 * max(1.0, tn.norm(S)))
        np.testing.assert_allclose(V.T @ V, I, atol=1e-12)


def test_eig_sym_clustered_spectrum():
    # near-degenerate eigenvalues force the fallback path
    S = np.diag([1.0, 1.0 + 1e-15, 1.0 - 1e-15])
    lam, V = tn.eig_sym(S)
    np.testing.assert_allclose(lam, [1.0, 1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(V.T @ V, I, atol=1e-12)


def test_sqrt_psd_trivial():
    np.testing.assert_allclose(tn.sqrt_psd(I), I)
    np.testing.assert_allclose(tn.sqrt_psd(np.diag([4.0, 9.0, 16.0])), np.diag([2.0, 3.0, 4.0]))
    np.testing.assert_allclose(tn.exp_sym(np.zeros((3, 3))), I)


def test_sqrt_log_roundtrips(rng):
    for _ in range(100):
        P = tn.exp_sym(tn.symmetrize(rng.standard_normal((3, 3))))
        R = tn.sqrt_psd(P)
        np.testing.assert_allclose(R @ R, P, rtol=0, atol=1e-12 * tn.norm(P))
        np.testing.assert_allclose(tn.exp_sym(tn.log_psd(P)), P, atol=1e-12 * tn.norm(P))


def test_psd_functions_reject_indefinite():
    S = np.diag([1.0, -1.0, 2.0])
    with pytest.raises(NotPositiveDefinite):
        tn.sqrt_psd(S)
    with pytest.raises(NotPositiveDefinite):
        tn.log_psd(S)


def test_orthogonal_equivariance(rng):
    for _ in range(50):
        P = tn.exp_sym(tn.symmetrize(rng.standard_normal((3, 3))))
        Q = vf.random_rotation(rng)
        np.testing.assert_allclose(
            tn.sqrt_psd(tn.symmetrize(Q.T @ P @ Q)), Q.T @ tn.sqrt_psd(P) @ Q, atol=1e-10
        )


def test_polar_trivial():
    R, U = tn.polar_decompose(I)
    np.testing.assert_allclose(R, I)
    np.testing.assert_allclose(U, I)


def test_polar_pure_rotation(rng):
    Q = vf.random_rotation(rng)
    R, U = tn.polar_decompose(Q)
    np.testing.assert_allclose(R, Q, atol=1e-12)
    np.testing.assert_allclose(U, I, atol=1e-12)


def test_polar_reconstruction(rng):
    for _ in range(100):
        F = vf.random_F(rng)
        R, U = tn.polar_decompose(F)
        np.testing.assert_allclose(R @ U, F, atol=1e-10 * tn.norm(F))
        np.testing.assert_allclose(R.T @ R, I, atol=1e-12)
        assert tn.det3(R) > 0.0


def test_polar_rejects_reflection():
    with pytest.raises(SingularMatrix):
        tn.polar_decompose(np.diag([1.0, 1.0, -1.0]))


def test_conjugation_lower_bound(rng):
    """|Fe^T S Fe^-T|^2 >= |S|^2 / 2 for symmetric S."""
    for _ in range(2000):
        Fe = vf.random_F(rng)
        S = tn.symmetrize(rng.standard_normal((3, 3)))
        lhs = tn.norm(Fe.T @ S @ tn.inv3(Fe).T) ** 2
        assert lhs >= 0.5 * tn.inner(S, S) - 1e-12


def test_sym6_pack_roundtrip(rng):
    S = tn.symmetrize(rng.standard_normal((3, 3)))
    np.testing.assert_allclose(tn.sym6_unpack(tn.sym6_pack(S)), S)
