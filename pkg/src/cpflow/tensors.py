"""Exact-contract 3x3 matrix algebra.

All routines operate on numpy.ndarrays of shape (3, 3) and return fresh
arrays.  Symmetric arguments are those with ``X == X.T`` entrywise; the
constructors :func:`symmetrize` and :func:`sym6_unpack` produce exactly
symmetric storage (floating-point addition is commutative, so
``(a + a.T)/2`` has zero skew part bit-for-bit).

The eigenvalue solver is closed-form (Cardano / trigonometric form) with an
iterative LAPACK fallback engaged when clustered eigenvalues would make the
cross-product eigenvector construction ill-conditioned.
"""

import numpy as np

from .errors import NotPositiveDefinite, SingularMatrix

I3 = np.eye(3)

# Relative spacing of eigenvalues below which the closed-form eigenvector
# construction is abandoned for the iterative solver.
_CARDANO_GAP_TOL = 1e-12
# Residual ||S v - lam v|| / scale accepted from the closed-form path.
_CARDANO_RESIDUAL_TOL = 1e-12


def inner(x, y):
    """Euclidean scalar product tr(x y^T) = sum_ij x_ij y_ij."""
    return float(np.tensordot(x, y))


def norm(x):
    """Frobenius norm."""
    return float(np.linalg.norm(x))


def trace(x):
    return float(x[0, 0] + x[1, 1] + x[2, 2])


def dev3(x):
    """Trace-free part x - (tr x / 3) * identity."""
    return x - (trace(x) / 3.0) * I3


def symmetrize(x):
    """Exactly symmetric storage of (x + x^T)/2."""
    return (x + x.T) / 2.0


def skew_part(x):
    return (x - x.T) / 2.0


def det3(x):
    """Determinant by direct expansion (no pivoting noise)."""
    return float(
        x[0, 0] * (x[1, 1] * x[2, 2] - x[1, 2] * x[2, 1])
        - x[0, 1] * (x[1, 0] * x[2, 2] - x[1, 2] * x[2, 0])
        + x[0, 2] * (x[1, 0] * x[2, 1] - x[1, 1] * x[2, 0])
    )


def cof3(x):
    """Cofactor matrix, satisfying x cof(x)^T = det(x) * identity."""
    c = np.empty((3, 3))
    c[0, 0] = x[1, 1] * x[2, 2] - x[1, 2] * x[2, 1]
    c[0, 1] = x[1, 2] * x[2, 0] - x[1, 0] * x[2, 2]
    c[0, 2] = x[1, 0] * x[2, 1] - x[1, 1] * x[2, 0]
    c[1, 0] = x[0, 2] * x[2, 1] - x[0, 1] * x[2, 2]
    c[1, 1] = x[0, 0] * x[2, 2] - x[0, 2] * x[2, 0]
    c[1, 2] = x[0, 1] * x[2, 0] - x[0, 0] * x[2, 1]
    c[2, 0] = x[0, 1] * x[1, 2] - x[0, 2] * x[1, 1]
    c[2, 1] = x[0, 2] * x[1, 0] - x[0, 0] * x[1, 2]
    c[2, 2] = x[0, 0] * x[1, 1] - x[0, 1] * x[1, 0]
    return c


def inv3(x):
    """Closed-form inverse with a scale-aware singularity guard.

    Raises
    ------
    SingularMatrix
        When |det x| <= 1e-14 * ||x||^3.
    """
    d = det3(x)
    if abs(d) <= 1e-14 * norm(x) ** 3:
        raise SingularMatrix(
            "matrix is singular to working precision (det=%.3e)" % d, matrix=x
        )
    return cof3(x).T / d


def principal_invariants(x):
    """(I1, I2, I3) = (tr x, tr cof x, det x); valid for non-symmetric x."""
    i1 = trace(x)
    i2 = float(
        x[0, 0] * x[1, 1] - x[0, 1] * x[1, 0]
        + x[1, 1] * x[2, 2] - x[1, 2] * x[2, 1]
        + x[0, 0] * x[2, 2] - x[0, 2] * x[2, 0]
    )
    return i1, i2, det3(x)


def sym6_pack(s):
    """Pack a symmetric matrix into (s11, s22, s33, s12, s13, s23)."""
    return np.array([s[0, 0], s[1, 1], s[2, 2], s[0, 1], s[0, 2], s[1, 2]])


def sym6_unpack(v):
    """Inverse of :func:`sym6_pack`; the result is exactly symmetric."""
    s11, s22, s33, s12, s13, s23 = (float(c) for c in v)
    return np.array([[s11, s12, s13], [s12, s22, s23], [s13, s23, s33]])


def _eig_sym_cardano_values(s):
    """Sorted eigenvalues of symmetric s by the trigonometric Cardano form.

    Returns (eigenvalues ascending, p) where ``2p`` is the deviatoric radius;
    p == 0 signals the triple-eigenvalue case.
    """
    q = trace(s) / 3.0
    b = s - q * I3
    j2 = inner(b, b) / 6.0  # = tr(B^2)/6 >= 0
    p = np.sqrt(j2) if j2 > 0.0 else 0.0
    if p == 0.0:
        lam = np.array([q, q, q])
        return lam, 0.0
    r = det3(b) / (2.0 * p ** 3)
    r = min(1.0, max(-1.0, r))
    phi = np.arccos(r) / 3.0
    lam_hi = q + 2.0 * p * np.cos(phi)
    lam_lo = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    lam_mid = 3.0 * q - lam_hi - lam_lo
    return np.array([lam_lo, lam_mid, lam_hi]), p


def _eigvec_cross(s, lam):
    """Eigenvector of (s - lam I) via the largest cross product of its rows.

    Sound only when lam is a simple eigenvalue; the caller checks residuals.
    """
    a = s - lam * I3
    c01 = np.cross(a[0], a[1])
    c02 = np.cross(a[0], a[2])
    c12 = np.cross(a[1], a[2])
    cands = (c01, c02, c12)
    best = max(cands, key=lambda c: float(c @ c))
    n = np.linalg.norm(best)
    if n == 0.0:
        return None
    return best / n


def eig_sym(s):
    """Eigen-decomposition of a symmetric 3x3 matrix.

    Returns
    -------
    (lam, v) : (ndarray shape (3,), ndarray shape (3, 3))
        Eigenvalues sorted ascending and orthonormal eigenvectors as
        columns, ``s = v @ diag(lam) @ v.T``.
    """
    lam, p = _eig_sym_cardano_values(s)
    scale = max(abs(lam[0]), abs(lam[2]), 1e-300)
    if p == 0.0:
        return lam, I3.copy()
    # Clustered eigenvalues starve the cross-product construction of
    # significant digits; hand those to the iterative solver.
    min_gap = min(lam[1] - lam[0], lam[2] - lam[1])
    if min_gap <= _CARDANO_GAP_TOL * scale:
        lam_f, v_f = np.linalg.eigh(s)
        return lam_f, v_f
    v0 = _eigvec_cross(s, lam[0])
    v2 = _eigvec_cross(s, lam[2])
    if v0 is None or v2 is None:
        lam_f, v_f = np.linalg.eigh(s)
        return lam_f, v_f
    # Re-orthogonalize the extreme pair, complete with the cross product.
    v2 = v2 - (v0 @ v2) * v0
    n2 = np.linalg.norm(v2)
    if n2 < 0.5:
        lam_f, v_f = np.linalg.eigh(s)
        return lam_f, v_f
    v2 /= n2
    v1 = np.cross(v2, v0)
    v = np.column_stack([v0, v1, v2])
    resid = norm(s @ v - v * lam)
    if resid > _CARDANO_RESIDUAL_TOL * max(scale, norm(s)) * 10.0:
        lam_f, v_f = np.linalg.eigh(s)
        return lam_f, v_f
    return lam, v


def eigvals_sym(s):
    """Sorted eigenvalues only (cheaper than :func:`eig_sym`)."""
    lam, _ = _eig_sym_cardano_values(s)
    return lam


def _psd_floor(s):
    return 1e-14 * max(norm(s), 1e-300)


def _apply_spectral(s, f, require_pd, opname):
    lam, v = eig_sym(s)
    if require_pd and lam[0] <= _psd_floor(s):
        raise NotPositiveDefinite(
            "%s requires positive definite input (min eigenvalue %.3e)"
            % (opname, lam[0]),
            matrix=s,
        )
    return symmetrize(v @ np.diag(f(lam)) @ v.T)


def sqrt_psd(s):
    """Principal square root of a symmetric positive definite matrix."""
    return _apply_spectral(s, np.sqrt, True, "sqrt_psd")


def log_psd(s):
    """Principal logarithm of a symmetric positive definite matrix."""
    return _apply_spectral(s, np.log, True, "log_psd")


def exp_sym(s):
    """Matrix exponential of a symmetric matrix (any signature)."""
    return _apply_spectral(s, np.exp, False, "exp_sym")


def polar_decompose(f):
    """Right polar decomposition f = R U with U = sqrt(f^T f).

    Requires det f > 0; then R is a proper rotation.

    Raises
    ------
    SingularMatrix
        When det f <= 0 or U is numerically singular.
    """
    d = det3(f)
    if d <= 0.0:
        raise SingularMatrix(
            "polar decomposition needs det F > 0 (det=%.3e)" % d, matrix=f
        )
    try:
        u = sqrt_psd(symmetrize(f.T @ f))
    except NotPositiveDefinite as exc:
        raise SingularMatrix("F^T F is not positive definite", matrix=f) from exc
    r = f @ inv3(u)
    return r, u
