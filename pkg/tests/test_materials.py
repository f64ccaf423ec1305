"""Energy families, representation coefficients, and the stress bundle.

The finite-difference checks here are the binding oracle for the alpha
coefficients and the invariant partials; every closed-form value below was
computed by hand from the energy definitions before being frozen.
"""

import math

import numpy as np
import pytest

from cpflow import MaterialParams, StressBundle, stress_bundle
from cpflow import materials as mat
from cpflow import tensors as tn
from cpflow import verify as vf
from cpflow.errors import InconsistentDeformation, NotPositiveDefinite

I = np.eye(3)


def _params(energy, **kw):
    return MaterialParams(energy=energy, **kw)


def _fd_invariant_partials(params, i1, i2, i3, h=1e-6):
    """Central differences of W(I1, I2, I3) in each invariant."""

    def w(a, b, c):
        return mat.energy_partials(params, a, b, c)[0]

    d1 = (w(i1 + h, i2, i3) - w(i1 - h, i2, i3)) / (2.0 * h)
    d2 = (w(i1, i2 + h, i3) - w(i1, i2 - h, i3)) / (2.0 * h)
    d3 = (w(i1, i2, i3 + h) - w(i1, i2, i3 - h)) / (2.0 * h)
    return d1, d2, d3


def _fd_symmetric_gradient(params, s, h=1e-6):
    """Gradient of W(invariants(S)) on symmetric S, Frobenius pairing."""

    def w(a):
        return mat.energy_partials(params, *tn.principal_invariants(a))[0]

    g = np.zeros((3, 3))
    for i in range(3):
        for j in range(i, 3):
            e = np.zeros((3, 3))
            e[i, j] = e[j, i] = 1.0
            slope = (w(s + h * e) - w(s - h * e)) / (2.0 * h)
            # off-diagonal directions pair as <G, e> = 2 G_ij
            g[i, j] = g[j, i] = slope if i == j else 0.5 * slope
    return g


# ---------------------------------------------------------------------------
# energy values


def test_energy_vanishes_at_rest_for_normalized_families():
    for energy in ("simple_neo_hooke", "saint_venant_kirchhoff", "simo_hughes"):
        assert mat.energy_value(_params(energy), I, I) == 0.0


def test_isochoric_energy_at_rest_is_three_mu():
    p = _params("isochoric_neo_hooke", mu=7.0)
    assert mat.energy_value(p, I, I) == pytest.approx(21.0, rel=1e-15)


def test_isochoric_energy_unimodular_stretch():
    # C = diag(4, 1, 1/4), Cp = 1: I1 = 5.25 and det = 1, so the volumetric
    # term drops out and W = mu * I1 on the nose.
    p = _params("isochoric_neo_hooke", mu=3.0)
    C = np.diag([4.0, 1.0, 0.25])
    assert mat.energy_value(p, C, I) == pytest.approx(3.0 * 5.25, rel=1e-14)


def test_energy_two_route_against_explicit_factors(rng):
    for energy in mat.ENERGIES:
        p = _params(energy)
        for _ in range(20):
            F, C, Cp = vf.random_state(rng)
            Up = tn.sqrt_psd(Cp)
            Fp = vf.random_rotation(rng) @ Up
            Fe = F @ tn.inv3(Fp)
            Ce = tn.symmetrize(Fe.T @ Fe)
            direct = mat.energy_partials(p, *tn.principal_invariants(Ce))[0]
            via_metric = mat.energy_value(p, C, tn.inv3(Cp))
            assert via_metric == pytest.approx(direct, rel=1e-10, abs=1e-10 * p.mu)


def test_energy_rejects_indefinite_metric_product():
    p = _params("isochoric_neo_hooke")
    with pytest.raises(NotPositiveDefinite):
        mat.energy_value(p, I, -I)


# ---------------------------------------------------------------------------
# invariant partials and alpha coefficients


def test_partials_match_finite_differences(rng):
    for energy in mat.ENERGIES:
        p = _params(energy)
        for _ in range(10):
            s = tn.exp_sym(vf.random_sym(rng, 0.5))
            i1, i2, i3 = tn.principal_invariants(s)
            w, d1, d2, d3 = mat.energy_partials(p, i1, i2, i3)
            f1, f2, f3 = _fd_invariant_partials(p, i1, i2, i3)
            scale = max(1.0, abs(d1), abs(d2), abs(d3))
            assert abs(d1 - f1) <= 1e-6 * scale
            assert abs(d2 - f2) <= 1e-6 * scale
            assert abs(d3 - f3) <= 1e-6 * scale


def test_alpha_simple_neo_hooke_is_constant():
    p = _params("simple_neo_hooke", mu=6.0)
    a = mat.alpha_coefficients(p, (4.2, 5.1, 1.7))
    assert a == (3.0, 0.0, 0.0)


def test_alpha_saint_venant_has_no_cofactor_term(rng):
    p = _params("saint_venant_kirchhoff")
    s = tn.exp_sym(vf.random_sym(rng, 0.4))
    a1, a2, a3 = mat.alpha_coefficients(p, tn.principal_invariants(s))
    assert a3 == 0.0
    assert a2 == pytest.approx(0.5 * p.mu, rel=1e-15)


def test_alpha_assembles_the_energy_gradient(rng):
    for energy in mat.ENERGIES:
        p = _params(energy)
        for _ in range(5):
            s = tn.exp_sym(vf.random_sym(rng, 0.5))
            a1, a2, a3 = mat.alpha_coefficients(p, tn.principal_invariants(s))
            grad = a1 * I + a2 * s + a3 * (s @ s)
            fd = _fd_symmetric_gradient(p, s)
            assert tn.norm(grad - fd) <= 1e-6 * max(1.0, tn.norm(grad))


def test_alpha_rejects_nonpositive_third_invariant():
    with pytest.raises(NotPositiveDefinite):
        mat.alpha_coefficients(_params("isochoric_neo_hooke"), (3.0, 3.0, -1.0))


def test_dW_tensor_matches_alpha_form_on_symmetric_argument(rng):
    for energy in mat.ENERGIES:
        p = _params(energy)
        s = tn.exp_sym(vf.random_sym(rng, 0.5))
        a1, a2, a3 = mat.alpha_coefficients(p, tn.principal_invariants(s))
        expected = a1 * I + a2 * s + a3 * (s @ s)
        np.testing.assert_allclose(mat.dW_tensor(p, s), expected, rtol=0, atol=1e-12 * p.mu)


# ---------------------------------------------------------------------------
# stress kernels


def test_f_hat_at_rest_is_scalar():
    p = _params("simo_hughes")
    a = mat.alpha_coefficients(p, (3.0, 3.0, 1.0))
    np.testing.assert_allclose(mat.f_hat(I, I, a), sum(a) * I, rtol=0, atol=1e-15)


def test_f_hat_simple_neo_hooke_is_half_mu_C(rng):
    p = _params("simple_neo_hooke", mu=4.0)
    _, C, Cp = vf.random_state(rng)
    a = mat.alpha_coefficients(p, tn.principal_invariants(C @ tn.inv3(Cp)))
    np.testing.assert_allclose(mat.f_hat(C, tn.inv3(Cp), a), 2.0 * C, rtol=1e-14)


def test_f_hat_symmetric(plastic_state):
    params, F, C, Cp = plastic_state
    Cp_inv = tn.inv3(Cp)
    a = mat.alpha_coefficients(params, tn.principal_invariants(C @ Cp_inv))
    fh = mat.f_hat(C, Cp_inv, a)
    assert tn.norm(fh - fh.T) <= 1e-12 * tn.norm(fh)


def test_f1_reduces_to_elastic_gradient_without_plastic_strain(rng):
    for energy in mat.ENERGIES:
        p = _params(energy)
        _, C, _ = vf.random_state(rng)
        a = mat.alpha_coefficients(p, tn.principal_invariants(C))
        f1 = mat.f1_kernel(C, I, a)
        np.testing.assert_allclose(f1, mat.dW_tensor(p, C), rtol=0, atol=1e-12 * p.mu)


def test_f1_is_conjugated_f_hat(plastic_state):
    params, F, C, Cp = plastic_state
    Cp_inv = tn.inv3(Cp)
    a = mat.alpha_coefficients(params, tn.principal_invariants(C @ Cp_inv))
    f1 = mat.f1_kernel(C, Cp_inv, a)
    fh = mat.f_hat(C, Cp_inv, a)
    np.testing.assert_allclose(f1, tn.inv3(C) @ fh @ Cp_inv, rtol=0,
                               atol=1e-10 * tn.norm(f1))


def test_simple_neo_hooke_sigma_tilde_closed_form(rng):
    p = _params("simple_neo_hooke", mu=5.0)
    _, C, Cp = vf.random_state(rng)
    Cp_inv = tn.inv3(Cp)
    np.testing.assert_allclose(mat.sigma_tilde(p, C, Cp_inv), 5.0 * C @ Cp_inv,
                               rtol=1e-12, atol=1e-12)


def test_sigma_tilde_rejects_orientation_reversing_product():
    with pytest.raises(NotPositiveDefinite):
        mat.sigma_tilde(_params("simple_neo_hooke"), I, -I)


# ---------------------------------------------------------------------------
# the bundle


def test_bundle_measures_coincide(plastic_state):
    params, F, C, Cp = plastic_state
    b = stress_bundle(params, C, Cp, F=F)
    ref = b.dev_norm_tau_e
    assert ref > 0.0
    for other in (b.dev_norm_sigma_e, b.F_script, b.dev_norm_sigma_ring):
        assert other == pytest.approx(ref, rel=1e-10)


def test_bundle_without_F_skips_spatial_fields(plastic_state):
    params, _, C, Cp = plastic_state
    b = stress_bundle(params, C, Cp)
    assert isinstance(b, StressBundle)
    assert b.tau_e is None and b.dev_norm_tau_e is None
    assert b.dev_norm_sigma_e > 0.0


def test_bundle_relaxed_state_has_spherical_stress(rng):
    p = _params("isochoric_neo_hooke")
    Cp = vf.random_unimodular_psd(rng)
    b = stress_bundle(p, Cp, Cp)
    assert b.dev_norm_sigma_e <= 1e-10 * p.mu
    assert b.F_script <= 1e-10 * p.mu
    assert b.dev_norm_sigma_ring <= 1e-10 * p.mu
    assert tn.norm(tn.dev3(b.sigma_tilde)) <= 1e-10 * p.mu


def test_bundle_rejects_mismatched_F(rng):
    _, C, Cp = vf.random_state(rng)
    F_bad = tn.sqrt_psd(C) + 0.01 * np.ones((3, 3))
    with pytest.raises(InconsistentDeformation):
        stress_bundle(MaterialParams(), C, Cp, F=F_bad)


def test_bundle_rejects_indefinite_arguments():
    bad = np.diag([1.0, 1.0, -1.0])
    with pytest.raises(NotPositiveDefinite):
        stress_bundle(MaterialParams(), bad, I)
    with pytest.raises(NotPositiveDefinite):
        stress_bundle(MaterialParams(), I, bad)


# ---------------------------------------------------------------------------
# trace defect of the pulled-back Kirchhoff deviator


def test_trace_defect_conformal_stretch_vanishes(rng):
    p = _params("simo_hughes")
    Fe = 1.3 * vf.random_rotation(rng)
    closed, assembled = mat.trace_defect(p, Fe)
    assert abs(closed) <= 1e-12 * p.mu
    assert abs(assembled) <= 1e-12 * p.mu


def test_trace_defect_simple_neo_hooke_plugin_value():
    # F_e = diag(2,1,1): invariants of C_e are (6, 9, 4), so the closed form
    # mu * (3 - I1*I2/(3*I3)) = 2 * (3 - 4.5) = -3 exactly in floats.
    p = _params("simple_neo_hooke", mu=2.0)
    closed, assembled = mat.trace_defect(p, np.diag([2.0, 1.0, 1.0]))
    assert closed == -3.0
    assert assembled == pytest.approx(-3.0, abs=1e-12)


def test_trace_defect_routes_agree(rng):
    for energy in mat.ENERGIES:
        p = _params(energy)
        for _ in range(25):
            Fe = vf.random_F(rng, 0.6)
            closed, assembled = mat.trace_defect(p, Fe)
            assert abs(closed - assembled) <= 1e-10 * p.mu * max(1.0, abs(closed) / p.mu)


def test_trace_defect_sign_tracks_eigenvalue_expression(rng):
    # 3 - I1*I2/(3*I3) has the sign of 9*l1*l2*l3 - (sum l)(sum pairwise).
    p = _params("simple_neo_hooke", mu=1.0)
    for _ in range(20):
        lam = np.exp(rng.uniform(-0.8, 0.8, size=3))
        closed, _ = mat.trace_defect(p, np.diag(np.sqrt(lam)))
        s = 9.0 * lam.prod() - lam.sum() * (
            lam[0] * lam[1] + lam[0] * lam[2] + lam[1] * lam[2]
        )
        assert closed == pytest.approx(s / (3.0 * lam.prod()), rel=1e-10, abs=1e-12)


def test_trace_defect_equal_stretches_vanish():
    p = _params("isochoric_neo_hooke")
    closed, assembled = mat.trace_defect(p, np.diag([1.2, 1.2, 1.2]))
    assert abs(closed) <= 1e-13 * p.mu
    assert abs(assembled) <= 1e-13 * p.mu


def test_trace_defect_generic_stretch_is_nonzero():
    p = _params("saint_venant_kirchhoff")
    closed, assembled = mat.trace_defect(p, np.diag([2.0, 1.0, 1.0]))
    assert abs(closed) > 0.1 * p.mu
    assert assembled == pytest.approx(closed, rel=1e-10)


def test_trace_defect_rejects_reflections():
    from cpflow.errors import SingularMatrix

    with pytest.raises(SingularMatrix):
        mat.trace_defect(MaterialParams(), np.diag([1.0, 1.0, -1.0]))


def test_simo_hughes_defect_wrapper_returns_closed_form():
    p = _params("simo_hughes")
    Fe = np.diag([2.0, 1.0, 1.0])
    closed, _ = mat.trace_defect(p, Fe)
    assert mat.simo_hughes_trace_defect(p, Fe) == closed


# ---------------------------------------------------------------------------
# parameter validation


def test_material_params_validation():
    with pytest.raises(ValueError):
        MaterialParams(mu=-1.0)
    with pytest.raises(ValueError):
        MaterialParams(sigma_y=0.0)
    with pytest.raises(ValueError):
        MaterialParams(eta=0.0)
    with pytest.raises(ValueError):
        MaterialParams(energy="neo_hooke_deluxe")


def test_yield_radius_combines_factor_and_stress():
    p = MaterialParams(sigma_y=2.0, yield_radius_factor=0.5)
    assert p.yield_radius == 1.0
