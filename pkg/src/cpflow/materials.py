"""Elastic energy families and the stress measures driving plastic flow.

Every energy is isotropic and enters only through the principal invariants
of the elastic metric product ``C Cp_inv``.  Four scalar yield measures are
computed through four genuinely different code paths so that their
coincidence under isotropy is a real cross-check, not a tautology:

* ``dev_norm_tau_e``    - spatial assembly ``tau_e = 2 F f1 F^T``
* ``dev_norm_sigma_e``  - scalar invariant formula from the ``f_hat`` kernel
* ``F_script``          - ``sqrt(tr[(dev Sigma_tilde)^2])`` with the
                          non-symmetric referential stress built from the
                          invariant partial derivatives
* ``dev_norm_sigma_ring`` - square-root conjugation of ``sym(C DW)``

The representation coefficients ``alpha_1..alpha_3`` follow the
Cayley-Hamilton form ``a1 = dW1 + I1 dW2 + I2 dW3``, ``a2 = -(dW2 + I1 dW3)``,
``a3 = dW3``; the finite-difference oracle in the test suite is the binding
contract for this path.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import tensors as tn
from .errors import InconsistentDeformation, NotPositiveDefinite, SingularMatrix

ENERGIES = (
    "simple_neo_hooke",
    "isochoric_neo_hooke",
    "saint_venant_kirchhoff",
    "simo_hughes",
)

#: Default radius multiplier on sigma_y shared by all models.  The flow-rule
#: literature alternates between two conventions for the elastic-domain
#: radius; a single shared factor is required for the model-equivalence
#: checks to be meaningful, so it is a parameter rather than a constant.
DEFAULT_YIELD_RADIUS_FACTOR = math.sqrt(2.0 / 3.0)


@dataclass(frozen=True)
class MaterialParams:
    """Material constants shared by every model.

    ``lam`` is the second Lame modulus (quadratic energy only), ``kappa``
    the bulk modulus of the volumetric terms, ``eta`` the viscous
    relaxation time of the Perzyna closure.
    """

    mu: float = 80.0
    lam: float = 120.0
    kappa: float = 160.0
    sigma_y: float = 1.0
    yield_radius_factor: float = DEFAULT_YIELD_RADIUS_FACTOR
    eta: float = 0.1
    energy: str = "isochoric_neo_hooke"

    def __post_init__(self):
        if self.mu <= 0.0:
            raise ValueError("mu must be positive")
        if self.kappa <= 0.0:
            raise ValueError("kappa must be positive")
        if self.sigma_y <= 0.0:
            raise ValueError("sigma_y must be positive")
        if self.eta <= 0.0:
            raise ValueError("eta must be positive")
        if self.yield_radius_factor < 0.0:
            raise ValueError("yield_radius_factor must be non-negative")
        if self.energy not in ENERGIES:
            raise ValueError(
                "unknown energy %r (choose from %s)" % (self.energy, ", ".join(ENERGIES))
            )

    @property
    def yield_radius(self):
        return self.yield_radius_factor * self.sigma_y


def energy_partials(params, i1, i2, i3):
    """Energy value and its partial derivatives w.r.t. (I1, I2, I3).

    Returns (w, dW1, dW2, dW3).  Requires i3 > 0 for the families with
    volumetric terms.
    """
    mu = params.mu
    if params.energy == "simple_neo_hooke":
        return 0.5 * mu * (i1 - 3.0), 0.5 * mu, 0.0, 0.0
    if params.energy == "saint_venant_kirchhoff":
        lam = params.lam
        w = 0.25 * mu * (i1 * i1 - 2.0 * i2 - 2.0 * i1 + 3.0) + 0.125 * lam * (i1 - 3.0) ** 2
        dw1 = 0.5 * mu * (i1 - 1.0) + 0.25 * lam * (i1 - 3.0)
        return w, dw1, -0.5 * mu, 0.0
    if i3 <= 0.0:
        raise NotPositiveDefinite(
            "energy %r needs det(C Cp_inv) > 0, got %.3e" % (params.energy, i3)
        )
    kappa = params.kappa
    j = i3 ** (-1.0 / 3.0)
    vol = 0.25 * kappa * ((i3 - 1.0) - math.log(i3))
    dvol = 0.25 * kappa * (1.0 - 1.0 / i3)
    if params.energy == "isochoric_neo_hooke":
        w = mu * i1 * j + vol
        dw1 = mu * j
        dw3 = -(mu / 3.0) * i1 * j / i3 + dvol
        return w, dw1, 0.0, dw3
    # simo_hughes
    w = 0.5 * mu * (i1 * j - 3.0) + vol
    dw1 = 0.5 * mu * j
    dw3 = -(mu / 6.0) * i1 * j / i3 + dvol
    return w, dw1, 0.0, dw3


def energy_value(params, C, Cp_inv):
    """W evaluated through the invariants of C Cp_inv."""
    i1, i2, i3 = tn.principal_invariants(C @ Cp_inv)
    if i3 <= 0.0:
        raise NotPositiveDefinite(
            "elastic metric product has det %.3e <= 0" % i3, matrix=C @ Cp_inv
        )
    w, _, _, _ = energy_partials(params, i1, i2, i3)
    return w


def alpha_coefficients(params, invariants):
    """Isotropic representation coefficients of D_{Ce} W.

    With (dW1, dW2, dW3) the invariant partials,
    ``D_{Ce} W = a1*1 + a2*Ce + a3*Ce^2`` where

        a1 = dW1 + I1 dW2 + I2 dW3
        a2 = -(dW2 + I1 dW3)
        a3 = dW3
    """
    i1, i2, i3 = invariants
    if i3 <= 0.0:
        raise NotPositiveDefinite("alpha coefficients need I3 > 0, got %.3e" % i3)
    _, dw1, dw2, dw3 = energy_partials(params, i1, i2, i3)
    return dw1 + i1 * dw2 + i2 * dw3, -(dw2 + i1 * dw3), dw3


def dW_tensor(params, X):
    """Gradient of the invariant energy at a (possibly non-symmetric) X.

    ``DW(X) = dW1*1 + dW2*(I1*1 - X^T) + dW3*Cof(X)`` in the Frobenius
    pairing ``<A, B> = tr(A B^T)``.
    """
    i1, i2, i3 = tn.principal_invariants(X)
    _, dw1, dw2, dw3 = energy_partials(params, i1, i2, i3)
    out = (dw1 + dw2 * i1) * tn.I3 - dw2 * X.T
    if dw3 != 0.0:
        out = out + dw3 * tn.cof3(X)
    return out


def f_hat(C, Cp_inv, alpha):
    """Referential kernel a1*C + a2*C Cp_inv C + a3*C Cp_inv C Cp_inv C."""
    a1, a2, a3 = alpha
    cic = C @ Cp_inv @ C
    out = a1 * C + a2 * cic
    if a3 != 0.0:
        out = out + a3 * (cic @ Cp_inv @ C)
    return out


def f1_kernel(C, Cp_inv, alpha):
    """Kirchhoff kernel: tau_e = 2 F f1 F^T, with f1 = DW(C Cp_inv) Cp_inv."""
    a1, a2, a3 = alpha
    ici = Cp_inv @ C @ Cp_inv
    out = a1 * Cp_inv + a2 * ici
    if a3 != 0.0:
        out = out + a3 * (ici @ C @ Cp_inv)
    return out


def sigma_tilde(params, C, Cp_inv):
    """Non-symmetric referential stress 2 C DW(C Cp_inv) Cp_inv.

    Valid for general invertible Cp (no symmetry assumed), which is what
    the symmetry-breaking flow rule needs once its state has drifted.
    """
    X = C @ Cp_inv
    i3 = tn.det3(X)
    if i3 <= 0.0:
        raise NotPositiveDefinite("elastic metric product has det %.3e <= 0" % i3, matrix=X)
    return 2.0 * C @ dW_tensor(params, X) @ Cp_inv


def tr_dev_square(a):
    """tr[(dev3 a)^2] for arbitrary a; negative for some non-symmetric a."""
    d = tn.dev3(a)
    return tn.inner(d, d.T)


def dev_norm_sigma_e_scalar(fh, Cp_inv):
    """||dev Sigma_e|| from the invariant formula 2*sqrt(tr(M^2) - tr(M)^2/3)
    with M = f_hat Cp_inv (the trace arguments are similarity invariants, so
    no intermediate-configuration quantities are needed)."""
    m = fh @ Cp_inv
    t1 = tn.trace(m)
    t2 = tn.inner(m, m.T)
    return 2.0 * math.sqrt(max(t2 - t1 * t1 / 3.0, 0.0))


@dataclass(frozen=True)
class StressBundle:
    """Every stress measure evaluated at one state.

    ``sigma_e_pushforward`` is the referential image of the intermediate
    stress (2*f1); ``tau_e`` and its deviator norm are filled only when the
    deformation gradient is supplied.
    """

    sigma_e_pushforward: np.ndarray
    sigma_tilde: np.ndarray
    sigma_ring: np.ndarray
    tau_e: np.ndarray | None
    dev_norm_sigma_e: float
    dev_norm_tau_e: float | None
    F_script: float
    dev_norm_sigma_ring: float
    energy_value: float


def _require_pd(name, s):
    lam = tn.eigvals_sym(s)
    if lam[0] <= 0.0:
        raise NotPositiveDefinite(
            "%s must be positive definite (min eigenvalue %.3e)" % (name, lam[0]),
            matrix=s,
        )


def stress_bundle(params, C, Cp, F=None):
    """Evaluate all stress measures at (C, Cp), optionally with F.

    Raises
    ------
    NotPositiveDefinite
        C or Cp outside the admissible cone.
    InconsistentDeformation
        F supplied but F^T F does not reproduce C within 1e-10.
    """
    C = tn.symmetrize(C)
    Cp = tn.symmetrize(Cp)
    _require_pd("C", C)
    _require_pd("Cp", Cp)
    if F is not None:
        resid = tn.norm(F.T @ F - C)
        if resid > 1e-10 * max(1.0, tn.norm(C)):
            raise InconsistentDeformation(
                "F^T F differs from C by %.3e" % resid
            )
    Cp_inv = tn.symmetrize(tn.inv3(Cp))

    X = C @ Cp_inv
    invs = tn.principal_invariants(X)
    w, _, _, _ = energy_partials(params, *invs)
    dW = dW_tensor(params, X)
    st = 2.0 * C @ dW @ Cp_inv
    f_script = math.sqrt(max(tr_dev_square(st), 0.0))

    alpha = alpha_coefficients(params, invs)
    fh = f_hat(C, Cp_inv, alpha)
    dev_sig_e = dev_norm_sigma_e_scalar(fh, Cp_inv)

    f1 = f1_kernel(C, Cp_inv, alpha)
    push = tn.symmetrize(2.0 * f1)

    up_inv = tn.sqrt_psd(Cp_inv)
    ring = 2.0 * up_inv @ tn.symmetrize(C @ dW) @ up_inv
    ring = tn.symmetrize(ring)
    dev_ring = tn.norm(tn.dev3(ring))

    tau = None
    dev_tau = None
    if F is not None:
        tau = tn.symmetrize(2.0 * F @ f1 @ F.T)
        dev_tau = tn.norm(tn.dev3(tau))

    return StressBundle(
        sigma_e_pushforward=push,
        sigma_tilde=st,
        sigma_ring=ring,
        tau_e=tau,
        dev_norm_sigma_e=dev_sig_e,
        dev_norm_tau_e=dev_tau,
        F_script=f_script,
        dev_norm_sigma_ring=dev_ring,
        energy_value=w,
    )


def trace_defect(params, F_e):
    """Trace of F_e^{-1} dev3(tau_e) F_e^{-T}, closed form and assembled.

    The scalar that the volumetric-consistency argument hinges on: it
    vanishes exactly when F_e is a conformal stretch (lam * rotation) and is
    generically nonzero otherwise.  Returns (closed_form, assembled); the
    two routes share no matrix code.

    For the quadratic (Saint-Venant-Kirchhoff) family both routes use the
    reduced shear stress mu*(B_e - 1) + (lam/2) tr(C_e - 1) * 1, whose
    deviator carries the whole effect.
    """
    d = tn.det3(F_e)
    if d <= 0.0:
        raise SingularMatrix("trace defect needs det F_e > 0", matrix=F_e)
    Ce = tn.symmetrize(F_e.T @ F_e)
    i1, i2, i3 = tn.principal_invariants(Ce)
    base = 3.0 - i1 * i2 / (3.0 * i3)
    mu = params.mu
    if params.energy == "simple_neo_hooke":
        closed = mu * base
    elif params.energy == "isochoric_neo_hooke":
        closed = 2.0 * mu * i3 ** (-1.0 / 3.0) * base
    elif params.energy == "simo_hughes":
        closed = mu * i3 ** (-1.0 / 3.0) * base
    else:  # saint_venant_kirchhoff, reduced stress
        closed = mu * base

    Be = tn.symmetrize(F_e @ F_e.T)
    if params.energy == "saint_venant_kirchhoff":
        tau = mu * (Be - tn.I3) + 0.5 * params.lam * (i1 - 3.0) * tn.I3
    else:
        _, dw1, dw2, dw3 = energy_partials(params, i1, i2, i3)
        dce = dw1 * tn.I3 + dw2 * (i1 * tn.I3 - Ce) + dw3 * tn.cof3(Ce)
        tau = 2.0 * F_e @ dce @ F_e.T
    fe_inv = tn.inv3(F_e)
    assembled = tn.trace(fe_inv @ tn.dev3(tau) @ fe_inv.T)
    return closed, assembled


def simo_hughes_trace_defect(params, F_e):
    """Closed-form value of the trace defect (see :func:`trace_defect`)."""
    closed, _ = trace_defect(params, F_e)
    return closed
