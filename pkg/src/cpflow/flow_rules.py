"""Seven flow rules for the plastic metric, each coded from its own form.

Every model exposes the same contract: a yield value ``phi`` and the rate
``G`` of ``Cp_inv`` at unit plastic multiplier.  The five models that
preserve symmetry, determinant and positive definiteness of Cp are returned
in a common normalization: the conjugated frame direction
``A = sqrt(Cp) G sqrt(Cp)`` has unit Frobenius norm, so their evolution
equations become literally identical ODE fields wherever their yield values
agree.  The scalar relating the normalized direction back to the rate in the
model's own statement is kept as ``native_scale``.

The two defective models are returned raw (``native_scale = 1``): the
volumetric drift of the unimodular-trial model and the symmetry loss of the
transposed-kernel variant are the behaviors this package exists to
demonstrate, and normalizing them away would defeat the point.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import materials as mat
from . import tensors as tn
from .errors import InconsistentDeformation, ZeroDeviator

MODEL_IDS = (
    "simo_miehe1992",
    "miehe1995",
    "lion1997",
    "simo_hughes1998",
    "helm2001",
    "grandi_stefanelli2015",
    "appendix_a3",
)

#: Models whose flow preserves symmetry, unit determinant and positive
#: definiteness of Cp and dissipates energy at frozen total deformation.
CONSISTENT_MODELS = frozenset(
    ("simo_miehe1992", "miehe1995", "lion1997", "helm2001", "grandi_stefanelli2015")
)

#: Models whose evaluation needs the deformation gradient, not just C.
SPATIAL_MODELS = frozenset(("simo_miehe1992", "simo_hughes1998"))

#: Documentation metadata per model; the ellipticity entries are untested
#: metadata (the property depends on the chosen elastic energy and is not
#: machine-checked here).
MODEL_NOTES = {
    "simo_miehe1992": {
        "state": "Cp",
        "format": "spatial: rate of Cp_inv assembled from the Kirchhoff-stress normal",
        "preserves_det": True,
        "preserves_symmetry": True,
        "reduced_dissipation": True,
        "ellipticity_in_elastic_domain": "untested metadata",
    },
    "miehe1995": {
        "state": "Cp",
        "format": "referential: Cp d/dt[Cp_inv] = -direction",
        "preserves_det": True,
        "preserves_symmetry": True,
        "reduced_dissipation": True,
        "ellipticity_in_elastic_domain": "untested metadata",
    },
    "lion1997": {
        "state": "Cp",
        "format": "referential: explicit kernel in (C, Cp_inv)",
        "preserves_det": True,
        "preserves_symmetry": True,
        "reduced_dissipation": True,
        "ellipticity_in_elastic_domain": "untested metadata",
    },
    "simo_hughes1998": {
        "state": "Cp_bar (unimodular only at t=0)",
        "format": "spatial: rate scaled by tr(B_e)/3",
        "preserves_det": False,
        "preserves_symmetry": True,
        "reduced_dissipation": True,
        "ellipticity_in_elastic_domain": "untested metadata",
    },
    "helm2001": {
        "state": "Cp",
        "format": "referential: d/dt[Cp] = +direction * Cp",
        "preserves_det": True,
        "preserves_symmetry": True,
        "reduced_dissipation": True,
        "ellipticity_in_elastic_domain": "untested metadata",
    },
    "grandi_stefanelli2015": {
        "state": "Cp",
        "format": "referential: unit normal in the sqrt(Cp)-conjugated frame",
        "preserves_det": True,
        "preserves_symmetry": True,
        "reduced_dissipation": True,
        "ellipticity_in_elastic_domain": "untested metadata",
    },
    "appendix_a3": {
        "state": "Cp (leaves the symmetric cone)",
        "format": "referential: d/dt[Cp_inv] Cp = -Frobenius-normalized deviator",
        "preserves_det": True,
        "preserves_symmetry": False,
        "reduced_dissipation": True,
        "ellipticity_in_elastic_domain": "untested metadata",
    },
}


@dataclass(frozen=True)
class FlowEvaluation:
    """One model evaluated at one state.

    ``direction`` is G with d/dt[Cp_inv] = lambda * G at unit multiplier;
    ``frame_direction`` is sqrt(Cp) G sqrt(Cp) where that frame exists
    (None for the symmetry-breaking model once Cp has left the symmetric
    positive cone).  ``measure`` is the model's own deviatoric stress norm
    and ``native_scale`` the Frobenius norm of the raw frame direction
    before unit normalization.
    """

    phi: float
    direction: np.ndarray
    frame_direction: np.ndarray | None
    consistent: bool
    measure: float
    native_scale: float


_ZERO = np.zeros((3, 3))


def _check_model(model):
    if model not in MODEL_IDS:
        raise ValueError("unknown model %r (choose from %s)" % (model, ", ".join(MODEL_IDS)))


def _check_F(C, F):
    if F is None:
        raise InconsistentDeformation("this model needs the deformation gradient F")
    resid = tn.norm(F.T @ F - C)
    if resid > 1e-10 * max(1.0, tn.norm(C)):
        raise InconsistentDeformation("F^T F differs from C by %.3e" % resid)


def _elastic(phi, measure, consistent):
    return FlowEvaluation(
        phi=phi,
        direction=_ZERO.copy(),
        frame_direction=_ZERO.copy(),
        consistent=consistent,
        measure=measure,
        native_scale=1.0,
    )


def _guard_deviator(measure, params):
    if measure <= 1e-14 * params.sigma_y:
        raise ZeroDeviator(
            "deviatoric measure %.3e is below 1e-14*sigma_y while flow was requested"
            % measure
        )


def evaluate(model, params, C, Cp, F=None):
    """Yield value and unit-multiplier flow direction of one model.

    Cp may be non-symmetric only for the symmetry-breaking model; all
    others require a symmetric positive definite plastic metric.
    """
    _check_model(model)
    consistent = model in CONSISTENT_MODELS

    if model == "appendix_a3":
        return _evaluate_a3(params, C, Cp)

    C = tn.symmetrize(C)
    Cp = tn.symmetrize(Cp)
    mat._require_pd("C", C)
    mat._require_pd("Cp", Cp)
    Cp_inv = tn.symmetrize(tn.inv3(Cp))

    if model in SPATIAL_MODELS:
        _check_F(C, F)
        alpha = mat.alpha_coefficients(params, tn.principal_invariants(C @ Cp_inv))
        f1 = mat.f1_kernel(C, Cp_inv, alpha)
        tau = tn.symmetrize(2.0 * F @ f1 @ F.T)
        measure = tn.norm(tn.dev3(tau))
        phi = measure - params.yield_radius
        if phi <= 0.0:
            return _elastic(phi, measure, consistent)
        _guard_deviator(measure, params)
        n_tau = tn.dev3(tau) / measure
        f_inv = tn.inv3(F)
        be = F @ Cp_inv @ F.T
        if model == "simo_miehe1992":
            raw = -2.0 * f_inv @ (n_tau @ be) @ f_inv.T
            return _pack_normalized(raw, Cp, phi, measure)
        # simo_hughes1998: raw rate kept as published, never normalized
        raw = -(2.0 / 3.0) * tn.trace(be) * f_inv @ n_tau @ f_inv.T
        up = tn.sqrt_psd(Cp)
        return FlowEvaluation(
            phi=phi,
            direction=tn.symmetrize(raw),
            frame_direction=tn.symmetrize(up @ raw @ up),
            consistent=False,
            measure=measure,
            native_scale=1.0,
        )

    if model in ("miehe1995", "helm2001"):
        st = mat.sigma_tilde(params, C, Cp_inv)
        measure = math.sqrt(max(mat.tr_dev_square(st), 0.0))
        phi = measure - params.yield_radius
        if phi <= 0.0:
            return _elastic(phi, measure, consistent)
        _guard_deviator(measure, params)
        if model == "miehe1995":
            raw = -Cp_inv @ tn.dev3(st) / measure
        else:
            # rate of Cp itself, mapped onto the rate of its inverse
            dot_cp = (tn.dev3(st) / measure) @ Cp
            raw = -Cp_inv @ dot_cp @ Cp_inv
        return _pack_normalized(raw, Cp, phi, measure)

    if model == "lion1997":
        alpha = mat.alpha_coefficients(params, tn.principal_invariants(C @ Cp_inv))
        fh = mat.f_hat(C, Cp_inv, alpha)
        measure = mat.dev_norm_sigma_e_scalar(fh, Cp_inv)
        phi = measure - params.yield_radius
        if phi <= 0.0:
            return _elastic(phi, measure, consistent)
        _guard_deviator(measure, params)
        # the model's own denominator is half the deviator norm
        denom = 0.5 * measure
        raw = -tn.dev3(Cp_inv @ fh) @ Cp_inv / denom
        return _pack_normalized(raw, Cp, phi, measure)

    # grandi_stefanelli2015
    up_inv = tn.sqrt_psd(Cp_inv)
    dW = mat.dW_tensor(params, C @ Cp_inv)
    ring = tn.symmetrize(2.0 * up_inv @ tn.symmetrize(C @ dW) @ up_inv)
    measure = tn.norm(tn.dev3(ring))
    phi = measure - params.yield_radius
    if phi <= 0.0:
        return _elastic(phi, measure, consistent)
    _guard_deviator(measure, params)
    frame_raw = -tn.dev3(ring) / measure
    raw = up_inv @ frame_raw @ up_inv
    return _pack_normalized(raw, Cp, phi, measure)


def _pack_normalized(raw, Cp, phi, measure):
    """Unit-normalize a consistent model's direction in the frame metric."""
    up = tn.sqrt_psd(Cp)
    frame_raw = tn.symmetrize(up @ raw @ up)
    scale = tn.norm(frame_raw)
    frame = frame_raw / scale
    return FlowEvaluation(
        phi=phi,
        direction=tn.symmetrize(raw) / scale,
        frame_direction=frame,
        consistent=True,
        measure=measure,
        native_scale=scale,
    )


def _evaluate_a3(params, C, Cp):
    """The transposed-kernel variant; accepts non-symmetric Cp."""
    Cp_inv = tn.inv3(Cp)
    st = mat.sigma_tilde(params, C, Cp_inv)
    dev = tn.dev3(st)
    measure = tn.norm(dev)
    phi = measure - params.yield_radius
    if phi <= 0.0:
        return _elastic(phi, measure, False)
    _guard_deviator(measure, params)
    raw = -(dev @ Cp_inv) / measure
    frame = None
    skew = tn.norm(Cp - Cp.T)
    if skew <= 1e-12 * max(1.0, tn.norm(Cp)):
        lam = tn.eigvals_sym(tn.symmetrize(Cp))
        if lam[0] > 0.0:
            up = tn.sqrt_psd(tn.symmetrize(Cp))
            frame = up @ raw @ up
    return FlowEvaluation(
        phi=phi,
        direction=raw,
        frame_direction=frame,
        consistent=False,
        measure=measure,
        native_scale=1.0,
    )


def yield_measures_report(params, C, Cp, F):
    """The four deviatoric stress norms; all coincide under isotropy.

    Order: (||dev tau_e||, ||dev Sigma_e||, sqrt(tr[(dev Sigma_tilde)^2]),
    ||dev Sigma_ring||).
    """
    b = mat.stress_bundle(params, C, Cp, F)
    return (b.dev_norm_tau_e, b.dev_norm_sigma_e, b.F_script, b.dev_norm_sigma_ring)


def witness_curvature(H):
    """tr[(dev3 H)^2]: the second derivative of the squared tilde-stress
    yield measure in direction H.  Negative values certify that the measure
    is not the square of a norm on non-symmetric arguments."""
    return mat.tr_dev_square(np.asarray(H, dtype=float))


def _exact_curvature(entries):
    """Curvature of a small-integer-fraction matrix in exact arithmetic."""
    h = [[Fraction(v) for v in row] for row in entries]
    tr = h[0][0] + h[1][1] + h[2][2]
    d = [[h[i][j] - (tr / 3 if i == j else 0) for j in range(3)] for i in range(3)]
    total = Fraction(0)
    for i in range(3):
        for j in range(3):
            total += d[i][j] * d[j][i]
    return float(total)


#: Non-symmetric direction with curvature exactly -2: rotational increments
#: are invisible to the squared measure's positive part.
INDEFINITE_WITNESS = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])

#: Symmetric trace-free direction with curvature exactly 2/3.
POSITIVE_WITNESS = np.array(
    [[-1.0 / 3.0, 0.0, 0.0], [0.0, 2.0 / 3.0, 0.0], [0.0, 0.0, -1.0 / 3.0]]
)


def nonconvexity_witness():
    """A direction H with tr[(dev3 H)^2] = -2 exactly.

    The value is computed in exact rational arithmetic from the witness
    entries, so the returned float is -2.0 bit-for-bit.
    """
    value = _exact_curvature([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    return INDEFINITE_WITNESS.copy(), value


def positive_witness():
    """The diagonal companion witness: curvature exactly 2/3."""
    value = _exact_curvature(
        [[Fraction(-1, 3), 0, 0], [0, Fraction(2, 3), 0], [0, 0, Fraction(-1, 3)]]
    )
    return POSITIVE_WITNESS.copy(), value
