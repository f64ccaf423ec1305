"""Time integration of the plastic-metric flow along a deformation program.

Three update schemes:

* ``forward_euler`` and ``rk4`` integrate d/dt[Cp_inv] = lambda * G as a
  plain matrix ODE; they cannot preserve the determinant exactly, which is
  deliberate - two of the models are included precisely to show what their
  flows do without structural help.
* ``exponential_map`` updates
  ``Cp_inv <- Upinv expm(delta * A) Upinv`` with ``Upinv = sqrt(Cp_inv)``
  and the trace-free frame direction A, preserving symmetry exactly and the
  determinant to round-off (det expm(X) = e^{tr X}).

Two multiplier closures: Perzyna viscosity
``lambda = max(phi, 0) / (eta * sigma_y)`` and a rate-independent
consistent return that freezes the flow direction at the trial state and
solves the scalar equation phi(end of step) = 0.  Neither is part of the
models themselves; they are labeled algorithmic choices.
"""

from dataclasses import dataclass, field

import numpy as np

from . import flow_rules as fr
from . import materials as mat
from . import tensors as tn
from .errors import NoConvergence, NotPositiveDefinite

SCHEMES = ("forward_euler", "rk4", "exponential_map")
CLOSURES = ("perzyna", "consistent_return")

#: Models whose demonstrations require a scheme that does not repair their
#: structural defects.
EXPLICIT_ONLY_MODELS = frozenset(("simo_hughes1998", "appendix_a3"))


@dataclass(frozen=True)
class StepControls:
    dt: float = 1e-3
    scheme: str = "exponential_map"
    closure: str = "perzyna"
    eta: float | None = None  # falls back to MaterialParams.eta
    newton_tol: float = 1e-12
    newton_max_iter: int = 60

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.scheme not in SCHEMES:
            raise ValueError("unknown scheme %r" % (self.scheme,))
        if self.closure not in CLOSURES:
            raise ValueError("unknown closure %r" % (self.closure,))
        if self.newton_tol <= 0.0 or self.newton_max_iter <= 0:
            raise ValueError("solver tolerances must be positive")
        if self.scheme == "rk4" and self.closure == "consistent_return":
            raise ValueError(
                "rk4 has no per-step consistency equation; use perzyna or "
                "switch to forward_euler/exponential_map"
            )


@dataclass
class PlasticState:
    """Plastic metric with its cached inverse at one instant."""

    Cp: np.ndarray
    Cp_inv: np.ndarray
    t: float


def make_state(Cp=None, t=0.0, symmetric=True):
    if Cp is None:
        Cp = np.eye(3)
    Cp = np.asarray(Cp, dtype=float)
    if symmetric:
        Cp = tn.symmetrize(Cp)
    return PlasticState(Cp=Cp, Cp_inv=_inverse_of(Cp, symmetric), t=float(t))


def _inverse_of(Cp, symmetric):
    inv = tn.inv3(Cp)
    return tn.symmetrize(inv) if symmetric else inv


@dataclass
class StepInfo:
    """What the step actually applied (for records and checks)."""

    lam: float
    phi_trial: float
    direction: np.ndarray
    evaluations: int = 1


def multiplier(closure, phi, params, controls, phi_of_increment=None, dt=None):
    """Plastic multiplier for one step.

    Perzyna returns ``max(phi, 0) / (eta * sigma_y)`` directly.  The
    consistent return needs ``phi_of_increment``, the yield value as a
    function of the accumulated increment ``delta = dt * lambda`` along the
    frozen trial direction; the root is found by a safeguarded
    secant/bisection iteration and divided by dt.
    """
    if phi <= 0.0:
        return 0.0
    if closure == "perzyna":
        eta = controls.eta if controls.eta is not None else params.eta
        return phi / (eta * params.sigma_y)
    if closure != "consistent_return":
        raise ValueError("unknown closure %r" % (closure,))
    if phi_of_increment is None or dt is None:
        raise ValueError("consistent_return needs phi_of_increment and dt")
    delta = _solve_consistency(phi, phi_of_increment, params, controls)
    return delta / dt


def _solve_consistency(phi0, g, params, controls):
    """Root of g(delta) = 0 for monotone-decreasing g with g(0) = phi0 > 0."""
    tol = controls.newton_tol * params.sigma_y
    lo, g_lo = 0.0, phi0
    hi = max(phi0 / params.mu, 1e-10)
    g_hi = g(hi)
    expansions = 0
    while g_hi > 0.0:
        lo, g_lo = hi, g_hi
        hi *= 2.0
        g_hi = g(hi)
        expansions += 1
        if expansions > 80:
            raise NoConvergence(
                "could not bracket the consistency root (phi stays %.3e)" % g_hi,
                last_iterate=hi,
            )
    x, g_x = hi, g_hi
    for _ in range(controls.newton_max_iter):
        if abs(g_x) <= tol:
            return x
        # secant proposal, safeguarded by the bracket
        denom = g_hi - g_lo
        if denom != 0.0:
            x_new = hi - g_hi * (hi - lo) / denom
        else:
            x_new = 0.5 * (lo + hi)
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        g_new = g(x_new)
        if g_new > 0.0:
            lo, g_lo = x_new, g_new
        else:
            hi, g_hi = x_new, g_new
        x, g_x = x_new, g_new
        if hi - lo <= 1e-17 * max(1.0, hi):
            return x
    if abs(g_x) <= 10.0 * tol:
        return x
    raise NoConvergence(
        "consistency solve stalled at |phi| = %.3e (tol %.3e)" % (abs(g_x), tol),
        last_iterate=x,
    )


def _C_of(F):
    return tn.symmetrize(F.T @ F)


def step(state, model, params, F_next, controls, F_start=None, F_half=None):
    """Advance one step of size controls.dt driven by the given F samples.

    ``F_start``/``F_half`` default to ``F_next`` (constant-F step).
    Returns (new_state, StepInfo).
    """
    if F_start is None:
        F_start = F_next
    if F_half is None:
        F_half = F_next
    if controls.scheme == "exponential_map":
        if model in EXPLICIT_ONLY_MODELS:
            raise ValueError(
                "model %r demonstrates a flow defect that the exponential "
                "map would mask; use forward_euler or rk4" % (model,)
            )
        return _step_exponential(state, model, params, F_next, controls)
    if controls.scheme == "forward_euler":
        return _step_euler(state, model, params, F_start, F_next, controls)
    return _step_rk4(state, model, params, F_start, F_half, F_next, controls)


def _step_exponential(state, model, params, F_next, controls):
    dt = controls.dt
    C_next = _C_of(F_next)
    trial = fr.evaluate(model, params, C_next, state.Cp, F_next)
    t_new = state.t + dt
    if trial.phi <= 0.0:
        new = PlasticState(state.Cp.copy(), state.Cp_inv.copy(), t_new)
        return new, StepInfo(0.0, trial.phi, trial.direction)
    A = tn.dev3(trial.frame_direction)
    up_inv = tn.sqrt_psd(state.Cp_inv)
    a_norm = tn.norm(A)

    def apply(delta):
        if abs(delta) * a_norm > 200.0:
            raise NotPositiveDefinite(
                "exponential update diverged (exponent norm %.3g at t=%.6g); "
                "reduce dt or raise eta" % (abs(delta) * a_norm, t_new),
                matrix=state.Cp,
            )
        cp_inv = tn.symmetrize(up_inv @ tn.exp_sym(delta * A) @ up_inv)
        return cp_inv, tn.symmetrize(tn.inv3(cp_inv))

    evaluations = 1
    if controls.closure == "perzyna":
        lam = multiplier("perzyna", trial.phi, params, controls)
        delta = dt * lam
    else:
        def phi_after(delta):
            _, cp = apply(delta)
            return fr.evaluate(model, params, C_next, cp, F_next).phi

        lam = multiplier(
            "consistent_return", trial.phi, params, controls,
            phi_of_increment=phi_after, dt=dt,
        )
        delta = dt * lam
        evaluations += controls.newton_max_iter  # upper bound, informational
    cp_inv_new, cp_new = apply(delta)
    new = PlasticState(cp_new, cp_inv_new, t_new)
    return new, StepInfo(lam, trial.phi, trial.direction, evaluations)


def _perzyna_rate(model, params, controls, F, Cp_inv, symmetric):
    Cp = _inverse_of(Cp_inv, symmetric)
    ev = fr.evaluate(model, params, _C_of(F), Cp, F)
    lam = multiplier("perzyna", ev.phi, params, controls)
    return lam * ev.direction, lam, ev


def _finish_explicit(state, model, Cp_inv_new, t_new):
    if not np.all(np.isfinite(Cp_inv_new)):
        raise NotPositiveDefinite(
            "explicit step diverged to a non-finite plastic metric at "
            "t=%.6g; reduce dt or raise eta" % t_new,
            matrix=Cp_inv_new,
        )
    symmetric = model != "appendix_a3"
    if symmetric:
        Cp_inv_new = tn.symmetrize(Cp_inv_new)
    Cp_new = _inverse_of(Cp_inv_new, symmetric)
    if symmetric:
        lam_min = tn.eigvals_sym(Cp_new)[0]
        if lam_min <= 0.0:
            raise NotPositiveDefinite(
                "explicit step drove Cp out of the positive cone "
                "(min eigenvalue %.3e at t=%.6g)" % (lam_min, t_new),
                matrix=Cp_new,
            )
    return PlasticState(Cp_new, Cp_inv_new, t_new)


def _step_euler(state, model, params, F_start, F_next, controls):
    dt = controls.dt
    t_new = state.t + dt
    if controls.closure == "perzyna":
        rate, lam, ev = _perzyna_rate(
            model, params, controls, F_start, state.Cp_inv, model != "appendix_a3"
        )
        new = _finish_explicit(state, model, state.Cp_inv + dt * rate, t_new)
        return new, StepInfo(lam, ev.phi, ev.direction)
    # consistent return: freeze the direction at the trial state
    C_next = _C_of(F_next)
    trial = fr.evaluate(model, params, C_next, state.Cp, F_next)
    if trial.phi <= 0.0:
        new = PlasticState(state.Cp.copy(), state.Cp_inv.copy(), t_new)
        return new, StepInfo(0.0, trial.phi, trial.direction)
    G = trial.direction
    symmetric = model != "appendix_a3"

    def phi_after(delta):
        cp_inv = state.Cp_inv + delta * G
        cp = _inverse_of(cp_inv, symmetric)
        return fr.evaluate(model, params, C_next, cp, F_next).phi

    lam = multiplier(
        "consistent_return", trial.phi, params, controls,
        phi_of_increment=phi_after, dt=dt,
    )
    new = _finish_explicit(state, model, state.Cp_inv + dt * lam * G, t_new)
    return new, StepInfo(lam, trial.phi, G)


def _step_rk4(state, model, params, F_start, F_half, F_next, controls):
    dt = controls.dt
    symmetric = model != "appendix_a3"
    y0 = state.Cp_inv
    k1, lam1, ev1 = _perzyna_rate(model, params, controls, F_start, y0, symmetric)
    k2, lam2, _ = _perzyna_rate(model, params, controls, F_half, y0 + 0.5 * dt * k1, symmetric)
    k3, lam3, _ = _perzyna_rate(model, params, controls, F_half, y0 + 0.5 * dt * k2, symmetric)
    k4, lam4, _ = _perzyna_rate(model, params, controls, F_next, y0 + dt * k3, symmetric)
    y1 = y0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    lam = (lam1 + 2.0 * lam2 + 2.0 * lam3 + lam4) / 6.0
    new = _finish_explicit(state, model, y1, state.t + dt)
    return new, StepInfo(lam, ev1.phi, ev1.direction, evaluations=4)


@dataclass
class TrajectoryRecord:
    t: float
    F: np.ndarray
    Cp: np.ndarray
    lam: float
    phi: float
    dev_norm_tau_e: float
    dev_norm_sigma_e: float
    F_script: float
    dev_norm_sigma_ring: float
    det_residual: float
    symmetry_residual: float
    min_eigenvalue: float
    dissipation_rate: float
    energy: float


@dataclass
class Trajectory:
    model: str
    params: mat.MaterialParams
    controls: StepControls
    loading_label: str
    records: list[TrajectoryRecord] = field(default_factory=list)

    @property
    def final(self):
        return self.records[-1]


def _build_record(model, params, state, F, lam, phi, diss):
    Cp = state.Cp
    sym_resid = tn.norm(Cp - Cp.T) / max(tn.norm(Cp), 1e-300)
    Cp_sym = tn.symmetrize(Cp)
    bundle = mat.stress_bundle(params, _C_of(F), Cp_sym, F)
    min_eig = tn.eigvals_sym(Cp_sym)[0]
    return TrajectoryRecord(
        t=state.t,
        F=F.copy(),
        Cp=Cp.copy(),
        lam=lam,
        phi=phi,
        dev_norm_tau_e=bundle.dev_norm_tau_e,
        dev_norm_sigma_e=bundle.dev_norm_sigma_e,
        F_script=bundle.F_script,
        dev_norm_sigma_ring=bundle.dev_norm_sigma_ring,
        det_residual=tn.det3(Cp) - 1.0,
        symmetry_residual=sym_resid,
        min_eigenvalue=min_eig,
        dissipation_rate=diss,
        energy=bundle.energy_value,
    )


def simulate(loading, model, params, controls, initial_Cp=None):
    """Integrate one model along one loading program.

    The step count is T / dt, which must be within 1e-9 of an integer.
    Deterministic: identical arguments give identical trajectories.
    """
    n_float = loading.T / controls.dt
    n = int(round(n_float))
    if n < 1 or abs(n_float - n) > 1e-9 * max(1.0, n_float):
        raise ValueError(
            "loading duration %.6g is not an integer multiple of dt=%.6g"
            % (loading.T, controls.dt)
        )
    symmetric = model != "appendix_a3"
    state = make_state(initial_Cp, t=0.0, symmetric=symmetric)
    traj = Trajectory(
        model=model,
        params=params,
        controls=controls,
        loading_label=loading.label(),
    )
    F0 = loading.F(0.0)
    ev0 = fr.evaluate(model, params, _C_of(F0), state.Cp, F0)
    traj.records.append(_build_record(model, params, state, F0, 0.0, ev0.phi, 0.0))
    dt = controls.dt
    for k in range(1, n + 1):
        t_prev = (k - 1) * dt
        F_start = loading.F(t_prev)
        F_halfv = loading.F(t_prev + 0.5 * dt)
        F_next = loading.F(k * dt)
        diss_state = state
        state, info = step(
            state, model, params, F_next, controls,
            F_start=F_start, F_half=F_halfv,
        )
        # dissipation of the step, evaluated where the applied direction
        # was taken so overshoot past the surface does not zero it out;
        # explicit Perzyna schemes sample the direction at F_start, the
        # trial-state paths at F_next
        diss = 0.0
        if info.lam != 0.0:
            explicit_perzyna = (
                controls.scheme != "exponential_map" and controls.closure == "perzyna"
            )
            C_pair = _C_of(F_start) if explicit_perzyna else _C_of(F_next)
            kernel = C_pair @ mat.dW_tensor(params, C_pair @ diss_state.Cp_inv)
            diss = -info.lam * tn.inner(kernel, info.direction)
        traj.records.append(
            _build_record(model, params, state, F_next, info.lam, info.phi_trial, diss)
        )
    return traj
