"""Deformation-gradient programs F(t) that drive the material point.

A program is a kind plus an amplitude schedule: (time, value) knots with
linear interpolation, clamped outside the knot range.  The stretch kinds
are volume preserving by construction so that volumetric elasticity stays
quiet and the deviatoric flow under study is isolated.
"""

from dataclasses import dataclass, field

import numpy as np

from . import tensors as tn
from .errors import ValidationError

KINDS = ("simple_shear", "uniaxial_stretch", "biaxial_stretch", "relaxation", "piecewise_table")

_DET_SAMPLES = 513


def _F_simple_shear(gamma):
    f = np.eye(3)
    f[0, 1] = gamma
    return f


def _F_uniaxial(s):
    if s <= 0.0:
        raise ValidationError("uniaxial stretch must be positive, got %g" % s, field="schedule")
    return np.diag([s, s ** -0.5, s ** -0.5])


def _F_biaxial(s):
    if s <= 0.0:
        raise ValidationError("biaxial stretch must be positive, got %g" % s, field="schedule")
    return np.diag([s, s, s ** -2.0])


_BUILDERS = {
    "simple_shear": _F_simple_shear,
    "uniaxial_stretch": _F_uniaxial,
    "biaxial_stretch": _F_biaxial,
}


@dataclass(frozen=True)
class LoadingProgram:
    """F(t) defined by a kind and an interpolated amplitude schedule."""

    kind: str
    T: float
    schedule: tuple = ()
    base_kind: str | None = None  # relaxation only: which builder holds the value
    table: tuple = ()  # piecewise_table only: rows (t, F11..F33 row-major)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError("unknown loading kind %r" % (self.kind,), field="kind")
        if self.T <= 0.0:
            raise ValidationError("loading duration must be positive", field="T")
        if self.kind == "piecewise_table":
            if len(self.table) < 2:
                raise ValidationError("piecewise table needs at least two rows", field="table")
            times = [row[0] for row in self.table]
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ValidationError("table times must be strictly increasing", field="table")
            if any(len(row) != 10 for row in self.table):
                raise ValidationError("table rows must be (t, 9 F entries)", field="table")
        else:
            if self.kind == "relaxation":
                if self.base_kind not in _BUILDERS:
                    raise ValidationError(
                        "relaxation needs base_kind in %s" % (tuple(_BUILDERS),),
                        field="base_kind",
                    )
            if len(self.schedule) < 1:
                raise ValidationError("schedule needs at least one knot", field="schedule")
            times = [k[0] for k in self.schedule]
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ValidationError(
                    "schedule times must be strictly increasing", field="schedule"
                )
        for t in np.linspace(0.0, self.T, _DET_SAMPLES):
            if tn.det3(self.F(float(t))) <= 0.0:
                raise ValidationError(
                    "program leaves det F > 0 at t=%.6g" % t, field="schedule"
                )

    def value(self, t):
        """Interpolated schedule amplitude at time t (clamped)."""
        ts = np.array([k[0] for k in self.schedule])
        vs = np.array([k[1] for k in self.schedule])
        return float(np.interp(t, ts, vs))

    def F(self, t):
        if self.kind == "piecewise_table":
            ts = np.array([row[0] for row in self.table])
            entries = np.array([row[1:] for row in self.table])
            flat = np.array([np.interp(t, ts, entries[:, j]) for j in range(9)])
            return flat.reshape(3, 3)
        if self.kind == "relaxation":
            # frozen F: the held amplitude is the last (only) schedule value
            return _BUILDERS[self.base_kind](self.value(self.T))
        return _BUILDERS[self.kind](self.value(t))

    def label(self):
        if self.kind == "piecewise_table":
            return "piecewise_table(%d rows, T=%g)" % (len(self.table), self.T)
        if self.kind == "relaxation":
            return "relaxation(%s at %g, T=%g)" % (
                self.base_kind, self.value(self.T), self.T
            )
        v0 = self.value(0.0)
        v1 = self.value(self.T)
        return "%s(%g -> %g, T=%g)" % (self.kind, v0, v1, self.T)


def simple_shear(gamma_end, T=1.0, gamma_start=0.0):
    """Monotone simple shear F = 1 + gamma(t) e1 (x) e2."""
    return LoadingProgram(
        kind="simple_shear", T=T, schedule=((0.0, gamma_start), (T, gamma_end))
    )


def uniaxial_stretch(stretch_end, T=1.0, stretch_start=1.0):
    """Isochoric uniaxial stretch diag(s, 1/sqrt(s), 1/sqrt(s))."""
    return LoadingProgram(
        kind="uniaxial_stretch", T=T, schedule=((0.0, stretch_start), (T, stretch_end))
    )


def biaxial_stretch(stretch_end, T=1.0, stretch_start=1.0):
    """Isochoric equi-biaxial stretch diag(s, s, 1/s^2)."""
    return LoadingProgram(
        kind="biaxial_stretch", T=T, schedule=((0.0, stretch_start), (T, stretch_end))
    )


def relaxation(base_kind, held_value, T=1.0):
    """Frozen deformation: F constant at the base kind's held amplitude."""
    return LoadingProgram(
        kind="relaxation", T=T, schedule=((0.0, held_value),), base_kind=base_kind
    )


def piecewise_table(rows, T=None):
    """Entrywise-linear F(t) through explicit (t, F11..F33) rows."""
    rows = tuple(tuple(float(x) for x in row) for row in rows)
    if T is None:
        T = rows[-1][0]
    return LoadingProgram(kind="piecewise_table", T=T, table=rows)


def stretch_then_shear(stretch, gamma, T=1.0):
    """Two-phase non-proportional program: ramp an isochoric uniaxial
    stretch over the first half, then add simple shear in the stretched
    frame over the second half.  This is the program that makes the
    symmetry-breaking flow visible: single-phase (proportional) programs
    keep the commutators small."""
    def F_at(t):
        s = 1.0 + (stretch - 1.0) * min(t, 0.5 * T) / (0.5 * T)
        g = gamma * max(t - 0.5 * T, 0.0) / (0.5 * T)
        f = np.diag([s, s ** -0.5, s ** -0.5])
        f[0, 1] = g
        return f

    ts = np.linspace(0.0, T, 41)
    rows = [(float(t), *F_at(float(t)).reshape(-1)) for t in ts]
    return piecewise_table(rows, T=T)
