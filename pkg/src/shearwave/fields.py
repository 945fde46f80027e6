"""Closed-form evaluation of the linear wave fields and the steady system.

Physical fields (bed-frame normalization s = 0, phase theta = k*x - f*t):

    u = -omega*y + A*cos(theta)*cosh(k*y)
    v =            A*sin(theta)*sinh(k*y)
    P = P0 + g*(h - y) + (A/k)*cos(theta)*((f + k*omega*y)*cosh(k*y)
                                           - omega*sinh(k*y))
    eta = h + a*cos(theta)

with A = a*(f + k*h*omega)/sinh(k*h).  In the steady frame X = k*x - f*t,
Y = k*y the particle motion is the autonomous planar system

    dX/dt = A*k*cos(X)*cosh(Y) - omega*Y - f
    dY/dt = A*k*sin(X)*sinh(Y)

which is Hamiltonian with H = A*k*cos(X)*sinh(Y) - omega*Y^2/2 - f*Y.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, UnsupportedConfig
from .params import HYPERBOLIC_ARG_MAX, WaveParams, NondimParams

#: Columns of the field-grid CSV export.
GRID_HEADER = "x,y,t,u,v,P,eta_flag"


def _check_hyperbolic(arg):
    if np.any(np.abs(arg) > HYPERBOLIC_ARG_MAX):
        raise DomainError(
            f"hyperbolic argument exceeds {HYPERBOLIC_ARG_MAX:g}; "
            "evaluation would overflow")


def _require_bed_frame(params: WaveParams):
    if params.s != 0.0:
        raise UnsupportedConfig(
            "physical field evaluation assumes the bed-frame normalization s = 0")


def _phase(t, x, params):
    return params.k * np.asarray(x, dtype=float) - params.f * np.asarray(t, dtype=float)


def velocity(t, x, y, params: WaveParams):
    """Velocity field (u, v) at time t and position (x, y).

    Evaluation above the instantaneous surface is permitted (the steady-frame
    analysis extends into the half-plane y >= 0); use :func:`in_fluid` to
    flag points outside the fluid domain.
    """
    _require_bed_frame(params)
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise DomainError("y must be nonnegative (the bed is at y = 0)")
    _check_hyperbolic(params.k * y)
    theta = _phase(t, x, params)
    A = params.A
    ky = params.k * y
    u = -params.omega * y + A * np.cos(theta) * np.cosh(ky)
    v = A * np.sin(theta) * np.sinh(ky)
    return u, v


def pressure(t, x, y, params: WaveParams, P0: float = 0.0):
    """Pressure per unit density (m^2/s^2) at time t and position (x, y)."""
    _require_bed_frame(params)
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise DomainError("y must be nonnegative (the bed is at y = 0)")
    _check_hyperbolic(params.k * y)
    theta = _phase(t, x, params)
    ky = params.k * y
    wave = (params.A / params.k) * np.cos(theta) * (
        (params.f + params.k * params.omega * y) * np.cosh(ky)
        - params.omega * np.sinh(ky))
    return P0 + params.g * (params.h - y) + wave


def surface(t, x, params: WaveParams):
    """Free-surface elevation eta = h + a*cos(k*x - f*t)."""
    return params.h + params.a * np.cos(_phase(t, x, params))


def in_fluid(t, x, y, params: WaveParams):
    """True where 0 <= y <= eta(t, x)."""
    y = np.asarray(y, dtype=float)
    return (y >= 0) & (y <= surface(t, x, params))


@dataclass(frozen=True)
class FieldSample:
    """All field quantities at one space-time point."""

    u: float
    v: float
    P: float
    eta: float
    P0: float = 0.0


def sample(t: float, x: float, y: float, params: WaveParams,
           P0: float = 0.0) -> FieldSample:
    u, v = velocity(t, x, y, params)
    return FieldSample(u=float(u), v=float(v),
                       P=float(pressure(t, x, y, params, P0=P0)),
                       eta=float(surface(t, x, params)), P0=P0)


def nondim_solution(x, y, nd: NondimParams):
    """Dimensionless perturbation fields (u, v, p) of the steady solution.

    ``x`` is measured in wavelengths, ``y`` in depths; the full horizontal
    velocity is the shear s - omega_nd*y plus epsilon times the returned u.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    q = 2.0 * math.pi * nd.delta
    _check_hyperbolic(q * y)
    cos2px = np.cos(2.0 * math.pi * x)
    u = q * nd.C * cos2px * np.cosh(q * y)
    v = 2.0 * math.pi * nd.C * np.sin(2.0 * math.pi * x) * np.sinh(q * y)
    p = nd.C * cos2px * (q * (nd.c_nd - nd.s_nd + nd.omega_nd * y) * np.cosh(q * y)
                         - nd.omega_nd * np.sinh(q * y))
    return u, v, p


# ----------------------------------------------------------------------
# Steady travelling frame
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SteadyCoeffs:
    """Coefficients of the steady-frame particle system.

    ``Ak`` may be negative (strong counter-current); portrait and path
    analysis normalize it positive via the half-period shift X -> X + pi
    and record the shift.
    """

    Ak: float
    omega: float
    f: float
    k: float

    @classmethod
    def from_params(cls, params: WaveParams) -> "SteadyCoeffs":
        _require_bed_frame(params)
        return cls(Ak=params.A * params.k, omega=params.omega,
                   f=params.f, k=params.k)

    def normalized(self) -> tuple["SteadyCoeffs", bool]:
        """Return coefficients with Ak >= 0 plus whether X was shifted by pi."""
        if self.Ak < 0:
            return dataclasses.replace(self, Ak=-self.Ak), True
        return self, False


def steady_rhs(X, Y, co: SteadyCoeffs):
    """Right-hand side (dX/dt, dY/dt) of the steady-frame system.

    The bed line Y = 0 is exactly invariant: sinh(0) = 0 makes dY/dt
    vanish identically there in floating point as well.
    """
    Y = np.asarray(Y, dtype=float)
    if np.any(Y < 0):
        raise DomainError("Y must be nonnegative (the bed maps to Y = 0)")
    return _steady_rhs_raw(X, Y, co)


def _steady_rhs_raw(X, Y, co: SteadyCoeffs):
    # No sign check: integrators may probe Y < 0 transiently.
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    _check_hyperbolic(Y)
    dX = co.Ak * np.cos(X) * np.cosh(Y) - co.omega * Y - co.f
    dY = co.Ak * np.sin(X) * np.sinh(Y)
    return dX, dY


def hamiltonian(X, Y, co: SteadyCoeffs):
    """Conserved quantity H = Ak*cos(X)*sinh(Y) - omega*Y^2/2 - f*Y."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    _check_hyperbolic(Y)
    return co.Ak * np.cos(X) * np.sinh(Y) - 0.5 * co.omega * Y * Y - co.f * Y


def hamiltonian_gradient(X, Y, co: SteadyCoeffs):
    """Analytic partials (dH/dX, dH/dY); the flow is (dH/dY, -dH/dX)."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    _check_hyperbolic(Y)
    dHdX = -co.Ak * np.sin(X) * np.sinh(Y)
    dHdY = co.Ak * np.cos(X) * np.cosh(Y) - co.omega * Y - co.f
    return dHdX, dHdY


# ----------------------------------------------------------------------
# Field-identity residuals (the executable form of the governing equations)
# ----------------------------------------------------------------------

class FieldResiduals(NamedTuple):
    div: float              # u_x + v_y, incompressibility
    curl_defect: float      # (v_x - u_y) - omega, constant-vorticity defect
    bed_v: float            # v at y = 0, impermeable bed
    kinematic_defect: float # v - (eta_t + U(h)*eta_x) at y = h
    dynamic_defect: float   # P - P0 - g*(eta - h) at y = h


def field_identity_residuals(t, x, y, params: WaveParams,
                             P0: float = 0.0) -> FieldResiduals:
    """Residuals of the linearized governing equations at (t, x, y).

    Divergence, curl defect and bed velocity vanish identically for any
    parameter set; the kinematic surface defect vanishes by the identity
    A*sinh(k*h) = a*(f + k*h*omega); the dynamic surface defect vanishes
    exactly when the dispersion relation holds, so it is the executable
    statement of that relation's necessity.
    """
    _require_bed_frame(params)
    y = np.asarray(y, dtype=float)
    _check_hyperbolic(params.k * y)
    A, k, f, omega = params.A, params.k, params.f, params.omega
    theta = _phase(t, x, params)
    ky = k * y

    u_x = -A * k * np.sin(theta) * np.cosh(ky)
    v_y = A * k * np.sin(theta) * np.cosh(ky)
    div = u_x + v_y

    v_x = A * k * np.cos(theta) * np.sinh(ky)
    u_y = -omega + A * k * np.cos(theta) * np.sinh(ky)
    curl_defect = (v_x - u_y) - omega

    bed_v = A * np.sin(theta) * math.sinh(0.0)

    v_surf = A * np.sin(theta) * math.sinh(k * params.h)
    eta_t = params.a * f * np.sin(theta)
    eta_x = -params.a * k * np.sin(theta)
    U_h = -omega * params.h
    kinematic_defect = v_surf - (eta_t + U_h * eta_x)

    P_surf = pressure(t, x, params.h, params, P0=P0)
    dynamic_defect = P_surf - P0 - params.g * (surface(t, x, params) - params.h)

    return FieldResiduals(div=div, curl_defect=curl_defect, bed_v=bed_v,
                          kinematic_defect=kinematic_defect,
                          dynamic_defect=dynamic_defect)


# ----------------------------------------------------------------------
# Grid export
# ----------------------------------------------------------------------

def field_grid_rows(params: WaveParams, t: float, x_grid, y_grid,
                    P0: float = 0.0):
    """Yield CSV rows (header first) of the fields on an x (outer) by y
    (inner) grid, floats at 17 significant digits."""
    yield GRID_HEADER
    for x in np.asarray(x_grid, dtype=float):
        for y in np.asarray(y_grid, dtype=float):
            u, v = velocity(t, x, y, params)
            P = pressure(t, x, y, params, P0=P0)
            flag = "inside" if bool(in_fluid(t, x, y, params)) else "outside"
            yield (f"{x:.17g},{y:.17g},{t:.17g},"
                   f"{float(u):.17g},{float(v):.17g},{float(P):.17g},{flag}")


def write_field_grid(path, params: WaveParams, t: float, x_grid, y_grid,
                     P0: float = 0.0):
    """Write the field grid CSV to ``path``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in field_grid_rows(params, t, x_grid, y_grid, P0=P0):
            fh.write(row + "\n")
