"""Particle trajectories, transit times, and per-period drift.

Steady-frame orbits are level curves of the Hamiltonian; the physical
particle path is recovered through x = (X + f*t)/k, y = Y/k.  Whether a
particle drifts with or against the wave is decided by the transit time
tau of its steady orbit across one period: over a transit the physical
displacement is (f*tau - 2*pi)/k, so tau > 2*pi/f means forward drift.

Orbit families and how each is handled:

* bed / interior-wave orbits traverse X from pi to -pi: tau comes from
  quadrature of dt = dX / (-dX/dt) along the H-level curve, cross-checked
  against event-detected time integration;
* vortex orbits (negative-vorticity cat's-eye) are closed in the steady
  frame: the loop period is found by integrating half a loop between the
  two crossings of the X = pi section, and the particle advances f*T/k
  per loop;
* surface-layer orbits between the two isocline branches move with
  dX/dt > 0, so the physical velocity (dX/dt + f)/k is positive
  throughout: constant forward motion;
* unbounded orbits hug a vertical asymptote, so X stays bounded and the
  mean physical velocity is f/k.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, ode, quad, solve_ivp
from scipy.optimize import brentq

from .errors import DomainError, NumericsError, UnsupportedConfig
from .fields import SteadyCoeffs, hamiltonian
from .params import WaveParams
from .portrait import CriticalPoint, find_critical_points, phi

#: Hard ceiling for |Y| during integration; beyond it cosh overflows.
Y_GUARD = 700.0

#: Relative agreement required between the two transit-time routes.
TAU_CROSS_CHECK_RTOL = 1e-8

#: Columns of the exported CSV files.
TRAJECTORY_HEADER = "t,X,Y,x,y,H"
DRIFT_HEADER = "Y0,y0_m,tau,drift_m,direction,layer"

LAYERS = ("bed_adjacent", "internal_wave", "vortex", "surface_wave", "unbounded")


# ----------------------------------------------------------------------
# Frame conversion
# ----------------------------------------------------------------------

def to_physical(traj: "Trajectory", co: SteadyCoeffs | None = None):
    """Physical path (x, y) in meters from a steady-frame trajectory.

    Inverts X = k*x - f*t, Y = k*y; when the trajectory was integrated in
    the shift-normalized frame (negative wave coefficient), the half-period
    shift is removed first.
    """
    co = co or traj.co
    shift = math.pi if traj.shifted else 0.0
    x = (traj.X - shift + co.f * traj.t) / co.k
    y = traj.Y / co.k
    return x, y


def to_steady(t, x, y, co: SteadyCoeffs, shifted: bool = False):
    """Steady-frame coordinates (X, Y) of a physical state."""
    shift = math.pi if shifted else 0.0
    X = co.k * np.asarray(x, float) - co.f * np.asarray(t, float) + shift
    Y = co.k * np.asarray(y, float)
    return X, Y


# ----------------------------------------------------------------------
# Integration
# ----------------------------------------------------------------------

@dataclass
class Trajectory:
    """Time-stamped steady and physical states with a Hamiltonian audit."""

    t: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    x: np.ndarray
    y: np.ndarray
    H: np.ndarray
    co: SteadyCoeffs
    shifted: bool = False
    layer: str | None = None
    truncated: bool = False
    method: str = "adaptive"

    @property
    def h_drift(self) -> float:
        """max |H(t) - H(0)|, the integrator-quality audit."""
        return float(np.max(np.abs(self.H - self.H[0])))

    @property
    def h_drift_scaled(self) -> float:
        return self.h_drift / (1.0 + abs(float(self.H[0])))


def _make_trajectory(t, X, Y, co, shifted, truncated, method) -> Trajectory:
    t = np.asarray(t, float)
    X = np.asarray(X, float)
    Y = np.asarray(Y, float)
    H = np.asarray(hamiltonian(X, Y, co), float)
    traj = Trajectory(t=t, X=X, Y=Y, x=np.empty_like(t), y=np.empty_like(t),
                      H=H, co=co, shifted=shifted, truncated=truncated,
                      method=method)
    traj.x, traj.y = to_physical(traj)
    return traj


def integrate_steady(X0: float, Y0: float, co: SteadyCoeffs, t_end: float,
                     rtol: float = 1e-10, atol: float = 1e-12,
                     method: str = "adaptive", dt: float | None = None,
                     t_eval=None, shifted: bool = False) -> Trajectory:
    """Integrate the steady system from (X0, Y0) over [0, t_end].

    ``method="adaptive"`` uses an 8th-order embedded Runge-Kutta pair with
    the given tolerances; ``method="midpoint"`` is a fixed-step implicit
    midpoint rule (symplectic) with step ``dt`` for long-horizon runs.
    The Hamiltonian is recorded at every accepted step; the audit, not the
    scheme, is the quality gate.  A trajectory escaping |Y| > 700 is
    truncated and flagged.
    """
    if Y0 < 0:
        raise DomainError("Y0 must be nonnegative")
    if not t_end > 0:
        raise DomainError("t_end must be positive")
    if method == "adaptive":
        traj = _integrate_adaptive(X0, Y0, co, t_end, rtol, atol, t_eval, shifted)
    elif method == "midpoint":
        if dt is None:
            dt = t_end / 2000.0
        traj = _integrate_midpoint(X0, Y0, co, t_end, dt, shifted)
    else:
        raise DomainError(f"unknown method {method!r}")
    if co.Ak >= 0:
        try:
            ysec = section_height(X0, Y0, co)
            traj.layer = ("unbounded" if ysec is None
                          else classify_layer(ysec, co))
        except NumericsError:
            traj.layer = None
    return traj


#: |Y| above which a step-size collapse is read as an escape to infinity
#: (the hyperbolic blow-up outruns the representable time resolution long
#: before |Y| reaches the overflow guard).
Y_ESCAPE_MIN = 30.0


def _rhs(t, z, co):
    # Integrator stage probes may overshoot into overflow territory; let
    # inf/nan propagate so the step is rejected instead of raising.
    X, Y = z
    with np.errstate(over="ignore", invalid="ignore"):
        return (co.Ak * np.cos(X) * np.cosh(Y) - co.omega * Y - co.f,
                co.Ak * np.sin(X) * np.sinh(Y))


def _integrate_adaptive(X0, Y0, co, t_end, rtol, atol, t_eval, shifted):
    if t_eval is not None:
        return _integrate_adaptive_sampled(X0, Y0, co, t_end, rtol, atol,
                                           t_eval, shifted)
    # Accepted-step output via the compiled 8th-order pair; the pure-Python
    # driver is an order of magnitude slower on long horizons.
    Ak, omega, f = co.Ak, co.omega, co.f

    def rhs(t, z):
        # The compiled driver needs a list; a tuple fails conversion.
        try:
            return [Ak * math.cos(z[0]) * math.cosh(z[1]) - omega * z[1] - f,
                    Ak * math.sin(z[0]) * math.sinh(z[1])]
        except (OverflowError, ValueError):
            return [math.inf, math.inf]

    ts: list[float] = []
    Xs: list[float] = []
    Ys: list[float] = []
    escaped = [False]

    def solout(t, z):
        if ts and t == ts[-1]:
            return 0
        ts.append(t)
        Xs.append(z[0])
        Ys.append(z[1])
        if abs(z[1]) > Y_GUARD:
            escaped[0] = True
            return -1
        return 0

    solver = ode(rhs).set_integrator("dop853", rtol=rtol, atol=atol,
                                     nsteps=10 ** 9)
    solver.set_solout(solout)
    solver.set_initial_value([float(X0), float(Y0)], 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        solver.integrate(t_end)
    if not ts or ts[0] != 0.0:
        ts.insert(0, 0.0)
        Xs.insert(0, float(X0))
        Ys.insert(0, float(Y0))
    if not solver.successful() and not escaped[0]:
        if max(abs(y) for y in Ys) > Y_ESCAPE_MIN:
            # The hyperbolic blow-up outruns the representable time
            # resolution long before |Y| reaches the overflow guard.
            escaped[0] = True
        else:
            raise NumericsError("integration step failure",
                                diagnostics={"t_reached": ts[-1],
                                             "t_end": t_end})
    return _make_trajectory(ts, Xs, Ys, co, shifted, escaped[0], "adaptive")


def _integrate_adaptive_sampled(X0, Y0, co, t_end, rtol, atol, t_eval, shifted):
    guard = lambda t, z, co_: Y_GUARD - abs(z[1])
    guard.terminal = True
    sol = solve_ivp(_rhs, (0.0, t_end), (float(X0), float(Y0)), args=(co,),
                    method="DOP853", rtol=rtol, atol=atol, t_eval=t_eval,
                    events=guard, dense_output=False)
    if sol.status == -1:
        if sol.t.size and np.max(np.abs(sol.y[1])) > Y_ESCAPE_MIN:
            return _make_trajectory(sol.t, sol.y[0], sol.y[1], co, shifted,
                                    True, "adaptive")
        raise NumericsError("integration step failure",
                            diagnostics={"message": sol.message,
                                         "t_reached": float(sol.t[-1])
                                         if sol.t.size else 0.0})
    truncated = sol.status == 1
    return _make_trajectory(sol.t, sol.y[0], sol.y[1], co, shifted,
                            truncated, "adaptive")


def _integrate_midpoint(X0, Y0, co, t_end, dt, shifted):
    n = max(1, int(round(t_end / dt)))
    dt = t_end / n
    ts = np.linspace(0.0, t_end, n + 1)
    Z = np.empty((n + 1, 2))
    Z[0] = (X0, Y0)
    z = np.array([X0, Y0], dtype=float)
    for i in range(n):
        zm = z + 0.5 * dt * np.asarray(_rhs(0.0, z, co))
        # Newton on z_new = z + dt * F((z + z_new)/2).
        z_new = z + dt * np.asarray(_rhs(0.0, zm, co))
        for _ in range(8):
            mid = 0.5 * (z + z_new)
            F = np.asarray(_rhs(0.0, mid, co))
            G = z_new - z - dt * F
            if float(np.max(np.abs(G))) < 1e-14 * (1.0 + float(np.max(np.abs(z)))):
                break
            X, Y = mid
            J = np.array([
                [-co.Ak * math.sin(X) * math.cosh(Y),
                 co.Ak * math.cos(X) * math.sinh(Y) - co.omega],
                [co.Ak * math.cos(X) * math.sinh(Y),
                 co.Ak * math.sin(X) * math.cosh(Y)]])
            M = np.eye(2) - 0.5 * dt * J
            z_new = z_new - np.linalg.solve(M, G)
        z = z_new
        if abs(z[1]) > Y_GUARD:
            Z = Z[:i + 2]
            ts = ts[:i + 2]
            Z[i + 1] = z
            return _make_trajectory(ts, Z[:, 0], Z[:, 1], co, shifted,
                                    True, "midpoint")
        Z[i + 1] = z
    return _make_trajectory(ts, Z[:, 0], Z[:, 1], co, shifted, False, "midpoint")


# ----------------------------------------------------------------------
# Layer classification
# ----------------------------------------------------------------------

def _h_at_pi(Y, co):
    return float(hamiltonian(math.pi, Y, co))


def layer_boundaries(co_n: SteadyCoeffs,
                     cps: list[CriticalPoint] | None = None) -> dict:
    """Heights on the X = pi section separating the orbit families.

    For the three-point regime, returns the saddle/center heights plus the
    two crossings of the vortex-bounding level H = H(P0) on that section.
    """
    if cps is None:
        cps = find_critical_points(co_n)
    out = {"critical_points": cps}
    saddles0 = [cp for cp in cps if cp.X == 0.0]
    at_pi = sorted((cp for cp in cps if cp.X != 0.0), key=lambda cp: cp.Y)
    if saddles0:
        out["H0"] = saddles0[0].H_value
        out["Y_P0"] = saddles0[0].Y
    if len(at_pi) == 2:
        p1, p2 = at_pi
        out["Y_P1"], out["Y_P2"] = p1.Y, p2.Y
        H0 = out["H0"]
        out["Y_lower"] = brentq(lambda Y: _h_at_pi(Y, co_n) - H0, 1e-300, p1.Y,
                                xtol=1e-15, maxiter=200)
        out["Y_upper"] = brentq(lambda Y: _h_at_pi(Y, co_n) - H0, p1.Y, p2.Y,
                                xtol=1e-15, maxiter=200)
    elif saddles0:
        # Single saddle: the bounded region below its level on X = pi.
        H0 = out["H0"]
        lo, hi = 1e-300, saddles0[0].Y
        while _h_at_pi(hi, co_n) > H0:
            hi *= 2.0
            if hi > Y_GUARD:
                raise NumericsError("failed to bracket the bounding level")
        out["Y_lower"] = brentq(lambda Y: _h_at_pi(Y, co_n) - H0, lo, hi,
                                xtol=1e-15, maxiter=200)
    return out


def section_height(X0: float, Y0: float, co_n: SteadyCoeffs) -> float | None:
    """Height at which the orbit through (X0, Y0) crosses the X = pi section.

    The orbit is the H-level curve through the point; which monotone piece
    of H(pi, .) it crosses is decided by the point's position relative to
    the isocline branches at X0 (below the lower branch, between branches,
    or above the upper one).  Returns None for orbits that never reach the
    section (e.g. the unbounded family hugging a vertical asymptote).
    """
    from .portrait import _isocline_roots
    if Y0 < 0:
        raise DomainError("Y0 must be nonnegative")
    if Y0 == 0.0 or co_n.Ak == 0.0:
        return Y0
    H0 = float(hamiltonian(X0, Y0, co_n))
    region = sum(1 for r in _isocline_roots(float(X0), co_n, Y_GUARD) if r < Y0)
    crits = _isocline_roots(math.pi, co_n, Y_GUARD)

    def solve_on(lo, hi):
        flo = _h_at_pi(lo, co_n) - H0
        fhi = _h_at_pi(hi, co_n) - H0
        if flo == 0.0:
            return lo
        if fhi == 0.0:
            return hi
        if flo * fhi > 0:
            return None
        return brentq(lambda y: _h_at_pi(y, co_n) - H0, lo, hi,
                      xtol=1e-15, maxiter=300)

    if region == 0:
        hi = crits[0] if crits else 1.0
        if not crits:
            while _h_at_pi(hi, co_n) > H0:
                hi *= 2.0
                if hi > Y_GUARD:
                    return None
        return solve_on(0.0, hi)
    if len(crits) < 2:
        return None  # no rising piece on the section: asymptote-bound orbit
    if region == 1:
        return solve_on(crits[0], crits[1])
    hi = crits[1] + 1.0
    while _h_at_pi(hi, co_n) > H0:
        hi *= 2.0
        if hi > Y_GUARD:
            return None
    return solve_on(crits[1], hi)


def classify_layer(Y0: float, co_n: SteadyCoeffs,
                   boundaries: dict | None = None) -> str:
    """Orbit family of the trajectory through (pi, Y0), by H-level comparison."""
    if Y0 < 0:
        raise DomainError("Y0 must be nonnegative")
    if Y0 == 0.0:
        return "bed_adjacent"
    if boundaries is None:
        boundaries = layer_boundaries(co_n)
    cps = boundaries["critical_points"]
    if not cps:
        # Wave-free or degenerate flow: every level transits.
        return "internal_wave"
    if "Y_P1" in boundaries:
        H0 = boundaries["H0"]
        if _h_at_pi(Y0, co_n) < H0 and Y0 < boundaries["Y_P2"]:
            return "vortex"
        if Y0 < boundaries["Y_P1"]:
            return "internal_wave"
        if Y0 <= boundaries["Y_P2"]:
            return "surface_wave"
        return "unbounded"
    if "Y_lower" in boundaries:
        return "internal_wave" if Y0 < boundaries["Y_lower"] else "unbounded"
    return "internal_wave"  # no bounding level: every height transits


# ----------------------------------------------------------------------
# Transit time
# ----------------------------------------------------------------------

def _level_solver(co: SteadyCoeffs, H0: float, rising: bool):
    """Y(X) on the level H(X, Y) = H0, Newton with cached warm start.

    ``rising=False`` solves on the monotone-decreasing stretch below the
    lower isocline branch (leftward transits); ``rising=True`` on the
    increasing stretch between branches (surface-layer transits).
    """
    cache = {"y": None}
    tol = 1e-14 * (1.0 + abs(H0))

    def residual(X, y):
        return float(hamiltonian(X, y, co)) - H0

    def bracket(X):
        from .portrait import _isocline_roots
        roots = _isocline_roots(X, co, Y_GUARD)
        if not rising:
            hi = roots[0] if roots else None
            if hi is None:
                hi = 1.0
                while residual(X, hi) > 0:
                    hi *= 2.0
                    if hi > Y_GUARD:
                        raise NumericsError("level bracket escaped the guard",
                                            diagnostics={"X": X, "H0": H0})
            return 0.0, hi
        if not roots:
            raise NumericsError("no isocline root: level is not in a rising region",
                                diagnostics={"X": X, "H0": H0})
        lo = roots[0]
        hi = roots[1] if len(roots) > 1 else None
        if hi is None:
            hi = lo + 1.0
            while residual(X, hi) < 0:
                hi *= 2.0
                if hi > Y_GUARD:
                    raise NumericsError("level bracket escaped the guard",
                                        diagnostics={"X": X, "H0": H0})
        return lo, hi

    def y_of_x(X: float) -> float:
        y = cache["y"]
        if y is not None:
            for _ in range(50):
                r = residual(X, y)
                if abs(r) <= tol:
                    cache["y"] = y
                    return y
                d = float(phi(y, X, co))
                if d == 0.0:
                    break
                y_new = y - r / d
                if y_new < 0.0 or not math.isfinite(y_new):
                    break
                y = y_new
        lo, hi = bracket(X)
        y = brentq(lambda yy: residual(X, yy), lo, hi,
                   xtol=1e-15, maxiter=300)
        for _ in range(3):
            d = float(phi(y, X, co))
            if d == 0.0:
                break
            y = min(max(y - residual(X, y) / d, lo), hi)
        cache["y"] = y
        return y

    return y_of_x


def _tau_quadrature(Y0: float, co_n: SteadyCoeffs, rising: bool) -> float | None:
    """Transit time over one X-period along the orbit through (pi, Y0)."""
    if co_n.Ak == 0.0:
        # Pure shear: uniform steady X-speed -(f + omega*Y0); no leftward
        # transit when the level outruns the wave.
        speed_left = co_n.f + co_n.omega * Y0
        if speed_left == 0.0:
            return None
        return 2.0 * math.pi / abs(speed_left)
    if Y0 == 0.0:
        integrand = lambda X: 1.0 / (co_n.f - co_n.Ak * math.cos(X))
    else:
        H0 = float(hamiltonian(math.pi, Y0, co_n))
        y_of_x = _level_solver(co_n, H0, rising)
        sign = 1.0 if rising else -1.0
        def integrand(X):
            return sign / float(phi(y_of_x(X), X, co_n))
    # The orbit is mirror-symmetric in X, so integrate a half period.  On
    # levels hugging a separatrix the integrand steepens and quad reports a
    # (harmless) roundoff warning; the event-detection cross-check guards
    # the actual accuracy.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(integrand, 0.0, math.pi, epsabs=1e-13, epsrel=1e-12,
                      limit=400)
    return 2.0 * val


def _tau_integration(Y0: float, co_n: SteadyCoeffs, rising: bool,
                     rtol: float = 1e-12, atol: float = 1e-13,
                     max_periods: float = 10000.0) -> float:
    """Event-detected transit time from direct integration."""
    direction = 1.0 if rising else -1.0
    target = math.pi + direction * 2.0 * math.pi

    def event(t, z, co):
        return z[0] - target
    event.terminal = True
    event.direction = direction

    t_max = max_periods * 2.0 * math.pi / co_n.f
    sol = solve_ivp(_rhs, (0.0, t_max), (math.pi, float(Y0)), args=(co_n,),
                    method="DOP853", rtol=rtol, atol=atol, events=event)
    if not sol.t_events[0].size:
        raise NumericsError("orbit did not complete a transit",
                            diagnostics={"Y0": Y0, "t_max": t_max})
    return float(sol.t_events[0][0])


def transit_time_tau(level_or_traj, co: SteadyCoeffs, check: bool = False,
                     boundaries: dict | None = None) -> float | None:
    """Time for a steady orbit to cross one X-period.

    The orbit is given either by its height Y0 on the X = pi section or by
    a :class:`Trajectory` (whose section height is recovered from its
    H-level).  Returns None for orbits that do not transit (the vortex and
    the asymptote-bound family).  With ``check=True`` the quadrature value
    is cross-checked against an event-detected direct integration to 1e-8
    relative.
    """
    co_n, _ = co.normalized()
    if isinstance(level_or_traj, Trajectory):
        Y0 = section_height(float(level_or_traj.X[0]),
                            float(level_or_traj.Y[0]), co_n)
        if Y0 is None:
            return None
    else:
        Y0 = float(level_or_traj)
    layer = classify_layer(Y0, co_n, boundaries)
    if layer == "vortex":
        return None
    rising = layer == "surface_wave"
    tau = _tau_quadrature(Y0, co_n, rising)
    if check and co_n.Ak != 0.0:
        tau_evt = _tau_integration(Y0, co_n, rising)
        if abs(tau_evt - tau) > TAU_CROSS_CHECK_RTOL * abs(tau):
            raise NumericsError(
                "transit-time routes disagree",
                diagnostics={"quadrature": tau, "integration": tau_evt})
    return tau


def _loop_period_and_min_xdot(Y0: float, co_n: SteadyCoeffs,
                              rtol: float = 1e-11, atol: float = 1e-13):
    """Steady-orbit period of a closed vortex loop through (pi, Y0).

    Integrates half a loop between the two crossings of the X = pi section
    (the loop is time-symmetric about that section) and doubles it.  Also
    returns the minimum of dX/dt seen along the half loop.
    """
    xd0 = float(phi(Y0, math.pi, co_n))
    scale = co_n.Ak * math.cosh(Y0) + abs(co_n.omega) * Y0 + co_n.f
    if abs(xd0) <= 1e-13 * scale:
        return None, 0.0  # at the center to rounding: no loop to time
    # The loop crosses X = pi moving left at the bottom and right at the top.
    direction = 1.0 if xd0 < 0.0 else -1.0

    def section(t, z, co):
        return z[0] - math.pi
    section.terminal = True
    section.direction = direction

    t_max = 1000.0 * 2.0 * math.pi / co_n.f
    sol = solve_ivp(_rhs, (0.0, t_max), (math.pi, float(Y0)), args=(co_n,),
                    method="DOP853", rtol=rtol, atol=atol, events=section,
                    dense_output=True)
    if not sol.t_events[0].size:
        raise NumericsError("vortex orbit failed to return to the section",
                            diagnostics={"Y0": Y0})
    t_half = float(sol.t_events[0][0])
    ts = np.linspace(0.0, t_half, 512)
    Z = sol.sol(ts)
    xdots = np.asarray(phi(Z[1], Z[0], co_n), float)
    return 2.0 * t_half, float(np.min(xdots))


# ----------------------------------------------------------------------
# Drift
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DriftReport:
    """Per-period drift of the particle on one steady orbit."""

    Y0: float
    tau: float              # steady-orbit period (transit or loop); nan at a center
    drift_m: float          # physical displacement over tau; nan at a center
    direction: str          # forward | backward | closed | always_forward
    layer: str
    mean_speed: float       # drift_m / tau, or f/k where X stays bounded


def _trichotomy(tau: float, f: float) -> str:
    period = 2.0 * math.pi / f
    if abs(tau - period) <= 1e-12 * period:
        return "closed"
    return "forward" if tau > period else "backward"


def drift_per_period(Y0: float, co: SteadyCoeffs,
                     boundaries: dict | None = None) -> DriftReport:
    """Drift classification of the orbit through (pi, Y0).

    Leftward transits displace the particle by (f*tau - 2*pi)/k per
    period; the sign of tau - 2*pi/f decides forward/backward/closed.
    Vortex loops advance f*T/k per loop (always forward; the center moves
    in a straight line at speed f/k).  Surface-layer orbits have positive
    physical velocity throughout and are reported always_forward.
    """
    if Y0 < 0:
        raise DomainError("Y0 must be nonnegative")
    co_n, _ = co.normalized()
    if boundaries is None and co_n.Ak != 0.0:
        boundaries = layer_boundaries(co_n)
    layer = classify_layer(Y0, co_n, boundaries)
    f, k = co_n.f, co_n.k
    period_ref = 2.0 * math.pi / f

    if co_n.Ak == 0.0:
        # Pure shear: the particle moves at the constant speed -omega*y.
        speed_left = f + co_n.omega * Y0  # steady leftward X-speed
        if speed_left == 0.0:
            return DriftReport(Y0=Y0, tau=math.nan, drift_m=math.nan,
                               direction="always_forward", layer=layer,
                               mean_speed=f / k)
        tau = 2.0 * math.pi / abs(speed_left)
        if speed_left > 0:
            drift = (f * tau - 2.0 * math.pi) / k
            direction = _trichotomy(tau, f)
        else:
            drift = (f * tau + 2.0 * math.pi) / k
            direction = "always_forward"
        return DriftReport(Y0=Y0, tau=tau, drift_m=drift, direction=direction,
                           layer=layer, mean_speed=drift / tau)

    if layer in ("bed_adjacent", "internal_wave", "unbounded"):
        if layer == "unbounded":
            # X is confined to a vertical asymptote band: mean speed f/k.
            return DriftReport(Y0=Y0, tau=math.nan, drift_m=math.nan,
                               direction="forward", layer=layer,
                               mean_speed=f / k)
        tau = _tau_quadrature(Y0, co_n, rising=False)
        drift = (f * tau - 2.0 * math.pi) / k
        return DriftReport(Y0=Y0, tau=tau, drift_m=drift,
                           direction=_trichotomy(tau, f), layer=layer,
                           mean_speed=drift / tau)

    if layer == "surface_wave":
        tau = _tau_quadrature(Y0, co_n, rising=True)
        drift = (f * tau + 2.0 * math.pi) / k
        return DriftReport(Y0=Y0, tau=tau, drift_m=drift,
                           direction="always_forward", layer=layer,
                           mean_speed=drift / tau)

    # Vortex: closed steady orbit.
    T, min_xdot = _loop_period_and_min_xdot(Y0, co_n)
    if T is None:
        # The center itself: straight-line forward motion at speed f/k,
        # measured from an actual integration rather than asserted.
        horizon = 10.0 * period_ref
        traj = integrate_steady(math.pi, Y0, co_n, horizon,
                                rtol=1e-12, atol=1e-14, shifted=False)
        speed = float((traj.x[-1] - traj.x[0]) / (traj.t[-1] - traj.t[0]))
        return DriftReport(Y0=Y0, tau=math.nan, drift_m=math.nan,
                           direction="always_forward", layer=layer,
                           mean_speed=speed)
    drift = f * T / k
    direction = "always_forward" if min_xdot > -f else "forward"
    return DriftReport(Y0=Y0, tau=T, drift_m=drift, direction=direction,
                       layer=layer, mean_speed=f / k)


def fluid_top_level(params: WaveParams, shifted: bool) -> float:
    """Steady height of the free surface over the X = pi sampling column."""
    x_phys = 0.0 if shifted else math.pi
    return params.k * (params.h + params.a * math.cos(x_phys))


def drift_profile(params: WaveParams, levels=None, n: int = 64) -> list[DriftReport]:
    """Drift reports over a set of starting heights on the X = pi column.

    Default levels: the bed plus ``n - 1`` geometrically spaced heights up
    to just below the free surface (geometric spacing resolves thin
    near-bed layers).  Heights are steady-frame (Y = k*y) and invariant
    under the half-period normalization shift.
    """
    if params.c <= 0:
        raise UnsupportedConfig("drift analysis assumes a right-going wave (c > 0)")
    co = SteadyCoeffs.from_params(params)
    co_n, shifted = co.normalized()
    if levels is None:
        top = 0.999 * fluid_top_level(params, shifted)
        levels = np.concatenate([[0.0], np.geomspace(1e-5 * top, top, n - 1)])
    boundaries = layer_boundaries(co_n) if co_n.Ak != 0.0 else None
    return [drift_per_period(float(Y0), co_n, boundaries=boundaries)
            for Y0 in np.asarray(levels, float)]


# ----------------------------------------------------------------------
# Closed physical orbits
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ClosedOrbit:
    """A verified closed physical particle orbit."""

    Y_level: float
    tau: float
    drift_residual: float   # |drift| at the returned level, from quadrature
    x_close_err: float      # |x(T) - x(0)| from direct integration
    y_close_err: float      # |y(T) - y(0)| from direct integration
    wavelength: float
    depth: float

    @property
    def verified(self) -> bool:
        return (self.x_close_err < 1e-10 * self.wavelength
                and self.y_close_err < 1e-10 * self.depth)


def find_closed_orbit(params: WaveParams, Y_bracket=None) -> ClosedOrbit | None:
    """Locate a height whose particle orbit closes in the physical frame.

    Bisects the per-period drift over ``Y_bracket`` (default: bed to just
    below the free surface).  Returns None when the drift does not change
    sign across the bracket, in which case no closed orbit is detectable
    there.  A found level is verified by integrating one full period and
    measuring the closure error directly.
    """
    co = SteadyCoeffs.from_params(params)
    co_n, shifted = co.normalized()
    boundaries = layer_boundaries(co_n) if co_n.Ak != 0.0 else None
    if Y_bracket is None:
        Y_bracket = (0.0, 0.98 * fluid_top_level(params, shifted))
    lo, hi = float(Y_bracket[0]), float(Y_bracket[1])

    def drift(Y0):
        return drift_per_period(Y0, co_n, boundaries=boundaries).drift_m

    d_lo, d_hi = drift(lo), drift(hi)
    if not (math.isfinite(d_lo) and math.isfinite(d_hi)) or d_lo * d_hi > 0:
        return None
    Y_star = brentq(drift, lo, hi, xtol=1e-15, maxiter=300)
    residual = abs(drift(Y_star))
    tau = transit_time_tau(Y_star, co_n, boundaries=boundaries)
    if tau is None:
        raise NumericsError("closed-orbit candidate does not transit",
                            diagnostics={"Y": Y_star})
    traj = integrate_steady(math.pi, Y_star, co_n, tau,
                            rtol=1e-13, atol=1e-15, shifted=shifted)
    x_err = abs(float(traj.x[-1] - traj.x[0]))
    y_err = abs(float(traj.y[-1] - traj.y[0]))
    return ClosedOrbit(Y_level=float(Y_star), tau=float(tau),
                       drift_residual=float(residual), x_close_err=x_err,
                       y_close_err=y_err, wavelength=params.wavelength,
                       depth=params.h)


# ----------------------------------------------------------------------
# File formats
# ----------------------------------------------------------------------

def trajectory_csv_rows(traj: Trajectory):
    yield TRAJECTORY_HEADER
    for i in range(len(traj.t)):
        yield (f"{traj.t[i]:.17g},{traj.X[i]:.17g},{traj.Y[i]:.17g},"
               f"{traj.x[i]:.17g},{traj.y[i]:.17g},{traj.H[i]:.17g}")


def drift_csv_rows(reports: list[DriftReport], k: float):
    yield DRIFT_HEADER
    for r in reports:
        yield (f"{r.Y0:.17g},{r.Y0 / k:.17g},{r.tau:.17g},{r.drift_m:.17g},"
               f"{r.direction},{r.layer}")


def read_seeds(text: str) -> list[tuple[float, float]]:
    """Parse a seeds file: one ``X0 Y0`` pair per line, ``#`` comments."""
    seeds = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DomainError(f"malformed seed on line {lineno}: {raw!r}")
        seeds.append((float(parts[0]), float(parts[1])))
    return seeds
