"""Wave parameters, the dispersion relation, and regime classification.

Physical setup: a periodic gravity wave of amplitude ``a`` and wavenumber
``k`` rides on the sheared current ``U(y) = s*sqrt(g*h) - omega*y`` over a
flat bed at ``y = 0``, with mean water level ``y = h`` and constant
vorticity ``omega``.  The wave speed ``c`` is not a free parameter: the
linear surface conditions pin it to ``(g, h, k, omega, s)`` through a
dispersion relation with two branches, distinguished by the sign of the
relative surface speed ``c - s*sqrt(g*h) + h*omega``.

All quantities are SI: meters, seconds, rad/m, rad/s.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

from .errors import DomainError, UnsupportedConfig

BRANCHES = ("plus", "minus")

#: Serialized parameter keys; speed, frequency and the wave coefficient are
#: always recomputed on load, never trusted from a file.
PARAM_KEYS = ("g", "h", "a", "k", "omega", "s", "branch")
_DERIVED_KEYS = ("c", "f", "A", "lambda", "wavelength", "name")

# Guard thresholds (warnings, not errors).  The linear solution solves the
# governing equations up to O(a^2), and its shear correction is uniformly
# small only while (a/h)*|omega|*sqrt(h/g) stays small; these cutoffs are
# engineering defaults, not sharp bounds.
AMPLITUDE_RATIO_MAX = 0.1
VORTICITY_PRODUCT_MAX = 0.3

# |c + h*omega - s*sqrt(gh)| must exceed this times sqrt(gh); the closed-form
# speed keeps it bounded away from zero, so a violation means inconsistent
# externally supplied parameters.
BRANCH_MARGIN = 1e-8

# cosh/sinh overflow near exp(710); refuse columns whose hyperbolic factors
# are not representable rather than propagate inf.
HYPERBOLIC_ARG_MAX = 700.0


def _require_positive(**named):
    for name, value in named.items():
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value!r}")


def solve_dispersion(g: float, h: float, k: float, omega: float,
                     s: float = 0.0, branch: str = "plus") -> float:
    """Closed-form wave speed on a constant-vorticity current.

    Solves the finite-depth dispersion relation

        c - s*sqrt(g*h) + h*omega
            = (omega*tanh(kh) +/- sqrt(4*g*k*tanh(kh) + omega^2*tanh(kh)^2)) / (2k)

    where the sign of the square root is chosen by ``branch`` and fixes the
    sign of the left-hand side.  The discriminant is positive for all valid
    inputs, so no iteration is needed.

    Parameters
    ----------
    g, h, k : float
        Gravity (m/s^2), mean depth (m), wavenumber (rad/m); all positive.
    omega : float
        Constant vorticity (1/s).
    s : float, optional
        Dimensionless shear offset at the bed.  The bed-frame (Stokes)
        normalization is s = 0.
    branch : {"plus", "minus"}
        Sign of ``c - s*sqrt(g*h) + h*omega`` for the returned speed.

    Returns
    -------
    float
        Wave speed c (m/s).  May be negative (left-going wave).
    """
    _require_positive(g=g, h=h, k=k)
    if branch not in BRANCHES:
        raise DomainError(f"branch must be one of {BRANCHES}, got {branch!r}")
    t = math.tanh(k * h)
    root = math.sqrt(4.0 * g * k * t + (omega * t) ** 2)
    signed = root if branch == "plus" else -root
    return s * math.sqrt(g * h) - h * omega + (omega * t + signed) / (2.0 * k)


@dataclass(frozen=True)
class WaveParams:
    """Full physical parameter set of one linear wave.

    ``c`` is stored (so externally supplied speeds can be validated via
    :func:`dispersion_residual`); the frequency ``f = k*c`` and the wave
    velocity coefficient ``A`` are always derived, never stored.

    Use :meth:`WaveParams.solve` to construct a set whose speed satisfies
    the dispersion relation on a chosen branch.
    """

    g: float
    h: float
    a: float
    k: float
    omega: float
    c: float
    s: float = 0.0
    branch: str = "plus"
    #: True when a/h exceeds AMPLITUDE_RATIO_MAX (small-amplitude guard).
    amplitude_flag: bool = field(init=False, default=False)
    #: True when (a/h)*|omega|*sqrt(h/g) exceeds VORTICITY_PRODUCT_MAX.
    validity_flag: bool = field(init=False, default=False)

    def __post_init__(self):
        _require_positive(g=self.g, h=self.h, k=self.k)
        if self.a < 0:
            raise DomainError(f"amplitude must be nonnegative, got {self.a}")
        if self.branch not in BRANCHES:
            raise DomainError(f"branch must be one of {BRANCHES}, got {self.branch!r}")
        if self.k * self.h > HYPERBOLIC_ARG_MAX:
            raise UnsupportedConfig(
                f"k*h = {self.k * self.h:.3g} overflows the hyperbolic factors")
        sqrt_gh = math.sqrt(self.g * self.h)
        q = self.c - self.s * sqrt_gh + self.h * self.omega
        if abs(q) <= BRANCH_MARGIN * sqrt_gh:
            raise UnsupportedConfig(
                "c + h*omega - s*sqrt(gh) is (numerically) zero; no linear wave "
                "propagates at the speed of the sheared surface current")
        if (q > 0) != (self.branch == "plus"):
            raise UnsupportedConfig(
                f"sign of c + h*omega - s*sqrt(gh) = {q:.6g} contradicts "
                f"branch={self.branch!r}")
        if self.a / self.h > AMPLITUDE_RATIO_MAX:
            object.__setattr__(self, "amplitude_flag", True)
            warnings.warn(
                f"a/h = {self.a / self.h:.3g} exceeds {AMPLITUDE_RATIO_MAX}; "
                "the linear solution degrades as O(a^2)", stacklevel=2)
        eps_om = (self.a / self.h) * abs(self.omega) * math.sqrt(self.h / self.g)
        if eps_om >= VORTICITY_PRODUCT_MAX:
            object.__setattr__(self, "validity_flag", True)
            warnings.warn(
                f"(a/h)*|omega_nd| = {eps_om:.3g} exceeds {VORTICITY_PRODUCT_MAX}; "
                "uniform validity of the linearization is doubtful", stacklevel=2)

    @classmethod
    def solve(cls, g: float, h: float, k: float, omega: float,
              a: float = 0.0, s: float = 0.0, branch: str = "plus") -> "WaveParams":
        """Build a parameter set whose speed satisfies the dispersion relation."""
        c = solve_dispersion(g, h, k, omega, s=s, branch=branch)
        return cls(g=g, h=h, a=a, k=k, omega=omega, c=c, s=s, branch=branch)

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.k

    @property
    def f(self) -> float:
        """Wave frequency f = k*c (rad/s); recomputed, never stored."""
        return self.k * self.c

    @property
    def A(self) -> float:
        """Wave velocity coefficient A = a*(f + k*h*omega)/sinh(k*h) (m/s).

        Negative exactly when the surface counter-current outruns a
        right-going wave (c + h*omega < 0).
        """
        return self.a * (self.f + self.k * self.h * self.omega) / math.sinh(self.k * self.h)


@dataclass(frozen=True)
class NondimParams:
    """Dimensionless form of a parameter set.

    Lengths scale with h (vertical) and the wavelength (horizontal),
    velocities with sqrt(g*h), vorticity with sqrt(g/h).  ``C`` is the
    coefficient of the dimensionless wave fields.
    """

    epsilon: float   # a/h, amplitude parameter
    delta: float     # h/wavelength, shallowness parameter
    c_nd: float      # c / sqrt(g*h)
    s_nd: float
    omega_nd: float  # omega * sqrt(h/g)
    C: float         # (c_nd - s_nd + omega_nd) / sinh(2*pi*delta)


@dataclass(frozen=True)
class Regime:
    """Qualitative classification of a right-going wave configuration."""

    vorticity_sign: str      # "negative" | "zero" | "positive"
    crest_shift: str         # "X=0" | "X=pi": crest position in the steady frame
    supercritical: bool      # c + h*omega < 0 (surface current outruns the wave)
    branching_positive: bool # two-branch isocline / interior-vortex regime


def dispersion_residual(params: WaveParams) -> float:
    """Dimensionless defect of the solvability relation.

    Returns |q*(2*pi*delta*q*coth(2*pi*delta) - omega_nd) - 1| with
    q = c_nd - s_nd + omega_nd.  Zero (to rounding) iff the stored speed
    came from :func:`solve_dispersion` on either branch.
    """
    nd = nondimensionalize(params)
    kh = 2.0 * math.pi * nd.delta
    q = nd.c_nd - nd.s_nd + nd.omega_nd
    return abs(q * (kh * q / math.tanh(kh) - nd.omega_nd) - 1.0)


def shear_profile(y: float, params: WaveParams) -> float:
    """Background current s*sqrt(g*h) - omega*y at height ``y`` above the bed."""
    if not 0.0 <= y <= params.h:
        raise DomainError(f"y = {y!r} outside the water column [0, {params.h}]")
    return params.s * math.sqrt(params.g * params.h) - params.omega * y


def classify_regime(params: WaveParams) -> Regime:
    """Classify a right-going configuration (requires c > 0 and s = 0).

    The steady-frame analysis places the crest at X = 0 when
    c + h*omega > 0 and at X = pi when c + h*omega < 0 (the sign of the
    wave coefficient A flips, which is a half-period translation).
    """
    if params.c <= 0:
        raise UnsupportedConfig(
            f"regime classification assumes a right-going wave; c = {params.c:.6g}. "
            "Map x -> -x for left-going waves.")
    if params.s != 0.0:
        raise UnsupportedConfig(
            "regime classification requires the bed-frame normalization s = 0")
    if params.omega < 0:
        vort = "negative"
    elif params.omega > 0:
        vort = "positive"
    else:
        vort = "zero"
    supercritical = params.c + params.h * params.omega < 0
    crest = "X=pi" if supercritical else "X=0"
    branching = False
    if params.omega < 0 and params.a > 0:
        from .portrait import branching_discriminant  # deferred: avoids an import cycle
        alpha = abs(params.A) * params.k
        branching = branching_discriminant(alpha, params.omega, params.f) > 0
    return Regime(vorticity_sign=vort, crest_shift=crest,
                  supercritical=supercritical, branching_positive=branching)


def nondimensionalize(params: WaveParams) -> NondimParams:
    """Map a physical parameter set onto its dimensionless form."""
    sqrt_gh = math.sqrt(params.g * params.h)
    epsilon = params.a / params.h
    delta = params.h / params.wavelength
    c_nd = params.c / sqrt_gh
    omega_nd = params.omega * math.sqrt(params.h / params.g)
    C = (c_nd - params.s + omega_nd) / math.sinh(2.0 * math.pi * delta)
    return NondimParams(epsilon=epsilon, delta=delta, c_nd=c_nd,
                        s_nd=params.s, omega_nd=omega_nd, C=C)


def redimensionalize(nd: NondimParams, g: float, h: float) -> WaveParams:
    """Invert :func:`nondimensionalize` given the dimensional scales (g, h)."""
    _require_positive(g=g, h=h)
    sqrt_gh = math.sqrt(g * h)
    a = nd.epsilon * h
    k = 2.0 * math.pi * nd.delta / h
    c = nd.c_nd * sqrt_gh
    omega = nd.omega_nd * math.sqrt(g / h)
    q = nd.c_nd - nd.s_nd + nd.omega_nd
    branch = "plus" if q > 0 else "minus"
    return WaveParams(g=g, h=h, a=a, k=k, omega=omega, c=c, s=nd.s_nd, branch=branch)


# ----------------------------------------------------------------------
# Serialization: flat key = value text and JSON with identical keys.
# ----------------------------------------------------------------------

def to_kv(params: WaveParams) -> str:
    """Serialize to ``key = value`` lines (keys: g h a k omega s branch)."""
    lines = [f"{key} = {getattr(params, key)!r}" if key != "branch"
             else f"branch = {params.branch}"
             for key in PARAM_KEYS]
    return "\n".join(lines) + "\n"


def to_json_str(params: WaveParams) -> str:
    return json.dumps({key: getattr(params, key) for key in PARAM_KEYS}, indent=2)


def from_mapping(mapping: dict, strict: bool = True) -> WaveParams:
    """Build params from a key/value mapping, re-solving the speed.

    Derived quantities (c, f, A, wavelength) present in the mapping are
    ignored; the speed is always recomputed from the stored branch.
    Unknown keys raise :class:`DomainError` unless ``strict`` is False.
    """
    unknown = set(mapping) - set(PARAM_KEYS) - set(_DERIVED_KEYS)
    if unknown and strict:
        raise DomainError(f"unknown parameter keys: {sorted(unknown)}")
    try:
        g = float(mapping["g"])
        h = float(mapping["h"])
        k = float(mapping["k"])
        omega = float(mapping["omega"])
    except KeyError as exc:
        raise DomainError(f"missing required parameter key: {exc.args[0]}") from None
    a = float(mapping.get("a", 0.0))
    s = float(mapping.get("s", 0.0))
    branch = str(mapping.get("branch", "plus")).strip()
    return WaveParams.solve(g, h, k, omega, a=a, s=s, branch=branch)


def from_kv(text: str, strict: bool = True) -> WaveParams:
    """Parse ``key = value`` lines (``#`` starts a comment)."""
    mapping = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"malformed line {lineno}: {raw!r}")
        key, _, value = line.partition("=")
        mapping[key.strip()] = value.strip()
    return from_mapping(mapping, strict=strict)


def from_json_str(text: str, strict: bool = True) -> WaveParams:
    mapping = json.loads(text)
    if not isinstance(mapping, dict):
        raise DomainError("JSON parameter file must contain an object")
    return from_mapping(mapping, strict=strict)
