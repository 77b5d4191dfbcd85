"""
Physical constants and the dimensionless scales of the interferometer.

Everything is SI at the API boundary. Constants are passed around as
:class:`PhysConstants` values rather than read from module globals, so a
caller can switch gravity off (``G = 0``) and recover the standard
quantum-mechanical prediction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InvariantError

__all__ = [
    "PhysConstants",
    "ExperimentParams",
    "CODATA",
    "YB_MASS",
    "YB_SEPARATION",
    "planck_mass",
    "dimensionless_phase",
    "energy_scale",
    "kinetic_potential_ratio",
    "check_theta",
]

TWO_PI = 2.0 * math.pi

#: Yb microcrystal of the proposed setup: ~1e-14 kg split over ~250 um.
YB_MASS = 1e-14
YB_SEPARATION = 250e-6


@dataclass(frozen=True)
class PhysConstants:
    """Gravitational constant, reduced Planck constant and speed of light.

    Attributes
    ----------
    G : float
        Gravitational constant in m^3 kg^-1 s^-2.
    hbar : float
        Reduced Planck constant in J s.
    c : float
        Speed of light in m/s.

    Notes
    -----
    ``G = 0`` is accepted on purpose: it is the standard quantum mechanics
    baseline. ``hbar`` and ``c`` must be strictly positive.
    """

    G: float = 6.67430e-11
    hbar: float = 1.054571817e-34
    c: float = 299792458.0

    def __post_init__(self):
        for name in ("G", "hbar", "c"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvariantError(f"{name} must be finite, got {value!r}")
        if self.G < 0:
            raise InvariantError(f"G must be non-negative, got {self.G!r}")
        if self.hbar <= 0:
            raise InvariantError(f"hbar must be positive, got {self.hbar!r}")
        if self.c <= 0:
            raise InvariantError(f"c must be positive, got {self.c!r}")

    def with_overrides(self, **kwargs) -> "PhysConstants":
        """Copy with some fields replaced; ``None`` values are ignored."""
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    def as_dict(self) -> dict:
        return {"G": self.G, "hbar": self.hbar, "c": self.c}


CODATA = PhysConstants()


def check_theta(theta):
    """Raise :class:`InvariantError` unless every angle lies in ``[0, 2*pi]``.

    The closed endpoint ``2*pi`` is admitted so that inclusive sweep grids
    ending at a full turn are valid; it is physically the ``theta = 0`` state
    up to a global sign.
    """
    import numpy as np

    arr = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvariantError("theta must be finite")
    if np.any(arr < 0.0) or np.any(arr > TWO_PI):
        bad = arr[(arr < 0.0) | (arr > TWO_PI)].ravel()[0]
        raise InvariantError(f"theta must lie in [0, 2*pi], got {bad!r}")
    return theta


@dataclass(frozen=True)
class ExperimentParams:
    """Mass, arm separation, free-evolution time and preparation angle.

    Parameters
    ----------
    mass : float
        Particle mass in kg, > 0.
    separation : float
        Distance ``d`` between the two interferometer arms in m, > 0.
    duration : float
        Time spent split, in s, >= 0.
    theta : float
        Preparation angle in rad, in ``[0, 2*pi]``. Ignored by sweeps.
    """

    mass: float = YB_MASS
    separation: float = YB_SEPARATION
    duration: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        for name in ("mass", "separation", "duration", "theta"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvariantError(f"{name} must be a finite number, got {value!r}")
        if self.mass <= 0:
            raise InvariantError(f"mass must be positive, got {self.mass!r}")
        if self.separation <= 0:
            raise InvariantError(f"separation must be positive, got {self.separation!r}")
        if self.duration < 0:
            raise InvariantError(f"duration must be non-negative, got {self.duration!r}")
        check_theta(self.theta)

    def with_(self, **kwargs) -> "ExperimentParams":
        return replace(self, **kwargs)


def planck_mass(constants: PhysConstants = CODATA) -> float:
    """Reduced Planck mass ``sqrt(hbar c / G)`` in kg.

    Returns ``inf`` when gravity is switched off.
    """
    if constants.G == 0:
        return math.inf
    return math.sqrt(constants.hbar * constants.c / constants.G)


def energy_scale(params: ExperimentParams, constants: PhysConstants = CODATA) -> float:
    """Pair self-energy ``G m^2 / d`` in J."""
    return constants.G * params.mass**2 / params.separation


def dimensionless_phase(params: ExperimentParams, constants: PhysConstants = CODATA) -> float:
    """Accumulated gravitational phase ``T = G m^2 t / (hbar d)``.

    Examples
    --------
    At the Planck mass the phase reduces to ``c t / d``:

    >>> p = ExperimentParams(mass=planck_mass(), separation=1e-6, duration=1.0)
    >>> round(dimensionless_phase(p) / 2.99792458e14, 9)
    1.0
    """
    # Group as (G m / hbar) * (m t / d): keeps intermediates near unity.
    return (constants.G * params.mass / constants.hbar) * (params.mass * params.duration / params.separation)


def kinetic_potential_ratio(params: ExperimentParams, constants: PhysConstants = CODATA) -> float:
    """Kinetic-to-potential energy ratio ``G m t^2 / (2 d^3)`` built up by the mutual pull of the arms."""
    return constants.G * params.mass * params.duration**2 / (2.0 * params.separation**3)
