"""
Closed-form two-arm Stern-Gerlach interferometer with gravitational self-interaction.

A spin-1/2 particle prepared as ``cos(theta/2)|up> + sin(theta/2)|down>`` is
split so that ``|up>`` travels along arm 1 and ``|down>`` along arm 2, a
distance ``d`` apart. While split, each arm is attracted by the probability
weight of the other and picks up the phase

    beta_1(t) = cos(theta/2) exp(i w2 t),   beta_2(t) = sin(theta/2) exp(i w1 t),

with ``w1 = (G m^2 / hbar d) cos^2(theta/2)`` and ``w2 = (G m^2 / hbar d) sin^2(theta/2)``.
After recombination the spin is measured along x.

All functions accept scalar or array ``theta``. Phases are formed from the
dimensionless ``T = G m^2 t / (hbar d)`` rather than from ``w * t``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import CODATA, ExperimentParams, PhysConstants, check_theta, dimensionless_phase

__all__ = [
    "SpinorAmplitudes",
    "PhasePair",
    "prepare",
    "phase_frequencies",
    "evolve_split",
    "evolve_split_T",
    "x_basis",
    "prob_x_plus",
    "prob_x_plus_T",
    "prob_x_plus_projected",
    "prob_x_plus_qm",
    "delta_omega",
    "prob_difference",
    "prob_difference_T",
    "prob_difference_closed",
]

SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class SpinorAmplitudes:
    """Coefficients of ``|up>`` (arm 1 while split) and ``|down>`` (arm 2)."""

    up: complex | np.ndarray
    down: complex | np.ndarray

    def norm2(self):
        return np.abs(self.up) ** 2 + np.abs(self.down) ** 2

    def as_array(self) -> np.ndarray:
        """Stack as ``[..., 2]`` with the up component first."""
        return np.stack(np.broadcast_arrays(np.asarray(self.up, dtype=complex),
                                            np.asarray(self.down, dtype=complex)), axis=-1)


@dataclass(frozen=True)
class PhasePair:
    """Phase frequencies ``omega1`` (arm 2's rate, set by arm 1's weight) and ``omega2``, rad/s."""

    omega1: float | np.ndarray
    omega2: float | np.ndarray


def prepare(theta) -> SpinorAmplitudes:
    """Spin state after the y-rotation by ``theta``: ``(cos theta/2, sin theta/2)``."""
    check_theta(theta)
    half = np.asarray(theta, dtype=float) / 2
    return SpinorAmplitudes(np.cos(half), np.sin(half))


def _rate(params: ExperimentParams, constants: PhysConstants) -> float:
    # G m^2 / (hbar d) in rad/s
    return (constants.G * params.mass / constants.hbar) * (params.mass / params.separation)


def phase_frequencies(theta, params: ExperimentParams, constants: PhysConstants = CODATA) -> PhasePair:
    check_theta(theta)
    half = np.asarray(theta, dtype=float) / 2
    rate = _rate(params, constants)
    return PhasePair(rate * np.cos(half) ** 2, rate * np.sin(half) ** 2)


def delta_omega(theta, params: ExperimentParams, constants: PhysConstants = CODATA):
    """``omega1 - omega2 = (G m^2 / hbar d) cos(theta)``."""
    check_theta(theta)
    return _rate(params, constants) * np.cos(np.asarray(theta, dtype=float))


def evolve_split_T(theta, T) -> SpinorAmplitudes:
    """Recombined spinor after accumulating dimensionless phase ``T`` in the split state."""
    check_theta(theta)
    half = np.asarray(theta, dtype=float) / 2
    c, s = np.cos(half), np.sin(half)
    # omega2 t = T sin^2, omega1 t = T cos^2
    return SpinorAmplitudes(c * np.exp(1j * (T * s**2)), s * np.exp(1j * (T * c**2)))


def evolve_split(theta, params: ExperimentParams, constants: PhysConstants = CODATA) -> SpinorAmplitudes:
    """Spinor after splitting, free evolution for ``params.duration`` and recombination."""
    return evolve_split_T(theta, dimensionless_phase(params, constants))


def x_basis(spinor: SpinorAmplitudes):
    """Components along ``|->> = (|up> + |down>)/sqrt2`` and ``|<-> = (|up> - |down>)/sqrt2``."""
    up = np.asarray(spinor.up)
    down = np.asarray(spinor.down)
    return SQRT_HALF * (up + down), SQRT_HALF * (up - down)


def prob_x_plus_projected(theta, T):
    """``|<->|alpha(t)>|^2`` by explicit projection of the evolved spinor."""
    plus, _ = x_basis(evolve_split_T(theta, T))
    return np.abs(plus) ** 2


def prob_x_plus_T(theta, T):
    """Closed form ``1/2 + 1/2 sin(theta) cos(T cos theta)``."""
    check_theta(theta)
    th = np.asarray(theta, dtype=float)
    return 0.5 + 0.5 * np.sin(th) * np.cos(T * np.cos(th))


def prob_x_plus(theta, params: ExperimentParams, constants: PhysConstants = CODATA):
    """Probability of measuring spin ``+hbar/2`` along x after the interferometer.

    Parameters
    ----------
    theta : float or array_like
        Preparation angle(s) in ``[0, 2*pi]``.
    params : ExperimentParams
        ``params.theta`` is ignored in favour of ``theta``.
    constants : PhysConstants

    Returns
    -------
    float or ndarray
        Values in ``[0, 1]``. See :func:`prob_x_plus_projected` for the
        same quantity obtained by projecting the evolved state.
    """
    return prob_x_plus_T(theta, dimensionless_phase(params, constants))


def prob_x_plus_qm(theta):
    """Standard quantum mechanics (no self-gravity): ``1/2 + 1/2 sin(theta)``."""
    check_theta(theta)
    return 0.5 + 0.5 * np.sin(np.asarray(theta, dtype=float))


def prob_difference_T(theta, T):
    return prob_x_plus_T(theta, T) - prob_x_plus_qm(theta)


def prob_difference(theta, params: ExperimentParams, constants: PhysConstants = CODATA):
    """Deviation ``P_x+ - P_x+^QM`` caused by the self-interaction."""
    return prob_difference_T(theta, dimensionless_phase(params, constants))


def prob_difference_closed(theta, T):
    """``-sin(theta) sin^2(T cos(theta) / 2)``; algebraically equal to :func:`prob_difference_T`."""
    check_theta(theta)
    th = np.asarray(theta, dtype=float)
    return -np.sin(th) * np.sin(0.5 * T * np.cos(th)) ** 2
