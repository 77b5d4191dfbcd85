"""
Discrete Schrodinger-Newton dynamics on N fixed sites.

A particle of mass ``m`` is spread over sites ``r_j`` with amplitudes
``psi_j``. Each site feels the Newtonian pull of the probability sitting on
every *other* site,

    U_j = -G m^2 sum_{k != j} |psi_k|^2 / |r_j - r_k|,

and, with no hopping between sites, the amplitudes obey
``i hbar dpsi_j/dt = (U_j + V_j) psi_j``. Because that generator is real and
diagonal the populations never change, so the exact solution is a pure
phase rotation. :func:`integrate` does not rely on that fact: it re-evaluates
the state-dependent potential at every Runge-Kutta stage and serves as an
independent check of :func:`exact_potential_solution`.

Integration runs in the dimensionless time ``tau = t E / hbar`` where ``E``
is the largest initial site energy, so neither ``1e-35 J`` energies nor
``1e-34 J s`` actions ever enter the stepping arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .constants import CODATA, PhysConstants
from .errors import ConfigurationError, DegenerateGeometryError, InvariantError

__all__ = [
    "MIN_SITE_DISTANCE",
    "NORM_TOL",
    "DiscreteState",
    "ExternalPotential",
    "StepPolicy",
    "Trajectory",
    "pair_distances",
    "site_probabilities",
    "self_potential",
    "exact_potential_solution",
    "integrate",
    "rk4_phase_kernel",
]

#: Sites closer than this (m) are treated as coincident.
MIN_SITE_DISTANCE = 1e-12
NORM_TOL = 1e-12


def pair_distances(positions) -> np.ndarray:
    """Symmetric matrix of site separations; raises on coincident sites."""
    r = np.asarray(positions, dtype=float)
    diff = r[:, None, :] - r[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    n = dist.shape[0]
    if n > 1:
        off = dist[~np.eye(n, dtype=bool)]
        if off.min() < MIN_SITE_DISTANCE:
            i, j = np.argwhere((dist < MIN_SITE_DISTANCE) & ~np.eye(n, dtype=bool))[0]
            raise DegenerateGeometryError(
                f"sites {i} and {j} are {dist[i, j]:.3e} m apart (< {MIN_SITE_DISTANCE:g} m)"
            )
    return dist


def _inverse_distances(positions) -> np.ndarray:
    dist = pair_distances(positions)
    inv = np.zeros_like(dist)
    mask = ~np.eye(dist.shape[0], dtype=bool)
    inv[mask] = 1.0 / dist[mask]
    return inv


@dataclass(frozen=True)
class DiscreteState:
    """Site positions (N x 3, m), complex amplitudes (N,) and a time stamp (s).

    The amplitudes must be normalised to within ``NORM_TOL``; use
    :meth:`from_unnormalized` to build a state from arbitrary weights.
    """

    positions: np.ndarray
    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim == 1:
            pos = pos.reshape(-1, 1)
        if pos.ndim != 2 or pos.shape[0] < 1:
            raise InvariantError("positions must be an (N, dim) array with N >= 1")
        if pos.shape[1] < 3:
            pos = np.hstack([pos, np.zeros((pos.shape[0], 3 - pos.shape[1]))])
        amp = np.array(self.amplitudes, dtype=complex).ravel()
        if amp.shape[0] != pos.shape[0]:
            raise InvariantError(
                f"{amp.shape[0]} amplitudes given for {pos.shape[0]} sites"
            )
        if not np.all(np.isfinite(amp)) or not np.all(np.isfinite(pos)):
            raise InvariantError("positions and amplitudes must be finite")
        norm = float(np.sum(np.abs(amp) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvariantError(f"state is not normalised: sum |psi|^2 = {norm!r}")
        pair_distances(pos)
        pos.setflags(write=False)
        amp.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def from_unnormalized(cls, positions, weights, time=0.0) -> "DiscreteState":
        w = np.asarray(weights, dtype=complex)
        return cls(positions, w / np.linalg.norm(w), time)

    @classmethod
    def two_site(cls, theta: float, separation: float, time: float = 0.0) -> "DiscreteState":
        """Arms ``r1 = 0`` and ``r2 = d x`` with amplitudes ``(cos theta/2, sin theta/2)``."""
        positions = [[0.0, 0.0, 0.0], [separation, 0.0, 0.0]]
        return cls(positions, [math.cos(theta / 2), math.sin(theta / 2)], time)

    @property
    def n_sites(self) -> int:
        return self.amplitudes.shape[0]

    def with_amplitudes(self, amplitudes, time: float) -> "DiscreteState":
        return DiscreteState(self.positions, amplitudes, time)


@dataclass(frozen=True)
class ExternalPotential:
    """Real on-site potential ``V_j(t)`` in J.

    ``func`` maps a time in seconds to an array of N real energies. The
    default (``func=None``) is the null potential.
    """

    func: Optional[Callable[[float], Sequence[float]]] = None

    @classmethod
    def constant(cls, values) -> "ExternalPotential":
        v = np.asarray(values, dtype=float)
        return cls(lambda t: v)

    @property
    def is_null(self) -> bool:
        return self.func is None

    def __call__(self, t: float, n_sites: int) -> np.ndarray:
        if self.func is None:
            return np.zeros(n_sites)
        v = np.asarray(self.func(t))
        if np.iscomplexobj(v):
            raise InvariantError("external potential must be real")
        v = np.broadcast_to(v.astype(float), (n_sites,))
        if not np.all(np.isfinite(v)):
            raise InvariantError("external potential must be finite")
        return v


NULL_POTENTIAL = ExternalPotential()


@dataclass(frozen=True)
class StepPolicy:
    """Fixed-step control for :func:`integrate`.

    By default the step is chosen so that no site phase advances by more
    than ``max_phase`` radians per step, judged from the initial energies.
    ``dt`` (seconds) overrides that choice.
    """

    max_phase: float = 1e-3
    dt: Optional[float] = None

    def __post_init__(self):
        if not (self.max_phase > 0 and math.isfinite(self.max_phase)):
            raise ConfigurationError(f"max_phase must be positive, got {self.max_phase!r}")
        if self.dt is not None and not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigurationError(f"dt must be positive, got {self.dt!r}")


@dataclass
class Trajectory:
    """Sampled amplitudes ``amplitudes[k]`` at ``times[k]``, plus run metadata."""

    positions: np.ndarray
    times: np.ndarray
    amplitudes: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return self.times.shape[0]

    def state(self, k: int) -> DiscreteState:
        return DiscreteState(self.positions, self.amplitudes[k], float(self.times[k]))

    @property
    def initial(self) -> DiscreteState:
        return self.state(0)

    @property
    def final(self) -> DiscreteState:
        return self.state(-1)

    def norm_drift(self) -> np.ndarray:
        """``|1 - sum_j |psi_j|^2|`` at every sample."""
        return np.abs(1.0 - np.sum(np.abs(self.amplitudes) ** 2, axis=1))

    def population_drift(self) -> np.ndarray:
        """Largest ``| |psi_j(t)|^2 - |psi_j(0)|^2 |`` at every sample."""
        p = np.abs(self.amplitudes) ** 2
        return np.max(np.abs(p - p[0]), axis=1)


def site_probabilities(state: DiscreteState) -> np.ndarray:
    """Occupation probabilities ``|psi_j|^2``."""
    return np.abs(state.amplitudes) ** 2


def self_potential(state: DiscreteState, mass: float, constants: PhysConstants = CODATA) -> np.ndarray:
    """Gravitational self-energy of every site, in J.

    The sum runs over the other sites only; a site does not attract itself.

    Parameters
    ----------
    state : DiscreteState
    mass : float
        Particle mass in kg.
    constants : PhysConstants

    Returns
    -------
    ndarray of shape (N,)
        Non-positive energies ``U_j``.
    """
    if not (mass > 0 and math.isfinite(mass)):
        raise InvariantError(f"mass must be positive, got {mass!r}")
    inv = _inverse_distances(state.positions)
    return -constants.G * mass**2 * (inv @ site_probabilities(state))


def exact_potential_solution(
    initial: DiscreteState, mass: float, constants: PhysConstants = CODATA, t: float = 0.0
) -> DiscreteState:
    """Closed-form evolution under the self-potential alone.

    Populations are constants of motion, so ``U_j`` is frozen at its initial
    value and ``psi_j(t) = psi_j(0) exp(-i U_j (t - t0) / hbar)``.
    """
    elapsed = t - initial.time
    if elapsed == 0:
        return initial
    if elapsed < 0:
        raise ConfigurationError("cannot evolve backwards in time")
    u = self_potential(initial, mass, constants)
    # Phase as (U / hbar) * t; U/hbar is O(1e-1) rad/s for the lab setup.
    phase = (u / constants.hbar) * elapsed
    return initial.with_amplitudes(initial.amplitudes * np.exp(-1j * phase), t)


def _rk4_numpy(psi, attract, h, n_steps, external, samples):
    half = 0.5 * h
    sixth = h / 6.0

    if external is None:
        def rhs(tau, y):
            # -i W y with W = -P @ C^T
            return 1j * ((y * y.conj()).real @ attract) * y
    else:
        def rhs(tau, y):
            return -1j * (external(tau) - (y * y.conj()).real @ attract) * y

    for k in range(n_steps):
        tau = k * h
        k1 = rhs(tau, psi)
        k2 = rhs(tau + half, psi + half * k1)
        k3 = rhs(tau + half, psi + half * k2)
        k4 = rhs(tau + h, psi + h * k3)
        psi = psi + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if samples is not None:
            samples[k + 1] = psi
    return psi


def _rk4_loops(psi, attract, h, n_steps, samples, record):
    # Same scheme as _rk4_numpy for the autonomous case, written as explicit
    # loops over (batch, site) so it can be compiled.
    nb, n = psi.shape
    half = 0.5 * h
    sixth = h / 6.0
    y = psi.copy()
    k1 = np.empty_like(y)
    k2 = np.empty_like(y)
    k3 = np.empty_like(y)
    k4 = np.empty_like(y)
    tmp = np.empty_like(y)
    p = np.empty(n)
    for step in range(n_steps):
        for b in range(nb):
            for stage in range(4):
                if stage == 0:
                    src = y[b]
                elif stage == 1:
                    for j in range(n):
                        tmp[b, j] = y[b, j] + half * k1[b, j]
                    src = tmp[b]
                elif stage == 2:
                    for j in range(n):
                        tmp[b, j] = y[b, j] + half * k2[b, j]
                    src = tmp[b]
                else:
                    for j in range(n):
                        tmp[b, j] = y[b, j] + h * k3[b, j]
                    src = tmp[b]
                for j in range(n):
                    p[j] = src[j].real * src[j].real + src[j].imag * src[j].imag
                for j in range(n):
                    w = 0.0
                    for m in range(n):
                        w += p[m] * attract[m, j]
                    val = 1j * w * src[j]
                    if stage == 0:
                        k1[b, j] = val
                    elif stage == 1:
                        k2[b, j] = val
                    elif stage == 2:
                        k3[b, j] = val
                    else:
                        k4[b, j] = val
            for j in range(n):
                y[b, j] = y[b, j] + sixth * (k1[b, j] + 2.0 * (k2[b, j] + k3[b, j]) + k4[b, j])
        if record:
            samples[step + 1] = y
    return y


try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    _rk4_compiled = None
else:
    _rk4_compiled = numba.njit(cache=True)(_rk4_loops)


def rk4_phase_kernel(psi0: np.ndarray, coupling: np.ndarray, tau_final: float, n_steps: int,
                     external: Optional[Callable[[float], np.ndarray]] = None,
                     record: bool = True, compiled: Optional[bool] = None):
    """Classic RK4 for ``dpsi/dtau = -i (W(psi) + v(tau)) psi`` in reduced units.

    ``W(psi) = -coupling @ |psi|^2`` is re-evaluated at every stage.
    ``psi0`` may carry leading batch axes; the last axis indexes sites.

    With numba installed, runs without an external potential use a compiled
    loop; ``compiled=False`` forces the numpy path.

    Returns ``(taus, samples)`` when ``record`` is true, else ``(tau_final, psi)``.
    """
    h = tau_final / n_steps
    psi = np.array(psi0, dtype=complex)
    attract = np.ascontiguousarray(np.asarray(coupling, dtype=float).T)
    use_compiled = _rk4_compiled is not None and external is None and compiled is not False
    if compiled and not use_compiled:
        raise ConfigurationError("compiled kernel unavailable (needs numba and no external potential)")

    samples = None
    if record:
        samples = np.empty((n_steps + 1,) + psi.shape, dtype=complex)
        samples[0] = psi
    if use_compiled:
        flat = np.ascontiguousarray(psi.reshape(-1, psi.shape[-1]))
        buf = samples.reshape((n_steps + 1,) + flat.shape) if record else np.empty((1,) + flat.shape, dtype=complex)
        psi = _rk4_compiled(flat, attract, h, n_steps, buf, record).reshape(psi.shape)
    else:
        psi = _rk4_numpy(psi, attract, h, n_steps, external, samples)
    if record:
        taus = np.arange(n_steps + 1) * h
        taus[-1] = tau_final
        return taus, samples
    return tau_final, psi


def integrate(
    initial: DiscreteState,
    mass: float,
    constants: PhysConstants = CODATA,
    t_final: Optional[float] = None,
    potential: ExternalPotential = NULL_POTENTIAL,
    step: StepPolicy = StepPolicy(),
) -> Trajectory:
    """Integrate the discrete Schrodinger-Newton equation with fixed-step RK4.

    Every step is recorded. No renormalisation is applied; the measured norm
    and population drifts are stored in ``metadata``.

    Raises
    ------
    ConfigurationError
        ``t_final`` before the initial time, or no usable energy scale to
        size the step (a non-null potential that vanishes at the start and
        no explicit ``dt``).
    DegenerateGeometryError
        Coincident sites.
    """
    if not (mass > 0 and math.isfinite(mass)):
        raise InvariantError(f"mass must be positive, got {mass!r}")
    if t_final is None:
        raise ConfigurationError("t_final is required")
    t0 = initial.time
    span = float(t_final) - t0
    if span < 0 or not math.isfinite(span):
        raise ConfigurationError(f"t_final={t_final!r} precedes initial time {t0!r}")

    n = initial.n_sites
    hbar = constants.hbar
    u0 = self_potential(initial, mass, constants)
    v0 = potential(t0, n)
    scale = float(np.max(np.abs(u0 + v0)))
    if scale == 0.0 and not potential.is_null:
        scale = float(np.max(np.abs(v0)))

    meta = {"integrator": "rk4", "max_phase": step.max_phase}

    def trivial():
        meta.update(step_s=0.0, n_steps=0, energy_scale_J=scale, norm_drift=0.0, population_drift=0.0)
        times = np.array([t0]) if span == 0 else np.array([t0, float(t_final)])
        amps = np.repeat(initial.amplitudes[None, :], times.shape[0], axis=0)
        return Trajectory(initial.positions, times, amps, meta)

    if span == 0:
        return trivial()
    if scale == 0.0:
        if potential.is_null:
            # No gravity acting (G = 0 or a single site) and no external field.
            return trivial()
        if step.dt is None:
            raise ConfigurationError("external potential vanishes at t0; pass StepPolicy(dt=...)")
        scale = hbar / step.dt

    # Coupling in units of `scale`: W_j = -sum_k C_jk P_k.
    coupling = (constants.G * mass**2 / scale) * _inverse_distances(initial.positions)
    tau_final = span * (scale / hbar)
    if step.dt is not None:
        n_steps = max(1, math.ceil(span / step.dt))
    else:
        n_steps = max(1, math.ceil(tau_final / step.max_phase))

    external = None
    if not potential.is_null:
        def external(tau):
            return potential(t0 + tau * (hbar / scale), n) / scale

    taus, samples = rk4_phase_kernel(initial.amplitudes, coupling, tau_final, n_steps, external)
    times = t0 + taus * (hbar / scale)
    times[-1] = float(t_final)
    traj = Trajectory(initial.positions, times, samples, meta)
    meta.update(
        step_s=span / n_steps,
        n_steps=n_steps,
        energy_scale_J=scale,
        norm_drift=float(traj.norm_drift().max()),
        population_drift=float(traj.population_drift().max()),
    )
    return traj
