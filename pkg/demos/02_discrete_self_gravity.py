# %% [markdown]
# # Self-gravity on a handful of sites
#
# A particle spread over N points feels the pull of its own probability on
# the other points. Populations stay put; only phases run. We check the
# closed-form phase rotation against a Runge-Kutta integration that
# recomputes the potential at every stage.

# %% imports
import numpy as np

from sgdecoherence import CODATA
from sgdecoherence.dynamics import (
    DiscreteState,
    exact_potential_solution,
    integrate,
    self_potential,
    site_probabilities,
)

rng = np.random.default_rng(0)
mass = 1e-14

# %% a random 6-site cloud ~100 um across
positions = rng.normal(size=(6, 3)) * 1e-4
state = DiscreteState.from_unnormalized(positions, rng.normal(size=6) + 1j * rng.normal(size=6))
u = self_potential(state, mass, CODATA)
print("site probabilities:", np.round(site_probabilities(state), 4))
print("self-energies (J): ", u)

# %% run long enough for the fastest site to turn through 15 rad
t_final = 15 * CODATA.hbar / np.abs(u).max()
traj = integrate(state, mass, CODATA, t_final)
exact = exact_potential_solution(state, mass, CODATA, t_final)

print(f"t_final = {t_final:.3f} s over {traj.metadata['n_steps']} RK4 steps")
print(f"max |RK4 - exact|      = {np.abs(traj.final.amplitudes - exact.amplitudes).max():.2e}")
print(f"max norm drift         = {traj.norm_drift().max():.2e}")
print(f"max population drift   = {traj.population_drift().max():.2e}")

# %% [markdown]
# Scaling every distance by lambda scales every self-energy by 1/lambda.

# %%
stretched = DiscreteState(state.positions * 3.0, state.amplitudes)
print("U(3 r) * 3 / U(r):", self_potential(stretched, mass) * 3 / u)
