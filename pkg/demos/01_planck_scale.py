# %% [markdown]
# # How big is the gravitational phase?
#
# The whole effect is controlled by one number, T = G m^2 t / (hbar d).
# For laboratory durations and separations it is tiny unless the mass is
# not too far below the reduced Planck mass.

# %% imports
from sgdecoherence import CODATA, ExperimentParams, planck_mass
from sgdecoherence.constants import dimensionless_phase, kinetic_potential_ratio
from sgdecoherence.experiment import feasibility

# %% the Planck mass and the phase it produces
m_p = planck_mass(CODATA)
print(f"reduced Planck mass: {m_p:.6e} kg")

at_planck = ExperimentParams(mass=m_p, separation=1e-6, duration=1.0)
print(f"T at m_P, d = 1 um, t = 1 s: {dimensionless_phase(at_planck):.6e}  (= c t / d)")

# %% the Yb microcrystal: 1e-14 kg split by 250 um
for t in (1.0, 5.0, 50.0):
    p = ExperimentParams(mass=1e-14, separation=250e-6, duration=t)
    print(f"t = {t:5.1f} s   T = {dimensionless_phase(p):8.4f}   K/U = {kinetic_potential_ratio(p):.3e}")

# %% [markdown]
# The kinetic energy picked up by the mutual attraction of the two arms
# stays around 1e-14 of the potential for a one-second run, so dropping the
# hopping term is safe. A feasibility report bundles these numbers with the
# largest deviation from standard quantum mechanics one could observe.

# %%
for t in (5.0, 50.0):
    rep = feasibility(ExperimentParams(mass=1e-14, separation=250e-6, duration=t))
    print(f"t = {t:4.0f} s: max |D| = {rep.max_abs_D:.4f} at theta = {rep.argmax_theta:.4f} rad, "
          f"kinetic term negligible: {rep.kinetic_negligible}")
