import math

import pytest
from hypothesis import given, strategies as st

from sgdecoherence import CODATA, ExperimentParams, PhysConstants, InvariantError
from sgdecoherence.constants import dimensionless_phase, kinetic_potential_ratio, planck_mass

# Frozen from a 30-digit mpmath evaluation of the closed forms with CODATA values.
PLANCK_MASS_MP = 2.17643434205112666864587676046e-8
T_PAPER_5S = 1.26578387406307862672571307678
RATIO_PAPER_1S = 2.135776e-14


def test_codata_defaults():
    assert CODATA.G == 6.67430e-11
    assert CODATA.hbar == 1.054571817e-34
    assert CODATA.c == 299792458


def test_planck_mass_value():
    assert planck_mass() == pytest.approx(PLANCK_MASS_MP, rel=1e-14)
    assert f"{planck_mass():.6e}" == "2.176434e-08"
    # rounded figure quoted in the literature
    assert planck_mass() == pytest.approx(2.2e-8, rel=0.02)


def test_planck_mass_halves_for_four_G():
    assert planck_mass(CODATA.with_overrides(G=4 * CODATA.G)) == pytest.approx(planck_mass() / 2, rel=1e-15)


def test_planck_mass_without_gravity_is_infinite():
    assert planck_mass(CODATA.with_overrides(G=0.0)) == math.inf


def test_phase_at_planck_mass():
    p = ExperimentParams(mass=planck_mass(), separation=1e-6, duration=1.0)
    assert dimensionless_phase(p) == pytest.approx(2.99792458e14, rel=1e-12)


def test_phase_zero_duration():
    assert dimensionless_phase(ExperimentParams(duration=0.0)) == 0.0


def test_phase_paper_setup():
    p = ExperimentParams(mass=1e-14, separation=250e-6, duration=5.0)
    assert dimensionless_phase(p) == pytest.approx(T_PAPER_5S, rel=1e-14)
    assert round(dimensionless_phase(p), 3) == 1.266


def test_kinetic_ratio():
    p = ExperimentParams(mass=1e-14, separation=250e-6, duration=1.0)
    assert kinetic_potential_ratio(p) == pytest.approx(RATIO_PAPER_1S, rel=1e-14)
    assert kinetic_potential_ratio(p.with_(duration=0.0)) == 0.0


@given(
    mass=st.floats(1e-20, 1e-6),
    separation=st.floats(1e-9, 1.0),
    # power-of-two scaling is exact only away from subnormal intermediates
    duration=st.one_of(st.just(0.0), st.floats(1e-9, 1e4)),
)
def test_phase_scaling_exact(mass, separation, duration):
    p = ExperimentParams(mass=mass, separation=separation, duration=duration)
    T = dimensionless_phase(p)
    assert dimensionless_phase(p.with_(mass=2 * mass)) == 4 * T
    assert dimensionless_phase(p.with_(duration=2 * duration)) == 2 * T
    r = kinetic_potential_ratio(p)
    assert kinetic_potential_ratio(p.with_(separation=separation / 2)) == 8 * r


@given(separation=st.floats(1e-9, 1.0), duration=st.floats(1e-6, 1e4))
def test_phase_at_planck_mass_is_light_travel(separation, duration):
    p = ExperimentParams(mass=planck_mass(), separation=separation, duration=duration)
    assert dimensionless_phase(p) == pytest.approx(CODATA.c * duration / separation, rel=1e-12)


@pytest.mark.parametrize("kwargs", [
    {"mass": 0.0}, {"mass": -1.0}, {"separation": 0.0}, {"duration": -1.0},
    {"theta": -0.1}, {"theta": 7.0}, {"mass": float("nan")},
])
def test_params_invariants(kwargs):
    with pytest.raises(InvariantError):
        ExperimentParams(**kwargs)


@pytest.mark.parametrize("kwargs", [{"G": -1.0}, {"hbar": 0.0}, {"c": -3.0}, {"G": float("inf")}])
def test_constants_invariants(kwargs):
    with pytest.raises(InvariantError):
        PhysConstants(**kwargs)


def test_zero_G_allowed():
    assert PhysConstants(G=0.0).G == 0.0
