import numpy as np
import pytest

from icnlab.core import DivergenceError, Field, Grid1D
from icnlab.problems import (
    burgers,
    initial_condition,
    linear_advection,
    semilinear_advection,
)
from icnlab.schemes import (
    SchemeConfig,
    SchemeVariant,
    aa_linear_stencil,
    ga_linear_stencil,
    integrate,
    step_aa,
    step_ga,
    step_icn,
    step_theta_icn,
)

LINEAR = linear_advection()


def zero_rhs(u):
    return u.with_values(np.zeros_like(u.values))


def smooth_field(grid, seed=0):
    """Band-limited random data, periodic and smooth on the grid."""
    rng = np.random.default_rng(seed)
    x = grid.nodes()
    v = np.full(grid.n_cells, 0.5)
    for k in (1, 2, 3):
        a, b = rng.uniform(-0.3, 0.3, size=2)
        v += a * np.cos(2 * np.pi * k * x) + b * np.sin(2 * np.pi * k * x)
    return Field(grid, v)


def courant_dt(grid, courant, speed=1.0):
    # courant is R = a dt / (2 dx)
    return 2.0 * courant * grid.dx / speed


@pytest.mark.parametrize(
    "step",
    [
        lambda u: step_icn(u, zero_rhs, 0.1),
        lambda u: step_theta_icn(u, zero_rhs, 0.1, 1.0),
        lambda u: step_ga(u, zero_rhs, 0.1, 0.7),
        lambda u: step_aa(u, zero_rhs, 0.1, 0.3, 0),
    ],
)
def test_zero_rhs_is_identity(step):
    u = smooth_field(Grid1D(16), seed=1)
    assert np.array_equal(step(u).values, u.values)


def test_icn_hand_value():
    grid = Grid1D(4)
    u = Field(grid, [0.0, 1.0, 0.0, -1.0])
    out = step_icn(u, LINEAR.rhs, courant_dt(grid, 0.25))
    assert out.values[0] == pytest.approx(-0.46875, abs=1e-15)


def test_semilinear_zero_fixed_point():
    grid = Grid1D(8)
    u = Field(grid, np.zeros(8))
    out = step_icn(u, semilinear_advection().rhs, 0.01)
    assert np.array_equal(out.values, np.zeros(8))


@pytest.mark.parametrize("swapped", [False, True])
def test_theta_half_equals_icn(swapped):
    grid = Grid1D(32)
    u = smooth_field(grid, seed=2)
    dt = courant_dt(grid, 0.25)
    a = step_icn(u, LINEAR.rhs, dt)
    b = step_theta_icn(u, LINEAR.rhs, dt, 0.5, swapped=swapped)
    assert np.array_equal(a.values, b.values)


def test_theta_and_swapped_differ():
    grid = Grid1D(200)
    u = initial_condition(grid)
    dt = courant_dt(grid, 0.25)
    a = step_theta_icn(u, LINEAR.rhs, dt, 0.6)
    b = step_theta_icn(u, LINEAR.rhs, dt, 0.6, swapped=True)
    assert np.isfinite(a.values).all() and np.isfinite(b.values).all()
    assert not np.array_equal(a.values, b.values)


def test_ga_half_matches_icn_trajectory():
    grid = Grid1D(64)
    dt = courant_dt(grid, 0.25)
    u_icn = u_ga = initial_condition(grid)
    for _ in range(20):
        u_icn = step_icn(u_icn, LINEAR.rhs, dt)
        u_ga = step_ga(u_ga, LINEAR.rhs, dt, 0.5)
    assert np.array_equal(u_icn.values, u_ga.values)


def test_aa_parity_alternation():
    grid = Grid1D(32)
    u = smooth_field(grid, seed=3)
    dt = courant_dt(grid, 0.2)
    two = step_aa(step_aa(u, LINEAR.rhs, dt, 0.6, 0), LINEAR.rhs, dt, 0.6, 1)
    manual = step_theta_icn(
        step_theta_icn(u, LINEAR.rhs, dt, 0.6), LINEAR.rhs, dt, 0.4
    )
    assert np.array_equal(two.values, manual.values)


def test_ga_step_matches_stencil():
    grid = Grid1D(8)
    u = smooth_field(grid, seed=4)
    courant = 0.25
    staged = step_ga(u, LINEAR.rhs, courant_dt(grid, courant), 0.6)
    stencil = ga_linear_stencil(u, courant, 0.6, 1.0 / 2.4)
    scale = np.abs(stencil.values).max()
    assert np.abs(staged.values - stencil.values).max() <= 1e-13 * scale


def test_aa_step_matches_stencil():
    grid = Grid1D(8)
    u = smooth_field(grid, seed=5)
    courant = 0.25
    staged = step_aa(u, LINEAR.rhs, courant_dt(grid, courant), 0.6, 0)
    stencil = aa_linear_stencil(u, courant, 0.6)
    scale = np.abs(stencil.values).max()
    assert np.abs(staged.values - stencil.values).max() <= 1e-13 * scale


def test_ga_stencil_constrained_coefficients():
    # with theta2 = 1/(4 theta1) the stencil is
    # u - R d1 u + (R^2/2) d2 u - (theta1 R^3 / 2) d3 u
    from icnlab.core import delta1_array, delta2_array, delta3_array

    grid = Grid1D(16)
    u = smooth_field(grid, seed=6)
    rng = np.random.default_rng(7)
    courant = 0.3
    for theta1 in rng.uniform(0.3, 1.2, size=5):
        out = ga_linear_stencil(u, courant, theta1, 1.0 / (4.0 * theta1))
        v = u.values
        direct = (
            v
            - courant * delta1_array(v)
            + 0.5 * courant**2 * delta2_array(v)
            - 0.5 * theta1 * courant**3 * delta3_array(v)
        )
        assert np.abs(out.values - direct).max() <= 1e-14


def test_aa_stencil_reduces_to_ga_at_half():
    grid = Grid1D(16)
    u = smooth_field(grid, seed=8)
    a = aa_linear_stencil(u, 0.3, 0.5)
    b = ga_linear_stencil(u, 0.3, 0.5, 0.5)
    assert np.abs(a.values - b.values).max() <= 1e-15


def test_stencils_at_zero_courant():
    u = smooth_field(Grid1D(8), seed=9)
    assert np.array_equal(ga_linear_stencil(u, 0.0, 0.6, 0.6).values, u.values)
    assert np.array_equal(aa_linear_stencil(u, 0.0, 0.6).values, u.values)


def test_stencil_preserves_constants():
    u = Field(Grid1D(8), np.full(8, 1.3))
    out = aa_linear_stencil(u, 0.4, 0.7)
    assert np.array_equal(out.values, u.values)


def test_integrate_zero_steps():
    u = smooth_field(Grid1D(8), seed=10)
    out = integrate(u, SchemeConfig.icn(), LINEAR.rhs, 0.1, 0)
    assert np.array_equal(out.values, u.values)


def test_integrate_published_linear_l1():
    # snapshot error at t = 0.5 with CFL 0.5 (200 steps at N = 200)
    from icnlab.analysis import error_norms

    grid = Grid1D(200)
    dt = 0.5 * grid.dx
    expected = {"icn": 1.8e-4, "aa": 1.9e-4}
    schemes = {
        "icn": SchemeConfig.icn(),
        "aa": SchemeConfig.aa(0.6),
    }
    for name, scheme in schemes.items():
        final = integrate(initial_condition(grid), scheme, LINEAR.rhs, dt, 200)
        norms = error_norms(final, LINEAR.exact_field(grid, 0.5))
        assert norms.l1 == pytest.approx(expected[name], rel=0.15)


@pytest.mark.parametrize(
    "problem", [linear_advection(), burgers(0.01)]
)
def test_mass_conservation_per_step(problem):
    grid = Grid1D(64)
    u = initial_condition(grid)
    dt = 0.5 * grid.dx if problem.has_exact else 0.5 * grid.dx**2
    out = step_icn(u, problem.rhs, dt)
    drift = abs(out.values.sum() - u.values.sum())
    assert drift <= 1e-12 * grid.n_cells * np.abs(u.values).max()


def test_integrate_divergence_reports_step_index():
    grid = Grid1D(30)
    u = initial_condition(grid)
    with pytest.raises(DivergenceError, match="step diverged at step") as info:
        integrate(u, SchemeConfig.icn(), burgers(0.01).rhs, 0.2, 20)
    assert info.value.step_index is not None
    assert 0 <= info.value.step_index < 20


def test_scheme_config_validation():
    with pytest.raises(ValueError):
        SchemeConfig.theta_icn(1.5)
    with pytest.raises(ValueError):
        SchemeConfig.ga(0.0)
    with pytest.raises(ValueError):
        SchemeConfig.aa(-0.1)
    with pytest.raises(ValueError):
        SchemeConfig(SchemeVariant.ICN, theta=0.5)
    with pytest.raises(ValueError):
        SchemeConfig(SchemeVariant.GA)
    with pytest.raises(ValueError):
        SchemeConfig(SchemeVariant.GA, theta1=0.6, theta=0.5)


def test_scheme_config_derived_weights():
    assert SchemeConfig.ga(0.625).theta2 == 0.4
    assert SchemeConfig.aa(0.6).theta_even == pytest.approx(0.4, abs=0)
    with pytest.raises(AttributeError):
        _ = SchemeConfig.icn().theta2


def test_scheme_config_labels():
    assert SchemeConfig.icn().label() == "icn"
    assert SchemeConfig.theta_icn(0.6).label() == "theta(0.6)"
    assert SchemeConfig.swapped_theta_icn(0.6).label() == "swapped(0.6)"
    assert SchemeConfig.ga(0.6).label() == "ga(0.6)"
    assert SchemeConfig.aa(0.6).label() == "aa(0.6)"


def test_scheme_config_step_dispatch():
    grid = Grid1D(16)
    u = smooth_field(grid, seed=11)
    dt = courant_dt(grid, 0.2)
    pairs = [
        (SchemeConfig.icn(), step_icn(u, LINEAR.rhs, dt)),
        (
            SchemeConfig.theta_icn(0.7),
            step_theta_icn(u, LINEAR.rhs, dt, 0.7),
        ),
        (
            SchemeConfig.swapped_theta_icn(0.7),
            step_theta_icn(u, LINEAR.rhs, dt, 0.7, swapped=True),
        ),
        (SchemeConfig.ga(0.7), step_ga(u, LINEAR.rhs, dt, 0.7)),
        (SchemeConfig.aa(0.7), step_aa(u, LINEAR.rhs, dt, 0.7, 1)),
    ]
    for config, expected in pairs[:-1]:
        assert np.array_equal(
            config.step(u, LINEAR.rhs, dt).values, expected.values
        )
    config, expected = pairs[-1]
    assert np.array_equal(
        config.step(u, LINEAR.rhs, dt, step_index=1).values, expected.values
    )
