"""Plant-model tests: slip relations, terrain resampling, and the hidden
drag/disturbance structure.  Hand-derived oracle values are spelled out next
to each check."""

import math

import numpy as np
import pytest

from skidsim.dynamics import (
    IDEAL_TERRAIN,
    TERRAINS,
    DisturbanceProfile,
    DomainError,
    PlantFault,
    PlantParams,
    PlantState,
    TerrainModel,
    advance_slip,
    get_terrain,
    initial_plant_state,
    plant_derivative,
    resample_slip,
    slip_multiplier,
    slip_ratio,
)


class _NeverRng:
    """Stub rng that fails the test if anything draws from it."""

    def random(self, *a, **k):
        raise AssertionError("rng consumed where no draw was expected")


# --- slip_ratio ---------------------------------------------------------------


def test_slip_ratio_equal_speeds_is_zero():
    assert slip_ratio(2.0, 2.0) == 0.0


def test_slip_ratio_spinning_wheel():
    # (2 - 1) / max(2, 1) = 0.5
    assert slip_ratio(2.0, 1.0) == 0.5


def test_slip_ratio_skidding_wheel():
    # (1 - 2) / max(1, 2) = -0.5
    assert slip_ratio(1.0, 2.0) == -0.5


def test_slip_ratio_both_zero_defined_as_zero():
    assert slip_ratio(0.0, 0.0) == 0.0


def test_slip_ratio_rejects_non_forward_motion():
    with pytest.raises(DomainError):
        slip_ratio(-1.0, -2.0)
    with pytest.raises(DomainError):
        slip_ratio(0.0, -1.0)
    with pytest.raises(DomainError):
        slip_ratio(-0.5, 0.0)


def test_slip_ratio_antisymmetric_on_positive_pairs():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a, b = rng.uniform(0.01, 10.0, size=2)
        assert slip_ratio(a, b) == -slip_ratio(b, a)


def test_slip_ratio_bounded_for_positive_pairs():
    rng = np.random.default_rng(8)
    for _ in range(200):
        a, b = rng.uniform(0.01, 10.0, size=2)
        assert abs(slip_ratio(a, b)) < 1.0


# --- slip_multiplier -----------------------------------------------------------


def test_slip_multiplier_values():
    assert slip_multiplier(0.0) == 1.0
    assert slip_multiplier(0.9) == pytest.approx(1.9)
    assert slip_multiplier(-0.5) == 0.5


def test_slip_multiplier_domain():
    with pytest.raises(DomainError):
        slip_multiplier(1.0)
    with pytest.raises(DomainError):
        slip_multiplier(-1.0)
    with pytest.raises(DomainError):
        slip_multiplier(1.3)


def test_slip_multiplier_range_over_valid_inputs():
    rng = np.random.default_rng(9)
    for s in rng.uniform(-0.999, 0.999, size=500):
        assert 0.0 < slip_multiplier(float(s)) < 2.0


# --- terrain table / resampling -------------------------------------------------


def test_builtin_terrain_ranges():
    # five surfaces, left bound dominating right everywhere
    assert set(TERRAINS) == {"dry-asphalt", "wet-asphalt", "gravel", "mud", "ice"}
    assert TERRAINS["dry-asphalt"].s_range_l == (0.05, 0.40)
    assert TERRAINS["dry-asphalt"].s_range_r == (0.05, 0.20)
    assert TERRAINS["wet-asphalt"].s_range_l == (0.05, 0.80)
    assert TERRAINS["wet-asphalt"].s_range_r == (0.05, 0.50)
    assert TERRAINS["gravel"].s_range_l == (0.05, 0.50)
    assert TERRAINS["gravel"].s_range_r == (0.05, 0.40)
    assert TERRAINS["mud"].s_range_l == (0.05, 0.70)
    assert TERRAINS["mud"].s_range_r == (0.05, 0.50)
    assert TERRAINS["ice"].s_range_l == (0.05, 0.90)
    assert TERRAINS["ice"].s_range_r == (0.05, 0.75)
    for terrain in TERRAINS.values():
        assert terrain.s_range_l[1] >= terrain.s_range_r[1]


def test_get_terrain_is_case_insensitive_and_knows_ideal():
    assert get_terrain("Ice") is TERRAINS["ice"]
    assert get_terrain(" dry-asphalt ") is TERRAINS["dry-asphalt"]
    assert get_terrain("ideal") is IDEAL_TERRAIN
    with pytest.raises(KeyError):
        get_terrain("snow")


def test_resample_slip_stays_in_range():
    rng = np.random.default_rng(3)
    ice = TERRAINS["ice"]
    dry = TERRAINS["dry-asphalt"]
    for _ in range(500):
        s = resample_slip(ice, "left", rng)
        assert 0.05 <= s <= 0.90
        s = resample_slip(dry, "right", rng)
        assert 0.05 <= s <= 0.20


def test_resample_slip_degenerate_interval_is_exact_and_free():
    point = TerrainModel("point", (0.3, 0.3), (0.3, 0.3))
    # a zero-width interval returns its value without consuming randomness
    assert resample_slip(point, "left", _NeverRng()) == 0.3
    assert resample_slip(point, "right", _NeverRng()) == 0.3


def test_resample_slip_rejects_unknown_side():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        resample_slip(TERRAINS["ice"], "front", rng)


def test_terrain_model_validates_ranges():
    with pytest.raises(ValueError):
        TerrainModel("bad", (0.5, 0.2), (0.0, 0.1))   # lo > hi
    with pytest.raises(ValueError):
        TerrainModel("bad", (-1.0, 0.2), (0.0, 0.1))  # lo at the open bound
    with pytest.raises(ValueError):
        TerrainModel("bad", (0.0, 1.0), (0.0, 0.1))   # hi at the open bound
    with pytest.raises(ValueError):
        TerrainModel("bad", (0.0, 0.1), (0.0, 0.1), resample_period=0.0)


# --- advance_slip ----------------------------------------------------------------


def test_advance_slip_first_order_step_response():
    # from s=0 toward a 0.5 target, one step of dt = tau covers 1 - 1/e:
    # 0.5 * (1 - e^-1) = 0.3160...
    terrain = TerrainModel("pt", (0.5, 0.5), (0.5, 0.5))
    state = PlantState(s_r=0.0, s_l=0.0, s_target_r=0.5, s_target_l=0.5,
                       t=0.0, next_resample_t=100.0)
    out = advance_slip(state, terrain, terrain.smoothing_tau, _NeverRng())
    expected = 0.5 * (1.0 - math.exp(-1.0))
    assert out.s_r == pytest.approx(expected, rel=1e-12)
    assert out.s_l == pytest.approx(expected, rel=1e-12)


def test_advance_slip_exact_discretization_is_step_size_invariant():
    # the relaxation uses the exact exponential blend, so N small steps land
    # exactly where one big step does (no resample events in the window)
    terrain = TerrainModel("pt", (0.5, 0.5), (0.5, 0.5))
    one = advance_slip(
        PlantState(s_target_r=0.5, s_target_l=0.5, next_resample_t=100.0),
        terrain, 0.3, _NeverRng(),
    )
    many = PlantState(s_target_r=0.5, s_target_l=0.5, next_resample_t=100.0)
    for _ in range(300):
        many = advance_slip(many, terrain, 0.001, _NeverRng())
    assert many.s_r == pytest.approx(one.s_r, abs=1e-12)


def test_advance_slip_fixed_point():
    terrain = TerrainModel("pt", (0.2, 0.2), (0.2, 0.2))
    state = PlantState(s_r=0.2, s_l=0.2, s_target_r=0.2, s_target_l=0.2,
                       next_resample_t=100.0)
    out = advance_slip(state, terrain, 0.05, _NeverRng())
    assert out.s_r == 0.2
    assert out.s_l == 0.2


def test_advance_slip_counts_five_resamples_in_ten_seconds():
    # period 2 s, horizon 10 s -> events at t = 2, 4, 6, 8, 10
    rng = np.random.default_rng(11)
    terrain = TERRAINS["ice"]
    state = initial_plant_state(terrain, rng)
    assert state.resample_count == 0
    for _ in range(10_000):
        state = advance_slip(state, terrain, 1e-3, rng)
    assert state.resample_count == 5


def test_advance_slip_keeps_slip_inside_open_unit_interval():
    rng = np.random.default_rng(5)
    terrain = TERRAINS["ice"]
    state = initial_plant_state(terrain, rng)
    for _ in range(20_000):
        state = advance_slip(state, terrain, 1e-3, rng)
        assert abs(state.s_r) < 1.0
        assert abs(state.s_l) < 1.0
        # filtered value stays inside the hull of the drawn targets
        assert 0.0 < state.s_r <= 0.75
        assert 0.0 < state.s_l <= 0.90


def test_advance_slip_deterministic_for_fixed_seed():
    def trajectory(seed):
        rng = np.random.default_rng(seed)
        terrain = TERRAINS["mud"]
        state = initial_plant_state(terrain, rng)
        out = []
        for _ in range(5000):
            state = advance_slip(state, terrain, 1e-3, rng)
            out.append((state.s_r, state.s_l))
        return out

    assert trajectory(42) == trajectory(42)
    assert trajectory(42) != trajectory(43)


def test_advance_slip_rejects_nonpositive_dt():
    with pytest.raises(ValueError):
        advance_slip(PlantState(), TERRAINS["ice"], 0.0, np.random.default_rng(0))


def test_initial_state_starts_at_first_draw():
    rng = np.random.default_rng(1)
    state = initial_plant_state(TERRAINS["ice"], rng)
    assert state.v_r == 0.0 and state.v_l == 0.0
    assert state.s_r == state.s_target_r
    assert state.s_l == state.s_target_l
    assert 0.05 <= state.s_l <= 0.90
    assert 0.05 <= state.s_r <= 0.75
    assert state.next_resample_t == pytest.approx(2.0)


# --- plant_derivative --------------------------------------------------------------


def test_drag_model_worked_example():
    # d_i(V) = -c_visc*V_i - c_quad*V_i*|V_i| + c_couple*(V_j - V_i)
    # at V = (1, 1) with c_visc=0.8, c_quad=0.25, c_couple=0.1:
    #   -0.8*1 - 0.25*1*1 + 0.1*0 = -1.05 on both sides
    params = PlantParams(c_visc=0.8, c_quad=0.25, c_couple=0.1)
    state = PlantState(v_r=1.0, v_l=1.0)
    a_r, a_l = plant_derivative(state, 0.0, 0.0, params, IDEAL_TERRAIN)
    assert a_r == pytest.approx(-1.05, abs=1e-12)
    assert a_l == pytest.approx(-1.05, abs=1e-12)


def test_drag_model_cross_coupling_sign():
    # faster side is pulled back, slower side pulled forward
    params = PlantParams(c_visc=0.0, c_quad=0.0, c_couple=0.1)
    state = PlantState(v_r=1.0, v_l=0.5)
    a_r, a_l = plant_derivative(state, 0.0, 0.0, params, IDEAL_TERRAIN)
    assert a_r == pytest.approx(-0.05)
    assert a_l == pytest.approx(+0.05)


def test_rest_is_equilibrium_without_disturbance():
    a_r, a_l = plant_derivative(PlantState(), 0.0, 0.0, PlantParams(), IDEAL_TERRAIN)
    assert a_r == 0.0
    assert a_l == 0.0


def test_disturbance_scales_linearly_with_slip_multiplier():
    # at s = 0.9 the disturbance term is exactly 1.9x its no-slip value
    dist = DisturbanceProfile(amplitude=0.0, frequency_hz=0.08, offset=0.2)
    terrain = TerrainModel("t", (0.0, 0.9), (0.0, 0.9), disturbance=dist)
    params = PlantParams(c_visc=0.0, c_quad=0.0, c_couple=0.0)
    base, _ = plant_derivative(PlantState(), 0.0, 0.0, params, terrain)
    slipped, _ = plant_derivative(PlantState(s_r=0.9, s_l=0.9), 0.0, 0.0, params, terrain)
    assert base == pytest.approx(-0.2)
    assert slipped / base == pytest.approx(1.9, rel=1e-12)


def test_disturbance_profile_evaluates_biased_sinusoid():
    dist = DisturbanceProfile(amplitude=0.5, frequency_hz=0.25, offset=0.1)
    assert dist(0.0) == pytest.approx(0.1)
    assert dist(1.0) == pytest.approx(0.6)    # sin(pi/2) = 1
    assert dist(2.0) == pytest.approx(0.1, abs=1e-12)
    assert dist(3.0) == pytest.approx(-0.4)   # sin(3pi/2) = -1


def test_plant_derivative_affine_in_control_with_slope_g():
    rng = np.random.default_rng(17)
    params = PlantParams(g_r=0.8, g_l=1.2)
    terrain = TERRAINS["wet-asphalt"]
    for _ in range(50):
        v_r, v_l = rng.uniform(-2, 2, size=2)
        s_r, s_l = rng.uniform(0.05, 0.5, size=2)
        u_r, u_l = rng.uniform(-3, 3, size=2)
        t = float(rng.uniform(0, 50))
        state = PlantState(v_r=v_r, v_l=v_l, s_r=s_r, s_l=s_l, t=t)
        h = 0.5
        a0 = plant_derivative(state, u_r, u_l, params, terrain)
        a1 = plant_derivative(state, u_r + h, u_l + h, params, terrain)
        slope_r = (a1[0] - a0[0]) / h
        slope_l = (a1[1] - a0[1]) / h
        assert slope_r == pytest.approx(params.g_r, rel=1e-9)
        assert slope_l == pytest.approx(params.g_l, rel=1e-9)


def test_unforced_drag_is_dissipative():
    # with F = 0 and U = 0: d/dt (V_R^2 + V_L^2)/2 =
    # -c_visc*(V_R^2+V_L^2) - c_quad*(|V_R|^3+|V_L|^3) - c_couple*(V_R-V_L)^2 <= 0
    rng = np.random.default_rng(23)
    params = PlantParams()
    for _ in range(200):
        v_r, v_l = rng.uniform(-3, 3, size=2)
        state = PlantState(v_r=v_r, v_l=v_l)
        a_r, a_l = plant_derivative(state, 0.0, 0.0, params, IDEAL_TERRAIN)
        assert v_r * a_r + v_l * a_l <= 1e-15


def test_plant_derivative_rejects_non_finite_inputs():
    params = PlantParams()
    with pytest.raises(PlantFault):
        plant_derivative(PlantState(v_r=math.nan), 0.0, 0.0, params, IDEAL_TERRAIN)
    with pytest.raises(PlantFault):
        plant_derivative(PlantState(), math.inf, 0.0, params, IDEAL_TERRAIN)


def test_plant_derivative_checks_slip_domain():
    with pytest.raises(DomainError):
        plant_derivative(PlantState(s_r=1.0), 0.0, 0.0, PlantParams(), IDEAL_TERRAIN)


def test_plant_params_validation():
    with pytest.raises(ValueError):
        PlantParams(g_r=0.0)
    with pytest.raises(ValueError):
        PlantParams(g_l=-1.0)
    with pytest.raises(ValueError):
        PlantParams(c_visc=-0.1)
    with pytest.raises(ValueError):
        PlantParams(wheelbase=0.0)
