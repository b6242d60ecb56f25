import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gravkick.analysis import effective_kick
from gravkick.feasibility import (
    SWEEP_CSV_HEADER,
    FeasibilityCase,
    ProtocolParams,
    amplitudes_for_gain,
    delta_kick,
    evaluate_case,
    feasibility_ratio,
    solve_parameter,
    spreading_time,
    sweep,
    sweep_csv,
)
from gravkick.units import G, HBAR, UnitSystem, convert

from .refvals import CASE_A_MASS, CASE_B_RATIO, DELTA_KICK_EXAMPLE, TAU_CASE_B, TAU_CESIUM

RNG = np.random.default_rng(5150)


def case_b_params() -> ProtocolParams:
    return ProtocolParams(
        M=1e-14, m=1e-20, T=0.5, x_A=4e-7, x_B=4e-7 * math.sqrt(10), W=1e-7, g=100.0
    )


def case_a_params() -> ProtocolParams:
    # T=None defaults to the spreading time of (m, W)
    return ProtocolParams(
        M=2e-8, m=2.3e-25, x_A=5e-5, x_B=5e-5 * math.sqrt(10), W=1e-5, g=1e3, T=None
    )


def random_params() -> ProtocolParams:
    x_a = 10.0 ** RNG.uniform(-7, -4)
    return ProtocolParams(
        M=10.0 ** RNG.uniform(-15, -8),
        m=10.0 ** RNG.uniform(-25, -18),
        T=10.0 ** RNG.uniform(-2, 1),
        x_A=x_a,
        x_B=x_a * RNG.uniform(1.5, 20.0),
        W=10.0 ** RNG.uniform(-8, -5),
        g=10.0 ** RNG.uniform(0, 3),
    )


class TestDeltaKick:
    def test_worked_example(self):
        assert delta_kick(G, 1e-14, 1e-20, 0.5, 4e-7) == pytest.approx(
            DELTA_KICK_EXAMPLE, rel=1e-12
        )

    def test_zero_interaction_time(self):
        assert delta_kick(G, 1e-14, 1e-20, 0.0, 4e-7) == 0.0

    def test_inverse_square_scaling(self):
        base = delta_kick(G, 1e-14, 1e-20, 0.5, 4e-7)
        assert delta_kick(G, 1e-14, 1e-20, 0.5, 8e-7) == pytest.approx(base / 4, rel=1e-14)

    def test_nonpositive_distance_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            delta_kick(G, 1e-14, 1e-20, 0.5, 0.0)


class TestSpreadingTime:
    def test_cesium(self):
        assert spreading_time(2.3e-25, 1e-5) == pytest.approx(TAU_CESIUM, rel=1e-12)
        assert spreading_time(2.3e-25, 1e-5) == pytest.approx(0.1, rel=0.1)

    def test_heavier_probe(self):
        assert spreading_time(1e-20, 1e-7) == pytest.approx(TAU_CASE_B, rel=1e-12)
        assert spreading_time(1e-20, 1e-7) == pytest.approx(0.5, rel=0.1)

    def test_quadratic_in_width(self):
        assert spreading_time(1e-20, 2e-7) == pytest.approx(4 * TAU_CASE_B, rel=1e-12)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            spreading_time(-1e-20, 1e-7)
        with pytest.raises(ValueError):
            spreading_time(1e-20, 0.0)


class TestRatio:
    def test_case_b(self):
        assert feasibility_ratio(case_b_params()) == pytest.approx(CASE_B_RATIO, rel=1e-12)
        assert abs(feasibility_ratio(case_b_params())) == pytest.approx(0.002, rel=0.02)

    def test_zero_gain(self):
        assert feasibility_ratio(replace(case_b_params(), g=0.0)) == 0.0

    @pytest.mark.parametrize("field", ["g", "M", "m", "W", "T"])
    def test_linear_in_each_factor(self, field):
        base = case_b_params()
        scaled = replace(base, **{field: getattr(base, field) * 3.0})
        assert feasibility_ratio(scaled) == pytest.approx(
            3.0 * feasibility_ratio(base), rel=1e-12
        )

    def test_invariant_under_unit_round_trip(self):
        base = case_b_params()
        W = base.W

        def rt(value, dim):
            nat = convert(value, dim, UnitSystem.SI, UnitSystem.NATURAL, width=W)
            return convert(nat, dim, UnitSystem.NATURAL, UnitSystem.SI, width=W)

        round_tripped = ProtocolParams(
            M=rt(base.M, "mass"),
            m=rt(base.m, "mass"),
            T=rt(base.T, "time"),
            x_A=rt(base.x_A, "length"),
            x_B=rt(base.x_B, "length"),
            W=rt(base.W, "length"),
            g=base.g,
        )
        assert feasibility_ratio(round_tripped) == pytest.approx(
            feasibility_ratio(base), rel=1e-10
        )

    def test_derivable_from_kick_and_first_order_formulas(self):
        # the ratio must equal effective_kick/(hbar/W) when the amplitudes
        # realize the target gain and the kicks come from delta_kick
        for _ in range(100):
            params = random_params()
            d_a = delta_kick(G, params.M, params.m, params.T, params.x_A)
            d_b = delta_kick(G, params.M, params.m, params.T, params.x_B)
            alpha, beta = amplitudes_for_gain(params.g, d_b / d_a)
            d_ef = effective_kick(alpha, beta, d_a, d_b)
            assert d_ef / (HBAR / params.W) == pytest.approx(
                feasibility_ratio(params), rel=1e-10
            )


class TestAmplitudesForGain:
    def test_round_trip_through_effective_kick(self):
        for _ in range(500):
            gain = 10.0 ** RNG.uniform(-2, 4)
            ratio = RNG.uniform(1e-4, 0.999)
            alpha, beta = amplitudes_for_gain(gain, ratio)
            assert alpha * alpha + beta * beta == pytest.approx(1.0, abs=1e-14)
            assert beta > alpha > 0
            d_a = 1.7e-30
            assert effective_kick(alpha, beta, d_a, ratio * d_a) == pytest.approx(
                -gain * d_a, rel=1e-10
            )

    def test_invalid_ratio(self):
        with pytest.raises(ValueError, match="ratio"):
            amplitudes_for_gain(10.0, 1.5)


class TestSolve:
    def test_case_a_source_mass(self):
        params = case_a_params()
        assert params.T == pytest.approx(TAU_CESIUM, rel=1e-12)
        solved = solve_parameter(params, "M", 1e-3)
        assert solved == pytest.approx(CASE_A_MASS, rel=1e-12)
        assert 1.4e-8 <= solved <= 2.2e-8

    def test_round_trip_reproduces_target(self):
        params = case_b_params()
        for field in ("M", "m", "W", "T", "x_A", "g"):
            solved = solve_parameter(params, field, -3.3e-4)
            back = feasibility_ratio(replace(params, **{field: solved}))
            assert abs(back) == pytest.approx(3.3e-4, rel=1e-12)

    def test_solve_x_a_case_b(self):
        solved = solve_parameter(case_b_params(), "x_A", CASE_B_RATIO)
        assert solved == pytest.approx(4e-7, rel=1e-12)

    def test_zero_target_rejected(self):
        with pytest.raises(ValueError, match="target 0"):
            solve_parameter(case_b_params(), "T", 0.0)

    def test_unknown_field_rejected(self):
        with pytest.raises(ValueError, match="solve"):
            solve_parameter(case_b_params(), "x_B", 1e-3)

    @settings(max_examples=60, deadline=None)
    @given(
        target=st.floats(min_value=1e-6, max_value=1e-1),
        field=st.sampled_from(["M", "m", "W", "T", "x_A", "g"]),
    )
    def test_inversion_identity_property(self, target, field):
        params = case_b_params()
        solved = solve_parameter(params, field, target)
        assert solved > 0
        overrides = {field: solved}
        if field == "x_A" and solved >= params.x_B:
            overrides["x_B"] = 2 * solved  # keep ordering; x_B does not enter the ratio
        assert abs(feasibility_ratio(replace(params, **overrides))) == pytest.approx(
            target, rel=1e-10
        )


class TestParams:
    def test_default_interaction_time(self):
        params = ProtocolParams(M=1e-14, m=1e-20, x_A=4e-6, x_B=8e-6, W=1e-7, g=10.0)
        assert params.T == pytest.approx(spreading_time(1e-20, 1e-7), rel=1e-14)

    def test_ordering_enforced(self):
        with pytest.raises(ValueError, match="x_B"):
            ProtocolParams(M=1e-14, m=1e-20, x_A=4e-6, x_B=4e-6, W=1e-7, g=10.0)

    def test_separation_flag(self):
        assert not case_b_params().separation_ok  # x_A = 4 W
        wide = replace(case_b_params(), x_A=2e-6, x_B=4e-6)
        assert wide.separation_ok


class TestSweep:
    def test_single_axis_linearity(self):
        cases = sweep(case_b_params(), [("M", 1e-15, 2e-15, 2)])
        assert len(cases) == 2
        assert cases[1].ratio == pytest.approx(2 * cases[0].ratio, rel=1e-12)

    def test_two_axis_row_major_order(self):
        cases = sweep(case_b_params(), [("M", 1e-15, 1e-14, 10), ("x_A", 4e-7, 1.2e-6, 10)])
        assert len(cases) == 100
        ms = [c.params.M for c in cases]
        xs = [c.params.x_A for c in cases]
        assert ms == sorted(ms)  # outer axis slowest
        assert xs[:10] == sorted(xs[:10])  # inner axis fastest within a block
        assert ms[0] != ms[-1] and xs[0] == xs[10]

    def test_contains_case_b_point(self):
        cases = sweep(case_b_params(), [("M", 1e-15, 1e-14, 10)])
        assert cases[-1].ratio == pytest.approx(CASE_B_RATIO, rel=1e-12)

    def test_invalid_axis_rejected(self):
        with pytest.raises(ValueError, match="sweep field"):
            sweep(case_b_params(), [("mass", 1e-15, 1e-14, 5)])

    def test_duplicate_axes_rejected(self):
        with pytest.raises(ValueError, match="distinct"):
            sweep(case_b_params(), [("M", 1, 2, 2), ("M", 1, 2, 2)])

    def test_parallel_matches_serial(self):
        axes = [("M", 1e-15, 1e-14, 6), ("W", 5e-8, 5e-7, 5)]
        serial = sweep(case_b_params(), axes, workers=1)
        parallel = sweep(case_b_params(), axes, workers=8)
        assert [c.csv_row() for c in serial] == [c.csv_row() for c in parallel]


class TestCsvFormat:
    def test_header_and_digits(self):
        text = sweep_csv([evaluate_case(case_b_params())])
        lines = text.splitlines()
        assert lines[0] == SWEEP_CSV_HEADER
        cells = lines[1].split(",")
        assert len(cells) == 13
        assert cells[0] == "1.00000000e-14"
        assert cells[-1] in {"0", "1"}
        # scientific notation with 9 significant digits throughout
        for cell in cells[:-1]:
            mantissa = cell.lstrip("-").split("e")[0]
            assert len(mantissa.replace(".", "")) == 9

    def test_case_row_values(self):
        case = evaluate_case(case_b_params())
        assert case.tau == pytest.approx(TAU_CASE_B, rel=1e-12)
        assert case.ratio == pytest.approx(CASE_B_RATIO, rel=1e-12)
        assert case.delta_a == pytest.approx(DELTA_KICK_EXAMPLE, rel=1e-12)
        assert case.delta_b == pytest.approx(DELTA_KICK_EXAMPLE / 10.0, rel=1e-12)
        assert 0.0 < case.ps_prob < 1.0
