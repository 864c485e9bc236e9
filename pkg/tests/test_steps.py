import math

import numpy as np
import pytest

from pitune import published
from pitune.errors import InvalidParameterError, RangeError
from pitune.model import Gains
from pitune.oracle import OracleConfig, simulate_loop
from pitune.steps import evaluate, eval_v, eval_y, indexes, sample, solve_steps

PROPOSED_055 = Gains(0.70, 0.737)


def test_first_segment_is_constant():
    sol = solve_steps(0.55, PROPOSED_055)
    assert eval_y(sol, 0.0) == 1.0
    assert eval_y(sol, 0.73) == 1.0
    seg = sol.segments[0]
    assert seg.poly == (1.0,) and seg.exp_poly == ()


def test_segment_shapes():
    sol = solve_steps(1.0, Gains(1.0, 0.5))
    for n, seg in enumerate(sol.segments, 1):
        assert len(seg.poly) == n
        assert len(seg.exp_poly) == n - 1


def test_second_segment_closed_form_with_kick():
    tp, h, hi = 1.0, 0.7, 0.5
    sol = solve_steps(tp, Gains(h, hi), setpoint_weight=1.0)
    assert sol.y(2.0) == pytest.approx(0.373576, abs=1e-6)
    s = np.linspace(0, 1, 11)
    want = 1 - hi * s + (hi * tp - h) * (1 - np.exp(-s / tp))
    assert np.allclose(sol.y(1 + s), want, atol=1e-14)


def test_second_segment_closed_form_measurement_weighted():
    tp, h, hi = 1.0, 0.7, 0.5
    sol = solve_steps(tp, Gains(h, hi))
    s = np.linspace(0, 1, 11)
    want = 1 - hi * s + hi * tp * (1 - np.exp(-s / tp))
    assert np.allclose(sol.y(1 + s), want, atol=1e-14)


def test_controller_output_first_interval():
    g = Gains(1.0, 0.5)
    kick = solve_steps(1.0, g, setpoint_weight=1.0)
    assert eval_v(kick, 0.5) == pytest.approx(-0.25, abs=1e-12)
    assert eval_v(kick, 1e-12) == pytest.approx(1 - g.h, abs=1e-10)
    plain = solve_steps(1.0, g)
    assert eval_v(plain, 0.5) == pytest.approx(0.75, abs=1e-12)
    s = np.linspace(0.01, 0.99, 30)
    assert np.allclose(plain.v(s), plain.v_direct(s), atol=1e-12)


def test_derivative_at_first_knot():
    tp, g = 2.0, Gains(1.3, 0.4)
    kick = solve_steps(tp, g, setpoint_weight=1.0)
    jump = kick.segment_value(2, 0.0, True) - kick.segment_value(1, 1.0, True)
    assert jump == pytest.approx(-g.h / tp, abs=1e-12)
    plain = solve_steps(tp, g)
    assert plain.segment_value(2, 0.0, True) == pytest.approx(0.0, abs=1e-14)


def test_knot_continuity_of_derivative():
    sol = solve_steps(0.8, Gains(0.9, 0.6))
    for n in range(2, 7):
        a = sol.segment_value(n, 1.0, True)
        b = sol.segment_value(n + 1, 0.0, True)
        assert abs(a - b) < 1e-8


@pytest.mark.parametrize("tp,g", [(0.55, PROPOSED_055), (1.0, Gains(1.15, 0.744)), (10.0, Gains(6.65, 0.622))])
def test_matches_oracle(tp, g):
    y = sample(solve_steps(tp, g)).y
    ref = simulate_loop(tp, g, OracleConfig(step=1e-4)).y
    assert np.max(np.abs(y - ref)) < 1e-6


def test_controller_output_matches_oracle():
    tp, g = 0.55, PROPOSED_055
    sol = solve_steps(tp, g)
    ref = simulate_loop(tp, g, OracleConfig(step=1e-4))
    t = np.random.default_rng(9).integers(1, 600, 100)
    assert np.max(np.abs(sol.v(t / 100.0) - ref.v[t])) < 1e-6


def test_ill_conditioned_solution_agrees_with_extended_precision():
    g = Gains(12.0, 3.0)
    auto = solve_steps(10.0, g)
    assert not auto.well_conditioned
    ref = simulate_loop(10.0, g, OracleConfig(step=1e-4)).y
    assert np.max(np.abs(sample(auto).y - ref)) < 1e-6
    # the exposed coefficients come from the extended-precision recursion
    seg = auto.segments[6]
    assert len(seg.poly) == 7


def test_sampled_response_shape():
    resp = sample(solve_steps(0.55, PROPOSED_055))
    assert resp.t_grid.shape == (701,)
    assert resp.y[0] == 1.0
    assert np.allclose(np.diff(resp.t_grid), 0.01)


def test_published_index_examples():
    zn = evaluate(0.55, Gains(0.495, 0.165))
    assert zn.ise == pytest.approx(4.193, abs=0.002)
    zn = evaluate(2.5, Gains(2.25, 0.75))
    assert zn.po_v == pytest.approx(0.177, abs=0.002)
    assert zn.ise == pytest.approx(2.822, abs=0.002)
    ix = evaluate(0.55, PROPOSED_055)
    assert ix.po_y == pytest.approx(0.010, abs=0.001)
    assert ix.po_v == pytest.approx(0.086, abs=0.002)
    assert ix.ise == pytest.approx(1.869, abs=0.002)


def test_finer_grid_changes_little():
    sol = solve_steps(0.55, PROPOSED_055)
    assert indexes(sol, 1000).ise == pytest.approx(indexes(sol).ise, abs=1e-4)


def test_response_decays_over_horizon():
    # every tabulated tuning ends below its starting value
    for rule, rows in published.TABLE1.items():
        for tp, cell in rows.items():
            if cell is not None:
                assert abs(sample(solve_steps(tp, Gains(*cell))).y[-1]) < 1.0


def test_validation():
    with pytest.raises(InvalidParameterError):
        solve_steps(0.0, PROPOSED_055)
    with pytest.raises(InvalidParameterError):
        solve_steps(1.0, PROPOSED_055, n_intervals=0)
    with pytest.raises(InvalidParameterError):
        solve_steps(1.0, PROPOSED_055, precision="quad")
    sol = solve_steps(1.0, PROPOSED_055)
    with pytest.raises(RangeError):
        eval_y(sol, 7.5)
    with pytest.raises(RangeError):
        eval_y(sol, -0.1)
