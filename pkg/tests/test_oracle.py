import numpy as np
import pytest

from pitune.errors import InvalidParameterError
from pitune.model import Gains
from pitune.oracle import OracleConfig, convergence_rate, growth_rate, simulate_loop


def test_config_validation():
    assert OracleConfig().stride == 100
    assert OracleConfig(step=1e-3).n_steps == 7000
    with pytest.raises(InvalidParameterError):
        OracleConfig(step=3e-3)
    with pytest.raises(InvalidParameterError):
        OracleConfig(step=-1e-3)


def test_initial_interval():
    g = Gains(1.0, 0.5)
    r = simulate_loop(1.0, g, OracleConfig(step=1e-3))
    assert np.max(np.abs(r.y[:101] - 1.0)) < 1e-12
    kick = simulate_loop(1.0, g, OracleConfig(step=1e-3), setpoint_weight=1.0)
    t = r.t_grid[1:100]
    assert np.max(np.abs(kick.v[1:100] - (1 - g.h - g.hi * t))) < 1e-10


def test_step_halving():
    g = Gains(1.15, 0.744)
    a = simulate_loop(1.0, g, OracleConfig(step=2e-4)).y
    b = simulate_loop(1.0, g, OracleConfig(step=1e-4)).y
    assert np.max(np.abs(a - b)) < 1e-8
    assert convergence_rate(1.0, g) >= 3.5


def test_growth_rate_on_known_signal():
    t = np.arange(701) * 0.01
    y = np.exp(-0.05 * t) * np.cos(1.3 * t) + 0.3 * np.exp(-2.0 * t)
    assert growth_rate(y) == pytest.approx(-0.05, abs=1e-6)
    assert growth_rate(np.exp(0.02 * t) * np.sin(t)) == pytest.approx(0.02, abs=1e-6)
