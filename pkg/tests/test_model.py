import numpy as np
import pytest

from pitune.errors import InvalidParameterError
from pitune.model import (
    Gains,
    NoDelayGains,
    NormalizedPlant,
    PiController,
    PlantModel,
    denormalize,
    normalize,
    normalize_nodelay,
)


def test_normalize_zn_time_row():
    g = normalize(PlantModel(1.0, 1.0, 1.0), PiController(kp=0.9, ti=3.0))
    assert g.h == pytest.approx(0.9, abs=1e-15)
    assert g.hi == pytest.approx(0.3, abs=1e-15)


def test_normalize_unit_products():
    g = normalize(PlantModel(2.0, 5.0, 1.0), PiController(kp=0.5, ti=1.0))
    assert (g.h, g.hi) == (1.0, 1.0)


def test_normalize_za_row():
    ti = 0.55 / (0.883 - 0.158 / 0.55)
    g = normalize(PlantModel(1.0, 0.55, 1.0), PiController(kp=0.563, ti=ti))
    assert g.h == pytest.approx(0.563)
    assert g.hi == pytest.approx(0.6098, abs=1e-4)


def test_denormalize_examples():
    pi = denormalize(Gains(0.9, 0.3), PlantModel(1.0, 2.0, 1.0))
    assert pi.kp == pytest.approx(0.9) and pi.ti == pytest.approx(3.0)
    pi = denormalize(Gains(1.0, 1.0), PlantModel(1.0, 2.0, 1.0))
    assert pi.kp == 1.0 and pi.ti == 1.0


def test_round_trip_random():
    rng = np.random.default_rng(1)
    for _ in range(100):
        plant = PlantModel(rng.uniform(0.1, 5) * rng.choice([-1, 1]), rng.uniform(0.1, 10), rng.uniform(0.1, 5))
        g = Gains(rng.uniform(0.05, 5), rng.uniform(0.05, 5))
        back = normalize(plant, denormalize(g, plant))
        assert back.h == pytest.approx(g.h, rel=1e-12)
        assert back.hi == pytest.approx(g.hi, rel=1e-12)
        pi = denormalize(g, plant)
        assert denormalize(normalize(plant, pi), plant).kp == pytest.approx(pi.kp, rel=1e-12)


def test_scaling_invariance():
    plant = PlantModel(1.5, 2.0, 0.7)
    pi = PiController(kp=0.8, ki=0.4)
    c = 4.0
    scaled = normalize(PlantModel(1.5 * c, 2.0, 0.7), PiController(kp=0.8 / c, ki=0.4 / c))
    assert scaled == normalize(plant, pi)


def test_controller_fills_missing_field():
    assert PiController(kp=2.0, ti=4.0).ki == 0.5
    assert PiController(kp=2.0, ki=0.5).ti == 4.0
    with pytest.raises(InvalidParameterError):
        PiController(kp=2.0, ki=1.0, ti=4.0)
    with pytest.raises(InvalidParameterError):
        PiController(kp=1.0)


@pytest.mark.parametrize("args", [(0.0, 1.0, 1.0), (1.0, 0.0, 1.0), (1.0, 1.0, -1.0)])
def test_plant_validation(args):
    with pytest.raises(InvalidParameterError):
        PlantModel(*args)


def test_invalid_normalization_inputs():
    with pytest.raises(InvalidParameterError):
        PiController(kp=1.0, ti=-2.0)
    with pytest.raises(InvalidParameterError):
        normalize(PlantModel(1.0, 1.0, 0.0), PiController(kp=1.0, ti=1.0))
    with pytest.raises(InvalidParameterError):
        normalize(PlantModel(-1.0, 1.0, 1.0), PiController(kp=1.0, ti=1.0), tuning=True)
    with pytest.raises(InvalidParameterError):
        denormalize(Gains(1.0, 0.0), PlantModel(1.0, 1.0, 1.0))
    with pytest.raises(InvalidParameterError):
        NormalizedPlant(0.0)
    with pytest.raises(InvalidParameterError):
        NoDelayGains(1.0, 0.0)


def test_nodelay_normalization_and_tp():
    plant = PlantModel(2.0, 4.0, 1.0)
    assert plant.tp == 4.0
    assert plant.normalized().tp == 4.0
    g = normalize_nodelay(plant, PiController(kp=0.5, ti=2.0))
    assert (g.h, g.ti) == (1.0, 0.5)
