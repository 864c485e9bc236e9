"""Plant and controller parameterisations.

Physical quantities are in seconds.  Delay systems are normalised with the
dead time ``L`` as time unit; delay-free systems with the plant time constant.
"""

from dataclasses import dataclass
from typing import Optional

from .errors import InvalidParameterError


@dataclass(frozen=True)
class PlantModel:
    """First-order-plus-dead-time plant ``K e^{-L s} / (1 + Tp s)``."""

    gain_K: float
    time_constant_Tp: float
    delay_L: float = 0.0

    def __post_init__(self):
        if self.gain_K == 0:
            raise InvalidParameterError("plant gain K must be non-zero")
        if not self.time_constant_Tp > 0:
            raise InvalidParameterError("plant time constant Tp must be positive")
        if self.delay_L < 0:
            raise InvalidParameterError("plant delay L must be non-negative")

    @property
    def tp(self) -> float:
        """Time constant measured in dead times."""
        if self.delay_L <= 0:
            raise InvalidParameterError("tp = Tp/L needs a positive delay L")
        return self.time_constant_Tp / self.delay_L

    def normalized(self) -> "NormalizedPlant":
        return NormalizedPlant(self.tp)


@dataclass(frozen=True)
class PiController:
    """PI controller ``Kp + Ki/s`` = ``Kp (1 + 1/(Ti s))``.

    Either ``ki`` or ``ti`` may be given; the other is filled in.
    """

    kp: float
    ki: Optional[float] = None
    ti: Optional[float] = None

    def __post_init__(self):
        if self.ki is None and self.ti is None:
            raise InvalidParameterError("controller needs ki or ti")
        if self.ti is not None and not self.ti > 0:
            raise InvalidParameterError("integral time Ti must be positive")
        if self.ki is None:
            object.__setattr__(self, "ki", self.kp / self.ti)
        elif self.ti is None and self.ki != 0:
            object.__setattr__(self, "ti", self.kp / self.ki)
        elif self.ti is not None:
            if abs(self.ki * self.ti - self.kp) > 1e-12 * max(abs(self.kp), 1e-300):
                raise InvalidParameterError("ki * ti must equal kp")


@dataclass(frozen=True)
class NormalizedPlant:
    tp: float

    def __post_init__(self):
        if not self.tp > 0:
            raise InvalidParameterError("tp must be positive")


@dataclass(frozen=True)
class Gains:
    """Dimensionless gains of the delay loop: ``h = K Kp``, ``hi = K Ki L``."""

    h: float
    hi: float


@dataclass(frozen=True)
class NoDelayGains:
    """Dimensionless gains of the delay-free loop: ``h = K Kp``, ``ti = Ti/Tp``."""

    h: float
    ti: float

    def __post_init__(self):
        if not self.ti > 0:
            raise InvalidParameterError("ti must be positive")


def normalize(plant: PlantModel, controller: PiController, tuning: bool = False) -> Gains:
    """Map physical (K, L; Kp, Ti) to ``Gains(h, hi)``.

    With ``tuning=True`` non-positive ``h`` is rejected, since the tuning
    charts only cover ``h > 0``.
    """
    if not plant.delay_L > 0:
        raise InvalidParameterError("delay L must be positive")
    if controller.ti is not None and not controller.ti > 0:
        raise InvalidParameterError("integral time Ti must be positive")
    h = plant.gain_K * controller.kp
    if controller.ti is not None:
        hi = plant.gain_K * (controller.kp / controller.ti) * plant.delay_L
    else:
        hi = plant.gain_K * controller.ki * plant.delay_L
    if tuning and not h > 0:
        raise InvalidParameterError(f"tuning requires h = K*Kp > 0, got {h}")
    return Gains(h, hi)


def denormalize(gains: Gains, plant: PlantModel) -> PiController:
    if plant.gain_K == 0:
        raise InvalidParameterError("plant gain K must be non-zero")
    if gains.hi == 0:
        raise InvalidParameterError("hi must be non-zero to define Ti")
    if not plant.delay_L > 0:
        raise InvalidParameterError("delay L must be positive")
    kp = gains.h / plant.gain_K
    ki = gains.hi / (plant.gain_K * plant.delay_L)
    return PiController(kp=kp, ki=ki, ti=plant.delay_L * gains.h / gains.hi)


def normalize_nodelay(plant: PlantModel, controller: PiController) -> NoDelayGains:
    if controller.ti is None:
        raise InvalidParameterError("delay-free normalisation needs Ti")
    return NoDelayGains(plant.gain_K * controller.kp, controller.ti / plant.time_constant_Tp)
