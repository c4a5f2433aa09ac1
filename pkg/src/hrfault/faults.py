"""Characteristic fault frequencies of an induction generator.

The formula helpers evaluate the classical current-signature expressions for
broken rotor bars, bearing damage, misalignment and air-gap eccentricity.
The canonical scenarios are stored as literal values (the frequencies used in
the reference simulations), not recomputed from the formulas: two of them do
not follow from the formulas with the nominal machine parameters.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

from .errors import FormulaDomainError

__all__ = [
    "MachineParams",
    "FaultKind",
    "Tone",
    "FaultScenario",
    "broken_rotor_freqs",
    "bearing_freqs",
    "misalignment_freqs",
    "eccentricity_freqs",
    "canonical_scenarios",
    "scenario_by_name",
    "SCENARIO_NAMES",
]


@dataclass(frozen=True)
class MachineParams:
    """Machine parameters. Defaults are the 4 kW, 2 pole-pair test machine.

    Attributes
    ----------
    f0 : float
        Supply frequency in Hz.
    s : float
        Per-unit slip. ``s = 1`` (locked rotor) is accepted.
    p : int
        Pole-pair count.
    fr : float
        Rotor mechanical frequency in Hz.
    nb : int
        Number of bearing balls.
    """

    f0: float = 50.0
    s: float = 0.033
    p: int = 2
    fr: float = 29.01
    nb: int = 12

    def __post_init__(self):
        if not self.f0 > 0:
            raise FormulaDomainError(f"supply frequency must be positive, got {self.f0}")
        if not self.fr > 0:
            raise FormulaDomainError(f"rotor frequency must be positive, got {self.fr}")
        if not 0 <= self.s <= 1:
            raise FormulaDomainError(f"slip must lie in [0, 1], got {self.s}")
        if int(self.p) != self.p or self.p < 1:
            raise FormulaDomainError(f"pole-pair count must be a positive integer, got {self.p}")
        if int(self.nb) != self.nb or self.nb < 1:
            raise FormulaDomainError(f"ball count must be a positive integer, got {self.nb}")


class FaultKind(enum.Enum):
    BROKEN_ROTOR_BARS = "broken-rotor-bars"
    INNER_BEARING = "inner-bearing"
    OUTER_BEARING = "outer-bearing"
    MISALIGNMENT = "misalignment"
    AIR_GAP_ECCENTRICITY = "air-gap-eccentricity"


class Tone(NamedTuple):
    """One real sinusoid: frequency (Hz), amplitude (A), phase (rad)."""

    frequency: float
    amplitude: float
    phase: float = 0.0


@dataclass(frozen=True)
class FaultScenario:
    name: str
    kind: FaultKind
    machine: MachineParams
    sidebands: tuple[Tone, ...]
    fundamental: Tone = Tone(50.0, 10.0, 0.0)

    @property
    def frequencies(self) -> list[float]:
        """Fundamental and sideband frequencies, ascending."""
        return sorted([self.fundamental.frequency] + [t.frequency for t in self.sidebands])


def _check_odd(k):
    if int(k) != k or k < 1 or k % 2 == 0:
        raise FormulaDomainError(f"harmonic index must be a positive odd integer, got {k}")


def _pair(lo, hi):
    lo, hi = abs(lo), abs(hi)
    return (min(lo, hi), max(lo, hi))


def broken_rotor_freqs(m: MachineParams, k: int = 1) -> tuple[float, float]:
    """Broken-rotor-bar sidebands ``f0 * (k (1 - s) / p -+ s)``."""
    _check_odd(k)
    base = k * (1 - m.s) / m.p
    return _pair(m.f0 * (base - m.s), m.f0 * (base + m.s))


def bearing_freqs(m: MachineParams, k: int = 1, race: str = "outer") -> tuple[float, float]:
    """Bearing-damage sidebands ``f0 -+ k * f_race``.

    ``f_race`` is ``0.4 * nb * fr`` for the outer race and ``0.6 * nb * fr``
    for the inner race.
    """
    _check_odd(k)
    if race == "outer":
        f_race = 0.4 * m.nb * m.fr
    elif race == "inner":
        f_race = 0.6 * m.nb * m.fr
    else:
        raise FormulaDomainError(f"race must be 'inner' or 'outer', got {race!r}")
    return _pair(m.f0 - k * f_race, m.f0 + k * f_race)


def misalignment_freqs(m: MachineParams, k: int = 1) -> tuple[float, float]:
    _check_odd(k)
    return _pair(m.f0 - k * m.fr, m.f0 + k * m.fr)


def eccentricity_freqs(m: MachineParams, order: int = 1) -> tuple[float, float]:
    """Air-gap eccentricity sidebands ``f0 * (1 -+ order (1 - s) / p)``."""
    if int(order) != order or order < 1:
        raise FormulaDomainError(f"eccentricity order must be a positive integer, got {order}")
    shift = order * (1 - m.s) / m.p
    return _pair(m.f0 * (1 - shift), m.f0 * (1 + shift))


# Literal sideband frequencies of the four reference scenarios. The broken-rotor
# upper value (70.83) and the inner-bearing upper value (367.74) are not what the
# formulas give for the default machine; the literals are kept on purpose.
_CANONICAL = (
    ("broken-rotor", FaultKind.BROKEN_ROTOR_BARS, (22.53, 70.83)),
    ("inner-bearing", FaultKind.INNER_BEARING, (89.25, 367.74)),
    ("misalignment", FaultKind.MISALIGNMENT, (79.01, 137.03)),
    ("eccentricity", FaultKind.AIR_GAP_ECCENTRICITY, (74.18, 98.35)),
)

SCENARIO_NAMES = tuple(name for name, _, _ in _CANONICAL)


def canonical_scenarios() -> list[FaultScenario]:
    """The four reference fault scenarios.

    Each carries a 50 Hz, 10 A fundamental and two 1 A sidebands with zero
    phase.
    """
    machine = MachineParams()
    return [
        FaultScenario(
            name=name,
            kind=kind,
            machine=machine,
            sidebands=tuple(Tone(f, 1.0, 0.0) for f in freqs),
            fundamental=Tone(50.0, 10.0, 0.0),
        )
        for name, kind, freqs in _CANONICAL
    ]


def scenario_by_name(name: str) -> FaultScenario:
    for scn in canonical_scenarios():
        if scn.name == name:
            return scn
    raise KeyError(f"unknown scenario {name!r}; valid names: {', '.join(SCENARIO_NAMES)}")
