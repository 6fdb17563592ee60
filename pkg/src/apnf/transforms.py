"""The ordered log of canonical changes of variables produced by the
normalization pipelines, and its replay.

Steps are recorded in application order.  A conjugation step psi transformed
the object at hand as F -> psi^(-1) o F o psi (for map stages) or
h -> h o psi (for Hamiltonian stages; the same conjugation on the flow).
A peel step marks the point where a constant linear factor (the central
reflection for multiplier -1, Diag(-1,1) for orientation-reversing families)
was factored out of the family before interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lie import Generator, conjugate, time_one_map
from .linear import REFLECT_X, LinearMap2
from .series import FormalSeries, MapSeriesPair


@dataclass(frozen=True)
class LinearStep:
    map: LinearMap2


@dataclass(frozen=True)
class ReflectStep:
    """The orientation-reversing change (x, y) -> (-x, y)."""


@dataclass(frozen=True)
class GeneratorStep:
    gen: Generator


@dataclass(frozen=True)
class PeelStep:
    """Marker: the family was written as factor o (rest of the pipeline)."""

    factor: LinearMap2


Step = LinearStep | ReflectStep | GeneratorStep | PeelStep


@dataclass
class GeneratorLog:
    steps: list = field(default_factory=list)

    def record(self, step: Step) -> None:
        self.steps.append(step)

    def extend(self, other: "GeneratorLog") -> None:
        self.steps.extend(other.steps)

    def generators(self):
        return [s.gen for s in self.steps if isinstance(s, GeneratorStep)]

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


def replay(log: GeneratorLog, h_normal: FormalSeries) -> MapSeriesPair:
    """Reconstruct the original family from the normal form and the log.

    Starting from Phi^1_{h_normal}, steps are unwound in reverse: conjugation
    steps wrap the map as psi o M o psi^(-1), peel steps compose their factor
    on the left.  The result equals the pipeline's input through the orders
    the interpolation guarantees.
    """
    M = time_one_map(Generator.of(h_normal))
    for step in reversed(log.steps):
        if isinstance(step, PeelStep):
            M = step.factor.apply_pair(M)
        elif isinstance(step, GeneratorStep):
            M = _wrap(M, step.gen)
        elif isinstance(step, LinearStep):
            # forward was F -> T^(-1) o F o T; unwind with T o M o T^(-1)
            M = step.map.inverse().conjugate_pair(M)
        elif isinstance(step, ReflectStep):
            M = REFLECT_X.conjugate_pair(M)  # the reflection is an involution
        else:  # pragma: no cover
            raise TypeError(f"unknown log step {step!r}")
    return M


def _wrap(M: MapSeriesPair, gen: Generator) -> MapSeriesPair:
    """psi o M o psi^(-1) for psi the time-one flow of gen."""
    return conjugate(M, gen.negated())
