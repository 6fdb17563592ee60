"""Lie derivatives, Lie-series exponentials and time-one maps of formal
Hamiltonians, and conjugation of map families by such flows."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GeneratorOrderError, InternalInconsistencyError
from .series import FormalSeries, MapSeriesPair


@dataclass(frozen=True)
class Generator:
    """A Hamiltonian generator chi.  Well-definedness of exp(L_chi) needs the
    lowest weight of chi to be at least k0 + l0 + 1, so that each application
    of L_chi raises the lowest order by at least one."""

    chi: FormalSeries
    min_weight: int | None  # None for the zero generator

    @classmethod
    def of(cls, chi: FormalSeries) -> "Generator":
        low = chi.lowest_order()
        if low is not None:
            g = chi.grading
            if low < g.k0 + g.l0 + 1:
                raise GeneratorOrderError(
                    f"generator weight {low} < {g.k0 + g.l0 + 1} = k0+l0+1"
                )
        return cls(chi, low)

    def negated(self) -> "Generator":
        return Generator(-self.chi, self.min_weight)


def lie_derivative(g: FormalSeries, gen: Generator) -> FormalSeries:
    """L_chi g = {g, chi}."""
    return g.poisson(gen.chi)


def exp_lie(g: FormalSeries, gen: Generator) -> FormalSeries:
    """exp(L_chi) g = sum_k L_chi^k g / k!, exact at the truncation order.

    Each bracket with chi raises the lowest order by at least one, so the sum
    stops after at most N - q + 1 terms where q is the lowest order of g.
    """
    if gen.min_weight is None or g.is_zero:
        return g
    acc = g
    term = g
    k = 1
    limit = g.order + 2
    while True:
        term = term.poisson(gen.chi) / k
        if term.is_zero:
            return acc
        acc = acc + term
        k += 1
        if k > limit:
            raise InternalInconsistencyError(
                "Lie exponential did not terminate; generator order invariant broken"
            )


def time_one_map(gen: Generator) -> MapSeriesPair:
    """The formal time-one flow of chi: (exp(L_chi) x, exp(L_chi) y)."""
    g, N = gen.chi.grading, gen.chi.order
    return MapSeriesPair(
        exp_lie(FormalSeries.var_x(g, N), gen),
        exp_lie(FormalSeries.var_y(g, N), gen),
    )


def inverse_time_one_map(gen: Generator) -> MapSeriesPair:
    return time_one_map(gen.negated())


def pullback(g: FormalSeries, gen: Generator) -> FormalSeries:
    """g o Phi^1_chi, computed as exp(L_chi) g."""
    return exp_lie(g, gen)


def conjugate(F: MapSeriesPair, gen: Generator) -> MapSeriesPair:
    """Phi^(-1)_chi o F o Phi^1_chi.

    The right factor is evaluated as a pullback of each component (cheap);
    the left factor needs one true pair composition.
    """
    if gen.min_weight is None:
        return F
    forward = MapSeriesPair(exp_lie(F.x, gen), exp_lie(F.y, gen))
    backward = inverse_time_one_map(gen)
    return backward.compose(forward)
