"""Parity normalisation by canonical conjugations: remove even terms for
multiplier -1 families (Jordan and diagonal) and enforce the
(odd in x, even in x) pattern for orientation-reversing families.

Each step solves a quasi-homogeneous Hamiltonian chi_p from the forbidden
parity projection of the current family and conjugates exactly by its
time-one flow; the step kills the projection at one order window and may
spill into higher windows, which later steps clean up.  To reach parity
through the full truncation order N the family is padded internally (the
fictitious zero data above N never influences orders <= N, since every
substituted term has positive weight), and the result is re-truncated.
"""

from __future__ import annotations

from .errors import InternalInconsistencyError, UnsolvableFieldError
from .interp import (
    DIAG_MINUS,
    JORDAN_MINUS,
    REVERSING,
    MapFamily,
    solve_hamiltonian_from_field,
)
from .lie import Generator, conjugate
from .rationals import rat
from .series import MapSeriesPair
from .transforms import GeneratorLog, GeneratorStep

HALF = rat(1, 2)


def _oddify(F: MapSeriesPair, N: int, p_range, windows, extract) -> tuple:
    """Shared normalisation loop.

    windows(p) gives the component orders (w1, w2) that the order-p generator
    fixes; extract(slice1, slice2) returns the pair (f_part, g_part) to feed
    the field solve d_y chi = f_part, -d_x chi = g_part.
    """
    lift = max(p_range)  # highest generator order needed
    work = F.padded(lift)
    log = GeneratorLog()
    for p in p_range:
        w1, w2 = windows(p)
        if w1 > N:  # w1 <= w2 in every case; nothing visible to fix
            continue
        s1 = work.x.qh_part(w1)
        s2 = work.y.qh_part(w2) if w2 <= N else None
        f_part, g_part = extract(s1, s2)
        if f_part.is_zero and (g_part is None or g_part.is_zero):
            continue
        try:
            chi = solve_hamiltonian_from_field(f_part, g_part)
        except UnsolvableFieldError as exc:
            raise InternalInconsistencyError(
                f"parity normalisation obstructed at orders ({w1},{w2}): {exc}"
            ) from exc
        if chi.is_zero:
            continue
        gen = Generator.of(chi)
        work = conjugate(work, gen)
        log.record(GeneratorStep(gen))
        # the step must have cleaned its own window
        r1, r2 = extract(
            work.x.qh_part(w1),
            work.y.qh_part(w2) if w2 <= N else None,
        )
        if not r1.is_zero or (r2 is not None and not r2.is_zero):
            raise InternalInconsistencyError(
                f"forbidden parity survived at orders ({w1},{w2})"
            )
    return work.truncated(N), log


def oddify_nondiag(fam: MapFamily, N: int | None = None) -> tuple[MapFamily, GeneratorLog]:
    """Conjugate a Jordan-block multiplier -1 family so its nonlinear terms
    are odd in (x, y) through order N (both components)."""
    if fam.case_tag != JORDAN_MINUS:
        raise InternalInconsistencyError("oddify_nondiag expects a jordan- family")
    F = fam.pair
    if N is None:
        N = F.order
    g = F.grading

    def windows(p):
        return p - g.l0, p - g.k0  # (p-3, p-2) under (2,3,6)

    def extract(s1, s2):
        f_part = s1.parity_project("even_xy").scale(HALF)
        g_part = s2.parity_project("even_xy").scale(HALF) if s2 is not None else None
        return f_part, g_part

    start = g.k0 + g.l0 + 1
    pair, log = _oddify(F.truncated(N), N, range(start, N + g.l0 + 1), windows, extract)
    return MapFamily(pair, fam.case_tag, fam.c_quad, fam.pre_log), log


def oddify_diag_minus(fam: MapFamily, N: int | None = None) -> tuple[MapFamily, GeneratorLog]:
    """Conjugate a linear-part -I family to commute with the central
    reflection through order N (even nonlinear terms removed)."""
    if fam.case_tag != DIAG_MINUS:
        raise InternalInconsistencyError("oddify_diag_minus expects a diag- family")
    F = fam.pair
    if N is None:
        N = F.order
    g = F.grading

    def windows(p):
        return p - 1, p - 1

    def extract(s1, s2):
        f_part = s1.parity_project("even_xy").scale(HALF)
        g_part = s2.parity_project("even_xy").scale(HALF) if s2 is not None else None
        return f_part, g_part

    start = g.k0 + g.l0 + 1
    pair, log = _oddify(F.truncated(N), N, range(start, N + 2), windows, extract)
    return MapFamily(pair, fam.case_tag, fam.c_quad, fam.pre_log), log


def reversing_oddify(fam: MapFamily, N: int | None = None) -> tuple[MapFamily, GeneratorLog]:
    """Conjugate a Diag(-1,1) family so comp_x is odd in x and comp_y is even
    in x through order N."""
    if fam.case_tag != REVERSING:
        raise InternalInconsistencyError("reversing_oddify expects a reversing family")
    F = fam.pair
    if N is None:
        N = F.order
    g = F.grading

    def windows(p):
        return p - 1, p - 1

    def extract(s1, s2):
        # d_y chi = [f]^even_x / 2 and d_x chi = [g]^odd_x / 2, i.e. the
        # g-argument of the Hamiltonian solve is -[g]^odd_x / 2
        f_part = s1.parity_project("even_x").scale(HALF)
        g_part = s2.parity_project("odd_x").scale(-HALF) if s2 is not None else None
        return f_part, g_part

    start = g.k0 + g.l0 + 1
    pair, log = _oddify(F.truncated(N), N, range(start, N + 2), windows, extract)
    return MapFamily(pair, fam.case_tag, fam.c_quad, fam.pre_log), log
