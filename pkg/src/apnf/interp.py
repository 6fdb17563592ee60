"""Formal interpolation of area-preserving map families by autonomous
Hamiltonian flows, with input classification and validation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    InternalInconsistencyError,
    NotAreaPreservingError,
    ParameterError,
    UnsolvableFieldError,
    UnsupportedLinearPartError,
)
from .linear import REFLECT_X, LinearMap2
from .rationals import RAT, ZERO, rat, rational_sqrt
from .series import FormalSeries, MapSeriesPair, decode, encode
from .transforms import GeneratorLog, LinearStep, ReflectStep

JORDAN_PLUS = "jordan+"
JORDAN_MINUS = "jordan-"
DIAG_PLUS = "diag+"
DIAG_MINUS = "diag-"
REVERSING = "reversing"

CASE_TAGS = (JORDAN_PLUS, JORDAN_MINUS, DIAG_PLUS, DIAG_MINUS, REVERSING)


@dataclass
class MapFamily:
    """A map family in one of the standard linear forms, together with the
    linear changes that brought it there."""

    pair: MapSeriesPair
    case_tag: str
    c_quad: RAT = ZERO  # coefficient of x^2 in the y component (jordan+ only)
    pre_log: GeneratorLog = field(default_factory=GeneratorLog)


def _linear_part(F: MapSeriesPair):
    """The 2x2 matrix of x-, y-coefficients at eps = 0."""
    cx, cy = encode(1, 0, 0), encode(0, 1, 0)
    return (
        F.x._c.get(cx, ZERO),
        F.x._c.get(cy, ZERO),
        F.y._c.get(cx, ZERO),
        F.y._c.get(cy, ZERO),
    )


def _jordan_basis(n11, n12, n21, n22) -> LinearMap2 | None:
    """For a nonzero nilpotent N, a unimodular S with S^(-1) N S = [[0,d],[0,0]].

    Columns are (N u / d, u) for the first basis vector u with N u != 0,
    where d = det[N u | u].
    """
    for u in ((rat(1), rat(0)), (rat(0), rat(1))):
        v = (n11 * u[0] + n12 * u[1], n21 * u[0] + n22 * u[1])
        if v != (ZERO, ZERO):
            d = v[0] * u[1] - v[1] * u[0]
            if d == 0:  # pragma: no cover - impossible for nilpotent N
                continue
            return LinearMap2(v[0] / d, u[0], v[1] / d, u[1])
    return None


def classify_linear_part(F: MapSeriesPair) -> MapFamily:
    """Detect which standard linear part DF_0(0) is rationally similar to, and
    conjugate the family into that form.

    Applied changes (a unimodular similarity, a rational rescaling, the
    reflection (x,y) -> (-x,y)) are recorded in the result's log.  Inputs
    whose linear part is not similar over the rationals to a supported form
    are rejected.

    Under a grading with k0 != l0 a basis-mixing linear substitution does not
    preserve quasi-homogeneous weight, so for such inputs the top weighted
    orders of the conjugated family are only as complete as the input data
    allows; families already in standard coordinates are unaffected.
    """
    if F.x._c.get(0) is not None or F.y._c.get(0) is not None:
        raise UnsupportedLinearPartError(
            "family has a nonzero constant term at eps = 0"
        )
    a, b, c, d = _linear_part(F)
    det = a * d - b * c
    tr = a + d
    log = GeneratorLog()
    pair = F

    if det == 1 and tr == 2:
        if (a, b, c, d) == (1, 0, 0, 1):
            return MapFamily(pair, DIAG_PLUS, pre_log=log)
        mu = rat(1)
        tag = JORDAN_PLUS
    elif det == 1 and tr == -2:
        if (a, b, c, d) == (-1, 0, 0, -1):
            return MapFamily(pair, DIAG_MINUS, pre_log=log)
        mu = rat(-1)
        tag = JORDAN_MINUS
    elif det == -1 and tr == 0:
        return _classify_reversing(pair, (a, b, c, d), log)
    else:
        raise UnsupportedLinearPartError(
            f"eigenvalues of [[{a},{b}],[{c},{d}]] are not a supported +-1 pattern"
        )

    # Jordan block with eigenvalue mu: N = M - mu*I is nilpotent and nonzero
    n11, n12, n21, n22 = a - mu, b, c, d - mu
    if n11 * n22 - n12 * n21 != 0 or (n11 + n22) != 0:
        raise UnsupportedLinearPartError(
            f"linear part [[{a},{b}],[{c},{d}]] is not similar to a Jordan block"
        )
    S = _jordan_basis(n11, n12, n21, n22)
    if S is None:  # pragma: no cover
        raise UnsupportedLinearPartError("degenerate nilpotent part")
    # S^(-1) M S = [[mu, dd],[0, mu]]; normalise dd to mu via (x,y)->(sx,y/s),
    # possibly followed by the reflection (x,y)->(-x,y).
    Su = S.inverse() @ LinearMap2.of(a, b, c, d) @ S
    dd = Su.b
    reflect = False
    s = rational_sqrt(dd * mu)
    if s is None:
        s = rational_sqrt(-dd * mu)
        if s is None:
            raise UnsupportedLinearPartError(
                f"off-diagonal {dd} is not +-(rational square); cannot rescale "
                "to the standard Jordan form over the rationals"
            )
        reflect = True
    T = S @ LinearMap2(s, ZERO, ZERO, rat(1) / s)
    if not T.is_identity():
        pair = T.conjugate_pair(pair)
        log.record(LinearStep(T))
    if reflect:
        pair = REFLECT_X.conjugate_pair(pair)
        log.record(ReflectStep())
    got = _linear_part(pair)
    want = (mu, mu, ZERO, mu)
    if got != want:  # pragma: no cover - guards the construction
        raise InternalInconsistencyError(f"Jordan normalisation produced {got}")
    c_quad = pair.y.coeff(2, 0, 0) if tag == JORDAN_PLUS else ZERO
    return MapFamily(pair, tag, c_quad=c_quad, pre_log=log)


def _kernel_vector(n11, n12, n21, n22):
    """A nonzero rational kernel vector of a singular nonzero 2x2 matrix."""
    if n11 != 0 or n12 != 0:
        row = (n11, n12)
    else:
        row = (n21, n22)
    return (-row[1], row[0])


def _classify_reversing(pair, mat, log) -> MapFamily:
    a, b, c, d = mat
    if (a, b, c, d) == (-1, 0, 0, 1):
        return MapFamily(pair, REVERSING, pre_log=log)
    # eigenbasis for eigenvalues -1 and +1, scaled to determinant 1
    vm = _kernel_vector(a + 1, b, c, d + 1)
    vp = _kernel_vector(a - 1, b, c, d - 1)
    det = vm[0] * vp[1] - vm[1] * vp[0]
    if det == 0:  # pragma: no cover - distinct eigenvalues
        raise UnsupportedLinearPartError("defective reversing linear part")
    S = LinearMap2(vm[0] / det, vp[0], vm[1] / det, vp[1])
    pair = S.conjugate_pair(pair)
    log.record(LinearStep(S))
    got = _linear_part(pair)
    if got != (rat(-1), ZERO, ZERO, rat(1)):  # pragma: no cover
        raise InternalInconsistencyError(f"reversing normalisation produced {got}")
    return MapFamily(pair, REVERSING, pre_log=log)


@dataclass(frozen=True)
class AreaReport:
    ok: bool
    checked_through: int
    monomial: tuple | None = None
    value: RAT | None = None

    def raise_if_bad(self, expected):
        if not self.ok:
            raise NotAreaPreservingError(self.monomial, self.value, expected)


def check_area_preserving(
    F: MapSeriesPair, N: int | None = None, expected_det: int = 1
) -> AreaReport:
    """Compare det DF with the constant expected_det (+1, or -1 for
    orientation-reversing families).

    With F known through weight N, the determinant is fully determined only
    through N - max(k0, l0); the check runs through that window and reports
    the first offending monomial in canonical order.
    """
    if N is None:
        N = F.order
    if N > F.order:
        raise ParameterError("check window exceeds the data's truncation order")
    g = F.grading
    window = N - max(g.k0, g.l0)
    det = F.jacobian_det()
    delta = det - FormalSeries(g, F.order, {(0, 0, 0): expected_det})
    bad = [
        code
        for code in delta._c
        if g.weight_code(code) <= window
    ]
    if not bad:
        return AreaReport(True, window)
    first = min(bad)
    return AreaReport(False, window, decode(first), delta._c[first])


def solve_hamiltonian_from_field(
    f: FormalSeries, g: FormalSeries | None
) -> FormalSeries:
    """The unique h with d_y h = f and -d_x h = g, pure-eps coefficients zero.

    Existence needs div(f, g) = 0, i.e. k*a_{k,l-1,m} + l*b_{k-1,l,m} = 0 for
    all monomials; the first violated relation is reported otherwise.  With
    g = None only the y-integration is performed (the x-only part of h is set
    to zero); no compatibility check is possible then.
    """
    table: dict[int, RAT] = {}
    for code, v in f._c.items():
        k, l, m = decode(code)
        table[encode(k, l + 1, m)] = v / (l + 1)
    if g is not None:
        for code, v in g._c.items():
            k, l, m = decode(code)
            hcode = encode(k + 1, l, m)
            cand = -v / (k + 1)
            if l == 0:
                table[hcode] = cand
            else:
                # dual slot: the f route already set (or left zero) this entry
                if table.get(hcode, ZERO) != cand:
                    kk, ll = k + 1, l
                    a = f._c.get(encode(kk, ll - 1, m), ZERO)
                    raise UnsolvableFieldError((kk, ll, m), kk * a + ll * v)
        # dual slots the g route never visited force k*a + l*0 = 0
        for code, v in f._c.items():
            k, l, m = decode(code)
            if k >= 1 and encode(k - 1, l + 1, m) not in g._c:
                raise UnsolvableFieldError((k, l + 1, m), k * v)
    grading = f.grading
    limit = f.order
    for code in table:
        if grading.weight_code(code) > limit:
            raise InternalInconsistencyError(
                "field solve would exceed the truncation order"
            )
    table = {c: v for c, v in table.items() if v != 0}
    return FormalSeries._raw(grading, limit, table)


def _interpolate(F: MapSeriesPair, N: int) -> FormalSeries:
    """Shared induction: find h with Phi^1_h = F order by order.

    Works for both gradings: at step p the first component is matched at
    order p and the second at order p + (l0 - k0); the new Hamiltonian slice
    has order p + l0.  Lie words L_{s_1}...L_{s_k} applied to the coordinates
    are cached per (component, k, order) across steps.
    """
    if N > F.order:
        raise ParameterError("requested order exceeds the data's truncation order")
    g = F.grading
    k0, l0 = g.k0, g.l0
    offset = l0 - k0
    lift = F.truncated(N)
    # cached quasi-homogeneous slices of h, with their partial derivatives
    h_slices: dict[int, FormalSeries] = {}
    h_dx: dict[int, FormalSeries] = {}
    h_dy: dict[int, FormalSeries] = {}
    # memo[(comp, k, w)] = order-w part of L_h^k (coordinate comp)
    memo: dict[tuple, tuple[FormalSeries, FormalSeries, FormalSeries]] = {}
    zero = FormalSeries.zero(g, N)

    def bracket_with_slice(entry, q: int) -> FormalSeries:
        val, vdx, vdy = entry
        return vdx * h_dy[q] - vdy * h_dx[q]

    def word(comp: int, k: int, w: int):
        """Order-w part of L_h^k applied to coordinate comp, with derivatives."""
        key = (comp, k, w)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if k == 1:
            q = w + (l0 if comp == 0 else k0)
            sl = h_slices.get(q)
            if sl is None:
                val = zero
            elif comp == 0:
                val = sl.dy()
            else:
                val = -sl.dx()
        else:
            lowest_prev = (k0 if comp == 0 else l0) + k - 1
            val = zero
            for q in h_slices:
                w_prev = w - q + k0 + l0
                if w_prev < lowest_prev:
                    continue
                prev = word(comp, k - 1, w_prev)
                if prev[0].is_zero:
                    continue
                val = val + bracket_with_slice(prev, q)
        entry = (val, val.dx(), val.dy())
        memo[key] = entry
        return entry

    factorial = [rat(1), rat(1)]

    def solve_range():
        return range(k0 + 1, N - l0 + 1)

    h_total = zero
    for p in solve_range():
        while len(factorial) <= p:
            factorial.append(factorial[-1] * len(factorial))
        rhs_x = lift.x.qh_part(p)
        rhs_y = lift.y.qh_part(p + offset)
        for k in range(2, p - k0 + 1):
            wx = word(0, k, p)[0]
            if not wx.is_zero:
                rhs_x = rhs_x - wx / factorial[k]
            wy = word(1, k, p + offset)[0]
            if not wy.is_zero:
                rhs_y = rhs_y - wy / factorial[k]
        if p == k0:  # pragma: no cover - range starts above
            continue
        try:
            h_new = solve_hamiltonian_from_field(rhs_x, rhs_y)
        except UnsolvableFieldError as exc:
            raise InternalInconsistencyError(
                f"divergence obstruction at order {p + l0}: {exc}"
            ) from exc
        h_new = h_new.without_pure_eps()
        if not h_new.is_zero:
            q = p + l0
            h_slices[q] = h_new
            h_dx[q] = h_new.dx()
            h_dy[q] = h_new.dy()
            h_total = h_total + h_new
    return h_total


def interpolate_nondiag(F: MapSeriesPair, N: int | None = None) -> FormalSeries:
    """Interpolating Hamiltonian h = sum_{p >= 6} h_p for a family whose
    linear part at eps = 0 is the standard shear [[1,1],[0,1]].

    Phi^1_h matches F at component orders (p, p+1) for every p <= N - 3; when
    F is itself the truncated flow of a weight-<=N Hamiltonian the match is
    exact through the truncation.  The pure-eps gauge h_{00m} = 0 is applied.
    """
    if N is None:
        N = F.order
    g = F.grading
    if (g.k0, g.l0) != (2, 3):
        raise InternalInconsistencyError(
            "nondiagonal interpolation expects the (2,3,6)-type grading"
        )
    got = _linear_part(F)
    if got != (rat(1), rat(1), ZERO, rat(1)):
        raise UnsupportedLinearPartError(
            f"linear part {got} is not the standard shear; classify first"
        )
    return _interpolate(F, N)


def interpolate_diag(F: MapSeriesPair, N: int | None = None) -> FormalSeries:
    """Interpolating Hamiltonian h = sum_{p >= 3} h_p for a family whose
    linear part at eps = 0 is the identity (grading of (1,1,3) type)."""
    if N is None:
        N = F.order
    g = F.grading
    if g.k0 != g.l0:
        raise InternalInconsistencyError(
            "diagonal interpolation expects the (1,1,3)-type grading"
        )
    got = _linear_part(F)
    if got != (rat(1), ZERO, ZERO, rat(1)):
        raise UnsupportedLinearPartError(
            f"linear part {got} is not the identity; classify or peel first"
        )
    return _interpolate(F, N)
