"""Exact sparse formal power series in (x, y, eps) with a quasi-homogeneous grading.

A series is a finite table monomial -> rational coefficient, together with a
grading (the weights of x, y, eps) and a truncation order N.  Every operation
discards monomials of weight > N and never stores a zero coefficient.
Monomials are packed into a single int (k << 20 | l << 10 | m) so that
monomial products are plain integer additions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CompositionDomainError,
    IncompatibleContextError,
    ParameterError,
)
from .rationals import RAT, ZERO, rat

_SK = 20
_SL = 10
_MASK = (1 << 10) - 1
_EXP_LIMIT = _MASK


def encode(k: int, l: int, m: int) -> int:
    if k < 0 or l < 0 or m < 0:
        raise ValueError(f"negative exponent in ({k},{l},{m})")
    if k > _EXP_LIMIT or l > _EXP_LIMIT or m > _EXP_LIMIT:
        raise ValueError(f"exponent too large in ({k},{l},{m})")
    return (k << _SK) | (l << _SL) | m


def decode(code: int) -> tuple[int, int, int]:
    return code >> _SK, (code >> _SL) & _MASK, code & _MASK


@dataclass(frozen=True)
class Grading:
    """Weights (k0, l0, m0) of x, y, eps; a monomial x^k y^l eps^m has
    weight k*k0 + l*l0 + m*m0."""

    k0: int
    l0: int
    m0: int

    def __post_init__(self):
        if self.k0 <= 0 or self.l0 <= 0 or self.m0 <= 0:
            raise ValueError("grading weights must be positive")

    def weight(self, k: int, l: int, m: int) -> int:
        return k * self.k0 + l * self.l0 + m * self.m0

    def weight_code(self, code: int) -> int:
        return (
            (code >> _SK) * self.k0
            + ((code >> _SL) & _MASK) * self.l0
            + (code & _MASK) * self.m0
        )


NONDIAG = Grading(2, 3, 6)
DIAG = Grading(1, 1, 3)


def potential_grading(n: int) -> Grading:
    """Grading (2, n, 2n) used for the unique potential normal form."""
    if n < 3:
        raise ParameterError(f"potential grading needs n >= 3, got {n}")
    return Grading(2, n, 2 * n)


class FormalSeries:
    """Immutable truncated formal series.  Do not mutate the coefficient
    table after construction; all operations return new instances."""

    __slots__ = ("grading", "order", "_c")

    def __init__(self, grading: Grading, order: int, coeffs=None):
        if order < 0:
            raise ParameterError(f"truncation order must be >= 0, got {order}")
        self.grading = grading
        self.order = order
        table = {}
        if coeffs:
            for key, value in coeffs.items():
                code = key if isinstance(key, int) else encode(*key)
                c = value if isinstance(value, type(ZERO)) else rat(value)
                if c == 0:
                    continue
                if grading.weight_code(code) > order:
                    continue
                table[code] = c
        self._c = table

    # -- construction helpers -------------------------------------------------

    @classmethod
    def _raw(cls, grading: Grading, order: int, table: dict) -> "FormalSeries":
        """Wrap a ready table (no zeros, all weights <= order).  Internal."""
        out = cls.__new__(cls)
        out.grading = grading
        out.order = order
        out._c = table
        return out

    @classmethod
    def zero(cls, grading: Grading, order: int) -> "FormalSeries":
        return cls._raw(grading, order, {})

    @classmethod
    def monomial(cls, grading, order, k, l, m, coeff=1) -> "FormalSeries":
        return cls(grading, order, {(k, l, m): coeff})

    @classmethod
    def var_x(cls, grading, order) -> "FormalSeries":
        return cls.monomial(grading, order, 1, 0, 0)

    @classmethod
    def var_y(cls, grading, order) -> "FormalSeries":
        return cls.monomial(grading, order, 0, 1, 0)

    @classmethod
    def var_eps(cls, grading, order) -> "FormalSeries":
        return cls.monomial(grading, order, 0, 0, 1)

    # -- basic queries ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._c

    def __len__(self) -> int:
        return len(self._c)

    def coeff(self, k: int, l: int, m: int):
        return self._c.get(encode(k, l, m), ZERO)

    def terms(self):
        """Yield (k, l, m, coeff) in canonical lexicographic order."""
        for code in sorted(self._c):
            k, l, m = decode(code)
            yield k, l, m, self._c[code]

    def lowest_order(self):
        """Lowest quasi-homogeneous order present, or None for the zero series."""
        if not self._c:
            return None
        w = self.grading.weight_code
        return min(w(code) for code in self._c)

    def orders(self):
        """Sorted list of quasi-homogeneous orders present."""
        w = self.grading.weight_code
        return sorted({w(code) for code in self._c})

    def _ctx(self, other: "FormalSeries"):
        if self.grading != other.grading or self.order != other.order:
            raise IncompatibleContextError(
                f"mixed contexts: {self.grading}/N={self.order} vs "
                f"{other.grading}/N={other.order}"
            )

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return (
            self.grading == other.grading
            and self.order == other.order
            and self._c == other._c
        )

    __hash__ = None

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, FormalSeries):
            self._ctx(other)
            table = dict(self._c)
            for code, c in other._c.items():
                s = table.get(code, ZERO) + c
                if s == 0:
                    table.pop(code, None)
                else:
                    table[code] = s
            return FormalSeries._raw(self.grading, self.order, table)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, FormalSeries):
            self._ctx(other)
            table = dict(self._c)
            for code, c in other._c.items():
                s = table.get(code, ZERO) - c
                if s == 0:
                    table.pop(code, None)
                else:
                    table[code] = s
            return FormalSeries._raw(self.grading, self.order, table)
        return NotImplemented

    def __neg__(self):
        return FormalSeries._raw(
            self.grading, self.order, {c: -v for c, v in self._c.items()}
        )

    def scale(self, scalar) -> "FormalSeries":
        c = scalar if isinstance(scalar, type(ZERO)) else rat(scalar)
        if c == 0:
            return FormalSeries.zero(self.grading, self.order)
        return FormalSeries._raw(
            self.grading, self.order, {code: v * c for code, v in self._c.items()}
        )

    def __mul__(self, other):
        if isinstance(other, FormalSeries):
            self._ctx(other)
            return self._mul_series(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, scalar):
        c = scalar if isinstance(scalar, type(ZERO)) else rat(scalar)
        return self.scale(rat(1) / c)

    def _mul_series(self, other: "FormalSeries") -> "FormalSeries":
        if not self._c or not other._c:
            return FormalSeries.zero(self.grading, self.order)
        N = self.order
        w = self.grading.weight_code
        # iterate the shorter factor outside; sort inner by weight to break early
        a, b = self._c, other._c
        if len(a) > len(b):
            a, b = b, a
        inner = sorted(((w(code), code, v) for code, v in b.items()))
        table: dict = {}
        get = table.get
        for code1, v1 in a.items():
            w1 = w(code1)
            room = N - w1
            for w2, code2, v2 in inner:
                if w2 > room:
                    break
                code = code1 + code2
                s = get(code)
                if s is None:
                    table[code] = v1 * v2
                else:
                    table[code] = s + v1 * v2
        for code in [c for c, v in table.items() if v == 0]:
            del table[code]
        return FormalSeries._raw(self.grading, self.order, table)

    def __pow__(self, exponent: int) -> "FormalSeries":
        if not isinstance(exponent, int) or exponent < 0:
            raise ParameterError("series power needs a nonnegative int exponent")
        result = FormalSeries(self.grading, self.order, {(0, 0, 0): 1})
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- calculus ---------------------------------------------------------------

    def dx(self) -> "FormalSeries":
        table = {}
        for code, v in self._c.items():
            k = code >> _SK
            if k:
                table[code - (1 << _SK)] = v * k
        return FormalSeries._raw(self.grading, self.order, table)

    def dy(self) -> "FormalSeries":
        table = {}
        for code, v in self._c.items():
            l = (code >> _SL) & _MASK
            if l:
                table[code - (1 << _SL)] = v * l
        return FormalSeries._raw(self.grading, self.order, table)

    def poisson(self, other: "FormalSeries") -> "FormalSeries":
        """{self, other} = d_x self * d_y other - d_y self * d_x other."""
        self._ctx(other)
        return self.dx() * other.dy() - self.dy() * other.dx()

    # -- grading decompositions --------------------------------------------------

    def qh_part(self, p: int) -> "FormalSeries":
        """The quasi-homogeneous part of order p."""
        if p > self.order:
            raise ParameterError(f"order {p} exceeds truncation {self.order}")
        w = self.grading.weight_code
        table = {code: v for code, v in self._c.items() if w(code) == p}
        return FormalSeries._raw(self.grading, self.order, table)

    def up_to_order(self, p: int) -> "FormalSeries":
        """Sub-series of quasi-homogeneous orders <= p."""
        w = self.grading.weight_code
        table = {code: v for code, v in self._c.items() if w(code) <= p}
        return FormalSeries._raw(self.grading, self.order, table)

    def parity_project(self, mode: str) -> "FormalSeries":
        """Sub-series by parity of k+l (modes even_xy/odd_xy) or of k
        (modes even_x/odd_x); eps is parity neutral."""
        if mode in ("even_xy", "odd_xy"):
            want = 0 if mode == "even_xy" else 1
            table = {
                code: v
                for code, v in self._c.items()
                if ((code >> _SK) + ((code >> _SL) & _MASK)) & 1 == want
            }
        elif mode in ("even_x", "odd_x"):
            want = 0 if mode == "even_x" else 1
            table = {
                code: v for code, v in self._c.items() if (code >> _SK) & 1 == want
            }
        else:
            raise ParameterError(f"unknown parity mode {mode!r}")
        return FormalSeries._raw(self.grading, self.order, table)

    def without_pure_eps(self) -> "FormalSeries":
        """Drop monomials with k = l = 0 (the pure-eps gauge terms)."""
        table = {
            code: v for code, v in self._c.items() if code >> _SL  # k or l nonzero
        }
        return FormalSeries._raw(self.grading, self.order, table)

    # -- metric -------------------------------------------------------------------

    def equal_to_order(self, other: "FormalSeries", p: int) -> bool:
        """True iff all quasi-homogeneous parts of order <= p agree."""
        self._ctx(other)
        if p > self.order:
            raise ParameterError(f"order {p} exceeds truncation {self.order}")
        d = (self - other).lowest_order()
        return d is None or d > p

    def metric_distance(self, other: "FormalSeries"):
        """2^(-p) with p the lowest differing order; 0 if equal through N."""
        self._ctx(other)
        d = (self - other).lowest_order()
        if d is None:
            return ZERO
        return rat(1, 1 << d)

    # -- truncation / regrading -----------------------------------------------------

    def truncated(self, new_order: int) -> "FormalSeries":
        """Copy with truncation order new_order (monomials above it dropped)."""
        w = self.grading.weight_code
        table = {code: v for code, v in self._c.items() if w(code) <= new_order}
        return FormalSeries._raw(self.grading, new_order, table)

    def padded(self, new_order: int) -> "FormalSeries":
        """Copy with a higher truncation cap.  The region between the old and
        new order carries no data; callers must only rely on results whose
        coefficients are determined by orders <= the old cap."""
        if new_order < self.order:
            raise ParameterError("padded() cannot lower the order")
        return FormalSeries._raw(self.grading, new_order, dict(self._c))

    def regraded(self, new_grading: Grading) -> "FormalSeries":
        """Re-wrap the same coefficients under another grading.

        The new truncation order is the maximal new-grading weight over all
        monomials of old weight <= N, so no stored monomial is lost.
        """
        if new_grading == self.grading:
            return self
        new_order = max_weight_under(self.grading, self.order, new_grading)
        return FormalSeries._raw(new_grading, new_order, dict(self._c))

    # -- composition -------------------------------------------------------------

    def compose(self, px: "FormalSeries", py: "FormalSeries") -> "FormalSeries":
        """Substitute px for x and py for y; eps stays itself."""
        self._ctx(px)
        self._ctx(py)
        if px._c.get(0) is not None or py._c.get(0) is not None:
            raise CompositionDomainError("substituted series has a constant term")
        if not self._c:
            return FormalSeries.zero(self.grading, self.order)
        # rows[l][k] = eps-polynomial coefficient of x^k y^l
        rows: dict[int, dict[int, dict]] = {}
        for code, v in self._c.items():
            k, l, m = decode(code)
            rows.setdefault(l, {}).setdefault(k, {})[m] = v
        zero = FormalSeries.zero(self.grading, self.order)
        acc_outer = zero
        for l in range(max(rows), -1, -1):
            if l != max(rows):
                acc_outer = acc_outer * py
            row = rows.get(l)
            if row:
                acc_inner = zero
                for k in range(max(row), -1, -1):
                    if k != max(row):
                        acc_inner = acc_inner * px
                    eps_part = row.get(k)
                    if eps_part:
                        acc_inner = acc_inner + FormalSeries._raw(
                            self.grading,
                            self.order,
                            {m: v for m, v in eps_part.items()},
                        )
                acc_outer = acc_outer + acc_inner
        # top-level Horner pass for l: the loop above multiplies by py between
        # levels, which already accounts for descending powers
        return acc_outer

    # -- display -----------------------------------------------------------------

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k, l, m, c in self.terms():
            names = []
            for sym, e in (("x", k), ("y", l), ("eps", m)):
                if e == 1:
                    names.append(sym)
                elif e > 1:
                    names.append(f"{sym}^{e}")
            body = "*".join(names)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        g = self.grading
        return (
            f"FormalSeries(({g.k0},{g.l0},{g.m0}), N={self.order}, "
            f"{len(self._c)} terms: {self})"
        )


def max_weight_under(old: Grading, order: int, new: Grading) -> int:
    """Max new-grading weight over all monomials of old-grading weight <= order."""
    best = 0
    m = 0
    while m * old.m0 <= order:
        rem_m = order - m * old.m0
        l = 0
        while l * old.l0 <= rem_m:
            k = (rem_m - l * old.l0) // old.k0
            cand = k * new.k0 + l * new.l0 + m * new.m0
            if cand > best:
                best = cand
            l += 1
        m += 1
    return best


def divergence(f: FormalSeries, g: FormalSeries) -> FormalSeries:
    """d_x f + d_y g."""
    f._ctx(g)
    return f.dx() + g.dy()


@dataclass(frozen=True)
class MapSeriesPair:
    """The two components of a planar map or flow, sharing one context."""

    x: FormalSeries
    y: FormalSeries

    def __post_init__(self):
        self.x._ctx(self.y)

    @property
    def grading(self) -> Grading:
        return self.x.grading

    @property
    def order(self) -> int:
        return self.x.order

    @classmethod
    def identity(cls, grading: Grading, order: int) -> "MapSeriesPair":
        return cls(
            FormalSeries.var_x(grading, order), FormalSeries.var_y(grading, order)
        )

    def compose(self, other: "MapSeriesPair") -> "MapSeriesPair":
        """self after other: (self o other)(z) = self(other(z))."""
        self.x._ctx(other.x)
        return MapSeriesPair(
            self.x.compose(other.x, other.y), self.y.compose(other.x, other.y)
        )

    def jacobian_det(self) -> FormalSeries:
        return self.x.dx() * self.y.dy() - self.x.dy() * self.y.dx()

    def negated(self) -> "MapSeriesPair":
        """Composition with the central reflection: z -> -F... i.e. (-Fx, -Fy)."""
        return MapSeriesPair(-self.x, -self.y)

    def reflected_x(self) -> "MapSeriesPair":
        """Composition with Diag(-1,1) on the left: (-Fx, Fy)."""
        return MapSeriesPair(-self.x, self.y)

    def truncated(self, new_order: int) -> "MapSeriesPair":
        return MapSeriesPair(self.x.truncated(new_order), self.y.truncated(new_order))

    def padded(self, new_order: int) -> "MapSeriesPair":
        return MapSeriesPair(self.x.padded(new_order), self.y.padded(new_order))

    def __eq__(self, other):
        if not isinstance(other, MapSeriesPair):
            return NotImplemented
        return self.x == other.x and self.y == other.y


def compose_pair(F: MapSeriesPair, G: MapSeriesPair) -> MapSeriesPair:
    """F o G by exact substitution, truncated at the shared order."""
    return F.compose(G)
