"""2x2 rational linear coordinate changes and their action on series."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError
from .rationals import RAT, rat, rat_str
from .series import FormalSeries, MapSeriesPair


@dataclass(frozen=True)
class LinearMap2:
    """(x, y) -> (a x + b y, c x + d y) with rational entries."""

    a: RAT
    b: RAT
    c: RAT
    d: RAT

    @classmethod
    def of(cls, a, b, c, d) -> "LinearMap2":
        return cls(rat(a), rat(b), rat(c), rat(d))

    @classmethod
    def identity(cls) -> "LinearMap2":
        return cls.of(1, 0, 0, 1)

    def det(self):
        return self.a * self.d - self.b * self.c

    def is_identity(self) -> bool:
        return self.a == 1 and self.b == 0 and self.c == 0 and self.d == 1

    def __matmul__(self, other: "LinearMap2") -> "LinearMap2":
        return LinearMap2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "LinearMap2":
        det = self.det()
        if det == 0:
            raise ParameterError("singular linear map")
        return LinearMap2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def apply_scalar(self, f: FormalSeries) -> FormalSeries:
        """f o T, i.e. substitute (a x + b y, c x + d y) for (x, y)."""
        g, N = f.grading, f.order
        px = FormalSeries(g, N, {(1, 0, 0): self.a, (0, 1, 0): self.b})
        py = FormalSeries(g, N, {(1, 0, 0): self.c, (0, 1, 0): self.d})
        return f.compose(px, py)

    def apply_pair(self, F: MapSeriesPair) -> MapSeriesPair:
        """T o F: apply the matrix to the components."""
        return MapSeriesPair(
            F.x.scale(self.a) + F.y.scale(self.b),
            F.x.scale(self.c) + F.y.scale(self.d),
        )

    def conjugate_pair(self, F: MapSeriesPair) -> MapSeriesPair:
        """T^(-1) o F o T."""
        inv = self.inverse()
        return inv.apply_pair(
            MapSeriesPair(self.apply_scalar(F.x), self.apply_scalar(F.y))
        )

    def as_words(self) -> str:
        return " ".join(rat_str(v) for v in (self.a, self.b, self.c, self.d))


REFLECT_X = LinearMap2.of(-1, 0, 0, 1)  # (x, y) -> (-x, y), det -1
CENTRAL = LinearMap2.of(-1, 0, 0, -1)  # (x, y) -> (-x, -y), det 1
