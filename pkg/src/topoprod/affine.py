"""Integer affine maps k -> a*k + b, the schema language for infinite data.

Every infinite object in this package (letter rules of omega blocks, level
sequences of pair families, aleph-index tails, boundedness certificates) is
described by finitely many of these.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class Affine:
    a: int
    b: int

    def __post_init__(self):
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise ValidationError("affine coefficients must be integers")

    def __call__(self, k: int) -> int:
        return self.a * k + self.b

    @property
    def constant(self) -> bool:
        return self.a == 0

    def shifted(self, delta: int) -> "Affine":
        """The map j -> self(j + delta)."""
        return Affine(self.a, self.a * delta + self.b)

    def first_at_least(self, target: int) -> int:
        """Least k >= 0 with self(k) >= target; requires a >= 1 or b >= target."""
        if self.b >= target:
            return 0
        if self.a <= 0:
            raise ValidationError("map never reaches %d" % target)
        return -((self.b - target) // self.a)

    def hits_zero(self) -> bool:
        """True when a*k + b = 0 for some integer k >= 0."""
        if self.a == 0:
            return self.b == 0
        return self.b % self.a == 0 and -self.b // self.a >= 0


def constant(value: int) -> Affine:
    return Affine(0, value)
