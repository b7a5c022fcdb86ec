"""CoverSpec: the degree-t cyclic cover 1 = Xi^t * Pi of the punctured line."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import FieldSpec, build_field
from .arith import polyfq


class CoverError(ValueError):
    pass


@dataclass(frozen=True)
class CoverSpec:
    """Cover data (q, t, Pi) plus precision/lift configuration.

    pi is stored as a tuple of coefficient indices (ascending degree) so the
    spec is hashable; use pi_poly() for the FieldElement form.  precision is
    an explicit digit count or "auto"; lift selects the lift of Pi used by the
    engine ("teichmuller" is canonical, "naive" digit-wise integer lift).
    """

    p: int
    a: int
    t: int
    pi: tuple
    precision: object = "auto"
    lift: str = "teichmuller"

    def __post_init__(self):
        field = self.field
        if math.gcd(self.p, self.t) != 1:
            raise CoverError(f"p = {self.p} divides t = {self.t}")
        if self.t < 1 or (field.q - 1) % self.t != 0:
            raise CoverError(f"t = {self.t} does not divide q - 1 = {field.q - 1}")
        if len(self.pi) < 2 or self.pi[-1] == 0:
            raise CoverError("trivial cover: empty divisor unsupported (Pi must be nonconstant)")
        if self.lift not in ("teichmuller", "coeffwise", "naive"):
            raise CoverError(f"unknown lift {self.lift!r}")
        if self.precision != "auto" and (not isinstance(self.precision, int) or self.precision < 1):
            raise CoverError("precision must be a positive integer or 'auto'")

    @property
    def field(self) -> FieldSpec:
        return build_field(self.p, self.a)

    @property
    def q(self) -> int:
        return self.p ** self.a

    def pi_poly(self):
        field = self.field
        return [field.from_index(i) for i in self.pi]

    def degree(self) -> int:
        return len(self.pi) - 1

    @staticmethod
    def from_field_poly(field: FieldSpec, t: int, pi_elems, precision="auto",
                        lift="teichmuller") -> "CoverSpec":
        coeffs = polyfq.trim(list(pi_elems))
        return CoverSpec(field.p, field.a, t, tuple(c.index() for c in coeffs),
                         precision, lift)

    def with_precision(self, precision) -> "CoverSpec":
        return CoverSpec(self.p, self.a, self.t, self.pi, precision, self.lift)

    def with_lift(self, lift) -> "CoverSpec":
        return CoverSpec(self.p, self.a, self.t, self.pi, self.precision, lift)

    def key(self) -> dict:
        """Canonical content for hashing/caching and JSON round-trips."""
        return {"p": self.p, "a": self.a, "t": self.t, "pi": list(self.pi),
                "precision": self.precision, "lift": self.lift}
