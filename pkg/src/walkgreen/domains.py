"""Walk domains: Z^d, half-lattice, m-constrained subspaces, orthant, strip.

A :class:`DomainSpec` is canonicalized on construction: the full lattice is
the subspace with ``m = 0``, the half-lattice is ``m = 1`` and the orthant is
``m = d``, so specs built through different constructors compare equal when
they describe the same graph.  All edges carry unit conductance, hence
``pi(x) = deg(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, TransienceError
from .lattice import Point, check_dimension

SUBSPACE = "subspace"
STRIP = "strip"


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    d: int
    m: int = 0
    L: int = 0

    def __post_init__(self):
        if self.kind not in (SUBSPACE, STRIP):
            raise DomainError(f"unknown domain kind {self.kind!r}")
        if self.kind == SUBSPACE:
            if self.d < 3:
                raise TransienceError(
                    f"subspaces of Z^{self.d} carry a recurrent walk; need d >= 3"
                )
            if not 0 <= self.m <= self.d:
                raise DomainError(f"need 0 <= m <= d, got m={self.m}, d={self.d}")
            if self.L != 0:
                raise DomainError("L is a strip parameter")
        else:
            if self.d < 4:
                raise TransienceError(
                    f"the walk on a strip in Z^{self.d} is recurrent; need d >= 4"
                )
            if self.L < 2:
                raise DomainError(f"strip width must be >= 2, got L={self.L}")
            if self.m != 0:
                raise DomainError("m is a subspace parameter")

    # -- constructors -----------------------------------------------------
    @classmethod
    def full(cls, d: int) -> "DomainSpec":
        return cls(SUBSPACE, d, m=0)

    @classmethod
    def half(cls, d: int) -> "DomainSpec":
        return cls(SUBSPACE, d, m=1)

    @classmethod
    def subspace(cls, d: int, m: int) -> "DomainSpec":
        return cls(SUBSPACE, d, m=m)

    @classmethod
    def orthant(cls, d: int) -> "DomainSpec":
        return cls(SUBSPACE, d, m=d)

    @classmethod
    def strip(cls, d: int, L: int) -> "DomainSpec":
        return cls(STRIP, d, L=L)

    # -- descriptors ------------------------------------------------------
    @property
    def label(self) -> str:
        if self.kind == STRIP:
            return f"strip(d={self.d},L={self.L})"
        if self.m == 0:
            return f"full(d={self.d})"
        if self.m == 1:
            return f"half(d={self.d})"
        if self.m == self.d:
            return f"orthant(d={self.d})"
        return f"subspace(d={self.d},m={self.m})"

    # -- geometry ---------------------------------------------------------
    def contains(self, x) -> bool:
        pt = check_dimension(x, self.d)
        if self.kind == SUBSPACE:
            return all(c >= 0 for c in pt[: self.m])
        return 0 <= pt[0] <= self.L - 1

    def require_member(self, x) -> Point:
        pt = check_dimension(x, self.d)
        if not self.contains(pt):
            raise DomainError(f"point {pt} lies outside {self.label}")
        return pt

    def neighbors(self, x) -> list[Point]:
        pt = self.require_member(x)
        out = []
        for axis in range(self.d):
            for step in (-1, 1):
                nb = list(pt)
                nb[axis] += step
                nb = tuple(nb)
                if self.contains(nb):
                    out.append(nb)
        return out

    def degree(self, x) -> int:
        """Number of in-domain neighbors; equals pi(x) at unit conductances."""
        pt = self.require_member(x)
        deg = 2 * self.d
        if self.kind == SUBSPACE:
            deg -= sum(1 for c in pt[: self.m] if c == 0)
        else:
            if pt[0] == 0:
                deg -= 1
            if pt[0] == self.L - 1:
                deg -= 1
        return deg
