r"""Green's function of the simple random walk on Z^d, d >= 3.

The evaluator integrates the Bessel product representation

    2d g(0, x) = int_0^inf e^{-t} prod_i I_{x_i}(t / d) dt

written entirely in scaled Bessel values, ``e^{-t} prod I_{x_i}(t/d) =
prod_i [e^{-t/d} I_{x_i}(t/d)]``, so the integrand is overflow-free and its
``t^{-d/2}`` tail is explicit.  The normalization ``g = g~ / (2d)`` is the
visit-count definition divided by ``pi(y) = 2d``; it is pinned by the discrete
harmonicity identity ``sum_{z~x} (g(z,y) - g(x,y)) = -delta_{x=y}``, which the
test suite checks directly.

Known constants (Watson-type values) appear only in tests, never here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import bessel
from .errors import ConvergenceError, DomainError, TransienceError
from .quadrature import adaptive_gauss_semi_infinite

Point = tuple[int, ...]


def as_point(coords) -> Point:
    """Coerce a coordinate sequence to a tuple of ints, exactly."""
    pt = tuple(coords)
    out = []
    for c in pt:
        if isinstance(c, bool) or int(c) != c:
            raise DomainError(f"lattice coordinates must be integers, got {c!r}")
        out.append(int(c))
    return tuple(out)


def check_dimension(x, d: int) -> Point:
    pt = as_point(x)
    if len(pt) != d:
        raise DomainError(f"point {pt} has dimension {len(pt)}, expected {d}")
    return pt


def require_transient(d: int) -> None:
    if d < 3:
        raise TransienceError(f"the simple random walk on Z^{d} is recurrent; need d >= 3")


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for the semi-infinite Bessel-product quadrature.

    ``split_point=None`` resolves to ``30 * d`` at evaluation time.  The
    default ``abs_tol`` keeps every downstream reflection sum (at most 2^d
    terms at desk scale) below 1e-8 accumulated error.
    """

    abs_tol: float = 1e-11
    split_point: float | None = None
    max_depth: int = 60

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and math.isfinite(self.abs_tol)):
            raise DomainError(f"abs_tol must be positive and finite, got {self.abs_tol}")
        if self.split_point is not None and not self.split_point > 0.0:
            raise DomainError(f"split_point must be positive, got {self.split_point}")
        if self.max_depth < 1:
            raise DomainError(f"max_depth must be >= 1, got {self.max_depth}")

    def resolve_split(self, d: int) -> float:
        return self.split_point if self.split_point is not None else 30.0 * d


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class GreenEstimate:
    """A Green's-function value with an explicit error descriptor.

    ``kind`` tags how the error bound arises: ``"quadrature"`` (sum of panel
    estimates), ``"series-truncated"`` (quadrature plus a series tail bound),
    ``"linear-solve"`` (residual norm) or ``"monte-carlo"`` (standard error).
    """

    value: float
    error_bound: float
    kind: str = "quadrature"

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"estimate value must be finite, got {self.value}")
        if not (math.isfinite(self.error_bound) and self.error_bound >= 0.0):
            raise DomainError(f"error bound must be finite and >= 0, got {self.error_bound}")


def _origin_key(x: Point) -> tuple[int, ...]:
    # g(0, x) depends on the multiset {|x_i|} only (coordinate permutations
    # and sign flips leave the integrand unchanged).  The lru_cache memo keyed
    # by (d, this key, cfg) is safe for concurrent readers and writers.
    return tuple(sorted((abs(c) for c in x), reverse=True))


@lru_cache(maxsize=None)
def _green_origin_cached(d: int, key: tuple[int, ...], cfg: QuadratureConfig) -> GreenEstimate:
    orders = [k for k in key if k != 0]
    kmax = key[0] if key else 0
    n_zero = len(key) - len(orders)

    def integrand(t: float) -> float:
        vals = bessel.bessel_i_scaled_batch(kmax, t / d)
        p = vals[0] ** n_zero
        for k in orders:
            p *= vals[k]
        return p

    total, bound = _integrate_normalized(integrand, d, cfg)
    return GreenEstimate(total, bound, "quadrature")


def _integrate_normalized(integrand, d: int, cfg: QuadratureConfig):
    """Run the semi-infinite quadrature and divide by the 2d normalization."""
    tol_integral = cfg.abs_tol * 2.0 * d
    try:
        total, bound = adaptive_gauss_semi_infinite(
            integrand, cfg.resolve_split(d), tol_integral, cfg.max_depth
        )
    except ConvergenceError as exc:
        raise ConvergenceError(
            f"Green quadrature tolerance {cfg.abs_tol:g} not reached at "
            f"max_depth {cfg.max_depth}",
            best=exc.best / (2.0 * d),
            achieved_bound=exc.achieved_bound / (2.0 * d),
        ) from None
    return total / (2.0 * d), bound / (2.0 * d)


def green_full_origin(d: int, x, cfg: QuadratureConfig = DEFAULT_CONFIG) -> GreenEstimate:
    """Green's function ``g(0, x)`` of the simple walk on Z^d, d >= 3."""
    require_transient(d)
    pt = check_dimension(x, d)
    return _green_origin_cached(d, _origin_key(pt), cfg)


def green_full(d: int, x, y, cfg: QuadratureConfig = DEFAULT_CONFIG) -> GreenEstimate:
    """``g(x, y) = g(0, x - y)`` by translation invariance."""
    require_transient(d)
    px = check_dimension(x, d)
    py = check_dimension(y, d)
    return green_full_origin(d, tuple(a - b for a, b in zip(px, py)), cfg)


@lru_cache(maxsize=None)
def _green_gamma_cached(d: int, j: int, cfg: QuadratureConfig) -> GreenEstimate:
    def integrand(t: float) -> float:
        i0, i1 = (
            bessel.bessel_i_scaled_batch(1, t / d)
            if j > 0
            else (bessel.bessel_i_scaled(0, t / d), 0.0)
        )
        return i1**j * i0 ** (d - j)

    total, bound = _integrate_normalized(integrand, d, cfg)
    return GreenEstimate(total, bound, "quadrature")


def green_origin_gamma(d: int, m: int, j: int, cfg: QuadratureConfig = DEFAULT_CONFIG) -> GreenEstimate:
    """``g(0, gamma_j)`` with ``gamma_j = e_1 + ... + e_j``.

    Evaluated through the power-form integrand ``I_1^j I_0^{d-j}`` rather
    than the generic product path, so it serves as an independent expression
    of the same quantity; it must agree with ``green_full_origin`` at
    ``gamma_j`` within twice the quadrature tolerance.
    """
    require_transient(d)
    if not 0 <= j <= m <= d:
        raise DomainError(f"need 0 <= j <= m <= d, got j={j}, m={m}, d={d}")
    return _green_gamma_cached(d, j, cfg)


def clear_caches() -> None:
    """Drop the memoized quadrature values (mainly for tests)."""
    _green_origin_cached.cache_clear()
    _green_gamma_cached.cache_clear()
