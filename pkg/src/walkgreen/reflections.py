r"""Closed-form Green's functions on constrained subspaces via reflections.

Every evaluator here composes the full-lattice Green's function ``g`` with a
small family of reflected images of one argument:

* half-lattice (no killing):        ``g(x, y) + g(x, ybar - e_1)``
* half-lattice, killed face:        ``g(x, y) - g(x, ybar)``
* half-lattice, reflected walk:     ``g(x, y) + g(x, ybar)``
* subspace with m nonneg. coords:   sum over the 2^m sign vectors ``v`` of
                                    ``g(x, image_v(y))``
* strip of width L:                 a two-sided series of translated and
                                    reflected images of ``y``

where ``ybar`` negates the first coordinate and ``image_v`` reflects about
the hyperplanes ``{x_i = -1/2}``, which in integer arithmetic is exactly
``y_i -> -y_i - 1`` on the flipped coordinates (the half-integer form is
notation for that reflection; no fractional coordinates ever appear).

Error accounting is conservative: reflection sums report the sum of the
per-term quadrature bounds, and the strip adds an integral-comparison bound
on its truncated tail.  Summation order is fixed (sign vectors as a binary
counter, strip shells by increasing ``|k|``), so results are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import bessel
from .domains import STRIP, SUBSPACE, DomainSpec
from .errors import ConsistencyError, ConvergenceError, DomainError, TransienceError
from .lattice import (
    DEFAULT_CONFIG,
    GreenEstimate,
    Point,
    QuadratureConfig,
    _integrate_normalized,
    as_point,
    check_dimension,
    green_full,
    green_origin_gamma,
    require_transient,
)

#: Default tail tolerance for the strip series.  The series tail only decays
#: like ``K^{3-d}``, so very tight tolerances on narrow strips need image
#: points whose Bessel orders exceed the configured cap; 1e-3 is reachable at
#: desk scale for every L >= 2, d >= 4.
DEFAULT_STRIP_TOL = 1e-3

Sign = tuple[int, ...]


def reflect_first(y) -> Point:
    """Negate the first coordinate: ``(y1, y2, ...) -> (-y1, y2, ...)``."""
    pt = as_point(y)
    if not pt:
        raise DomainError("reflect_first needs dimension >= 1")
    return (-pt[0],) + pt[1:]


def reflect_signed(y, v) -> Point:
    """Reflect ``y`` about ``{x_i = -1/2}`` on the coordinates with ``v_i = 1``.

    In integer arithmetic the image coordinate is ``-y_i - 1``; coordinates
    with ``v_i = 0`` are unchanged.
    """
    pt = as_point(y)
    sv = as_point(v)
    if len(pt) != len(sv):
        raise DomainError(f"sign vector has dimension {len(sv)}, point has {len(pt)}")
    if any(s not in (0, 1) for s in sv):
        raise DomainError(f"sign vector entries must be 0 or 1, got {sv}")
    return tuple(-c - 1 if s else c for c, s in zip(pt, sv))


def reflection_signs(m: int, d: int) -> list[Sign]:
    """All sign vectors in {0,1}^m x {0}^(d-m), in binary-counter order."""
    if not 0 <= m <= d:
        raise DomainError(f"need 0 <= m <= d, got m={m}, d={d}")
    zeros = (0,) * (d - m)
    return [tuple((code >> i) & 1 for i in range(m)) + zeros for code in range(1 << m)]


def _require_halfspace(d: int, x, y) -> tuple[Point, Point]:
    require_transient(d)
    px = check_dimension(x, d)
    py = check_dimension(y, d)
    for pt in (px, py):
        if pt[0] < 0:
            raise DomainError(f"point {pt} lies outside the half-lattice (x1 >= 0)")
    return px, py


def _shift_first(pt: Point, delta: int) -> Point:
    return (pt[0] + delta,) + pt[1:]


def green_half(d: int, x, y, cfg: QuadratureConfig = DEFAULT_CONFIG) -> GreenEstimate:
    """Half-lattice Green's function, no killing on the face."""
    px, py = _require_halfspace(d, x, y)
    direct = green_full(d, px, py, cfg)
    image = green_full(d, px, _shift_first(reflect_first(py), -1), cfg)
    return GreenEstimate(direct.value + image.value, direct.error_bound + image.error_bound)


def green_half_killed(d: int, x, y, cfg: QuadratureConfig = DEFAULT_CONFIG) -> GreenEstimate:
    """Half-lattice walk killed on the face ``{x1 = 0}``."""
    px, py = _require_halfspace(d, x, y)
    direct = green_full(d, px, py, cfg)
    image = green_full(d, px, reflect_first(py), cfg)
    return GreenEstimate(direct.value - image.value, direct.error_bound + image.error_bound)


def green_half_reflected(d: int, x, y, cfg: QuadratureConfig = DEFAULT_CONFIG) -> GreenEstimate:
    """Green's function of ``(|S^(1)|, S^(2), ...)``: conductance 1/2 within the face."""
    px, py = _require_halfspace(d, x, y)
    direct = green_full(d, px, py, cfg)
    image = green_full(d, px, reflect_first(py), cfg)
    return GreenEstimate(direct.value + image.value, direct.error_bound + image.error_bound)


def green_subspace(d: int, m: int, x, y, cfg: QuadratureConfig = DEFAULT_CONFIG) -> GreenEstimate:
    """Green's function on U_m (first ``m`` coordinates nonnegative)."""
    require_transient(d)
    if not 0 <= m <= d:
        raise DomainError(f"need 0 <= m <= d, got m={m}, d={d}")
    px = check_dimension(x, d)
    py = check_dimension(y, d)
    for pt in (px, py):
        if any(c < 0 for c in pt[:m]):
            raise DomainError(f"point {pt} lies outside U_{m}")
    value = 0.0
    bound = 0.0
    for v in reflection_signs(m, d):
        term = green_full(d, px, reflect_signed(py, v), cfg)
        value += term.value
        bound += term.error_bound
    return GreenEstimate(value, bound)


def green_orthant(d: int, x, y, cfg: QuadratureConfig = DEFAULT_CONFIG) -> GreenEstimate:
    """Green's function on the orthant: the ``m = d`` subspace."""
    return green_subspace(d, d, x, y, cfg)


def _strip_image(L: int, k: int, py: Point) -> Point:
    if k % 2 == 0:
        return (k * L + py[0],) + py[1:]
    return (k * L + L - 1 - py[0],) + py[1:]


def green_strip(
    d: int,
    L: int,
    x,
    y,
    tol: float = DEFAULT_STRIP_TOL,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> GreenEstimate:
    """Green's function on the strip ``[0, L-1] x Z^{d-1}``, d >= 4.

    Sums image terms outward in ``|k|`` and stops once the last shell's
    largest term drops below ``tol/4`` and an integral-comparison bound on
    the remaining tail (with constant calibrated from the last two computed
    shells) drops below ``tol/2``.  The reported bound adds the tail bound
    to the accumulated quadrature bounds.
    """
    if d < 4:
        raise TransienceError(f"the walk on a strip in Z^{d} is recurrent; need d >= 4")
    if L < 2:
        raise DomainError(f"strip width must be >= 2, got L={L}")
    if not tol > 0.0:
        raise DomainError(f"tail tolerance must be positive, got {tol}")
    px = check_dimension(x, d)
    py = check_dimension(y, d)
    for pt in (px, py):
        if not 0 <= pt[0] <= L - 1:
            raise DomainError(f"point {pt} lies outside the strip [0, {L - 1}] x Z^{d - 1}")

    lateral = max(abs(a - b) for a, b in zip(px[1:], py[1:])) if d > 1 else 0

    def term(k: int) -> GreenEstimate:
        return green_full(d, px, _strip_image(L, k, py), cfg)

    t0 = term(0)
    value = t0.value
    quad_bound = t0.error_bound
    shells: dict[int, float] = {}  # shell index -> max term value in shell
    shell = 0
    while True:
        shell += 1
        # highest first-coordinate offset this shell can produce
        reach = shell * L + L - 1 + py[0] + px[0]
        if max(reach, lateral) > bessel.ORDER_CAP:
            tail = _strip_tail_bound(L, d, shell - 1, shells)
            raise ConvergenceError(
                f"strip tail tolerance {tol:g} needs image orders beyond the "
                f"Bessel cap {bessel.ORDER_CAP}",
                best=value,
                achieved_bound=quad_bound + (tail if tail is not None else math.inf),
            )
        peak = 0.0
        for k in (-shell, shell):
            tk = term(k)
            value += tk.value
            quad_bound += tk.error_bound
            peak = max(peak, tk.value)
        shells[shell] = peak
        if shell < 3:
            continue
        tail = _strip_tail_bound(L, d, shell, shells)
        if peak < 0.25 * tol and tail is not None and tail < 0.5 * tol:
            return GreenEstimate(value, quad_bound + tail, "series-truncated")


def _strip_tail_bound(L: int, d: int, last_shell: int, shells: dict[int, float]):
    """Integral-comparison bound on the shells beyond ``last_shell``.

    Calibrates ``C = max term * dist^(d-2)`` over the last two computed
    shells (``dist = |k| L - L``, positive from the second shell on), then
    bounds ``sum_{|k| > K} C (|k| L - L)^{2-d}``.
    """
    cal = [n for n in (last_shell - 1, last_shell) if n >= 2 and n in shells]
    if not cal:
        return None
    c = max(shells[n] * float(n * L - L) ** (d - 2) for n in cal)
    k = float(last_shell)
    return 2.0 * c * L ** (2 - d) * (k ** (2 - d) + k ** (3 - d) / (d - 3))


@dataclass(frozen=True)
class OriginDiagResult:
    """Both evaluation paths for ``G_m(0, 0)``."""

    integral: GreenEstimate
    binomial: GreenEstimate

    @property
    def disagreement(self) -> float:
        return abs(self.integral.value - self.binomial.value)

    @property
    def combined_bound(self) -> float:
        return self.integral.error_bound + self.binomial.error_bound


def green_origin_diag(d: int, m: int, cfg: QuadratureConfig = DEFAULT_CONFIG) -> OriginDiagResult:
    """``G_m(0,0)`` by the direct integral and by the binomial sum.

    The integral path evaluates ``(1/2d) int e^{-x} (I_1 + I_0)^m I_0^{d-m}``
    in scaled form; the binomial path evaluates ``sum_j C(m,j) g(0, gamma_j)``
    with each ``gamma_j`` quadrature tightened to ``abs_tol / 2^m`` so the
    weighted sum still meets ``abs_tol``.  Raises ConsistencyError if the two
    disagree beyond their combined bounds.
    """
    require_transient(d)
    if not 0 <= m <= d:
        raise DomainError(f"need 0 <= m <= d, got m={m}, d={d}")

    def integrand(t: float) -> float:
        i0, i1 = bessel.bessel_i_scaled_batch(1, t / d)
        return (i0 + i1) ** m * i0 ** (d - m)

    total, bound = _integrate_normalized(integrand, d, cfg)
    integral = GreenEstimate(total, bound)

    term_cfg = replace(cfg, abs_tol=cfg.abs_tol / float(1 << m))
    value = 0.0
    err = 0.0
    for j in range(m + 1):
        coef = float(math.comb(m, j))
        gj = green_origin_gamma(d, m, j, term_cfg)
        value += coef * gj.value
        err += coef * gj.error_bound
    binomial = GreenEstimate(value, err)

    result = OriginDiagResult(integral, binomial)
    if result.disagreement > result.combined_bound:
        raise ConsistencyError(
            f"G_{m}(0,0) paths disagree by {result.disagreement:g} "
            f"(combined bound {result.combined_bound:g}) at d={d}"
        )
    return result


def green(
    domain: DomainSpec,
    x,
    y,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    strip_tol: float = DEFAULT_STRIP_TOL,
) -> GreenEstimate:
    """Evaluate the Green's function of ``domain`` at ``(x, y)``."""
    if domain.kind == SUBSPACE:
        return green_subspace(domain.d, domain.m, x, y, cfg)
    if domain.kind == STRIP:
        return green_strip(domain.d, domain.L, x, y, strip_tol, cfg)
    raise DomainError(f"unknown domain kind {domain.kind!r}")
