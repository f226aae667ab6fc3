"""Acceptance criteria, one test per criterion, at their stated tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail line
per criterion.  Criterion 6 simulates 10^6 walks over a 10^4-step horizon
per comparison and takes several minutes; everything else is fast.
"""

import itertools
import time

import numpy as np
import pytest

from walkgreen import (
    DomainSpec,
    WalkConfig,
    build_truncated,
    estimate_green,
    finite_box_half_green,
    green,
    green_full,
    green_full_origin,
    green_half,
    green_orthant,
    green_origin_diag,
    green_strip,
    green_subspace,
    half_box_green_direct,
    killed_green_matrix,
    series_reduce,
)
from walkgreen.lattice import clear_caches

# Extended-precision quadrature oracle value for the d=3 Montroll integral,
# computed beforehand with mpmath (40 digits); equals the classical
# Watson-type constant 1.5163860591519780182 divided by 2d = 6.
REFERENCE_G3 = 0.25273100985866300303

MC_SEED = 20_260_809


def report(number, detail):
    print(f"\n[PASS] criterion {number}: {detail}")


def _ambient_box(d, n):
    """Plain K_N box: the series-reduced Q truncation (splits fold back to unit bonds)."""
    return series_reduce(build_truncated(DomainSpec.half(d), n, "q"))


class TestCriterion1:
    def test_quadrature_ground_truth(self):
        clear_caches()
        start = time.perf_counter()
        est = green_full_origin(3, (0, 0, 0))
        elapsed = time.perf_counter() - start
        assert est.value == pytest.approx(REFERENCE_G3, abs=1e-8)
        assert elapsed < 1.0
        report(1, f"g(0,0)={est.value:.12f} vs oracle {REFERENCE_G3:.12f} in {elapsed * 1e3:.0f} ms")


class TestCriterion2:
    def test_cross_path_identity(self):
        clear_caches()
        start = time.perf_counter()
        worst_gap = 0.0
        worst_bound = 0.0
        for d in range(3, 7):
            for m in range(d + 1):
                r = green_origin_diag(d, m)
                assert r.disagreement <= r.combined_bound
                assert r.combined_bound <= 2e-10
                worst_gap = max(worst_gap, r.disagreement)
                worst_bound = max(worst_bound, r.combined_bound)
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0
        report(
            2,
            f"22 (d,m) pairs, worst disagreement {worst_gap:.2e} "
            f"(worst combined bound {worst_bound:.2e}) in {elapsed:.1f} s",
        )


class TestCriterion3:
    def test_formula_consistency(self):
        pairs = [((0, 0, 0), (0, 0, 0)), ((2, 1, 0), (0, 0, 3)), ((1, 0, 2), (1, 0, 2))]
        for x, y in pairs:
            a = green_subspace(3, 0, x, y)
            b = green_full(3, x, y)
            assert a.value == b.value and a.error_bound == b.error_bound
        for x, y in pairs:
            a = green_subspace(3, 1, x, y)
            b = green_half(3, x, y)
            assert a.value == b.value and a.error_bound == b.error_bound
        for x, y in [((0, 0, 0), (0, 0, 0)), ((1, 2, 0), (0, 1, 3))]:
            assert green_orthant(3, x, y) == green_subspace(3, 3, x, y)
        report(3, "Subspace(0)=FullLattice, Subspace(1)=HalfSpace, Orthant=Subspace(d): term-exact")


class TestCriterion4:
    def test_finite_box_identity(self):
        start = time.perf_counter()
        worst = 0.0
        checked = 0
        half3 = DomainSpec.half(3)
        for n in (1, 2):
            direct = killed_green_matrix(build_truncated(half3, n, "plain"))
            box = killed_green_matrix(_ambient_box(3, n))
            idx_c = {v: i for i, v in enumerate(direct.vertices)}
            idx_k = {v: i for i, v in enumerate(box.vertices)}
            for dx, ix in idx_c.items():
                kx = idx_k[dx]
                for dy, iy in idx_c.items():
                    mirror = (-dy[0] - 2,) + dy[1:]
                    rhs = box.values[kx, idx_k[dy]] + box.values[kx, idx_k[mirror]]
                    worst = max(worst, abs(direct.values[ix, iy] - rhs))
                    checked += 1
            # the per-pair operations agree with the matrix route
            for x, y in [((0, 0, 0), (0, 0, 0)), ((1, 0, 0), (0, -1, 1)), ((0, n, -n), (1, 0, 0))]:
                lhs = half_box_green_direct(3, n, x, y)
                rhs = finite_box_half_green(3, n, x, y)
                assert abs(lhs - rhs) <= 1e-10
                dx, dy = tuple(2 * c for c in x), tuple(2 * c for c in y)
                assert lhs == pytest.approx(direct.values[idx_c[dx], idx_c[dy]], abs=1e-12)
        elapsed = time.perf_counter() - start
        assert worst <= 1e-10
        assert elapsed < 60.0
        report(4, f"{checked} (x,y) pairs over N in {{1,2}}, worst deviation {worst:.2e} in {elapsed:.1f} s")


class TestCriterion5:
    def test_folding_network_equivalences(self):
        start = time.perf_counter()
        full3 = DomainSpec.full(3)
        half3 = DomainSpec.half(3)

        plain = killed_green_matrix(build_truncated(full3, 3, "plain"))
        reduced = killed_green_matrix(series_reduce(build_truncated(full3, 3, "q")))
        assert plain.vertices == reduced.vertices
        worst_reduce = float(np.abs(plain.values - reduced.values).max())
        assert worst_reduce <= 1e-12

        worst_fold = 0.0
        for n in (1, 2, 3):
            hp = killed_green_matrix(build_truncated(half3, n, "h_prime"))
            q = killed_green_matrix(build_truncated(half3, n, "q"))
            lattice_pts = [v for v in hp.vertices if all(c % 2 == 0 for c in v)]
            idx_h = {v: i for i, v in enumerate(hp.vertices)}
            idx_q = {v: i for i, v in enumerate(q.vertices)}
            for dx in lattice_pts:
                hx, qx = idx_h[dx], idx_q[dx]
                for dy in lattice_pts:
                    mirror = (-dy[0] - 2,) + dy[1:]
                    rhs = q.values[qx, idx_q[dy]] + q.values[qx, idx_q[mirror]]
                    worst_fold = max(worst_fold, abs(hp.values[hx, idx_h[dy]] - rhs))
        elapsed = time.perf_counter() - start
        assert worst_fold <= 1e-10
        assert elapsed < 60.0
        report(
            5,
            f"Q-reduction deviation {worst_reduce:.2e} (N=3); fold pushforward deviation "
            f"{worst_fold:.2e} (N<=3) in {elapsed:.1f} s",
        )


class TestCriterion6:
    def test_monte_carlo_agreement(self):
        cfg = WalkConfig(n_walks=1_000_000, horizon=10_000, seed=MC_SEED, batch=10)
        cases = [
            (DomainSpec.full(3), (0, 0, 0), (0, 0, 0), None),
            (DomainSpec.half(3), (0, 0, 0), (0, 0, 0), None),
            (DomainSpec.half(3), (2, 1, 0), (2, 1, 0), None),
            (DomainSpec.orthant(3), (0, 0, 0), (0, 0, 0), None),
            (DomainSpec.strip(4, 2), (0, 0, 0, 0), (0, 0, 0, 0), 5e-4),
        ]
        lines = []
        for domain, x, y, strip_tol in cases:
            closed = (
                green(domain, x, y)
                if strip_tol is None
                else green_strip(domain.d, domain.L, x, y, tol=strip_tol)
            )
            start = time.perf_counter()
            est = estimate_green(domain, x, y, cfg)
            elapsed = time.perf_counter() - start
            err = abs(est.mean - closed.value)
            band = 3.0 * est.stderr + est.horizon_bias_bound
            assert err <= band, (
                f"{domain.label} at x={x}: |{est.mean:.6f} - {closed.value:.6f}| = {err:.2e} "
                f"> band {band:.2e}"
            )
            lines.append(f"{domain.label}@{x}: err {err:.1e} <= band {band:.1e} [{elapsed:.0f}s]")
        report(6, "; ".join(lines))


def sample_in_domain(rng, domain, lo, hi):
    while True:
        pt = tuple(int(c) for c in rng.integers(lo, hi + 1, size=domain.d))
        if domain.kind == "strip":
            pt = (int(rng.integers(0, domain.L)),) + pt[1:]
        if domain.contains(pt):
            return pt


class TestCriterion7:
    def test_properties(self):
        start = time.perf_counter()
        rng = np.random.default_rng(7)

        # (a) symmetry on 100 sampled pairs per domain
        domains = [
            DomainSpec.full(3),
            DomainSpec.half(3),
            DomainSpec.subspace(3, 2),
            DomainSpec.orthant(3),
            DomainSpec.strip(4, 3),
        ]
        worst_sym = 0.0
        for domain in domains:
            for _ in range(100):
                x = sample_in_domain(rng, domain, -2, 2)
                y = sample_in_domain(rng, domain, -2, 2)
                a = green(domain, x, y)
                b = green(domain, y, x)
                worst_sym = max(worst_sym, abs(a.value - b.value))
        assert worst_sym <= 1e-10

        # (b) supremum of the diagonal at the origin over {0..4}^3
        for m in (1, 2, 3):
            top = green_subspace(3, m, (0, 0, 0), (0, 0, 0)).value
            for pt in itertools.product(range(5), repeat=3):
                assert green_subspace(3, m, pt, pt).value <= top

        # (c) strict chain g < G_1 < G_2 < G_3 at 20 orthant pairs
        orthant = DomainSpec.orthant(3)
        for _ in range(20):
            x = sample_in_domain(rng, orthant, 0, 3)
            y = sample_in_domain(rng, orthant, 0, 3)
            prev = green_full(3, x, y)
            for m in (1, 2, 3):
                cur = green_subspace(3, m, x, y)
                assert cur.value - prev.value > 10.0 * (cur.error_bound + prev.error_bound)
                prev = cur

        # (d) product-order monotonicity of g(0,.) and of G_m(0,.)
        gvals = {}
        for pt in itertools.product(range(-3, 4), repeat=3):
            gvals[pt] = green_full_origin(3, pt).value
        for x in gvals:
            for y in gvals:
                if all(abs(a) >= abs(b) for a, b in zip(x, y)):
                    assert gvals[x] <= gvals[y] + 1e-13
        for m in (1, 2, 3):
            mvals = {}
            for y in itertools.product(range(4), repeat=3):
                mvals[y] = green_subspace(3, m, (0, 0, 0), y).value
            for y1 in mvals:
                for y2 in mvals:
                    if all(abs(a) >= abs(b) for a, b in zip(y1, y2)):
                        assert mvals[y1] <= mvals[y2] + 1e-12

        # (e) half-space diagonal decreasing in x1 toward g(0,0); the gap is
        # the image term g(0, (2 x1 + 1) e1) ~ 0.08/x1
        g0 = green_full_origin(3, (0, 0, 0)).value
        diag = [green_half(3, (t, 0, 0), (t, 0, 0)).value for t in range(13)]
        assert all(a > b for a, b in zip(diag, diag[1:]))
        assert all(v > g0 for v in diag)
        assert diag[-1] - g0 == pytest.approx(green_full_origin(3, (25, 0, 0)).value, abs=1e-10)
        assert diag[-1] - g0 < 4e-3

        # (f) strip diagonal constancy: the two layers of L=2 agree within
        # combined error; lateral constancy holds along every hyperplane,
        # and L=3 exhibits the mirror symmetry a <-> L-1-a
        a = green_strip(4, 2, (0, 0, 0, 0), (0, 0, 0, 0))
        b = green_strip(4, 2, (1, 0, 0, 0), (1, 0, 0, 0))
        assert abs(a.value - b.value) <= a.error_bound + b.error_bound
        lat1 = green_strip(4, 3, (1, 0, 0, 0), (1, 0, 0, 0))
        lat2 = green_strip(4, 3, (1, 4, -1, 2), (1, 4, -1, 2))
        assert abs(lat1.value - lat2.value) <= lat1.error_bound + lat2.error_bound
        m0 = green_strip(4, 3, (0, 0, 0, 0), (0, 0, 0, 0))
        m2 = green_strip(4, 3, (2, 0, 0, 0), (2, 0, 0, 0))
        assert abs(m0.value - m2.value) <= m0.error_bound + m2.error_bound

        elapsed = time.perf_counter() - start
        assert elapsed < 300.0
        report(7, f"symmetry worst {worst_sym:.1e}; sup/chain/product-order/half-diag/strip all hold in {elapsed:.0f} s")


class TestCriterion8:
    def test_dimension_scan(self):
        start = time.perf_counter()
        values = []
        for d in range(3, 11):
            r = green_origin_diag(d, d)
            values.append((d, 2 * d * r.integral.value, 2 * d * r.integral.error_bound))
        min_gap = float("inf")
        for (_, v1, b1), (_, v2, b2) in zip(values, values[1:]):
            gap = v1 - v2
            min_gap = min(min_gap, gap)
            assert gap > 10.0 * (b1 + b2)
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0
        seq = " > ".join(f"{v:.4f}" for _, v, _ in values)
        report(8, f"2d G_O(0,0): {seq} (min gap {min_gap:.3f}) in {elapsed:.1f} s")


class TestCriterion9:
    def test_decay_scaling(self):
        start = time.perf_counter()
        ratios = {n: green_full_origin(3, (n, 0, 0)).value * n for n in range(8, 17)}
        assert all(0.01 <= r <= 100.0 for r in ratios.values())
        variation = abs(ratios[16] - ratios[8]) / ratios[8]
        assert variation < 0.2
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0
        report(
            9,
            f"g(0,n e1) n^(d-2) in [{min(ratios.values()):.4f}, {max(ratios.values()):.4f}], "
            f"variation {variation * 100:.2f}% in {elapsed:.1f} s",
        )
