"""Cross-check suites behind the ``walkgreen check`` subcommand.

Each suite returns a list of :class:`CheckResult`; the CLI prints one
pass/fail line per result.  The suites mirror the package's verification
story at configurable scale: exact identities between evaluation paths,
finite-network equivalences, Monte Carlo against closed forms, and the
dimension scan of the orthant diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domains import DomainSpec
from .errors import WalkGreenError
from .lattice import green_full_origin, green_origin_gamma
from .montecarlo import WalkConfig, estimate_green, estimate_green_folded
from .network import (
    build_truncated,
    finite_box_half_green,
    half_box_green_direct,
    killed_green_matrix,
    killed_green_solve,
    series_reduce,
)
from .reflections import (
    green,
    green_half,
    green_orthant,
    green_origin_diag,
    green_subspace,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _result(name, passed, detail) -> CheckResult:
    return CheckResult(name, bool(passed), detail)


def suite_identities(d_max: int = 5) -> list[CheckResult]:
    out = []
    pts = [((0, 0, 0), (0, 0, 0)), ((1, 2, 0), (0, 1, 1)), ((2, 0, 1), (2, 0, 1))]
    worst = 0.0
    for x, y in pts:
        a = green_subspace(3, 0, x, y)
        b = green(DomainSpec.full(3), x, y)
        worst = max(worst, abs(a.value - b.value))
    out.append(_result("identities:G0-equals-g", worst == 0.0, f"max deviation {worst:g}"))

    worst = 0.0
    for x, y in [((0, 0, 0), (0, 0, 0)), ((1, 2, -1), (0, 0, 3)), ((2, 1, 0), (2, 1, 0))]:
        a = green_subspace(3, 1, x, y)
        b = green_half(3, x, y)
        worst = max(worst, abs(a.value - b.value))
    out.append(_result("identities:G1-equals-half", worst == 0.0, f"max deviation {worst:g}"))

    a = green_orthant(3, (1, 0, 2), (0, 1, 1))
    b = green_subspace(3, 3, (1, 0, 2), (0, 1, 1))
    out.append(_result("identities:orthant-alias", a == b, f"values {a.value:g} / {b.value:g}"))

    worst = 0.0
    ok = True
    for d in range(3, d_max + 1):
        for m in range(d + 1):
            r = green_origin_diag(d, m)
            worst = max(worst, r.disagreement)
            ok = ok and r.disagreement <= r.combined_bound and r.combined_bound <= 2e-10
    out.append(
        _result(
            "identities:binomial-vs-integral",
            ok,
            f"d<={d_max}, worst path disagreement {worst:.2e}",
        )
    )

    worst = 0.0
    for d in (3, 4):
        for j in range(d + 1):
            a = green_origin_gamma(d, d, j)
            b = green_full_origin(d, tuple([1] * j + [0] * (d - j)))
            worst = max(worst, abs(a.value - b.value))
    out.append(
        _result("identities:gamma-cross-path", worst <= 2e-11, f"worst deviation {worst:.2e}")
    )
    return out


def suite_network(n_max: int = 3) -> list[CheckResult]:
    out = []
    full3 = DomainSpec.full(3)
    half3 = DomainSpec.half(3)

    plain = build_truncated(full3, 2, "plain")
    reduced = series_reduce(build_truncated(full3, 2, "q"))
    mp = killed_green_matrix(plain)
    mq = killed_green_matrix(reduced)
    same_verts = mp.vertices == mq.vertices
    worst = float(abs(mp.values - mq.values).max()) if same_verts else float("inf")
    out.append(
        _result("network:q-reduces-to-plain", same_verts and worst <= 1e-12, f"max diff {worst:.2e}")
    )

    worst = 0.0
    for n in range(1, n_max + 1):
        hp = killed_green_matrix(build_truncated(half3, n, "h_prime"))
        q = killed_green_matrix(build_truncated(half3, n, "q"))
        ints = [v for v in hp.vertices if all(c % 2 == 0 for c in v) and v[0] >= 0]
        for dx in ints:
            for dy in ints:
                mirror = (-dy[0] - 2,) + dy[1:]
                diff = abs(hp.get(dx, dy) - (q.get(dx, dy) + q.get(dx, mirror)))
                worst = max(worst, diff)
    out.append(
        _result("network:fold-pushforward", worst <= 1e-10, f"N<={n_max}, worst diff {worst:.2e}")
    )

    worst = 0.0
    for n in (1, 2):
        for x1 in range(0, n + 1):
            lhs = half_box_green_direct(3, n, (x1, 0, 0), (0, 0, 0))
            rhs = finite_box_half_green(3, n, (x1, 0, 0), (0, 0, 0))
            worst = max(worst, abs(lhs - rhs))
    out.append(_result("network:finite-box-identity", worst <= 1e-10, f"worst diff {worst:.2e}"))

    vals = [half_box_green_direct(3, n, (0, 0, 0), (0, 0, 0)) for n in (2, 3, 4)]
    limit = green_half(3, (0, 0, 0), (0, 0, 0)).value
    mono = vals[0] < vals[1] < vals[2] < limit
    out.append(
        _result(
            "network:box-monotone-to-half",
            mono,
            f"{vals[0]:.6f} < {vals[1]:.6f} < {vals[2]:.6f} < {limit:.6f}",
        )
    )
    return out


def suite_mc(walks: int = 100_000, horizon: int = 4000, seed: int = 20_260_809) -> list[CheckResult]:
    out = []
    cfg = WalkConfig(n_walks=walks, horizon=horizon, seed=seed, batch=10)
    cases = [
        (DomainSpec.full(3), (0, 0, 0)),
        (DomainSpec.half(3), (0, 0, 0)),
        (DomainSpec.orthant(3), (0, 0, 0)),
        (DomainSpec.strip(4, 2), (0, 0, 0, 0)),
    ]
    for dom, x in cases:
        closed = green(dom, x, x)
        est = estimate_green(dom, x, x, cfg)
        err = abs(est.mean - closed.value)
        band = est.tolerance + closed.error_bound
        out.append(
            _result(
                f"mc:{dom.label}",
                err <= band,
                f"mc {est.mean:.6f} vs {closed.value:.6f} (err {err:.1e}, band {band:.1e})",
            )
        )

    box = build_truncated(DomainSpec.half(3), 1, "plain")
    exact = killed_green_solve(box, (0, 0, 0))[(0, 0, 0)]
    est = estimate_green_folded(3, 1, (0, 0, 0), (0, 0, 0), "plain", WalkConfig(walks, 400, seed, 10))
    err = abs(est.mean - exact)
    out.append(
        _result(
            "mc:killed-box-vs-solver",
            err <= est.tolerance,
            f"mc {est.mean:.6f} vs solve {exact:.6f} (err {err:.1e}, 3se+bias {est.tolerance:.1e})",
        )
    )
    return out


def suite_scan_d(d_max: int = 10) -> list[CheckResult]:
    values = []
    for d in range(3, d_max + 1):
        r = green_origin_diag(d, d)
        values.append((d, 2 * d * r.integral.value, 2 * d * r.integral.error_bound))
    ok = True
    min_gap = float("inf")
    for (d1, v1, b1), (d2, v2, b2) in zip(values, values[1:]):
        gap = v1 - v2
        min_gap = min(min_gap, gap)
        ok = ok and gap > 10.0 * (b1 + b2)
    detail = "  ".join(f"d={d}:{v:.6f}" for d, v, _ in values)
    return [_result("scan-d:2dG_O-decreasing", ok, f"min gap {min_gap:.3e}; {detail}")]


def dump_network_graphs(directory) -> list[str]:
    """Write the truncations the network suite exercises as edge-list files."""
    import os

    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, domain, variant in [
        ("full_plain", DomainSpec.full(3), "plain"),
        ("full_q", DomainSpec.full(3), "q"),
        ("half_h_prime", DomainSpec.half(3), "h_prime"),
        ("half_q", DomainSpec.half(3), "q"),
    ]:
        path = os.path.join(directory, f"{name}_N2.graph")
        build_truncated(domain, 2, variant).dump(path)
        paths.append(path)
    return paths


SUITES = {
    "identities": suite_identities,
    "network": suite_network,
    "mc": suite_mc,
    "scan-d": suite_scan_d,
}


def run_suite(name: str, **kwargs) -> list[CheckResult]:
    if name not in SUITES:
        raise WalkGreenError(f"unknown check suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**kwargs)
