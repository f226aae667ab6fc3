r"""Monte Carlo estimation of Green's functions by direct walk simulation.

The estimator is the visit-count form of the Green's function: start the
conductance walk at ``x``, count visits to ``y`` over steps ``m = 0 ..
horizon`` (the start counts), average over walks, divide by ``pi(y)``.

Reproducibility: walks are grouped into batches and each batch draws from its
own Philox counter-based stream keyed by ``(seed, batch index)``, so streams
cannot overlap, batches could run concurrently, and identical seed + config
give bit-identical estimates.  The standard error comes from the spread of
the batch means; reductions use numpy's pairwise summation, so they do not
depend on evaluation order.

The fixed horizon leaves a truncation bias.  It is reported, not hidden: the
visit count in the last quarter of the horizon is extrapolated with the
return-probability decay ``p_m ~ m^{-nu}``, ``nu = d_free / 2``, where
``d_free`` counts the unbounded directions (``d`` everywhere except the
strip, whose compact direction drops out at large times).  A 1.5 safety
factor is included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

from .domains import STRIP, SUBSPACE, DomainSpec
from .errors import ConfigError, DomainError
from .lattice import Point, check_dimension
from .network import WeightedGraph, build_truncated

_BIAS_SAFETY = 1.5


@dataclass(frozen=True)
class WalkConfig:
    """Simulation size: walk count, horizon, RNG seed, batch count."""

    n_walks: int
    horizon: int
    seed: int = 0
    batch: int = 20

    def __post_init__(self):
        if self.n_walks < 1:
            raise ConfigError(f"need at least one walk, got n_walks={self.n_walks}")
        if self.horizon < 1:
            raise ConfigError(f"need horizon >= 1, got {self.horizon}")
        if self.batch < 10:
            raise ConfigError(f"need >= 10 batches for stderr reporting, got {self.batch}")
        if self.n_walks < self.batch:
            raise ConfigError(
                f"n_walks={self.n_walks} cannot fill {self.batch} batches"
            )
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")

    def batch_sizes(self) -> list[int]:
        base, extra = divmod(self.n_walks, self.batch)
        return [base + (1 if i < extra else 0) for i in range(self.batch)]


@dataclass(frozen=True)
class McEstimate:
    """Visit-count estimate with standard error and horizon-bias bound."""

    mean: float
    stderr: float
    horizon_bias_bound: float
    n_walks: int
    horizon: int

    def __post_init__(self):
        if self.mean < 0 or self.stderr < 0 or self.horizon_bias_bound < 0:
            raise DomainError("Monte Carlo estimates are nonnegative")

    @property
    def tolerance(self) -> float:
        """The acceptance band ``3 stderr + horizon_bias_bound``."""
        return 3.0 * self.stderr + self.horizon_bias_bound


def _rng_for(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


def step(domain: DomainSpec, x, rng: np.random.Generator, reflected: bool = False) -> Point:
    """One transition of the conductance walk from ``x``.

    With unit conductances this is uniform over the in-domain neighbors.
    ``reflected=True`` (half-lattice only) steps the ``(|S^(1)|, S^(2), ...)``
    walk instead, whose face-to-face conductances are 1/2: a proposed move to
    ``x1 = -1`` reflects to ``x1 = +1``.
    """
    pt = domain.require_member(x)
    if reflected:
        if not (domain.kind == SUBSPACE and domain.m == 1):
            raise DomainError("the reflected variant is defined on the half-lattice only")
        direction = int(rng.integers(0, 2 * domain.d))
        axis, sign = direction >> 1, (direction & 1) * 2 - 1
        nxt = list(pt)
        nxt[axis] += sign
        if axis == 0:
            nxt[0] = abs(nxt[0])
        return tuple(nxt)
    nbrs = domain.neighbors(pt)
    return nbrs[int(rng.integers(0, len(nbrs)))]


def _bias_factor(domain: DomainSpec) -> float:
    d_free = domain.d - (1 if domain.kind == STRIP else 0)
    ratio = (4.0 / 3.0) ** (0.5 * (d_free - 2)) - 1.0
    return _BIAS_SAFETY / ratio


#: Walks are simulated in blocks of this many trajectories; each block draws
#: its uniforms as one ``(block, horizon)`` array so the walk-major kernel
#: can keep a trajectory's state in cache.
_WALK_BLOCK = 1024


def _walk_block_numpy(coords, us, target, m, strip_hi, reflected, late_from):
    """Reference implementation of the block kernel (same draws, same law).

    One uniform per step: ``j = floor(u * deg)`` indexes the valid directions
    in the canonical order (axis 0 down, axis 0 up, axis 1 down, ...), which
    is exactly the conductance walk at unit conductances.
    """
    size, d = coords.shape
    rows = np.arange(size)
    total = 0
    late = 0
    for t in range(us.shape[1]):
        u = us[:, t]
        if reflected or m == 0:
            j = (u * (2 * d)).astype(np.int64)
            np.minimum(j, 2 * d - 1, out=j)
            ax = j >> 1
            sg = ((j & 1) << 1) - 1
            coords[rows, ax] += sg
            if reflected:
                np.abs(coords[:, 0], out=coords[:, 0])
        else:
            valid = np.ones((size, 2 * d), dtype=bool)
            for a in range(m):
                valid[:, 2 * a] = coords[:, a] > 0
            if strip_hi >= 0:
                valid[:, 1] = coords[:, 0] < strip_hi
            deg = valid.sum(axis=1)
            j = (u * deg).astype(np.int64)
            np.minimum(j, deg - 1, out=j)
            pick = (np.cumsum(valid, axis=1) > j[:, None]).argmax(axis=1)
            ax = pick >> 1
            sg = ((pick & 1) << 1) - 1
            coords[rows, ax] += sg
        hits = int(np.count_nonzero(np.all(coords == target, axis=1)))
        total += hits
        if t + 1 > late_from:
            late += hits
    return total, late


if numba is not None:

    @numba.njit(cache=True)
    def _walk_block_kernel(coords, us, target, m, strip_hi, reflected, late_from):  # pragma: no cover
        size, d = coords.shape
        horizon = us.shape[1]
        two_d = 2 * d
        total = 0
        late = 0
        for w in range(size):
            for t in range(horizon):
                if reflected or m == 0:
                    j = int(us[w, t] * two_d)
                    if j >= two_d:
                        j = two_d - 1
                    a = j >> 1
                    coords[w, a] += ((j & 1) << 1) - 1
                    if reflected and a == 0 and coords[w, 0] < 0:
                        coords[w, 0] = -coords[w, 0]
                else:
                    deg = two_d
                    blocked = -1
                    for a in range(m):
                        if coords[w, a] == 0:
                            deg -= 1
                            blocked = 2 * a
                    if strip_hi >= 0 and coords[w, 0] == strip_hi:
                        deg -= 1
                        blocked = 1
                    j = int(us[w, t] * deg)
                    if j >= deg:
                        j = deg - 1
                    if deg == two_d:
                        # interior: the j-th valid direction is just j
                        a = j >> 1
                        coords[w, a] += ((j & 1) << 1) - 1
                    elif deg == two_d - 1:
                        # one blocked direction: skip over it
                        if j >= blocked:
                            j += 1
                        a = j >> 1
                        coords[w, a] += ((j & 1) << 1) - 1
                    else:
                        k = -1
                        for pick in range(two_d):
                            a = pick >> 1
                            s = ((pick & 1) << 1) - 1
                            if s < 0:
                                if a < m and coords[w, a] == 0:
                                    continue
                            elif strip_hi >= 0 and a == 0 and coords[w, 0] == strip_hi:
                                continue
                            k += 1
                            if k == j:
                                coords[w, a] += s
                                break
                ok = True
                for a in range(d):
                    if coords[w, a] != target[a]:
                        ok = False
                        break
                if ok:
                    total += 1
                    if t + 1 > late_from:
                        late += 1
        return total, late

    _walk_block = _walk_block_kernel
else:
    _walk_block = _walk_block_numpy


def _simulate_batch(domain, px, py, size, horizon, rng, reflected):
    """Total and late-window visit counts of ``size`` independent walks."""
    m = domain.m if domain.kind == SUBSPACE else 1
    strip_hi = domain.L - 1 if domain.kind == STRIP else -1
    target = np.asarray(py, dtype=np.int32)
    start_hits = 1 if tuple(px) == tuple(py) else 0

    total = size * start_hits  # the m = 0 term of the visit sum
    late = 0
    late_from = horizon - horizon // 4
    done = 0
    while done < size:
        block = min(_WALK_BLOCK, size - done)
        coords = np.tile(np.asarray(px, dtype=np.int32), (block, 1))
        us = rng.random((block, horizon), dtype=np.float32)
        t, l = _walk_block(coords, us, target, m, strip_hi, reflected, late_from)
        total += int(t)
        late += int(l)
        done += block
    return total, late


def estimate_green(
    domain: DomainSpec, x, y, cfg: WalkConfig, reflected: bool = False
) -> McEstimate:
    """Monte Carlo estimate of the Green's function of ``domain`` at ``(x, y)``."""
    px = domain.require_member(x)
    py = domain.require_member(y)
    if reflected and not (domain.kind == SUBSPACE and domain.m == 1):
        raise DomainError("the reflected variant is defined on the half-lattice only")
    if reflected:
        # conductance 1/2 within the face halves the face degree sum
        pi_y = float(domain.d if py[0] == 0 else 2 * domain.d)
    else:
        pi_y = float(domain.degree(py))

    sizes = cfg.batch_sizes()
    means = np.empty(len(sizes))
    late_total = 0
    for b, size in enumerate(sizes):
        rng = _rng_for(cfg.seed, b)
        total, late = _simulate_batch(domain, px, py, size, cfg.horizon, rng, reflected)
        means[b] = total / (size * pi_y)
        late_total += late
    mean = float(np.average(means, weights=sizes))
    stderr = float(np.std(means, ddof=1) / math.sqrt(len(sizes)))
    late_mean = late_total / (cfg.n_walks * pi_y)
    bias = late_mean * _bias_factor(domain)
    return McEstimate(mean, stderr, bias, cfg.n_walks, cfg.horizon)


# -- walks on finite truncated networks ----------------------------------------


def _transition_tables(graph: WeightedGraph):
    verts = graph.vertices()
    index = {v: i for i, v in enumerate(verts)}
    deg_max = max(1, max(len(graph.neighbors(v)) for v in verts))
    nbr = np.zeros((len(verts), deg_max), dtype=np.int64)
    cum = np.ones((len(verts), deg_max))
    for v, i in index.items():
        if v in graph.boundary:
            nbr[i, :] = i  # absorbed walks stay put
            continue
        items = sorted(graph.neighbors(v).items())
        probs = np.array([c for _, c in items])
        probs = np.cumsum(probs) / probs.sum()
        for j, (w, _) in enumerate(items):
            nbr[i, j] = index[w]
        nbr[i, len(items):] = nbr[i, len(items) - 1]
        cum[i, : len(items)] = probs
    return verts, index, nbr, cum


def estimate_green_folded(
    d: int, N: int, x, y, variant: str = "h_prime", cfg: WalkConfig = WalkConfig(100_000, 10_000)
) -> McEstimate:
    """Visit-count estimate on a truncated half-lattice folding construction.

    ``variant`` selects the graph from :func:`walkgreen.network.build_truncated`
    over the half-lattice domain (``plain``, ``h_prime`` or ``q``); ``x`` and
    ``y`` are lattice points of that graph (for ``q`` the mirror points with
    ``y1 < 0`` are valid targets).  The walk is killed on the truncation
    boundary, so once every walk is absorbed the horizon bias is exactly zero.
    """
    domain = DomainSpec.half(d)
    graph = build_truncated(domain, N, variant)
    px = check_dimension(x, d)
    py = check_dimension(y, d)
    start = tuple(2 * c for c in px)
    target = tuple(2 * c for c in py)
    for pt in (start, target):
        if pt not in graph or pt in graph.boundary:
            raise DomainError(f"point {tuple(c // 2 for c in pt)} is not interior to the truncation")
    verts, index, nbr, cum = _transition_tables(graph)
    start_i = index[start]
    target_i = index[target]
    boundary_idx = np.array(sorted(index[v] for v in graph.boundary), dtype=np.int64)
    pi_y = graph.pi(target)

    sizes = cfg.batch_sizes()
    means = np.empty(len(sizes))
    late_total = 0
    unabsorbed = 0
    late_from = cfg.horizon - cfg.horizon // 4
    for b, size in enumerate(sizes):
        rng = _rng_for(cfg.seed, b)
        state = np.full(size, start_i, dtype=np.int64)
        total = int(np.count_nonzero(state == target_i))
        late = 0
        for step_idx in range(1, cfg.horizon + 1):
            u = rng.random(size)
            choice = (u[:, None] > cum[state]).sum(axis=1)
            state = nbr[state, choice]
            hits = int(np.count_nonzero(state == target_i))
            total += hits
            if step_idx > late_from:
                late += hits
        means[b] = total / (size * pi_y)
        late_total += late
        unabsorbed += int(np.count_nonzero(~np.isin(state, boundary_idx)))
    mean = float(np.average(means, weights=sizes))
    stderr = float(np.std(means, ddof=1) / math.sqrt(len(sizes)))
    if unabsorbed == 0:
        bias = 0.0  # every walk was killed; the visit count is complete
    else:
        bias = late_total / (cfg.n_walks * pi_y) * _bias_factor(domain)
    return McEstimate(mean, stderr, bias, cfg.n_walks, cfg.horizon)
