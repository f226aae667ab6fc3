r"""Finite weighted-graph machinery: killed-walk Green solver and foldings.

Vertices are tuples of integers in **doubled** coordinates: the lattice point
``x`` is stored as ``2 x``, so the half-integer vertices of the folding
constructions (``-1/2`` and friends) are odd integers.  Hashing and equality
stay exact; no floating-point vertex coordinates exist anywhere.

The killed Green's function of a network with absorbing boundary solves the
discrete Dirichlet system: for interior ``x``,

    sum_{z ~ x} c(z, x) (G(z, y) - G(x, y)) = -delta_{x = y},   G = 0 outside,

i.e. ``(Pi - A) G(., y) = e_y`` with ``Pi = diag(pi)`` counting *all* incident
conductances (killing edges included) and ``A`` the interior adjacency.  The
system is symmetric positive definite whenever every interior component can
reach the boundary.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .domains import STRIP, SUBSPACE, DomainSpec
from .errors import ConvergenceError, DomainError, SingularNetworkError
from .lattice import as_point

Vertex = tuple[int, ...]

#: Above this many unknowns the solver switches from a direct factorization
#: to diagonally preconditioned conjugate gradients.
DIRECT_SOLVE_LIMIT = 50_000

_RESIDUAL_TARGET = 1e-12


class WeightedGraph:
    """Finite conductance network with a set of absorbing boundary vertices."""

    def __init__(self):
        self._adj: dict[Vertex, dict[Vertex, float]] = {}
        self.boundary: set[Vertex] = set()

    # -- construction ------------------------------------------------------
    def add_vertex(self, v) -> Vertex:
        v = as_point(v)
        self._adj.setdefault(v, {})
        return v

    def add_edge(self, u, v, c: float) -> None:
        u = as_point(u)
        v = as_point(v)
        if u == v:
            raise DomainError(f"self-loop at {u} not allowed")
        if not (c > 0.0 and math.isfinite(c)):
            raise DomainError(f"conductance must be positive and finite, got {c!r}")
        self._adj.setdefault(u, {})
        self._adj.setdefault(v, {})
        # parallel edges merge additively
        self._adj[u][v] = self._adj[u].get(v, 0.0) + float(c)
        self._adj[v][u] = self._adj[v].get(u, 0.0) + float(c)

    def set_boundary(self, v) -> None:
        v = self.add_vertex(v)
        self.boundary.add(v)

    def copy(self) -> "WeightedGraph":
        g = WeightedGraph()
        g._adj = {u: dict(nbrs) for u, nbrs in self._adj.items()}
        g.boundary = set(self.boundary)
        return g

    # -- queries -------------------------------------------------------------
    def __contains__(self, v) -> bool:
        return as_point(v) in self._adj

    def vertices(self) -> list[Vertex]:
        return sorted(self._adj)

    def interior(self) -> list[Vertex]:
        return sorted(v for v in self._adj if v not in self.boundary)

    def neighbors(self, v) -> dict[Vertex, float]:
        return dict(self._adj[as_point(v)])

    def conductance(self, u, v) -> float:
        return self._adj.get(as_point(u), {}).get(as_point(v), 0.0)

    def pi(self, v) -> float:
        return sum(self._adj[as_point(v)].values())

    def edge_count(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2

    # -- serialization -------------------------------------------------------
    def dumps(self) -> str:
        """Line format: one edge per line ``u v c`` (doubled integer coords,
        comma-joined), then a ``boundary`` marker and one vertex per line."""
        out = io.StringIO()
        seen = set()
        for u in self.vertices():
            for v in sorted(self._adj[u]):
                if (v, u) in seen:
                    continue
                seen.add((u, v))
                out.write(f"{_fmt(u)} {_fmt(v)} {self._adj[u][v]!r}\n")
        out.write("boundary\n")
        for v in sorted(self.boundary):
            out.write(f"{_fmt(v)}\n")
        return out.getvalue()

    @classmethod
    def loads(cls, text: str) -> "WeightedGraph":
        g = cls()
        in_boundary = False
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line == "boundary":
                in_boundary = True
                continue
            if in_boundary:
                g.set_boundary(_parse(line))
            else:
                parts = line.split()
                if len(parts) != 3:
                    raise DomainError(f"malformed edge line {raw!r}")
                g.add_edge(_parse(parts[0]), _parse(parts[1]), float(parts[2]))
        return g

    def dump(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "WeightedGraph":
        with open(path, encoding="ascii") as fh:
            return cls.loads(fh.read())


def _fmt(v: Vertex) -> str:
    return ",".join(str(c) for c in v)


def _parse(text: str) -> Vertex:
    return tuple(int(c) for c in text.split(","))


# -- killed Green solver -----------------------------------------------------


def _interior_system(graph: WeightedGraph):
    interior = graph.interior()
    if not interior:
        raise DomainError("graph has no interior vertices")
    index = {v: i for i, v in enumerate(interior)}
    n = len(interior)
    rows, cols, vals = [], [], []
    reached = [False] * n
    for v, i in index.items():
        nbrs = graph.neighbors(v)
        if not nbrs:
            raise SingularNetworkError(f"interior vertex {v} has pi(x) = 0")
        rows.append(i)
        cols.append(i)
        vals.append(sum(nbrs.values()))
        for w, c in nbrs.items():
            j = index.get(w)
            if j is None:
                reached[i] = True  # edge into the absorbing boundary
            else:
                rows.append(i)
                cols.append(j)
                vals.append(-c)
    lap = sp.csc_matrix((vals, (rows, cols)), shape=(n, n))
    _check_killing(graph, interior, index, reached)
    return interior, index, lap


def _check_killing(graph, interior, index, reached):
    # every interior component must have at least one killing edge, else the
    # Dirichlet system is singular
    seen = [False] * len(interior)
    for start in range(len(interior)):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        killed = False
        head = 0
        while head < len(comp):
            i = comp[head]
            head += 1
            killed = killed or reached[i]
            for w in graph.neighbors(interior[i]):
                j = index.get(w)
                if j is not None and not seen[j]:
                    seen[j] = True
                    comp.append(j)
        if not killed:
            raise SingularNetworkError(
                "an interior component has no absorbing boundary; "
                "the killed Green's function does not exist"
            )


def _solve(lap, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    n = lap.shape[0]
    if n <= DIRECT_SOLVE_LIMIT:
        lu = spla.splu(lap)
        sol = lu.solve(rhs)
        for _ in range(3):
            resid = rhs - lap @ sol
            if np.linalg.norm(resid) <= _RESIDUAL_TARGET * max(np.linalg.norm(rhs), 1e-300):
                break
            sol = sol + lu.solve(resid)
    else:
        d_inv = 1.0 / lap.diagonal()
        precond = spla.LinearOperator(lap.shape, matvec=lambda x: d_inv * x)
        cols = rhs.reshape(n, -1).T
        outs = []
        for col in cols:
            x, info = spla.cg(lap, col, rtol=1e-13, atol=0.0, M=precond, maxiter=20 * n)
            if info != 0:
                raise ConvergenceError(f"conjugate gradient did not converge (info={info})")
            outs.append(x)
        sol = np.array(outs).T.reshape(rhs.shape)
    residual = float(
        np.linalg.norm(rhs - lap @ sol) / max(np.linalg.norm(rhs), 1e-300)
    )
    if residual > 1e-9:
        raise ConvergenceError(f"killed-Green solve stalled at residual {residual:g}")
    return sol, residual


def killed_green_solve(graph: WeightedGraph, y) -> dict[Vertex, float]:
    """Green's function column ``G(., y)`` of the walk killed on the boundary."""
    y = as_point(y)
    if y in graph.boundary:
        raise DomainError(f"source {y} lies on the absorbing boundary")
    if y not in graph:
        raise DomainError(f"source {y} is not a vertex of the graph")
    interior, index, lap = _interior_system(graph)
    rhs = np.zeros(len(interior))
    rhs[index[y]] = 1.0
    sol, _ = _solve(lap, rhs)
    return {v: float(sol[i]) for v, i in index.items()}


@dataclass(frozen=True)
class KilledGreenMatrix:
    """All killed Green values of a network, with the solver residual norm."""

    vertices: tuple[Vertex, ...]
    values: np.ndarray
    residual: float

    def get(self, x, y) -> float:
        i = self.vertices.index(as_point(x))
        j = self.vertices.index(as_point(y))
        return float(self.values[i, j])


def killed_green_matrix(graph: WeightedGraph) -> KilledGreenMatrix:
    """Solve for every source column at once (direct factorization)."""
    interior, _, lap = _interior_system(graph)
    rhs = np.eye(len(interior))
    sol, residual = _solve(lap, rhs)
    return KilledGreenMatrix(tuple(interior), sol, residual)


# -- Ohm's-law series reduction -----------------------------------------------


def series_reduce(graph: WeightedGraph, keep=()) -> WeightedGraph:
    """Eliminate degree-2 interior vertices by Ohm's law.

    Two conductances ``c1, c2`` in series become ``c1 c2 / (c1 + c2)``;
    killed Green values on the surviving vertices are unchanged.  Vertices in
    ``keep`` (query vertices) and boundary vertices always survive.
    """
    g = graph.copy()
    protected = {as_point(v) for v in keep} | g.boundary
    candidates = sorted(v for v in g._adj if v not in protected and len(g._adj[v]) == 2)
    queue = list(reversed(candidates))
    queued = set(candidates)
    while queue:
        v = queue.pop()
        queued.discard(v)
        if v not in g._adj or v in protected or len(g._adj[v]) != 2:
            continue
        (a, c1), (b, c2) = sorted(g._adj[v].items())
        del g._adj[a][v]
        del g._adj[b][v]
        del g._adj[v]
        g.add_edge(a, b, c1 * c2 / (c1 + c2))
        for w in (a, b):
            if w not in protected and len(g._adj[w]) == 2 and w not in queued:
                queue.append(w)
                queued.add(w)
    return g


# -- folding constructions ----------------------------------------------------


def reflect_fold(point, domain: DomainSpec) -> Vertex:
    """Fold an ambient vertex (doubled coordinates) onto the domain.

    Subspaces reflect each constrained coordinate about ``-1/2`` (doubled:
    ``-1``); the strip applies the periodic mountain-and-valley fold about
    the lines ``x1 = k L - 1/2``.
    """
    pt = as_point(point)
    if len(pt) != domain.d:
        raise DomainError(f"point {pt} has dimension {len(pt)}, expected {domain.d}")
    if domain.kind == SUBSPACE:
        folded = list(pt)
        for j in range(domain.m):
            if folded[j] <= -1:
                folded[j] = -folded[j] - 2
        return tuple(folded)
    period = 4 * domain.L  # doubled coordinates
    s = (pt[0] + 1) % period
    first = s - 1 if s <= 2 * domain.L else period - s - 1
    return (first,) + pt[1:]


def _box_graph(d: int, lo: tuple[int, ...], hi: tuple[int, ...], member=None) -> WeightedGraph:
    """Nearest-neighbor graph on a coordinate box, absorbed on first exit.

    ``member`` restricts the ambient graph (e.g. to the half-lattice); box
    vertices are interior, their ambient neighbors outside the box form the
    absorbing shell.  Doubled coordinates throughout.
    """
    g = WeightedGraph()

    def inside(x):
        return all(lo[i] <= x[i] <= hi[i] for i in range(d))

    def ambient(x):
        return member is None or member(x)

    ranges = [range(lo[i], hi[i] + 1) for i in range(d)]

    def rec(prefix):
        i = len(prefix)
        if i == d:
            x = tuple(prefix)
            if ambient(x):
                g.add_vertex(tuple(2 * c for c in x))
            return
        for c in ranges[i]:
            rec(prefix + [c])

    rec([])
    for dv in list(g.vertices()):
        x = tuple(c // 2 for c in dv)
        for axis in range(d):
            for step in (-1, 1):
                ynb = list(x)
                ynb[axis] += step
                ynb = tuple(ynb)
                if not ambient(ynb):
                    continue
                dn = tuple(2 * c for c in ynb)
                if inside(ynb):
                    if dn > dv:
                        g.add_edge(dv, dn, 1.0)
                else:
                    g.set_boundary(dn)
                    g.add_edge(dv, dn, 1.0)
    return g


def _split_crossing_bonds(g: WeightedGraph, axes) -> None:
    """Series-split every bond crossing ``{x_j in (-1, 0)}`` for j in axes."""
    for u in list(g.vertices()):
        for axis in axes:
            if u[axis] != 0:
                continue
            v = list(u)
            v[axis] = -2  # doubled: the lattice neighbor at -1
            v = tuple(v)
            c = g.conductance(u, v)
            if c == 0.0:
                continue
            w = list(u)
            w[axis] = -1  # doubled: the half vertex at -1/2
            w = tuple(w)
            del g._adj[u][v]
            del g._adj[v][u]
            g.add_edge(u, w, 2.0 * c)
            g.add_edge(w, v, 2.0 * c)


def _add_teeth(g: WeightedGraph, face_axis: int, face_value: int, tooth_offset: int) -> None:
    """Pendant conductance-2 teeth on every interior face vertex."""
    for v in list(g.vertices()):
        if v in g.boundary or v[face_axis] != face_value:
            continue
        tooth = list(v)
        tooth[face_axis] = tooth_offset
        g.add_edge(v, tuple(tooth), 2.0)


def build_truncated(domain: DomainSpec, N: int, variant: str = "plain") -> WeightedGraph:
    """Finite truncation of the paper's graph constructions, killed on exit.

    Variants (doubled coordinates; length-1/2 edges carry conductance 2):

    * ``plain``   -- the domain graph restricted to its natural box,
      ``[0,N]^m x [-N,N]^(d-m)`` for subspaces, ``[0,L-1] x [-N,N]^(d-1)``
      for the strip, absorbed on the first step outside;
    * ``H_prime`` -- ``plain`` plus pendant combteeth behind every
      constrained face (both faces for the strip);
    * ``Q``       -- the ambient lattice box with each bond crossing a fold
      hyperplane split into two series conductances of value 2.  For
      subspaces with m >= 1 the ambient box is ``[-N-1,N]^m x [-N,N]^(d-m)``
      (the exact fold preimage of the plain box); for the full lattice the
      box stays ``[-N,N]^d`` and the first coordinate is split, which
      series-reduces back to ``plain`` exactly;
    * ``folded``  -- the quotient of ``Q`` under :func:`reflect_fold`, with
      conductances summed over edge preimages.  Green values on it equal the
      ``H_prime`` ones divided by ``2^m``.

    The strip admits no ``Q``/``folded`` truncation (its fold orbit is
    infinite, so no finite ambient box folds onto a finite strip exactly).
    """
    if N < 1:
        raise DomainError(f"truncation size must be >= 1, got N={N}")
    tag = variant.lower()
    if tag not in ("plain", "h_prime", "q", "folded"):
        raise DomainError(f"unknown truncation variant {variant!r}")
    d = domain.d

    if domain.kind == STRIP:
        if tag in ("q", "folded"):
            raise DomainError(
                "the strip fold orbit is infinite; no finite ambient truncation exists"
            )
        lo = (0,) + (-N,) * (d - 1)
        hi = (domain.L - 1,) + (N,) * (d - 1)
        spec = DomainSpec.strip(d, domain.L)
        g = _box_graph(d, lo, hi, member=spec.contains)
        if tag == "h_prime":
            _add_teeth(g, 0, 0, -1)
            _add_teeth(g, 0, 2 * (domain.L - 1), 2 * domain.L - 1)
        return g

    m = domain.m
    if tag in ("plain", "h_prime"):
        lo = (0,) * m + (-N,) * (d - m)
        hi = (N,) * d
        g = _box_graph(d, lo, hi, member=domain.contains)
        if tag == "h_prime":
            if m == 0:
                raise DomainError("H_prime needs at least one constrained face (m >= 1)")
            for j in range(m):
                _add_teeth(g, j, 0, -1)
        return g

    # ambient constructions
    if m == 0:
        lo = (-N,) * d
        hi = (N,) * d
        axes = (0,)
    else:
        lo = (-N - 1,) * m + (-N,) * (d - m)
        hi = (N,) * d
        axes = tuple(range(m))
    g = _box_graph(d, lo, hi)
    _split_crossing_bonds(g, axes)
    if tag == "q":
        return g

    if m == 0:
        raise DomainError("folding the full lattice is the identity; nothing to build")
    folded = WeightedGraph()
    for u in g.vertices():
        fu = reflect_fold(u, domain)
        if u in g.boundary:
            folded.set_boundary(fu)
        else:
            folded.add_vertex(fu)
        for v, c in g.neighbors(u).items():
            fv = reflect_fold(v, domain)
            if (fu, fv) <= (fv, fu):  # count each undirected edge orbit once per side
                folded.add_edge(fu, fv, c)
    return folded


def finite_box_half_green(d: int, N: int, x, y) -> float:
    """Right-hand side of the finite-box identity.

    ``g_K(x, y) + g_K(x, ybar - e_1)`` where ``g_K`` is the full-lattice walk
    killed outside ``K_N = [-N-1, N] x [-N, N]^(d-1)``; equals the Green's
    function of the half-lattice walk killed outside ``C_N = [0, N] x
    [-N, N]^(d-1)`` (see :func:`half_box_green_direct`).
    """
    x, y = _require_in_cn(d, N, x, y)
    box = _box_graph(d, (-N - 1,) + (-N,) * (d - 1), (N,) * d)
    col = killed_green_solve(box, tuple(2 * c for c in y))
    mirror = killed_green_solve(box, (2 * (-y[0] - 1),) + tuple(2 * c for c in y[1:]))
    dx = tuple(2 * c for c in x)
    return col[dx] + mirror[dx]


def half_box_green_direct(d: int, N: int, x, y) -> float:
    """Direct Dirichlet solve: half-lattice walk killed on leaving ``C_N``."""
    x, y = _require_in_cn(d, N, x, y)
    half = DomainSpec.half(d)
    box = _box_graph(d, (0,) + (-N,) * (d - 1), (N,) * d, member=half.contains)
    col = killed_green_solve(box, tuple(2 * c for c in y))
    return col[tuple(2 * c for c in x)]


def _require_in_cn(d: int, N: int, x, y):
    if N < 1:
        raise DomainError(f"box size must be >= 1, got N={N}")
    px = as_point(x)
    py = as_point(y)
    for pt in (px, py):
        if len(pt) != d:
            raise DomainError(f"point {pt} has dimension {len(pt)}, expected {d}")
        if not (0 <= pt[0] <= N and all(-N <= c <= N for c in pt[1:])):
            raise DomainError(f"point {pt} lies outside C_{N}")
    return px, py
