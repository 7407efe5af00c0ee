"""Perfectly oriented plabic graphs and their boundary measurement matrices.

A graph is read from a small text format::

    # header: number of boundary vertices, number of sources
    4 2
    vertex b1 boundary 1            # boundary vertex with label 1
    vertex w1 white 0.20 0.35       # optional planar coordinates
    edge b1 w1                      # weight 1
    edge w1 k3 symbol:t             # formal weight
    edge w1 k4 3/2                  # rational weight

Orientation conventions: an internal black vertex has exactly one outgoing
edge, an internal white vertex exactly one incoming edge.  Only acyclic
orientations are supported, so every source-to-boundary path is simple.

The sign of a path is ``(-1)**wind`` where ``wind`` counts the full turns of
the path drawn as a polyline through the vertex coordinates (boundary
vertices default to evenly spaced points on the unit circle, clockwise from
the top).  Without internal coordinates every path has winding 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument, Unsatisfiable, UnsupportedGraph
from .field import GF2, FqMatrix, GF2m

COLORS = ("black", "white")
DATA_DIR = Path(__file__).parent / "data"


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str  # "black" | "white" | "boundary"
    label: int | None = None
    pos: tuple | None = None


@dataclass(frozen=True)
class Edge:
    tail: str
    head: str
    weight: object = None  # None (=1), Fraction, or a symbol name


@dataclass
class PlabicGraph:
    n: int
    k: int
    vertices: dict
    edges: list

    def __post_init__(self):
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for idx, e in enumerate(self.edges):
            for end in (e.tail, e.head):
                if end not in self.vertices:
                    raise InvalidArgument(f"edge refers to unknown vertex {end!r}")
            self._out[e.tail].append(idx)
            self._in[e.head].append(idx)
        self.validate()

    # -- structure -----------------------------------------------------------

    @property
    def boundary(self) -> dict:
        """label -> vertex id"""
        return {v.label: v.id for v in self.vertices.values() if v.kind == "boundary"}

    @property
    def sources(self) -> list:
        """Boundary labels with outgoing edges, ascending."""
        return sorted(
            v.label for v in self.vertices.values() if v.kind == "boundary" and self._out[v.id]
        )

    @property
    def internal_vertices(self) -> list:
        return [v for v in self.vertices.values() if v.kind != "boundary"]

    def validate(self) -> None:
        labels = sorted(v.label for v in self.vertices.values() if v.kind == "boundary")
        if labels != list(range(1, self.n + 1)):
            raise InvalidArgument("boundary labels must be exactly 1..n", n=self.n, labels=labels)
        for v in self.vertices.values():
            if v.kind not in COLORS + ("boundary",):
                raise InvalidArgument(f"unknown vertex kind {v.kind!r}", vertex=v.id)
            n_in, n_out = len(self._in[v.id]), len(self._out[v.id])
            if v.kind == "black" and n_out != 1:
                raise InvalidArgument("black vertex must have exactly one outgoing edge",
                                      vertex=v.id, out_degree=n_out)
            if v.kind == "white" and n_in != 1:
                raise InvalidArgument("white vertex must have exactly one incoming edge",
                                      vertex=v.id, in_degree=n_in)
            if v.kind == "boundary" and n_in and n_out:
                raise InvalidArgument("boundary vertex is both source and sink", vertex=v.id)
        for e in self.edges:
            a, b = self.vertices[e.tail].kind, self.vertices[e.head].kind
            if a in COLORS and b in COLORS and a == b:
                raise InvalidArgument("internal edge joins two vertices of the same color",
                                      tail=e.tail, head=e.head)
        if len(self.sources) != self.k:
            raise InvalidArgument("number of sources does not match header",
                                  k=self.k, sources=self.sources)
        self._topological_order()

    def _topological_order(self) -> list:
        indeg = {v: len(ins) for v, ins in self._in.items()}
        ready = sorted(v for v, d in indeg.items() if d == 0)
        order = []
        while ready:
            v = ready.pop()
            order.append(v)
            for idx in self._out[v]:
                h = self.edges[idx].head
                indeg[h] -= 1
                if indeg[h] == 0:
                    ready.append(h)
        if len(order) != len(self.vertices):
            raise UnsupportedGraph("orientation has a directed cycle; only acyclic graphs are supported")
        return order

    def position(self, vid: str):
        v = self.vertices[vid]
        if v.pos is not None:
            return v.pos
        if v.kind == "boundary":
            ang = math.pi / 2 - 2 * math.pi * (v.label - 1) / self.n
            return (math.cos(ang), math.sin(ang))
        return None

    def paths_from(self, label: int) -> list:
        """All directed paths (as edge-index lists) from a source to boundary sinks."""
        start = self.boundary[label]
        out = []

        def walk(vid, trail):
            for idx in self._out[vid]:
                h = self.edges[idx].head
                if self.vertices[h].kind == "boundary":
                    out.append(trail + [idx])
                else:
                    walk(h, trail + [idx])

        walk(start, [])
        return out

    def path_vertices(self, path: Sequence[int]) -> list:
        return [self.edges[path[0]].tail] + [self.edges[i].head for i in path]

    def path_winding(self, path: Sequence[int]) -> int:
        pts = [self.position(v) for v in self.path_vertices(path)]
        if any(p is None for p in pts):
            return 0
        return winding(pts)

    # -- text format ---------------------------------------------------------

    @classmethod
    def from_text(cls, text: str) -> "PlabicGraph":
        lines = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.append(line.split())
        if not lines or len(lines[0]) != 2:
            raise InvalidArgument("graph text must start with a header 'n k'")
        try:
            n, k = int(lines[0][0]), int(lines[0][1])
        except ValueError:
            raise InvalidArgument("graph header must be two integers") from None
        vertices, edges = {}, []
        for toks in lines[1:]:
            try:
                if toks[0] == "vertex":
                    vid, kind, rest = toks[1], toks[2], toks[3:]
                    label = None
                    if kind == "boundary":
                        label, rest = int(rest[0]), rest[1:]
                    pos = (float(rest[0]), float(rest[1])) if len(rest) >= 2 else None
                    if vid in vertices:
                        raise InvalidArgument(f"duplicate vertex {vid!r}")
                    vertices[vid] = Vertex(vid, kind, label, pos)
                elif toks[0] == "edge":
                    edges.append(Edge(toks[1], toks[2], _parse_weight(toks[3]) if len(toks) > 3 else None))
                else:
                    raise InvalidArgument(f"unknown directive {toks[0]!r}")
            except (IndexError, ValueError) as exc:
                raise InvalidArgument(f"malformed graph line {' '.join(toks)!r}: {exc}") from None
        return cls(n, k, vertices, edges)

    @classmethod
    def load(cls, path) -> "PlabicGraph":
        return cls.from_text(Path(path).read_text())

    def to_text(self) -> str:
        out = [f"{self.n} {self.k}"]
        for v in self.vertices.values():
            parts = ["vertex", v.id, v.kind]
            if v.label is not None:
                parts.append(str(v.label))
            if v.pos is not None:
                parts += [f"{v.pos[0]:.6g}", f"{v.pos[1]:.6g}"]
            out.append(" ".join(parts))
        for e in self.edges:
            parts = ["edge", e.tail, e.head]
            if isinstance(e.weight, str):
                parts.append(f"symbol:{e.weight}")
            elif e.weight is not None:
                parts.append(str(Fraction(e.weight)))
            out.append(" ".join(parts))
        return "\n".join(out) + "\n"


def _parse_weight(tok: str):
    if tok.startswith("symbol:"):
        name = tok[len("symbol:"):]
        if not name:
            raise ValueError("empty symbol name")
        return name
    w = Fraction(tok)
    if w <= 0:
        raise ValueError("edge weights must be positive")
    return w


def load_golden(name: str) -> PlabicGraph:
    """Shipped example graphs: ``"gr24"`` (Gr(2,4)) and ``"gr26"`` (Gr(2,6))."""
    return PlabicGraph.load(DATA_DIR / f"{name}.plabic")


def winding(points: Sequence) -> int:
    """Full clockwise turns of a polyline, rounded to the nearest integer."""
    turn = 0.0
    for a, b, c in zip(points, points[1:], points[2:]):
        d1 = (b[0] - a[0], b[1] - a[1])
        d2 = (c[0] - b[0], c[1] - b[1])
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        dot = d1[0] * d2[0] + d1[1] * d2[1]
        turn -= math.atan2(cross, dot)  # clockwise positive
    return math.floor(turn / (2 * math.pi) + 0.5)


# -- weights -----------------------------------------------------------------


def _symbol(name):
    import sympy

    return sympy.Symbol(name, positive=True)


def _edge_value(edge: Edge, override):
    w = override if override is not None else edge.weight
    if w is None:
        return Fraction(1)
    if isinstance(w, str):
        return _symbol(w)
    return w if not isinstance(w, (int, float)) else Fraction(w)


def _is_negative_term(term) -> bool:
    if isinstance(term, (Fraction, int, float)):
        return term < 0
    coeff = term.as_coeff_Mul()[0]
    return bool(coeff < 0)


def _split_terms(value) -> list:
    if isinstance(value, (Fraction, int, float)):
        return [] if value == 0 else [value]
    import sympy

    expr = sympy.expand(value)
    return [] if expr == 0 else list(sympy.Add.make_args(expr))


@dataclass
class BoundaryMatrix:
    """k x n boundary measurement; ``terms[i][j]`` keeps each signed path contribution."""

    sources: list
    n: int
    terms: list
    values: list = field(default=None)

    def __post_init__(self):
        if self.values is None:
            self.values = [[_sum(ts) for ts in row] for row in self.terms]

    @property
    def k(self) -> int:
        return len(self.sources)

    @classmethod
    def from_values(cls, values, sources: Sequence[int] | None = None) -> "BoundaryMatrix":
        """Wrap a plain matrix; ``sources`` are 1-based column labels of the identity block."""
        values = [list(row) for row in values]
        if sources is None:
            sources = list(range(1, len(values) + 1))
        terms = [[_split_terms(v) for v in row] for row in values]
        return cls(list(sources), len(values[0]) if values else 0, terms, values)

    def sympy(self):
        import sympy

        return sympy.Matrix(self.values)


def _sum(terms):
    if not terms:
        return Fraction(0)
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    return total


def boundary_measurement(graph: PlabicGraph, weights: dict | None = None) -> BoundaryMatrix:
    """Signed path-weight sums from each source to each boundary vertex.

    ``weights`` optionally maps edge indices to positive values overriding
    the weights stored in the graph.
    """
    weights = weights or {}
    for idx, w in weights.items():
        if isinstance(w, (Fraction, int, float)) and w <= 0:
            raise InvalidArgument("edge weights must be positive", edge=idx)
    sources = graph.sources
    labels = {vid: label for label, vid in graph.boundary.items()}
    terms = [[[] for _ in range(graph.n)] for _ in sources]
    for i, s in enumerate(sources):
        terms[i][s - 1] = [Fraction(1)]
        for path in graph.paths_from(s):
            j = labels[graph.edges[path[-1]].head]
            wt = Fraction(1)
            for idx in path:
                wt = wt * _edge_value(graph.edges[idx], weights.get(idx))
            sign = -1 if graph.path_winding(path) % 2 else 1
            terms[i][j - 1].append(wt if sign > 0 else -wt)
    return BoundaryMatrix(sources, graph.n, terms)


def binarize(b: BoundaryMatrix) -> FqMatrix:
    """Binary Tanner matrix: identity on sources, 0 for no path or any negative path term."""
    out = np.zeros((b.k, b.n), dtype=np.int64)
    for i, s in enumerate(b.sources):
        for j in range(b.n):
            if j == s - 1:
                out[i, j] = 1
            elif b.terms[i][j] and not any(_is_negative_term(t) for t in b.terms[i][j]):
                out[i, j] = 1
    return FqMatrix(out, GF2)


def graph_to_tanner(graph: PlabicGraph, weights: dict | None = None) -> FqMatrix:
    """Check/variable adjacency of the non-planar transformation (rows = sources)."""
    if graph.k == 0:
        return FqMatrix(np.zeros((0, graph.n), dtype=np.int64), GF2)
    return binarize(boundary_measurement(graph, weights))


def tanner_over_field(graph: PlabicGraph, field: GF2m, seed: int) -> FqMatrix:
    """Lift of the Tanner matrix to GF(2^m) using seeded non-zero edge weights.

    Path sums are evaluated in the field (signs vanish in characteristic 2)
    and kept only where the binary Tanner matrix has a 1.
    """
    rng = np.random.default_rng(seed)
    ew = rng.integers(1, field.order, size=len(graph.edges))
    mask = graph_to_tanner(graph).data
    out = np.zeros_like(mask)
    for i, s in enumerate(graph.sources):
        out[i, s - 1] = 1
        for path in graph.paths_from(s):
            head = graph.edges[path[-1]].head
            j = graph.vertices[head].label - 1
            if j == s - 1:
                continue
            wt = 1
            for idx in path:
                wt = int(field.mul(wt, ew[idx]))
            out[i, j] ^= wt
    out = np.where(mask == 1, out, 0)
    return FqMatrix(out, field)


# -- minors ------------------------------------------------------------------


def _det_exact(rows: list):
    """Determinant of a small square matrix of Fractions (or sympy) by elimination."""
    if rows and not all(isinstance(v, (Fraction, int)) for r in rows for v in r):
        import sympy

        return sympy.expand(sympy.Matrix(rows).det())
    a = [[Fraction(v) for v in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def _det_field(sub: np.ndarray, field: GF2m) -> int:
    a = sub.copy()
    n = a.shape[0]
    det = 1
    for c in range(n):
        nz = np.flatnonzero(a[c:, c])
        if nz.size == 0:
            return 0
        p = c + int(nz[0])
        if p != c:
            a[[c, p]] = a[[p, c]]  # sign is irrelevant in characteristic 2
        piv = int(a[c, c])
        det = int(field.mul(det, piv))
        inv = field.inv(piv)
        for r in range(c + 1, n):
            if a[r, c]:
                f = int(field.mul(a[r, c], inv))
                a[r] ^= field.mul(f, a[c])
    return det


def plucker_coordinates(m) -> dict:
    """Every maximal minor, keyed by the 0-based column subset."""
    if isinstance(m, FqMatrix):
        k, n = m.shape
        return {I: _det_field(m.data[:, list(I)], m.field) for I in itertools.combinations(range(n), k)}
    if isinstance(m, BoundaryMatrix):
        m = m.values
    rows = [list(r) for r in m]
    k = len(rows)
    n = len(rows[0]) if rows else 0
    if k > n:
        raise InvalidArgument("need k <= n for maximal minors", k=k, n=n)
    return {
        I: _det_exact([[r[j] for j in I] for r in rows]) for I in itertools.combinations(range(n), k)
    }


def is_totally_nonnegative(m):
    """``(True, None)`` if every maximal minor is >= 0, else ``(False, first bad subset)``."""
    for I, d in plucker_coordinates([[Fraction(v) for v in r] for r in m]).items():
        if d < 0:
            return False, I
    return True, None


def infer_k_from_dimension(dim: int, n: int) -> int:
    """Smallest k with k(n - k) = dim."""
    if dim < 0 or n < 1:
        raise InvalidArgument("need dim >= 0 and n >= 1", dim=dim, n=n)
    for k in range(n + 1):
        if k * (n - k) == dim:
            return k
    achievable = sorted({k * (n - k) for k in range(n + 1)})
    nearest = sorted(achievable, key=lambda d: (abs(d - dim), d))[:2]
    raise Unsatisfiable(f"no k with k(n-k) = {dim} for n = {n}", nearest=nearest)


def path_family_sum(graph: PlabicGraph, columns: Iterable[int], weights: dict | None = None):
    """Signed sum over vertex-disjoint path families from the sources onto ``columns``.

    ``columns`` are 1-based boundary labels.  A source matched to its own
    label uses the trivial path.  Independent of the determinant route.
    """
    weights = weights or {}
    cols = sorted(columns)
    sources = graph.sources
    if len(cols) != len(sources):
        raise InvalidArgument("need one column per source", columns=cols, k=len(sources))
    by_target = {}
    for s in sources:
        opts = {s: [[]]}
        for p in graph.paths_from(s):
            lab = graph.vertices[graph.edges[p[-1]].head].label
            opts.setdefault(lab, []).append(p)
        by_target[s] = opts
    total = Fraction(0)
    for perm in itertools.permutations(range(len(cols))):
        sign = _perm_sign(perm)
        choices = []
        for s, ci in zip(sources, perm):
            choices.append(by_target[s].get(cols[ci], []))
        for family in itertools.product(*choices):
            used = set()
            ok = True
            for s, p in zip(sources, family):
                verts = set(graph.path_vertices(p)) if p else {graph.boundary[s]}
                if used & verts:
                    ok = False
                    break
                used |= verts
            if not ok:
                continue
            term = Fraction(sign)
            for p in family:
                if p:
                    wt = Fraction(1)
                    for idx in p:
                        wt = wt * _edge_value(graph.edges[idx], weights.get(idx))
                    term = term * (-wt if graph.path_winding(p) % 2 else wt)
            total = total + term
    return total


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# -- generated family ----------------------------------------------------------


def random_plabic_graph(n: int, k: int, seed: int, density: float = 0.5) -> PlabicGraph:
    """Two-layer perfectly oriented graph with seeded random geometry.

    Each source feeds one white vertex, each sink is fed by one black vertex,
    and white-to-black edges are drawn with probability ``density`` (every
    white and black vertex keeps at least one such edge).  Internal vertices
    get random coordinates in the disk, so some paths wind and are zeroed by
    the binarization.
    """
    if not 0 < k < n:
        raise InvalidArgument("need 0 < k < n", n=n, k=k)
    rng = np.random.default_rng(seed)
    sources = sorted(int(s) + 1 for s in rng.choice(n, size=k, replace=False))
    sinks = [j for j in range(1, n + 1) if j not in sources]

    def point():
        r = 0.85 * math.sqrt(rng.random())
        a = 2 * math.pi * rng.random()
        return (round(r * math.cos(a), 4), round(r * math.sin(a), 4))

    vertices = {}
    for j in range(1, n + 1):
        vertices[f"b{j}"] = Vertex(f"b{j}", "boundary", j)
    edges = []
    for s in sources:
        vertices[f"w{s}"] = Vertex(f"w{s}", "white", None, point())
        edges.append(Edge(f"b{s}", f"w{s}"))
    for j in sinks:
        vertices[f"k{j}"] = Vertex(f"k{j}", "black", None, point())
    adj = rng.random((k, len(sinks))) < density
    for c in range(len(sinks)):
        if not adj[:, c].any():
            adj[rng.integers(k), c] = True
    for r in range(k):
        if not adj[r].any():
            adj[r, rng.integers(len(sinks))] = True
    for r, s in enumerate(sources):
        for c, j in enumerate(sinks):
            if adj[r, c]:
                edges.append(Edge(f"w{s}", f"k{j}"))
    for j in sinks:
        edges.append(Edge(f"k{j}", f"b{j}"))
    return PlabicGraph(n, k, vertices, edges)
