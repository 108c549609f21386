"""Graph homomorphism counting through closed tensor grids.

A homomorphism count hom(X, G) becomes a Holant value by placing an
equality signature of arity deg(v) on every vertex of X and the
adjacency matrix of G, read as a (0,2) signature, in the middle of every
edge.  The same wiring with "at most one" / "exactly one" vertex
signatures and a binary equality on the edges counts matchings and
perfect matchings.

Bounded-degree indistinguishability experiments enumerate connected
left graphs up to isomorphism and compare counts against two targets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grids import SignatureGrid, holant_eval_contracted
from .tensors import MixedTensor, SymBoolSignature, equality_signature

# Brute-force hom counting refuses to walk more maps than this.
BRUTE_CAP = 10**8

# Holant values for counting problems must sit this close to an integer.
ROUND_TOL = 1e-6


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph on vertices 0..n-1 with no multi-edges."""

    n: int
    edges: tuple[tuple[int, int], ...]
    allow_loops: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = []
        for (u, v) in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            if u == v and not self.allow_loops:
                raise ValueError(f"self-loop at {u} not allowed")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for (u, v) in self.edges:
            deg[u] += 1
            deg[v] += 1  # a loop counts twice
        return deg

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for (u, v) in self.edges:
            a[u, v] += 1.0
            a[v, u] += 1.0
        if self.allow_loops:
            # the double count above put 2 on the diagonal
            a[np.diag_indices(self.n)] //= 2
        return a

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        adj = [[] for _ in range(self.n)]
        for (u, v) in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def relabel(self, perm: list[int]) -> "SimpleGraph":
        """Image graph where old vertex v becomes perm[v]."""
        return SimpleGraph(
            self.n,
            tuple((perm[u], perm[v]) for (u, v) in self.edges),
            self.allow_loops,
        )


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, tuple(itertools.combinations(range(n), 2)))


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return SimpleGraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, tuple((i, i + 1) for i in range(n - 1)))


# -- grid constructions --------------------------------------------------------


def _star_grid(
    x: SimpleGraph, vertex_id, edge_id: str, q: int, close_isolated: bool
) -> SignatureGrid:
    """Common wiring: a vertex signature per x-vertex, a 2-port edge
    signature per x-edge.  vertex_id maps a degree to a binding name."""
    vertices = [vertex_id(d) for d in x.degrees()]
    edge_base = len(vertices)
    for _ in x.edges:
        vertices.append(edge_id)
    next_port = [1] * x.n
    grid_edges = []
    for k, (u, v) in enumerate(x.edges):
        grid_edges.append((u, next_port[u], edge_base + k, 1))
        next_port[u] += 1
        grid_edges.append((v, next_port[v], edge_base + k, 2))
        next_port[v] += 1
    if close_isolated:
        # isolated vertices carry a unary equality closed off by a
        # covariant partner, contributing a free sum over the domain
        for v in range(x.n):
            if next_port[v] == 1:
                vertices.append("eq1_cov")
                grid_edges.append((v, 1, len(vertices) - 1, 1))
    return SignatureGrid(q, tuple(vertices), tuple(grid_edges))


def hom_grid(x: SimpleGraph, q: int) -> SignatureGrid:
    """Closed grid whose Holant value is hom(x, G) for any target G on
    [q], once "A" is bound to the adjacency of G."""

    def vertex_id(d):
        return "eq1" if d == 0 else f"eq{d}"

    return _star_grid(x, vertex_id, "A", q, close_isolated=True)


def hom_bindings(adjacency, max_arity: int) -> dict[str, MixedTensor]:
    a = np.asarray(adjacency, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("adjacency must be a square matrix")
    q = a.shape[0]
    out = {"A": MixedTensor(q, 0, 2, a), "eq1_cov": equality_signature(q, 0, 1)}
    for d in range(1, max(max_arity, 1) + 1):
        out[f"eq{d}"] = equality_signature(q, d, 0)
    return out


def _round_count(value: complex, what: str) -> int:
    target = round(value.real)
    if abs(value - target) > ROUND_TOL * max(1.0, abs(value)):
        raise ArithmeticError(
            f"{what} value {value} strayed more than {ROUND_TOL} from an integer"
        )
    return int(target)


def hom_count(x: SimpleGraph, g: SimpleGraph, method: str = "holant") -> int:
    """Number of homomorphisms from x into g."""
    if method == "holant":
        if g.n < 1:
            return 0 if x.n else 1
        grid = hom_grid(x, g.n)
        bindings = hom_bindings(g.adjacency(), x.max_degree())
        bindings = {k: v for k, v in bindings.items() if k in set(grid.vertices)}
        return _round_count(holant_eval_contracted(grid, bindings), "hom count")
    if method == "brute":
        if g.n**x.n > BRUTE_CAP:
            raise ValueError(f"brute force over {g.n}**{x.n} maps refused")
        a = g.adjacency()
        total = 0
        for sigma in itertools.product(range(g.n), repeat=x.n):
            prod = 1.0
            for (u, v) in x.edges:
                prod *= a[sigma[u], sigma[v]]
                if prod == 0.0:
                    break
            total += prod
        return _round_count(complex(total), "hom count")
    raise ValueError(f"unknown method {method!r}")


def matchings_signatures(max_arity: int, perfect: bool = False) -> dict[int, MixedTensor]:
    """Boolean vertex signatures for (perfect) matchings, keyed by arity.

    Arity k holds "at most one input is 1" (or "exactly one" when
    perfect); arity 0 is included for isolated vertices.
    """
    if max_arity < 1:
        raise ValueError("max_arity must be at least 1")
    out = {}
    for k in range(max_arity + 1):
        vals = [0.0] * (k + 1)
        if k >= 1:
            vals[1] = 1.0
        if not perfect:
            vals[0] = 1.0
        out[k] = SymBoolSignature(tuple(vals), k, 0).to_tensor()
    return out


def matchings_grid(x: SimpleGraph) -> SignatureGrid:
    # arity-0 signatures are scalars with no ports, nothing to close
    return _star_grid(x, lambda d: f"m{d}", "eq2", 2, close_isolated=False)


def count_matchings(x: SimpleGraph, perfect: bool = False) -> int:
    sigs = matchings_signatures(max(x.max_degree(), 1), perfect)
    bindings = {f"m{k}": t for k, t in sigs.items()}
    bindings["eq2"] = equality_signature(2, 0, 2)
    what = "perfect matching count" if perfect else "matching count"
    return _round_count(holant_eval_contracted(matchings_grid(x), bindings), what)


# -- canonical forms and enumeration ---------------------------------------------


def _edge_bit(n: int, u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def _code_under(g: SimpleGraph, perm) -> int:
    code = 0
    for (u, v) in g.edges:
        code |= 1 << _edge_bit(g.n, perm[u], perm[v])
    return code


def _refine_colors(g: SimpleGraph) -> list[int]:
    """Iterated neighborhood refinement; equal colors bound the
    permutations the canonical search must try."""
    adj = [[] for _ in range(g.n)]
    for (u, v) in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    colors = [len(adj[v]) for v in range(g.n)]
    for _ in range(g.n):
        keys = [
            (colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(g.n)
        ]
        order = {k: i for i, k in enumerate(sorted(set(keys)))}
        new = [order[k] for k in keys]
        if new == colors:
            break
        colors = new
    return colors


def canonical_code(g: SimpleGraph) -> int:
    """Smallest adjacency bit code over all vertex relabelings."""
    if g.n <= 1:
        return 0
    colors = _refine_colors(g)
    groups: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        groups.setdefault(c, []).append(v)
    ordered = [groups[c] for c in sorted(groups)]
    best = None
    # labels are handed out color class by color class; within a class
    # every order is tried
    for parts in itertools.product(*(itertools.permutations(grp) for grp in ordered)):
        perm = [0] * g.n
        label = 0
        for part in parts:
            for v in part:
                perm[v] = label
                label += 1
        code = _code_under(g, perm)
        if best is None or code < best:
            best = code
    return best


def canonical_form(g: SimpleGraph) -> SimpleGraph:
    code = canonical_code(g)
    edges = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if code >> _edge_bit(g.n, u, v) & 1:
                edges.append((u, v))
    return SimpleGraph(g.n, tuple(edges))


def are_isomorphic(a: SimpleGraph, b: SimpleGraph) -> bool:
    if a.n != b.n or sorted(a.degrees()) != sorted(b.degrees()):
        return False
    return canonical_code(a) == canonical_code(b)


@lru_cache(maxsize=None)
def enumerate_connected_graphs(
    max_vertices: int, max_degree: int | None = None
) -> tuple[SimpleGraph, ...]:
    """All connected graphs up to isomorphism, smallest first.

    Grown by attaching one new vertex to a nonempty subset of an
    existing representative; every connected graph has a deletable
    non-cut vertex, so each class is reached.  Order is by vertex count
    then canonical code.
    """
    if max_vertices < 1:
        return ()
    levels: list[dict[int, SimpleGraph]] = [{0: SimpleGraph(1, ())}]
    for n in range(2, max_vertices + 1):
        found: dict[int, SimpleGraph] = {}
        for h in levels[-1].values():
            deg = h.degrees()
            room = [v for v in range(h.n) if max_degree is None or deg[v] < max_degree]
            top = len(room) if max_degree is None else min(max_degree, len(room))
            for size in range(1, top + 1):
                for back in itertools.combinations(room, size):
                    g = SimpleGraph(n, h.edges + tuple((v, n - 1) for v in back))
                    code = canonical_code(g)
                    if code not in found:
                        found[code] = canonical_form(g)
        levels.append(found)
    out = []
    for level in levels:
        out.extend(level[c] for c in sorted(level))
    return tuple(out)


# -- indistinguishability experiments ---------------------------------------------


@dataclass(frozen=True)
class DistinguisherReport:
    verdict: str  # "distinguished" | "indist_at_bound"
    max_degree: int
    max_left_vertices: int
    graphs_checked: int
    distinguisher: SimpleGraph | None = None
    count_f: int | None = None
    count_g: int | None = None


def bounded_degree_distinguisher(
    f: SimpleGraph, g: SimpleGraph, d: int, max_left_vertices: int
) -> DistinguisherReport:
    """Search connected left graphs of max degree d for one with
    different hom counts into f and into g."""
    if d < 1:
        raise ValueError("degree bound must be at least 1")
    checked = 0
    for x in enumerate_connected_graphs(max_left_vertices, d):
        checked += 1
        cf = hom_count(x, f)
        cg = hom_count(x, g)
        if cf != cg:
            return DistinguisherReport(
                "distinguished", d, max_left_vertices, checked, x, cf, cg
            )
    return DistinguisherReport("indist_at_bound", d, max_left_vertices, checked)


@dataclass(frozen=True)
class PairExperimentReport:
    index: int
    status: str  # "skipped" | "isomorphic" | "distinguished" | "indist_at_bound"
    reason: str | None = None
    distinguisher: SimpleGraph | None = None
    count_f: int | None = None
    count_g: int | None = None


def invertible_adjacency_experiment(
    pairs: list[tuple[SimpleGraph, SimpleGraph]], bound: int
) -> list[PairExperimentReport]:
    """For non-isomorphic pairs with nonsingular adjacency matrices,
    hunt for a degree-3 distinguisher up to the vertex bound.

    A miss is evidence relative to the bound only, never a refutation.
    """
    reports = []
    for idx, (f, g) in enumerate(pairs):
        bad = [
            side
            for side, gr in (("first", f), ("second", g))
            if abs(round(float(np.linalg.det(gr.adjacency())))) == 0
        ]
        if bad:
            reports.append(
                PairExperimentReport(
                    idx, "skipped", f"singular adjacency on {' and '.join(bad)} side"
                )
            )
            continue
        if are_isomorphic(f, g):
            reports.append(PairExperimentReport(idx, "isomorphic"))
            continue
        found = bounded_degree_distinguisher(f, g, 3, bound)
        reports.append(
            PairExperimentReport(
                idx,
                found.verdict,
                None,
                found.distinguisher,
                found.count_f,
                found.count_g,
            )
        )
    return reports
