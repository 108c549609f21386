"""Signature grids and their Holant values.

A grid is a multigraph whose vertices carry signature ids and whose edges
join a contravariant (left) port of one vertex to a covariant (right)
port of another; ports are 1-based.  Dangling stubs occupy ports the same
way and carry the grid's external slot order: left stubs are contravariant
slots 1..l, right stubs covariant slots 1..r.  Vertexless loops are kept
as a bare count; each contributes a factor q to the Holant value.

Bare wires (dangling edges with no incident vertex) are materialized as
vertices carrying the reserved signature id "wire", which is always bound
to the (1,1) identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from holant.tensors import MAX_ENTRIES, MixedTensor, identity_signature

WIRE_ID = "wire"

Edge = tuple[int, int, int, int]  # (u, left port of u, v, right port of v)
Stub = tuple[int, int]  # (vertex, port)


@dataclass(frozen=True)
class SignatureGrid:
    """A grid over named signatures; immutable structural data only."""

    q: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    left_dangling: tuple[Stub, ...] = ()
    right_dangling: tuple[Stub, ...] = ()
    loops: int = 0

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "left_dangling", tuple(tuple(s) for s in self.left_dangling))
        object.__setattr__(self, "right_dangling", tuple(tuple(s) for s in self.right_dangling))
        if self.q < 1:
            raise ValueError("domain size must be positive")
        if self.loops < 0:
            raise ValueError("loop count must be nonnegative")

    @property
    def profile(self) -> tuple[int, int]:
        return (len(self.left_dangling), len(self.right_dangling))

    def is_closed(self) -> bool:
        return not self.left_dangling and not self.right_dangling

    def validate(self, shapes: dict[str, tuple[int, int]]) -> None:
        """Check every port of every vertex is used exactly once.

        shapes maps signature id to (left, right) slot counts.
        """
        n = len(self.vertices)
        for sig in self.vertices:
            if sig not in shapes:
                raise ValueError(f"no shape known for signature {sig!r}")
        use: dict[tuple[int, str, int], int] = {}

        def touch(v: int, side: str, port: int) -> None:
            if not (0 <= v < n):
                raise ValueError(f"vertex index {v} out of range")
            l, r = shapes[self.vertices[v]]
            limit = l if side == "L" else r
            if not (1 <= port <= limit):
                raise ValueError(
                    f"port {port} out of range for {side} side of vertex {v} "
                    f"({self.vertices[v]!r} has shape {(l, r)})"
                )
            key = (v, side, port)
            use[key] = use.get(key, 0) + 1

        for (u, i, v, j) in self.edges:
            touch(u, "L", i)
            touch(v, "R", j)
        for (v, i) in self.left_dangling:
            touch(v, "L", i)
        for (v, j) in self.right_dangling:
            touch(v, "R", j)
        for v in range(n):
            l, r = shapes[self.vertices[v]]
            for i in range(1, l + 1):
                if use.get((v, "L", i), 0) != 1:
                    raise ValueError(f"left port {i} of vertex {v} used {use.get((v,'L',i),0)} times")
            for j in range(1, r + 1):
                if use.get((v, "R", j), 0) != 1:
                    raise ValueError(f"right port {j} of vertex {v} used {use.get((v,'R',j),0)} times")


def resolve_bindings(grid: SignatureGrid, bindings: dict[str, MixedTensor]) -> dict[str, MixedTensor]:
    """Attach tensors to ids; supplies the reserved wire binding, checks q."""
    out = dict(bindings)
    if WIRE_ID in out and not out[WIRE_ID].allclose(identity_signature(grid.q), 0):
        raise ValueError(f"{WIRE_ID!r} is reserved for the identity signature")
    out.setdefault(WIRE_ID, identity_signature(grid.q))
    for sig in set(grid.vertices):
        if sig not in out:
            raise ValueError(f"missing binding for signature {sig!r}")
        if out[sig].q != grid.q:
            raise ValueError(
                f"binding {sig!r} has domain {out[sig].q}, grid has {grid.q}"
            )
    return out


def _shapes_of(bindings: dict[str, MixedTensor]) -> dict[str, tuple[int, int]]:
    return {k: v.shape for k, v in bindings.items()}


# -- brute-force evaluation by edge assignment ---------------------------


def _vertex_axis_tables(grid: SignatureGrid, shapes: dict[str, tuple[int, int]]):
    """For each vertex, which edge or dangling slot feeds each axis.

    Returns per-vertex lists whose entries are ("e", edge_index) or
    ("d", dangling_slot_index) with dangling slots numbered left first.
    """
    tables = []
    for v, sig in enumerate(grid.vertices):
        l, r = shapes[sig]
        tables.append([None] * (l + r))
    for eid, (u, i, v, j) in enumerate(grid.edges):
        tables[u][i - 1] = ("e", eid)
        lv = shapes[grid.vertices[v]][0]
        tables[v][lv + j - 1] = ("e", eid)
    ndang = len(grid.left_dangling)
    for k, (v, i) in enumerate(grid.left_dangling):
        tables[v][i - 1] = ("d", k)
    for k, (v, j) in enumerate(grid.right_dangling):
        lv = shapes[grid.vertices[v]][0]
        tables[v][lv + j - 1] = ("d", ndang + k)
    return tables


def holant_eval(grid: SignatureGrid, bindings: dict[str, MixedTensor]) -> complex:
    """Holant value of a closed grid, straight from the definition.

    Sums over all edge assignments the product of vertex signature
    entries, short-circuiting a term as soon as a factor is zero, then
    multiplies by q per vertexless loop.
    """
    if not grid.is_closed():
        raise ValueError("holant_eval needs a closed grid; use gadget_signature")
    b = resolve_bindings(grid, bindings)
    shapes = _shapes_of(b)
    grid.validate(shapes)
    q = grid.q
    ne = len(grid.edges)
    if q**ne > MAX_ENTRIES:
        raise ValueError(f"{q}^{ne} edge assignments exceeds the enumeration cap")
    tables = _vertex_axis_tables(grid, shapes)
    arrays = [b[sig].array for sig in grid.vertices]
    plans = []
    for v in range(len(grid.vertices)):
        plans.append((arrays[v], tuple(eid for (_, eid) in tables[v])))
    total = 0j
    for assign in itertools.product(range(q), repeat=ne):
        term = 1 + 0j
        for arr, eids in plans:
            f = arr[tuple(assign[e] for e in eids)] if eids else arr[()]
            if f == 0:
                term = 0j
                break
            term *= f
        total += term
    return complex(total * q**grid.loops)


# -- pairwise tensor contraction -----------------------------------------


def _contract_network(q, node_arrays, node_labels, label_edges, open_labels, loops):
    """Contract a labeled tensor network down to the open labels.

    node_arrays/node_labels are parallel lists; label_edges is a list of
    label pairs to sum over; open_labels gives the output axis order.
    Greedy pairwise order: repeatedly contract the node pair whose result
    tensor is smallest.
    """
    nodes: dict[int, tuple[np.ndarray, list]] = {
        i: (np.asarray(a, dtype=np.complex128), list(ls))
        for i, (a, ls) in enumerate(zip(node_arrays, node_labels))
    }
    owner: dict[object, int] = {}
    for nid, (_, ls) in nodes.items():
        for lbl in ls:
            owner[lbl] = nid
    next_id = len(nodes)
    edges = list(label_edges)

    def trace_self(nid):
        nonlocal edges
        arr, ls = nodes[nid]
        while True:
            here = [e for e in edges if owner[e[0]] == nid and owner[e[1]] == nid]
            if not here:
                break
            la, lb = here[0]
            p1, p2 = ls.index(la), ls.index(lb)
            arr = np.trace(arr, axis1=min(p1, p2), axis2=max(p1, p2))
            ls = [x for x in ls if x not in (la, lb)]
            del owner[la], owner[lb]
            edges.remove(here[0])
        nodes[nid] = (arr, ls)

    for nid in list(nodes):
        trace_self(nid)

    while edges:
        pairs: dict[tuple[int, int], list] = {}
        for e in edges:
            u, v = owner[e[0]], owner[e[1]]
            key = (min(u, v), max(u, v))
            pairs.setdefault(key, []).append(e)
        best = None
        for (u, v), shared in sorted(pairs.items()):
            ndim = nodes[u][0].ndim + nodes[v][0].ndim - 2 * len(shared)
            cost = q**ndim
            if best is None or cost < best[0]:
                best = (cost, u, v, shared)
        cost, u, v, shared = best
        if cost > MAX_ENTRIES:
            raise ValueError(f"intermediate tensor of {cost} entries exceeds the cap")
        au, lu = nodes[u]
        av, lv = nodes[v]
        ax_u, ax_v = [], []
        for (la, lb) in shared:
            if owner[la] == u:
                ax_u.append(lu.index(la))
                ax_v.append(lv.index(lb))
            else:
                ax_u.append(lu.index(lb))
                ax_v.append(lv.index(la))
            del owner[la], owner[lb]
        arr = np.tensordot(au, av, axes=(ax_u, ax_v))
        labels = [x for k, x in enumerate(lu) if k not in ax_u] + [
            x for k, x in enumerate(lv) if k not in ax_v
        ]
        del nodes[u], nodes[v]
        nodes[next_id] = (arr, labels)
        for lbl in labels:
            owner[lbl] = next_id
        edges = [e for e in edges if e not in shared]
        trace_self(next_id)
        next_id += 1

    arr = np.array(1 + 0j)
    labels: list = []
    for nid in sorted(nodes):
        a, ls = nodes[nid]
        if arr.size * a.size > MAX_ENTRIES:
            raise ValueError("outer product exceeds the entry cap")
        arr = np.multiply.outer(arr, a)
        labels += ls
    perm = [labels.index(lbl) for lbl in open_labels]
    if sorted(perm) != list(range(arr.ndim)):
        raise ValueError("open labels do not match the remaining axes")
    arr = np.transpose(arr, perm) if perm else arr.reshape(())
    return arr * q**loops


def _grid_network(grid: SignatureGrid, bindings: dict[str, MixedTensor]):
    shapes = _shapes_of(bindings)
    grid.validate(shapes)
    arrays = [bindings[sig].array for sig in grid.vertices]
    labels = []
    for v, sig in enumerate(grid.vertices):
        l, r = shapes[sig]
        labels.append([("L", v, i) for i in range(1, l + 1)] + [("R", v, j) for j in range(1, r + 1)])
    label_edges = [(("L", u, i), ("R", v, j)) for (u, i, v, j) in grid.edges]
    open_labels = [("L", v, i) for (v, i) in grid.left_dangling] + [
        ("R", v, j) for (v, j) in grid.right_dangling
    ]
    return arrays, labels, label_edges, open_labels


def holant_eval_contracted(grid: SignatureGrid, bindings: dict[str, MixedTensor]) -> complex:
    """Holant value of a closed grid via pairwise tensor contraction."""
    if not grid.is_closed():
        raise ValueError("holant_eval_contracted needs a closed grid")
    b = resolve_bindings(grid, bindings)
    arrays, labels, label_edges, open_labels = _grid_network(grid, b)
    out = _contract_network(grid.q, arrays, labels, label_edges, open_labels, grid.loops)
    return complex(out)


def gadget_signature(
    grid: SignatureGrid, bindings: dict[str, MixedTensor], method: str = "contract"
) -> MixedTensor:
    """Signature of a gadget: Holant values over its dangling assignments.

    Slot order follows the dangling stub order, left stubs then right.
    method "brute" pins the dangling slots and sums assignments directly;
    "contract" leaves them as free tensor axes.
    """
    b = resolve_bindings(grid, bindings)
    l, r = grid.profile
    q = grid.q
    if method == "contract":
        arrays, labels, label_edges, open_labels = _grid_network(grid, b)
        out = _contract_network(q, arrays, labels, label_edges, open_labels, grid.loops)
        return MixedTensor(q, l, r, out)
    if method != "brute":
        raise ValueError(f"unknown method {method!r}")
    shapes = _shapes_of(b)
    grid.validate(shapes)
    if q ** (len(grid.edges) + l + r) > MAX_ENTRIES:
        raise ValueError("assignment enumeration exceeds the cap")
    tables = _vertex_axis_tables(grid, shapes)
    arrays = [b[sig].array for sig in grid.vertices]
    out = np.zeros((q,) * (l + r), dtype=np.complex128)
    for pins in itertools.product(range(q), repeat=l + r):
        total = 0j
        for assign in itertools.product(range(q), repeat=len(grid.edges)):
            term = 1 + 0j
            for v, arr in enumerate(arrays):
                idx = []
                for slot in tables[v]:
                    kind, k = slot
                    idx.append(assign[k] if kind == "e" else pins[k])
                f = arr[tuple(idx)] if idx else arr[()]
                if f == 0:
                    term = 0j
                    break
                term *= f
            total += term
        out[pins] = total * q**grid.loops
    return MixedTensor(q, l, r, out)


# -- quantum gadgets ------------------------------------------------------


@dataclass(frozen=True)
class QuantumGadget:
    """Formal linear combination of gadgets with a common profile."""

    terms: tuple[tuple[complex, SignatureGrid], ...]

    def __post_init__(self):
        terms = tuple((complex(c), g) for c, g in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValueError("a quantum gadget needs at least one term")
        q = terms[0][1].q
        prof = terms[0][1].profile
        for _, g in terms:
            if g.q != q or g.profile != prof:
                raise ValueError("terms must share domain size and profile")

    @property
    def q(self) -> int:
        return self.terms[0][1].q

    @property
    def profile(self) -> tuple[int, int]:
        return self.terms[0][1].profile

    def signature(self, bindings: dict[str, MixedTensor], method: str = "contract") -> MixedTensor:
        l, r = self.profile
        out = MixedTensor.zeros(self.q, l, r)
        for c, g in self.terms:
            out = out + c * gadget_signature(g, bindings, method=method)
        return out

    def scaled(self, factor: complex) -> "QuantumGadget":
        return QuantumGadget(tuple((c * factor, g) for c, g in self.terms))


def compose(g1: SignatureGrid, g2: SignatureGrid, pairing: list[tuple[int, int]]) -> SignatureGrid:
    """Wire left slots of g1 onto right slots of g2 (both 1-based).

    Each pair (i, j) joins g1's contravariant slot i to g2's covariant
    slot j.  Unwired slots keep their order, g1's before g2's on both
    sides.  The composite signature is the contraction of the two gadget
    signatures at the wired slots.
    """
    if g1.q != g2.q:
        raise ValueError("domain sizes differ")
    n1 = len(g1.vertices)
    used_l = [p[0] for p in pairing]
    used_r = [p[1] for p in pairing]
    if len(set(used_l)) != len(used_l) or len(set(used_r)) != len(used_r):
        raise ValueError("pairing reuses a slot")
    for i, j in pairing:
        if not (1 <= i <= len(g1.left_dangling)):
            raise ValueError(f"left slot {i} out of range")
        if not (1 <= j <= len(g2.right_dangling)):
            raise ValueError(f"right slot {j} out of range")
    edges = list(g1.edges) + [(u + n1, i, v + n1, j) for (u, i, v, j) in g2.edges]
    for i, j in pairing:
        v1, p1 = g1.left_dangling[i - 1]
        v2, p2 = g2.right_dangling[j - 1]
        edges.append((v1, p1, v2 + n1, p2))
    left = [s for k, s in enumerate(g1.left_dangling) if (k + 1) not in used_l]
    left += [(v + n1, p) for (v, p) in g2.left_dangling]
    right = list(g1.right_dangling)
    right += [(v + n1, p) for k, (v, p) in enumerate(g2.right_dangling) if (k + 1) not in used_r]
    return SignatureGrid(
        q=g1.q,
        vertices=g1.vertices + g2.vertices,
        edges=tuple(edges),
        left_dangling=tuple(left),
        right_dangling=tuple(right),
        loops=g1.loops + g2.loops,
    )


# -- enumeration of closed grids and gadgets -------------------------------


def _group_permutations(sig_list: list[str]):
    """All vertex relabelings that permute equal signature ids only."""
    groups: list[list[int]] = []
    start = 0
    for k in range(1, len(sig_list) + 1):
        if k == len(sig_list) or sig_list[k] != sig_list[start]:
            groups.append(list(range(start, k)))
            start = k
    perms_per_group = [list(itertools.permutations(g)) for g in groups]
    for combo in itertools.product(*perms_per_group):
        perm = list(range(len(sig_list)))
        for g, image in zip(groups, combo):
            for src, dst in zip(g, image):
                perm[src] = dst
        yield perm


def _canonical_code(sig_list, edges, left_dangling, right_dangling):
    """Minimum relabeling of the structure over same-signature permutations."""
    best = None
    for perm in _group_permutations(sig_list):
        e = tuple(sorted((perm[u], i, perm[v], j) for (u, i, v, j) in edges))
        ld = tuple((perm[v], i) for (v, i) in left_dangling)
        rd = tuple((perm[v], j) for (v, j) in right_dangling)
        code = (e, ld, rd)
        if best is None or code < best:
            best = code
    return best


def _port_matchings(sig_list: list[str], free_left, free_right, pretouched=()):
    """Bijections between the given left and right ports, symmetry-pruned.

    free_left/free_right are the (vertex, port) lists to match; vertices
    in pretouched (those already distinguished, e.g. by a dangling stub)
    are never treated as interchangeable.  Among so-far-untouched vertices
    with equal signatures only the first is tried per port number, which
    drops many isomorphic duplicates early; a final canonical dedup is
    still required.
    """
    nl = len(free_left)
    if nl != len(free_right):
        return
    out: list[tuple[Stub, Stub]] = []
    touched = [v in set(pretouched) for v in range(len(sig_list))]

    def rec(k):
        if k == nl:
            yield tuple(out)
            return
        lv, lp = free_left[k]
        seen_equiv = set()
        for idx, (rv, rp) in enumerate(free_right):
            if used[idx]:
                continue
            # self-edges change the structure, so never class-prune them
            if not touched[rv] and rv != lv:
                key = (sig_list[rv], rp)
                if key in seen_equiv:
                    continue
                seen_equiv.add(key)
            used[idx] = True
            was_l, was_r = touched[lv], touched[rv]
            touched[lv] = touched[rv] = True
            out.append(((lv, lp), (rv, rp)))
            yield from rec(k + 1)
            out.pop()
            touched[lv], touched[rv] = was_l, was_r
            used[idx] = False

    used = [False] * nl
    yield from rec(0)


def enumerate_grids(
    sigs: list[tuple[str, tuple[int, int]]],
    max_vertices: int,
    q: int,
    max_loops: int = 1,
):
    """All closed grids over the named signatures, up to isomorphism.

    Isomorphism respects port order: a relabeling of vertices carrying
    equal signature ids that maps the edge multiset to itself.  Yields
    canonical representatives in a deterministic order: by vertex count,
    then signature multiset, then canonical edge code, each with loop
    counts 0..max_loops.
    """
    sigs = sorted(sigs)
    ids = [s for s, _ in sigs]
    if len(set(ids)) != len(ids):
        raise ValueError("signature ids must be distinct")
    for n in range(max_vertices + 1):
        for multiset in itertools.combinations_with_replacement(sigs, n):
            sig_list = [s for s, _ in multiset]
            shapes = [sh for _, sh in multiset]
            if sum(l for l, _ in shapes) != sum(r for _, r in shapes):
                continue
            left_ports = [(v, i) for v, (l, _) in enumerate(shapes) for i in range(1, l + 1)]
            right_ports = [(v, j) for v, (_, r) in enumerate(shapes) for j in range(1, r + 1)]
            codes = set()
            for matching in _port_matchings(sig_list, left_ports, right_ports):
                edges = tuple((lv, lp, rv, rp) for ((lv, lp), (rv, rp)) in matching)
                codes.add(_canonical_code(sig_list, edges, (), ()))
            for code in sorted(codes):
                edges, _, _ = code
                for loops in range(max_loops + 1):
                    yield SignatureGrid(
                        q=q, vertices=tuple(sig_list), edges=edges, loops=loops
                    )


def enumerate_gadgets(
    sigs: list[tuple[str, tuple[int, int]]],
    profile: tuple[int, int],
    max_vertices: int,
    q: int,
):
    """All (l,r)-gadgets over the named signatures plus bare wires.

    Bare wires appear as vertices carrying the reserved "wire" id and do
    not count against max_vertices.  Gadgets whose components have no
    dangling stub are skipped (their closed parts only scale the
    signature).  Dedup is up to isomorphism fixing the slot orders.
    """
    lp, rp = profile
    if lp == rp == 0:
        raise ValueError("use enumerate_grids for closed profiles")
    sigs = sorted(sigs)
    ids = [s for s, _ in sigs]
    if len(set(ids)) != len(ids) or WIRE_ID in ids:
        raise ValueError("signature ids must be distinct and not the reserved wire id")
    for n in range(max_vertices + 1):
        for multiset in itertools.combinations_with_replacement(sigs, n):
            base_sigs = [s for s, _ in multiset]
            base_shapes = [sh for _, sh in multiset]
            L = sum(l for l, _ in base_shapes)
            R = sum(r for _, r in base_shapes)
            if L - R != lp - rp:
                continue
            for w in range(min(lp, rp) + 1):
                m = L - lp + w  # internal edge count
                if m < 0 or rp - w < 0 or lp - w > L or rp - w > R:
                    continue
                yield from _gadgets_for_multiset(
                    q, base_sigs, base_shapes, lp, rp, w, m
                )


def _gadgets_for_multiset(q, base_sigs, base_shapes, lp, rp, w, m):
    n = len(base_sigs)
    sig_list = base_sigs + [WIRE_ID] * w
    shapes = base_shapes + [(1, 1)] * w
    left_ports = [(v, i) for v, (l, _) in enumerate(base_shapes) for i in range(1, l + 1)]
    right_ports = [(v, j) for v, (_, r) in enumerate(base_shapes) for j in range(1, r + 1)]
    codes = set()
    for dang_l in itertools.combinations(range(len(left_ports)), lp - w):
        for dang_r in itertools.combinations(range(len(right_ports)), rp - w):
            free_l = [p for k, p in enumerate(left_ports) if k not in dang_l]
            free_r = [p for k, p in enumerate(right_ports) if k not in dang_r]
            stubs_l = [left_ports[k] for k in dang_l] + [(n + t, 1) for t in range(w)]
            stubs_r = [right_ports[k] for k in dang_r] + [(n + t, 1) for t in range(w)]
            pretouched = [v for (v, _) in stubs_l + stubs_r]
            for matching in _port_matchings(sig_list, free_l, free_r, pretouched):
                edges = tuple((lv, i, rv, j) for ((lv, i), (rv, j)) in matching)
                if not _components_all_dangle(n + w, edges, stubs_l + stubs_r):
                    continue
                for ord_l in itertools.permutations(stubs_l):
                    for ord_r in itertools.permutations(stubs_r):
                        codes.add(_canonical_code(sig_list, edges, ord_l, ord_r))
    for code in sorted(codes):
        edges, ld, rd = code
        yield SignatureGrid(
            q=q,
            vertices=tuple(sig_list),
            edges=edges,
            left_dangling=ld,
            right_dangling=rd,
        )


def _components_all_dangle(n, edges, stubs) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (u, _, v, _) in edges:
        parent[find(u)] = find(v)
    dangling_roots = {find(v) for (v, _) in stubs}
    return all(find(v) in dangling_roots for v in range(n))


# -- the Holant value as a polynomial --------------------------------------

Monomial = tuple[tuple[str, tuple[int, ...]], ...]

MONOMIAL_CAP = 10**6


@dataclass
class HolantPolynomial:
    """Holant value with signature entries left symbolic.

    Each variable is one entry of one named signature; a monomial is the
    multiset of entries a single edge assignment reads, and merged
    assignments accumulate integer coefficients (times q per loop).
    """

    q: int
    monomials: dict[Monomial, complex] = field(default_factory=dict)

    @property
    def num_monomials(self) -> int:
        return len(self.monomials)

    def evaluate(self, bindings: dict[str, MixedTensor]) -> complex:
        total = 0j
        for mono, coeff in self.monomials.items():
            term = complex(coeff)
            for sig, idx in mono:
                term *= bindings[sig].array[idx] if idx else bindings[sig].array[()]
            total += term
        return total

    def sorted_items(self):
        return sorted(self.monomials.items())


def holant_polynomial(
    grid: SignatureGrid,
    shapes: dict[str, tuple[int, int]],
    cap: int = MONOMIAL_CAP,
) -> HolantPolynomial:
    """Expand a closed grid's Holant value over symbolic signature entries."""
    if not grid.is_closed():
        raise ValueError("holant_polynomial needs a closed grid")
    shapes = dict(shapes)
    shapes.setdefault(WIRE_ID, (1, 1))
    grid.validate(shapes)
    q = grid.q
    ne = len(grid.edges)
    if q**ne > MAX_ENTRIES:
        raise ValueError(f"{q}^{ne} edge assignments exceeds the enumeration cap")
    tables = _vertex_axis_tables(grid, shapes)
    poly = HolantPolynomial(q=q)
    factor = complex(q**grid.loops)
    wire_eye = identity_signature(q)
    for assign in itertools.product(range(q), repeat=ne):
        vars_used = []
        coeff = factor
        for v, sig in enumerate(grid.vertices):
            idx = tuple(assign[k] for (_, k) in tables[v])
            if sig == WIRE_ID:
                # wires are fixed to the identity, not symbolic
                coeff *= wire_eye.array[idx]
                if coeff == 0:
                    break
            else:
                vars_used.append((sig, idx))
        else:
            mono = tuple(sorted(vars_used))
            poly.monomials[mono] = poly.monomials.get(mono, 0j) + coeff
            if len(poly.monomials) > cap:
                raise ValueError(f"polynomial exceeds {cap} monomials")
            continue
    poly.monomials = {m: c for m, c in poly.monomials.items() if c != 0}
    return poly
