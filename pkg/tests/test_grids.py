"""Grid evaluation, gadget signatures, enumeration, and the polynomial."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from holant import (
    MixedTensor,
    disequality_signature,
    equality_signature,
    identity_signature,
    pair,
)
from holant.grids import (
    QuantumGadget,
    SignatureGrid,
    compose,
    enumerate_gadgets,
    enumerate_grids,
    gadget_signature,
    holant_eval,
    holant_eval_contracted,
    holant_polynomial,
)


def random_tensor(rng, q, left, right):
    shape = (q,) * (left + right)
    arr = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if rng.random() < 0.4:  # exercise the zero short-circuit path
        flat = arr.reshape(-1)
        kill = rng.random(flat.size) < 0.5
        flat[kill] = 0
    return MixedTensor(q, left, right, arr)


def random_closed_grid(rng, qmax=3, vmax=4, arity_max=3):
    """A random closed grid plus random bindings for its signatures."""
    q = int(rng.integers(1, qmax + 1))
    while True:
        n = int(rng.integers(0, vmax + 1))
        shapes = []
        for _ in range(n):
            a = int(rng.integers(0, arity_max + 1))
            l = int(rng.integers(0, a + 1))
            shapes.append((l, a - l))
        if sum(l for l, _ in shapes) == sum(r for _, r in shapes):
            break
    left_ports = [(v, i) for v, (l, _) in enumerate(shapes) for i in range(1, l + 1)]
    right_ports = [(v, j) for v, (_, r) in enumerate(shapes) for j in range(1, r + 1)]
    perm = rng.permutation(len(right_ports))
    edges = tuple(
        (lv, lp, right_ports[perm[k]][0], right_ports[perm[k]][1])
        for k, (lv, lp) in enumerate(left_ports)
    )
    names = [f"s{v}" for v in range(n)]
    bindings = {names[v]: random_tensor(rng, q, *shapes[v]) for v in range(n)}
    grid = SignatureGrid(
        q=q, vertices=tuple(names), edges=edges, loops=int(rng.integers(0, 2))
    )
    return grid, bindings


# -- brute-force evaluator ------------------------------------------------


def test_empty_grid_and_loops():
    empty = SignatureGrid(q=3, vertices=(), edges=())
    assert holant_eval(empty, {}) == 1
    loop = SignatureGrid(q=3, vertices=(), edges=(), loops=1)
    assert holant_eval(loop, {}) == 3
    assert holant_eval_contracted(loop, {}) == 3


def test_identity_cycle_gives_q():
    # a single (1,1) vertex with its own output wired to its input: trace
    for q in (1, 2, 4):
        g = SignatureGrid(q=q, vertices=("i",), edges=((0, 1, 0, 1),))
        assert holant_eval(g, {"i": identity_signature(q)}) == q


def test_equality_pair_value():
    # two binary equalities wired in parallel give q
    g = SignatureGrid(q=3, vertices=("a", "b"), edges=((0, 1, 1, 1), (0, 2, 1, 2)))
    b = {"a": equality_signature(3, 2, 0), "b": equality_signature(3, 0, 2)}
    assert holant_eval(g, b) == 3
    # disequality against equality gives 0
    b2 = {"a": disequality_signature(3, 2, 0), "b": equality_signature(3, 0, 2)}
    assert holant_eval(g, b2) == 0
    # disequality against disequality counts ordered distinct pairs
    b3 = {"a": disequality_signature(3, 2, 0), "b": disequality_signature(3, 0, 2)}
    assert holant_eval(g, b3) == 6


def test_matrix_cycle_is_trace_of_power():
    rng = np.random.default_rng(31)
    q = 3
    a = random_tensor(rng, q, 1, 1)
    for k in (1, 2, 3, 4):
        g = SignatureGrid(
            q=q,
            vertices=("a",) * k,
            edges=tuple((v, 1, (v + 1) % k, 1) for v in range(k)),
        )
        want = np.trace(np.linalg.matrix_power(a.matrix(), k))
        assert abs(holant_eval(g, {"a": a}) - want) < 1e-9


def test_disconnected_grids_multiply():
    rng = np.random.default_rng(32)
    g1, b1 = random_closed_grid(rng)
    g2, b2 = random_closed_grid(rng)
    q = g1.q
    while g2.q != q:
        g2, b2 = random_closed_grid(rng)
    g2s = SignatureGrid(
        q=q,
        vertices=tuple("o" + s for s in g2.vertices),
        edges=tuple((u + len(g1.vertices), i, v + len(g1.vertices), j) for (u, i, v, j) in g2.edges),
        loops=g2.loops,
    )
    union = SignatureGrid(
        q=q,
        vertices=g1.vertices + g2s.vertices,
        edges=g1.edges + g2s.edges,
        loops=g1.loops + g2.loops,
    )
    b = dict(b1)
    b.update({"o" + s: t for s, t in b2.items()})
    v1, v2 = holant_eval(g1, b1), holant_eval(g2, b2)
    assert abs(holant_eval(union, b) - v1 * v2) < 1e-8 * (1 + abs(v1 * v2))


def test_validation_rejects_bad_port_usage():
    g = SignatureGrid(q=2, vertices=("e",), edges=((0, 1, 0, 1), (0, 1, 0, 2)))
    with pytest.raises(ValueError):
        holant_eval(g, {"e": equality_signature(2, 2, 2)})
    g2 = SignatureGrid(q=2, vertices=("e",), edges=())
    with pytest.raises(ValueError):
        holant_eval(g2, {"e": equality_signature(2, 1, 1)})


def test_missing_binding_and_domain_mismatch():
    g = SignatureGrid(q=2, vertices=("e",), edges=((0, 1, 0, 1),))
    with pytest.raises(ValueError):
        holant_eval(g, {})
    with pytest.raises(ValueError):
        holant_eval(g, {"e": identity_signature(3)})


# -- contraction engine agrees with the definition -------------------------


def test_contracted_agrees_with_brute_on_random_corpus():
    rng = np.random.default_rng(33)
    for _ in range(200):
        g, b = random_closed_grid(rng)
        v1 = holant_eval(g, b)
        v2 = holant_eval_contracted(g, b)
        assert abs(v1 - v2) <= 1e-8 * (1 + abs(v1))


def test_gadget_signature_contract_agrees_with_brute():
    rng = np.random.default_rng(34)
    for _ in range(60):
        g, b = random_closed_grid(rng, qmax=3, vmax=3)
        # carve dangling stubs out of a closed grid by dropping edges
        if not g.edges:
            continue
        keep = list(g.edges)
        drop = keep.pop(int(rng.integers(0, len(keep))))
        u, i, v, j = drop
        grid = SignatureGrid(
            q=g.q,
            vertices=g.vertices,
            edges=tuple(keep),
            left_dangling=((u, i),),
            right_dangling=((v, j),),
            loops=g.loops,
        )
        k1 = gadget_signature(grid, b, method="brute")
        k2 = gadget_signature(grid, b, method="contract")
        assert k1.allclose(k2, 1e-8 * (1 + k1.norm()))


def test_single_vertex_gadget_signature_is_the_signature():
    rng = np.random.default_rng(35)
    t = random_tensor(rng, 3, 2, 1)
    g = SignatureGrid(
        q=3,
        vertices=("f",),
        edges=(),
        left_dangling=((0, 1), (0, 2)),
        right_dangling=((0, 1),),
    )
    assert gadget_signature(g, {"f": t}).allclose(t, 0)


def test_wire_gadget_signature_is_identity():
    g = SignatureGrid(
        q=4,
        vertices=("wire",),
        edges=(),
        left_dangling=((0, 1),),
        right_dangling=((0, 1),),
    )
    assert gadget_signature(g, {}).allclose(identity_signature(4), 0)


def test_dangling_slot_order_transposes_signature():
    rng = np.random.default_rng(36)
    t = random_tensor(rng, 2, 0, 2)
    base = dict(q=2, vertices=("f",), edges=())
    g12 = SignatureGrid(**base, right_dangling=((0, 1), (0, 2)))
    g21 = SignatureGrid(**base, right_dangling=((0, 2), (0, 1)))
    k12 = gadget_signature(g12, {"f": t})
    k21 = gadget_signature(g21, {"f": t})
    assert np.allclose(k12.array, k21.array.T)


def test_pairing_equals_holant_of_wired_closure():
    rng = np.random.default_rng(37)
    for _ in range(20):
        q = int(rng.integers(1, 4))
        l, r = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        a = random_tensor(rng, q, l, r)
        b = random_tensor(rng, q, r, l)
        ga = SignatureGrid(
            q=q,
            vertices=("a",),
            edges=(),
            left_dangling=tuple((0, i) for i in range(1, l + 1)),
            right_dangling=tuple((0, j) for j in range(1, r + 1)),
        )
        gb = SignatureGrid(
            q=q,
            vertices=("b",),
            edges=(),
            left_dangling=tuple((0, i) for i in range(1, r + 1)),
            right_dangling=tuple((0, j) for j in range(1, l + 1)),
        )
        # wire a's left slots onto b's right slots and vice versa
        closed = compose(ga, gb, [(i, i) for i in range(1, l + 1)])
        closed = compose(gb, closed, [(i, i) for i in range(1, r + 1)]) if r else closed
        # after both compositions the grid is closed; fall back if r == 0
        if closed.profile != (0, 0):
            continue
        val = holant_eval(closed, {"a": a, "b": b})
        want = pair(a, b)
        assert abs(val - want) <= 1e-9 * (1 + abs(want))


def test_compose_signature_is_contraction_of_signatures():
    rng = np.random.default_rng(38)
    q = 2
    a = random_tensor(rng, q, 2, 1)
    b = random_tensor(rng, q, 1, 2)
    ga = SignatureGrid(
        q=q,
        vertices=("a",),
        edges=(),
        left_dangling=((0, 1), (0, 2)),
        right_dangling=((0, 1),),
    )
    gb = SignatureGrid(
        q=q,
        vertices=("b",),
        edges=(),
        left_dangling=((0, 1),),
        right_dangling=((0, 1), (0, 2)),
    )
    comp = compose(ga, gb, [(1, 2)])  # a's left slot 1 onto b's right slot 2
    got = gadget_signature(comp, {"a": a, "b": b})
    want = np.einsum("xlr,bsx->lbrs", a.array, b.array)
    # remaining slots: a-left 2, b-left 1 then a-right 1, b-right 1
    assert got.shape == (2, 2)
    assert np.allclose(got.array, want)


def test_compose_disjoint_union_multiplies_holants():
    rng = np.random.default_rng(39)
    g1, b1 = random_closed_grid(rng)
    while g1.q != 2:
        g1, b1 = random_closed_grid(rng)
    g2, b2 = random_closed_grid(rng)
    while g2.q != 2:
        g2, b2 = random_closed_grid(rng)
    b2 = {"o" + s: t for s, t in b2.items()}
    g2 = SignatureGrid(
        q=2,
        vertices=tuple("o" + s for s in g2.vertices),
        edges=g2.edges,
        loops=g2.loops,
    )
    union = compose(g1, g2, [])
    b = {**b1, **b2}
    want = holant_eval(g1, b1) * holant_eval(g2, b2)
    assert abs(holant_eval(union, b) - want) <= 1e-8 * (1 + abs(want))


def test_compose_rejects_slot_reuse():
    g = SignatureGrid(
        q=2, vertices=("e",), edges=(), left_dangling=((0, 1), (0, 2))
    )
    h = SignatureGrid(
        q=2, vertices=("e2",), edges=(), right_dangling=((0, 1), (0, 2))
    )
    with pytest.raises(ValueError):
        compose(g, h, [(1, 1), (1, 2)])


def test_quantum_gadget_signature_is_linear():
    rng = np.random.default_rng(40)
    t = random_tensor(rng, 2, 1, 1)
    g = SignatureGrid(
        q=2, vertices=("f",), edges=(), left_dangling=((0, 1),), right_dangling=((0, 1),)
    )
    wire = SignatureGrid(
        q=2, vertices=("wire",), edges=(), left_dangling=((0, 1),), right_dangling=((0, 1),)
    )
    qg = QuantumGadget(((2.0, g), (-1.0, wire)))
    got = qg.signature({"f": t})
    want = 2 * t.array - np.eye(2)
    assert np.allclose(got.array, want)
    with pytest.raises(ValueError):
        QuantumGadget(())
    with pytest.raises(ValueError):
        QuantumGadget(((1.0, g), (1.0, SignatureGrid(q=2, vertices=(), edges=()))))


# -- enumeration ------------------------------------------------------------


def oracle_count_closed_grids(sigs, max_vertices):
    """Isomorphism classes of closed grids, by a second, unpruned method.

    Enumerates every vertex-labeled grid (all signature sequences, all
    port bijections) and keeps a matching iff it is lexicographically
    minimal among all signature-preserving relabelings.  Slow, simple.
    """
    total = 0
    ids = sorted(s for s, _ in sigs)
    shape_of = dict(sigs)
    for n in range(max_vertices + 1):
        for seq in itertools.combinations_with_replacement(ids, n):
            shapes = [shape_of[s] for s in seq]
            lports = [(v, i) for v, (l, _) in enumerate(shapes) for i in range(1, l + 1)]
            rports = [(v, j) for v, (_, r) in enumerate(shapes) for j in range(1, r + 1)]
            if len(lports) != len(rports):
                continue
            perms = [
                p
                for p in itertools.permutations(range(n))
                if all(seq[p[v]] == seq[v] for v in range(n))
            ]
            for rperm in itertools.permutations(range(len(rports))):
                edges = tuple(
                    sorted(
                        (lv, lp, rports[rperm[k]][0], rports[rperm[k]][1])
                        for k, (lv, lp) in enumerate(lports)
                    )
                )
                canonical = True
                for p in perms:
                    relab = tuple(sorted((p[u], i, p[v], j) for (u, i, v, j) in edges))
                    if relab < edges:
                        canonical = False
                        break
                if canonical:
                    total += 1
    return total


@pytest.mark.parametrize(
    "sigs,max_vertices",
    [
        ([("a", (1, 1))], 4),
        ([("ne", (2, 0)), ("f", (0, 4))], 5),
        ([("x", (2, 1)), ("y", (0, 3))], 4),
        ([("p", (1, 0)), ("q", (0, 1)), ("r", (1, 1))], 3),
    ],
)
def test_enumeration_count_matches_unpruned_oracle(sigs, max_vertices):
    got = [g for g in enumerate_grids(sigs, max_vertices, q=2) if g.loops == 0]
    assert len(got) == oracle_count_closed_grids(sigs, max_vertices)


def test_enumeration_single_matrix_counts_partitions():
    # closed grids over one (1,1) signature are disjoint unions of cycles,
    # so classes with <= n vertices count partitions of 0..n
    partitions = [1, 1, 2, 3, 5, 7, 11]
    for n in (3, 5):
        got = [g for g in enumerate_grids([("a", (1, 1))], n, q=2) if g.loops == 0]
        assert len(got) == sum(partitions[: n + 1])


def test_enumeration_yields_valid_distinct_deterministic():
    sigs = [("ne", (2, 0)), ("f", (0, 4))]
    run1 = list(enumerate_grids(sigs, 6, q=2))
    run2 = list(enumerate_grids(sigs, 6, q=2))
    assert run1 == run2
    seen = set()
    for g in run1:
        g.validate(dict(sigs))
        assert g.is_closed()
        key = (g.vertices, g.edges, g.loops)
        assert key not in seen
        seen.add(key)
    # loop variants come in pairs
    assert len(run1) == 2 * len([g for g in run1 if g.loops == 0])


def test_enumeration_loop_cap():
    grids = list(enumerate_grids([], 0, q=2, max_loops=3))
    assert [g.loops for g in grids] == [0, 1, 2, 3]


def test_gadget_enumeration_profiles_and_wires():
    # profile (1,1) over nothing: just the bare wire
    gs = list(enumerate_gadgets([], (1, 1), 0, q=3))
    assert len(gs) == 1
    assert gs[0].vertices == ("wire",)
    assert gadget_signature(gs[0], {}).allclose(identity_signature(3), 0)
    # profile (1,1) over one matrix signature: wire, a, a^2, ... by count
    gs = list(enumerate_gadgets([("a", (1, 1))], (1, 1), 2, q=2))
    assert len(gs) == 3
    rng = np.random.default_rng(41)
    a = random_tensor(rng, 2, 1, 1)
    sigs = sorted(
        (len(g.vertices) - list(g.vertices).count("wire"), gadget_signature(g, {"a": a}))
        for g in gs
        if True
    )
    mats = [s.matrix() for _, s in sigs]
    assert np.allclose(mats[0], np.eye(2))
    assert np.allclose(mats[1], a.matrix())
    assert np.allclose(mats[2], a.matrix() @ a.matrix())


def test_gadget_enumeration_validates_and_dedups():
    sigs = [("ne", (2, 0)), ("f", (0, 4))]
    gs = list(enumerate_gadgets(sigs, (0, 4), 3, q=2))
    shapes = dict(sigs)
    shapes["wire"] = (1, 1)
    seen = set()
    for g in gs:
        g.validate(shapes)
        assert g.profile == (0, 4)
        key = (g.vertices, g.edges, g.left_dangling, g.right_dangling)
        assert key not in seen
        seen.add(key)
    # every component must reach a dangling stub: no closed pieces
    assert all(len(g.vertices) > 0 for g in gs)


def test_gadget_enumeration_no_closed_components():
    # a (0,0)-shaped signature can only appear as a closed component
    gs = list(enumerate_gadgets([("s", (0, 0)), ("a", (1, 1))], (1, 1), 2, q=2))
    assert all("s" not in g.vertices for g in gs)


# -- polynomial --------------------------------------------------------------


def test_polynomial_two_vertex_example():
    # one binary covariant x read against two unary contravariant y copies
    g = SignatureGrid(
        q=2,
        vertices=("x", "y", "y"),
        edges=((1, 1, 0, 1), (2, 1, 0, 2)),
    )
    poly = holant_polynomial(g, {"x": (0, 2), "y": (1, 0)})
    expected = {
        (("x", (0, 0)), ("y", (0,)), ("y", (0,))): 1 + 0j,
        (("x", (0, 1)), ("y", (0,)), ("y", (1,))): 1 + 0j,
        (("x", (1, 0)), ("y", (0,)), ("y", (1,))): 1 + 0j,
        (("x", (1, 1)), ("y", (1,)), ("y", (1,))): 1 + 0j,
    }
    assert poly.monomials == expected


def test_polynomial_constant_for_loop_grid():
    g = SignatureGrid(q=2, vertices=(), edges=(), loops=1)
    poly = holant_polynomial(g, {})
    assert poly.monomials == {(): 2 + 0j}


def test_polynomial_evaluation_matches_holant():
    rng = np.random.default_rng(42)
    for _ in range(40):
        g, b = random_closed_grid(rng, qmax=2, vmax=3)
        poly = holant_polynomial(g, {s: t.shape for s, t in b.items()})
        v1 = poly.evaluate(b)
        v2 = holant_eval(g, b)
        assert abs(v1 - v2) <= 1e-8 * (1 + abs(v2))


def test_polynomial_merges_coefficients():
    # two equality vertices chained: assignments collapse onto q monomials
    g = SignatureGrid(q=2, vertices=("e", "e2"), edges=((0, 1, 1, 1), (0, 2, 1, 2)))
    poly = holant_polynomial(g, {"e": (2, 0), "e2": (0, 2)})
    # only diagonal assignments survive as distinct monomials plus crosses
    assert poly.num_monomials == 4
    # each monomial has one e entry and one e2 entry
    for mono in poly.monomials:
        assert [s for s, _ in mono] == ["e", "e2"]


def test_polynomial_monomial_cap():
    g = SignatureGrid(
        q=2,
        vertices=("u", "v"),
        edges=((0, 1, 1, 1), (0, 2, 1, 2)),
    )
    with pytest.raises(ValueError):
        holant_polynomial(g, {"u": (2, 0), "v": (0, 2)}, cap=2)
