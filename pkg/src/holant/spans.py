"""Bounded gadget spans and the pairing tests built on them.

The span of a signature set at a profile (l,r) collects the signatures of
all gadgets over the set (plus bare wires) with at most a given number of
vertices.  Rank decisions on the pairing Gram matrix use the singular
value threshold 1e-7 * max(sigma_max, 1); verdicts are always relative to
the vertex bound, since a larger gadget could still change the answer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from holant.grids import (
    QuantumGadget,
    SignatureGrid,
    enumerate_gadgets,
    enumerate_grids,
    gadget_signature,
    holant_eval,
    holant_eval_contracted,
)
from holant.tensors import MixedTensor, equality_signature, pair

RANK_TOL = 1e-7
INDEP_TOL = 1e-9


@dataclass
class GadgetSpan:
    """A maximal independent set of bounded-gadget signatures."""

    q: int
    profile: tuple[int, int]
    max_vertices: int
    basis: list[MixedTensor]
    witnesses: list[SignatureGrid]
    gadgets_enumerated: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def stack(self) -> np.ndarray:
        n = self.q ** (self.profile[0] + self.profile[1])
        if not self.basis:
            return np.zeros((0, n), dtype=np.complex128)
        return np.array([b.entries for b in self.basis])

    def coefficients_for(self, t: MixedTensor) -> tuple[np.ndarray, float]:
        """Least-squares expansion of t over the basis; (coeffs, residual)."""
        if not self.basis:
            return np.zeros(0, dtype=np.complex128), float(t.norm())
        sol, *_ = np.linalg.lstsq(self.stack().T, t.entries, rcond=None)
        res = float(np.linalg.norm(self.stack().T @ sol - t.entries))
        return sol, res

    def contains(self, t: MixedTensor, tol: float = 1e-7) -> bool:
        _, res = self.coefficients_for(t)
        return res <= tol * max(1.0, t.norm())


def _closed_structures(sig_shapes, max_vertices, q):
    """Closed grids with at least one vertex, for the (0,0) profile.

    The vertexless grids contribute bare constants (1 and powers of q),
    so the interesting (0,0) span is what the vertex-bearing grids add.
    """
    return [g for g in enumerate_grids(sig_shapes, max_vertices, q) if g.vertices]


def build_span(
    fs: dict[str, MixedTensor],
    profile: tuple[int, int],
    max_vertices: int,
    indep_tol: float = INDEP_TOL,
    q: int | None = None,
) -> GadgetSpan:
    """Span of gadget signatures over fs and bare wires, at the profile.

    Keeps a maximal linearly independent subset, first come first kept,
    in the deterministic enumeration order; each basis element carries
    its witness gadget.  Bare wires do not count against max_vertices.
    """
    qs = {t.q for t in fs.values()}
    if q is not None:
        qs.add(q)
    if len(qs) > 1:
        raise ValueError("signatures must share a domain size")
    if not qs:
        raise ValueError("need a domain size; supply q or a signature")
    q = qs.pop()
    sig_shapes = sorted((name, t.shape) for name, t in fs.items())
    l, r = profile
    if (l, r) == (0, 0):
        gadgets = _closed_structures(sig_shapes, max_vertices, q)
    else:
        gadgets = enumerate_gadgets(sig_shapes, profile, max_vertices, q)
    basis: list[MixedTensor] = []
    witnesses: list[SignatureGrid] = []
    ortho: list[np.ndarray] = []
    count = 0
    for g in gadgets:
        count += 1
        if (l, r) == (0, 0):
            sig = MixedTensor.scalar(q, holant_eval_contracted(g, fs))
        else:
            sig = gadget_signature(g, fs)
        v = sig.entries.copy()
        for u in ortho:
            v -= (u.conj() @ v) * u
        res = float(np.linalg.norm(v))
        if res > indep_tol * max(1.0, sig.norm()):
            basis.append(sig)
            witnesses.append(g)
            ortho.append(v / res)
            if len(basis) == q ** (l + r):
                break
    return GadgetSpan(
        q=q,
        profile=profile,
        max_vertices=max_vertices,
        basis=basis,
        witnesses=witnesses,
        gadgets_enumerated=count,
    )


# -- pairing nondegeneracy ----------------------------------------------------


@dataclass
class GramReport:
    """Rank decision for the pairing between opposite-profile spans."""

    verdict: str  # nonvanishing_at_bound | vanishing_witness | inconclusive
    profile: tuple[int, int]
    max_vertices: int
    dim: int
    dim_dual: int
    rank: int
    singular_values: np.ndarray
    witness: QuantumGadget | None
    witness_signature: MixedTensor | None
    max_pairing_residual: float


def _gram_pass(span_lr: GadgetSpan, span_rl: GadgetSpan, rank_tol: float):
    m = np.zeros((span_lr.dim, span_rl.dim), dtype=np.complex128)
    for i, a in enumerate(span_lr.basis):
        for j, b in enumerate(span_rl.basis):
            m[i, j] = pair(a, b)
    if min(m.shape) == 0:
        sing = np.zeros(0)
        null = np.eye(span_lr.dim, dtype=np.complex128)
        return m, sing, 0, [null[:, k] for k in range(span_lr.dim)]
    u, sing, vh = np.linalg.svd(m)
    thresh = rank_tol * max(float(sing[0]), 1.0)
    rank = int(np.sum(sing > thresh))
    null_vecs = [np.conj(u[:, k]) for k in range(rank, span_lr.dim)]
    return m, sing, rank, null_vecs


def gram_nondegenerate(
    fs: dict[str, MixedTensor],
    profile: tuple[int, int],
    max_vertices: int,
    rank_tol: float = RANK_TOL,
) -> GramReport:
    """Is the pairing nondegenerate on the bounded span at this profile?

    Forms spans at (l,r) and (r,l), pairs their bases, and takes the
    numerical row rank.  A rank defect yields a combination of gadgets
    whose signature pairs to zero against the entire opposite span; if
    that combination is itself numerically zero the basis was redundant,
    so the span is re-pruned once with a coarser independence cut before
    giving up as inconclusive.
    """
    l, r = profile
    attempts = (INDEP_TOL, RANK_TOL)
    for attempt, indep_tol in enumerate(attempts):
        span_lr = build_span(fs, (l, r), max_vertices, indep_tol=indep_tol)
        span_rl = build_span(fs, (r, l), max_vertices, indep_tol=indep_tol)
        m, sing, rank, null_vecs = _gram_pass(span_lr, span_rl, rank_tol)
        if rank == span_lr.dim:
            return GramReport(
                verdict="nonvanishing_at_bound",
                profile=profile,
                max_vertices=max_vertices,
                dim=span_lr.dim,
                dim_dual=span_rl.dim,
                rank=rank,
                singular_values=sing,
                witness=None,
                witness_signature=None,
                max_pairing_residual=0.0,
            )
        # rank defect: pick the null combination with the largest signature
        best = None
        for c in null_vecs:
            sig_arr = span_lr.stack().T @ c
            norm = float(np.linalg.norm(sig_arr))
            if best is None or norm > best[0]:
                best = (norm, c, sig_arr)
        norm, c, sig_arr = best
        scale = max(1.0, max((b.norm() for b in span_lr.basis), default=0.0))
        if norm <= rank_tol * scale:
            if attempt + 1 < len(attempts):
                continue  # spurious kernel from basis redundancy: re-prune
            return GramReport(
                verdict="inconclusive",
                profile=profile,
                max_vertices=max_vertices,
                dim=span_lr.dim,
                dim_dual=span_rl.dim,
                rank=rank,
                singular_values=sing,
                witness=None,
                witness_signature=None,
                max_pairing_residual=float("nan"),
            )
        witness_sig = MixedTensor(span_lr.q, l, r, sig_arr)
        residual = max(
            (abs(pair(witness_sig, b)) for b in span_rl.basis), default=0.0
        )
        terms = tuple(
            (complex(ci), span_lr.witnesses[i])
            for i, ci in enumerate(c)
            if abs(ci) > 1e-12
        )
        return GramReport(
            verdict="vanishing_witness",
            profile=profile,
            max_vertices=max_vertices,
            dim=span_lr.dim,
            dim_dual=span_rl.dim,
            rank=rank,
            singular_values=sing,
            witness=QuantumGadget(terms),
            witness_signature=witness_sig,
            max_pairing_residual=float(residual),
        )


# -- indistinguishability ------------------------------------------------------


@dataclass
class IndistinguishabilityReport:
    verdict: str  # indistinguishable_at_bound | distinguished
    max_vertices: int
    grids_checked: int
    max_difference: float
    witness_grid: SignatureGrid | None
    value_f: complex | None
    value_g: complex | None


def _check_correspondence(fs, gs, bijection):
    if set(bijection) != set(fs) or set(bijection.values()) != set(gs):
        raise ValueError("bijection must map the first id set onto the second")
    for fid, gid in bijection.items():
        if fs[fid].shape != gs[gid].shape:
            raise ValueError(
                f"{fid!r} has shape {fs[fid].shape} but {gid!r} has {gs[gid].shape}"
            )
        if fs[fid].q != gs[gid].q:
            raise ValueError("domain sizes differ across the correspondence")


def check_indistinguishable(
    fs: dict[str, MixedTensor],
    gs: dict[str, MixedTensor],
    bijection: dict[str, str],
    max_vertices: int,
    tol: float = 0.0,
    method: str = "contract",
) -> IndistinguishabilityReport:
    """Compare Holant values grid by grid under the id correspondence.

    Walks every closed grid over the first set up to the bound and
    evaluates it under both bindings; the first difference above
    tol * (1 + |value|) is returned as a witness.
    """
    _check_correspondence(fs, gs, bijection)
    evaluate = holant_eval if method == "brute" else holant_eval_contracted
    gs_as_f = {fid: gs[gid] for fid, gid in bijection.items()}
    sig_shapes = sorted((name, t.shape) for name, t in fs.items())
    q = next(iter(fs.values())).q
    count = 0
    max_diff = 0.0
    for grid in enumerate_grids(sig_shapes, max_vertices, q):
        vf = evaluate(grid, fs)
        vg = evaluate(grid, gs_as_f)
        count += 1
        diff = abs(vf - vg)
        if diff > tol * (1 + abs(vf)):
            return IndistinguishabilityReport(
                verdict="distinguished",
                max_vertices=max_vertices,
                grids_checked=count,
                max_difference=diff,
                witness_grid=grid,
                value_f=vf,
                value_g=vg,
            )
        max_diff = max(max_diff, diff)
    return IndistinguishabilityReport(
        verdict="indistinguishable_at_bound",
        max_vertices=max_vertices,
        grids_checked=count,
        max_difference=max_diff,
        witness_grid=None,
        value_f=None,
        value_g=None,
    )


# -- covanishing ----------------------------------------------------------------


@dataclass
class CovanishingReport:
    verdict: str  # covanishing_at_bound | counterexample
    profile: tuple[int, int]
    max_vertices: int
    structures_checked: int
    direction: str | None  # which side vanished: "first" or "second"
    witness: QuantumGadget | None
    witness_signature_f: MixedTensor | None
    witness_signature_g: MixedTensor | None
    max_cross_residual: float


def check_covanishing(
    fs: dict[str, MixedTensor],
    gs: dict[str, MixedTensor],
    bijection: dict[str, str],
    profile: tuple[int, int],
    max_vertices: int,
    rank_tol: float = RANK_TOL,
    nonzero_tol: float = 1e-6,
) -> CovanishingReport:
    """Do zero combinations transfer across the correspondence at this profile?

    Builds paired spans from identical gadget structures, computes the
    null space of each side's signature stack, and checks that every null
    combination is also null on the other side.  A null vector of one
    side whose image is bounded away from zero is a counterexample.
    """
    _check_correspondence(fs, gs, bijection)
    gs_as_f = {fid: gs[gid] for fid, gid in bijection.items()}
    sig_shapes = sorted((name, t.shape) for name, t in fs.items())
    q = next(iter(fs.values())).q
    l, r = profile
    if (l, r) == (0, 0):
        structures = list(enumerate_grids(sig_shapes, max_vertices, q))
        sig_f = [MixedTensor.scalar(q, holant_eval_contracted(g, fs)) for g in structures]
        sig_g = [MixedTensor.scalar(q, holant_eval_contracted(g, gs_as_f)) for g in structures]
    else:
        structures = list(enumerate_gadgets(sig_shapes, profile, max_vertices, q))
        sig_f = [gadget_signature(g, fs) for g in structures]
        sig_g = [gadget_signature(g, gs_as_f) for g in structures]
    if not structures:
        return CovanishingReport(
            verdict="covanishing_at_bound",
            profile=profile,
            max_vertices=max_vertices,
            structures_checked=0,
            direction=None,
            witness=None,
            witness_signature_f=None,
            witness_signature_g=None,
            max_cross_residual=0.0,
        )
    stack_f = np.array([s.entries for s in sig_f])
    stack_g = np.array([s.entries for s in sig_g])
    worst = (0.0, None, None)
    for direction, a, b in (("first", stack_f, stack_g), ("second", stack_g, stack_f)):
        if a.shape[0] == 0:
            continue
        u, sing, vh = np.linalg.svd(a)
        smax = float(sing[0]) if sing.size else 0.0
        thresh = rank_tol * max(smax, 1.0)
        rank = int(np.sum(sing > thresh))
        scale_b = max(1.0, float(np.max(np.abs(b))) if b.size else 0.0)
        for k in range(rank, a.shape[0]):
            c = np.conj(u[:, k])
            cross = float(np.linalg.norm(c @ b))
            if cross > worst[0]:
                worst = (cross, direction, c)
    cross, direction, c = worst
    scale = max(
        1.0,
        float(np.max(np.abs(stack_f))) if stack_f.size else 0.0,
        float(np.max(np.abs(stack_g))) if stack_g.size else 0.0,
    )
    if direction is None or cross <= nonzero_tol * scale:
        return CovanishingReport(
            verdict="covanishing_at_bound",
            profile=profile,
            max_vertices=max_vertices,
            structures_checked=len(structures),
            direction=None,
            witness=None,
            witness_signature_f=None,
            witness_signature_g=None,
            max_cross_residual=cross,
        )
    terms = tuple(
        (complex(ci), structures[i]) for i, ci in enumerate(c) if abs(ci) > 1e-12
    )
    wf = MixedTensor(q, l, r, (c @ stack_f).reshape((q,) * (l + r)))
    wg = MixedTensor(q, l, r, (c @ stack_g).reshape((q,) * (l + r)))
    return CovanishingReport(
        verdict="counterexample",
        profile=profile,
        max_vertices=max_vertices,
        structures_checked=len(structures),
        direction=direction,
        witness=QuantumGadget(terms),
        witness_signature_f=wf,
        witness_signature_g=wg,
        max_cross_residual=cross,
    )


# -- conjugate dual certificates --------------------------------------------------


@dataclass
class DualCertificate:
    dual: MixedTensor
    pairing_value: complex
    padded_norm_sq: float
    witness: QuantumGadget
    witness_bindings: dict[str, MixedTensor]


def _find_member(fs: dict[str, MixedTensor], target: MixedTensor, tol: float):
    for name in sorted(fs):
        t = fs[name]
        if t.q == target.q and t.shape == target.shape and t.allclose(target, tol):
            return name
    return None


def dual_nonvanishing_certificate(
    fs: dict[str, MixedTensor], k: MixedTensor, tol: float = 1e-8
) -> DualCertificate:
    """Build a partner gadget that pairs with k to a positive number.

    Needs fs closed under entrywise conjugation, the contravariant binary
    equality available to raise slots, and (when k has left slots) some
    nonsingular covariant binary signature to pad them.  The dual is the
    conjugated, padded reflection of k; its pairing with k equals the
    squared norm of the padded tensor, which is positive for nonzero k.
    """
    if not fs:
        raise ValueError("need a nonempty signature set")
    q = k.q
    for name, t in fs.items():
        if t.q != q:
            raise ValueError("signature domain sizes must match k")
        if _find_member(fs, t.conj(), tol) is None:
            raise ValueError(
                f"set is not conjugate closed: no partner for {name!r}"
            )
    if k.norm() == 0:
        raise ValueError("k is zero; every pairing with it vanishes")
    eq20 = equality_signature(q, 2, 0)
    eq_name = _find_member(fs, eq20, tol)
    if eq_name is None:
        raise ValueError("contravariant binary equality is not available in the set")
    l, r = k.shape

    pad_name = None
    if l > 0:
        eq02 = equality_signature(q, 0, 2)
        pad_name = _find_member(fs, eq02, tol)
        if pad_name is None:
            for name in sorted(fs):
                t = fs[name]
                if t.shape == (0, 2):
                    sing = np.linalg.svd(t.matrix().reshape(q, q), compute_uv=False)
                    if sing[-1] > 1e-9 * max(1.0, sing[0]):
                        pad_name = name
                        break
        if pad_name is None:
            raise ValueError(
                "no nonsingular covariant binary signature available for padding"
            )
    amat = fs[pad_name].array.reshape(q, q) if pad_name else None

    # padded = k with each left slot lowered through the pad matrix
    arr = k.array
    for i in range(l):
        arr = np.tensordot(amat, arr, axes=([1], [i]))
        arr = np.moveaxis(arr, 0, i)
    padded_norm_sq = float(np.sum(np.abs(arr) ** 2))
    if padded_norm_sq <= (tol * max(1.0, k.norm())) ** 2:
        raise ValueError("padding annihilated k; the pad signature is too singular")

    dual_arr = np.conj(arr)
    for _ in range(l):
        dual_arr = np.tensordot(dual_arr, amat, axes=([0], [0]))
    dual = MixedTensor(q, r, l, dual_arr)
    value = pair(k, dual)
    if abs(value - padded_norm_sq) > 1e-8 * (1 + padded_norm_sq):
        raise ArithmeticError("dual pairing failed to reproduce the padded norm")

    # witness gadget: conj(k) raised through equalities, padded both ways
    conj_pad_name = _find_member(fs, fs[pad_name].conj(), tol) if pad_name else None
    core_name = _find_member(fs, k.conj(), tol)
    if core_name is None:
        core_name = "dual_core"
        while core_name in fs:
            core_name += "_"
    bindings = {core_name: k.conj(), eq_name: eq20}
    if pad_name:
        bindings[pad_name] = fs[pad_name]
        bindings[conj_pad_name] = fs[conj_pad_name]
    vertices = [core_name]
    edges = []
    right_dangling = []
    left_dangling = []
    for i in range(1, l + 1):
        a_i = len(vertices)
        vertices.append(pad_name)
        ca_i = len(vertices)
        vertices.append(conj_pad_name)
        e_i = len(vertices)
        vertices.append(eq_name)
        edges.append((0, i, ca_i, 2))  # conj core's left slot into conj pad
        edges.append((e_i, 1, a_i, 1))  # equality bridges the two pads
        edges.append((e_i, 2, ca_i, 1))
        right_dangling.append((a_i, 2))
    for j in range(1, r + 1):
        e_j = len(vertices)
        vertices.append(eq_name)
        edges.append((e_j, 2, 0, j))  # raise conj core's right slot
        left_dangling.append((e_j, 1))
    grid = SignatureGrid(
        q=q,
        vertices=tuple(vertices),
        edges=tuple(edges),
        left_dangling=tuple(left_dangling),
        right_dangling=tuple(right_dangling),
    )
    witness = QuantumGadget(((1.0, grid),))
    return DualCertificate(
        dual=dual,
        pairing_value=value,
        padded_norm_sq=padded_norm_sq,
        witness=witness,
        witness_bindings=bindings,
    )
