"""Simultaneous similarity recovery for matrix signature sets.

For sets of (1,1) signatures the gadget span is the unital matrix algebra
generated by the set, the pairing is the trace form, and equality of all
word traces characterizes simultaneous similarity (for trace-nondegenerate
sets).  recover_transform follows the constructive proof: verify the
algebraic preconditions, refine a partition of the domain by splitting
eigenvalue clusters of corresponding elements, then align the resulting
blocks one prefix at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from holant.tensors import MixedTensor
from holant.transforms import HoloTransform

CLOSURE_TOL = 1e-9
RANK_TOL = 1e-7
CLUSTER_TOL = 1e-6
DEFAULT_MAX_WORDS = 20000


def _as_matrix(value, q=None):
    if isinstance(value, MixedTensor):
        if value.shape != (1, 1):
            raise ValueError(f"need a (1,1) signature, got shape {value.shape}")
        m = value.matrix()
    else:
        m = np.asarray(value, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrices must be square")
    if q is not None and m.shape[0] != q:
        raise ValueError("matrices must share one domain size")
    return m.astype(np.complex128)


def _normalize_sets(fs, gs):
    if set(fs) != set(gs):
        raise ValueError("the two sets must use the same signature ids")
    names = list(fs)
    f_mats = {}
    g_mats = {}
    q = None
    for name in names:
        m = _as_matrix(fs[name], q)
        q = m.shape[0]
        f_mats[name] = m
        g_mats[name] = _as_matrix(gs[name], q)
    if q is None:
        raise ValueError("need at least one matrix to fix the domain size")
    return q, names, f_mats, g_mats


# -- algebra closure -------------------------------------------------------------


@dataclass
class MatrixAlgebra:
    """Word-indexed basis of the unital algebra generated by the matrices."""

    q: int
    generators: dict[str, np.ndarray]
    words: list[tuple[str, ...]]
    basis: list[np.ndarray]
    gram: np.ndarray = field(default=None)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __post_init__(self):
        if self.gram is None:
            n = len(self.basis)
            g = np.zeros((n, n), dtype=np.complex128)
            for i, a in enumerate(self.basis):
                for j, b in enumerate(self.basis):
                    g[i, j] = np.trace(a @ b)
            self.gram = g


def algebra_closure(gens: dict[str, np.ndarray], tol: float = CLOSURE_TOL,
                    q: int | None = None) -> MatrixAlgebra:
    """Close a named matrix set under products, breadth-first by word length.

    The identity (empty word) seeds the basis; a word enters iff its matrix
    increases the span's rank.  Terminates at dimension q^2 at the latest.
    """
    mats = {}
    for name, m in gens.items():
        mm = _as_matrix(m, q)
        q = mm.shape[0]
        mats[name] = mm
    if q is None:
        raise ValueError("empty generator set needs an explicit domain size")
    names = list(mats)
    words = [()]
    basis = [np.eye(q, dtype=np.complex128)]
    ortho = [basis[0].ravel() / np.sqrt(q)]
    frontier = [0]
    while frontier and len(basis) < q * q:
        next_frontier = []
        for idx in frontier:
            for name in names:
                cand = basis[idx] @ mats[name]
                v = cand.ravel().copy()
                for u in ortho:
                    v -= (u.conj() @ v) * u
                res = np.linalg.norm(v)
                if res > tol * max(1.0, np.linalg.norm(cand)):
                    words.append(words[idx] + (name,))
                    basis.append(cand)
                    ortho.append(v / res)
                    next_frontier.append(len(basis) - 1)
                    if len(basis) == q * q:
                        break
            if len(basis) == q * q:
                break
        frontier = next_frontier
    return MatrixAlgebra(q=q, generators=mats, words=words, basis=basis)


@dataclass
class NonvanishingReport:
    """Trace-form rank decision; falsy when the form is degenerate."""

    nonvanishing: bool
    dim: int
    rank: int
    singular_values: np.ndarray
    radical: list[np.ndarray]
    radical_coefficients: list[np.ndarray]

    def __bool__(self) -> bool:
        return self.nonvanishing


def is_11_nonvanishing(algebra: MatrixAlgebra, rank_tol: float = RANK_TOL) -> NonvanishingReport:
    """Full trace-Gram rank means no algebra member pairs to zero with all.

    On failure the kernel of the Gram matrix gives radical elements: each
    is a nonzero algebra member trace-orthogonal to the whole algebra.
    """
    u, sing, vh = np.linalg.svd(algebra.gram)
    thresh = rank_tol * max(float(sing[0]) if sing.size else 0.0, 1.0)
    rank = int(np.sum(sing > thresh))
    radical = []
    coeffs = []
    for k in range(rank, algebra.dim):
        c = np.conj(u[:, k])
        coeffs.append(c)
        radical.append(sum(ci * b for ci, b in zip(c, algebra.basis)))
    return NonvanishingReport(
        nonvanishing=rank == algebra.dim,
        dim=algebra.dim,
        rank=rank,
        singular_values=sing,
        radical=radical,
        radical_coefficients=coeffs,
    )


# -- trace words -----------------------------------------------------------------


@dataclass
class TraceWordReport:
    verdict: str  # equal_at_bound | mismatch
    max_len: int
    length_reached: int
    words_checked: int
    witness_word: tuple[str, ...] | None
    trace_f: complex | None
    trace_g: complex | None


def trace_words_equal(
    fs,
    gs,
    max_len: int | None = None,
    tol: float = 1e-8,
    max_words: int = DEFAULT_MAX_WORDS,
) -> TraceWordReport:
    """Compare tr(w(F)) with tr(w(G)) over all words up to max_len.

    Breadth-first in word length with generators in supplied order, so the
    first failure is the lowest word in enumeration order.  Word count is
    capped at max_words; the reached length is reported either way and the
    pass verdict is only relative to it.

    Each generator pair is rescaled to unit Frobenius norm before
    multiplying, which a shared trace survives, so tol measures the
    normalized traces and long words of large matrices stay comparable in
    floating point.  Reported traces are for the matrices as given.
    """
    q, names, f_mats, g_mats = _normalize_sets(fs, gs)
    if max_len is None:
        max_len = q * q
    scales = {}
    for name in names:
        c = max(np.linalg.norm(f_mats[name]), np.linalg.norm(g_mats[name]))
        scales[name] = c if c > 0 else 1.0
        f_mats[name] = f_mats[name] / scales[name]
        g_mats[name] = g_mats[name] / scales[name]
    eye = np.eye(q, dtype=np.complex128)
    level = [((), eye, eye, 1.0)]
    checked = 0
    length_reached = 0
    for length in range(1, max_len + 1):
        next_level = []
        for word, mf, mg, scale in level:
            for name in names:
                wf = mf @ f_mats[name]
                wg = mg @ g_mats[name]
                tf = complex(np.trace(wf))
                tg = complex(np.trace(wg))
                checked += 1
                if abs(tf - tg) > tol * (1 + max(abs(tf), abs(tg))):
                    word_scale = scale * scales[name]
                    return TraceWordReport(
                        verdict="mismatch",
                        max_len=max_len,
                        length_reached=length,
                        words_checked=checked,
                        witness_word=word + (name,),
                        trace_f=tf * word_scale,
                        trace_g=tg * word_scale,
                    )
                next_level.append((word + (name,), wf, wg, scale * scales[name]))
                if checked >= max_words:
                    return TraceWordReport(
                        verdict="equal_at_bound",
                        max_len=max_len,
                        length_reached=length,
                        words_checked=checked,
                        witness_word=None,
                        trace_f=None,
                        trace_g=None,
                    )
        level = next_level
        length_reached = length
        if not level:
            break
    return TraceWordReport(
        verdict="equal_at_bound",
        max_len=max_len,
        length_reached=length_reached,
        words_checked=checked,
        witness_word=None,
        trace_f=None,
        trace_g=None,
    )


# -- paired algebra ----------------------------------------------------------------


@dataclass
class PairedAlgebra:
    """One word basis carrying both sides' images.

    failure records the first covanishing or trace inconsistency found
    while mirroring the closure, as a machine-readable dict.
    """

    q: int
    names: list[str]
    words: list[tuple[str, ...]]
    f_generators: dict[str, np.ndarray]
    g_generators: dict[str, np.ndarray]
    f_images: list[np.ndarray]
    g_images: list[np.ndarray]
    failure: dict | None


def build_paired_algebra(fs, gs, tol: float = 1e-7) -> PairedAlgebra:
    """Mirror the F-side word closure on the G side and cross-check it.

    The correspondence sum(c_w w(F)) <-> sum(c_w w(G)) is well defined in
    both directions iff the G-images of the basis words stay independent
    and every one-step word extension expands with the same coefficients
    on both sides.  Each check failure is a covanishing witness.
    """
    q, names, f_mats, g_mats = _normalize_sets(fs, gs)
    alg_f = algebra_closure(f_mats)
    g_images = [_word_matrix(w, g_mats, q) for w in alg_f.words]
    paired = PairedAlgebra(
        q=q,
        names=names,
        words=list(alg_f.words),
        f_generators=f_mats,
        g_generators=g_mats,
        f_images=list(alg_f.basis),
        g_images=g_images,
        failure=None,
    )
    scale = max(1.0, *(np.linalg.norm(m) for m in paired.f_images),
                *(np.linalg.norm(m) for m in paired.g_images))
    stack_f = np.array([m.ravel() for m in paired.f_images])
    stack_g = np.array([m.ravel() for m in paired.g_images])

    # G-images of independent F-words must stay independent
    sing = np.linalg.svd(stack_g, compute_uv=False)
    if sing.size and sing[-1] <= RANK_TOL * max(float(sing[0]), 1.0):
        u = np.linalg.svd(stack_g)[0]
        c = np.conj(u[:, -1])
        paired.failure = {
            "kind": "not_covanishing",
            "direction": "second",
            "words": list(alg_f.words),
            "coefficients": c.tolist(),
            "residual": float(np.linalg.norm(c @ stack_f)),
        }
        return paired

    # one-step extensions must expand identically on both sides
    pinv = np.linalg.pinv(stack_f.T)
    for idx, w in enumerate(alg_f.words):
        for name in names:
            ext_f = paired.f_images[idx] @ f_mats[name]
            ext_g = paired.g_images[idx] @ g_mats[name]
            c = pinv @ ext_f.ravel()
            res_f = np.linalg.norm(stack_f.T @ c - ext_f.ravel())
            if res_f > 10 * CLOSURE_TOL * max(1.0, scale):
                # closure invariant violated; treat as internal error
                raise ArithmeticError("algebra closure lost a word expansion")
            res_g = np.linalg.norm(stack_g.T @ c - ext_g.ravel())
            if res_g > tol * max(1.0, scale):
                paired.failure = {
                    "kind": "not_covanishing",
                    "direction": "first",
                    "word": w + (name,),
                    "words": list(alg_f.words),
                    "coefficients": c.tolist(),
                    "residual": float(res_g),
                }
                return paired
            tf = complex(np.trace(ext_f))
            tg = complex(np.trace(ext_g))
            if abs(tf - tg) > tol * (1 + max(abs(tf), abs(tg))):
                paired.failure = {
                    "kind": "trace_mismatch",
                    "word": w + (name,),
                    "trace_f": tf,
                    "trace_g": tg,
                }
                return paired
    return paired


def _word_matrix(word, mats, q):
    m = np.eye(q, dtype=np.complex128)
    for name in word:
        m = m @ mats[name]
    return m


# -- partition refinement ------------------------------------------------------------


@dataclass
class PartitionState:
    """Blocks of the domain with the transforms accumulated on each side."""

    blocks: list[list[int]]
    trivial: list[bool]
    t_acc: np.ndarray  # applied to the first side
    u_acc: np.ndarray  # applied to the second side


class _VerificationFailure(Exception):
    def __init__(self, witness: dict):
        super().__init__(witness.get("reason", "verification failed"))
        self.witness = witness


def _cluster_eigenvalues(vals, rel_tol=CLUSTER_TOL):
    """Greedy merge of eigenvalues within rel_tol of each other.

    Returns a list of (representative, multiplicity) sorted by real part
    then imaginary part of the representative.
    """
    vals = np.asarray(vals)
    scale = max(1.0, float(np.max(np.abs(vals))) if vals.size else 0.0)
    parent = list(range(len(vals)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if abs(vals[i] - vals[j]) <= rel_tol * scale:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(len(vals)):
        groups.setdefault(find(i), []).append(vals[i])
    clusters = [(complex(np.mean(g)), len(g)) for g in groups.values()]
    clusters.sort(key=lambda c: (c[0].real, c[0].imag))
    return clusters


def _match_clusters(cf, cg, scale, tol=1e-5):
    """Do the two cluster lists agree as multisets of (value, multiplicity)?"""
    if len(cf) != len(cg):
        return False
    used = [False] * len(cg)
    for rep, mult in cf:
        hit = None
        for j, (rep_g, mult_g) in enumerate(cg):
            if used[j] or mult_g != mult:
                continue
            if abs(rep - rep_g) <= tol * max(1.0, scale):
                hit = j
                break
        if hit is None:
            return False
        used[hit] = True
    return True


def _separate_block(m, lam, delta):
    """Similarity making m block-diagonal: non-lam part first, lam part last.

    Sorted complex Schur puts the far-from-lam eigenvalues top-left; one
    Sylvester solve then removes the coupling block.
    """
    t, z, sdim = scipy.linalg.schur(
        m, output="complex", sort=lambda x: abs(x - lam) > delta
    )
    n = m.shape[0]
    if sdim in (0, n):
        raise _VerificationFailure(
            {"reason": "eigenvalue separation failed", "lambda": complex(lam)}
        )
    a11 = t[:sdim, :sdim]
    a12 = t[:sdim, sdim:]
    a22 = t[sdim:, sdim:]
    r = scipy.linalg.solve_sylvester(a11, -a22, -a12)
    p = np.eye(n, dtype=np.complex128)
    p[:sdim, sdim:] = r
    s = z @ p  # s^{-1} m s is block diagonal
    return s, sdim


def _annihilating_poly(clusters):
    """Coefficients (np.poly order) of prod (t - rep)^mult over the clusters."""
    roots = []
    for rep, mult in clusters:
        roots.extend([rep] * mult)
    return np.poly(np.array(roots, dtype=np.complex128))


def _poly_eval(coeffs, m):
    n = m.shape[0]
    out = np.zeros_like(m)
    for c in coeffs:
        out = out @ m + c * np.eye(n, dtype=np.complex128)
    return out


def _off_identity(m):
    """Distance of m from span{I} (orthogonal projection residual)."""
    n = m.shape[0]
    lam = np.trace(m) / n
    return float(np.linalg.norm(m - lam * np.eye(n)))


def _lift(block_mat, block, q):
    s = np.eye(q, dtype=np.complex128)
    s[np.ix_(block, block)] = block_mat
    return s


def _refine_partition(paired: PairedAlgebra, rng, max_random_tries=40):
    """Split the domain until every block's compressed span is scalar.

    Each split conjugates both sides by a block-supported separation and
    verifies the new subdomain projector is realized as a corresponding
    pair via the annihilating-polynomial construction.
    """
    q = paired.q
    f_imgs = [m.copy() for m in paired.f_images]
    g_imgs = [m.copy() for m in paired.g_images]
    state = PartitionState(
        blocks=[list(range(q))],
        trivial=[False],
        t_acc=np.eye(q, dtype=np.complex128),
        u_acc=np.eye(q, dtype=np.complex128),
    )
    while not all(state.trivial):
        i = state.trivial.index(False)
        block = state.blocks[i]
        ix = np.ix_(block, block)
        comp_f = [m[ix] for m in f_imgs]
        comp_g = [m[ix] for m in g_imgs]
        if all(
            _off_identity(c) <= 1e-7 * max(1.0, np.linalg.norm(c)) for c in comp_f
        ):
            for cf, cg in zip(comp_f, comp_g):
                if np.linalg.norm(cf - cg) > 1e-6 * max(
                    1.0, np.linalg.norm(cf), np.linalg.norm(cg)
                ):
                    raise _VerificationFailure(
                        {
                            "reason": "scalar blocks disagree",
                            "block": list(block),
                            "residual": float(np.linalg.norm(cf - cg)),
                        }
                    )
            state.trivial[i] = True
            continue
        split = _find_split(comp_f, comp_g, rng, max_random_tries)
        if split is None:
            raise _VerificationFailure(
                {"reason": "no splitting element found", "block": list(block)}
            )
        mf, mg, lam, mult, delta = split
        sf, x_size = _separate_block(mf, lam, delta)
        sg, x_size_g = _separate_block(mg, lam, delta)
        if x_size != x_size_g or x_size != len(block) - mult:
            raise _VerificationFailure(
                {
                    "reason": "eigenvalue multiplicities disagree",
                    "block": list(block),
                    "lambda": complex(lam),
                }
            )
        sf_inv = np.linalg.inv(sf)
        sg_inv = np.linalg.inv(sg)
        lift_f = _lift(sf_inv, block, q)
        lift_f_inv = _lift(sf, block, q)
        lift_g = _lift(sg_inv, block, q)
        lift_g_inv = _lift(sg, block, q)
        f_imgs = [lift_f @ m @ lift_f_inv for m in f_imgs]
        g_imgs = [lift_g @ m @ lift_g_inv for m in g_imgs]
        state.t_acc = lift_f @ state.t_acc
        state.u_acc = lift_g @ state.u_acc
        _verify_projector_pair(
            sf_inv @ mf @ sf, sg_inv @ mg @ sg, lam, mult, x_size
        )
        new_a = block[:x_size]
        new_b = block[x_size:]
        state.blocks[i : i + 1] = [new_a, new_b]
        state.trivial[i : i + 1] = [False, False]
    return state, f_imgs, g_imgs


def _find_split(comp_f, comp_g, rng, max_random_tries):
    """A corresponding pair of compressed elements with split spectrum.

    Tries the compressed basis images first, then seeded random
    combinations applied with the same coefficients on both sides.
    """
    n = comp_f[0].shape[0]
    candidates = list(zip(comp_f, comp_g))
    for _ in range(max_random_tries):
        c = rng.normal(size=len(comp_f)) + 1j * rng.normal(size=len(comp_f))
        mf = sum(ci * m for ci, m in zip(c, comp_f))
        mg = sum(ci * m for ci, m in zip(c, comp_g))
        candidates.append((mf, mg))
    for mf, mg in candidates:
        vals_f = np.linalg.eigvals(mf)
        clusters_f = _cluster_eigenvalues(vals_f)
        if len(clusters_f) < 2:
            continue
        vals_g = np.linalg.eigvals(mg)
        clusters_g = _cluster_eigenvalues(vals_g)
        vscale = max(1.0, float(np.max(np.abs(vals_f))))
        if not _match_clusters(clusters_f, clusters_g, vscale):
            continue
        lam, mult = clusters_f[0]
        if mult == n:
            continue
        others = [rep for rep, _ in clusters_f[1:]]
        delta = min(abs(rep - lam) for rep in others) / 2.0
        return mf, mg, lam, mult, delta
    return None


def _verify_projector_pair(mf_sep, mg_sep, lam, mult, x_size):
    """Check the split realizes the subdomain projector on both sides.

    With N = (M - lam I)^mult and p an annihilating polynomial of the
    invertible corner N_XX with constant term c != 0, the matrix
    -(1/c)(p(N) - c I) must be the projector onto the first x_size
    coordinates; the same polynomial must work on the mirrored side.
    """
    n = mf_sep.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    target = np.zeros((n, n), dtype=np.complex128)
    target[:x_size, :x_size] = np.eye(x_size)
    nf = np.linalg.matrix_power(mf_sep - lam * eye, mult)
    ng = np.linalg.matrix_power(mg_sep - lam * eye, mult)
    corner = nf[:x_size, :x_size]
    clusters = _cluster_eigenvalues(np.linalg.eigvals(corner))
    coeffs = _annihilating_poly(clusters)
    c0 = coeffs[-1]
    if abs(c0) < 1e-300:
        raise _VerificationFailure(
            {"reason": "projector polynomial has zero constant term"}
        )
    for name, nmat in (("first", nf), ("second", ng)):
        proj = -(_poly_eval(coeffs, nmat) - c0 * eye) / c0
        resid = np.linalg.norm(proj - target)
        if resid > 1e-7 * max(1.0, np.linalg.norm(proj)):
            raise _VerificationFailure(
                {
                    "reason": "subdomain projector not realized",
                    "side": name,
                    "residual": float(resid),
                }
            )


# -- block alignment ----------------------------------------------------------------


def _align_blocks(paired, state, f_imgs, g_imgs, tol):
    """Prefix induction equating the two sides block by block.

    For each new block p, every earlier block k with a nonzero (k,p)
    coupling gets T_k built from that coupling and its trace-dual; the
    assembled block-diagonal transform is applied to the first side.
    """
    q = paired.q
    blocks = state.blocks
    m = len(blocks)
    d = len(f_imgs)
    scale = max(1.0, *(np.linalg.norm(x) for x in f_imgs),
                *(np.linalg.norm(x) for x in g_imgs))
    for p in range(1, m):
        xp = blocks[p]
        t_full = np.eye(q, dtype=np.complex128)
        t_inv_full = np.eye(q, dtype=np.complex128)
        for k in range(p):
            xk = blocks[k]
            kp = np.ix_(xk, xp)
            pk = np.ix_(xp, xk)
            norms = [np.linalg.norm(f_imgs[j][kp]) for j in range(d)]
            best = int(np.argmax(norms))
            if norms[best] <= 1e-9 * scale:
                worst_g = max(np.linalg.norm(g_imgs[j][kp]) for j in range(d))
                if worst_g > 1e-6 * scale:
                    raise _VerificationFailure(
                        {
                            "reason": "block coupling vanishes on one side only",
                            "blocks": [list(xk), list(xp)],
                            "residual": float(worst_g),
                        }
                    )
                continue  # T_k stays the identity
            fkp = f_imgs[best][kp]
            gkp = g_imgs[best][kp]
            if len(xk) != len(xp):
                raise _VerificationFailure(
                    {
                        "reason": "coupled blocks of unequal size",
                        "blocks": [list(xk), list(xp)],
                    }
                )
            # trace-dual of the embedded coupling, minimum-norm coefficients
            lifted = np.zeros((q, q), dtype=np.complex128)
            lifted[kp] = fkp
            v = np.array([np.trace(lifted @ f_imgs[j]) for j in range(d)])
            vnorm = float(np.linalg.norm(v))
            if vnorm <= 1e-9 * max(1.0, scale * np.linalg.norm(fkp)):
                raise _VerificationFailure(
                    {
                        "reason": "coupling block pairs to zero with the algebra",
                        "blocks": [list(xk), list(xp)],
                    }
                )
            c = np.conj(v) / (vnorm * vnorm)
            fhat = sum(ci * mj for ci, mj in zip(c, f_imgs))
            ghat = sum(ci * mj for ci, mj in zip(c, g_imgs))
            prod = fkp @ fhat[pk]
            lam = np.trace(prod) / len(xk)
            iden_k = np.eye(len(xk))
            if (
                abs(lam) <= 1e-9 * max(1.0, np.linalg.norm(prod))
                or np.linalg.norm(prod - lam * iden_k) > 1e-6 * max(1.0, abs(lam)) * len(xk)
                or np.linalg.norm(fhat[pk] @ fkp - lam * np.eye(len(xp)))
                > 1e-6 * max(1.0, abs(lam)) * len(xp)
            ):
                raise _VerificationFailure(
                    {
                        "reason": "coupling dual is not a scalar inverse",
                        "blocks": [list(xk), list(xp)],
                        "lambda": complex(lam),
                    }
                )
            t_k = gkp @ fhat[pk] / lam
            t_k_inv = fkp @ ghat[pk] / lam
            iden_res = np.linalg.norm(t_k @ t_k_inv - iden_k)
            if iden_res > 1e-6 * max(1.0, np.linalg.norm(t_k) ** 2):
                raise _VerificationFailure(
                    {
                        "reason": "block transform is not invertible",
                        "blocks": [list(xk), list(xp)],
                        "residual": float(iden_res),
                    }
                )
            kk = np.ix_(xk, xk)
            t_full[kk] = t_k
            t_inv_full[kk] = t_k_inv
        f_imgs = [t_full @ mj @ t_inv_full for mj in f_imgs]
        state.t_acc = t_full @ state.t_acc
        prefix = [i for b in blocks[: p + 1] for i in b]
        pp = np.ix_(prefix, prefix)
        for j in range(d):
            resid = np.linalg.norm(f_imgs[j][pp] - g_imgs[j][pp])
            if resid > max(tol, 1e-6) * max(1.0, scale):
                raise _VerificationFailure(
                    {
                        "reason": "prefix alignment failed",
                        "prefix_blocks": [list(b) for b in blocks[: p + 1]],
                        "word": list(paired.words[j]),
                        "residual": float(resid),
                    }
                )
    return state, f_imgs


# -- full recovery ----------------------------------------------------------------------


@dataclass
class RecoveryResult:
    verdict: str  # similar | vanishing | not_covanishing | trace_mismatch | verification_failed
    q: int
    transform: HoloTransform | None
    witness: dict | None
    residual: float | None

    @property
    def similar(self) -> bool:
        return self.verdict == "similar"


def recover_transform(
    fs,
    gs,
    tol: float = 1e-6,
    max_word_len: int | None = None,
    seed: int = 0,
) -> RecoveryResult:
    """Find T conjugating every F to its partner G, or say why none was found.

    Preconditions checked in order: word traces agree up to the bound;
    both trace forms are nondegenerate on the generated algebras; the
    word correspondence is well defined both ways.  Then the domain is
    refined into scalar blocks and the blocks are aligned; the returned
    transform satisfies ||T F T^-1 - G|| <= tol * (1 + ||G||) per pair.
    """
    q, names, f_mats, g_mats = _normalize_sets(fs, gs)
    trace_report = trace_words_equal(f_mats, g_mats, max_len=max_word_len)
    if trace_report.verdict == "mismatch":
        return RecoveryResult(
            verdict="trace_mismatch",
            q=q,
            transform=None,
            witness={
                "word": list(trace_report.witness_word),
                "trace_f": trace_report.trace_f,
                "trace_g": trace_report.trace_g,
            },
            residual=None,
        )
    for side, mats in (("first", f_mats), ("second", g_mats)):
        report = is_11_nonvanishing(algebra_closure(mats))
        if not report:
            radical = report.radical[0]
            return RecoveryResult(
                verdict="vanishing",
                q=q,
                transform=None,
                witness={
                    "side": side,
                    "radical_element": radical.tolist(),
                    "gram_rank": report.rank,
                    "algebra_dim": report.dim,
                },
                residual=None,
            )
    paired = build_paired_algebra(f_mats, g_mats)
    if paired.failure is not None:
        kind = paired.failure.pop("kind")
        return RecoveryResult(
            verdict=kind, q=q, transform=None, witness=paired.failure, residual=None
        )
    rng = np.random.default_rng(seed)
    try:
        state, f_imgs, g_imgs = _refine_partition(paired, rng)
        state, f_imgs = _align_blocks(paired, state, f_imgs, g_imgs, tol)
    except _VerificationFailure as failure:
        return RecoveryResult(
            verdict="verification_failed",
            q=q,
            transform=None,
            witness=failure.witness,
            residual=None,
        )
    t_final = np.linalg.solve(state.u_acc, state.t_acc)
    t_inv = np.linalg.inv(t_final)
    worst = 0.0
    worst_name = None
    for name in names:
        resid = np.linalg.norm(
            t_final @ f_mats[name] @ t_inv - g_mats[name]
        ) / (1 + np.linalg.norm(g_mats[name]))
        if resid > worst:
            worst = resid
            worst_name = name
    if worst > tol:
        return RecoveryResult(
            verdict="verification_failed",
            q=q,
            transform=None,
            witness={
                "reason": "final conjugation residual above tolerance",
                "pair": worst_name,
                "residual": float(worst),
            },
            residual=float(worst),
        )
    return RecoveryResult(
        verdict="similar",
        q=q,
        transform=HoloTransform(q, t_final),
        witness=None,
        residual=float(worst),
    )
