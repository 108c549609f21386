"""Span construction, pairing rank checks, and the conjugate dual trick.

Oracles: bounded (1,1) spans over a single matrix are spans of matrix
powers, so Cayley-Hamilton pins their dimensions exactly; dual pairings
reduce to squared Frobenius norms computable by hand.
"""

import numpy as np
import pytest

from holant.grids import QuantumGadget
from holant.spans import (
    build_span,
    check_covanishing,
    check_indistinguishable,
    dual_nonvanishing_certificate,
    gram_nondegenerate,
)
from holant.tensors import (
    MixedTensor,
    SymBoolSignature,
    disequality_signature,
    equality_signature,
    identity_signature,
    pair,
)


def mat_tensor(m, q):
    del q
    return MixedTensor.from_matrix(np.asarray(m, dtype=np.complex128))


def counterexample_set(a, b):
    """Binary disequality feeding a symmetric 4-port signature, domain 2."""
    f = SymBoolSignature((a, b, 1.0, 0.0, 0.0), 0, 4).to_tensor()
    return {"neq": disequality_signature(2, 2, 0), "f": f}


# -- build_span ----------------------------------------------------------------


def test_empty_set_span_is_the_wire():
    span = build_span({}, (1, 1), 4, q=3)
    assert span.dim == 1
    assert span.basis[0].allclose(identity_signature(3))
    assert span.witnesses[0].vertices == ("wire",)


def test_empty_set_needs_domain_size():
    with pytest.raises(ValueError):
        build_span({}, (1, 1), 2)


def test_span_of_single_matrix_is_power_span():
    # Cayley-Hamilton: powers of a q x q matrix span at most q dimensions
    # once the bound allows q-1 chained vertices.
    rng = np.random.default_rng(7)
    for q in (2, 3):
        m = rng.normal(size=(q, q)) + 1j * rng.normal(size=(q, q))
        span = build_span({"m": mat_tensor(m, q)}, (1, 1), q + 1)
        assert span.dim == q
        powers = [np.linalg.matrix_power(m, k) for k in range(q + 2)]
        for p in powers:
            assert span.contains(mat_tensor(p, q))
        outside = mat_tensor(rng.normal(size=(q, q)), q)
        assert not span.contains(outside)


def test_span_dimension_grows_with_bound():
    rng = np.random.default_rng(11)
    m = rng.normal(size=(3, 3))
    fs = {"m": mat_tensor(m, 3)}
    dims = [build_span(fs, (1, 1), b).dim for b in (0, 1, 2, 3)]
    assert dims == [1, 2, 3, 3]


def test_span_is_deterministic():
    fs = counterexample_set(1.0, 1.0)
    s1 = build_span(fs, (0, 2), 4)
    s2 = build_span(fs, (0, 2), 4)
    assert s1.dim == s2.dim
    for a, b in zip(s1.basis, s2.basis):
        assert np.array_equal(a.entries, b.entries)
    assert s1.witnesses == s2.witnesses


def test_span_witness_gadgets_reproduce_basis():
    from holant.grids import gadget_signature

    fs = counterexample_set(0.0, 0.0)
    span = build_span(fs, (2, 0), 4)
    for sig, grid in zip(span.basis, span.witnesses):
        again = gadget_signature(grid, fs)
        assert sig.allclose(again, 1e-9)


def test_closed_profile_span_collects_scalar():
    fs = {"eq20": equality_signature(2, 2, 0), "eq02": equality_signature(2, 0, 2)}
    span = build_span(fs, (0, 0), 2)
    assert span.dim == 1
    assert span.witnesses[0].vertices  # a scalar needs at least one vertex
    assert abs(span.basis[0].entry((), ()) - 2.0) < 1e-12  # two-vertex equality loop


# -- gram_nondegenerate ---------------------------------------------------------


def test_gram_identity_only_is_nonvanishing():
    report = gram_nondegenerate({"id": identity_signature(2)}, (1, 1), 3)
    assert report.verdict == "nonvanishing_at_bound"
    assert report.rank == report.dim


def test_gram_equalities_are_nonvanishing():
    fs = {"eq20": equality_signature(2, 2, 0), "eq02": equality_signature(2, 0, 2)}
    for profile in ((1, 1), (2, 0), (0, 2)):
        report = gram_nondegenerate(fs, profile, 3)
        assert report.verdict == "nonvanishing_at_bound"


def test_gram_unreachable_profile_is_vacuously_nonvanishing():
    fs = {"eq20": equality_signature(2, 2, 0)}
    report = gram_nondegenerate(fs, (1, 0), 3)
    assert report.dim == 0
    assert report.verdict == "nonvanishing_at_bound"


def test_gram_counterexample_set_vanishes_at_04():
    # the low-weight entries of f are invisible to the disequality side,
    # so combinations supported there pair to zero against everything
    fs = counterexample_set(1.0, 1.0)
    report = gram_nondegenerate(fs, (0, 4), 6)
    assert report.verdict == "vanishing_witness"
    assert report.rank < report.dim
    assert report.max_pairing_residual < 1e-7
    sig = report.witness_signature
    assert sig.norm() > 1e-7
    # the witness lives on Hamming weights 0 and 1 only
    for idx in np.ndindex(*(2,) * 4):
        if sum(idx) >= 2:
            assert abs(sig.array[idx]) < 1e-9
    assert isinstance(report.witness, QuantumGadget)
    combo = report.witness.signature(fs)
    assert combo.allclose(sig, 1e-7)


def test_gram_weight_two_set_is_nonvanishing_at_04():
    # with the low-weight entries removed the pairing has full rank
    report = gram_nondegenerate(counterexample_set(0.0, 0.0), (0, 4), 5)
    assert report.verdict == "nonvanishing_at_bound"


def test_gram_vanishing_witness_pairs_to_zero_against_duals():
    fs = counterexample_set(1.0, 1.0)
    report = gram_nondegenerate(fs, (0, 4), 5)
    if report.verdict != "vanishing_witness":
        pytest.skip("bound 5 span too small on this profile")
    dual_span = build_span(fs, (4, 0), 5)
    for b in dual_span.basis:
        assert abs(pair(report.witness_signature, b)) < 1e-7


# -- check_indistinguishable -----------------------------------------------------


def unary_pair_sets():
    u = MixedTensor(2, 1, 0, np.array([1.0, 1.0], dtype=np.complex128))
    v1 = MixedTensor(2, 0, 1, np.array([1.0, 0.0], dtype=np.complex128))
    v2 = MixedTensor(2, 0, 1, np.array([1.0, 1.0], dtype=np.complex128))
    return {"u": u, "v": v1}, {"u": u, "v": v2}


def test_set_indistinguishable_from_itself():
    fs = counterexample_set(1.0, 1.0)
    report = check_indistinguishable(fs, fs, {k: k for k in fs}, 4)
    assert report.verdict == "indistinguishable_at_bound"
    assert report.max_difference == 0.0
    assert report.grids_checked > 0


def test_counterexample_family_is_indistinguishable_exactly():
    fs = counterexample_set(1.0, 1.0)
    gs = counterexample_set(0.0, 0.0)
    report = check_indistinguishable(fs, gs, {"neq": "neq", "f": "f"}, 5)
    assert report.verdict == "indistinguishable_at_bound"
    assert report.max_difference == 0.0


def test_distinguishable_pair_yields_witness_grid():
    fs, gs = unary_pair_sets()
    report = check_indistinguishable(fs, gs, {"u": "u", "v": "v"}, 3)
    assert report.verdict == "distinguished"
    assert report.witness_grid is not None
    assert len(report.witness_grid.vertices) == 2
    assert report.value_f == pytest.approx(1.0)
    assert report.value_g == pytest.approx(2.0)


def test_brute_and_contract_methods_agree():
    fs = counterexample_set(0.5, -2.0)
    gs = counterexample_set(0.0, 0.0)
    bij = {"neq": "neq", "f": "f"}
    r1 = check_indistinguishable(fs, gs, bij, 4, method="brute")
    r2 = check_indistinguishable(fs, gs, bij, 4, method="contract")
    assert r1.verdict == r2.verdict == "indistinguishable_at_bound"
    assert r1.grids_checked == r2.grids_checked


def test_correspondence_validation():
    fs, gs = unary_pair_sets()
    with pytest.raises(ValueError):
        check_indistinguishable(fs, gs, {"u": "u"}, 2)
    bad = {"u": gs["u"], "v": MixedTensor.scalar(2, 1.0)}
    with pytest.raises(ValueError):
        check_indistinguishable(fs, bad, {"u": "u", "v": "v"}, 2)


# -- check_covanishing ------------------------------------------------------------


def test_covanishing_set_with_itself():
    fs = counterexample_set(1.0, 1.0)
    bij = {k: k for k in fs}
    for profile in ((0, 0), (0, 2), (2, 0)):
        report = check_covanishing(fs, fs, bij, profile, 4)
        assert report.verdict == "covanishing_at_bound"


def test_counterexample_family_covanishes():
    fs = counterexample_set(1.0, 1.0)
    gs = counterexample_set(0.0, 0.0)
    bij = {"neq": "neq", "f": "f"}
    for profile in ((0, 0), (0, 2)):
        report = check_covanishing(fs, gs, bij, profile, 4)
        assert report.verdict == "covanishing_at_bound", profile


def test_distinguished_pair_fails_covanishing_at_closed_profile():
    # a closed-grid value difference always shows up as a transfer failure
    fs, gs = unary_pair_sets()
    report = check_covanishing(fs, gs, {"u": "u", "v": "v"}, (0, 0), 3)
    assert report.verdict == "counterexample"
    assert report.direction in ("first", "second")
    assert report.witness is not None
    # the offending combination vanishes on its own side, not the other
    wf = report.witness_signature_f
    wg = report.witness_signature_g
    small, large = (wf, wg) if report.direction == "first" else (wg, wf)
    assert small.norm() < 1e-6
    assert large.norm() > 1e-6


def test_transformed_set_covanishes_with_original():
    from holant.transforms import HoloTransform

    rng = np.random.default_rng(3)
    q = 2
    f1 = MixedTensor(q, 2, 0, rng.normal(size=(q, q)).astype(np.complex128))
    f2 = MixedTensor(q, 0, 1, rng.normal(size=(q,)).astype(np.complex128))
    fs = {"a": f1, "b": f2}
    t = HoloTransform(q, np.array([[1.0, 1.0], [0.5, -1.0]]))
    gs = {"a": t.act(f1), "b": t.act(f2)}
    bij = {"a": "a", "b": "b"}
    for profile in ((0, 0), (1, 0)):
        report = check_covanishing(fs, gs, bij, profile, 4)
        assert report.verdict == "covanishing_at_bound"


# -- dual_nonvanishing_certificate -------------------------------------------------


def eq_set(q):
    return {
        "eq20": equality_signature(q, 2, 0),
        "eq02": equality_signature(q, 0, 2),
    }


def test_dual_certificate_for_identity():
    q = 3
    cert = dual_nonvanishing_certificate(eq_set(q), identity_signature(q))
    assert cert.pairing_value == pytest.approx(q)
    assert cert.dual.allclose(identity_signature(q), 1e-9)
    assert cert.witness.signature(cert.witness_bindings).allclose(cert.dual, 1e-9)


def test_dual_certificate_isotropic_unary():
    # [1, i] pairs to zero with its bare transpose; the conjugated dual
    # restores a positive pairing.
    q = 2
    k = MixedTensor(q, 0, 1, np.array([1.0, 1.0j]))
    fs = {
        "w": k,
        "wbar": k.conj(),
        "eq20": equality_signature(q, 2, 0),
    }
    transpose = MixedTensor(q, 1, 0, k.entries)
    assert abs(pair(k, transpose)) < 1e-12
    cert = dual_nonvanishing_certificate(fs, k)
    assert cert.pairing_value == pytest.approx(2.0)
    assert cert.witness.signature(cert.witness_bindings).allclose(cert.dual, 1e-9)


def test_dual_certificate_requires_conjugate_closure():
    q = 2
    k = MixedTensor(q, 0, 1, np.array([1.0, 1.0j]))
    with pytest.raises(ValueError, match="conjugate"):
        dual_nonvanishing_certificate({"w": k}, k)


def test_dual_certificate_requires_equality():
    q = 2
    k = MixedTensor(q, 0, 1, np.array([1.0, 0.5]))
    with pytest.raises(ValueError, match="equality"):
        dual_nonvanishing_certificate({"w": k}, k)


def test_dual_certificate_requires_pad_for_left_slots():
    q = 2
    m = MixedTensor(q, 1, 1, np.array([[1.0, 2.0], [3.0, 4.0]]))
    fs = {"m": m, "eq20": equality_signature(q, 2, 0)}
    with pytest.raises(ValueError, match="padding|covariant"):
        dual_nonvanishing_certificate(fs, m)


def test_dual_certificate_rejects_zero():
    q = 2
    fs = eq_set(q)
    with pytest.raises(ValueError, match="zero"):
        dual_nonvanishing_certificate(fs, MixedTensor.zeros(q, 0, 1))


def test_dual_certificate_general_mixed_tensor():
    rng = np.random.default_rng(19)
    q = 2
    m = rng.normal(size=(q, q)) + 1j * rng.normal(size=(q, q))
    k = MixedTensor(q, 1, 1, m)
    fs = eq_set(q)
    fs["m"] = k
    fs["mbar"] = k.conj()
    cert = dual_nonvanishing_certificate(fs, k)
    # equality padding keeps the norm: pairing is the squared Frobenius norm
    assert cert.pairing_value == pytest.approx(np.sum(np.abs(m) ** 2))
    assert cert.witness.signature(cert.witness_bindings).allclose(cert.dual, 1e-9)
    assert abs(pair(k, cert.dual) - cert.pairing_value) < 1e-9


def test_dual_certificate_nontrivial_pad():
    # pad through a nonsingular non-equality covariant binary signature
    q = 2
    amat = np.array([[1.0, 1.0], [0.0, 1.0]])
    pad = MixedTensor(q, 0, 2, amat)
    m = np.array([[2.0, 0.0], [1.0, 1.0]])
    k = MixedTensor(q, 1, 1, m)
    fs = {
        "pad": pad,
        "m": k,
        "eq20": equality_signature(q, 2, 0),
    }
    cert = dual_nonvanishing_certificate(fs, k)
    padded = amat @ m
    assert cert.pairing_value == pytest.approx(np.sum(np.abs(padded) ** 2))
    assert cert.witness.signature(cert.witness_bindings).allclose(cert.dual, 1e-9)
