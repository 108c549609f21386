"""Holant values on signature grids, and the machinery around them."""

from holant.tensors import (
    MAX_ENTRIES,
    MixedTensor,
    SubdomainMask,
    SymBoolSignature,
    contract,
    dagger,
    direct_sum,
    disequality_signature,
    embed_uparrow,
    equality_signature,
    identity_signature,
    pair,
    restrict,
    subdomain_restrictor,
    symmetric_values,
    tensor_product,
    tensors_close,
)
from holant.grids import (
    HolantPolynomial,
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
from holant.transforms import (
    DefectiveSpectrumWarning,
    EpsilonCounterexampleReport,
    HolantTheoremReport,
    HoloTransform,
    IllConditionedTransformWarning,
    epsilon_family_counterexample,
    epsilon_family_jordan,
    is_orthogonal_preserver,
    is_permutation_preserver,
    verify_holant_theorem,
)
from holant.spans import (
    CovanishingReport,
    DualCertificate,
    GadgetSpan,
    GramReport,
    IndistinguishabilityReport,
    build_span,
    check_covanishing,
    check_indistinguishable,
    dual_nonvanishing_certificate,
    gram_nondegenerate,
)
from holant.simsim import (
    MatrixAlgebra,
    NonvanishingReport,
    PairedAlgebra,
    RecoveryResult,
    TraceWordReport,
    algebra_closure,
    build_paired_algebra,
    is_11_nonvanishing,
    recover_transform,
    trace_words_equal,
)
from holant.homgraphs import (
    DistinguisherReport,
    PairExperimentReport,
    SimpleGraph,
    are_isomorphic,
    bounded_degree_distinguisher,
    canonical_code,
    canonical_form,
    complete_graph,
    count_matchings,
    cycle_graph,
    enumerate_connected_graphs,
    hom_count,
    hom_grid,
    invertible_adjacency_experiment,
    matchings_signatures,
    path_graph,
)
from holant import serialize

__all__ = [
    "MAX_ENTRIES",
    "MixedTensor",
    "SubdomainMask",
    "SymBoolSignature",
    "contract",
    "dagger",
    "direct_sum",
    "disequality_signature",
    "embed_uparrow",
    "equality_signature",
    "identity_signature",
    "pair",
    "restrict",
    "subdomain_restrictor",
    "symmetric_values",
    "tensor_product",
    "tensors_close",
    "HolantPolynomial",
    "QuantumGadget",
    "SignatureGrid",
    "compose",
    "enumerate_gadgets",
    "enumerate_grids",
    "gadget_signature",
    "holant_eval",
    "holant_eval_contracted",
    "holant_polynomial",
    "DefectiveSpectrumWarning",
    "EpsilonCounterexampleReport",
    "HolantTheoremReport",
    "HoloTransform",
    "IllConditionedTransformWarning",
    "epsilon_family_counterexample",
    "epsilon_family_jordan",
    "is_orthogonal_preserver",
    "is_permutation_preserver",
    "verify_holant_theorem",
    "CovanishingReport",
    "DualCertificate",
    "GadgetSpan",
    "GramReport",
    "IndistinguishabilityReport",
    "build_span",
    "check_covanishing",
    "check_indistinguishable",
    "dual_nonvanishing_certificate",
    "gram_nondegenerate",
    "MatrixAlgebra",
    "NonvanishingReport",
    "PairedAlgebra",
    "RecoveryResult",
    "TraceWordReport",
    "algebra_closure",
    "build_paired_algebra",
    "is_11_nonvanishing",
    "recover_transform",
    "trace_words_equal",
    "DistinguisherReport",
    "PairExperimentReport",
    "SimpleGraph",
    "are_isomorphic",
    "bounded_degree_distinguisher",
    "canonical_code",
    "canonical_form",
    "complete_graph",
    "count_matchings",
    "cycle_graph",
    "enumerate_connected_graphs",
    "hom_count",
    "hom_grid",
    "invertible_adjacency_experiment",
    "matchings_signatures",
    "path_graph",
    "serialize",
]
