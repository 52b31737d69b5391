"""Summing functors: closed forms, geometric descriptors, brute-force enumeration."""
from .classical import (
    ClassicalSummingFunctor,
    SummingReport,
    canonical_label,
    classical_evaluate,
    marginal,
    pointed_subset,
    same_up_to_reindexing,
    subsets,
    verify_summing,
)
from .descriptor import (
    KIND_CLASSICAL,
    KIND_GAPPED,
    KIND_QUANTUM,
    RealizationDescriptor,
    Stratum,
    stabilizer_label,
    unitary_strata,
)
from .gamma import ProbCubicalMap, compose_cell_maps, prob_gamma_eval, prob_gamma_map
from .generic import PSFragment, SummingCategory, generic_summing_enumerate, pushforward
from .realize import (
    NerveDescriptor,
    bowtie,
    bowtie_crossings,
    classical_nerve_descriptor,
    classical_realization_descriptor,
    collapsed_edges,
    flip_vertices,
    sample_cube,
)
