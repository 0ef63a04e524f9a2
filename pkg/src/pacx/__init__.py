"""Preferential attachment clique complexes.

Generation (sequential and urn formulations), clique complex construction,
Betti numbers over prime fields, homotopy-connectedness criteria, and the
Monte Carlo experiment harness, behind the ``pacx`` CLI.
"""

from .complexes import (BarmakVerdict, SimpleGraph, SimplicialComplex,
                        barmak_check, build_clique_complex,
                        clique_complex_on_subset, collapse, common_neighbors,
                        complete_graph, cycle_graph, find_induced_sphere,
                        link, octahedral_graph, octahedral_sphere,
                        read_complex, write_complex)
from .errors import BudgetError, VerificationError
from .experiments import (AttachmentResult, FitResult, GrowthResult,
                          KsEvolution, PhaseRegion, ScalingResult, SweepSpec,
                          TailPolicy, TrialRecord, attachment_prob_estimate,
                          ccdf, common_neighbor_growth, fit_loglog_tail,
                          ks_evolution, ks_two_sample, phase_classify,
                          read_records, run_sweep, scaling_regression,
                          summarize_csv, write_records)
from .homology import (BettiVector, BoundaryMatrix, FieldSpec, b_ik_indicator,
                       betti, betti_dense_oracle, betti_multi_field,
                       boundary_matrices, check_link_bound, euler_check,
                       link_betti_sum, morse_bounds_beta1, n_components,
                       relative_betti)
from .kernels import backend_name
from .pagraph import (MultiGraph, PAParams, PolyaWeights, compute_x,
                      conditional_edge_prob, exact_distribution,
                      generate_polya, generate_sequential, read_graph,
                      s_deviation, sample_polya_weights, write_graph)
from .rng import derive_rng

__version__ = "0.1.0"
