"""Active graph-based semi-supervised learning via greedy node sampling.

Selects which nodes of a graph to label so that the posterior-mean
reconstruction of a smooth label signal is as accurate as possible, under a
Gaussian field prior whose precision is a graph Laplacian (or any Stieltjes
matrix). The trace-of-covariance objective is supermodular exactly in that
regime, which gives the greedy sampler its near-optimality guarantee.
"""

from .graphs import (Graph, GraphParseError, Regularizer, RegularizerKind,
                     builtin_dataset, custom_regularizer, is_connected,
                     laplacian, laplacian_matrix, load_edge_list, load_labels,
                     normalized_laplacian, normalized_laplacian_matrix)
from .linalg import (DEFAULT_POLICY, NumericPolicy, SingularMatrixError,
                     StieltjesReport, check_stieltjes, cholesky_factor,
                     cholesky_solve, invert_pd, rank_one_inverse_update,
                     trace_inverse)
from .sampling import (MeasurementMatrix, SampleResult, SamplerState,
                       StepRecord, exhaustive_optimal, extend_state,
                       greedy_bound, greedy_sample, initial_state,
                       marginal_decrease, objective, posterior_mean,
                       precision_matrix, random_sample)
from .experiment import (ExperimentConfig, RunRecord, accuracy,
                         add_label_noise, build_regularizer, classify,
                         derive_seed, load_dataset, mean_by_budget,
                         overlap_fraction, records_to_csv, records_to_jsonl,
                         resolve_noise_var, sweep)

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphParseError", "Regularizer", "RegularizerKind",
    "builtin_dataset", "custom_regularizer", "is_connected", "laplacian",
    "laplacian_matrix", "load_edge_list", "load_labels",
    "normalized_laplacian", "normalized_laplacian_matrix",
    "DEFAULT_POLICY", "NumericPolicy", "SingularMatrixError",
    "StieltjesReport", "check_stieltjes", "cholesky_factor",
    "cholesky_solve", "invert_pd", "rank_one_inverse_update",
    "trace_inverse",
    "MeasurementMatrix", "SampleResult", "SamplerState", "StepRecord",
    "exhaustive_optimal", "extend_state", "greedy_bound", "greedy_sample",
    "initial_state", "marginal_decrease", "objective", "posterior_mean",
    "precision_matrix", "random_sample",
    "ExperimentConfig", "RunRecord", "accuracy", "add_label_noise",
    "build_regularizer", "classify", "derive_seed", "load_dataset",
    "mean_by_budget", "overlap_fraction", "records_to_csv",
    "records_to_jsonl", "resolve_noise_var", "sweep",
]
