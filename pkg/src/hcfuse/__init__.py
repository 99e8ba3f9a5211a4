"""Bagged single-linkage clustering ensembles with power-mean and
GA-optimized weighted consensus fusion."""

from .errors import ConfigError, DataError, HcfuseError, UltrametricityError
from .hierarchy import (
    DEFAULT_ULTRAMETRIC_TOL,
    Dendrogram,
    DissimilarityMatrix,
    cophenetic_matrix,
    cpcc,
    dendrogram_from_ultrametric,
    euclidean_dissimilarity,
    is_ultrametric,
    subdominant_ultrametric,
    validate_data_matrix,
)
from .linkage import single_linkage
from .ensemble import (
    BaggedHierarchy,
    EnsembleConfig,
    bag_indices,
    complete_cd_matrix,
    generate_ensemble,
    generate_ensemble_from_matrix,
)
from .fusion import (
    NAMED_FUSERS,
    SortedEnsemble,
    renyi_fuse,
    sort_ensemble,
    weighted_consensus,
)
from .genetic import (
    Chromosome,
    GAConfig,
    GAResult,
    PipelineResult,
    crossover,
    evolve,
    fitness,
    genetic_fuse_pipeline,
    init_population,
    mutate,
    select,
)
from .stats import WelchResult, regularized_incomplete_beta, student_t_two_sided_p, welch_t_test
from .evaluation import (
    METHODS,
    ExperimentReport,
    TrialRecord,
    run_trials,
    summarize,
    winning_frequency,
)

__all__ = [
    "ConfigError",
    "DataError",
    "HcfuseError",
    "UltrametricityError",
    "DEFAULT_ULTRAMETRIC_TOL",
    "Dendrogram",
    "DissimilarityMatrix",
    "cophenetic_matrix",
    "cpcc",
    "dendrogram_from_ultrametric",
    "euclidean_dissimilarity",
    "is_ultrametric",
    "subdominant_ultrametric",
    "validate_data_matrix",
    "single_linkage",
    "BaggedHierarchy",
    "EnsembleConfig",
    "bag_indices",
    "complete_cd_matrix",
    "generate_ensemble",
    "generate_ensemble_from_matrix",
    "NAMED_FUSERS",
    "SortedEnsemble",
    "renyi_fuse",
    "sort_ensemble",
    "weighted_consensus",
    "Chromosome",
    "GAConfig",
    "GAResult",
    "PipelineResult",
    "crossover",
    "evolve",
    "fitness",
    "genetic_fuse_pipeline",
    "init_population",
    "mutate",
    "select",
    "WelchResult",
    "regularized_incomplete_beta",
    "student_t_two_sided_p",
    "welch_t_test",
    "METHODS",
    "ExperimentReport",
    "TrialRecord",
    "run_trials",
    "summarize",
    "winning_frequency",
]

__version__ = "0.1.0"
