"""Two-sample equality testing for sparse high-dimensional multinomials."""

from .core import (
    CountVector,
    ProbabilityVector,
    TestOutcome,
    TwoSampleCounts,
    make_two_sample,
    pooled_phat,
    std_normal_quantile,
    std_normal_sf,
)
from .errors import (
    ConfigError,
    DegeneratePermutationError,
    DegenerateVarianceError,
    DomainError,
    EmptyGroupError,
    InsufficientDocumentsError,
    InsufficientSupportError,
    LengthMismatchError,
    MultinomTestError,
    NegativeCountError,
    TooLargeError,
    UnsupportedQueryError,
)
from .moments import (
    MomentQuery,
    enumerate_multinomial,
    exact_expected_D,
    falling_factorial,
    multinomial_moment,
)
from .neighborhood import (
    NeighborhoodCurve,
    delta_grid,
    delta_star,
    neighborhood_curve,
    p_delta,
)
from .simlab import (
    ExperimentConfig,
    ExperimentReport,
    MethodResult,
    ScenarioSpec,
    ks_distance_to_normal,
    null_normality_diagnostic,
    replicate_stream,
    run_experiment,
    sample_multinomial,
    scenario_probs,
    spike_merge,
    swap_entries,
    zero_renorm,
    zipf_probs,
)
from .corpus import (
    CorpusComparison,
    CorpusStudyResult,
    DocumentGroup,
    build_comparison,
    corpus_neighborhood_study,
    count_tokens,
    load_document_group,
    tokenize,
)
from .stats import (
    ProposedTestDetail,
    bai_saranadasa_test,
    f_star,
    pearson_chi2,
    proposed_statistic,
    proposed_test,
    sigma_hat_sq,
    statistic_D,
    zelterman_conditional_moments,
    zelterman_d2,
    zelterman_test,
)

__version__ = "0.1.0"

__all__ = [
    "CountVector",
    "TwoSampleCounts",
    "ProbabilityVector",
    "TestOutcome",
    "make_two_sample",
    "pooled_phat",
    "std_normal_sf",
    "std_normal_quantile",
    "ProposedTestDetail",
    "f_star",
    "statistic_D",
    "sigma_hat_sq",
    "proposed_statistic",
    "proposed_test",
    "pearson_chi2",
    "zelterman_d2",
    "zelterman_conditional_moments",
    "zelterman_test",
    "bai_saranadasa_test",
    "NeighborhoodCurve",
    "p_delta",
    "delta_star",
    "delta_grid",
    "neighborhood_curve",
    "ScenarioSpec",
    "ExperimentConfig",
    "ExperimentReport",
    "MethodResult",
    "zipf_probs",
    "swap_entries",
    "spike_merge",
    "zero_renorm",
    "scenario_probs",
    "sample_multinomial",
    "replicate_stream",
    "run_experiment",
    "null_normality_diagnostic",
    "ks_distance_to_normal",
    "DocumentGroup",
    "CorpusComparison",
    "CorpusStudyResult",
    "tokenize",
    "count_tokens",
    "load_document_group",
    "build_comparison",
    "corpus_neighborhood_study",
    "MomentQuery",
    "falling_factorial",
    "multinomial_moment",
    "enumerate_multinomial",
    "exact_expected_D",
    "MultinomTestError",
    "LengthMismatchError",
    "NegativeCountError",
    "EmptyGroupError",
    "DomainError",
    "DegenerateVarianceError",
    "InsufficientSupportError",
    "DegeneratePermutationError",
    "UnsupportedQueryError",
    "TooLargeError",
    "ConfigError",
    "InsufficientDocumentsError",
]
