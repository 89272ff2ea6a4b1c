"""H-type Iwasawa groups with the Koranyi-Cygan gauge metric.

Construct the built-in algebra families, compute distances, inversions,
cross-ratios and Ptolemaean defects on the one-point compactification,
and run randomized verification campaigns showing the metric is
Ptolemaean with R-circles as the equality locus.
"""

from .algebra import (
    HTypeAlgebra,
    IwasawaWitness,
    ValidationReport,
    bracket,
    custom,
    heisenberg,
    horizontal_form,
    j_map,
    octonionic,
    quaternionic,
    u_form,
    validate_htype,
)
from .group import (
    INFINITY,
    Dilate,
    ExtendedPoint,
    GroupElement,
    Invert,
    LeftTranslate,
    SimilarityWord,
    apply_similarity,
    dilate,
    distance,
    gauge,
    identity,
    inverse,
    inversion,
    is_infinity,
    multiply,
    point_from_json,
    point_to_json,
    word_from_json,
    word_to_json,
)
from .moebius import (
    CrossRatioValue,
    DefectReport,
    DegenerateQuadrupleError,
    PairingDefect,
    RCircleEqualityReport,
    RCirclePoint,
    cross_ratio,
    ptolemaean_defects,
    rcircle_equality_check,
    separates,
    standard_rcircle,
)
from .verify import (
    MUTATIONS,
    SUITE_NAMES,
    GroupModel,
    SuiteConfig,
    SuiteResult,
    expansion_identity_suite,
    inequality_chain_suite,
    iwasawa_discriminator,
    mutated_model,
    normalization_calibration,
    ptolemaean_campaign,
    run_suites,
    standard_model,
)

__version__ = "0.1.0"
