"""Decision procedures and verification suites built on the operator core."""

from .compactness import (DECAYING, INCONCLUSIVE, NON_DECAYING, ClassifierConfig,
                          CompactnessVerdict, classify_compactness, path_family,
                          singular_value_scan)
from .corpus import load_corpus, parse_corpus, run_corpus
from .directions import direction_family
from .prop1 import (berezin_fixed_point_residual, eq1_residual, fl_scan, prop1_coeff_check,
                    smallest_monotone_l)
from .slices import (BOTH, PHI_HOLOMORPHIC, PSI_HOLOMORPHIC, VIOLATION, ComplianceReport,
                     thm1_check)

__all__ = [
    "BOTH", "DECAYING", "INCONCLUSIVE", "NON_DECAYING", "PHI_HOLOMORPHIC", "PSI_HOLOMORPHIC",
    "VIOLATION", "ClassifierConfig", "CompactnessVerdict", "ComplianceReport",
    "berezin_fixed_point_residual", "classify_compactness", "direction_family",
    "eq1_residual", "fl_scan", "load_corpus", "parse_corpus", "path_family",
    "prop1_coeff_check", "run_corpus", "singular_value_scan", "smallest_monotone_l",
    "thm1_check",
]
