"""Fourier smoothing, bootstrap bands and phase-plane summaries for yearly curves."""

__version__ = "0.1.0"

from .basis import FourierBasis, design_matrix, eval_basis
from .bootstrap import (ConfidenceBand, band_overlap, bootstrap_band, bootstrap_summary,
                        bootstrap_variance)
from .change import ChangeCurve, percentage_change
from .ingest import (Dataset, RawYearSeries, SyntheticConfig, parse_canonical_csv,
                     read_canonical_csv, serialize_canonical_csv, synthesize_ensemble)
from .phase import PhaseCurve, differentiate, phase_curve, zero_crossings
from .smoother import (CurveEnsemble, FourierCurve, MseProfile, fit_year, mse_profile,
                       residual_mse, select_basis_count, smooth_dataset)
from .stats import (BlockPartition, ExtremaSummary, GridFunction, extrema_summary,
                    group_by_blocks, mean_difference, mean_function, preset_partition,
                    variance_function)

__all__ = [
    "BlockPartition", "ChangeCurve", "ConfidenceBand", "CurveEnsemble", "Dataset",
    "ExtremaSummary", "FourierBasis", "FourierCurve", "GridFunction", "MseProfile",
    "PhaseCurve", "RawYearSeries", "SyntheticConfig", "band_overlap", "bootstrap_band",
    "bootstrap_summary", "bootstrap_variance", "design_matrix", "differentiate",
    "eval_basis", "extrema_summary", "fit_year", "group_by_blocks", "mean_difference",
    "mean_function", "mse_profile", "parse_canonical_csv", "percentage_change",
    "phase_curve", "preset_partition", "read_canonical_csv", "residual_mse",
    "select_basis_count", "serialize_canonical_csv", "smooth_dataset",
    "synthesize_ensemble", "variance_function", "zero_crossings",
]
