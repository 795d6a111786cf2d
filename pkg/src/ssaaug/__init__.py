"""Shape-preserving surrogate augmentation of short time series.

A series is split by singular spectrum analysis into its shape (leading
components) and an irregular residual; only the residual is replaced by an
amplitude adjusted Fourier transform surrogate before recombination.
Baseline augmenters, fidelity metrics, class balancing and a small 1-D CNN
for downstream evaluation are included.
"""
from .errors import (
    DataFormatError, EigenFailure, EmptyDataset, EmptyGroup, IndexOutOfRange, InvalidSeries,
    IrregularDegenerateWarning, MissingFoldFactor, ShapeMismatch, SsaaugError, TooShort,
    UnmappedLabel, WindowTooLarge, ZeroDenominator, ZeroVariance,
)
from .metrics import FidelityReport, acf, acf_rmsd, delta_mean_pct, delta_std_pct, dtw_distance, dtw_norm, fidelity_report
from .pipeline import (
    AugmentMethod, AugmentPlan, augment_dataset, derive_fold_plan, fold_table, split_shape, synthesize_one,
)
from .rng import RngState, derive_seed
from .ssa import (
    ComponentGrouping, SsaDecomposition, covariance, decompose, embed, reconstruct, reconstruct_all, select_k,
    select_significant,
)
from .surrogate import aaft, dft, phase_randomize, sort_with_ranks
from .timeseries import Dataset, LabeledSeries, TimeSeries, canonicalize_length, summary_stats, znormalize
from .windows import SliceConfig, WarpConfig, resample_linear, window_slice, window_warp

__version__ = "0.1.0"
