"""Dual-channel sub-Nyquist multi-tone estimation.

Estimate amplitudes, frequencies, and phases of a real multi-tone signal
observed together with its time derivative below the Nyquist rate.  The
amplitude ratio between the two channels recovers each tone's frequency
without aliasing ambiguity; closed-form bounds and a compressive-sensing
baseline (block OMP on a DFT frame) support the accompanying Monte-Carlo
experiments.
"""

from .bounds import (
    CONSTANTS_NOTE,
    CrbReport,
    OperatingPoint,
    SingularFimError,
    amplitude_crb,
    finite_difference_gradients,
    freq_crb_dual,
    numeric_fim,
    ratio_relvar,
    tone_gradients,
)
from .experiments import (
    ExperimentConfig,
    SummaryRow,
    SweepSummary,
    ToneRow,
    TrialRecord,
    compare_report,
    generate_scenario,
    match_tones,
    read_summary_csv,
    render_compare_text,
    run_sweep,
    run_trial,
    trial_seed_sequence,
    write_summary_csv,
)
from .omp import (
    DftDictionary,
    OmpConfig,
    OmpResult,
    OmpTone,
    StackedDictionary,
    build_dictionary,
    omp_recover,
    prepare_stacked,
)
from .signal_core import (
    DualChannelObservation,
    NoiseConfig,
    SamplingScheme,
    Scenario,
    ToneParams,
    add_noise,
    multitone,
    multitone_derivative,
    snr_linear,
    synthesize,
    uniform_sample_rate,
    wrap_phase,
)
from .sngem import (
    AliasedComponent,
    AmbiguousFoldError,
    CollisionError,
    DegenerateRatioError,
    EstimatedTone,
    EstimationError,
    EstimationResult,
    EstimatorConfig,
    OrderSelectionError,
    ToneFailure,
    alias_frequency,
    estimate,
    estimate_aliased_spectrum,
    estimate_nonuniform,
    fold_candidates,
    ratio_frequency,
    unfold,
)
from .svgplot import PlotSpec, plot_spec_from_dict, render_chart, save_chart

__version__ = "0.1.0"

__all__ = [
    "AliasedComponent",
    "AmbiguousFoldError",
    "CONSTANTS_NOTE",
    "CollisionError",
    "CrbReport",
    "DegenerateRatioError",
    "DftDictionary",
    "DualChannelObservation",
    "EstimatedTone",
    "EstimationError",
    "EstimationResult",
    "EstimatorConfig",
    "ExperimentConfig",
    "NoiseConfig",
    "OmpConfig",
    "OmpResult",
    "OmpTone",
    "OperatingPoint",
    "OrderSelectionError",
    "PlotSpec",
    "SamplingScheme",
    "Scenario",
    "SingularFimError",
    "StackedDictionary",
    "SummaryRow",
    "SweepSummary",
    "ToneFailure",
    "ToneParams",
    "ToneRow",
    "TrialRecord",
    "alias_frequency",
    "add_noise",
    "amplitude_crb",
    "build_dictionary",
    "compare_report",
    "estimate",
    "estimate_aliased_spectrum",
    "estimate_nonuniform",
    "finite_difference_gradients",
    "fold_candidates",
    "freq_crb_dual",
    "generate_scenario",
    "match_tones",
    "multitone",
    "multitone_derivative",
    "numeric_fim",
    "omp_recover",
    "plot_spec_from_dict",
    "prepare_stacked",
    "ratio_frequency",
    "ratio_relvar",
    "read_summary_csv",
    "render_chart",
    "render_compare_text",
    "run_sweep",
    "run_trial",
    "save_chart",
    "snr_linear",
    "synthesize",
    "tone_gradients",
    "trial_seed_sequence",
    "uniform_sample_rate",
    "unfold",
    "wrap_phase",
    "write_summary_csv",
]
