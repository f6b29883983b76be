"""Deterministic synthetic reference classes, macro series and overrun tails."""

from .calibration import PUBLISHED_TARGETS, TailCalibration, calibrate_tail, lognormal_statistics, tail_from_fractions
from .generator import (
    GENERATOR,
    SynthTruth,
    draw_overruns,
    gen_macro_series,
    gen_reference_class,
    write_synth_bundle,
)
from .spec import (
    LARGE_DAM_TAIL,
    CovariateSpec,
    DistributionEnum,
    InflationRegime,
    SynthSpec,
    TailKindEnum,
    TailSpec,
)
