"""Reference class forecasting: uplift curves, de-biasing, viability, stress arithmetic
and cross-asset comparison."""

from .benchmarks import AssetClassBenchmark, LargeDamSummary, compare_asset_classes, load_benchmarks
from .describe import Description, RegionBreakdown, describe
from .stress import NominalOverrun, debt_impact, nominal_overrun
from .uplift import UpliftCurve, debias, required_uplift
from .viability import ViabilityVerdict, viability
