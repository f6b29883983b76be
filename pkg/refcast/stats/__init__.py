"""Statistics kernel: quantiles, summaries, rank tests, ANOVA/OLS, density
traces and the transformation registry."""

from .density import kde_density, silverman_bandwidth
from .distribution import EmpiricalDistribution, fraction_above, quantile, summarize
from .export import write_xy_csv
from .linear import anova_oneway, ols_univariate
from .rank_tests import mann_whitney_u, signed_rank_vs_reference
from .registry import TransformationEnum
from .results import AlternativeEnum, OLSResult, Summary, TestResult
