"""Seeded synthetic reference classes and country macro series.

All randomness comes from one 64-bit seed through counter-based Philox
streams. Stream ``(kind, j)`` belongs to country ``j`` only, so adding a
country leaves the draws of the existing ones unchanged.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ValidationError
from ..refdata.ingest import write_macro_csv, write_reference_csv
from ..refdata.records import CountryMacroSeries, DamRecord, ReferenceClass
from ..refdata.regions import COUNTRY_REGIONS, ProjectTypeEnum, region_of
from .spec import LARGE_DAM_TAIL, SCHEDULE_TAIL, CovariateSpec, InflationRegime, SynthSpec, TailSpec

logger = logging.getLogger(__name__)

GENERATOR = "philox4x64-v1"

STREAM_COUNTRY = 0
STREAM_PROJECTS = 1
STREAM_MACRO = 2
STREAM_TAIL = 3

MAX_REDRAWS = 100
DEMOCRATIC_POLITY2 = 8
AUTOCRATIC_POLITY2 = -3
MACRO_YEARS_AFTER = 40
SYNTH_COUNTRIES: Tuple[str, ...] = tuple(sorted(COUNTRY_REGIONS))


def _rng(seed: int, stream: int, index: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(int(seed), spawn_key=(stream, index))
    return np.random.Generator(np.random.Philox(sequence))


def _countries(n: int) -> Tuple[str, ...]:
    if n > len(SYNTH_COUNTRIES):
        raise ValidationError(f"at most {len(SYNTH_COUNTRIES)} synthetic countries are available, got {n}")
    return SYNTH_COUNTRIES[:n]


@dataclass(frozen=True, eq=False)
class SynthTruth:
    """The parameters behind a generated dataset."""

    beta: Tuple[float, ...]
    column_names: Tuple[str, ...]
    sigma2_group: float
    sigma2_resid: float
    group_effects: Mapping[str, float]
    macro: Mapping[str, CountryMacroSeries]
    seed: int
    generator: str = GENERATOR
    n_redrawn: int = 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "beta": dict(zip(self.column_names, self.beta)),
            "sigma2_group": self.sigma2_group,
            "sigma2_resid": self.sigma2_resid,
            "group_effects": dict(sorted(self.group_effects.items())),
            "seed": self.seed,
            "generator": self.generator,
            "n_redrawn": self.n_redrawn,
        }


def _deflator_path(years: np.ndarray, drift_pct: float, noise: Optional[np.ndarray] = None) -> Dict[int, float]:
    t = years - years[0]
    log_path = t * math.log1p(drift_pct / 100.0)
    if noise is not None:
        log_path = log_path + noise
    return {int(y): float(100.0 * math.exp(v)) for y, v in zip(years, log_path)}


def _country_macro(
    country: str, years: np.ndarray, drift_pct: float, income: float, polity2: int, noise=None
) -> CountryMacroSeries:
    deflator = _deflator_path(years, drift_pct, noise)
    us = _deflator_path(years, 2.5)
    return CountryMacroSeries(
        country,
        deflator=deflator,
        fx_rate_lcu_per_usd={y: deflator[y] / us[y] for y in deflator},
        per_capita_income_const2000usd={int(y): income for y in years},
        gdp_nominal_usd={int(y): income * 1e7 * us[int(y)] / 100.0 for y in years},
        polity2={int(y): polity2 for y in years},
    )


def _transform(cov: CovariateSpec, values: np.ndarray) -> np.ndarray:
    transformation = cov.transformation.value
    if not np.all(transformation.in_domain(values)):
        raise ValidationError(
            f"generator of {cov.variable} produces values outside the domain of {cov.transformation.name.lower()}"
        )
    return np.asarray(transformation.forward(values), dtype=float)


def _response_values(
    spec: SynthSpec, rng: np.random.Generator, eta: np.ndarray
) -> Tuple[np.ndarray, int]:
    """Add residuals and back-transform, redrawing residuals that leave the response domain."""
    transformation = spec.response.transformation.value
    sd = math.sqrt(spec.sigma2_resid)
    y = eta + rng.normal(0.0, sd, size=eta.size)
    redrawn = 0
    for _ in range(MAX_REDRAWS):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            values = np.asarray(transformation.inverse(y), dtype=float)
        bad = ~(transformation.in_inverse_domain(y) & np.isfinite(values) & (values > 0))
        if not bad.any():
            return values, redrawn
        redrawn += int(bad.sum())
        y[bad] = eta[bad] + rng.normal(0.0, sd, size=int(bad.sum()))
    raise ValidationError("linear predictor mostly outside the response domain; check beta")


def gen_reference_class(spec: SynthSpec) -> Tuple[ReferenceClass, SynthTruth]:
    """Generate a reference class from a random-intercept model.

    Parameters
    ----------
    spec : SynthSpec
        The data-generating process.

    Returns
    -------
    Tuple[ReferenceClass, SynthTruth]
        The records and the truth, whose ``macro`` holds the country series
        the country-level covariates were written into. The same spec always
        gives bit-identical output.

    Raises
    ------
    ValidationError
        If a covariate generator is degenerate or leaves its transformation's domain.
    """
    countries = _countries(spec.n_countries)
    low, high = spec.projects_range
    first, last = spec.year_range
    years = np.arange(first, last + MACRO_YEARS_AFTER + 1)
    project_covs = [c for c in spec.covariates if not c.country_level]
    country_covs = [c for c in spec.covariates if c.country_level]
    beta = np.asarray(spec.beta)
    other_is_cost = spec.response.variable == "schedule_slippage"
    other_tail = spec.overrun_tail or (LARGE_DAM_TAIL if other_is_cost else SCHEDULE_TAIL)

    records: List[DamRecord] = []
    macro: Dict[str, CountryMacroSeries] = {}
    effects: Dict[str, float] = {}
    redrawn = 0
    for j, country in enumerate(countries):
        rng_c = _rng(spec.seed, STREAM_COUNTRY, j)
        n_j = int(rng_c.integers(low, high + 1))
        b_j = float(rng_c.normal(0.0, math.sqrt(spec.sigma2_group)))
        country_raw = {c.term.variable: float(c.draw(rng_c, 1)[0]) for c in country_covs}
        drift = country_raw.get("long_term_inflation", float(np.exp(rng_c.uniform(math.log(1.5), math.log(20.0)))))
        income = country_raw.get("per_capita_income_2000usd", float(rng_c.lognormal(math.log(2000.0), 1.0)))
        democratic = country_raw.get("democracy", float(rng_c.random() < 0.5))
        polity2 = DEMOCRATIC_POLITY2 if democratic >= 0.5 else AUTOCRATIC_POLITY2
        macro[country] = _country_macro(country, years, drift, income, polity2)
        effects[country] = b_j

        rng_p = _rng(spec.seed, STREAM_PROJECTS, j)
        raw = {c.term.variable: c.draw(rng_p, n_j) for c in project_covs}
        fields = {
            "year_decision": rng_p.integers(first, last + 1, size=n_j),
            "estimated_cost": rng_p.lognormal(math.log(500.0), 1.0, size=n_j),
            "estimated_schedule_months": np.exp(rng_p.uniform(math.log(36.0), math.log(180.0), size=n_j)),
            "wall_height_m": 15.0 + rng_p.lognormal(math.log(45.0), 0.6, size=n_j),
            "wall_length_m": rng_p.lognormal(math.log(500.0), 0.8, size=n_j),
            "installed_capacity_mw": rng_p.lognormal(math.log(200.0), 1.2, size=n_j),
        }
        unknown = sorted(set(raw) - set(fields))
        if unknown:
            raise ValidationError(f"project covariates must be one of {sorted(fields)}, got {unknown}")
        fields.update(raw)

        columns = [np.ones(n_j)]
        for cov in spec.covariates:
            values = np.full(n_j, country_raw[cov.term.variable]) if cov.country_level else raw[cov.term.variable]
            columns.append(_transform(cov, values))
        eta = np.column_stack(columns) @ beta + b_j
        modelled, n_bad = _response_values(spec, rng_p, eta)
        redrawn += n_bad
        other = other_tail.sample(rng_p, n_j)
        cost_overrun, slippage = (other, modelled) if other_is_cost else (modelled, other)

        for k in range(n_j):
            year = int(fields["year_decision"][k])
            estimated_months = float(fields["estimated_schedule_months"][k])
            actual_months = estimated_months * float(slippage[k])
            estimated_cost = float(fields["estimated_cost"][k])
            records.append(
                DamRecord(
                    id=f"{country}-{k + 1:03d}",
                    name=f"Synthetic dam {country} {k + 1}",
                    country=country,
                    region=region_of(country),
                    project_type=ProjectTypeEnum.HYDROPOWER,
                    is_hydropower=True,
                    is_new_station=True,
                    wall_height_m=float(fields["wall_height_m"][k]),
                    wall_length_m=float(fields["wall_length_m"][k]),
                    installed_capacity_mw=float(fields["installed_capacity_mw"][k]),
                    estimated_cost=estimated_cost,
                    actual_cost=estimated_cost * float(cost_overrun[k]),
                    currency="LCU",
                    year_decision=year,
                    year_completion=year + int(round(actual_months / 12.0)),
                    estimated_schedule_months=estimated_months,
                    actual_schedule_months=actual_months,
                )
            )

    logger.info(
        "Generated %d records in %d countries (seed %d, %d residuals redrawn)",
        len(records),
        len(countries),
        spec.seed,
        redrawn,
    )
    truth = SynthTruth(
        beta=tuple(spec.beta),
        column_names=("(Intercept)",) + tuple(t.name for t in spec.model_terms()),
        sigma2_group=spec.sigma2_group,
        sigma2_resid=spec.sigma2_resid,
        group_effects=effects,
        macro=macro,
        seed=spec.seed,
        n_redrawn=redrawn,
    )
    return ReferenceClass(records, f"synthetic, seed {spec.seed}"), truth


def gen_macro_series(
    countries: int | Sequence[str],
    year_span: Tuple[int, int],
    regimes: Sequence[InflationRegime],
    seed: int,
) -> Dict[str, CountryMacroSeries]:
    """Generate country macro series with geometric deflator paths.

    Parameters
    ----------
    countries : int | Sequence[str]
        A number of synthetic countries, or explicit country codes.
    year_span : Tuple[int, int]
        First and last year, inclusive; at least 2 years.
    regimes : Sequence[InflationRegime]
        Assigned to countries in turn. With zero noise the long-term
        inflation of a path equals its drift.
    seed : int
        Determines every draw.

    Returns
    -------
    Dict[str, CountryMacroSeries]
        Series keyed by country code.
    """
    first, last = year_span
    if last - first < 1:
        raise ValidationError(f"year span needs at least 2 years, got {year_span}")
    if not regimes:
        raise ValidationError("at least one inflation regime is required")
    codes = _countries(countries) if isinstance(countries, int) else tuple(c.upper() for c in countries)
    years = np.arange(first, last + 1)

    macro = {}
    for j, country in enumerate(codes):
        regime = regimes[j % len(regimes)]
        rng = _rng(seed, STREAM_MACRO, j)
        income = float(rng.lognormal(math.log(2000.0), 1.0))
        polity2 = int(rng.integers(-10, 11))
        noise = rng.normal(0.0, regime.noise_sd, size=years.size) if regime.noise_sd > 0 else None
        macro[country] = _country_macro(country, years, regime.drift_pct, income, polity2, noise)
    return macro


def draw_overruns(tail: TailSpec, n: int, seed: int) -> np.ndarray:
    """n overrun factors from a tail distribution."""
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    return tail.sample(_rng(seed, STREAM_TAIL, 0), n)


def write_synth_bundle(
    rc: ReferenceClass, macro: Mapping[str, CountryMacroSeries], directory: str | Path
) -> Tuple[Path, Path]:
    """Write ``refclass.csv`` and ``macro.csv`` into a directory, creating it if needed."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    refclass_path = directory / "refclass.csv"
    macro_path = directory / "macro.csv"
    write_reference_csv(rc, refclass_path)
    write_macro_csv(macro, macro_path)
    return refclass_path, macro_path
