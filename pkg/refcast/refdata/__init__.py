"""Reference-class records, country macro series, ingestion and deflator arithmetic."""

from .inflation import annualize_cumulative_inflation, long_term_inflation, normalize_to_constant
from .ingest import (
    MACRO_HEADER,
    REFERENCE_HEADER,
    Diagnostic,
    ingest_macro_csv,
    ingest_reference_csv,
    write_macro_csv,
    write_reference_csv,
)
from .records import (
    CountryMacroSeries,
    DamRecord,
    OverrunObservation,
    ReferenceClass,
    derive_observation,
)
from .regions import COUNTRY_REGIONS, ProjectTypeEnum, RegionEnum, region_of
