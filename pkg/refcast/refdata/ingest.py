"""CSV ingestion and emission of reference classes and country macro series.

Both readers keep every cell as text (empty cell = missing) and parse numbers
with ``float`` so that files written by the matching writers re-ingest to
bit-identical values.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Dict, List, Mapping, Optional, Tuple

import pandas as pd

from ..exceptions import EmptyReferenceClassError, IngestError
from ..utils import parse_bool, value_to_enum
from .records import MACRO_SERIES, CountryMacroSeries, DamRecord, ReferenceClass
from .regions import COUNTRY_REGIONS, ProjectTypeEnum, RegionEnum

logger = logging.getLogger(__name__)

Source = str | Path | IO

REFERENCE_HEADER: Tuple[str, ...] = (
    "id",
    "name",
    "country",
    "region",
    "project_type",
    "is_hydropower",
    "is_new_station",
    "wall_height_m",
    "wall_length_m",
    "installed_capacity_mw",
    "unit_capacity_mw",
    "reservoir_area_ha",
    "tunnel_length_km",
    "estimated_cost",
    "actual_cost",
    "currency",
    "base_year",
    "year_decision",
    "year_completion",
    "estimated_schedule_months",
    "actual_schedule_months",
    "fx_cost_share_pct",
    "icb_share_pct",
    "local_contractor",
    "inflation_contingency_pct",
    "estimated_bcr",
)

MACRO_HEADER: Tuple[str, ...] = (
    "country",
    "year",
    "deflator",
    "fx_rate",
    "per_capita_income_2000usd",
    "gdp_nominal_usd",
    "polity2",
    "muv_index",
)

# macro.csv column -> CountryMacroSeries attribute
_MACRO_COLUMNS: Dict[str, str] = dict(zip(MACRO_HEADER[2:], MACRO_SERIES))

_REQUIRED = (
    "id",
    "name",
    "country",
    "region",
    "project_type",
    "is_hydropower",
    "is_new_station",
    "wall_height_m",
    "year_decision",
)
_OBSERVATION_FIELDS = ("estimated_cost", "actual_cost", "estimated_schedule_months", "actual_schedule_months")
_TEXT = ("id", "name", "country", "currency")
_BOOL = ("is_hydropower", "is_new_station", "local_contractor")
_INT = ("base_year", "year_decision", "year_completion")


@dataclass(frozen=True)
class Diagnostic:
    """One ingestion finding.

    ``row`` is the 1-based data row (the header is row 0). ``severity`` is
    "error" for rejected rows and "warning" for accepted rows with a caveat.
    """

    row: int
    field: Optional[str]
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        where = f"row {self.row}" + (f", {self.field}" if self.field else "")
        return f"{self.severity}: {where}: {self.message}"

    def to_dict(self) -> Dict[str, object]:
        return {"row": self.row, "field": self.field, "message": self.message, "severity": self.severity}


class _RowError(Exception):
    def __init__(self, field: Optional[str], message: str):
        super().__init__(message)
        self.field = field
        self.message = message


def _read_table(source: Source, header: Tuple[str, ...], what: str) -> pd.DataFrame:
    try:
        frame = pd.read_csv(source, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        if what == "reference class":
            raise EmptyReferenceClassError()
        raise IngestError(f"empty {what}")
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise IngestError(f"malformed CSV: {e}")
    if tuple(frame.columns) != header:
        raise IngestError(
            f"unexpected CSV header {list(frame.columns)}.\nExpected: {','.join(header)}"
        )
    return frame


def _number(name: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise _RowError(name, f'"{text}" is not a number')
    if not math.isfinite(value):
        raise _RowError(name, f'"{text}" is not finite')
    return value


def _integer(name: str, text: str) -> int:
    value = _number(name, text)
    if not value.is_integer():
        raise _RowError(name, f'"{text}" is not a whole year')
    return int(value)


def _parse_cell(name: str, text: str) -> object:
    if name in _TEXT:
        return text
    if name == "region":
        try:
            return value_to_enum(text, RegionEnum)
        except ValueError:
            raise _RowError(name, f'unknown region "{text}"')
    if name == "project_type":
        try:
            return value_to_enum(text, ProjectTypeEnum)
        except ValueError:
            raise _RowError(name, f'unknown project type "{text}"')
    if name in _BOOL:
        try:
            return parse_bool(text)
        except ValueError as e:
            raise _RowError(name, str(e))
    if name in _INT:
        return _integer(name, text)
    return _number(name, text)


def _parse_reference_row(row: Mapping[str, str]) -> Tuple[DamRecord, List[Tuple[Optional[str], str]]]:
    cells = {name: row[name].strip() for name in REFERENCE_HEADER}
    for name in _REQUIRED:
        if cells[name] == "":
            raise _RowError(name, f"{name} absent")
    country = cells["country"].upper()
    if country not in COUNTRY_REGIONS:
        raise _RowError("country", f'unknown country code "{cells["country"]}"')

    values = {name: _parse_cell(name, text) for name, text in cells.items() if text != ""}
    try:
        record = DamRecord(**values)
    except ValueError as e:
        raise _RowError(None, str(e))

    warnings = [(name, f"{name} absent") for name in _OBSERVATION_FIELDS if cells[name] == ""]
    if not record.is_large_dam:
        warnings.append(("wall_height_m", "below large-dam threshold 15 m"))
    return record, warnings


def _check_strict(strict: bool, diagnostics: List[Diagnostic], what: str):
    if strict and diagnostics:
        raise IngestError(
            f"strict ingest of {what} failed with {len(diagnostics)} diagnostic(s); first: {diagnostics[0]}",
            diagnostics,
        )


def ingest_reference_csv(source: Source, strict: bool = False) -> Tuple[ReferenceClass, List[Diagnostic]]:
    """Read a ``refclass.csv`` file into a ReferenceClass.

    Parameters
    ----------
    source : str | Path | IO
        Path or byte/text stream of UTF-8 CSV with the exact documented header.
    strict : bool, optional
        If True, any diagnostic (error or warning) fails the whole ingest.

    Returns
    -------
    Tuple[ReferenceClass, List[Diagnostic]]
        The accepted records and the per-row diagnostics. Rows with errors are
        rejected; rows with warnings are kept. Records missing a cost or
        schedule field are kept but yield no observation.

    Raises
    ------
    IngestError
        If the CSV is malformed, the header differs, or strict mode fails.
    EmptyReferenceClassError
        If no row was accepted.
    """
    frame = _read_table(source, REFERENCE_HEADER, "reference class")
    records: List[DamRecord] = []
    diagnostics: List[Diagnostic] = []
    seen = set()

    for i, row in enumerate(frame.to_dict(orient="records"), start=1):
        try:
            record, warnings = _parse_reference_row(row)
        except _RowError as e:
            diagnostics.append(Diagnostic(i, e.field, e.message))
            continue
        if record.id in seen:
            diagnostics.append(Diagnostic(i, "id", f"duplicate id {record.id}"))
            continue
        seen.add(record.id)
        records.append(record)
        diagnostics.extend(Diagnostic(i, name, message, "warning") for name, message in warnings)

    logger.info(
        "Ingested reference class: %d rows read, %d records accepted, %d diagnostics",
        len(frame),
        len(records),
        len(diagnostics),
    )
    _check_strict(strict, diagnostics, "reference class")
    if not records:
        raise EmptyReferenceClassError(diagnostics)
    return ReferenceClass(records, "all records"), diagnostics


def ingest_macro_csv(source: Source, strict: bool = False) -> Tuple[Dict[str, CountryMacroSeries], List[Diagnostic]]:
    """Read a long-format ``macro.csv`` into one CountryMacroSeries per country.

    Rows with an unknown country, a duplicated (country, year) pair or an
    invalid value are rejected as a whole. Empty cells leave the series
    uncovered for that year.

    Returns
    -------
    Tuple[Dict[str, CountryMacroSeries], List[Diagnostic]]
        Series keyed by country code, and the diagnostics.
    """
    frame = _read_table(source, MACRO_HEADER, "macro series")
    series: Dict[str, Dict[str, Dict[int, float]]] = defaultdict(lambda: {name: {} for name in MACRO_SERIES})
    diagnostics: List[Diagnostic] = []
    seen = set()

    for i, row in enumerate(frame.to_dict(orient="records"), start=1):
        cells = {name: row[name].strip() for name in MACRO_HEADER}
        try:
            country = cells["country"].upper()
            if country not in COUNTRY_REGIONS:
                raise _RowError("country", f'unknown country code "{cells["country"]}"')
            if cells["year"] == "":
                raise _RowError("year", "year absent")
            year = _integer("year", cells["year"])
            if (country, year) in seen:
                raise _RowError("year", f"duplicate year {year} for {country}")
            parsed = {}
            for column, attribute in _MACRO_COLUMNS.items():
                if cells[column] == "":
                    continue
                value = _number(column, cells[column])
                if column == "polity2":
                    if not value.is_integer() or not -10 <= value <= 10:
                        raise _RowError(column, f"polity2 must be an integer in [-10, 10], got {cells[column]}")
                elif value <= 0:
                    raise _RowError(column, f"{column} must be positive, got {cells[column]}")
                parsed[attribute] = value
        except _RowError as e:
            diagnostics.append(Diagnostic(i, e.field, e.message))
            continue
        seen.add((country, year))
        for attribute, value in parsed.items():
            series[country][attribute][year] = value

    macro = {country: CountryMacroSeries(country, **values) for country, values in sorted(series.items())}
    logger.info(
        "Ingested macro series: %d rows read, %d countries, %d diagnostics",
        len(frame),
        len(macro),
        len(diagnostics),
    )
    _check_strict(strict, diagnostics, "macro series")
    return macro, diagnostics


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_rows(rows: List[List[str]], header: Tuple[str, ...], dest: Source):
    frame = pd.DataFrame(rows, columns=list(header), dtype=str)
    frame.to_csv(dest, index=False, lineterminator="\n")


def write_reference_csv(rc: ReferenceClass, dest: Source):
    """Write a ReferenceClass in the ``refclass.csv`` format.

    Floats are written as their shortest round-trip text, so re-ingesting the
    file reproduces every ratio bit for bit.
    """
    rows = [[_cell(getattr(record, name)) for name in REFERENCE_HEADER] for record in rc.records]
    _write_rows(rows, REFERENCE_HEADER, dest)


def write_macro_csv(macro: Mapping[str, CountryMacroSeries], dest: Source):
    """Write country macro series in the long ``macro.csv`` format, sorted by country and year."""
    rows = []
    for country in sorted(macro):
        entry = macro[country]
        years = sorted(set().union(*(getattr(entry, attribute).keys() for attribute in MACRO_SERIES)))
        for year in years:
            cells = [country, str(year)]
            for attribute in MACRO_SERIES:
                value = getattr(entry, attribute).get(year)
                cells.append(_cell(float(value) if attribute != "polity2" and value is not None else value))
            rows.append(cells)
    _write_rows(rows, MACRO_HEADER, dest)
