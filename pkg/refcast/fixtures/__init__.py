"""Bundled JSON fixtures.

The directory holding the fixture files defaults to this package and can be
overridden with the ``REFCAST_FIXTURES`` environment variable, which must
point to a directory with the same file names.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict

from ..exceptions import FixtureError

FIXTURES_ENV = "REFCAST_FIXTURES"

BENCHMARKS = "benchmarks.json"
PUBLISHED_MODELS = "published_models.json"
LARGE_DAM_SUMMARY = "large_dam_summary.json"
DIAMER_BHASHA = "diamer_bhasha.json"


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURES_ENV)
    if override:
        return Path(override)
    return Path(__file__).parent


def load_fixture(name: str) -> Dict[str, Any]:
    """Load a fixture file as a dictionary.

    Parameters
    ----------
    name : str
        File name inside the fixture directory, e.g. ``"benchmarks.json"``.

    Raises
    ------
    FixtureError
        If the file is missing or is not a JSON object.
    """
    path = fixture_dir() / name
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise FixtureError(f"fixture not found: {path}")
    except json.JSONDecodeError as e:
        raise FixtureError(f"invalid fixture {path}: {e}")
    if not isinstance(data, dict):
        raise FixtureError(f"invalid fixture {path}: expected a JSON object")
    return data


def fixture_path(name: str) -> Path:
    return fixture_dir() / name
