"""Volumetric Penrose inequality toolkit: ADM mass, capacity and symmetrization."""

import json

from ._core import *  # noqa: F401,F403
from ._core import InputError, HypothesisError, NumericalError, run_scenario_file, run_scenario_text

EXIT_CODES = {"PASS": 0, "CHAIN_VIOLATION": 1, "HYPOTHESIS_FAILED": 2, "NUMERICAL_FAILURE": 3, "INPUT_ERROR": 4}


def run_scenario(text, mode=None, resolution=None):
    """Run a scenario given as YAML text; returns the report as a dict."""
    return json.loads(run_scenario_text(text, mode=mode, resolution=resolution))


def verify(path, mode=None, resolution=None):
    """Run a scenario file; returns the report as a dict."""
    return json.loads(run_scenario_file(path, mode=mode, resolution=resolution))
