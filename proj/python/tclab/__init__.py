"""Python interface to the tclab library."""

import json

from ._core import (
    TclabError,
    WindingCurve,
    closed_form_decay_constant,
    cone_difference_bound,
    epiperimetric_gap,
    linearized_ratio,
    optimal_excess,
)
from ._core import run_config as _run_config

__all__ = [
    "TclabError",
    "WindingCurve",
    "closed_form_decay_constant",
    "cone_difference_bound",
    "epiperimetric_gap",
    "linearized_ratio",
    "optimal_excess",
    "run",
]


def run(config, out_dir, seed=None, quad_order=None, jobs=1):
    """Run a scenario config given as a dict, JSON text or path.

    Returns (exit_code, summary_rows) where exit_code follows the CLI: 0 when
    every verdict passed and 1 otherwise.
    """
    if isinstance(config, dict):
        text = json.dumps(config)
    elif isinstance(config, str) and config.lstrip().startswith("{"):
        text = config
    else:
        with open(config, encoding="utf-8") as fh:
            text = fh.read()
    return _run_config(text, str(out_dir), seed, quad_order, jobs)
