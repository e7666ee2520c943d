"""Twin-engine Gaussian phase-space simulator.

Analytic covariance algebra and a Monte Carlo ontic sampler over the same
means/moments formalism, with protocol scenarios comparing the two engines.
"""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import run_scenario_json as _run_scenario_json
from ._core import run_equivalence_json as _run_equivalence_json


def run_scenario(name, **kwargs):
    """Run one scenario and return its report as a dict."""
    return _json.loads(_run_scenario_json(name, **kwargs))


def run_equivalence(**kwargs):
    """Run the engine-equivalence sweep; returns a list of report dicts."""
    return _json.loads(_run_equivalence_json(**kwargs))
