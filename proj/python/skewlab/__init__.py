"""Python front end for the skewlab experiment runner.

Configs are plain dicts mirroring the CLI's JSON schema; reports come back
as dicts with "config", "rows" and "summary" keys.
"""

import json

from skewlab import _core

golden_alpha = _core.golden_alpha
branch_index = _core.branch_index
gamma_quadrature = _core.gamma_quadrature
gamma_birkhoff = _core.gamma_birkhoff


def run(config, seed=-1, horizon=-1):
    """Run one experiment; raises ValueError on a bad config."""
    return json.loads(_core.run_json(json.dumps(config), seed, horizon))


def report_to_csv(report):
    return _core.report_to_csv(json.dumps(report))


def log_prefix_product(weights, n):
    return _core.log_prefix_product(json.dumps(weights), n)


def cocycle_sum(base, cocycle, n):
    return _core.cocycle_sum(json.dumps(base), json.dumps(cocycle), n)


__all__ = [
    "run",
    "report_to_csv",
    "log_prefix_product",
    "cocycle_sum",
    "gamma_quadrature",
    "gamma_birkhoff",
    "branch_index",
    "golden_alpha",
]
