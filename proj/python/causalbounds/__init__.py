"""Exact symbolic bounds on causal effects in two-sided DAGs."""

import json

from . import _core

__all__ = ["BoundsError", "analyze", "bounds", "evaluate", "latex", "simulate", "health"]


class BoundsError(Exception):
    """Raised for any non-200 response; `status` and `error` hold the details."""

    def __init__(self, status, error):
        super().__init__(f"{error.get('code', 'ERROR')}: {error.get('message', '')}")
        self.status = status
        self.error = error


def _request(graph, effect, constraints, timeout, emit=None):
    req = {"graph": graph}
    if effect is not None:
        req["effect"] = effect
    if constraints is not None:
        req["constraints"] = constraints
    options = {}
    if timeout is not None:
        options["timeout"] = timeout
    if emit is not None:
        options["emit"] = emit
    if options:
        req["options"] = options
    return req


def _call(fn, req):
    status, body = fn(json.dumps(req))
    body = json.loads(body)
    if status != 200:
        raise BoundsError(status, body.get("error", body))
    return body


def analyze(graph, effect=None, constraints=None, timeout=None, emit=("json",)):
    """Full analyze response: bounds, parameters, constraint strings, logs."""
    return _call(_core.analyze, _request(graph, effect, constraints, timeout, list(emit)))


def bounds(graph, effect=None, constraints=None, timeout=None):
    """Bounds JSON: {"effect", "lower", "upper", "parameters", "logs"}."""
    return analyze(graph, effect, constraints, timeout)["bounds"]


def latex(graph, effect=None, constraints=None, timeout=None):
    return analyze(graph, effect, constraints, timeout, emit=("latex",))["latex"]


def evaluate(bounds_json, params):
    """Evaluates bounds at parameter values; string values are exact rationals."""
    return _call(_core.evaluate, {"bounds": bounds_json, "params": params})


def simulate(graph, seed, draws=1000, effect=None, constraints=None, baseline_constraints=None, timeout=None):
    req = _request(graph, effect, constraints, timeout)
    req.update(seed=seed, draws=draws)
    if baseline_constraints is not None:
        req["baseline_constraints"] = baseline_constraints
    return _call(_core.simulate, req)


def health():
    return json.loads(_core.health())
