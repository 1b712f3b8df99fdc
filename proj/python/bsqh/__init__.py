"""Moment graphs and quantum cohomology of Bott-Samelson varieties.

Thin wrappers over the C++ core; every function returns plain dicts/lists
decoded from the core's canonical JSON reports.
"""

import json

from . import _core

__all__ = [
    "moment_graph",
    "moment_graph_dot",
    "cohomology",
    "multiply",
    "effective_cone",
    "curve_neighborhood",
    "qh",
    "conjecture_o",
]


def moment_graph(cartan, word):
    """Moment graph of Z(word) as a dict with vertices and labeled edges."""
    return json.loads(_core.moment_graph_json(cartan, list(word)))


def moment_graph_dot(cartan, word):
    return _core.moment_graph_dot(cartan, list(word))


def cohomology(cartan, word):
    return json.loads(_core.cohomology_json(cartan, list(word)))


def multiply(cartan, word, a, b):
    """Product of two sigma basis classes, as {epsilon: coefficient}."""
    return json.loads(_core.multiply_json(cartan, list(word), a, b))


def effective_cone(cartan, word):
    return json.loads(_core.eff_cone_json(cartan, list(word)))


def curve_neighborhood(cartan, word, cls, from_points):
    return json.loads(
        _core.curve_neighborhood_json(cartan, list(word), list(cls), list(from_points))
    )


def qh(cartan, word, y3=1):
    """Solve the commutativity constraints and return the full report."""
    return json.loads(_core.qh_json(cartan, list(word), y3))


def conjecture_o(cartan, word, tolerance=1e-10):
    return json.loads(_core.conjecture_o_json(cartan, list(word), tolerance))
