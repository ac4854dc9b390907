"""Resistance sparsifiers of dense regular expanders."""

import json

from ._resistweave import (
    ConfigError,
    Graph,
    GraphError,
    all_resistances,
    circulant,
    complete_graph,
    cycle_graph,
    double_cover,
    edge_expansion,
    effective_resistance,
    hypercube,
    independent_sample_baseline,
    lambda2,
    matching_decomposition,
    play_game,
    random_regular,
    read_edge_list,
    resistance_sparsifier,
    resistance_sparsifier_with_degree,
    sparsifier_degree,
    thm9_certificate,
    verify_sparsifier,
    walecki_decomposition,
    write_edge_list,
)
from ._resistweave import run_report as _run_report


def run(command, graph, **kwargs):
    """Run a CLI pipeline in-process and return its report as a dict."""
    return json.loads(_run_report(command, graph, **kwargs))


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
