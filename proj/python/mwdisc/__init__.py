"""Multiway discrepancy and singular value toolkit."""

import json

import numpy as np

from . import _core
from ._core import (
    Error,
    biregular,
    block_table,
    butler_rhs,
    monotonicity_limit,
    random_graph,
    relevance_threshold,
    step_approx,
    svd,
    theorem1_rhs,
)

__all__ = [
    "Error",
    "biregular",
    "block_table",
    "butler_rhs",
    "min_disc",
    "modularity_spectrum",
    "monotonicity_limit",
    "normalized_spectrum",
    "partition_discrepancy",
    "random_graph",
    "relevance_threshold",
    "run_cli",
    "spectral_clustering",
    "step_approx",
    "svd",
    "theorem1_rhs",
    "trace",
    "verify",
]


def _matrix(a):
    return np.ascontiguousarray(a, dtype=float)


def normalized_spectrum(table):
    return json.loads(_core.normalized_spectrum(_matrix(table)))


def modularity_spectrum(weights):
    return json.loads(_core.modularity_spectrum(_matrix(weights)))


def partition_discrepancy(table, row_labels, col_labels, k, mode="exact", **options):
    return json.loads(_core.partition_discrepancy(_matrix(table), list(row_labels), list(col_labels), k, mode, **options))


def min_disc(table, k, mode="exact", **options):
    return json.loads(_core.min_disc(_matrix(table), k, mode, **options))


def spectral_clustering(matrix, k, graph=False, restarts=20, seed=0):
    return json.loads(_core.spectral_clustering(_matrix(matrix), k, graph, restarts, seed))


def verify(matrix, k, graph=False, directed=False, mode="exact", budget=1 << 24):
    return json.loads(_core.verify(_matrix(matrix), k, graph, directed, mode, budget))


def trace(table, row_labels, col_labels, k):
    return json.loads(_core.trace(_matrix(table), list(row_labels), list(col_labels), k))


def run_cli(args):
    """Returns (exit code, report dict or None, diagnostics)."""
    code, out, err = _core.run_cli([str(a) for a in args])
    report = json.loads(out) if out.startswith("{") else None
    return code, report, err
