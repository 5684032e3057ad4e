"""Strong and logical contextuality by search; contextual fraction by LP.

Global assignments are flattened site-major: variable ``v`` is label
``v - offset[site]`` of ``site``. The search tries sites in index order,
labels in label order, +1 before -1, and checks a context only once all of
its measurements are decided.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .empirical import EmpiricalModel, Support, outcome_tuple, support_of
from .lp import OPTIMAL, LinearProgram, maximize
from .scenario import Context, GlobalAssignment, assignment_from_bits, contexts

MAX_CF_MEASUREMENTS = 20
PRICING_TOL = 1e-9
PRICING_CHUNK = 1 << 16


@dataclass(frozen=True)
class SearchResult:
    consistent_assignment_exists: bool
    witness: GlobalAssignment | None
    nodes_explored: int
    min_support_probability: float | None = None


@dataclass(frozen=True)
class FractionResult:
    non_contextual_fraction: float
    contextual_fraction: float
    lp_status: str
    columns_generated: int = 0


class _SearchProblem:
    """Flat arrays describing a support for the search kernel."""

    def __init__(self, sup: Support):
        s = sup.scenario
        self.support = sup
        self.offsets = np.concatenate([[0], np.cumsum(s.shape)[:-1]]).astype(np.int32)
        self.n_vars = s.n_measurements
        ctx = np.array(list(contexts(s)), dtype=np.int32).reshape(s.n_contexts, s.n_sites)
        self.ctx_vars = np.ascontiguousarray(ctx + self.offsets)
        last = self.ctx_vars.max(axis=1)
        order = np.argsort(last, kind="stable")
        counts = np.bincount(last, minlength=self.n_vars)
        self.check_ptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int32)
        self.check_ctx = order.astype(np.int32)
        self.possible = np.ascontiguousarray(sup.possible, dtype=np.uint8)

    def run(self, fixed=None, search=None):
        if fixed is None:
            fixed = np.full(self.n_vars, -1, dtype=np.int8)
        search = search or kernels.search
        return search(self.ctx_vars, self.possible, self.check_ptr, self.check_ctx, fixed)

    def fixed_for_event(self, ctx: Context, out_idx: int) -> np.ndarray:
        fixed = np.full(self.n_vars, -1, dtype=np.int8)
        n = len(ctx)
        for site, label in enumerate(ctx):
            fixed[self.offsets[site] + label] = (out_idx >> (n - 1 - site)) & 1
        return fixed


def find_consistent_assignment(sup: Support, model: EmpiricalModel | None = None) -> SearchResult:
    """Exhaustive backtracking search for an assignment inside ``sup``.

    When ``model`` is given the witness's smallest probability over all
    contexts is reported as a diagnostic.
    """
    problem = _SearchProblem(sup)
    found, bits, nodes = problem.run()
    if not found:
        return SearchResult(False, None, nodes)
    witness = assignment_from_bits(sup.scenario, bits.tolist())
    min_prob = None
    if model is not None:
        min_prob = float(_assignment_event_probs(model, bits).min())
    return SearchResult(True, witness, nodes, min_prob)


def _assignment_event_probs(model: EmpiricalModel, bits: np.ndarray) -> np.ndarray:
    problem = _SearchProblem(support_of(model))
    n = model.scenario.n_sites
    weights = 1 << np.arange(n - 1, -1, -1)
    idx = (bits[problem.ctx_vars] * weights).sum(axis=1)
    return model.probs[np.arange(len(idx)), idx]


def is_strongly_contextual(sup: Support) -> bool:
    return not find_consistent_assignment(sup).consistent_assignment_exists


def logically_contextual_events(sup: Support) -> list[tuple[Context, tuple[int, ...]]]:
    """Possible events that extend to no support-consistent global assignment.

    Events are returned in context order, then outcome-index order. Per-event
    searches run on up to ``CONTEXTURE_THREADS`` workers; the compiled
    kernel releases the GIL.
    """
    problem = _SearchProblem(sup)
    n = sup.scenario.n_sites
    events = [
        (ctx, int(k))
        for ctx, row in zip(contexts(sup.scenario), sup.possible)
        for k in np.flatnonzero(row)
    ]

    def extendable(event):
        ctx, k = event
        return problem.run(problem.fixed_for_event(ctx, k))[0]

    workers = kernels.thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flags = list(pool.map(extendable, events))
    else:
        flags = [extendable(e) for e in events]
    return [(ctx, outcome_tuple(k, n)) for (ctx, k), ok in zip(events, flags) if not ok]


# -- contextual fraction ----------------------------------------------------

def _event_rows(problem: _SearchProblem, n_sites: int, bits: np.ndarray) -> np.ndarray:
    """Row index ``c * 2**n + outcome`` hit by each assignment in ``bits``.

    ``bits`` has shape ``(k, n_vars)``; the result has shape ``(k, n_contexts)``.
    """
    weights = 1 << np.arange(n_sites - 1, -1, -1)
    out_idx = np.tensordot(bits[:, problem.ctx_vars], weights, axes=([2], [0]))
    n_ctx = problem.ctx_vars.shape[0]
    return out_idx + (np.arange(n_ctx) << n_sites)


def _assignment_bits(start: int, stop: int, n_vars: int) -> np.ndarray:
    """Bits of assignments ``start..stop-1``; variable 0 is the most significant."""
    codes = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n_vars - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(np.uint8)


def contextual_fraction(e: EmpiricalModel, max_rounds: int = 10_000) -> FractionResult:
    """Largest weight of a non-contextual sub-model, by column generation.

    The LP has one column per global assignment ``g`` and one row per event
    ``(C, s)``: ``sum_{g|C = s} b_g <= e_C(s)``; it maximizes ``sum_g b_g``.
    Columns enter lazily: each round prices every assignment against the
    current row duals and adds the most profitable ones.
    """
    s = e.scenario
    if s.n_measurements > MAX_CF_MEASUREMENTS:
        raise ValueError(
            f"{s.n_measurements} measurements exceeds the LP guard of {MAX_CF_MEASUREMENTS}"
        )
    problem = _SearchProblem(support_of(e))
    n, n_vars = s.n_sites, problem.n_vars
    rhs = e.probs.reshape(-1)
    n_rows = rhs.size
    total = 1 << n_vars
    columns: list[int] = []
    column_rows: list[np.ndarray] = []
    have: set[int] = set()
    duals = np.zeros(n_rows)
    status, value = OPTIMAL, 0.0
    batch = max(8, min(256, n_rows // 4))

    for _ in range(max_rounds):
        best_codes, best_costs = [], []
        for start in range(0, total, PRICING_CHUNK):
            stop = min(total, start + PRICING_CHUNK)
            rows = _event_rows(problem, n, _assignment_bits(start, stop, n_vars))
            reduced = 1.0 - duals[rows].sum(axis=1)
            keep = np.flatnonzero(reduced > PRICING_TOL)
            if keep.size:
                top = keep[np.argsort(-reduced[keep], kind="stable")[:batch]]
                best_codes.extend((start + top).tolist())
                best_costs.extend(reduced[top].tolist())
        order = np.argsort(-np.array(best_costs), kind="stable")
        new = [best_codes[k] for k in order if best_codes[k] not in have][:batch]
        if not new:
            break
        for code in new:
            have.add(code)
            columns.append(code)
            column_rows.append(_event_rows(problem, n, _assignment_bits(code, code + 1, n_vars))[0])
        A = np.zeros((n_rows, len(columns)))
        for j, rows in enumerate(column_rows):
            A[rows, j] = 1.0
        sol = maximize(LinearProgram(np.ones(len(columns)), A, rhs))
        status = sol.status
        if status != OPTIMAL:
            break
        value, duals = sol.value, sol.duals
    else:
        status = "iteration-limit"

    ncf = min(max(value, 0.0), 1.0)
    return FractionResult(ncf, 1.0 - ncf, status, len(columns))
