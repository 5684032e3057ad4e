"""Small dense linear programs: ``max c.x  s.t.  A x <= b,  x >= 0``.

:func:`maximize` is a two-phase tableau simplex with Bland's anti-cycling
rule. :func:`brute_force_vertex_opt` enumerates basic solutions in exact
rational arithmetic and serves as a test oracle for tiny instances.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-9
MAX_ITER = 10**6

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"
ITERATION_LIMIT = "iteration-limit"


@dataclass(frozen=True)
class LinearProgram:
    objective: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.objective, dtype=float))
        A = np.asarray(self.A, dtype=float).reshape(-1, len(c))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if A.shape[0] != len(b):
            raise ValueError(f"{A.shape[0]} constraint rows but {len(b)} bounds")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise ValueError("LP data must be finite")
        for arr in (c, A, b):
            arr.setflags(write=False)
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_constraints(self) -> int:
        return len(self.b)

    @classmethod
    def from_rows(cls, objective, rows) -> "LinearProgram":
        """Build from ``[(coeffs, "<=" or ">=", bound), ...]``."""
        A, b = [], []
        for coeffs, rel, bound in rows:
            sign = {"<=": 1.0, ">=": -1.0}[rel]
            A.append(sign * np.asarray(coeffs, dtype=float))
            b.append(sign * float(bound))
        n = len(np.atleast_1d(objective))
        return cls(objective, np.array(A).reshape(-1, n), np.array(b))


@dataclass(frozen=True)
class LpSolution:
    status: str
    value: float = float("nan")
    point: np.ndarray = field(default_factory=lambda: np.zeros(0))
    duals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    iterations: int = 0


class _Tableau:
    def __init__(self, T, basis):
        self.T = T
        self.basis = basis
        self.iterations = 0

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = j
        self.iterations += 1

    def run(self, allowed: np.ndarray) -> str:
        """Maximize the objective row (last row holds reduced costs)."""
        T = self.T
        m = T.shape[0] - 1
        while True:
            if self.iterations >= MAX_ITER:
                return ITERATION_LIMIT
            reduced = T[m, :-1]
            cand = np.flatnonzero((reduced > PIVOT_TOL) & allowed)
            if cand.size == 0:
                return OPTIMAL
            j = int(cand[0])
            col = T[:m, j]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return UNBOUNDED
            ratios = T[rows, -1] / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = int(min(ties, key=lambda i: self.basis[i]))
            self.pivot(r, j)


def _set_objective(tab: _Tableau, cost: np.ndarray) -> None:
    T = tab.T
    m = T.shape[0] - 1
    T[m, :-1] = cost
    T[m, -1] = 0.0
    cb = cost[tab.basis]
    T[m] -= cb @ T[:m]


def maximize(lp: LinearProgram) -> LpSolution:
    A, b, c = lp.A, lp.b, lp.objective
    m, n = A.shape
    if m == 0:
        if np.any(c > 0):
            return LpSolution(UNBOUNDED)
        return LpSolution(OPTIMAL, 0.0, np.zeros(n), np.zeros(0))
    neg = b < 0
    n_art = int(neg.sum())
    sign = np.where(neg, -1.0, 1.0)
    width = n + m + n_art
    T = np.zeros((m + 1, width + 1))
    T[:m, :n] = A * sign[:, None]
    T[:m, n:n + m] = np.diag(sign)
    art_rows = np.flatnonzero(neg)
    T[art_rows, n + m + np.arange(n_art)] = 1.0
    T[:m, -1] = b * sign
    basis = [n + i for i in range(m)]
    for k, i in enumerate(art_rows):
        basis[i] = n + m + k
    tab = _Tableau(T, basis)
    allowed = np.ones(width, dtype=bool)

    if n_art:
        phase1 = np.zeros(width)
        phase1[n + m:] = -1.0
        _set_objective(tab, phase1)
        status = tab.run(allowed)
        if status == ITERATION_LIMIT:
            return LpSolution(ITERATION_LIMIT, iterations=tab.iterations)
        if -T[m, -1] < -FEAS_TOL * max(1.0, np.abs(b).max()):
            return LpSolution(INFEASIBLE, iterations=tab.iterations)
        # drive zero-level artificials out of the basis
        for r in range(m):
            if tab.basis[r] >= n + m:
                row = T[r, :n + m]
                nz = np.flatnonzero(np.abs(row) > PIVOT_TOL)
                if nz.size:
                    tab.pivot(r, int(nz[0]))
        allowed[n + m:] = False

    cost = np.zeros(width)
    cost[:n] = c
    _set_objective(tab, cost)
    status = tab.run(allowed)
    if status != OPTIMAL:
        return LpSolution(status, iterations=tab.iterations)

    x = np.zeros(width)
    x[tab.basis] = T[:m, -1]
    point = np.clip(x[:n], 0.0, None)
    # dual price of original row i is minus the reduced cost of its slack
    duals = np.clip(-T[m, n:n + m], 0.0, None)
    return LpSolution(OPTIMAL, float(c @ point), point, duals, tab.iterations)


# -- exact oracle -----------------------------------------------------------

MAX_ORACLE_VARS = 12
MAX_ORACLE_CONSTRAINTS = 20


def _solve_exact(M, rhs):
    """Gauss-Jordan over ``Fraction``; returns None when singular."""
    k = len(M)
    aug = [list(row) + [v] for row, v in zip(M, rhs)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b_ for a, b_ in zip(aug[r], aug[col])]
    return [aug[r][k] for r in range(k)]


def _enumerate_vertices(A, b, c):
    """Best objective over basic feasible solutions, or None if none exist."""
    m, n = len(A), len(c)
    rows = [list(A[i]) for i in range(m)]
    rows += [[Fraction(-1) if j == i else Fraction(0) for j in range(n)] for i in range(n)]
    rhs = list(b) + [Fraction(0)] * n
    best = None
    for subset in itertools.combinations(range(m + n), n):
        x = _solve_exact([rows[i] for i in subset], [rhs[i] for i in subset])
        if x is None:
            continue
        if any(v < 0 for v in x):
            continue
        if any(sum(a * v for a, v in zip(A[i], x)) > b[i] for i in range(m)):
            continue
        val = sum(ci * v for ci, v in zip(c, x))
        if best is None or val > best[0]:
            best = (val, x)
    return best


def brute_force_vertex_opt(lp: LinearProgram) -> LpSolution:
    """Exact optimum by enumerating every vertex in rational arithmetic."""
    n, m = lp.num_vars, lp.num_constraints
    if n > MAX_ORACLE_VARS or m > MAX_ORACLE_CONSTRAINTS:
        raise ValueError(
            f"oracle limited to {MAX_ORACLE_VARS} variables and "
            f"{MAX_ORACLE_CONSTRAINTS} constraints, got {n} and {m}"
        )
    A = [[Fraction(float(v)) for v in row] for row in lp.A]
    b = [Fraction(float(v)) for v in lp.b]
    c = [Fraction(float(v)) for v in lp.objective]
    best = _enumerate_vertices(A, b, c)
    if best is None:
        return LpSolution(INFEASIBLE)
    # recession direction d >= 0 with A d <= 0 and c.d > 0 means unbounded
    ray = _enumerate_vertices(
        [[v for v in row] for row in A] + [[Fraction(1)] * n],
        [Fraction(0)] * m + [Fraction(1)],
        c,
    )
    if ray is not None and ray[0] > 0:
        return LpSolution(UNBOUNDED)
    val, x = best
    return LpSolution(OPTIMAL, float(val), np.array([float(v) for v in x]))
