"""Born-rule empirical models, their supports, and no-signalling checks.

Probability tables are dense arrays of shape ``(n_contexts, 2**n_sites)``.
Rows follow :func:`contexture.scenario.contexts`; columns are outcome tuples
packed big-endian with bit ``0`` for +1 and ``1`` for -1, so column ``0`` is
``+...+`` and the last column is ``-...-``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import inner, num_qubits, tensor
from .scenario import (
    Context,
    LocalMeasurement,
    Scenario,
    bit_to_outcome,
    contexts,
    eigenstate,
    equatorial,
)

SUPPORT_EPS = 1e-10
ROW_SUM_TOL = 1e-9


def outcome_string(index: int, n: int) -> str:
    return "".join("-" if (index >> (n - 1 - s)) & 1 else "+" for s in range(n))


def outcome_index(os: Sequence[int]) -> int:
    idx = 0
    for o in os:
        idx = (idx << 1) | (0 if o == 1 else 1)
    return idx


def outcome_tuple(index: int, n: int) -> tuple[int, ...]:
    return tuple(bit_to_outcome((index >> (n - 1 - s)) & 1) for s in range(n))


def amplitude(psi: np.ndarray, ms: Sequence[LocalMeasurement], os: Sequence[int]) -> complex:
    """``<(ms)_os | psi>`` for the product of local eigenstates."""
    if len(ms) != len(os) or len(ms) != num_qubits(psi):
        raise ValueError("measurement/outcome count does not match the state")
    return inner(tensor(*(eigenstate(m, o) for m, o in zip(ms, os))), psi)


def born(psi: np.ndarray, ms: Sequence[LocalMeasurement], os: Sequence[int]) -> float:
    return abs(amplitude(psi, ms, os)) ** 2


def basis_change(m: LocalMeasurement) -> np.ndarray:
    """Rows are the conjugated +1 and -1 eigenvectors of ``m``."""
    return np.array([eigenstate(m, 1).conj(), eigenstate(m, -1).conj()])


def site_amplitudes(psi: np.ndarray, tables: Sequence[np.ndarray]) -> np.ndarray:
    """Contract ``psi`` with per-site bra tables.

    ``tables[s]`` has shape ``(L_s, ..., 2)``: any leading axes, last axis the
    computational basis. Returns the contracted array with the leading axes
    of every site concatenated in site order.
    """
    n = num_qubits(psi)
    t = psi.reshape((2,) * n)
    for table in tables:
        # contract the next physical axis (always axis 0 of the remaining ones)
        t = np.tensordot(t, table, axes=([0], [table.ndim - 1]))
    return t


@dataclass(frozen=True)
class EmpiricalModel:
    scenario: Scenario
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        expected = (self.scenario.n_contexts, 1 << self.scenario.n_sites)
        if probs.shape != expected:
            raise ValueError(f"table shape {probs.shape} != {expected}")
        if np.any(probs < -1e-12) or not np.all(np.isfinite(probs)):
            raise ValueError("probabilities must be finite and non-negative")
        probs = np.clip(probs, 0.0, None)
        sums = probs.sum(axis=1)
        if np.any(np.abs(sums - 1) > ROW_SUM_TOL):
            worst = int(np.argmax(np.abs(sums - 1)))
            raise ValueError(f"context row {worst} sums to {sums[worst]}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def distribution(self, ctx: Context) -> np.ndarray:
        return self.probs[self.scenario.context_index(ctx)]

    def to_json(self) -> dict:
        n = self.scenario.n_sites
        return {
            "scenario": self.scenario.to_json(),
            "table": [
                {
                    "context": list(ctx),
                    "probs": {outcome_string(k, n): float(p) for k, p in enumerate(row)},
                }
                for ctx, row in zip(contexts(self.scenario), self.probs)
            ],
        }

    @classmethod
    def from_json(cls, data) -> "EmpiricalModel":
        if not isinstance(data, dict):
            raise ValueError("model: expected a JSON object")
        if "scenario" not in data or "table" not in data:
            raise ValueError("model: needs fields 'scenario' and 'table'")
        scenario = Scenario.from_json(data["scenario"])
        n = scenario.n_sites
        probs = np.full((scenario.n_contexts, 1 << n), np.nan)
        for r, row in enumerate(data["table"]):
            try:
                ci = scenario.context_index(tuple(int(k) for k in row["context"]))
                for key, p in row["probs"].items():
                    if len(key) != n or set(key) - {"+", "-"}:
                        raise ValueError(f"bad outcome string {key!r}")
                    probs[ci, int(key.replace("+", "0").replace("-", "1"), 2)] = float(p)
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"model: table[{r}]: {exc}") from None
        probs = np.nan_to_num(probs, nan=0.0)
        return cls(scenario, probs)


@dataclass(frozen=True)
class Support:
    """Possibilistic skeleton: ``possible[c, o]`` is True for possible events."""

    scenario: Scenario
    possible: np.ndarray

    def __post_init__(self):
        possible = np.array(self.possible, dtype=bool)
        expected = (self.scenario.n_contexts, 1 << self.scenario.n_sites)
        if possible.shape != expected:
            raise ValueError(f"support shape {possible.shape} != {expected}")
        if not possible.any(axis=1).all():
            raise ValueError("every context needs at least one possible outcome")
        possible.setflags(write=False)
        object.__setattr__(self, "possible", possible)

    def events(self, ctx: Context) -> list[tuple[int, ...]]:
        row = self.possible[self.scenario.context_index(ctx)]
        n = self.scenario.n_sites
        return [outcome_tuple(k, n) for k in np.flatnonzero(row)]

    def __eq__(self, other):
        if not isinstance(other, Support):
            return NotImplemented
        return self.scenario == other.scenario and np.array_equal(self.possible, other.possible)

    __hash__ = None


def build_model(psi: np.ndarray, s: Scenario) -> EmpiricalModel:
    if num_qubits(psi) != s.n_sites:
        raise ValueError(f"state has {num_qubits(psi)} qubits, scenario has {s.n_sites} sites")
    tables = [np.array([basis_change(m) for m in site]) for site in s.sites]
    amps = site_amplitudes(psi, tables)
    # axes are (L_0, o_0, L_1, o_1, ...); group labels first, then outcomes
    n = s.n_sites
    amps = np.transpose(amps, [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)])
    probs = (np.abs(amps) ** 2).reshape(s.n_contexts, 1 << n)
    return EmpiricalModel(s, probs)


def support_of(e: EmpiricalModel, eps: float = SUPPORT_EPS) -> Support:
    if eps <= 0:
        raise ValueError("eps must be positive")
    return Support(e.scenario, e.probs > eps)


def family_scenario(N: int) -> Scenario:
    """Sites ``{0..N-1}, {0..N-1}, {0, N/2}`` with label ``i`` at angle ``i pi/N``."""
    _check_even(N)
    ring = [equatorial(i * np.pi / N) for i in range(N)]
    return Scenario([ring, ring, [equatorial(0.0), equatorial(np.pi / 2)]])


def _check_even(N: int) -> None:
    if not isinstance(N, (int, np.integer)) or N < 2 or N % 2:
        raise ValueError("N must be even and >= 2")


def exact_family_support(N: int) -> Support:
    """Support of the ``N``-family model, decided by integer arithmetic mod ``2N``.

    With angles in units of ``pi/N`` an event ``(a, b, c)`` at context
    ``(i, j, k)`` is impossible iff the angle sum hits ``N`` mod ``2N``. The
    third site contributes ``cN`` for label ``k = 0`` and ``(-1)^c`` for
    ``k = N/2``.
    """
    _check_even(N)
    s = family_scenario(N)
    possible = np.ones((s.n_contexts, 8), dtype=bool)
    for ci, (i, j, k) in enumerate(contexts(s)):
        for idx in range(8):
            a, b, c = (idx >> 2) & 1, (idx >> 1) & 1, idx & 1
            third = c * N if k == 0 else (-1 if c else 1)
            if (i + a * N + j + b * N + third) % (2 * N) == N:
                possible[ci, idx] = False
    return Support(s, possible)


@dataclass(frozen=True)
class SignallingReport:
    ok: bool
    worst_violation: float


def no_signalling_check(e: EmpiricalModel, tol: float = 1e-9) -> SignallingReport:
    """Compare marginals on every proper site subset across agreeing contexts."""
    s = e.scenario
    n = s.n_sites
    table = e.probs.reshape(s.shape + (2,) * n)
    worst = 0.0
    for r in range(1, n):
        for keep in itertools.combinations(range(n), r):
            drop = [q for q in range(n) if q not in keep]
            marg = table.sum(axis=tuple(n + q for q in drop))
            # marg axes: (L_0..L_{n-1}, kept outcome axes); spread over dropped labels
            spread = marg.max(axis=tuple(drop)) - marg.min(axis=tuple(drop))
            worst = max(worst, float(spread.max()))
    return SignallingReport(ok=worst <= tol, worst_violation=worst)
