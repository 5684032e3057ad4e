"""Explicit global assignments and analytic gadgets for the state families.

Assignments over the whole Bloch sphere are tuples of per-site functions
``LocalMeasurement -> outcome``. Interval tests snap angles lying within
``1e-12`` of a multiple of ``pi/2`` onto it, so the half-open boundaries of
each case split are honoured on grids built from rational multiples of pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .empirical import family_scenario, site_amplitudes
from .linalg import binary_entropy, num_qubits, partial_trace, vn_entropy
from .scenario import LocalMeasurement, Scenario, eigenstate
from .states import balanced, two_product_superposition

PI = math.pi
HALF_PI = PI / 2
SNAP_TOL = 1e-12
VIOLATION_PROB = 1e-14
VANISHING_TOL = 1e-9

AssignmentFn = tuple[Callable[[LocalMeasurement], int], ...]


def _snap(x: float) -> float:
    k = round(x / HALF_PI)
    target = k * HALF_PI
    return target if abs(x - target) <= SNAP_TOL else x


def _phi_in(phi: float, low: float) -> float:
    """Representative of ``phi`` in ``[low, low + 2 pi)``, after snapping."""
    phi = _snap(phi)
    while phi < low:
        phi += 2 * PI
    while phi >= low + 2 * PI:
        phi -= 2 * PI
    return _snap(phi)


def _phi_in_open_closed(phi: float, low: float) -> float:
    """Representative of ``phi`` in ``(low, low + 2 pi]``."""
    phi = _phi_in(phi, low)
    return phi + 2 * PI if phi == low else phi


# -- hemisphere assignments ---------------------------------------------------

def _bipartite_g1(m: LocalMeasurement) -> int:
    theta = _snap(m.theta)
    if theta == PI:
        return 1
    if theta == 0:
        return -1
    return 1 if _phi_in(m.phi, -HALF_PI) < HALF_PI else -1


def _bipartite_g2(m: LocalMeasurement) -> int:
    theta = _snap(m.theta)
    if theta == PI:
        return 1
    if theta == 0:
        return -1
    return 1 if _phi_in_open_closed(m.phi, -HALF_PI) <= HALF_PI else -1


def assignment_bipartite() -> AssignmentFn:
    """Two-qubit hemisphere assignment; the parties differ on the boundary."""
    return (_bipartite_g1, _bipartite_g2)


def _w_h(m: LocalMeasurement) -> int:
    theta = _snap(m.theta)
    if theta == 0:
        return 1
    if theta == PI:
        return -1
    return 1 if _phi_in_open_closed(m.phi, -PI) <= 0 else -1


def _w_g3(m: LocalMeasurement) -> int:
    theta = _snap(m.theta)
    if theta == PI:
        return 1
    if theta == 0:
        return -1
    return 1 if _phi_in_open_closed(m.phi, -PI) <= 0 else -1


def assignment_w() -> AssignmentFn:
    return (_w_h, _w_h, _w_g3)


def _north(m: LocalMeasurement) -> int:
    return 1 if _snap(m.theta) <= HALF_PI else -1


def assignment_north(n: int) -> AssignmentFn:
    """+1 on the northern hemisphere and the equator, at every site."""
    return (_north,) * n


def equatorial_h(phi: float) -> int:
    return 1 if _phi_in_open_closed(phi, -HALF_PI) <= HALF_PI else -1


def _equatorial(m: LocalMeasurement) -> int:
    if _snap(m.theta) != HALF_PI:
        raise ValueError(f"{m} is not an equatorial measurement")
    return equatorial_h(m.phi)


def assignment_equatorial(n: int = 3) -> AssignmentFn:
    return (_equatorial,) * n


def assignment_for(g: AssignmentFn, s: Scenario) -> tuple[tuple[int, ...], ...]:
    """Restrict a sphere-wide assignment to the labels of a finite scenario."""
    return tuple(tuple(gi(m) for m in site) for gi, site in zip(g, s.sites))


# -- grid verification --------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    contexts_checked: int
    violations: list[tuple[tuple[LocalMeasurement, ...], float]]
    min_prob: float

    @property
    def ok(self) -> bool:
        return not self.violations


def bloch_grid(d: int) -> list[LocalMeasurement]:
    """``theta = k pi/d`` (poles included) times ``phi = 2 pi l/d``."""
    return [
        LocalMeasurement(k * PI / d, 2 * PI * l / d) for k in range(d + 1) for l in range(d)
    ]


def equatorial_grid(d: int) -> list[LocalMeasurement]:
    return [LocalMeasurement(HALF_PI, 2 * PI * l / d) for l in range(d)]


def verify_assignment(
    psi: np.ndarray, g: AssignmentFn, grid: Scenario | Sequence[Sequence[LocalMeasurement]]
) -> VerificationReport:
    """Probability of the ``g``-assigned outcome at every grid context.

    ``grid`` is either a :class:`Scenario`, meaning the full product of its
    per-site lists, or an explicit sequence of contexts.
    """
    n = num_qubits(psi)
    if len(g) != n:
        raise ValueError(f"assignment has {len(g)} sites, state has {n} qubits")
    if isinstance(grid, Scenario):
        if grid.n_sites != n:
            raise ValueError("grid site count differs from the state")
        tables = [
            np.array([eigenstate(m, gi(m)).conj() for m in site]) for gi, site in zip(g, grid.sites)
        ]
        probs = (np.abs(site_amplitudes(psi, tables)) ** 2).reshape(-1)
        lookup = lambda idx: grid.measurements(np.unravel_index(idx, grid.shape))  # noqa: E731
    else:
        ctxs = [tuple(c) for c in grid]
        if any(len(c) != n for c in ctxs):
            raise ValueError("grid context length differs from the state")
        if not ctxs:
            return VerificationReport(0, [], math.inf)
        bras = np.array(
            [[eigenstate(m, gi(m)).conj() for gi, m in zip(g, c)] for c in ctxs]
        )  # (k, n, 2)
        t = np.broadcast_to(psi.reshape((1,) + (2,) * n), (len(ctxs),) + (2,) * n)
        for site in range(n):
            t = np.einsum("kb...,kb->k...", t, bras[:, site, :])
        probs = np.abs(t) ** 2
        lookup = lambda idx: ctxs[idx]  # noqa: E731
    bad = np.flatnonzero(probs <= VIOLATION_PROB)
    violations = [(lookup(int(i)), float(probs[i])) for i in bad]
    return VerificationReport(int(probs.size), violations, float(probs.min()))


def unbalanced_equatorial_check(
    delta: float, lambdas: Sequence[float], Phi: float, grid: Scenario
) -> VerificationReport:
    """Verify the northern assignment on an unbalanced state, equators included."""
    from .states import ghz_slocc

    if not 0.0 < delta < PI / 4:
        raise ValueError("delta must lie strictly inside (0, pi/4)")
    return verify_assignment(ghz_slocc(delta, lambdas, Phi), assignment_north(3), grid)


# -- beta calculus --------------------------------------------------------------

def _check_lambda(lam: float) -> None:
    if not 0.0 <= lam < HALF_PI:
        raise ValueError(f"lambda={lam} outside [0, pi/2)")


def beta(lam: float, phi: float) -> float:
    """``phi - 2 arctan(sin(l/2) sin(phi) / (cos(l/2) + sin(l/2) cos(phi)))``.

    The denominator is positive for ``l < pi/2``, so the value is continuous
    in ``phi``, with ``beta(l, 0) = 0`` and ``beta(l, 2 pi) = 2 pi``.
    """
    _check_lambda(lam)
    s, c = math.sin(lam / 2), math.cos(lam / 2)
    return phi - 2 * math.atan(s * math.sin(phi) / (c + s * math.cos(phi)))


def beta_derivative(lam: float, phi: float) -> float:
    _check_lambda(lam)
    return math.cos(lam) / (1 + math.cos(phi) * math.sin(lam))


def circular_distance(x: float, y: float) -> float:
    d = math.fmod(x - y, 2 * PI)
    d = abs(d)
    return min(d, 2 * PI - d)


def vanishing_condition(lambdas: Sequence[float], Phi: float, phis: Sequence[float]) -> bool:
    """True iff the all-equatorial amplitude of the balanced state vanishes.

    The arctan form of :func:`beta` equals ``-(phi + 2 Arg <phi|w>)``, so the
    zero set is ``sum beta = pi + Phi`` rather than ``pi - Phi``; the two
    agree whenever ``Phi`` is 0 or pi.
    """
    total = sum(beta(l, p) for l, p in zip(lambdas, phis))
    return circular_distance(total, PI + Phi) < VANISHING_TOL


def max_plus_beta_sum(lambdas: Sequence[float], site_grid: Sequence[LocalMeasurement]) -> float:
    """Largest ``|sum beta|`` over equatorial grid contexts assigned all +1.

    Angles are taken in ``(-pi/2, pi/2]``, where the equatorial assignment
    gives +1.
    """
    plus = [_phi_in_open_closed(m.phi, -HALF_PI) for m in site_grid]
    plus = [p for p in plus if p <= HALF_PI]
    if not plus:
        return 0.0
    vals = [np.array([beta(l, p) for p in plus]) for l in lambdas]
    total = vals[0]
    for v in vals[1:]:
        total = np.add.outer(total, v)
    return float(np.abs(total).max())


def lemma_scalar_check(lam: float, theta: float, phi: float) -> bool:
    """``|<theta,phi|v_lam>| > |<theta,phi|w_lam>|`` for northern ``theta``."""
    _check_lambda(lam)
    if not 0.0 <= theta < HALF_PI:
        raise ValueError(f"theta={theta} outside [0, pi/2)")
    bra = eigenstate(LocalMeasurement(theta, phi), 1).conj()
    v = np.array([math.cos(lam / 2), math.sin(lam / 2)])
    w = np.array([math.sin(lam / 2), math.cos(lam / 2)])
    return abs(bra @ v) > abs(bra @ w)


# -- the strongly non-local family ----------------------------------------------

@dataclass(frozen=True)
class FamilyInstance:
    N: int
    m: int
    lambda_N: float
    state: np.ndarray
    scenario: Scenario


def family_lambda(N: int) -> float:
    return HALF_PI - PI / N


def family_instance(N: int) -> FamilyInstance:
    if not isinstance(N, (int, np.integer)) or N < 2 or N % 2:
        raise ValueError("N must be even and >= 2")
    lam = family_lambda(N)
    return FamilyInstance(N, N // 2, lam, balanced((0.0, 0.0, lam), 0.0), family_scenario(N))


def entropy_closed_form(lam: float) -> float:
    """Entropy in bits of the third qubit of the balanced ``(0, 0, lam)`` state."""
    return binary_entropy(0.5 * (1 + math.sin(lam)))


def third_qubit_entropy(lam: float) -> float:
    """Same quantity through the state, the partial trace and the eigenvalues."""
    psi = two_product_superposition(PI / 4, (0.0, 0.0, lam), 0.0)
    return vn_entropy(partial_trace(psi, [2]))


def entropy_curve(samples: int) -> list[tuple[float, float]]:
    if samples < 2:
        raise ValueError("need at least two samples")
    return [(float(x), entropy_closed_form(x)) for x in np.linspace(0.0, HALF_PI, samples)]
