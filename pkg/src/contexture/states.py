"""Canonical forms of the qubit state families.

Every constructor returns a unit-norm complex vector (see :mod:`.linalg` for
the qubit ordering). Normalization constants are always obtained
numerically; :func:`ghz_slocc_k` and :func:`ghz_class_k` give the closed
forms for cross-checks.
"""
from __future__ import annotations

import math
from typing import Mapping, Sequence

import numpy as np

from .linalg import apply_local, as_state, ket, normalize, tensor
from .scenario import bloch_state

QUARTER_PI = math.pi / 4
HALF_PI = math.pi / 2
# parameters typed with ~10 digits land a hair past pi/4; snap them back
DELTA_SNAP = 1e-9


def _snap_delta(delta: float) -> float:
    return QUARTER_PI if abs(delta - QUARTER_PI) <= DELTA_SNAP else float(delta)


def _check_lambdas(lambdas: Sequence[float]) -> tuple[float, float, float]:
    lam = tuple(float(x) for x in lambdas)
    if len(lam) != 3:
        raise ValueError("need exactly three lambda values")
    for x in lam:
        if not 0.0 <= x < HALF_PI:
            raise ValueError(f"lambda={x} outside [0, pi/2)")
    return lam


def bipartite(delta: float) -> np.ndarray:
    """``cos d |00> + sin d |11>`` for ``d`` in ``[0, pi/4]``."""
    delta = _snap_delta(delta)
    if not 0.0 <= delta <= QUARTER_PI:
        raise ValueError(f"delta={delta} outside [0, pi/4]")
    return np.array([math.cos(delta), 0, 0, math.sin(delta)], dtype=complex)


def v_state(lam: float) -> np.ndarray:
    if not 0.0 <= lam < HALF_PI:
        raise ValueError(f"lambda={lam} outside [0, pi/2)")
    return bloch_state(lam, 0.0)


def w_state(lam: float) -> np.ndarray:
    if not 0.0 <= lam < HALF_PI:
        raise ValueError(f"lambda={lam} outside [0, pi/2)")
    return bloch_state(math.pi - lam, 0.0)


def w_slocc(a: float, b: float, c: float) -> np.ndarray:
    """``sqrt(a)|001> + sqrt(b)|010> + sqrt(c)|100> + sqrt(d)|000>``, d = 1-a-b-c."""
    if min(a, b, c) <= 0:
        raise ValueError("a, b, c must be strictly positive")
    d = 1.0 - (a + b + c)
    if d < -1e-12:
        raise ValueError(f"a + b + c = {a + b + c} exceeds 1")
    d = max(d, 0.0)
    psi = np.zeros(8, dtype=complex)
    psi[0b001] = math.sqrt(a)
    psi[0b010] = math.sqrt(b)
    psi[0b100] = math.sqrt(c)
    psi[0b000] = math.sqrt(d)
    return normalize(psi)


def w_state3() -> np.ndarray:
    return (ket("001") + ket("010") + ket("100")) / math.sqrt(3)


def ghz(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError("GHZ needs n >= 2")
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = psi[-1] = 1 / math.sqrt(2)
    return psi


def two_product_superposition(
    delta: float, lambdas: Sequence[float], Phi: float
) -> np.ndarray:
    """Normalized ``cos d |v v v> + sin d e^{iPhi} |w w w>`` with no range checks.

    The public constructors validate parameters; this one also accepts the
    limiting ``lambda = pi/2`` where ``v`` and ``w`` coincide with ``|+>``.
    """
    vs = [bloch_state(x, 0.0) for x in lambdas]
    ws = [bloch_state(math.pi - x, 0.0) for x in lambdas]
    raw = math.cos(delta) * tensor(*vs) + math.sin(delta) * np.exp(1j * Phi) * tensor(*ws)
    return normalize(raw)


def ghz_slocc(delta: float, lambdas: Sequence[float], Phi: float) -> np.ndarray:
    delta = _snap_delta(delta)
    if not 0.0 < delta <= QUARTER_PI:
        raise ValueError(f"delta={delta} outside (0, pi/4]")
    return two_product_superposition(delta, _check_lambdas(lambdas), Phi)


def ghz_slocc_k(delta: float, lambdas: Sequence[float], Phi: float) -> float:
    """Closed-form squared normalization; uses ``<v_l|w_l> = sin l``."""
    overlap = math.prod(math.sin(x) for x in lambdas)
    return 1.0 / (1.0 + 2 * math.cos(delta) * math.sin(delta) * overlap * math.cos(Phi))


def balanced(lambdas: Sequence[float], Phi: float) -> np.ndarray:
    return ghz_slocc(QUARTER_PI, lambdas, Phi)


def ilo_w(a: float, b: float, c: float) -> list[np.ndarray]:
    """Invertible local operators taking ``|W>`` to ``w_slocc(a, b, c)``.

    The top-right entry of the first factor carries ``sqrt(d)`` so that the
    ``|000>`` amplitude comes out as ``sqrt(d)``.
    """
    if min(a, b, c) <= 0:
        raise ValueError("a, b, c must be strictly positive")
    d = max(1.0 - (a + b + c), 0.0)
    ops = [
        np.array([[math.sqrt(a), math.sqrt(d)], [0, math.sqrt(c)]], dtype=complex),
        np.array([[math.sqrt(3), 0], [0, math.sqrt(3 * b) / math.sqrt(a)]], dtype=complex),
        np.eye(2, dtype=complex),
    ]
    assert all(abs(np.linalg.det(op)) > 0 for op in ops)
    return ops


def _check_ghz_class(delta, alpha, beta, gamma):
    if not 0.0 < delta <= QUARTER_PI:
        raise ValueError(f"delta={delta} outside (0, pi/4]")
    for name, x in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        if not 0.0 < x <= HALF_PI:
            raise ValueError(f"{name}={x} outside (0, pi/2]")


def ghz_class(delta: float, alpha: float, beta: float, gamma: float, Phi: float) -> np.ndarray:
    """``cos d |000> + sin d e^{iPhi} |f1 f2 f3>`` with real ``|fi>``, normalized."""
    _check_ghz_class(delta, alpha, beta, gamma)
    phis = [np.array([math.cos(x), math.sin(x)], dtype=complex) for x in (alpha, beta, gamma)]
    raw = math.cos(delta) * ket("000") + math.sin(delta) * np.exp(1j * Phi) * tensor(*phis)
    return normalize(raw)


def ghz_class_k(delta: float, alpha: float, beta: float, gamma: float, Phi: float) -> float:
    return 1.0 / (
        1.0
        + 2 * math.cos(delta) * math.sin(delta)
        * math.cos(alpha) * math.cos(beta) * math.cos(gamma) * math.cos(Phi)
    )


def ilo_ghz(delta: float, alpha: float, beta: float, gamma: float, Phi: float) -> list[np.ndarray]:
    """Invertible local operators taking GHZ(3) to :func:`ghz_class`."""
    _check_ghz_class(delta, alpha, beta, gamma)
    scale = math.sqrt(2 * ghz_class_k(delta, alpha, beta, gamma, Phi))
    e = np.exp(1j * Phi)
    ops = [
        scale * np.array(
            [[math.cos(delta), math.sin(delta) * math.cos(alpha) * e],
             [0, math.sin(delta) * math.sin(alpha) * e]]
        ),
        np.array([[1, math.cos(beta)], [0, math.sin(beta)]], dtype=complex),
        np.array([[1, math.cos(gamma)], [0, math.sin(gamma)]], dtype=complex),
    ]
    assert all(abs(np.linalg.det(op)) > 0 for op in ops)
    return ops


def _floats(value) -> list[float]:
    if isinstance(value, str):
        return [float(x) for x in value.split(",")]
    if isinstance(value, (int, float)):
        return [float(value)]
    return [float(x) for x in value]


def state_from_json(data: Mapping) -> np.ndarray:
    """Build a state from ``{"family": ..., "params": {...}}`` or ``{"amplitudes": [[re, im], ...]}``."""
    if not isinstance(data, Mapping):
        raise ValueError("state spec must be a JSON object")
    if "amplitudes" in data:
        try:
            amps = [complex(float(re), float(im)) for re, im in data["amplitudes"]]
        except (TypeError, ValueError):
            raise ValueError("state: 'amplitudes' must be a list of [re, im] pairs") from None
        return normalize(as_state(amps))
    family = data.get("family")
    params = data.get("params", {})
    try:
        if family == "bipartite":
            return bipartite(float(params["delta"]))
        if family == "w_slocc":
            return w_slocc(float(params["a"]), float(params["b"]), float(params["c"]))
        if family == "ghz":
            return ghz(int(params.get("n", 3)))
        if family == "ghz_slocc":
            return ghz_slocc(
                float(params["delta"]), _floats(params["lambda"]), float(params.get("Phi", 0.0))
            )
        if family == "balanced":
            return balanced(_floats(params["lambda"]), float(params.get("Phi", 0.0)))
    except KeyError as exc:
        raise ValueError(f"state: family {family!r} needs parameter {exc}") from None
    raise ValueError(f"state: unknown family {family!r}")
