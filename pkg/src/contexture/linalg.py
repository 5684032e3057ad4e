"""Dense complex linear algebra for small qubit registers.

States are 1-D complex ``numpy`` arrays of length ``2**n`` in big-endian
qubit order: qubit 0 is the most significant bit of the basis index, which
matches left-to-right ket notation (``|q0 q1 ... >``). Local operators are
``2x2`` complex arrays, density matrices are square complex arrays.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

ZERO_NORM = 1e-12
HERMITIAN_TOL = 1e-10
EIGEN_CLAMP = 1e-10


def as_state(amplitudes) -> np.ndarray:
    """Validate and return ``amplitudes`` as a complex state vector."""
    psi = np.asarray(amplitudes, dtype=complex)
    if psi.ndim != 1:
        raise ValueError("state vector must be one-dimensional")
    num_qubits(psi)
    if not np.all(np.isfinite(psi)):
        raise ValueError("state vector has non-finite amplitudes")
    return psi


def num_qubits(psi: np.ndarray) -> int:
    size = len(psi)
    n = size.bit_length() - 1
    if size < 2 or (1 << n) != size:
        raise ValueError(f"length {size} is not 2**n for n >= 1")
    return n


def ket(bits: str) -> np.ndarray:
    """Computational basis state from a bit string, e.g. ``ket("010")``."""
    psi = np.zeros(1 << len(bits), dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def tensor(*states: np.ndarray) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for s in states:
        out = np.kron(out, s)
    return out


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def norm(psi: np.ndarray) -> float:
    return float(np.linalg.norm(psi))


def normalize(psi: np.ndarray) -> np.ndarray:
    nrm = norm(psi)
    if nrm <= ZERO_NORM:
        raise ValueError("cannot normalize a (near) zero vector")
    return psi / nrm


def apply_local(ops: Sequence[np.ndarray], psi: np.ndarray) -> np.ndarray:
    """Apply ``ops[0] (x) ops[1] (x) ...`` to ``psi`` without renormalizing."""
    n = num_qubits(psi)
    if len(ops) != n:
        raise ValueError(f"expected {n} local operators, got {len(ops)}")
    t = psi.reshape((2,) * n)
    for site, op in enumerate(ops):
        op = np.asarray(op, dtype=complex)
        if op.shape != (2, 2):
            raise ValueError("local operators must be 2x2")
        t = np.moveaxis(np.tensordot(op, t, axes=([1], [site])), 0, site)
    return t.reshape(-1)


def density(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def partial_trace(state: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on the (0-based) sites in ``keep``.

    ``state`` may be a pure state vector or a density matrix. Kept sites
    appear in increasing order in the result.
    """
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep-set must be non-empty")
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        n = num_qubits(state)
        rho = None
    else:
        if state.shape[0] != state.shape[1]:
            raise ValueError("density matrix must be square")
        n = num_qubits(state[0])
        rho = state
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"site indices must lie in [0, {n})")
    traced = [q for q in range(n) if q not in keep]
    k = len(keep)
    if rho is None:
        t = state.reshape((2,) * n)
        t = np.transpose(t, keep + traced).reshape(1 << k, -1)
        return t @ t.conj().T
    t = rho.reshape((2,) * (2 * n))
    t = np.transpose(t, keep + traced + [n + q for q in keep] + [n + q for q in traced])
    t = t.reshape(1 << k, 1 << (n - k), 1 << k, 1 << (n - k))
    return np.einsum("ajbj->ab", t)


def _eigvalsh_2x2(rho: np.ndarray) -> np.ndarray:
    a = rho[0, 0].real
    d = rho[1, 1].real
    half_gap = np.hypot((a - d) / 2, abs(rho[0, 1]))
    mid = (a + d) / 2
    return np.array([mid + half_gap, mid - half_gap])


def eigvalsh(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if not np.allclose(rho, rho.conj().T, atol=HERMITIAN_TOL, rtol=0):
        raise ValueError("matrix is not Hermitian")
    if rho.shape == (2, 2):
        return _eigvalsh_2x2(rho)
    return np.linalg.eigvalsh(rho)


def vn_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy in bits, with ``0 log 0 = 0``."""
    ev = eigvalsh(rho)
    if np.any(ev < -EIGEN_CLAMP):
        raise ValueError("matrix is not positive semidefinite")
    ev = ev[ev > 0]
    return float(-np.sum(ev * np.log2(ev))) + 0.0


def binary_entropy(p: float) -> float:
    """``-p log2 p - (1-p) log2 (1-p)``."""
    return sum(-x * np.log2(x) for x in (p, 1.0 - p) if x > 0) + 0.0
