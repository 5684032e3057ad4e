"""Parity systems over GF(2) and the conditional parity argument for the family.

Equations are stored as ``(coefficient bitmask, rhs bit)`` pairs, bit ``k``
of the mask standing for variable ``k``. Elimination works directly on
Python integers used as bitsets.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .empirical import Support


@dataclass(frozen=True)
class Gf2System:
    num_vars: int
    equations: tuple[tuple[int, int], ...]
    var_names: tuple[str, ...]
    branch: int | None = None

    def __post_init__(self):
        eqs = tuple((int(mask), int(rhs) & 1) for mask, rhs in self.equations)
        for mask, _ in eqs:
            if mask < 0 or mask >> self.num_vars:
                raise ValueError("coefficient vector longer than num_vars")
        if len(self.var_names) != self.num_vars:
            raise ValueError("need one name per variable")
        object.__setattr__(self, "equations", eqs)
        object.__setattr__(self, "var_names", tuple(self.var_names))

    def coefficient_matrix(self) -> np.ndarray:
        return np.array(
            [[(mask >> k) & 1 for k in range(self.num_vars)] for mask, _ in self.equations],
            dtype=np.uint8,
        ).reshape(-1, self.num_vars)

    def row_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.equations)

    def format(self) -> list[str]:
        out = []
        for mask, rhs in self.equations:
            terms = [self.var_names[k] for k in range(self.num_vars) if (mask >> k) & 1]
            out.append(f"{' + '.join(terms) or '0'} = {rhs}")
        return out

    def with_rhs_flipped(self, row: int) -> "Gf2System":
        eqs = list(self.equations)
        mask, rhs = eqs[row]
        eqs[row] = (mask, rhs ^ 1)
        return Gf2System(self.num_vars, tuple(eqs), self.var_names, self.branch)


def gf2_unsatisfiable(sys: Gf2System) -> bool:
    """Gaussian elimination; True iff a ``0 = 1`` row appears."""
    pivots: dict[int, tuple[int, int]] = {}  # leading bit -> reduced row
    for mask, rhs in sys.equations:
        while mask:
            lead = mask.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = (mask, rhs)
                break
            pmask, prhs = pivots[lead]
            mask ^= pmask
            rhs ^= prhs
        else:
            if rhs:
                return True
    return False


def brute_force_satisfiable(sys: Gf2System) -> bool:
    for bits in itertools.product((0, 1), repeat=sys.num_vars):
        x = sum(b << k for k, b in enumerate(bits))
        if all(bin(mask & x).count("1") % 2 == rhs for mask, rhs in sys.equations):
            return True
    return False


def family_var_names(N: int) -> tuple[str, ...]:
    return tuple([f"a_{i}" for i in range(N)] + [f"b_{j}" for j in range(N)] + ["c_0"])


def _family_vars(N):
    a = [1 << i for i in range(N)]
    b = [1 << (N + j) for j in range(N)]
    c0 = 1 << (2 * N)
    return a, b, c0


def _check_family_N(N):
    if not isinstance(N, (int, np.integer)) or N < 2 or N % 2:
        raise ValueError("N must be even and >= 2")


def family_gf2_system(N: int, c_m: int) -> Gf2System:
    """The hard-coded parity system of the ``N``-family for branch ``c_m``."""
    _check_family_N(N)
    if c_m not in (0, 1):
        raise ValueError("c_m must be 0 or 1")
    a, b, c0 = _family_vars(N)
    eqs = [(a[0] | b[0] | c0, 0)]
    eqs += [(a[i] | b[N - i] | c0, 1) for i in range(1, N)]
    if c_m == 0:
        eqs += [(a[i] | b[N - i - 1], 1) for i in range(N)]
    else:
        eqs += [(a[0] | b[1], 0), (a[1] | b[0], 0)]
        eqs += [(a[i] | b[N + 1 - i], 1) for i in range(2, N)]
    return Gf2System(2 * N + 1, tuple(eqs), family_var_names(N), branch=c_m)


def _parity_rhs(forbidden: set[tuple[int, ...]], width: int) -> int | None:
    """If ``forbidden`` is exactly one parity class of ``{0,1}^width`` return
    the parity that consistent assignments must have; else None."""
    for r in (0, 1):
        cls = {t for t in itertools.product((0, 1), repeat=width) if sum(t) % 2 == r}
        if forbidden == cls:
            return r ^ 1
    return None


def family_support_to_gf2(sup: Support) -> tuple[Gf2System, Gf2System]:
    """Read the two branch systems off a support of the family's shape.

    Each context's impossible events must form a single parity class over
    the context's free variables; that class becomes one equation. Contexts
    using the third site's second label contribute to the branch selected
    by the value of that label.
    """
    shape = sup.scenario.shape
    if len(shape) != 3 or shape[0] != shape[1] or shape[2] != 2:
        raise ValueError(f"support shape {shape} is not (N, N, 2)")
    N = shape[0]
    _check_family_N(N)
    a, b, c0 = _family_vars(N)
    common, branch_eqs = [], {0: [], 1: []}
    for ci, (i, j, k) in enumerate(itertools.product(range(N), range(N), range(2))):
        row = sup.possible[ci]
        forbidden = {
            ((idx >> 2) & 1, (idx >> 1) & 1, idx & 1) for idx in range(8) if not row[idx]
        }
        if k == 0:
            if not forbidden:
                continue
            rhs = _parity_rhs(forbidden, 3)
            if rhs is None:
                raise ValueError(f"context {(i, j, k)}: impossible events are not a parity class")
            common.append((a[i] | b[j] | c0, rhs))
        else:
            for cm in (0, 1):
                sub = {(x, y) for x, y, z in forbidden if z == cm}
                if not sub:
                    continue
                rhs = _parity_rhs(sub, 2)
                if rhs is None:
                    raise ValueError(
                        f"context {(i, j, k)}, c_m={cm}: impossible events are not a parity class"
                    )
                branch_eqs[cm].append((a[i] | b[j], rhs))
    names = family_var_names(N)
    return tuple(
        Gf2System(2 * N + 1, tuple(common + branch_eqs[cm]), names, branch=cm) for cm in (0, 1)
    )
