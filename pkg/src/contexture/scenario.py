"""Bell-type measurement scenarios with one-qubit projective measurements.

A local measurement is labelled by the Bloch angles of its +1 eigenstate,
``|theta, phi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>``. Outcomes are
the integers ``+1`` and ``-1``. Inside bit-packed tables an outcome is a bit:
``0`` for +1 and ``1`` for -1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

TWO_PI = 2 * math.pi
ANGLE_TOL = 1e-12

Context = tuple[int, ...]
GlobalAssignment = tuple[tuple[int, ...], ...]


def canonical_phi(phi: float) -> float:
    phi = math.fmod(phi, TWO_PI)
    if phi < 0:
        phi += TWO_PI
    if phi >= TWO_PI - ANGLE_TOL:
        phi = 0.0
    return phi


@dataclass(frozen=True, order=True)
class LocalMeasurement:
    theta: float
    phi: float

    def __post_init__(self):
        theta = float(self.theta)
        if not (-ANGLE_TOL <= theta <= math.pi + ANGLE_TOL):
            raise ValueError(f"theta={theta} outside [0, pi]")
        theta = min(max(theta, 0.0), math.pi)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", canonical_phi(float(self.phi)))

    def __repr__(self):
        return f"LocalMeasurement(theta={self.theta:.6g}, phi={self.phi:.6g})"


X = LocalMeasurement(math.pi / 2, 0.0)
Y = LocalMeasurement(math.pi / 2, math.pi / 2)
Z = LocalMeasurement(0.0, 0.0)
PAULI = {"X": X, "Y": Y, "Z": Z}


def equatorial(phi: float) -> LocalMeasurement:
    return LocalMeasurement(math.pi / 2, phi)


def check_outcome(o: int) -> int:
    if o not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {o!r}")
    return int(o)


def outcome_to_bit(o: int) -> int:
    return 0 if check_outcome(o) == 1 else 1


def bit_to_outcome(b: int) -> int:
    return 1 - 2 * int(b)


def bloch_state(theta: float, phi: float) -> np.ndarray:
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


def negate(m: LocalMeasurement) -> LocalMeasurement:
    """The measurement whose +1 eigenstate is antipodal to that of ``m``."""
    return LocalMeasurement(math.pi - m.theta, m.phi + math.pi)


def eigenstate(m: LocalMeasurement, o: int) -> np.ndarray:
    """Eigenvector of measurement ``m`` for outcome ``o``."""
    if check_outcome(o) == -1:
        m = negate(m)
    return bloch_state(m.theta, m.phi)


def reduce_to_plus(
    ms: Sequence[LocalMeasurement], os: Sequence[int]
) -> list[LocalMeasurement]:
    """Rewrite a joint outcome as the all-(+1) outcome of negated measurements."""
    if len(ms) != len(os):
        raise ValueError("measurement and outcome sequences differ in length")
    return [negate(m) if check_outcome(o) == -1 else m for m, o in zip(ms, os)]


@dataclass(frozen=True)
class Scenario:
    """Per-site finite lists of local measurements; labels are list indices."""

    sites: tuple[tuple[LocalMeasurement, ...], ...]

    def __post_init__(self):
        sites = tuple(tuple(site) for site in self.sites)
        if not sites:
            raise ValueError("scenario needs at least one site")
        for i, site in enumerate(sites):
            if not site:
                raise ValueError(f"site {i} has no measurements")
            for m in site:
                if not isinstance(m, LocalMeasurement):
                    raise TypeError(f"site {i}: expected LocalMeasurement, got {m!r}")
        object.__setattr__(self, "sites", sites)

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sites)

    @property
    def n_measurements(self) -> int:
        return sum(self.shape)

    @property
    def n_contexts(self) -> int:
        return math.prod(self.shape)

    def measurements(self, ctx: Context) -> tuple[LocalMeasurement, ...]:
        return tuple(site[k] for site, k in zip(self.sites, ctx))

    def context_index(self, ctx: Context) -> int:
        return int(np.ravel_multi_index(tuple(ctx), self.shape))

    def to_json(self) -> dict:
        return {
            "sites": [
                [{"theta": m.theta, "phi": m.phi} for m in site] for site in self.sites
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Scenario":
        try:
            raw_sites = data["sites"]
        except (KeyError, TypeError):
            raise ValueError("scenario: missing field 'sites'") from None
        sites = []
        for i, site in enumerate(raw_sites):
            ms = []
            for j, m in enumerate(site):
                try:
                    ms.append(LocalMeasurement(float(m["theta"]), float(m["phi"])))
                except (KeyError, TypeError, ValueError) as exc:
                    raise ValueError(f"scenario: sites[{i}][{j}]: {exc}") from None
            sites.append(ms)
        return cls(sites)


def contexts(s: Scenario) -> Iterator[Context]:
    """All contexts in lexicographic order of label indices."""
    return itertools.product(*(range(k) for k in s.shape))


def assignment_restrict(g: GlobalAssignment, ctx: Context) -> tuple[int, ...]:
    try:
        return tuple(g[site][label] for site, label in enumerate(ctx))
    except IndexError:
        raise KeyError(f"assignment has no value for a label of context {ctx}") from None


def assignment_from_table(
    s: Scenario, table: Mapping[tuple[int, int], int]
) -> GlobalAssignment:
    """Build an assignment from ``{(site, label): outcome}``; must be total."""
    out = []
    for site, k in enumerate(s.shape):
        row = []
        for label in range(k):
            if (site, label) not in table:
                raise KeyError(f"missing outcome for site {site}, label {label}")
            row.append(check_outcome(table[site, label]))
        out.append(tuple(row))
    return tuple(out)


def assignment_table(g: GlobalAssignment) -> dict[tuple[int, int], int]:
    return {(site, label): o for site, row in enumerate(g) for label, o in enumerate(row)}


def assignment_from_bits(s: Scenario, bits: Sequence[int]) -> GlobalAssignment:
    """Unflatten site-major bits (0 -> +1, 1 -> -1) into an assignment."""
    if len(bits) != s.n_measurements:
        raise ValueError("bit vector length differs from the number of labels")
    out, pos = [], 0
    for k in s.shape:
        out.append(tuple(bit_to_outcome(b) for b in bits[pos:pos + k]))
        pos += k
    return tuple(out)


def parse_sites(spec: str) -> Scenario:
    """Parse shorthand like ``"X,Y;X,(1.2,0.3);Z"``.

    Sites are separated by ``;`` and measurements by ``,`` outside brackets.
    Tokens are ``X``, ``Y``, ``Z`` or ``(theta,phi)`` in radians.
    """
    sites = []
    for i, chunk in enumerate(spec.split(";")):
        tokens, depth, cur = [], 0, ""
        for ch in chunk:
            if ch == "," and depth == 0:
                tokens.append(cur)
                cur = ""
                continue
            depth += ch == "("
            depth -= ch == ")"
            cur += ch
        tokens.append(cur)
        ms = []
        for tok in (t.strip() for t in tokens):
            if tok.upper() in PAULI:
                ms.append(PAULI[tok.upper()])
            elif tok.startswith("(") and tok.endswith(")"):
                try:
                    theta, phi = (float(x) for x in tok[1:-1].split(","))
                except ValueError:
                    raise ValueError(f"site {i}: bad angle pair {tok!r}") from None
                ms.append(LocalMeasurement(theta, phi))
            else:
                raise ValueError(f"site {i}: unknown measurement token {tok!r}")
        sites.append(ms)
    return Scenario(sites)
