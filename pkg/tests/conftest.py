import itertools
import math

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from contexture.scenario import LocalMeasurement, Scenario, contexts

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

angles_theta = st.floats(0.0, math.pi, allow_nan=False)
angles_phi = st.floats(-4 * math.pi, 4 * math.pi, allow_nan=False)
measurements = st.builds(LocalMeasurement, angles_theta, angles_phi)


@st.composite
def states(draw, n=None, max_qubits=4):
    n = n or draw(st.integers(1, max_qubits))
    parts = draw(
        st.lists(st.floats(-1, 1, allow_nan=False), min_size=2 << n, max_size=2 << n)
    )
    v = np.array(parts[0::2]) + 1j * np.array(parts[1::2])
    if np.linalg.norm(v) < 1e-3:
        v[0] += 1
    return v / np.linalg.norm(v)


@st.composite
def scenarios(draw, n_sites, max_labels=3):
    return Scenario(
        [
            draw(st.lists(measurements, min_size=1, max_size=max_labels))
            for _ in range(n_sites)
        ]
    )


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_measurement(rng):
    return LocalMeasurement(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))


def random_scenario(rng, n_sites, max_labels):
    return Scenario(
        [
            [random_measurement(rng) for _ in range(rng.integers(1, max_labels + 1))]
            for _ in range(n_sites)
        ]
    )


def brute_force_assignments(sup):
    """Every global assignment inside the support, by plain enumeration."""
    s = sup.scenario
    n = s.n_sites
    found = []
    for bits in itertools.product((0, 1), repeat=s.n_measurements):
        rows, pos = [], 0
        for k in s.shape:
            rows.append(bits[pos:pos + k])
            pos += k
        ok = True
        for ci, ctx in enumerate(contexts(s)):
            idx = 0
            for site, label in enumerate(ctx):
                idx = (idx << 1) | rows[site][label]
            if not sup.possible[ci, idx]:
                ok = False
                break
        if ok:
            found.append(tuple(tuple(1 - 2 * b for b in r) for r in rows))
    return found


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
