import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from contexture.empirical import Support, exact_family_support
from contexture.gf2 import (
    Gf2System,
    brute_force_satisfiable,
    family_gf2_system,
    family_support_to_gf2,
    family_var_names,
    gf2_unsatisfiable,
)
from contexture.scenario import X, Scenario


@st.composite
def systems(draw):
    n = draw(st.integers(1, 8))
    rows = draw(st.lists(st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, 1)), max_size=10))
    return Gf2System(n, tuple(rows), tuple(f"x{i}" for i in range(n)))


@given(systems())
def test_elimination_matches_brute_force(sys):
    assert gf2_unsatisfiable(sys) == (not brute_force_satisfiable(sys))


def test_zero_row_with_rhs_one():
    sys = Gf2System(2, ((0, 1),), ("x", "y"))
    assert gf2_unsatisfiable(sys)


def test_validation():
    with pytest.raises(ValueError):
        Gf2System(2, ((0b100, 0),), ("x", "y"))
    with pytest.raises(ValueError):
        Gf2System(2, (), ("x",))


def test_format_and_matrix():
    sys = family_gf2_system(2, 0)
    assert sys.format()[0] == "a_0 + b_0 + c_0 = 0"
    m = sys.coefficient_matrix()
    assert m.shape == (4, 5)
    assert m[0].tolist() == [1, 0, 1, 0, 1]
    assert sys.var_names == family_var_names(2)


@pytest.mark.parametrize("N", [2, 4, 6, 8])
@pytest.mark.parametrize("c_m", [0, 1])
def test_family_systems_unsat(N, c_m):
    assert gf2_unsatisfiable(family_gf2_system(N, c_m))


@pytest.mark.parametrize("N", [2, 4, 6, 8])
def test_support_derived_systems_match_reference(N):
    sys0, sys1 = family_support_to_gf2(exact_family_support(N))
    assert sys0.row_set() == family_gf2_system(N, 0).row_set()
    assert sys1.row_set() == family_gf2_system(N, 1).row_set()
    assert sys0.branch == 0 and sys1.branch == 1


@pytest.mark.parametrize("N", [2, 4])
def test_single_rhs_flip_makes_family_satisfiable(N):
    for c_m in (0, 1):
        sys = family_gf2_system(N, c_m)
        for row in range(len(sys.equations)):
            assert brute_force_satisfiable(sys.with_rhs_flipped(row))


def test_family_guards():
    with pytest.raises(ValueError):
        family_gf2_system(3, 0)
    with pytest.raises(ValueError):
        family_gf2_system(4, 2)
    with pytest.raises(ValueError):
        family_support_to_gf2(Support(Scenario([[X], [X]]), np.ones((1, 4), dtype=bool)))


def test_non_parity_support_is_rejected():
    sup = exact_family_support(2)
    possible = sup.possible.copy()
    possible[0] = True
    possible[0, 0] = False  # a single forbidden event is not a parity class
    with pytest.raises(ValueError, match="parity class"):
        family_support_to_gf2(Support(sup.scenario, possible))
