from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_diagrams.linalg import Echelon, kernel_basis, rank, solve

small = st.integers(-4, 4).map(Fraction)


@st.composite
def sparse_columns(draw, max_cols=6, max_rows=5):
    n = draw(st.integers(1, max_cols))
    m = draw(st.integers(1, max_rows))
    cols = []
    for _ in range(n):
        entries = draw(st.dictionaries(st.integers(0, m - 1), small, max_size=m))
        cols.append({k: v for k, v in entries.items() if v})
    return cols, m


def apply(cols, x):
    out = {}
    for j, c in x.items():
        for k, v in cols[j].items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


@settings(max_examples=200, deadline=None)
@given(sparse_columns())
def test_kernel_vectors_are_killed_and_count_matches_rank(data):
    cols, m = data
    ker = kernel_basis(cols, len(cols))
    for vec in ker:
        assert apply(cols, vec) == {}
    assert len(ker) + rank(cols) == len(cols)
    # kernel vectors are independent
    assert rank(ker) == len(ker)


@settings(max_examples=200, deadline=None)
@given(sparse_columns(), st.lists(small, min_size=6, max_size=6))
def test_solve_recovers_reachable_targets(data, coeffs):
    cols, m = data
    x0 = {j: coeffs[j] for j in range(len(cols)) if coeffs[j]}
    target = apply(cols, x0)
    x = solve(cols, target)
    assert x is not None
    assert apply(cols, x) == target


def test_solve_reports_inconsistency():
    cols = [{0: Fraction(1)}, {0: Fraction(2)}]
    assert solve(cols, {1: Fraction(1)}) is None


def test_echelon_add_reports_independence():
    e = Echelon()
    assert e.add({0: 2, 1: 4})
    assert not e.add({0: 1, 1: 2})
    assert e.add({1: 1})
    assert e.rank == 2
