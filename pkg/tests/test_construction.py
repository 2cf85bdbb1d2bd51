import pytest
from hypothesis import given
from hypothesis import strategies as st

from fictplay.construction import (
    ConstructionParams,
    build_k,
    build_k_closed_form,
    spiral_order,
    validate_structure,
)
from fictplay.errors import ConstructionError, StructureError
from fictplay.game import PayoffMatrix, Profile

K6 = [
    [2, 0, 0, 0, 0, 3],
    [0, 6, 0, 0, 7, 0],
    [0, 0, 10, 11, 0, 0],
    [0, 0, 9, 0, 8, 0],
    [0, 5, 0, 0, 0, 4],
    [1, 0, 0, 0, 0, 0],
]


def test_small_instances():
    assert build_k(2).to_rows() == [[2, 3], [1, 0]]
    assert build_k(4).to_rows() == [[2, 0, 0, 3], [0, 6, 7, 0], [0, 5, 0, 4], [1, 0, 0, 0]]
    assert build_k(6).to_rows() == K6


def test_params_accept_object():
    assert build_k(ConstructionParams(4, 3)) == build_k(4, 3)


@pytest.mark.parametrize("n", [0, -2, 3, 7])
def test_bad_n_rejected(n):
    with pytest.raises(ConstructionError):
        build_k(n)


def test_validate_examples():
    r = validate_structure(build_k(6))
    assert r.ok and r.max_cell == Profile(3, 4) and r.max_value == 11
    r = validate_structure(build_k(2))
    assert r.ok and r.max_cell == Profile(1, 2) and r.max_value == 3
    assert not validate_structure(PayoffMatrix.zeros(4, 4)).ok


def test_validate_catches_a_moved_value():
    rows = build_k(4).to_rows()
    rows[0][3], rows[0][2] = 0, 3
    assert not validate_structure(PayoffMatrix.from_rows(rows)).ok


def test_spiral_order_examples():
    assert spiral_order(build_k(4)) == [
        (Profile(4, 1), 1), (Profile(1, 1), 2), (Profile(1, 4), 3), (Profile(3, 4), 4),
        (Profile(3, 2), 5), (Profile(2, 2), 6), (Profile(2, 3), 7),
    ]
    assert spiral_order(build_k(2)) == [(Profile(2, 1), 1), (Profile(1, 1), 2), (Profile(1, 2), 3)]
    cells = spiral_order(build_k(6))
    assert len(cells) == 11 and cells[-1] == (Profile(3, 4), 11)
    with pytest.raises(StructureError):
        spiral_order(PayoffMatrix.zeros(4, 4))


evens = st.integers(1, 20).map(lambda k: 2 * k)
zs = st.integers(0, 50)


@given(evens, zs)
def test_recursive_and_closed_form_agree(n, z):
    assert build_k(n, z) == build_k_closed_form(n, z)


@given(evens, zs)
def test_structure_and_value_set(n, z):
    A = build_k(n, z)
    r = validate_structure(A)
    assert r.ok, r.violations
    assert sorted(v for v in A.entries if v) == list(range(z + 1, z + 2 * n))


@given(st.integers(2, 20).map(lambda k: 2 * k), zs)
def test_self_similarity(n, z):
    outer, inner = build_k(n, z).to_rows(), build_k(n - 2, z + 4).to_rows()
    assert [r[1:-1] for r in outer[1:-1]] == inner


@given(evens)
def test_max_is_strict_in_its_row_and_column(n):
    A = build_k(n)
    i, j = n // 2, n // 2 + 1
    top = A.entry(i, j)
    assert top == 2 * n - 1
    assert all(v < top for k, v in enumerate(A.row(i), 1) if k != j)
    assert all(v < top for k, v in enumerate(A.column(j), 1) if k != i)


@given(evens)
def test_spiral_alternates(n):
    cells = [p for p, _ in spiral_order(build_k(n))]
    kinds = []
    for a, b in zip(cells, cells[1:]):
        assert (a.row == b.row) != (a.col == b.col)
        kinds.append(a.row == b.row)
    assert all(x != y for x, y in zip(kinds, kinds[1:]))
