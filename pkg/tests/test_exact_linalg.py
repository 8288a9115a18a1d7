import random

import pytest
from sympy import Matrix, Rational

from blockconj.errors import NotUnimodularError, PreconditionError
from blockconj.tools.exact_linalg import (
    adjugate,
    block_diag,
    charpoly,
    det,
    det_rows,
    direct_sum,
    evaluate_polynomial,
    hnf,
    identity,
    int_inverse,
    int_matrix,
    intertwiner_basis,
    is_unimodular,
    kernel_lattice,
    lattice_coefficients,
    lattice_intersection,
    rat_matrix,
    solve_integer,
    solve_rational,
    split_blocks,
    zero_matrix,
)


def _is_row_hnf(h):
    last_pivot = -1
    for i in range(h.rows):
        row = list(h.row(i))
        nonzero = [c for c, v in enumerate(row) if v]
        if not nonzero:
            assert all(not any(h.row(j)) for j in range(i, h.rows))
            return True
        p = nonzero[0]
        if p <= last_pivot or h[i, p] <= 0:
            return False
        if any(not (0 <= h[j, p] < h[i, p]) for j in range(i)):
            return False
        last_pivot = p
    return True


def test_hnf_small_example():
    m = int_matrix([[2, 6], [4, 8]])
    form = hnf(m)
    assert form.h == int_matrix([[2, 2], [0, 4]])
    assert form.u * m == form.h
    assert abs(det(form.u)) == 1


@pytest.mark.parametrize("seed", range(40))
def test_hnf_random(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 4), rng.randint(1, 4)
    m = int_matrix([[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)])
    form = hnf(m)
    assert form.u * m == form.h
    assert is_unimodular(form.u)
    assert _is_row_hnf(form.h)


def test_kernel_lattice():
    assert kernel_lattice(int_matrix([[2], [-1]])) == [(1, 2)]
    assert kernel_lattice(identity(3)) == []


def test_solve_integer():
    solution = solve_integer(int_matrix([[2], [3]]), (1,))
    x, y = solution.particular
    assert 2 * x + 3 * y == 1
    assert solution.kernel == [(3, -2)]
    assert solve_integer(int_matrix([[2]]), (3,)) is None


def test_solve_rational():
    m = rat_matrix([[2, 0], [0, 4]])
    assert solve_rational(m, (1, 1)) == (Rational(1, 2), Rational(1, 4))
    assert solve_rational(rat_matrix([[1, 1], [1, 1]]), (1, 2)) is None


def test_lattice_intersection():
    a = [[2, 0], [0, 2]]
    b = [[3, 0], [0, 3]]
    assert lattice_intersection(a, b, 2) == [[6, 0], [0, 6]]


def test_det_and_charpoly():
    a = int_matrix([[8, 5], [3, 2]])
    assert det(a) == 1
    assert det_rows([[8, 5], [3, 2]]) == 1
    assert det_rows([[2, 0, 1], [1, 3, 0], [0, 1, 4]]) == det(int_matrix([[2, 0, 1], [1, 3, 0], [0, 1, 4]]))
    assert charpoly(a) == (1, -10, 1)
    assert charpoly(int_matrix([[0, 1, 0], [-1, 0, 2], [-11, -3, 23]])) == (-1, 7, -23, 1)
    with pytest.raises(PreconditionError):
        det(int_matrix([[1, 2, 3]]))


def test_adjugate_and_inverse():
    a = int_matrix([[9, 8], [1, 1]])
    assert adjugate(a) == int_matrix([[1, -8], [-1, 9]])
    assert int_inverse(a) * a == identity(2)
    with pytest.raises(NotUnimodularError):
        int_inverse(int_matrix([[2, 0], [0, 1]]))


def test_int_matrix_rejects_fractions_and_empty():
    with pytest.raises(ValueError):
        int_matrix([[1.5]])
    with pytest.raises(PreconditionError):
        int_matrix([])


def test_blocks():
    a = int_matrix([[8, 5], [3, 2]])
    b = int_matrix([[9, 8], [1, 1]])
    m = block_diag(a, b)
    blocks = split_blocks(m, 2)
    assert blocks[0][0] == a and blocks[1][1] == b
    assert not any(blocks[0][1]) and not any(blocks[1][0])
    assert direct_sum(a, 3).shape == (6, 6)


def test_evaluate_polynomial_kills_charpoly():
    a = int_matrix([[8, 5], [3, 2]])
    assert not any(evaluate_polynomial((1, -10, 1), a))
    assert evaluate_polynomial((10, -1), a) == int_inverse(a)


def test_intertwiner_basis():
    a = int_matrix([[8, 5], [3, 2]])
    b = int_matrix([[9, 8], [1, 1]])
    basis = intertwiner_basis(b, a)
    assert len(basis) == 2
    for x in basis:
        assert b * x == x * a
    assert lattice_coefficients(intertwiner_basis(a, a), identity(2)) is not None
    assert lattice_coefficients(intertwiner_basis(a, a), int_matrix([[1, 0], [0, 0]])) is None


def _random_matrix(rng, rows, cols, spread=5):
    return int_matrix([[rng.randint(-spread, spread) for _ in range(cols)] for _ in range(rows)])


@pytest.mark.parametrize("seed", range(20))
def test_det_is_multiplicative(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    m1, m2 = _random_matrix(rng, n, n), _random_matrix(rng, n, n)
    assert det(m1 * m2) == det(m1) * det(m2)


@pytest.mark.parametrize("seed", range(20))
def test_adjugate_identity(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    m = _random_matrix(rng, n, n)
    assert m * adjugate(m) == det(m) * identity(n)


@pytest.mark.parametrize("seed", range(20))
def test_hnf_is_idempotent(seed):
    rng = random.Random(seed)
    m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 4), spread=9)
    h = hnf(m).h
    assert hnf(h).h == h


@pytest.mark.parametrize("seed", range(20))
def test_kernel_rank_and_annihilation(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(2, 5), rng.randint(1, 4)
    m = _random_matrix(rng, rows, cols)
    if rng.random() < 0.5:
        # append a combination of existing rows so the rank drops
        extra = [sum(rng.randint(-2, 2) * m[i, j] for i in range(rows)) for j in range(cols)]
        m = int_matrix([list(m.row(i)) for i in range(rows)] + [extra])
    kernel = kernel_lattice(m)
    assert len(kernel) + Matrix(m).rank() == m.rows
    for v in kernel:
        assert int_matrix([v]) * m == zero_matrix(1, m.cols)
    if kernel:
        combo = [sum(rng.randint(-3, 3) * v[i] for v in kernel) for i in range(m.rows)]
        assert int_matrix([combo]) * m == zero_matrix(1, m.cols)
