import random

import pytest

from blockconj import config, fixtures
from blockconj.constructions.lmt_correspondence import Automorphism
from blockconj.constructions.tori_galois import (
    GaloisElement,
    act_on_script_I,
    centralizer_basis,
    centralizer_entries,
    centralizer_witness,
    check_E_membership_inverse_criterion,
    find_inverse_criterion_xi,
    galois_of_xi,
    invariant_torus,
    is_in_script_I,
    recover_polynomial,
)
from blockconj.errors import PreconditionError
from blockconj.tools.exact_linalg import (
    block_diag,
    block_matrix,
    det,
    direct_sum,
    identity,
    int_inverse,
    int_matrix,
    lattice_coefficients,
    zero_matrix,
)
from blockconj.tools.number_field import FieldElem


@pytest.fixture
def B(inverse):
    return inverse[0]


@pytest.fixture
def xi(inverse):
    return inverse[1]


def test_xi_satisfies_inverse_criterion(B, xi):
    assert check_E_membership_inverse_criterion(xi, B)
    assert xi * xi == identity(4)
    assert not check_E_membership_inverse_criterion(identity(4), B)


def test_galois_of_xi(B, xi):
    element = galois_of_xi(xi, B)
    assert element.p == (20, -1)
    assert element.is_automorphism
    assert not element.is_identity
    assert galois_of_xi(xi * xi, B).is_identity
    assert element.compose(element).is_identity


def test_galois_apply(B, xi):
    element = galois_of_xi(xi, B)
    beta = FieldElem.beta(B.f)
    assert element.apply(beta) == 20 - beta
    assert element.apply(beta * beta) == (20 - beta) * (20 - beta)


def test_galois_reverses_composition(B, xi):
    eta = block_matrix([[identity(2), identity(2)], [identity(2), 2 * identity(2)]])
    assert galois_of_xi(eta, B).is_identity
    assert galois_of_xi(xi * eta, B) == galois_of_xi(xi, B).compose(galois_of_xi(eta, B))
    assert galois_of_xi(eta * xi, B) == galois_of_xi(eta, B).compose(galois_of_xi(xi, B))


def test_galois_of_non_normalizing_matrix(quadratic):
    _, B = quadratic
    M = int_matrix(fixtures.QUADRATIC_M)
    with pytest.raises(PreconditionError):
        galois_of_xi(M, B)


def test_recover_polynomial(B):
    assert recover_polynomial(B, B) == GaloisElement.identity(B.f)
    inverse = Automorphism.with_minpoly(int_inverse(B.mat), B.f)
    assert recover_polynomial(inverse, B).p == (20, -1)
    square = Automorphism.from_matrix(B.mat * B.mat)
    assert recover_polynomial(square, B).p == (-1, 20)


def test_centralizer_basis(B):
    basis = centralizer_basis(B)
    assert len(basis) == 8
    doubled = direct_sum(B.mat, 2)
    for U in basis:
        assert doubled * U == U * doubled

    members = [
        identity(4),
        block_matrix([[identity(2), identity(2)], [identity(2), 2 * identity(2)]]),
        block_matrix([[B.mat * B.mat, zero_matrix(2, 2)], [B.mat, int_inverse(B.mat)]]),
    ]
    for U in members:
        assert lattice_coefficients(basis, U) is not None


def test_centralizer_entries(B):
    U = block_matrix([[identity(2), identity(2)], [identity(2), 2 * identity(2)]])
    (a, b), (c, d) = centralizer_entries(U, B)
    one = FieldElem.one(B.f)
    assert (a, b, c, d) == (one, one, one, 2 * one)


@pytest.mark.parametrize("seed", range(10))
def test_centralizer_determinant(B, seed):
    rng = random.Random(seed)
    basis = centralizer_basis(B)
    U = zero_matrix(4, 4)
    for X in basis:
        U = U + rng.randint(-2, 2) * X
    blocks = [[U[:2, :2], U[:2, 2:]], [U[2:, :2], U[2:, 2:]]]
    assert det(U) == det(blocks[0][0] * blocks[1][1] - blocks[0][1] * blocks[1][0])


def test_is_in_script_I(quadratic):
    A, B = quadratic
    assert is_in_script_I(identity(4), B) == (B, B)

    blocks = is_in_script_I(int_matrix(fixtures.QUADRATIC_M), B)
    assert blocks is not None
    assert blocks[0].mat == A.mat
    assert blocks[1].mat == int_matrix(fixtures.QUADRATIC_A_PRIME)

    sheared = int_matrix([[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert is_in_script_I(sheared, B) is None


def test_act_on_script_I(quadratic):
    _, B = quadratic
    P = int_matrix([[1, 1], [0, 1]])
    Q = int_matrix([[2, 1], [1, 1]])
    moved = act_on_script_I(identity(4), P, Q, B)
    assert moved[0].mat == int_inverse(P) * B.mat * P
    assert moved[1].mat == int_inverse(Q) * B.mat * Q


def test_invariant_torus(quadratic):
    _, B = quadratic
    embed = int_matrix([[1, 0], [0, 1], [0, 0], [0, 0]])
    witness = invariant_torus(embed, B)
    assert witness.induced.mat == B.mat
    assert witness.complemented is not None


def test_cubic_torus_is_not_complemented(cubic):
    A, B = cubic
    witness = invariant_torus(int_matrix(fixtures.CUBIC_EMBED), B)
    assert witness.induced.mat == A.mat
    assert witness.complemented is None


def test_centralizer_witness(quadratic):
    _, B = quadratic
    M = block_diag(int_matrix([[1, 1], [0, 1]]), int_matrix([[2, 1], [1, 1]]))
    U = centralizer_witness(M, B)
    assert U is not None
    doubled = direct_sum(B.mat, 2)
    assert doubled * U == U * doubled
    assert abs(det(U)) == 1


def test_centralizer_witness_none_when_block_not_conjugate(quadratic):
    _, B = quadratic
    assert centralizer_witness(int_matrix(fixtures.QUADRATIC_M), B, bound=5) is None


def test_find_inverse_criterion_xi_result_is_valid(B, monkeypatch):
    monkeypatch.setattr(config, "XI_SAMPLES", 50)
    found = find_inverse_criterion_xi(B, bound=0, seed=1)
    if found is not None:
        assert check_E_membership_inverse_criterion(found, B)
        assert galois_of_xi(found, B).p == (20, -1)
