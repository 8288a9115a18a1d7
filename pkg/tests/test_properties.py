import itertools
import random

import pytest

from blockconj import fixtures
from blockconj.constructions.block_conjugacy import (
    Conjugate,
    NotBlockConjugate,
    construct_two_block,
    decide,
    extract_weak_equivalence,
    verify_block_certificate,
)
from blockconj.constructions.lmt_correspondence import Automorphism, ideal_to_matrix, matrix_to_ideal
from blockconj.constructions.semiconj import semiconjugacy_from_generators, theta
from blockconj.constructions.tori_galois import centralizer_basis, galois_of_xi
from blockconj.tools.exact_linalg import (
    block_matrix,
    identity,
    int_inverse,
    int_matrix,
    split_blocks,
    zero_matrix,
)
from blockconj.tools.ideal_arith import ideal_scale, is_weakly_equivalent, power_order
from blockconj.tools.number_field import FieldElem

ELEMENTARY = [
    int_matrix([[1, 1], [0, 1]]),
    int_matrix([[1, -1], [0, 1]]),
    int_matrix([[1, 0], [1, 1]]),
    int_matrix([[1, 0], [-1, 1]]),
    int_matrix([[0, 1], [1, 0]]),
]
CHANGES = [P * Q for P, Q in itertools.product(ELEMENTARY, repeat=2)]
QUADRATIC = {"A": fixtures.QUADRATIC_A, "B": fixtures.QUADRATIC_B}


def _conjugate(name, index):
    base = Automorphism.from_matrix(QUADRATIC[name])
    P = CHANGES[index]
    return base, Automorphism.with_minpoly(int_inverse(P) * base.mat * P, base.f)


@pytest.mark.parametrize("name", sorted(QUADRATIC))
@pytest.mark.parametrize("index", range(len(CHANGES)))
def test_decide_finds_conjugacy(name, index):
    base, moved = _conjugate(name, index)
    result = decide(base, moved)
    assert isinstance(result.verdict, Conjugate)
    P = result.verdict.witness
    assert P * base.mat == moved.mat * P


@pytest.mark.parametrize("name", sorted(QUADRATIC))
@pytest.mark.parametrize("index", range(len(CHANGES)))
def test_matrix_ideal_round_trip(name, index):
    _, moved = _conjugate(name, index)
    data = matrix_to_ideal(moved)
    back, _ = ideal_to_matrix(data.ideal, basis=data.u)
    assert back.mat == moved.mat


@pytest.mark.parametrize("index", range(len(CHANGES)))
def test_conjugates_stay_weakly_equivalent(index):
    _, moved = _conjugate("A", index)
    B = Automorphism.from_matrix(fixtures.QUADRATIC_B)
    assert is_weakly_equivalent(matrix_to_ideal(moved).ideal, matrix_to_ideal(B).ideal)


@pytest.mark.parametrize("index", range(0, len(CHANGES), 3))
def test_two_block_certificates_for_conjugates(index):
    _, moved = _conjugate("A", index)
    B = Automorphism.from_matrix(fixtures.QUADRATIC_B)
    first, second = construct_two_block(moved, B, seed=index)
    assert verify_block_certificate(first)
    assert verify_block_certificate(second)
    witness = extract_weak_equivalence(first)
    assert witness.verify(matrix_to_ideal(moved).ideal, matrix_to_ideal(B).ideal)


def _centralizer_unit(B, rng):
    """Random product of block shears [[I, B^k], [0, I]] and [[I, 0], [B^k, I]]."""
    n = B.n
    U = identity(2 * n)
    for _ in range(3):
        k = rng.randint(-1, 1)
        power = B.mat ** k if k >= 0 else int_inverse(B.mat)
        sign = rng.choice((1, -1))
        if rng.random() < 0.5:
            shear = block_matrix([[identity(n), sign * power], [zero_matrix(n, n), identity(n)]])
        else:
            shear = block_matrix([[identity(n), zero_matrix(n, n)], [sign * power, identity(n)]])
        U = U * shear
    return U


@pytest.mark.parametrize("seed", range(20))
def test_galois_composition(seed):
    B, xi = fixtures.inverse_pair()
    U = _centralizer_unit(B, random.Random(seed))
    assert galois_of_xi(U, B).is_identity
    assert galois_of_xi(xi * U, B) == galois_of_xi(xi, B)
    assert galois_of_xi(U * xi, B) == galois_of_xi(xi, B)


@pytest.fixture(scope="module")
def cubic_semi():
    A, _ = fixtures.cubic_pair()
    gens = (FieldElem.scalar(2, A.f), FieldElem.from_coeffs((1, 1), A.f))
    return semiconjugacy_from_generators(fixtures.cubic_ideal(A.f), fixtures.cubic_order(A.f), gens)


@pytest.mark.parametrize("seed", range(20))
def test_theta_cocycle_random(cubic_semi, seed):
    rng = random.Random(seed)
    ring, ideal = cubic_semi.order.elements(), cubic_semi.ideal.elements()

    def pick(basis):
        total = FieldElem.zero(basis[0].ctx)
        for x in basis:
            total = total + x * rng.randint(-2, 2)
        return total

    y, z, t = pick(ring), pick(ring), pick(ideal)
    lhs = theta(y * z, t, cubic_semi)
    rhs = tuple(a + y * b for a, b in zip(theta(y, z * t, cubic_semi), theta(z, t, cubic_semi)))
    assert lhs == rhs


S = int_matrix([[1, 1], [0, 1]])
T = int_matrix([[1, 0], [1, 1]])


def _quadratic_family():
    A = Automorphism.from_matrix(fixtures.QUADRATIC_A)
    B = Automorphism.with_minpoly(int_matrix(fixtures.QUADRATIC_B), A.f)
    return {
        "A": A,
        "B": B,
        "A_prime": Automorphism.with_minpoly(int_matrix(fixtures.QUADRATIC_A_PRIME), A.f),
        "B_prime": Automorphism.with_minpoly(int_matrix(fixtures.QUADRATIC_B_PRIME), A.f),
        "A_sheared": Automorphism.with_minpoly(int_inverse(S) * A.mat * S, A.f),
        "B_sheared": Automorphism.with_minpoly(int_inverse(T) * B.mat * T, A.f),
    }


@pytest.mark.parametrize("first, second", list(itertools.combinations(sorted(_quadratic_family()), 2)))
def test_decide_verdict_is_symmetric(first, second):
    family = _quadratic_family()
    X, Y = family[first], family[second]
    assert type(decide(X, Y).verdict) is type(decide(Y, X).verdict)


def test_decide_cubic_pair_is_symmetric():
    A, B = fixtures.cubic_pair()
    assert isinstance(decide(A, B).verdict, NotBlockConjugate)
    assert isinstance(decide(B, A).verdict, NotBlockConjugate)


def _weak_equivalence_table(ideals):
    return {(i, j): is_weakly_equivalent(ideals[i], ideals[j]) for i in ideals for j in ideals}


def _field_ideals(name):
    if name == "quadratic":
        family = _quadratic_family()
        ideals = {key: matrix_to_ideal(aut).ideal for key, aut in family.items()}
        ideals["power_order"] = power_order(family["A"].f)
        ideals["A_tripled"] = ideal_scale(ideals["A"], FieldElem.scalar(3, family["A"].f))
        return ideals
    A, B = fixtures.cubic_pair()
    ideal = fixtures.cubic_ideal(A.f)
    return {
        "A": matrix_to_ideal(A).ideal,
        "B": matrix_to_ideal(B).ideal,
        "ideal": ideal,
        "ideal_halved": ideal_scale(ideal, FieldElem.scalar(1, A.f) / 2),
        "order": fixtures.cubic_order(A.f),
        "power_order": power_order(A.f),
    }


@pytest.mark.parametrize("name", ["quadratic", "cubic"])
def test_weak_equivalence_is_an_equivalence_relation(name):
    ideals = _field_ideals(name)
    table = _weak_equivalence_table(ideals)
    for i in ideals:
        assert table[i, i]
    for i, j in itertools.product(ideals, repeat=2):
        assert table[i, j] == table[j, i]
    for i, j, k in itertools.product(ideals, repeat=3):
        if table[i, j] and table[j, k]:
            assert table[i, k]


def test_weak_equivalence_separates_cubic_classes():
    table = _weak_equivalence_table(_field_ideals("cubic"))
    assert table["ideal", "ideal_halved"]
    assert not table["ideal", "power_order"]
    assert not table["A", "B"]


@pytest.mark.parametrize("name", ["inverse", "quadratic"])
@pytest.mark.parametrize("seed", range(8))
def test_centralizer_blocks_commute(name, seed):
    B = fixtures.inverse_pair()[0] if name == "inverse" else fixtures.quadratic_pair()[1]
    rng = random.Random(seed)
    U = zero_matrix(2 * B.n, 2 * B.n)
    for X in centralizer_basis(B):
        U = U + rng.randint(-3, 3) * X
    blocks = [b for row in split_blocks(U, B.n) for b in row] + [B.mat]
    for X, Y in itertools.combinations(blocks, 2):
        assert X * Y == Y * X


def _cubic_shear(i, j, sign):
    rows = [[int(r == c) for c in range(3)] for r in range(3)]
    rows[i][j] = sign
    return int_matrix(rows)


# shears off column 0 keep the first basis vector fixed
CUBIC_SHEARS = [_cubic_shear(i, j, s) for i, j in [(0, 1), (2, 1), (0, 2), (1, 2)] for s in (1, -1)]
CUBIC_CHANGES = [P * Q for P, Q in itertools.product(CUBIC_SHEARS, repeat=2)]
CUBIC = {"A": fixtures.CUBIC_A, "B": fixtures.CUBIC_B}


@pytest.mark.parametrize("name", sorted(CUBIC))
@pytest.mark.parametrize("index", range(0, len(CUBIC_CHANGES), 4))
def test_decide_finds_cubic_conjugacy(name, index):
    base = Automorphism.from_matrix(CUBIC[name])
    P = CUBIC_CHANGES[index]
    moved = Automorphism.with_minpoly(int_inverse(P) * base.mat * P, base.f)
    result = decide(base, moved)
    assert isinstance(result.verdict, Conjugate)
    W = result.verdict.witness
    assert W * base.mat == moved.mat * W
    assert abs(W.det()) == 1
