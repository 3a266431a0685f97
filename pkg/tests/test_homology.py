import itertools

import pytest

from symderiv.derivations import bracket, c13_plain, dual_tensor
from symderiv.homology import (
    AlgebraHandle,
    algebra_basis,
    bracket_image,
    conjecture_probe,
    coordinates,
    disconnected_contract,
    h1_weight,
    lambda_factors,
    polygon_contract,
    polygon_contract_permutations,
    verify_exact_sequence,
)
from symderiv.tensors import Tensor, _perm_sign, contract, is_cyclic_invariant


def lambda_tensor(k, symmetric=False):
    factors = lambda_factors(k, symmetric=symmetric)
    S = factors[0].space
    total = Tensor.zero(S, 2 * k)
    for perm in itertools.permutations(range(k)):
        t = factors[perm[0]]
        for j in perm[1:]:
            t = t @ factors[j]
        total = total + _perm_sign(perm) * t
    return total


def contract_cycles(t, cycles):
    # oracle: explicit pairing of slot 2 of factor i with slot 1 of the next factor in its cycle
    S = t.space
    total = 0
    for w, c in t.terms.items():
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                c *= S.pairing(w[2 * a + 1], w[2 * b])
                if not c:
                    break
            if not c:
                break
        total += c
    return total


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_polygon_against_full_expansion(k):
    expected = contract_cycles(lambda_tensor(k), [list(range(k))])
    assert polygon_contract(k) == expected == polygon_contract_permutations(k)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_symmetric_polygon_against_full_expansion(k):
    assert polygon_contract(k, symmetric=True) == contract_cycles(lambda_tensor(k, True), [list(range(k))])


@pytest.mark.parametrize("k1,k2", [(2, 2), (2, 3)])
def test_disconnected_against_full_expansion(k1, k2):
    k = k1 + k2
    cycles = [list(range(k1)), list(range(k1, k))]
    assert disconnected_contract(k1, k2) == contract_cycles(lambda_tensor(k), cycles) == 0


def test_polygon_parities():
    values = {k: polygon_contract(k) for k in range(2, 10)}
    assert [k for k, v in values.items() if v] == [5, 9]
    sym = {k: polygon_contract(k, symmetric=True) for k in range(2, 8)}
    assert [k for k, v in sym.items() if v] == [3, 7]
    assert disconnected_contract(3, 3) == 0


def test_polygon_argument_errors():
    with pytest.raises(ValueError):
        polygon_contract(1)
    with pytest.raises(ValueError):
        lambda_factors(5, g=3)


def test_algebra_handle_validation():
    with pytest.raises(ValueError):
        AlgebraHandle("bogus", 2)
    with pytest.raises(ValueError):
        AlgebraHandle("plain", 1)


@pytest.mark.parametrize("g,expected", [(2, 5), (3, 14)])
def test_small_genus_exact_sequence(g, expected):
    r = verify_exact_sequence(g)
    assert r.c13_bracket_failures == 0
    assert r.c13_rank == 2 * g * g - g - 1
    assert r.pairs_checked == len(algebra_basis(AlgebraHandle("assoc", g), 1)) * (
        len(algebra_basis(AlgebraHandle("assoc", g), 1)) - 1) // 2
    res = h1_weight(AlgebraHandle("assoc", g), 2, r.image)
    assert res.quotient_dim == expected
    assert res.ambient_dim == res.image_dim + res.quotient_dim


def test_bracket_image_modular_agreement():
    img = bracket_image(AlgebraHandle("assoc", 2), 2, primes=3)
    assert len(img.modular_ranks) == 3
    assert set(img.modular_ranks.values()) == {img.basis.dim} == {65}


def test_parallel_image_matches_serial():
    alg = AlgebraHandle("assoc", 2)
    a = bracket_image(alg, 2)
    b = bracket_image(alg, 2, threads=2)
    assert a.basis.rows() == b.basis.rows() and a.pairs == b.pairs


def test_bracket_image_inside_kernel_of_c13():
    alg = AlgebraHandle("assoc", 2)
    for D, E in itertools.combinations(algebra_basis(alg, 1), 2):
        T = dual_tensor(bracket(D, E))
        assert is_cyclic_invariant(T)
        assert not contract(T, 1, 3)


def test_plain_abelianization_n2():
    alg = AlgebraHandle("plain", 2)
    res = h1_weight(alg, 2)
    assert (res.ambient_dim, res.quotient_dim) == (16, 4)
    for m, dim in ((3, 32), (4, 64)):
        img = bracket_image(alg, m, left_degree=1)
        assert img.basis.dim == dim
        assert h1_weight(alg, m, img).quotient_dim == 0


def test_lie_abelianization():
    res = h1_weight(AlgebraHandle("lie", 2), 2)
    assert (res.ambient_dim, res.image_dim, res.quotient_dim) == (20, 6, 14)


def test_weight_one_is_everything():
    res = h1_weight(AlgebraHandle("assoc", 2), 1)
    assert res.quotient_dim == res.ambient_dim == 24


def test_c13_vanishes_on_plain_brackets():
    basis = algebra_basis(AlgebraHandle("plain", 2), 1)
    pairs = list(itertools.combinations(basis, 2))
    assert len(pairs) == 28
    assert not any(c13_plain(bracket(D, E)) for D, E in pairs)


def test_conjecture_probe():
    p2, p3 = conjecture_probe(2), conjecture_probe(3)
    assert p2.result.quotient_dim == 4 and p2.c13_surjective
    assert p3.result.quotient_dim == 9 and p3.c13_rank_on_representatives == 9 and p3.c13_surjective


def test_coordinates_distinguish_algebras():
    D = algebra_basis(AlgebraHandle("assoc", 2), 1)[0]
    assert coordinates(AlgebraHandle("assoc", 2), D)
    with pytest.raises(ValueError):
        h1_weight(AlgebraHandle("assoc", 2), 0)
