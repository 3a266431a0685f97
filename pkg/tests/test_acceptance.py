"""Acceptance criteria 1-12, each reported on one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import time

from symderiv.battery import cached_bracket_image, run_battery, stated_xi2_eta2, witness_elements
from symderiv.cache import Cache, dumps_basis, loads_basis
from symderiv.derivations import (
    Derivation,
    basis_a,
    basis_der_plain,
    bracket,
    c13_plain,
    dual_tensor,
    from_dual_tensor,
    kills_omega0,
    random_combination,
)
from symderiv.free_lie import basis_der_lie, basis_l, lyndon_words, trace_k, witt_number
from symderiv.homology import (
    AlgebraHandle,
    algebra_basis,
    bracket_image,
    conjecture_probe,
    coordinates,
    disconnected_contract,
    h1_weight,
    lie_bracket_surjectivity,
    lambda2_mod_omega_rank,
    plain_derivation_from_tensor,
    polygon_contract,
    verify_exact_sequence,
)
from symderiv.linalg import certified_rank, modular_rank, random_prime, span_dim
from symderiv.rep_theory import (
    IrrepLabel,
    check_section4,
    decomposition_report,
    is_highest_weight,
    label_weight,
    section4_vectors,
    weight_of,
    weyl_dim,
)
from symderiv.report import strip_timings
from symderiv.tensors import (
    Space,
    Tensor,
    contract,
    generator,
    invariant_subspace,
    is_cyclic_invariant,
    necklace_count,
    symmetrize_embed,
    wedge,
)

LINES: list[str] = []


def judge(number, checks, elapsed, budget):
    """``checks``: list of (label, ok). Prints one line and asserts."""
    checks = list(checks) + [(f"runtime {elapsed:.1f}s < {budget}s", elapsed < budget)]
    failed = [label for label, ok in checks if not ok]
    status = "PASS" if not failed else "FAIL"
    line = f"criterion {number:2d}: {status}  ({len(checks) - len(failed)}/{len(checks)} checks, {elapsed:.1f}s)"
    if failed:
        line += "  failing: " + "; ".join(failed)
    LINES.append(line)
    print(line)
    assert not failed, line


def test_criterion_01_dimensions():
    t0 = time.perf_counter()
    out = []
    for g in (1, 2, 3, 4):
        for k in (1, 2, 3):
            out.append((f"dim a_{g}({k})", len(basis_a(g, k)) == necklace_count(2 * g, k + 2)))
    named = {(2, 1): 24, (2, 2): 70, (3, 2): 336, (4, 2): 1044}
    for (g, k), d in named.items():
        out.append((f"a_{g}({k}) = {d}", invariant_subspace(Space.symplectic(g), k + 2).dim == d))
    S = Space.symplectic(2)
    sym = span_dim(symmetrize_embed(S, w).vector() for w in itertools.combinations_with_replacement(range(4), 3))
    alt = span_dim(wedge(S, *w).vector() for w in itertools.combinations(range(4), 3))
    both = span_dim(
        [symmetrize_embed(S, w).vector() for w in itertools.combinations_with_replacement(range(4), 3)]
        + [wedge(S, *w).vector() for w in itertools.combinations(range(4), 3)]
    )
    inv = all(is_cyclic_invariant(symmetrize_embed(S, w)) for w in itertools.combinations_with_replacement(range(4), 3))
    out.append(("a_2(1) = S^3 + Lambda^3 as 20 + 4", (sym, alt, both, inv) == (20, 4, 24, True)))
    judge(1, out, time.perf_counter() - t0, 10)


def test_criterion_02_round_trip():
    t0 = time.perf_counter()
    out = []
    for g in (1, 2, 3):
        for k in (1, 2, 3):
            ok = True
            for T in (dual_tensor(D) for D in basis_a(g, k)):
                ok &= dual_tensor(from_dual_tensor(T)) == T
            out.append((f"round trip g={g} k={k}", ok))
    rng = random.Random(2)
    S = Space.symplectic(2)
    seen = {True: 0, False: 0}
    agree = True
    for i in range(100):
        k = 1 + i % 2
        if i % 4 < 2:
            D = random_combination(basis_a(2, k), rng, terms=3)
        else:
            imgs = [
                Tensor(S, k + 1, {tuple(rng.randrange(4) for _ in range(k + 1)): rng.randint(1, 3) for _ in range(3)})
                for _ in range(4)
            ]
            D = Derivation(S, k, imgs)
        inv = is_cyclic_invariant(dual_tensor(D))
        agree &= kills_omega0(D) == inv
        seen[inv] += 1
    out.append(("D(omega0)=0 iff cyclic invariance on 100 random derivations", agree))
    out.append(("both directions exercised", seen[True] > 0 and seen[False] > 0))
    judge(2, out, time.perf_counter() - t0, 30)


def test_criterion_03_section4_battery():
    t0 = time.perf_counter()
    out = list(check_section4(4))
    table = [c for c in out if c[0].startswith("sigma4(")]
    out.append(("15 sigma4 case identities", len(table) >= 15))
    d = decomposition_report(4)
    out.append(("H^(x)4 Weyl sum 4096", d.tensor4_sum == 4096 == d.tensor4_expected))
    out.append(("a_4(2) Weyl sum 1044", d.a2_sum == 1044 == d.a2_expected))
    dims = {(1, 1): 27, (2,): 36, (2, 2): 308, (3, 1): 594, (2, 1, 1): 315, (1, 1, 1, 1): 42, (4,): 330}
    out.append(("Weyl dims 27/36/308/594/315/42/330", all(weyl_dim(l, 4) == v for l, v in dims.items())))
    judge(3, out, time.perf_counter() - t0, 60)


def test_criterion_04_witnesses():
    t0 = time.perf_counter()
    g = 4
    V = section4_vectors(g)
    S = V.space
    x12 = wedge(S, S.x(1), S.x(2))
    zero = Tensor.zero(S, 2)
    out = [
        ("C13(alpha12) = x1^x2", contract(V["alpha12"], 1, 3) == x12),
        ("C13(alpha13) = 0", contract(V["alpha13"], 1, 3) == zero),
        ("C13(alpha24) = 2g x1^x2", contract(V["alpha24"], 1, 3) == 2 * g * x12),
        ("C13(alpha(1)) = -2g x1^x2", contract(V["alpha(1)"], 1, 3) == -2 * g * x12),
        ("C13(alpha(2)) = 0", contract(V["alpha(2)"], 1, 3) == zero),
    ]
    W = witness_elements(g)
    x1 = generator(S, S.x(1))
    b11 = dual_tensor(bracket(W["xi1"], W["eta1"]))
    out.append(("C11(dual[xi1,eta1]) = -2 x1(x)x1 (literal)", contract(b11, 1, 2) == -2 * (x1 @ x1)))
    b32 = dual_tensor(bracket(W["xi3"], W["eta2"]))
    out.append(("dual[xi3,eta2] = 4 x1^(x)4", b32 == 4 * (x1 @ x1 @ x1 @ x1)))
    b22 = dual_tensor(bracket(W["xi2"], W["eta2"]))
    out.append(("dual[xi2,eta2] matches the displayed tensor (literal)", b22 == stated_xi2_eta2(g)))
    hw = is_highest_weight(b22) and weight_of(b22) == label_weight(IrrepLabel((2, 1, 1)), g)
    out.append(("dual[xi2,eta2] is a [21^2] highest weight vector", hw))
    judge(4, out, time.perf_counter() - t0, 10)


def test_criterion_05_exactness_genus4():
    t0 = time.perf_counter()
    g = 4
    alg = AlgebraHandle("assoc", g)
    image = bracket_image(alg, 2, primes=2)
    out = [("modular ranks agree with exact rank", set(image.modular_ranks.values()) == {image.basis.dim})]
    a1 = algebra_basis(alg, 1)
    W = witness_elements(g)
    pairs = [(W["xi1"], W["eta1"]), (W["xi2"], W["eta2"]), (W["xi3"], W["eta2"])]
    rng = random.Random(5)
    pairs += [(random_combination(a1, rng), random_combination(a1, rng)) for _ in range(1000)]
    out.append(("C13 o bracket = 0 on named + 1000 random pairs",
                not any(contract(dual_tensor(bracket(D, E)), 1, 3) for D, E in pairs)))
    out.append(("named and random brackets lie in the image",
                all(image.basis.contains(coordinates(alg, bracket(D, E))) for D, E in pairs[:200])))
    rank = lambda2_mod_omega_rank(contract(dual_tensor(D), 1, 3) for D in algebra_basis(alg, 2))
    out.append(("C13 onto Lambda^2 H / Q omega0 has rank 27", rank == 27))
    out.append(("bracket image has dim 1044 - 27 = 1017", image.basis.dim == 1017))
    res = h1_weight(alg, 2, image)
    out.append(("H1(a_4)_2 has dim 27", res.quotient_dim == 27 and res.ambient_dim == 1044))
    for gg in (2, 3):
        r = verify_exact_sequence(gg)
        q = h1_weight(AlgebraHandle("assoc", gg), 2, r.image).quotient_dim
        # reported only: the argument needs g >= 4
        print(f"  reported: dim H1(a_{gg})_2 = {q} (equals {2 * gg * gg - gg - 1} if the result extends)")
        out.append((f"g={gg} C13 vanishes on all brackets", r.c13_bracket_failures == 0))
    judge(5, out, time.perf_counter() - t0, 15 * 60)


def test_criterion_06_plain_n2():
    t0 = time.perf_counter()
    alg = AlgebraHandle("plain", 2)
    res = h1_weight(alg, 2)
    out = [("H1(Der+(T(H_2)))_2 has dim 4", res.quotient_dim == 4)]
    imgs = [c13_plain(plain_derivation_from_tensor(T)).vector() for T in res.representatives]
    out.append(("c13 maps representatives bijectively onto a basis of H^(x)2", len(imgs) == 4 and span_dim(imgs) == 4))
    for m, dim in ((3, 32), (4, 64)):
        img = bracket_image(alg, m, left_degree=1)
        out.append((f"[Der(1),Der({m - 1})] spans dim {dim}", img.basis.dim == dim))
        out.append((f"H1 weight {m} vanishes", h1_weight(alg, m, img).quotient_dim == 0))
    judge(6, out, time.perf_counter() - t0, 10)


def test_criterion_07_c13_on_plain_brackets():
    t0 = time.perf_counter()
    out = []
    for n, count in ((2, 28), (3, 351)):
        pairs = list(itertools.combinations(basis_der_plain(n, 1), 2))
        out.append((f"n={n}: {count} pairs", len(pairs) == count))
        out.append((f"n={n}: c13 o bracket = 0", not any(c13_plain(bracket(D, E)) for D, E in pairs)))
    judge(7, out, time.perf_counter() - t0, 10)


def test_criterion_08_polygons():
    t0 = time.perf_counter()
    out = [(f"C_{k}(lambda_{k}) = 0", polygon_contract(k) == 0) for k in (2, 3, 4, 6, 7, 8)]
    out.append(("C_5(lambda_5) != 0", polygon_contract(5) != 0))
    out += [(f"disconnected ({a},{b}) = 0", disconnected_contract(a, b) == 0) for a, b in ((2, 2), (2, 3), (3, 3))]
    out += [(f"symmetric k={k} != 0", polygon_contract(k, symmetric=True) != 0) for k in (3, 7)]
    out += [(f"symmetric k={k} = 0", polygon_contract(k, symmetric=True) == 0) for k in (2, 4, 5, 6)]
    fast = time.perf_counter() - t0
    out.append((f"fast tier {fast:.1f}s < 60s", fast < 60))
    t1 = time.perf_counter()
    out.append(("C_9(lambda_9) != 0", polygon_contract(9) != 0))
    out.append(("k=9 within 15 min", time.perf_counter() - t1 < 15 * 60))
    judge(8, out, time.perf_counter() - t0, 15 * 60 + 60)


def test_criterion_09_trace():
    t0 = time.perf_counter()
    out = []
    for n in (2, 3):
        basis = basis_der_lie(Space.plain(n), 2)
        out.append((f"C13 = -2 trace(2) on Der(L(H_{n}))(2)", all(c13_plain(D) == -2 * trace_k(D) for D in basis)))
    S = Space.plain(4)
    d1, d2 = basis_der_lie(S, 1), basis_der_lie(S, 2)
    out.append(("trace(2) vanishes on [Der(1),Der(1)] at n=4",
                not any(trace_k(bracket(D, E)) for D, E in itertools.combinations(d1, 2))))
    out.append(("trace(3) vanishes on [Der(1),Der(2)] at n=4",
                not any(trace_k(bracket(D, E)) for D, E in itertools.product(d1, d2))))
    judge(9, out, time.perf_counter() - t0, 30)


def test_criterion_10_free_lie():
    t0 = time.perf_counter()
    witt = all(witt_number(n, d) == len(list(lyndon_words(n, d))) for n in range(1, 9) for d in range(1, 6))
    out = [("Witt dimensions n <= 8, d <= 5", witt)]
    out.append(("dim l_2(1) = 4", len(basis_l(2, 1)) == 4))
    split = sum(weyl_dim(lab, 3) for lab in ((), (1, 1), (2, 2)))
    out.append(("dim l_3(2) = 105 = 1 + 14 + 90", len(basis_l(3, 2)) == 105 == split))
    out.append(("Lambda^2 l_3(1) -> l_3(2) full rank 105", lie_bracket_surjectivity(3) == (True, 105, 105)))
    judge(10, out, time.perf_counter() - t0, 60)


def test_criterion_11_conjecture_probe():
    t0 = time.perf_counter()
    p = conjecture_probe(3)
    print(f"  reported: dim H1(Der+(T(H_3)))_2 = {p.result.quotient_dim} (prediction {p.prediction})")
    out = [("quotient dimension computed", isinstance(p.result.quotient_dim, int))]
    out.append(("ambient = image + quotient", p.result.ambient_dim == p.result.image_dim + p.result.quotient_dim))
    judge(11, out, time.perf_counter() - t0, 60)


def _random_derivation(rng, space, degree):
    imgs = []
    for _ in range(space.dim):
        terms = {tuple(rng.randrange(space.dim) for _ in range(degree + 1)): rng.randint(-3, 3) for _ in range(3)}
        imgs.append(Tensor(space, degree + 1, terms))
    return Derivation(space, degree, imgs)


def test_criterion_12_infrastructure(tmp_path):
    t0 = time.perf_counter()
    rng = random.Random(12)
    spaces = [Space.plain(2), Space.plain(3), Space.symplectic(2)]
    jac = anti = leib = True
    for i in range(60):
        S = spaces[i % 3]
        D, E, F = (_random_derivation(rng, S, rng.randint(0, 2)) for _ in range(3))
        jac &= not (bracket(D, bracket(E, F)) + bracket(E, bracket(F, D)) + bracket(F, bracket(D, E)))
        anti &= bracket(D, E) == (-1) * bracket(E, D)
        t = Tensor(S, 2, {(rng.randrange(S.dim), rng.randrange(S.dim)): 1})
        u = Tensor(S, 1, {(rng.randrange(S.dim),): 2})
        leib &= D(t @ u) == D(t) @ u + t @ D(u)
    out = [("Jacobi on 60 random triples", jac), ("antisymmetry on 60 random pairs", anti),
           ("Leibniz on 60 random cases", leib)]

    cache = Cache(tmp_path)
    alg = AlgebraHandle("assoc", 3)
    cold = cached_bracket_image(alg, 2, cache)
    warm = cached_bracket_image(alg, 2, cache)
    text = dumps_basis(cold, alg.space, 4)
    out.append(("cache round trip is byte-identical",
                dumps_basis(warm, alg.space, 4) == text == dumps_basis(loads_basis(text)[0], alg.space, 4)
                and cache.hits == 1 and cache.misses == 1))

    a = strip_timings(run_battery("fast").as_dict())
    b = strip_timings(run_battery("fast").as_dict())
    out.append(("report determinism", a == b))

    agree = True
    for kind, param, m in (("assoc", 2, 2), ("assoc", 3, 2), ("lie", 2, 2), ("plain", 2, 2), ("plain", 3, 2)):
        img = bracket_image(AlgebraHandle(kind, param), m, primes=2)
        agree &= set(img.modular_ranks.values()) == {img.basis.dim}
    for _ in range(20):
        vs = [{rng.randrange(12): rng.randint(-5, 5) for _ in range(4)} for _ in range(10)]
        agree &= modular_rank(vs, random_prime(rng)) == span_dim(vs) == certified_rank(vs)
    out.append(("modular vs exact rank agreement", agree))
    judge(12, out, time.perf_counter() - t0, 300)


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn(Path(tempfile.mkdtemp())) if "tmp_path" in fn.__code__.co_varnames else fn()
            except AssertionError:
                pass
