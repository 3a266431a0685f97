"""The verification battery behind ``symderiv verify-paper``.

Every check records what was computed next to what the literature states.
Tensor-valued checks compare the sorted text rendering of both sides, so a
failing check shows the full difference in the report.
"""

from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction

from .cache import Cache, CacheKey
from .derivations import (
    Derivation,
    basis_a,
    basis_der_plain,
    bracket,
    c13_plain,
    dual_tensor,
    from_dual_tensor,
)
from .free_lie import basis_der_lie, basis_l, dim_l, trace_k
from .homology import (
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
from .linalg import SubspaceBasis, span_dim
from .rep_theory import (
    IrrepLabel,
    check_section4,
    decomposition_report,
    is_highest_weight,
    label_weight,
    section4_vectors,
    weight_of,
    weyl_dim,
)
from .report import Report
from .tensors import Space, Tensor, contract, generator, necklace_count, symmetrize_embed, wedge

TIERS = ("fast", "full")
HALF = Fraction(1, 2)

A_SYM = "symplectic derivations, weight-2 abelianization"
A_DECOMP = "decomposition of a_g(2) into irreducibles"
A_POLY = "polygon contractions of lambda_k"
A_PLAIN = "derivations of the free associative algebra on H_n"
A_TRACE = "trace maps on Lie derivations"
A_LIE = "derivations of the free Lie algebra"
A_CONJ = "conjectural weight-2 abelianization for n >= 3"


def _t(tensor: Tensor) -> str:
    return repr(tensor)


def _word(space: Space, *names: str) -> Tensor:
    """``_word(S, 'x1', 'y2')`` is the pure tensor x1 (x) y2."""
    letters = [space.x(int(s[1:])) if s[0] == "x" else space.y(int(s[1:])) for s in names]
    return Tensor(space, len(letters), {tuple(letters): 1})


def _timed(fn):
    t0 = time.perf_counter()
    value = fn()
    return value, int((time.perf_counter() - t0) * 1000)


# -- witnesses ------------------------------------------------------------------


def witness_elements(g: int) -> dict[str, Derivation]:
    """The degree-1 elements used to exhibit [2], [21^2] and [4] as commutators."""
    S = Space.symplectic(g)
    x1, y1, y3 = S.x(1), S.y(1), S.y(3)
    tensors = {
        "xi1": wedge(S, S.x(2), S.y(2), S.x(3)),
        "eta1": HALF * symmetrize_embed(S, (x1, x1, y3)),
        "xi2": wedge(S, S.x(1), S.x(2), S.x(3)),
        "eta2": HALF * symmetrize_embed(S, (x1, x1, y1)),
        "xi3": Tensor(S, 3, {(x1, x1, x1): 1}),
    }
    return {name: from_dual_tensor(t) for name, t in tensors.items()}


def stated_xi2_eta2(g: int) -> Tensor:
    """The bracket [xi2, eta2] exactly as printed in the literature."""
    S = Space.symplectic(g)
    w = lambda *n: _word(S, *n)  # noqa: E731
    return (
        w("x1", "x1", "x2", "x3") - w("x1", "x1", "x3", "x2")
        - w("x1", "x2", "x3", "x1") + w("x1", "x3", "x2", "x1")
        - w("x2", "x1", "x1", "x3") + w("x2", "x3", "x1", "x1")
        + w("x3", "x1", "x1", "x2") - w("x3", "x2", "x1", "x1")
    )


def witness_checks(report: Report, g: int = 4):
    V = section4_vectors(g)
    S = V.space
    x12 = wedge(S, S.x(1), S.x(2))
    stated = {
        "alpha12": x12,
        "alpha13": Tensor.zero(S, 2),
        "alpha14": x12,
        "alpha23": x12,
        "alpha24": 2 * g * x12,
        "alpha34": x12,
        "alpha(1)": -2 * g * x12,
        "alpha(2)": Tensor.zero(S, 2),
    }
    for name, expect in stated.items():
        val, ms = _timed(lambda: contract(V[name], 1, 3))
        report.add(f"C13({name}) at g={g}", A_SYM, _t(val), _t(expect), ms)

    W = witness_elements(g)
    x1 = generator(S, S.x(1))
    b11, ms = _timed(lambda: dual_tensor(bracket(W["xi1"], W["eta1"])))
    report.add("C11(dual[xi1, eta1]) = -2 x1(x)x1", A_SYM, _t(contract(b11, 1, 2)), _t(-2 * (x1 @ x1)), ms)
    b22, ms = _timed(lambda: dual_tensor(bracket(W["xi2"], W["eta2"])))
    report.add("dual[xi2, eta2] equals the stated tensor", A_SYM, _t(b22), _t(stated_xi2_eta2(g)), ms)
    hw = is_highest_weight(b22) and weight_of(b22) == label_weight(IrrepLabel((2, 1, 1)), g)
    report.add("dual[xi2, eta2] is a highest weight vector of [21^2]", A_SYM, hw, True)
    b32, ms = _timed(lambda: dual_tensor(bracket(W["xi3"], W["eta2"])))
    report.add("dual[xi3, eta2] = 4 x1(x)x1(x)x1(x)x1", A_SYM, _t(b32), _t(4 * (x1 @ x1 @ x1 @ x1)), ms)
    hw4 = is_highest_weight(b32) and weight_of(b32) == label_weight(IrrepLabel((4,)), g)
    report.add("dual[xi3, eta2] is a highest weight vector of [4]", A_SYM, hw4, True)


# -- groups ---------------------------------------------------------------------


def dimension_checks(report: Report):
    for g in (1, 2, 3, 4):
        for k in (1, 2, 3):
            if g == 4 and k == 3:
                continue
            val, ms = _timed(lambda: len(basis_a(g, k)))
            report.add(f"dim a_{g}({k}) = necklace count", A_SYM, val, necklace_count(2 * g, k + 2), ms)
    S = Space.symplectic(2)
    sym = SubspaceBasis(symmetrize_embed(S, w).vector() for w in itertools.combinations_with_replacement(range(4), 3))
    alt = SubspaceBasis(wedge(S, *w).vector() for w in itertools.combinations(range(4), 3))
    report.add("a_2(1) = S^3 H + Lambda^3 H has dims 20 + 4", A_SYM, [sym.dim, alt.dim], [20, 4])
    both = sym.copy()
    for row in alt.rows():
        both.insert(row)
    report.add("S^3 H + Lambda^3 H spans a_2(1)", A_SYM, both.dim, len(basis_a(2, 1)))


def section4_checks(report: Report, g: int = 4):
    results, ms = _timed(lambda: check_section4(g))
    for name, ok in results:
        report.add(name, A_DECOMP, ok, True, ms // max(len(results), 1))
    d = decomposition_report(g)
    report.add(f"Weyl dimensions at g={g}", A_DECOMP, d.weyl_dims, _weyl_expected(g))
    report.add(f"sum of Weyl dims in H^(x)4 at g={g}", A_DECOMP, d.tensor4_sum, d.tensor4_expected)
    report.add(f"sum of Weyl dims in a_{g}(2)", A_DECOMP, d.a2_sum, d.a2_expected)
    report.add("[1^4] absent from a_g(2)", A_DECOMP, d.one_four_absent, True)


def _weyl_expected(g: int) -> dict[str, int] | None:
    if g != 4:
        return None
    return {"Q": 1, "[1^2]": 27, "[2]": 36, "[2^2]": 308, "[31]": 594, "[21^2]": 315, "[1^4]": 42, "[4]": 330}


def exactness_small(report: Report):
    for g in (2, 3):
        r, ms = _timed(lambda: verify_exact_sequence(g))
        report.add(f"C13 vanishes on all brackets of degree-(1,1) basis pairs, g={g}", A_SYM, r.c13_bracket_failures, 0, ms)
        report.add(f"C13 rank onto Lambda^2 H / Q omega0, g={g}", A_SYM, r.c13_rank, 2 * g * g - g - 1)
        q = h1_weight(AlgebraHandle("assoc", g), 2, r.image)
        report.add(
            f"dim H1(a_{g})_2 (equals {2 * g * g - g - 1} if the isomorphism extends)",
            A_SYM,
            q.quotient_dim,
            None,
            ms,
        )


def exactness_g4(report: Report, cache: Cache, threads: int = 1, random_pairs: int = 1000, seed: int = 0):
    g = 4
    alg = AlgebraHandle("assoc", g)
    t0 = time.perf_counter()
    image = cached_bracket_image(alg, 2, cache, threads)
    report.add(f"bracket image of a_{g}(2) has dim 1044 - 27", A_SYM, image.dim, 1017, _ms(t0))

    t0 = time.perf_counter()
    a1 = algebra_basis(alg, 1)
    W = witness_elements(g)
    named = [("xi1", "eta1"), ("xi2", "eta2"), ("xi3", "eta2")]
    pairs = [(W[a], W[b]) for a, b in named]
    rng = random.Random(seed)
    all_pairs = list(itertools.combinations(range(len(a1)), 2))
    pairs += [(a1[i], a1[j]) for i, j in rng.sample(all_pairs, min(random_pairs, len(all_pairs)))]
    bad = 0
    outside = 0
    for D, E in pairs:
        B = bracket(D, E)
        if contract(dual_tensor(B), 1, 3):
            bad += 1
        if not image.contains(coordinates(alg, B)):
            outside += 1
    report.add(
        f"C13 vanishes on brackets (named pairs + {random_pairs} random pairs), g={g}", A_SYM, bad, 0, _ms(t0)
    )
    report.add(f"sampled brackets lie in the computed image, g={g}", A_SYM, outside, 0)

    t0 = time.perf_counter()
    rank = lambda2_mod_omega_rank(contract(dual_tensor(D), 1, 3) for D in algebra_basis(alg, 2))
    report.add(f"C13 onto Lambda^2 H / Q omega0 (rank), g={g}", A_SYM, rank, 27, _ms(t0))
    t0 = time.perf_counter()
    q = h1_weight(alg, 2, image)
    report.add(f"dim H1(a_{g})_2", A_SYM, q.quotient_dim, 27, _ms(t0))


def _ms(t0: float) -> int:
    return int((time.perf_counter() - t0) * 1000)


def cached_bracket_image(alg: AlgebraHandle, m: int, cache: Cache, threads: int = 1) -> SubspaceBasis:
    key = CacheKey(alg.kind, alg.param, m, "bracket-image")
    basis = cache.load(key)
    if basis is None:
        basis = bracket_image(alg, m, threads=threads).basis
        cache.store(key, basis, alg.space, m + 2)
    return basis


def polygon_checks(report: Report, tier: str):
    ks = range(2, 10 if tier == "full" else 9)
    for k in ks:
        val, ms = _timed(lambda: polygon_contract(k))
        expect_nonzero = k % 4 == 1 and k >= 5
        report.add(f"C_{k}(lambda_{k}) vanishes", A_POLY, val == 0, not expect_nonzero, ms)
        report.add(f"C_{k}(lambda_{k}) value", A_POLY, val, None)
    for k1, k2 in ((2, 2), (2, 3), (3, 3)):
        val, ms = _timed(lambda: disconnected_contract(k1, k2))
        report.add(f"disconnected contraction ({k1},{k2}) on lambda_{k1 + k2}", A_POLY, val, 0, ms)
    for k in range(2, 8):
        val, ms = _timed(lambda: polygon_contract(k, symmetric=True))
        expect_nonzero = k % 4 == 3
        report.add(f"symmetric-square analogue vanishes at k={k}", A_POLY, val == 0, not expect_nonzero, ms)


def plain_checks(report: Report):
    alg = AlgebraHandle("plain", 2)
    res, ms = _timed(lambda: h1_weight(alg, 2))
    report.add("dim H1(Der+(T(H_2)))_2", A_PLAIN, res.quotient_dim, 4, ms)
    imgs = [c13_plain(plain_derivation_from_tensor(T)).vector() for T in res.representatives]
    report.add("c13 maps the quotient representatives onto a basis of H_2^(x)2", A_PLAIN, span_dim(imgs), 4)
    for m, target in ((3, 32), (4, 64)):
        img, ms = _timed(lambda: bracket_image(alg, m, left_degree=1))
        report.add(f"[Der(1), Der({m - 1})] spans Der({m}) (dim {target})", A_PLAIN, img.basis.dim, target, ms)
        q = h1_weight(alg, m, img)
        report.add(f"dim H1(Der+(T(H_2)))_{m}", A_PLAIN, q.quotient_dim, 0)
    for n, npairs in ((2, 28), (3, 351)):
        t0 = time.perf_counter()
        basis = basis_der_plain(n, 1)
        pairs = list(itertools.combinations(basis, 2))
        bad = sum(1 for D, E in pairs if c13_plain(bracket(D, E)))
        report.add(f"c13 vanishes on all {npairs} degree-(1,1) bracket pairs, n={n}", A_PLAIN, [len(pairs), bad], [npairs, 0], _ms(t0))


def trace_checks(report: Report):
    for n in (2, 3):
        t0 = time.perf_counter()
        basis = basis_der_lie(Space.plain(n), 2)
        bad = sum(1 for D in basis if c13_plain(D) != -2 * trace_k(D))
        report.add(f"C13 = -2 trace(2) on Der(L(H_{n}))(2) ({len(basis)} basis elements)", A_TRACE, bad, 0, _ms(t0))
    S = Space.plain(4)
    d1, d2 = basis_der_lie(S, 1), basis_der_lie(S, 2)
    t0 = time.perf_counter()
    bad = sum(1 for D, E in itertools.combinations(d1, 2) if trace_k(bracket(D, E)))
    report.add("trace(2) vanishes on [Der(1), Der(1)], n=4", A_TRACE, bad, 0, _ms(t0))
    t0 = time.perf_counter()
    bad = sum(1 for D, E in itertools.product(d1, d2) if trace_k(bracket(D, E)))
    report.add("trace(3) vanishes on [Der(1), Der(2)], n=4", A_TRACE, bad, 0, _ms(t0))


def lie_checks(report: Report):
    val, ms = _timed(lambda: len(basis_l(2, 1)))
    report.add("dim l_2(1)", A_LIE, val, 4, ms)
    val, ms = _timed(lambda: len(basis_l(3, 2)))
    report.add("dim l_3(2)", A_LIE, val, 105, ms)
    split = [weyl_dim(IrrepLabel(lab), 3) for lab in ((), (1, 1), (2, 2))]
    report.add("l_3(2) = Q + [1^2] + [2^2] has dims 1 + 14 + 90", A_LIE, split, [1, 14, 90])
    report.add("dim l_g(2) formula agrees, g=3", A_LIE, dim_l(3, 2), 105)
    (ok, img, target), ms = _timed(lambda: lie_bracket_surjectivity(3))
    report.add("Lambda^2 l_3(1) -> l_3(2) is surjective", A_LIE, [ok, img], [True, 105], ms)
    (ok, img, target), ms = _timed(lambda: lie_bracket_surjectivity(2))
    report.add(f"Lambda^2 l_2(1) -> l_2(2) image dim (target {target})", A_LIE, img, None, ms)


def conjecture_checks(report: Report):
    p, ms = _timed(lambda: conjecture_probe(3))
    report.add(f"dim H1(Der+(T(H_3)))_2 (prediction {p.prediction})", A_CONJ, p.result.quotient_dim, None, ms)
    report.add("c13 surjects Der(T(H_3))(2) onto H_3^(x)2", A_CONJ, p.c13_surjective, True)


def run_battery(tier: str = "fast", cache: Cache | None = None, threads: int = 1) -> Report:
    if tier not in TIERS:
        raise ValueError(f"unknown tier {tier!r}")
    cache = cache if cache is not None else Cache(enabled=False)
    report = Report("verify-paper", {"tier": tier})
    dimension_checks(report)
    section4_checks(report)
    witness_checks(report)
    exactness_small(report)
    if tier == "full":
        exactness_g4(report, cache, threads)
    polygon_checks(report, tier)
    plain_checks(report)
    trace_checks(report)
    lie_checks(report)
    conjecture_checks(report)
    report.cache_hits, report.cache_misses = cache.hits, cache.misses
    return report
