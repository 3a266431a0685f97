"""Weight-graded abelianizations, the weight-2 exact sequence, polygon
contractions, and the computations for Der(T(H_n))."""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .derivations import (
    Derivation,
    basis_a,
    basis_der_plain,
    bracket,
    c13_plain,
    dual_tensor,
    kills_omega0,
)
from .free_lie import basis_l, dim_l, is_lie_element
from .linalg import (
    ModularBasis,
    RankMismatch,
    Scalar,
    SparseVector,
    SubspaceBasis,
    random_prime,
    span_dim,
)
from .tensors import (
    Space,
    Tensor,
    contract,
    index_word,
    omega0,
    orbit_coordinates,
    permute_slots,
)

KINDS = ("assoc", "lie", "plain")


@dataclass(frozen=True)
class AlgebraHandle:
    """``assoc``: a_g, ``lie``: l_g (parameter g); ``plain``: Der(T(H_n)) (parameter n)."""

    kind: str
    param: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown algebra {self.kind!r}")
        if self.kind == "plain" and self.param < 2:
            raise ValueError("Der(T(H_n)) needs n >= 2")
        if self.kind != "plain" and self.param < 1:
            raise ValueError("genus must be >= 1")

    @property
    def space(self) -> Space:
        return Space.plain(self.param) if self.kind == "plain" else Space.symplectic(self.param)

    def __str__(self) -> str:
        name = {"assoc": "a", "lie": "l", "plain": "Der(T(H))"}[self.kind]
        return f"{name}[{self.param}]"


@lru_cache(maxsize=None)
def algebra_basis(alg: AlgebraHandle, k: int) -> tuple[Derivation, ...]:
    if alg.kind == "assoc":
        return tuple(basis_a(alg.param, k))
    if alg.kind == "lie":
        return tuple(basis_l(alg.param, k))
    return tuple(basis_der_plain(alg.param, k))


def coordinates(alg: AlgebraHandle, D: Derivation) -> SparseVector:
    """Symplectic algebras: orbit coordinates of the dual tensor; plain: H* (x) H^{k+1}."""
    if alg.kind == "plain":
        return D.vector()
    return orbit_coordinates(dual_tensor(D))


def coordinate_tensor(alg: AlgebraHandle, degree: int, v: Mapping[int, Scalar]) -> Tensor:
    """The tensor (dual tensor, or ``(a,) + w`` form for plain) with coordinates ``v``."""
    space = alg.space
    n = space.dim
    if alg.kind == "plain":
        return Tensor(space, degree + 2, {index_word(i, n, degree + 2): c for i, c in v.items()})
    terms = {}
    for i, c in v.items():
        w = index_word(i, n, degree + 2)
        for s in range(len(w)):
            terms[w[s:] + w[:s]] = c
    return Tensor(space, degree + 2, terms)


def bracket_pairs(alg: AlgebraHandle, m: int, left_degree: int | None = None) -> Iterator[tuple[Derivation, Derivation]]:
    """Basis pairs ``[D_i, D_j]`` with ``i + j = m``, ``i <= j`` (pairs within a degree
    taken once); restricted to ``i = left_degree`` when given."""
    for i in range(1, m // 2 + 1):
        j = m - i
        if left_degree is not None and i != left_degree:
            continue
        A, B = algebra_basis(alg, i), algebra_basis(alg, j)
        if i == j:
            yield from itertools.combinations(A, 2)
        else:
            yield from itertools.product(A, B)


@dataclass
class BracketImage:
    algebra: AlgebraHandle
    weight: int
    basis: SubspaceBasis
    pairs: int
    modular_ranks: dict[int, int] = field(default_factory=dict)


def bracket_image(
    alg: AlgebraHandle,
    m: int,
    *,
    left_degree: int | None = None,
    seed: int = 0,
    primes: int = 2,
    on_pair: Callable[[Derivation, Derivation, Derivation], None] | None = None,
    threads: int = 1,
) -> BracketImage:
    """Echelon span of the brackets of weight ``m``, certified by exact elimination
    and cross-checked modulo ``primes`` random 62-bit primes."""
    if m < 2:
        raise ValueError("brackets have weight >= 2")
    rng = random.Random(seed)
    mods = [ModularBasis(random_prime(rng)) for _ in range(primes)]
    exact = SubspaceBasis()
    count = 0
    if threads > 1 and on_pair is None:
        vectors = _parallel_bracket_vectors(alg, m, left_degree, threads)
    else:
        vectors = _bracket_vectors(alg, m, left_degree, on_pair)
    for v in vectors:
        count += 1
        if not v:
            continue
        exact.insert(v)
        for mb in mods:
            mb.insert(v)
    ranks = {mb.p: mb.dim for mb in mods}
    for p, r in ranks.items():
        if r != exact.dim:
            raise RankMismatch(f"rank mod {p} is {r}, exact rank is {exact.dim}")
    return BracketImage(alg, m, exact, count, ranks)


def _bracket_vectors(alg, m, left_degree, on_pair=None) -> Iterator[SparseVector]:
    for D, E in bracket_pairs(alg, m, left_degree):
        B = bracket(D, E)
        if on_pair is not None:
            on_pair(D, E, B)
        yield coordinates(alg, B)


def _chunk_worker(args) -> list[SparseVector]:
    alg, m, left_degree, start, stop = args
    pairs = itertools.islice(bracket_pairs(alg, m, left_degree), start, stop)
    return [coordinates(alg, bracket(D, E)) for D, E in pairs]


def _parallel_bracket_vectors(alg, m, left_degree, threads: int, chunk: int = 2000) -> Iterator[SparseVector]:
    """Bracket coordinates computed in worker processes, yielded in pair order."""
    total = sum(1 for _ in bracket_pairs(alg, m, left_degree))
    jobs = [(alg, m, left_degree, s, min(s + chunk, total)) for s in range(0, total, chunk)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for vecs in pool.map(_chunk_worker, jobs):
            yield from vecs


@dataclass
class H1Result:
    algebra: AlgebraHandle
    weight: int
    ambient_dim: int
    image_dim: int
    quotient_dim: int
    representatives: list[Tensor]

    def as_dict(self) -> dict:
        return {
            "algebra": str(self.algebra),
            "weight": self.weight,
            "ambient_dim": self.ambient_dim,
            "image_dim": self.image_dim,
            "quotient_dim": self.quotient_dim,
            "representatives": [repr(t) for t in self.representatives],
        }


def ambient_basis(alg: AlgebraHandle, m: int) -> SubspaceBasis:
    return SubspaceBasis(coordinates(alg, D) for D in algebra_basis(alg, m))


def h1_weight(alg: AlgebraHandle, m: int, image: BracketImage | SubspaceBasis | None = None) -> H1Result:
    """Weight-m part of the abelianization: degree m modulo brackets of positive degrees."""
    if m < 1:
        raise ValueError("weights start at 1")
    ambient = algebra_basis(alg, m)
    amb_vecs = [coordinates(alg, D) for D in ambient]
    amb = SubspaceBasis(amb_vecs)
    if m == 1:
        img = SubspaceBasis()
    elif image is None:
        img = bracket_image(alg, m).basis
    else:
        img = image.basis if isinstance(image, BracketImage) else image
    for row in img.rows():
        if not amb.contains(row):
            raise ValueError("bracket image is not contained in the degree-m piece")
    reps = []
    span = img.copy()
    for v in amb_vecs:
        if not span.insert(v):
            reps.append(coordinate_tensor(alg, m, v))
    return H1Result(alg, m, amb.dim, img.dim, amb.dim - img.dim, reps)


# -- the weight-2 exact sequence for a_g ----------------------------------------


def lambda2_mod_omega_rank(tensors: Iterable[Tensor]) -> int:
    """Rank of the images of degree-2 tensors in Lambda^2 H / Q omega0."""
    tensors = list(tensors)
    if not tensors:
        return 0
    space = tensors[0].space
    vecs = [(t - permute_slots(t, (2, 1))).vector() for t in tensors]
    w0 = omega0(space).vector()
    return span_dim(vecs + [w0]) - 1


@dataclass
class ExactSequenceReport:
    g: int
    pairs_checked: int
    c13_bracket_failures: int
    c13_rank: int
    expected_c13_rank: int
    a2_dim: int
    image_dim: int
    image: BracketImage | None = None

    @property
    def expected_image_dim(self) -> int:
        return self.a2_dim - self.expected_c13_rank

    @property
    def checks(self) -> dict[str, bool]:
        return {
            "C13 vanishes on brackets": self.c13_bracket_failures == 0,
            "C13 onto Lambda^2 H / Q omega0": self.c13_rank == self.expected_c13_rank,
            "bracket image has complementary dimension": self.image_dim == self.expected_image_dim,
        }

    @property
    def exact(self) -> bool:
        return all(self.checks.values())


def verify_exact_sequence(g: int, image: BracketImage | None = None) -> ExactSequenceReport:
    if g < 2:
        raise ValueError("need g >= 2")
    alg = AlgebraHandle("assoc", g)
    a2 = algebra_basis(alg, 2)
    rank = lambda2_mod_omega_rank(contract(dual_tensor(D), 1, 3) for D in a2)
    failures = 0
    pairs = 0
    if image is None:

        def check(D, E, B):
            nonlocal failures, pairs
            pairs += 1
            if contract(dual_tensor(B), 1, 3):
                failures += 1

        image = bracket_image(alg, 2, on_pair=check)
    else:
        for D, E in bracket_pairs(alg, 2):
            pairs += 1
            if contract(dual_tensor(bracket(D, E)), 1, 3):
                failures += 1
    return ExactSequenceReport(
        g=g,
        pairs_checked=pairs,
        c13_bracket_failures=failures,
        c13_rank=rank,
        expected_c13_rank=2 * g * g - g - 1,
        a2_dim=len(a2),
        image_dim=image.basis.dim,
        image=image,
    )


def lie_bracket_surjectivity(g: int) -> tuple[bool, int, int]:
    """Whether brackets of pairs in l_g(1) span l_g(2); returns (flag, image dim, dim l_g(2))."""
    alg = AlgebraHandle("lie", g)
    target = ambient_basis(alg, 2)
    img = SubspaceBasis()
    for D, E in itertools.combinations(algebra_basis(alg, 1), 2):
        B = bracket(D, E)
        v = coordinates(alg, B)
        if not target.contains(v):
            raise AssertionError("bracket left l_g(2)")
        img.insert(v)
    if target.dim != dim_l(g, 2):
        raise AssertionError("l_g(2) has the wrong dimension")
    return img.dim == target.dim, img.dim, target.dim


def is_lie_derivation(D: Derivation) -> bool:
    return all(is_lie_element(t) for t in D.images) and kills_omega0(D)


# -- polygon contractions ------------------------------------------------------


def _omega_matrix(n: int, g: int) -> np.ndarray:
    W = np.zeros((n, n), dtype=np.int64)
    for i in range(g):
        W[i, i + g] = 1
        W[i + g, i] = -1
    return W


def lambda_factors(k: int, g: int | None = None, symmetric: bool = False) -> list[Tensor]:
    """``x_i ^ y_{i+1}`` (indices mod k); with ``symmetric``, ``x_i y_{i+1} + y_{i+1} x_i``."""
    g = k if g is None else g
    if k > g:
        raise ValueError(f"k={k} needs genus >= k, got g={g}")
    S = Space.symplectic(g)
    sign = 1 if symmetric else -1
    out = []
    for i in range(1, k + 1):
        a, b = S.x(i), S.y(i % k + 1)
        out.append(Tensor(S, 2, {(a, b): 1, (b, a): sign}))
    return out


def _factor_matrices(factors: list[Tensor]) -> list[np.ndarray]:
    space = factors[0].space
    n = space.dim
    W = _omega_matrix(n, space.genus)
    mats = []
    for t in factors:
        A = np.zeros((n, n), dtype=np.int64)
        for (p, q), c in t.terms.items():
            A[p, q] = c
        mats.append(A @ W)
    return mats


def _signed_orderings(mats: list[np.ndarray]) -> dict[int, np.ndarray]:
    """For every subset S (bitmask): sum over orderings of S of sign * product,
    the sign being that of the ordering as a sequence of the indices in S."""
    k = len(mats)
    n = mats[0].shape[0]
    F: dict[int, np.ndarray] = {0: np.eye(n, dtype=np.int64)}
    for mask in range(1 << k):
        if mask not in F:
            continue
        cur = F[mask]
        for j in range(k):
            if mask >> j & 1:
                continue
            # appending j after the larger elements of S costs one inversion each
            sign = -1 if bin(mask >> (j + 1)).count("1") % 2 else 1
            nxt = mask | 1 << j
            F[nxt] = F.get(nxt, 0) + sign * (cur @ mats[j])
    # entries stay below k! * 2^k, far inside int64 for k <= 12
    return F


def polygon_contract(k: int, g: int | None = None, symmetric: bool = False) -> int:
    """The k-gon contraction of ``lambda_k = sum_tau sgn(tau) l_tau(1) (x) ... (x) l_tau(k)``:
    slot 2 of factor i is paired with slot 1 of factor i+1 (cyclically)."""
    if k < 2:
        raise ValueError("polygons have k >= 2")
    mats = _factor_matrices(lambda_factors(k, g, symmetric))
    F = _signed_orderings(mats)
    return int(np.trace(F[(1 << k) - 1]))


def polygon_contract_permutations(k: int, g: int | None = None, symmetric: bool = False) -> int:
    """Same value as :func:`polygon_contract`, by enumerating all k! orderings."""
    mats = _factor_matrices(lambda_factors(k, g, symmetric))
    n = mats[0].shape[0]
    total = 0
    for perm in itertools.permutations(range(k)):
        M = np.eye(n, dtype=np.int64)
        for j in perm:
            M = M @ mats[j]
        total += _sign(perm) * int(np.trace(M))
    return total


def _sign(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def disconnected_contract(k1: int, k2: int, g: int | None = None, symmetric: bool = False) -> int:
    """Contraction of ``lambda_{k1+k2}`` along two disjoint polygons: factors
    ``1..k1`` form one cycle and ``k1+1..k1+k2`` the other."""
    if k1 < 2 or k2 < 2:
        raise ValueError("each polygon needs at least two factors")
    k = k1 + k2
    mats = _factor_matrices(lambda_factors(k, g, symmetric))
    F = _signed_orderings(mats)
    full = (1 << k) - 1
    total = 0
    for S in itertools.combinations(range(k), k1):
        mask = sum(1 << i for i in S)
        rest = full ^ mask
        inv = sum(1 for s in S for t in range(k) if not mask >> t & 1 and s > t)
        sign = -1 if inv % 2 else 1
        total += sign * int(np.trace(F[mask])) * int(np.trace(F[rest]))
    return total


# -- Der(T(H_n)) ---------------------------------------------------------------


def plain_derivation_from_tensor(T: Tensor) -> Derivation:
    """Inverse of :meth:`Derivation.vector` on a plain space: the word ``(a,) + w``
    becomes the term ``e_a^* (x) w``."""
    space = T.space
    zero: dict = {}
    images = [dict(zero) for _ in range(space.dim)]
    for w, c in T.terms.items():
        images[w[0]][w[1:]] = c
    return Derivation(space, T.degree - 2, [Tensor(space, T.degree - 1, im) for im in images])


@dataclass
class ConjectureProbe:
    n: int
    result: H1Result
    prediction: int
    c13_rank_on_representatives: int
    c13_surjective: bool


def conjecture_probe(n: int) -> ConjectureProbe:
    alg = AlgebraHandle("plain", n)
    res = h1_weight(alg, 2)
    reps = [c13_plain(plain_derivation_from_tensor(T)) for T in res.representatives]
    rank = span_dim(t.vector() for t in reps)
    surj = span_dim(c13_plain(D).vector() for D in algebra_basis(alg, 2)) == n * n
    return ConjectureProbe(n, res, n * n, rank, surj)
