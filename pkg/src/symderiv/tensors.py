"""Homogeneous tensors in the free associative algebra T(H) without unit.

Generators are numbered from 0. For a symplectic space of genus g the
generators are ``x_1..x_g`` (indices ``0..g-1``) followed by ``y_1..y_g``
(indices ``g..2g-1``), with ``x_i . y_j = delta_ij``. Slot arguments are
1-based throughout, matching the usual ``C_13`` / ``otimes_ij`` notation.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from sympy import divisors, totient

from .linalg import Scalar, SparseVector, SubspaceBasis, normalize

Word = tuple[int, ...]


@dataclass(frozen=True)
class Space:
    kind: str  # "sympl" or "plain"
    param: int

    def __post_init__(self):
        if self.kind == "sympl":
            if self.param < 1:
                raise ValueError("genus must be >= 1")
        elif self.kind == "plain":
            if self.param < 2:
                raise ValueError("plain dimension must be >= 2")
        else:
            raise ValueError(f"unknown space kind {self.kind!r}")

    @classmethod
    def symplectic(cls, g: int) -> "Space":
        return cls("sympl", g)

    @classmethod
    def plain(cls, n: int) -> "Space":
        return cls("plain", n)

    @property
    def is_symplectic(self) -> bool:
        return self.kind == "sympl"

    @property
    def dim(self) -> int:
        return 2 * self.param if self.is_symplectic else self.param

    @property
    def genus(self) -> int:
        self._require_symplectic()
        return self.param

    def x(self, i: int) -> int:
        """Generator index of ``x_i`` (1-based ``i``)."""
        self._require_symplectic()
        if not 1 <= i <= self.param:
            raise ValueError(f"x_{i} out of range")
        return i - 1

    def y(self, i: int) -> int:
        self._require_symplectic()
        if not 1 <= i <= self.param:
            raise ValueError(f"y_{i} out of range")
        return self.param + i - 1

    def e(self, i: int) -> int:
        if not 1 <= i <= self.dim:
            raise ValueError(f"e_{i} out of range")
        return i - 1

    def label(self, a: int) -> str:
        if self.is_symplectic:
            g = self.param
            return f"x{a + 1}" if a < g else f"y{a - g + 1}"
        return f"e{a + 1}"

    def partner(self, a: int) -> tuple[int, int]:
        """The unique generator ``b`` with ``a . b != 0`` and the value ``a . b``."""
        self._require_symplectic()
        g = self.param
        return (a + g, 1) if a < g else (a - g, -1)

    def pairing(self, a: int, b: int) -> int:
        self._require_symplectic()
        g = self.param
        if a < g and b == a + g:
            return 1
        if b < g and a == b + g:
            return -1
        return 0

    def _require_symplectic(self):
        if not self.is_symplectic:
            raise ValueError("operation needs a symplectic space")

    def __str__(self) -> str:
        return f"{self.kind}:{self.param}"


def pairing(space: Space, a: int, b: int) -> int:
    return space.pairing(a, b)


def word_index(word: Sequence[int], n: int) -> int:
    idx = 0
    for a in word:
        idx = idx * n + a
    return idx


def index_word(idx: int, n: int, degree: int) -> Word:
    out = [0] * degree
    for i in range(degree - 1, -1, -1):
        idx, out[i] = divmod(idx, n)
    return tuple(out)


class Tensor:
    """Homogeneous element of H^{(x)d}, stored as ``{word: coefficient}``."""

    __slots__ = ("space", "degree", "terms")

    def __init__(self, space: Space, degree: int, terms: Mapping[Word, Scalar] | None = None):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        self.space = space
        self.degree = degree
        clean: dict[Word, Scalar] = {}
        if terms:
            n = space.dim
            for w, c in terms.items():
                if len(w) != degree:
                    raise ValueError(f"word {w} has length {len(w)}, expected {degree}")
                if any(not 0 <= a < n for a in w):
                    raise ValueError(f"word {w} has a letter outside the space")
                if c:
                    clean[tuple(w)] = normalize(c)
        self.terms = clean

    @classmethod
    def _raw(cls, space: Space, degree: int, terms: dict[Word, Scalar]) -> "Tensor":
        t = object.__new__(cls)
        t.space = space
        t.degree = degree
        t.terms = terms
        return t

    @classmethod
    def zero(cls, space: Space, degree: int) -> "Tensor":
        return cls._raw(space, degree, {})

    @classmethod
    def word(cls, space: Space, *letters: int, coeff: Scalar = 1) -> "Tensor":
        return cls(space, len(letters), {tuple(letters): coeff})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def coeff(self, word: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(word), 0)

    def _check(self, other: "Tensor"):
        if other.space != self.space:
            raise ValueError("tensors live over different spaces")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        out = dict(self.terms)
        _accumulate(out, other.terms.items())
        return Tensor._raw(self.space, self.degree, out)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-1) * other

    def __neg__(self) -> "Tensor":
        return (-1) * self

    def __rmul__(self, c: Scalar) -> "Tensor":
        if not c:
            return Tensor.zero(self.space, self.degree)
        return Tensor._raw(self.space, self.degree, {w: normalize(c * v) for w, v in self.terms.items()})

    def __matmul__(self, other: "Tensor") -> "Tensor":
        return product(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.space == other.space and self.degree == other.degree and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def vector(self) -> SparseVector:
        n = self.space.dim
        return SparseVector({word_index(w, n): c for w, c in self.terms.items()})

    @classmethod
    def from_vector(cls, space: Space, degree: int, v: Mapping[int, Scalar]) -> "Tensor":
        n = space.dim
        return cls(space, degree, {index_word(i, n, degree): c for i, c in v.items()})

    def __repr__(self) -> str:
        if not self.terms:
            return f"Tensor(0, degree={self.degree})"
        parts = []
        for w in sorted(self.terms):
            c = self.terms[w]
            parts.append(f"{c}*" + "(x)".join(self.space.label(a) for a in w))
        return " + ".join(parts)


def _accumulate(out: dict, items: Iterable[tuple[Word, Scalar]]) -> dict:
    for w, c in items:
        nc = out.get(w, 0) + c
        if nc:
            out[w] = nc
        else:
            out.pop(w, None)
    return out


def tensor_sum(space: Space, degree: int, tensors: Iterable[Tensor]) -> Tensor:
    out: dict[Word, Scalar] = {}
    for t in tensors:
        if t.degree != degree:
            raise ValueError(f"degree mismatch: {t.degree} vs {degree}")
        _accumulate(out, t.terms.items())
    return Tensor._raw(space, degree, out)


def add(t: Tensor, u: Tensor) -> Tensor:
    return t + u


def scale(c: Scalar, t: Tensor) -> Tensor:
    return c * t


def product(t: Tensor, u: Tensor) -> Tensor:
    if t.space != u.space:
        raise ValueError("tensors live over different spaces")
    out: dict[Word, Scalar] = {}
    for w, c in t.terms.items():
        for v, d in u.terms.items():
            _accumulate(out, [(w + v, c * d)])
    return Tensor._raw(t.space, t.degree + u.degree, out)


def generator(space: Space, a: int) -> Tensor:
    return Tensor(space, 1, {(a,): 1})


def omega0(space: Space) -> Tensor:
    """The symplectic class ``sum_i x_i (x) y_i - y_i (x) x_i``."""
    g = space.genus
    terms = {}
    for i in range(g):
        terms[(i, i + g)] = 1
        terms[(i + g, i)] = -1
    return Tensor(space, 2, terms)


# -- slot permutations ---------------------------------------------------------


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def permute_slots(t: Tensor, perm: Sequence[int], signed: bool = False) -> Tensor:
    """Move the letter in slot ``i`` to slot ``perm[i-1]`` (both 1-based)."""
    d = t.degree
    if sorted(perm) != list(range(1, d + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{d}")
    target = [p - 1 for p in perm]
    sign = _perm_sign(target) if signed else 1
    out = {}
    for w, c in t.terms.items():
        nw = [0] * d
        for i, a in enumerate(w):
            nw[target[i]] = a
        out[tuple(nw)] = sign * c
    return Tensor._raw(t.space, d, out)


def cyclic_shift(t: Tensor, times: int = 1) -> Tensor:
    """``u_1 (x) u_2 (x) ... (x) u_m  ->  u_2 (x) ... (x) u_m (x) u_1``, applied ``times`` times."""
    d = t.degree
    if d == 0:
        return t
    s = times % d
    return Tensor._raw(t.space, d, {w[s:] + w[:s]: c for w, c in t.terms.items()})


def front_insert(t: Tensor, i: int) -> Tensor:
    """Move slot ``i`` to the front: ``u_i (x) u_1 (x) ... (x) ^u_i (x) ... (x) u_d``."""
    d = t.degree
    if not 2 <= i <= d:
        raise ValueError(f"slot {i} out of range 2..{d}")
    k = i - 1
    return Tensor._raw(t.space, d, {(w[k],) + w[:k] + w[k + 1:]: c for w, c in t.terms.items()})


def front_to_slot(t: Tensor, i: int) -> Tensor:
    """Inverse of :func:`front_insert`: the first letter moves to slot ``i``."""
    d = t.degree
    if not 2 <= i <= d:
        raise ValueError(f"slot {i} out of range 2..{d}")
    return Tensor._raw(t.space, d, {w[1:i] + w[:1] + w[i:]: c for w, c in t.terms.items()})


def otimes_ij(s: Tensor, t: Tensor, i: int, j: int) -> Tensor:
    """Place the letters of ``s`` in slots ``i < j`` and those of ``t`` in the
    remaining two slots, in order."""
    if s.degree != 2 or t.degree != 2:
        raise ValueError("otimes_ij needs two degree-2 tensors")
    if s.space != t.space:
        raise ValueError("tensors live over different spaces")
    if not 1 <= i < j <= 4:
        raise ValueError(f"({i}, {j}) is not a 2-subset of 1..4")
    k, l = [p for p in range(1, 5) if p not in (i, j)]
    return permute_slots(product(s, t), (i, j, k, l))


# -- contractions and (anti)symmetrization --------------------------------------


def contract(t: Tensor, p: int, q: int) -> Tensor:
    """Pair slot ``p`` with slot ``q`` (``p < q``) via the symplectic form."""
    space = t.space
    space.genus  # noqa: B018 - raises on plain spaces
    d = t.degree
    if not 1 <= p < q <= d:
        raise ValueError(f"invalid contraction slots ({p}, {q}) for degree {d}")
    a, b = p - 1, q - 1
    out: dict[Word, Scalar] = {}
    for w, c in t.terms.items():
        s = space.pairing(w[a], w[b])
        if s:
            rest = w[:a] + w[a + 1:b] + w[b + 1:]
            _accumulate(out, [(rest, s * c)])
    return Tensor._raw(space, d - 2, out)


def antisymmetrize(space: Space, letters: Sequence[int]) -> Tensor:
    """``sum_tau sgn(tau) u_tau(1) (x) ... (x) u_tau(k)``."""
    out: dict[Word, Scalar] = {}
    k = len(letters)
    for perm in itertools.permutations(range(k)):
        _accumulate(out, [(tuple(letters[i] for i in perm), _perm_sign(perm))])
    return Tensor._raw(space, k, out)


def wedge(space: Space, *letters: int) -> Tensor:
    return antisymmetrize(space, letters)


def symmetrize_embed(space: Space, word: Sequence[int]) -> Tensor:
    """Unsigned sum over all permutations of the letters of ``word``."""
    out: dict[Word, Scalar] = {}
    for perm in itertools.permutations(word):
        _accumulate(out, [(tuple(perm), 1)])
    return Tensor._raw(space, len(word), out)


def symmetrize_tensor(t: Tensor) -> Tensor:
    """Average of ``t`` over all slot permutations (projection onto S^d)."""
    d = t.degree
    perms = list(itertools.permutations(range(d)))
    out: dict[Word, Scalar] = {}
    w8 = Fraction(1, len(perms))
    for w, c in t.terms.items():
        for perm in perms:
            _accumulate(out, [(tuple(w[i] for i in perm), c * w8)])
    return Tensor(t.space, d, out)


# -- cyclic invariants ---------------------------------------------------------


def necklace_count(n: int, m: int) -> int:
    """Number of orbits of Z/m acting by rotation on words of length m over n letters."""
    return sum(int(totient(d)) * n ** (m // d) for d in divisors(m)) // m


def canonical_rotation(word: Word) -> Word:
    return min(word[s:] + word[:s] for s in range(len(word)))


def is_cyclic_invariant(t: Tensor) -> bool:
    return cyclic_shift(t) == t


@lru_cache(maxsize=None)
def necklace_representatives(n: int, m: int) -> tuple[Word, ...]:
    return tuple(
        w for w in itertools.product(range(n), repeat=m) if canonical_rotation(w) == w
    )


def orbit_sum(space: Space, word: Word) -> Tensor:
    m = len(word)
    return Tensor(space, m, {r: 1 for r in {word[s:] + word[:s] for s in range(m)}})


def invariant_tensors(space: Space, m: int) -> list[Tensor]:
    """Orbit sums, one per necklace: a basis of the cyclic-invariant tensors."""
    return [orbit_sum(space, w) for w in necklace_representatives(space.dim, m)]


def invariant_subspace(space: Space, m: int) -> SubspaceBasis:
    """Echelon basis of the fixed space of the cyclic shift on H^{(x)m}."""
    return SubspaceBasis(t.vector() for t in invariant_tensors(space, m))


def orbit_coordinates(t: Tensor) -> SparseVector:
    """Coordinates of a cyclic-invariant tensor in the orbit-sum basis,
    keyed by the word index of each necklace's canonical rotation.

    The map is injective on invariant tensors only; callers are expected to
    pass invariant input.
    """
    n = t.space.dim
    return SparseVector(
        {word_index(w, n): c for w, c in t.terms.items() if canonical_rotation(w) == w}
    )


def words(space: Space, degree: int) -> Iterator[Word]:
    return itertools.product(range(space.dim), repeat=degree)
