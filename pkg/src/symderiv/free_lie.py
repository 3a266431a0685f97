"""The free Lie algebra inside T(H): Lyndon bases, the Lie-derivation
algebras l_g(k) and Der(L(H_n))(k), and the trace maps."""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from typing import Iterator

from sympy import divisors, mobius

from .derivations import Derivation, apply_derivation
from .linalg import SubspaceBasis, kernel
from .tensors import Space, Tensor, Word, omega0, product, symmetrize_tensor


def lie_bracket_tensor(t: Tensor, u: Tensor) -> Tensor:
    return product(t, u) - product(u, t)


def witt_number(n: int, d: int) -> int:
    """Dimension of the degree-d part of the free Lie algebra on n generators."""
    return sum(int(mobius(e)) * n ** (d // e) for e in divisors(d)) // d


def lyndon_words(n: int, d: int) -> Iterator[Word]:
    """Lyndon words of length ``d`` over ``0..n-1``, in lexicographic order (Duval)."""
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == d:
            yield tuple(w)
        # extend periodically to length d, then drop trailing maximal letters
        while len(w) < d:
            w.append(w[len(w) - m])
        while w and w[-1] == n - 1:
            w.pop()


def standard_factorization(w: Word) -> tuple[Word, Word]:
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        v = w[i:]
        if _is_lyndon(v):
            return w[:i], v
    raise ValueError(f"{w} has length 1")


def _is_lyndon(w: Word) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def _bracketed(space: Space, w: Word) -> Tensor:
    if len(w) == 1:
        return Tensor(space, 1, {w: 1})
    u, v = standard_factorization(w)
    return lie_bracket_tensor(_bracketed(space, u), _bracketed(space, v))


def lyndon_element(space: Space, w: Word) -> Tensor:
    """The standard bracketing of the Lyndon word ``w`` as a tensor."""
    return _bracketed(space, tuple(w))


def lyndon_basis(space: Space, d: int) -> list[Tensor]:
    if d < 1:
        raise ValueError("degree must be >= 1")
    return [lyndon_element(space, w) for w in lyndon_words(space.dim, d)]


@lru_cache(maxsize=None)
def _lie_span(space: Space, d: int) -> SubspaceBasis:
    return SubspaceBasis(t.vector() for t in lyndon_basis(space, d))


def is_lie_element(t: Tensor) -> bool:
    if t.degree == 0:
        return not t
    return _lie_span(t.space, t.degree).contains(t.vector())


def torus_weight(space: Space, word: Word) -> tuple[int, ...]:
    """Content of a word: per-generator counts (plain) or ``#x_i - #y_i`` (symplectic)."""
    if space.is_symplectic:
        g = space.genus
        wt = [0] * g
        for a in word:
            if a < g:
                wt[a] += 1
            else:
                wt[a - g] -= 1
        return tuple(wt)
    wt = [0] * space.dim
    for a in word:
        wt[a] += 1
    return tuple(wt)


def basis_der_lie(space: Space, k: int) -> list[Derivation]:
    """Basis of Der(L(H))(k) = Hom(H, L(k+1)): generator ``a`` to a Lyndon element."""
    zero = Tensor.zero(space, k + 1)
    out = []
    for a in range(space.dim):
        for ell in lyndon_basis(space, k + 1):
            images = [zero] * space.dim
            images[a] = ell
            out.append(Derivation(space, k, images))
    return out


def basis_l(g: int, k: int) -> list[Derivation]:
    """Basis of the degree-k symplectic Lie derivations (images Lie, ``D(omega0) = 0``).

    Computed as the kernel of ``D -> D(omega0)`` on Hom(H, L(k+1)), one torus
    weight block at a time.
    """
    if g < 1 or k < 1:
        raise ValueError("need g >= 1 and k >= 1")
    space = Space.symplectic(g)
    w0 = omega0(space)
    lyn = list(lyndon_words(space.dim, k + 1))
    blocks: dict[tuple[int, ...], list[tuple[int, Word]]] = defaultdict(list)
    for a in range(space.dim):
        wa = torus_weight(space, (a,))
        for w in lyn:
            wt = tuple(p - q for p, q in zip(torus_weight(space, w), wa))
            blocks[wt].append((a, w))
    zero = Tensor.zero(space, k + 1)
    out = []
    for wt in sorted(blocks):
        cols = blocks[wt]
        images_of = []
        for a, w in cols:
            images = [zero] * space.dim
            images[a] = lyndon_element(space, w)
            images_of.append(Derivation(space, k, images))
        rel = kernel([apply_derivation(D, w0).vector() for D in images_of])
        for row in rel.rows():
            D = Derivation.zero(space, k)
            for i, c in row.items():
                D = D + c * images_of[i]
            out.append(D)
    return out


def dim_l(g: int, k: int) -> int:
    n = 2 * g
    return n * witt_number(n, k + 1) - witt_number(n, k + 2)


def trace_k(D: Derivation) -> Tensor:
    """Contract the dual factor of ``D`` against the first tensor slot, then
    project onto S^k (average over slot permutations)."""
    k = D.degree
    out: dict[Word, object] = {}
    for a, img in enumerate(D.images):
        for w, c in img.terms.items():
            if w[0] == a:
                rest = w[1:]
                out[rest] = out.get(rest, 0) + c
    return symmetrize_tensor(Tensor(D.space, k, out))

