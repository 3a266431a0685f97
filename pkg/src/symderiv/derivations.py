"""Derivations of T(H), stored by the images of the generators.

A degree-k derivation ``D`` sends each generator to a tensor of degree
``k + 1`` and acts on longer words by the Leibniz rule. For a symplectic
space the correspondence ``D -> D* = sum_i x_i (x) D(y_i) - y_i (x) D(x_i)``
identifies the derivations killing ``omega0`` with the cyclic invariants
of degree ``k + 2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .linalg import Scalar, SparseVector
from .tensors import (
    Space,
    Tensor,
    Word,
    _accumulate,
    cyclic_shift,
    invariant_tensors,
    necklace_count,
    omega0,
    word_index,
)


class NotCyclicInvariant(ValueError):
    pass


class Derivation:
    __slots__ = ("space", "degree", "images")

    def __init__(self, space: Space, degree: int, images: Sequence[Tensor]):
        if len(images) != space.dim:
            raise ValueError(f"need {space.dim} generator images, got {len(images)}")
        for t in images:
            if t.space != space or t.degree != degree + 1:
                raise ValueError(f"generator images must have degree {degree + 1}")
        self.space = space
        self.degree = degree
        self.images = tuple(images)

    @classmethod
    def zero(cls, space: Space, degree: int) -> "Derivation":
        return cls(space, degree, [Tensor.zero(space, degree + 1)] * space.dim)

    @classmethod
    def from_images(cls, space: Space, degree: int, images: Mapping[int, Tensor]) -> "Derivation":
        """Build from a partial ``{generator: image}`` map; missing generators go to 0."""
        zero = Tensor.zero(space, degree + 1)
        return cls(space, degree, [images.get(a, zero) for a in range(space.dim)])

    def __call__(self, t: Tensor) -> Tensor:
        return apply_derivation(self, t)

    def __bool__(self) -> bool:
        return any(self.images)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.space == other.space and self.degree == other.degree and self.images == other.images

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "Derivation") -> "Derivation":
        if other.space != self.space or other.degree != self.degree:
            raise ValueError("derivations must share space and degree")
        return Derivation(self.space, self.degree, [a + b for a, b in zip(self.images, other.images)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + (-1) * other

    def __rmul__(self, c: Scalar) -> "Derivation":
        return Derivation(self.space, self.degree, [c * t for t in self.images])

    def __repr__(self) -> str:
        parts = [f"{self.space.label(a)} -> {t!r}" for a, t in enumerate(self.images) if t]
        return f"Derivation(deg={self.degree}; " + "; ".join(parts) + ")"

    def vector(self) -> SparseVector:
        """Coordinates in H* (x) H^{(x)(k+1)}: generator ``a`` and word ``w``
        map to the index of the word ``(a,) + w``."""
        n = self.space.dim
        out = {}
        for a, t in enumerate(self.images):
            for w, c in t.terms.items():
                out[word_index((a,) + w, n)] = c
        return SparseVector(out)


def apply_derivation(D: Derivation, t: Tensor) -> Tensor:
    if t.space != D.space:
        raise ValueError("tensor and derivation live over different spaces")
    images = [img.terms for img in D.images]
    out: dict[Word, Scalar] = {}
    for w, c in t.terms.items():
        for i, a in enumerate(w):
            img = images[a]
            if not img:
                continue
            left, right = w[:i], w[i + 1:]
            for v, d in img.items():
                key = left + v + right
                nc = out.get(key, 0) + c * d
                if nc:
                    out[key] = nc
                else:
                    del out[key]
    return Tensor._raw(D.space, t.degree + D.degree, out)


def bracket(D: Derivation, E: Derivation) -> Derivation:
    """``[D, E](h) = D(E(h)) - E(D(h))`` on generators."""
    if D.space != E.space:
        raise ValueError("derivations live over different spaces")
    images = []
    for h in range(D.space.dim):
        a = apply_derivation(D, E.images[h])
        b = apply_derivation(E, D.images[h])
        images.append(a - b)
    return Derivation(D.space, D.degree + E.degree, images)


def kills_omega0(D: Derivation) -> bool:
    """The symplectic constraint ``D(omega0) = 0``."""
    return not apply_derivation(D, omega0(D.space))


def dual_tensor(D: Derivation) -> Tensor:
    space = D.space
    g = space.genus
    out: dict[Word, Scalar] = {}
    for i in range(g):
        xi, yi = i, i + g
        _accumulate(out, (((xi,) + w, c) for w, c in D.images[yi].terms.items()))
        _accumulate(out, (((yi,) + w, -c) for w, c in D.images[xi].terms.items()))
    return Tensor._raw(space, D.degree + 2, out)


def from_dual_tensor(T: Tensor, check: bool = True) -> Derivation:
    """Inverse of :func:`dual_tensor`: ``D(u) = -sum (u . t_1) t_2 (x) ... (x) t_m``
    over the terms ``t_1 (x) ... (x) t_m`` of ``T``."""
    space = T.space
    if T.degree < 2:
        raise ValueError("dual tensors have degree >= 2")
    if check and cyclic_shift(T) != T:
        raise NotCyclicInvariant("tensor is not fixed by the cyclic shift")
    images: list[dict[Word, Scalar]] = [{} for _ in range(space.dim)]
    for w, c in T.terms.items():
        # u . w[0] is nonzero only for u the partner of w[0]: (b . w0) = -(w0 . b)
        b, s = space.partner(w[0])
        _accumulate(images[b], [(w[1:], s * c)])
    return Derivation(space, T.degree - 2, [Tensor._raw(space, T.degree - 1, im) for im in images])


def basis_a(g: int, k: int) -> list[Derivation]:
    """Basis of the degree-k symplectic derivations, one per necklace of length k+2."""
    if g < 1 or k < 1:
        raise ValueError("need g >= 1 and k >= 1")
    space = Space.symplectic(g)
    return [from_dual_tensor(t, check=False) for t in invariant_tensors(space, k + 2)]


def dim_a(g: int, k: int) -> int:
    return necklace_count(2 * g, k + 2)


def dual_bracket_formula(xi: Tensor, eta: Tensor) -> Tensor:
    """Dual tensor of the bracket of two degree-1 symplectic derivations given
    by their dual 3-tensors, via the explicit four-term expansion."""
    space = xi.space
    if xi.degree != 3 or eta.degree != 3:
        raise ValueError("expected degree-3 dual tensors")
    pr = space.pairing
    out: dict[Word, Scalar] = {}
    for (u1, u2, u3), a in xi.terms.items():
        for (v1, v2, v3), b in eta.terms.items():
            c = a * b
            terms = [
                ((v1, u2, u3, v3), pr(u1, v2) * c),
                ((v1, v2, u2, u3), pr(u1, v3) * c),
                ((u1, v2, v3, u3), -pr(v1, u2) * c),
                ((u1, u2, v2, v3), -pr(v1, u3) * c),
            ]
            _accumulate(out, [(w, x) for w, x in terms if x])
    return Tensor._raw(space, 4, out)


# -- derivations of T(H_n) without the symplectic constraint -------------------


@dataclass(frozen=True)
class DualForm:
    """An element of H_n^*, as coefficients on the dual basis."""

    space: Space
    coeffs: tuple[Scalar, ...]

    @classmethod
    def basis(cls, space: Space, a: int) -> "DualForm":
        return cls(space, tuple(1 if b == a else 0 for b in range(space.dim)))

    def __call__(self, t: Tensor) -> Scalar:
        if t.degree != 1:
            raise ValueError("dual forms evaluate on degree-1 tensors")
        return sum(self.coeffs[w[0]] * c for w, c in t.terms.items())


def plain_derivation(f: DualForm, t: Tensor) -> Derivation:
    """The derivation ``f (x) t``: generator ``h`` maps to ``f(h) t``."""
    space = t.space
    return Derivation(space, t.degree - 1, [f.coeffs[a] * t for a in range(space.dim)])


def basis_der_plain(n: int, k: int) -> list[Derivation]:
    """Basis ``e_a^* (x) w`` of Hom(H_n, H_n^{(x)(k+1)}), ordered by the word ``(a,) + w``."""
    space = Space.plain(n)
    out = []
    for a in range(n):
        f = DualForm.basis(space, a)
        for w in itertools.product(range(n), repeat=k + 1):
            out.append(plain_derivation(f, Tensor(space, k + 1, {w: 1})))
    return out


def bracket_plain(D: Derivation, E: Derivation) -> Derivation:
    return bracket(D, E)


def plain_bracket_formula(f: DualForm, u: Tensor, h: DualForm, v: Tensor) -> Derivation:
    """Bracket of ``f (x) u`` and ``h (x) v`` (``u``, ``v`` single degree-2 words)
    by the explicit four-term expansion."""
    space = u.space
    ((u1, u2), a), = u.terms.items()
    ((v1, v2), b), = v.terms.items()
    c = a * b
    fv = lambda x: f.coeffs[x]  # noqa: E731
    hv = lambda x: h.coeffs[x]  # noqa: E731
    out = Derivation.zero(space, 2)
    out = out + plain_derivation(h, Tensor(space, 3, {(u1, u2, v2): fv(v1) * c}))
    out = out + plain_derivation(h, Tensor(space, 3, {(v1, u1, u2): fv(v2) * c}))
    out = out - plain_derivation(f, Tensor(space, 3, {(v1, v2, u2): hv(u1) * c}))
    out = out - plain_derivation(f, Tensor(space, 3, {(u1, v1, v2): hv(u2) * c}))
    return out


def c13_plain(D: Derivation) -> Tensor:
    """``f (x) u1 (x) u2 (x) u3  ->  f(u2) u1 (x) u3`` on degree-2 derivations."""
    if D.degree != 2:
        raise ValueError("C13 is defined on degree-2 derivations")
    out: dict[Word, Scalar] = {}
    for a, img in enumerate(D.images):
        for (u1, u2, u3), c in img.terms.items():
            if u2 == a:
                _accumulate(out, [((u1, u3), c)])
    return Tensor._raw(D.space, 2, out)


def random_combination(basis: Sequence[Derivation], rng, terms: int = 3, bound: int = 5) -> Derivation:
    """A random integer combination of a few basis elements."""
    picks = rng.sample(range(len(basis)), min(terms, len(basis)))
    out = Derivation.zero(basis[0].space, basis[0].degree)
    for i in picks:
        c = rng.choice([c for c in range(-bound, bound + 1) if c])
        out = out + c * basis[i]
    return out
