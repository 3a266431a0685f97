"""Exact sparse linear algebra over Q, with a modular fast path.

Vectors are sparse mappings ``index -> coefficient``; coefficients are
``int`` or :class:`fractions.Fraction`. All elimination is deterministic:
the pivot of a vector is its smallest index with a nonzero coefficient.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Union

import sympy

Scalar = Union[int, Fraction]


def normalize(c: Scalar) -> Scalar:
    """Return ``c`` as an ``int`` when it is integral."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class SparseVector(Mapping[int, Scalar]):
    """Immutable sparse vector; iteration is in increasing index order."""

    __slots__ = ("_data", "_keys")

    def __init__(self, entries: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data: dict[int, Scalar] = {}
        for k, c in items:
            c = data.get(k, 0) + c
            if c:
                data[k] = normalize(c)
            else:
                data.pop(k, None)
        self._keys = tuple(sorted(data))
        self._data = data

    def __getitem__(self, k: int) -> Scalar:
        return self._data[k]

    def __iter__(self) -> Iterator[int]:
        return iter(self._keys)

    def __len__(self) -> int:
        return len(self._keys)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {self._data[k]}" for k in self._keys)
        return f"SparseVector({{{body}}})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Mapping):
            return dict(self.items()) == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple((k, self._data[k]) for k in self._keys))


def unit(i: int) -> SparseVector:
    return SparseVector({i: 1})


class SubspaceBasis:
    """Reduced row-echelon basis of a subspace of Q^N.

    Each row has pivot coefficient 1 and is zero at every other pivot.
    :meth:`insert` mutates in place; use :meth:`copy` (or
    :func:`insert_reduce`) when an unchanged original is needed.
    """

    def __init__(self, vectors: Iterable[Mapping[int, Scalar]] = ()):
        self._rows: dict[int, dict[int, Scalar]] = {}
        for v in vectors:
            self.insert(v)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def rows(self) -> list[SparseVector]:
        return [SparseVector(self._rows[p]) for p in sorted(self._rows)]

    @classmethod
    def from_rows(cls, rows: Iterable[Mapping[int, Scalar]]) -> "SubspaceBasis":
        """Rebuild from rows already in reduced echelon form (validated, not re-eliminated)."""
        new = cls()
        for r in rows:
            r = {k: c for k, c in r.items() if c}
            p = min(r)
            if r[p] != 1 or p in new._rows:
                raise ValueError("rows are not in reduced echelon form")
            new._rows[p] = r
        pivots = set(new._rows)
        for r in new._rows.values():
            if len(pivots.intersection(r)) != 1:
                raise ValueError("rows are not in reduced echelon form")
        return new

    def copy(self) -> "SubspaceBasis":
        new = SubspaceBasis()
        new._rows = {p: dict(r) for p, r in self._rows.items()}
        return new

    def reduce(self, v: Mapping[int, Scalar]) -> dict[int, Scalar]:
        """Residual of ``v`` after elimination against the basis."""
        rows = self._rows
        w = {k: c for k, c in v.items() if c}
        for p in [k for k in w if k in rows]:
            c = w[p]
            for k, rc in rows[p].items():
                nc = w.get(k, 0) - c * rc
                if nc:
                    w[k] = nc
                else:
                    del w[k]
        return w

    def contains(self, v: Mapping[int, Scalar]) -> bool:
        return not self.reduce(v)

    def insert(self, v: Mapping[int, Scalar]) -> bool:
        """Add ``v`` to the span. Returns ``True`` iff ``v`` was absorbed."""
        w = self.reduce(v)
        if not w:
            return True
        p = min(w)
        inv = Fraction(1) / w[p]
        w = {k: normalize(c * inv) for k, c in w.items()}
        for row in self._rows.values():
            c = row.get(p)
            if c:
                for k, wc in w.items():
                    nc = row.get(k, 0) - c * wc
                    if nc:
                        row[k] = normalize(nc)
                    else:
                        del row[k]
        self._rows[p] = w
        return False

    def coordinates(self, v: Mapping[int, Scalar]) -> dict[int, Scalar]:
        """Coefficients of ``v`` in the row basis, keyed by pivot.

        Raises ``ValueError`` when ``v`` is not in the span.
        """
        if self.reduce(v):
            raise ValueError("vector is not in the span")
        return {p: c for p, c in v.items() if p in self._rows and c}


def insert_reduce(basis: SubspaceBasis, v: Mapping[int, Scalar]) -> tuple[SubspaceBasis, bool]:
    new = basis.copy()
    absorbed = new.insert(v)
    return new, absorbed


def span_dim(vectors: Iterable[Mapping[int, Scalar]]) -> int:
    return SubspaceBasis(vectors).dim


def kernel(columns: list[Mapping[int, Scalar]]) -> SubspaceBasis:
    """Echelon basis of ``{c : sum_i c_i columns[i] = 0}`` in Q^len(columns)."""
    image: dict[int, tuple[dict[int, Scalar], dict[int, Scalar]]] = {}
    relations = SubspaceBasis()
    for i, col in enumerate(columns):
        w = {k: c for k, c in col.items() if c}
        tag: dict[int, Scalar] = {i: 1}
        while w:
            p = min(w)
            if p not in image:
                inv = Fraction(1) / w[p]
                image[p] = (
                    {k: c * inv for k, c in w.items()},
                    {k: c * inv for k, c in tag.items()},
                )
                break
            row, rtag = image[p]
            c = w[p]
            for k, rc in row.items():
                nc = w.get(k, 0) - c * rc
                if nc:
                    w[k] = nc
                else:
                    del w[k]
            for k, rc in rtag.items():
                nc = tag.get(k, 0) - c * rc
                if nc:
                    tag[k] = nc
                else:
                    del tag[k]
        else:
            relations.insert(tag)
    return relations


def kernel_of_endomorphism(action: Callable[[int], Mapping[int, Scalar]], dim: int) -> SubspaceBasis:
    return kernel([action(i) for i in range(dim)])


def quotient_dim(ambient: SubspaceBasis, sub: SubspaceBasis) -> int:
    for row in sub.rows():
        if not ambient.contains(row):
            raise ValueError("subspace is not contained in the ambient space")
    return ambient.dim - sub.dim


# -- modular fast path -------------------------------------------------------


def random_prime(rng: random.Random, bits: int = 62) -> int:
    """A random prime in [2^(bits-1), 2^bits)."""
    while True:
        p = sympy.nextprime(rng.randrange(1 << (bits - 1), 1 << bits))
        if p < 1 << bits:
            return int(p)


class ModularBasis:
    """Echelon basis over GF(p), same pivot rule as :class:`SubspaceBasis`."""

    def __init__(self, p: int, vectors: Iterable[Mapping[int, Scalar]] = ()):
        self.p = p
        self._rows: dict[int, dict[int, int]] = {}
        for v in vectors:
            self.insert(v)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def _lift(self, v: Mapping[int, Scalar]) -> dict[int, int]:
        p = self.p
        out = {}
        for k, c in v.items():
            if isinstance(c, Fraction):
                if c.denominator % p == 0:
                    raise ZeroDivisionError(f"denominator divisible by p={p}")
                c = c.numerator * pow(c.denominator, -1, p)
            c %= p
            if c:
                out[k] = c
        return out

    def insert(self, v: Mapping[int, Scalar]) -> bool:
        p = self.p
        rows = self._rows
        w = self._lift(v)
        for q in [k for k in w if k in rows]:
            c = w[q]
            for k, rc in rows[q].items():
                nc = (w.get(k, 0) - c * rc) % p
                if nc:
                    w[k] = nc
                else:
                    del w[k]
        if not w:
            return True
        piv = min(w)
        inv = pow(w[piv], -1, p)
        w = {k: c * inv % p for k, c in w.items()}
        for row in rows.values():
            c = row.get(piv)
            if c:
                for k, wc in w.items():
                    nc = (row.get(k, 0) - c * wc) % p
                    if nc:
                        row[k] = nc
                    else:
                        del row[k]
        rows[piv] = w
        return False


def modular_rank(vectors: Iterable[Mapping[int, Scalar]], p: int) -> int:
    return ModularBasis(p, vectors).dim


class RankMismatch(AssertionError):
    """Modular and exact ranks disagree."""


def certified_rank(vectors: list[Mapping[int, Scalar]], *, seed: int = 0, primes: int = 2) -> int:
    """Exact rank of ``vectors``, cross-checked against ranks modulo random
    62-bit primes. Any disagreement raises :class:`RankMismatch`."""
    exact = span_dim(vectors)
    rng = random.Random(seed)
    for _ in range(primes):
        p = random_prime(rng)
        r = modular_rank(vectors, p)
        if r != exact:
            raise RankMismatch(f"rank mod {p} is {r}, exact rank is {exact}")
    return exact
