"""On-disk cache of echelon bases.

One text file per entry::

    degree=<d> dim=<n> space=<sympl:g|plain:n>
    1,5,2,6:-3/2
    ...

Generator indices are 1-based (``x_1..x_g`` then ``y_1..y_g``). Each basis
row is a block of ``word:numerator/denominator`` lines sorted by word index;
rows are separated by a blank line and appear in pivot order.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .linalg import SubspaceBasis, normalize
from .tensors import Space, index_word, word_index

DEFAULT_DIR = ".symderiv-cache"
ENV_VAR = "SYMDERIV_CACHE"


def default_cache_dir() -> Path:
    return Path(os.environ.get(ENV_VAR, DEFAULT_DIR))


@dataclass(frozen=True)
class CacheKey:
    algebra: str
    param: int
    degree: int
    kind: str

    def filename(self) -> str:
        text = f"{self.algebra}|{self.param}|{self.degree}|{self.kind}"
        digest = hashlib.sha256(text.encode()).hexdigest()[:16]
        return f"{self.algebra}{self.param}-w{self.degree}-{self.kind}-{digest}.txt"


def _fmt(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def dumps_basis(basis: SubspaceBasis, space: Space, degree: int) -> str:
    n = space.dim
    lines = [f"degree={degree} dim={basis.dim} space={space}"]
    for i, row in enumerate(basis.rows()):
        if i:
            lines.append("")
        for idx in row:
            word = index_word(idx, n, degree)
            lines.append(",".join(str(a + 1) for a in word) + ":" + _fmt(row[idx]))
    return "\n".join(lines) + "\n"


def loads_basis(text: str) -> tuple[SubspaceBasis, Space, int]:
    lines = text.split("\n")
    header = dict(part.split("=", 1) for part in lines[0].split())
    kind, param = header["space"].split(":")
    space = Space(kind, int(param))
    degree = int(header["degree"])
    n = space.dim
    rows: list[dict] = [{}]
    for line in lines[1:]:
        if not line:
            if rows[-1]:
                rows.append({})
            continue
        word, coeff = line.rsplit(":", 1)
        letters = [int(a) - 1 for a in word.split(",")]
        if len(letters) != degree:
            raise ValueError(f"cache line {line!r} has the wrong degree")
        num, den = coeff.split("/")
        rows[-1][word_index(letters, n)] = normalize(Fraction(int(num), int(den)))
    rows = [r for r in rows if r]
    basis = SubspaceBasis.from_rows(rows)
    if basis.dim != int(header["dim"]):
        raise ValueError("cache header dimension does not match its rows")
    return basis, space, degree


class Cache:
    def __init__(self, directory: str | Path | None = None, enabled: bool = True):
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def path(self, key: CacheKey) -> Path:
        return self.directory / key.filename()

    def load(self, key: CacheKey) -> SubspaceBasis | None:
        if not self.enabled:
            return None
        p = self.path(key)
        if not p.exists():
            self.misses += 1
            return None
        basis, _, _ = loads_basis(p.read_text())
        self.hits += 1
        return basis

    def store(self, key: CacheKey, basis: SubspaceBasis, space: Space, degree: int):
        if not self.enabled:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        tmp = self.path(key).with_suffix(".tmp")
        tmp.write_text(dumps_basis(basis, space, degree))
        tmp.replace(self.path(key))
