"""sp(2g) acting on tensors, weights, highest weight vectors, Weyl
dimensions, and the named degree-4 vectors used to decompose a_g(2)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .derivations import Derivation, apply_derivation
from .linalg import Scalar, SubspaceBasis
from .tensors import (
    Space,
    Tensor,
    cyclic_shift,
    front_insert,
    front_to_slot,
    generator,
    necklace_count,
    omega0,
    otimes_ij,
    product,
    wedge,
)


@dataclass(frozen=True, order=True)
class IrrepLabel:
    """Young diagram ``[b1 b2 ... bk]`` naming an Sp(2g) irreducible."""

    parts: tuple[int, ...]

    def __init__(self, parts: Sequence[int] = ()):
        parts = tuple(int(b) for b in parts)
        if any(b < 0 for b in parts):
            raise ValueError("label entries must be natural numbers")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"label {parts} is not weakly decreasing")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        if not self.parts:
            return "Q"
        out, i = [], 0
        while i < len(self.parts):
            j = i
            while j < len(self.parts) and self.parts[j] == self.parts[i]:
                j += 1
            out.append(str(self.parts[i]) + (f"^{j - i}" if j - i > 1 else ""))
            i = j
        return "[" + "".join(out) + "]"


def weyl_dim(label: IrrepLabel | Sequence[int], g: int) -> int:
    """Weyl dimension formula for type C_g."""
    if not isinstance(label, IrrepLabel):
        label = IrrepLabel(label)
    if len(label) > g:
        raise ValueError(f"label {label} has more than g={g} rows")
    lam = list(label.parts) + [0] * (g - len(label))
    rho = [g - i for i in range(g)]
    l = [a + r for a, r in zip(lam, rho)]
    num = den = 1
    for i in range(g):
        num *= l[i]
        den *= rho[i]
        for j in range(i + 1, g):
            num *= (l[i] - l[j]) * (l[i] + l[j])
            den *= (rho[i] - rho[j]) * (rho[i] + rho[j])
    return num // den


# -- the Lie algebra sp(2g) ----------------------------------------------------


class SpGenerator:
    """Endomorphism A of H (``A[i][j]``: coefficient of generator i in A(e_j))
    with ``A u . v + u . A v = 0``."""

    def __init__(self, space: Space, matrix: Sequence[Sequence[Scalar]], name: str = ""):
        n = space.dim
        if len(matrix) != n or any(len(r) != n for r in matrix):
            raise ValueError(f"expected a {n}x{n} matrix")
        self.space = space
        self.matrix = tuple(tuple(r) for r in matrix)
        self.name = name
        for u in range(n):
            for v in range(n):
                s = sum(self.matrix[a][u] * space.pairing(a, v) for a in range(n))
                s += sum(self.matrix[b][v] * space.pairing(u, b) for b in range(n))
                if s:
                    raise ValueError(f"{name or 'matrix'} does not preserve the symplectic form")

    @classmethod
    def from_map(cls, space: Space, images: dict[int, dict[int, Scalar]], name: str = "") -> "SpGenerator":
        n = space.dim
        m = [[0] * n for _ in range(n)]
        for j, img in images.items():
            for i, c in img.items():
                m[i][j] = c
        return cls(space, m, name)

    def derivation(self) -> Derivation:
        n = self.space.dim
        return Derivation(
            self.space,
            0,
            [Tensor(self.space, 1, {(i,): self.matrix[i][j] for i in range(n)}) for j in range(n)],
        )

    def commutator(self, other: "SpGenerator") -> "SpGenerator":
        n = self.space.dim
        A, B = self.matrix, other.matrix
        C = [
            [sum(A[i][k] * B[k][j] - B[i][k] * A[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        return SpGenerator(self.space, C, f"[{self.name},{other.name}]")


def sp_act(X: SpGenerator, t: Tensor) -> Tensor:
    return apply_derivation(X.derivation(), t)


def cartan(space: Space, i: int) -> SpGenerator:
    x, y = space.x(i), space.y(i)
    return SpGenerator.from_map(space, {x: {x: 1}, y: {y: -1}}, f"h{i}")


def raising(space: Space, i: int) -> SpGenerator:
    """Chevalley raising operator: ``x_{i+1} -> x_i, y_i -> -y_{i+1}`` for i < g,
    and ``y_g -> x_g`` for i = g."""
    g = space.genus
    if i < g:
        return SpGenerator.from_map(
            space, {space.x(i + 1): {space.x(i): 1}, space.y(i): {space.y(i + 1): -1}}, f"e{i}"
        )
    return SpGenerator.from_map(space, {space.y(g): {space.x(g): 1}}, f"e{g}")


def lowering(space: Space, i: int) -> SpGenerator:
    g = space.genus
    if i < g:
        return SpGenerator.from_map(
            space, {space.x(i): {space.x(i + 1): 1}, space.y(i + 1): {space.y(i): -1}}, f"f{i}"
        )
    return SpGenerator.from_map(space, {space.x(g): {space.y(g): 1}}, f"f{g}")


def chevalley_generators(space: Space) -> list[SpGenerator]:
    g = space.genus
    gens = []
    for i in range(1, g + 1):
        gens += [cartan(space, i), raising(space, i), lowering(space, i)]
    return gens


def random_sp(space: Space, rng, bound: int = 3) -> SpGenerator:
    """Random element ``[[P, Q], [R, -P^T]]`` with Q, R symmetric."""
    g = space.genus
    r = lambda: rng.randint(-bound, bound)  # noqa: E731
    P = [[r() for _ in range(g)] for _ in range(g)]
    Q = [[0] * g for _ in range(g)]
    R = [[0] * g for _ in range(g)]
    for i in range(g):
        for j in range(i, g):
            Q[i][j] = Q[j][i] = r()
            R[i][j] = R[j][i] = r()
    m = [P[i] + Q[i] for i in range(g)] + [R[i] + [-P[j][i] for j in range(g)] for i in range(g)]
    return SpGenerator(space, m, "random")


class NotAWeightVector(ValueError):
    pass


def weight_of(t: Tensor) -> tuple[int, ...]:
    """Eigenvalues of ``h_1..h_g`` on ``t``; raises if ``t`` mixes weights."""
    if not t:
        raise ValueError("the zero tensor has no weight")
    space = t.space
    wt = []
    for i in range(1, space.genus + 1):
        ht = sp_act(cartan(space, i), t)
        w0, c0 = next(iter(t.terms.items()))
        lam = Fraction(ht.coeff(w0)) / c0
        if ht != lam * t:
            raise NotAWeightVector(f"tensor is not an eigenvector of h{i}")
        wt.append(int(lam))
    return tuple(wt)


def is_highest_weight(t: Tensor) -> bool:
    try:
        weight_of(t)
    except NotAWeightVector:
        return False
    space = t.space
    return all(not sp_act(raising(space, i), t) for i in range(1, space.genus + 1))


def label_weight(label: IrrepLabel, g: int) -> tuple[int, ...]:
    return tuple(label.parts) + (0,) * (g - len(label))


# -- named vectors of H^{(x)4} -------------------------------------------------


@dataclass
class NamedVectorSet:
    space: Space
    vectors: dict[str, Tensor] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Tensor:
        return self.vectors[name]


PAIRS = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def section4_vectors(g: int) -> NamedVectorSet:
    if g < 4:
        raise ValueError("the named vectors need g >= 4")
    S = Space.symplectic(g)
    x = [None] + [generator(S, S.x(i)) for i in range(1, g + 1)]
    w0 = omega0(S)
    x12 = wedge(S, S.x(1), S.x(2))
    x11 = product(x[1], x[1])
    V = NamedVectorSet(S)
    v = V.vectors
    v["omega12"] = product(w0, w0)
    v["omega13"] = otimes_ij(w0, w0, 1, 3)
    v["omega14"] = otimes_ij(w0, w0, 1, 4)
    for i, j in PAIRS:
        v[f"alpha{i}{j}"] = otimes_ij(x12, w0, i, j)
        v[f"beta{i}{j}"] = otimes_ij(x11, w0, i, j)
    v["alpha(1)"] = v["alpha13"] - v["alpha24"]
    v["alpha(2)"] = v["alpha12"] - v["alpha14"] - v["alpha23"] + v["alpha34"]
    v["beta_inv"] = v["beta12"] + v["beta14"] - v["beta23"] + v["beta34"]
    v["gamma1"] = product(x12, x12)
    a, b = S.x(1), S.x(2)
    v["gamma2"] = Tensor(S, 4, {(a, a, b, b): 1, (b, b, a, a): 1, (a, b, a, b): -1, (b, a, b, a): -1})
    # net coefficients 3, -1, -1, -1: the only reading that is a highest weight vector
    v["delta1"] = Tensor(S, 4, {(b, a, a, a): 3, (a, b, a, a): -1, (a, a, b, a): -1, (a, a, a, b): -1})
    v["epsilon1"] = product(x[1], wedge(S, S.x(1), S.x(2), S.x(3)))
    # delta_i, epsilon_i: the first factor moved to slot i
    for i in (2, 3, 4):
        v[f"delta{i}"] = front_to_slot(v["delta1"], i)
        v[f"epsilon{i}"] = front_to_slot(v["epsilon1"], i)
    v["gamma_inv"] = v["gamma1"] - v["gamma2"]
    v["epsilon_inv"] = v["epsilon1"] + v["epsilon3"]
    v["omega_inv"] = v["omega12"] - v["omega14"]
    v["x1^x2^x3^x4"] = wedge(S, S.x(1), S.x(2), S.x(3), S.x(4))
    v["x1^4"] = Tensor(S, 4, {(a, a, a, a): 1})
    return V


def sigma4_table() -> list[tuple[str, int, str]]:
    """``(source, sign, target)`` meaning ``sigma4(source) = sign * target``."""
    table = [("omega12", -1, "omega14"), ("omega13", -1, "omega13"), ("omega14", -1, "omega12")]
    alpha_to = ["14", "24", "34", "12", "13", "23"]
    beta_to = [(1, "14"), (1, "24"), (1, "34"), (-1, "12"), (-1, "13"), (-1, "23")]
    for (i, j), t in zip(PAIRS, alpha_to):
        table.append((f"alpha{i}{j}", -1, f"alpha{t}"))
    for (i, j), (s, t) in zip(PAIRS, beta_to):
        table.append((f"beta{i}{j}", s, f"beta{t}"))
    return table


def check_section4(g: int) -> list[tuple[str, bool]]:
    """Every action table, relation and highest-weight claim for the named vectors."""
    V = section4_vectors(g)
    v = V.vectors
    S = V.space
    sig = cyclic_shift
    out: list[tuple[str, bool]] = []
    for src, s, dst in sigma4_table():
        out.append((f"sigma4({src}) = {'-' if s < 0 else ''}{dst}", sig(v[src]) == s * v[dst]))
    out.append(("sigma4(gamma1) = -gamma2", sig(v["gamma1"]) == -v["gamma2"]))
    out.append(("sigma4(gamma2) = -gamma1", sig(v["gamma2"]) == -v["gamma1"]))
    for name in ("delta", "epsilon"):
        images = [sig(v[f"{name}{i}"]) for i in (1, 2, 3, 4)]
        expect = [v[f"{name}{i}"] for i in (4, 1, 2, 3)]
        out.append((f"sigma4 permutes {name}1..4 as {name}4,{name}1,{name}2,{name}3", images == expect))
    d = [v[f"delta{i}"] for i in (1, 2, 3, 4)]
    e = [v[f"epsilon{i}"] for i in (1, 2, 3, 4)]
    out.append(("delta1 + delta2 + delta3 + delta4 = 0", not (d[0] + d[1] + d[2] + d[3])))
    out.append(("delta1, delta2, delta3 independent", SubspaceBasis(t.vector() for t in d[:3]).dim == 3))
    out.append(("epsilon1 - epsilon2 + epsilon3 - epsilon4 = 0", not (e[0] - e[1] + e[2] - e[3])))
    out.append(("epsilon1, epsilon2, epsilon3 independent", SubspaceBasis(t.vector() for t in e[:3]).dim == 3))
    out.append(("epsilon1 + epsilon3 = epsilon2 + epsilon4", e[0] + e[2] == e[1] + e[3]))
    out.append(("front_insert(delta1, 2) = delta2", front_insert(d[0], 2) == d[1]))
    for name in ("omega_inv", "alpha(1)", "alpha(2)", "beta_inv", "gamma_inv", "epsilon_inv"):
        out.append((f"{name} is cyclic-invariant", sig(v[name]) == v[name]))
    out.append(("x1^x2^x3^x4 is not cyclic-invariant", sig(v["x1^x2^x3^x4"]) != v["x1^x2^x3^x4"]))
    hw = [
        ("x1^x2", wedge(S, S.x(1), S.x(2)), (1, 1)),
        ("x1(x)x1", product(generator(S, S.x(1)), generator(S, S.x(1))), (2,)),
        ("gamma1", v["gamma1"], (2, 2)),
        ("gamma2", v["gamma2"], (2, 2)),
        ("delta1", v["delta1"], (3, 1)),
        ("epsilon1", v["epsilon1"], (2, 1, 1)),
        ("x1^x2^x3^x4", v["x1^x2^x3^x4"], (1, 1, 1, 1)),
        ("x1^4", v["x1^4"], (4,)),
    ]
    for name, t, lab in hw:
        ok = is_highest_weight(t) and weight_of(t) == label_weight(IrrepLabel(lab), g)
        out.append((f"{name} is a highest weight vector of {IrrepLabel(lab)}", ok))
    for name in ("omega12", "omega13", "omega14"):
        out.append((f"{name} is sp-invariant", all(not sp_act(X, v[name]) for X in chevalley_generators(S))))
    return out


TENSOR4_MULTIPLICITIES = {(): 3, (1, 1): 6, (2,): 6, (2, 2): 2, (3, 1): 3, (2, 1, 1): 3, (1, 1, 1, 1): 1, (4,): 1}
A2_MULTIPLICITIES = {(): 1, (1, 1): 2, (2,): 1, (2, 2): 1, (2, 1, 1): 1, (4,): 1}


@dataclass
class DecompositionReport:
    g: int
    weyl_dims: dict[str, int]
    tensor4_sum: int
    tensor4_expected: int
    a2_sum: int
    a2_expected: int
    one_four_absent: bool

    @property
    def ok(self) -> bool:
        return (
            self.tensor4_sum == self.tensor4_expected
            and self.a2_sum == self.a2_expected
            and self.one_four_absent
        )


def decomposition_report(g: int) -> DecompositionReport:
    if g < 4:
        raise ValueError("the decomposition is stated for g >= 4")
    dims = {lab: weyl_dim(IrrepLabel(lab), g) for lab in TENSOR4_MULTIPLICITIES}
    S = Space.symplectic(g)
    top = wedge(S, S.x(1), S.x(2), S.x(3), S.x(4))
    return DecompositionReport(
        g=g,
        weyl_dims={str(IrrepLabel(lab)): d for lab, d in dims.items()},
        tensor4_sum=sum(m * dims[lab] for lab, m in TENSOR4_MULTIPLICITIES.items()),
        tensor4_expected=(2 * g) ** 4,
        a2_sum=sum(m * dims[lab] for lab, m in A2_MULTIPLICITIES.items()),
        a2_expected=necklace_count(2 * g, 4),
        one_four_absent=cyclic_shift(top) != top,
    )
