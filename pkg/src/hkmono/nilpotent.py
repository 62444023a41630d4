"""Nilpotent operators, their monodromy weight filtrations and sl2 data.

Weight convention: on a Jordan chain ``x, Nx, ..., N^{s-1}x`` the vector
``N^j x`` has weight ``s - 1 - 2j``, so ``N`` lowers weight by two and
``M_i`` is spanned by chain vectors of weight ``<= i``.  The semisimple
element ``h`` returned by :func:`jm_cocharacter` is normalized by
``[h, N] = 2N``, i.e. ``h`` acts on a weight-``w`` vector by ``-w``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .linalg import (
    IncrementalSpan,
    Matrix,
    inverse,
    kernel_basis,
    nilpotency_index,
    rank,
    restrict_to_subspace,
)
from .quadratic import QuadraticSpace, is_in_so, standard_bbf_gram

__all__ = [
    "NilpotentOperator",
    "NormalFormTag",
    "WeightFiltration",
    "JordanData",
    "nu",
    "graded_dims",
    "jordan_chains",
    "weight_filtration",
    "jm_cocharacter",
    "normal_form",
    "primitive_normal_form",
    "block_counts",
    "check_rank_one_plane",
]


@dataclass(frozen=True)
class NilpotentOperator:
    matrix: Matrix
    space: Optional[QuadraticSpace] = None

    def __post_init__(self):
        m = self.matrix
        if not m.is_square:
            raise ValueError("nilpotent operator must be square")
        nilpotency_index(m)  # raises when not nilpotent
        if self.space is not None and not is_in_so(m, self.space):
            raise ValueError("operator is not skew for the given form")

    @property
    def dim(self) -> int:
        return self.matrix.nrows


@dataclass(frozen=True)
class NormalFormTag:
    reduction_type: str
    b2: int

    def __post_init__(self):
        t = self.reduction_type
        if t not in ("I", "II", "III"):
            raise ValueError(f"unknown reduction type {t!r}")
        minimum = {"I": 3, "II": 5, "III": 4}[t]
        if self.b2 < minimum:
            raise ValueError(f"Type {t} normal form needs b2 >= {minimum}, got {self.b2}")


@dataclass(frozen=True)
class WeightFiltration:
    """Increasing filtration ``M_i`` for ``-(k+1) <= i <= k``."""

    k: int
    subspaces: dict[int, list[tuple[Fraction, ...]]]
    graded: dict[int, int]

    def dims(self) -> dict[int, int]:
        return {i: len(b) for i, b in sorted(self.subspaces.items())}

    def M(self, i: int) -> list[tuple[Fraction, ...]]:
        if i < -self.k - 1:
            return []
        return self.subspaces[min(i, self.k)]


@dataclass(frozen=True)
class JordanData:
    """Adapted basis: columns of ``basis`` with their weights."""

    basis: Matrix
    weights: tuple[int, ...]
    chain_lengths: tuple[int, ...] = field(default=())


def _as_matrix(n) -> Matrix:
    return n.matrix if isinstance(n, NilpotentOperator) else n


def nu(n) -> int:
    """Nilpotency index ``min{m : N^{m+1} = 0}``."""
    return nilpotency_index(_as_matrix(n))


def block_counts(n) -> dict[int, int]:
    """Jordan block sizes ``{size: count}`` from ranks of powers."""
    m = _as_matrix(n)
    d = m.nrows
    ranks = [d]
    power = Matrix.identity(d)
    while ranks[-1]:
        power = power @ m
        ranks.append(rank(power))
        if len(ranks) > d + 2:
            raise ValueError("matrix is not nilpotent")
    ranks.append(0)
    out = {}
    for s in range(1, len(ranks) - 1):
        c = ranks[s - 1] - 2 * ranks[s] + ranks[s + 1]
        if c:
            out[s] = c
    return out


def graded_dims(n) -> dict[int, int]:
    """``{i: dim gr_i^M}``: a block of size s contributes s-1, s-3, ..., -(s-1)."""
    out: Counter = Counter()
    for s, c in block_counts(n).items():
        for w in range(s - 1, -s, -2):
            out[w] += c
    return dict(sorted(out.items()))


def jordan_chains(n) -> list[list[tuple[Fraction, ...]]]:
    """Jordan chains ``[x, Nx, ..., N^{s-1}x]``, longest first."""
    m = _as_matrix(n)
    d = m.nrows
    top = nu(m) + 1
    kernels = {0: []}
    power = Matrix.identity(d)
    for s in range(1, top + 1):
        power = power @ m
        kernels[s] = kernel_basis(power)
    chains: list[list[tuple[Fraction, ...]]] = []
    for s in range(top, 0, -1):
        span = IncrementalSpan(d)
        for v in kernels[s - 1]:
            span.add(v)
        # images of longer chains that land in ker N^s
        for chain in chains:
            if len(chain) > s:
                span.add(chain[len(chain) - s])
        for v in kernels[s]:
            if span.add(v):
                chain = [v]
                for _ in range(s - 1):
                    chain.append(m.apply(chain[-1]))
                chains.append(chain)
    return chains


def jordan_data(n) -> JordanData:
    cols, weights, lengths = [], [], []
    for chain in jordan_chains(n):
        s = len(chain)
        lengths.append(s)
        for j, v in enumerate(chain):
            cols.append(v)
            weights.append(s - 1 - 2 * j)
    d = _as_matrix(n).nrows
    return JordanData(Matrix.from_columns(cols, d), tuple(weights), tuple(lengths))


def weight_filtration(n) -> WeightFiltration:
    m = _as_matrix(n)
    k = nu(m)
    data = jordan_data(m)
    cols = data.basis.columns()
    subspaces = {}
    for i in range(-k - 1, k + 1):
        subspaces[i] = [c for c, w in zip(cols, data.weights) if w <= i]
    graded = dict(sorted(Counter(data.weights).items()))
    return WeightFiltration(k=k, subspaces=subspaces, graded=graded)


@dataclass(frozen=True)
class Cocharacter:
    h: Matrix
    eigenvalues: dict[int, int]

    def coordinates(self) -> tuple[int, ...]:
        """Non-negative half of the eigenvalue multiset, sorted decreasingly.

        Eigenvalues of ``h`` on a quadratic space pair up as ``±c``; the
        leftover zero (odd dimension) is dropped.
        """
        vals = []
        for e, c in self.eigenvalues.items():
            if e > 0:
                vals.extend([e] * c)
        r = sum(self.eigenvalues.values()) // 2
        vals.sort(reverse=True)
        return tuple(vals + [0] * (r - len(vals)))


def jm_cocharacter(n) -> Cocharacter:
    """Semisimple ``h`` with ``[h, N] = 2N``, diagonal in a Jordan basis."""
    if isinstance(n, NilpotentOperator) and n.space is None:
        raise ValueError("cocharacter needs the quadratic space the operator is skew for")
    m = _as_matrix(n)
    data = jordan_data(m)
    p = data.basis
    h = p @ Matrix.diagonal([-w for w in data.weights]) @ inverse(p)
    return Cocharacter(h=h, eigenvalues=dict(sorted(Counter(-w for w in data.weights).items())))


def normal_form(tag: NormalFormTag | tuple) -> NilpotentOperator:
    """Normalized monodromy on ``standard_bbf_gram(b2 // 2, b2 odd)``.

    Type II: ``e_1 -> e'_2``, ``e_2 -> -e'_1``.
    Type III: ``e_1 -> e_2 + e'_2``, ``e_2 -> -e'_1``, ``e'_2 -> -e'_1``.
    """
    if not isinstance(tag, NormalFormTag):
        tag = NormalFormTag(*tag)
    b2 = tag.b2
    r = b2 // 2
    q = standard_bbf_gram(r, bool(b2 % 2))
    e = lambda i: i - 1  # noqa: E731
    ep = lambda i: r + i - 1  # noqa: E731
    entries = {}
    if tag.reduction_type == "II":
        entries[(ep(2), e(1))] = 1
        entries[(ep(1), e(2))] = -1
    elif tag.reduction_type == "III":
        entries[(e(2), e(1))] = 1
        entries[(ep(2), e(1))] = 1
        entries[(ep(1), e(2))] = -1
        entries[(ep(1), ep(2))] = -1
    return NilpotentOperator(Matrix.from_sparse(b2, b2, entries), q)


def _fixed_anisotropic_vector(tag: NormalFormTag) -> list[int]:
    b2 = tag.b2
    r = b2 // 2
    vec = [0] * b2
    if b2 % 2:
        vec[2 * r] = 1  # e_{r+1}
    elif tag.reduction_type == "I":
        vec[0], vec[r] = 1, 1  # e_1 + e'_1
    elif tag.reduction_type == "III":
        vec[1], vec[r + 1] = -1, 1  # e'_2 - e_2
    else:
        vec[r - 1], vec[2 * r - 1] = 1, 1  # e_r + e'_r, r >= 3 here
    return vec


def primitive_normal_form(tag: NormalFormTag | tuple) -> NilpotentOperator:
    """Restriction of :func:`normal_form` to the orthogonal complement of an
    invariant anisotropic vector: a (b2-1)-dimensional primitive part."""
    if not isinstance(tag, NormalFormTag):
        tag = NormalFormTag(*tag)
    full = normal_form(tag)
    vec = _fixed_anisotropic_vector(tag)
    q = full.space
    g = q.gram
    lg = Matrix([g.apply(vec)])
    basis = kernel_basis(lg)
    b = Matrix.from_columns(basis)
    sub_q = QuadraticSpace(b.T @ g @ b)
    sub_n = restrict_to_subspace(full.matrix, basis)
    return NilpotentOperator(sub_n, sub_q)


def check_rank_one_plane(n: Matrix, q: QuadraticSpace) -> None:
    """A nilpotent in so of a 2-dimensional nondegenerate space must vanish."""
    if q.dim == 2 and not n.is_zero():
        raise ValueError("nonzero nilpotent in so of a 2-dimensional space")
    NilpotentOperator(n, q)
