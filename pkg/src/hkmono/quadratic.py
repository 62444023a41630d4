"""Quadratic spaces, Mukai completions and the orthogonal Lie algebra so(q).

Forms are always handled through their symmetric bilinear Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, inverse, rank, to_fraction

__all__ = [
    "QuadraticSpace",
    "MukaiCompletion",
    "standard_bbf_gram",
    "mukai_completion",
    "is_in_so",
    "so_basis",
    "so_condition_matrix",
    "orthogonal_basis",
]


@dataclass(frozen=True)
class QuadraticSpace:
    gram: Matrix

    def __post_init__(self):
        g = self.gram
        if not g.is_square:
            raise ValueError("Gram matrix must be square")
        if g != g.T:
            raise ValueError("Gram matrix must be symmetric")
        if rank(g) != g.nrows:
            raise ValueError("form is degenerate")

    @classmethod
    def from_rows(cls, rows) -> "QuadraticSpace":
        return cls(Matrix(rows))

    @property
    def dim(self) -> int:
        return self.gram.nrows

    def pair(self, x, y) -> Fraction:
        gy = self.gram.apply(y)
        return sum((to_fraction(a) * b for a, b in zip(x, gy)), Fraction(0))

    def scaled(self, c) -> "QuadraticSpace":
        c = to_fraction(c)
        if not c:
            raise ValueError("scaling by zero")
        return QuadraticSpace(self.gram * c)


@dataclass(frozen=True)
class MukaiCompletion:
    """``base ⊕ U`` with U the hyperbolic plane on ``v, w`` (``<v,w> = 1``).

    Basis order of ``total``: base vectors, then ``v``, then ``w``.
    """

    base: QuadraticSpace
    total: QuadraticSpace

    @property
    def v_index(self) -> int:
        return self.base.dim

    @property
    def w_index(self) -> int:
        return self.base.dim + 1


def standard_bbf_gram(r: int, odd: bool) -> QuadraticSpace:
    """Block form ``[[0, I_r], [I_r, 0]]`` (plus a trailing ``1`` if ``odd``).

    Basis order ``e_1..e_r, e'_1..e'_r[, e_{r+1}]``.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    d = 2 * r + (1 if odd else 0)
    entries = {}
    for i in range(r):
        entries[(i, r + i)] = 1
        entries[(r + i, i)] = 1
    if odd:
        entries[(2 * r, 2 * r)] = 1
    return QuadraticSpace(Matrix.from_sparse(d, d, entries))


def mukai_completion(q: QuadraticSpace) -> MukaiCompletion:
    d = q.dim
    entries = {(i, j): v for (i, j), v in q.gram.nonzero_items()}
    entries[(d, d + 1)] = 1
    entries[(d + 1, d)] = 1
    return MukaiCompletion(base=q, total=QuadraticSpace(Matrix.from_sparse(d + 2, d + 2, entries)))


def is_in_so(n: Matrix, q: QuadraticSpace) -> bool:
    """``<Nx, y> + <x, Ny> = 0`` for all x, y."""
    if n.shape != (q.dim, q.dim):
        raise ValueError(f"operator of shape {n.shape} does not act on a {q.dim}-dim space")
    g = q.gram
    return (n.T @ g + g @ n).is_zero()


def so_basis(q: QuadraticSpace) -> list[Matrix]:
    """``G^{-1}(E_ij - E_ji)`` for ``i < j``: a basis of so(q)."""
    d = q.dim
    ginv = inverse(q.gram)
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            a = Matrix.from_sparse(d, d, {(i, j): 1, (j, i): -1})
            out.append(ginv @ a)
    return out


def so_condition_matrix(q: QuadraticSpace) -> Matrix:
    """Linear map ``vec(N) -> vec(N^T G + G N)`` on row-major vectorizations."""
    d = q.dim
    g = q.gram.rows
    rows = []
    for a in range(d):
        for b in range(d):
            # (N^T G + G N)[a, b] = sum_k N[k, a] G[k, b] + G[a, k] N[k, b]
            row = [Fraction(0)] * (d * d)
            for k in range(d):
                if g[k][b]:
                    row[k * d + a] += g[k][b]
                if g[a][k]:
                    row[k * d + b] += g[a][k]
            rows.append(row)
    return Matrix(rows, d * d)


def orthogonal_basis(q: QuadraticSpace) -> tuple[Matrix, list[Fraction]]:
    """Congruence diagonalization ``P^T G P = diag(d)`` over the rationals.

    Columns of ``P`` are the new basis vectors in original coordinates.
    """
    n = q.dim
    g = [list(r) for r in q.gram.rows]
    p = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def add_col_row(src, dst, c):
        # basis change b_dst += c * b_src, applied as congruence
        for i in range(n):
            p[i][dst] += c * p[i][src]
        for i in range(n):
            g[i][dst] += c * g[i][src]
        for j in range(n):
            g[dst][j] += c * g[src][j]

    def swap(a, b):
        for row in p:
            row[a], row[b] = row[b], row[a]
        g[a], g[b] = g[b], g[a]
        for row in g:
            row[a], row[b] = row[b], row[a]

    for k in range(n):
        if g[k][k] == 0:
            piv = next((j for j in range(k + 1, n) if g[j][j] != 0), None)
            if piv is not None:
                swap(k, piv)
            else:
                other = next((j for j in range(k + 1, n) if g[k][j] != 0), None)
                if other is None:
                    raise ValueError("form is degenerate")
                add_col_row(other, k, Fraction(1))
        a = g[k][k]
        for j in range(k + 1, n):
            if g[k][j]:
                add_col_row(k, j, -g[k][j] / a)
    diag = [g[i][i] for i in range(n)]
    return Matrix(p, n), diag
