"""Graded Frobenius algebras, Hard Lefschetz sl2-triples and their total Lie algebra.

Operators act on the whole algebra in its global basis: the concatenation of
bases of ``A^0, A^1, ..., A^{2d}``.  The degree operator is ``h = deg - d``
on each piece, so ``[h, e_x] = 2 e_x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .linalg import IncrementalSpan, Matrix, commutator, rank, solve, to_fraction
from .quadratic import MukaiCompletion, QuadraticSpace, is_in_so, mukai_completion

__all__ = [
    "GradedFrobeniusAlgebra",
    "SL2Triple",
    "TotalLieAlgebra",
    "mukai_toy_algebra",
    "has_hl",
    "sl2_complete",
    "total_lie_algebra",
    "default_samples",
    "psi_matrix",
    "to_completion",
    "VerbitskyModel",
    "verbitsky_graded_model",
]


@dataclass(frozen=True)
class GradedFrobeniusAlgebra:
    """``dims[k]`` is ``dim A^k`` for ``k = 0..2d``; ``products[(i, j)]`` maps
    to ``{k: c}`` on global basis indices.  Missing pairs multiply to zero."""

    d: int
    dims: tuple[int, ...]
    products: dict = field(hash=False, compare=False)

    def __post_init__(self):
        if len(self.dims) != 2 * self.d + 1:
            raise ValueError("need one dimension per degree 0..2d")
        if self.dims[-1] != 1:
            raise ValueError("top piece must be one-dimensional")
        if rank(self.pairing_matrix()) != self.total_dim:
            raise ValueError("Frobenius pairing is degenerate")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def offset(self, degree: int) -> int:
        return sum(self.dims[:degree])

    def indices(self, degree: int) -> range:
        if not 0 <= degree <= 2 * self.d:
            return range(0)
        o = self.offset(degree)
        return range(o, o + self.dims[degree])

    def degree_of(self, index: int) -> int:
        for k in range(len(self.dims)):
            if index in self.indices(k):
                return k
        raise IndexError(index)

    def multiply(self, x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.total_dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, c in self.products.get((i, j), {}).items():
                    out[k] += to_fraction(a) * to_fraction(b) * c
        return tuple(out)

    def pairing_matrix(self) -> Matrix:
        top = self.offset(2 * self.d)
        n = self.total_dim
        entries = {}
        for (i, j), prod in self.products.items():
            c = prod.get(top)
            if c:
                entries[(i, j)] = c
        return Matrix.from_sparse(n, n, entries)

    def is_associative(self) -> bool:
        n = self.total_dim
        unit = lambda i: tuple(Fraction(int(i == t)) for t in range(n))  # noqa: E731
        for i in range(n):
            for j in range(n):
                ij = self.multiply(unit(i), unit(j))
                for k in range(n):
                    if self.multiply(ij, unit(k)) != self.multiply(unit(i), self.multiply(unit(j), unit(k))):
                        return False
        return True

    def embed(self, degree: int, coords: Sequence) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.total_dim
        idx = self.indices(degree)
        if len(coords) != len(idx):
            raise ValueError(f"degree-{degree} element needs {len(idx)} coordinates")
        for i, c in zip(idx, coords):
            out[i] = to_fraction(c)
        return tuple(out)

    def multiplication_operator(self, x: Sequence) -> Matrix:
        """``e_x``: left multiplication by a global vector ``x``."""
        n = self.total_dim
        entries: dict = {}
        for i, a in enumerate(x):
            a = to_fraction(a)
            if not a:
                continue
            for j in range(n):
                for k, c in self.products.get((i, j), {}).items():
                    entries[(k, j)] = entries.get((k, j), 0) + a * c
        return Matrix.from_sparse(n, n, entries)

    def degree_operator(self) -> Matrix:
        vals = []
        for k, dk in enumerate(self.dims):
            vals.extend([k - self.d] * dk)
        return Matrix.diagonal(vals)


def mukai_toy_algebra(q: QuadraticSpace) -> GradedFrobeniusAlgebra:
    """``A^0 = E v``, ``A^2 = H``, ``A^4 = E w`` with ``x y = <x, y> w``."""
    b = q.dim
    n = b + 2
    w = n - 1
    products: dict = {}
    for j in range(n):
        products[(0, j)] = {j: Fraction(1)}
        products[(j, 0)] = {j: Fraction(1)}
    for i in range(b):
        for j in range(b):
            c = q.gram[i, j]
            if c:
                products[(1 + i, 1 + j)] = {w: c}
    return GradedFrobeniusAlgebra(d=2, dims=(1, 0, b, 0, 1), products=products)


def _degree2(x: Sequence, alg: GradedFrobeniusAlgebra) -> tuple[Fraction, ...]:
    return alg.embed(2, x)


def has_hl(x: Sequence, alg: GradedFrobeniusAlgebra) -> bool:
    """``e_x^i : A^{d-i} -> A^{d+i}`` bijective for ``i = 1..d``."""
    ex = alg.multiplication_operator(_degree2(x, alg))
    power = Matrix.identity(alg.total_dim)
    for i in range(1, alg.d + 1):
        power = power @ ex
        src, dst = list(alg.indices(alg.d - i)), list(alg.indices(alg.d + i))
        if len(src) != len(dst):
            return False
        if src and rank(power.submatrix(dst, src)) != len(src):
            return False
    return True


@dataclass(frozen=True)
class SL2Triple:
    e: Matrix
    h: Matrix
    f: Matrix

    def check(self) -> bool:
        return (commutator(self.h, self.e) == self.e * 2
                and commutator(self.h, self.f) == self.f * -2
                and commutator(self.e, self.f) == self.h)


def sl2_complete(x: Sequence, alg: GradedFrobeniusAlgebra) -> SL2Triple:
    """Solve ``[e_x, f] = h`` for ``f`` of degree -2."""
    e = alg.multiplication_operator(_degree2(x, alg))
    h = alg.degree_operator()
    n = alg.total_dim
    unknowns = []
    for k in range(2, 2 * alg.d + 1):
        for i in alg.indices(k):
            for j in alg.indices(k - 2):
                unknowns.append((j, i))
    cols = []
    for (r, c) in unknowns:
        u = Matrix.from_sparse(n, n, {(r, c): 1})
        cols.append(commutator(e, u).flatten())
    system = Matrix.from_columns(cols, n * n) if cols else Matrix.zeros(n * n, 0)
    sol = solve(system, Matrix.from_columns([h.flatten()], n * n))
    if sol is None or rank(system) != len(unknowns):
        raise ValueError("element has no Hard Lefschetz sl2 completion")
    f = Matrix.from_sparse(n, n, {rc: sol[t, 0] for t, rc in enumerate(unknowns) if sol[t, 0]})
    triple = SL2Triple(e=e, h=h, f=f)
    if not triple.check():
        raise ArithmeticError("sl2 relations fail after solving")
    return triple


@dataclass(frozen=True)
class TotalLieAlgebra:
    basis: tuple[Matrix, ...]
    generators: int

    @property
    def dim(self) -> int:
        return len(self.basis)


def default_samples(alg: GradedFrobeniusAlgebra) -> list[tuple[Fraction, ...]]:
    """Basis vectors of ``A^2``, pairwise sums and differences, kept when they have HL.

    Differences matter for hyperbolic bases, where ``e_i + e'_i`` alone do
    not span.
    """
    b = alg.dims[2]
    units = [tuple(Fraction(int(i == t)) for t in range(b)) for i in range(b)]
    cands = list(units)
    for i in range(b):
        for j in range(i + 1, b):
            cands.append(tuple(a + c for a, c in zip(units[i], units[j])))
            cands.append(tuple(a - c for a, c in zip(units[i], units[j])))
    return [x for x in cands if has_hl(x, alg)]


def total_lie_algebra(alg: GradedFrobeniusAlgebra, samples: Optional[Sequence] = None) -> TotalLieAlgebra:
    """Lie algebra generated by the sl2-triples of the sample elements."""
    if samples is None:
        samples = default_samples(alg)
    n = alg.total_dim
    span = IncrementalSpan(n * n)
    basis: list[Matrix] = []

    def add(mat: Matrix) -> bool:
        if span.add(mat.flatten()):
            basis.append(mat)
            return True
        return False

    for x in samples:
        t = sl2_complete(x, alg)
        for mat in (t.e, t.h, t.f):
            add(mat)
    generators = len(basis)
    done = 0
    # bracket every new element against everything before it
    while done < len(basis):
        a = basis[done]
        for b in basis[:done]:
            add(commutator(a, b))
        done += 1
        if len(basis) > n * n:
            raise RuntimeError("closure exceeded dim End(A)")
    return TotalLieAlgebra(basis=tuple(basis), generators=generators)


# -- the Mukai completion picture -------------------------------------------------------


def _toy_to_completion(completion: MukaiCompletion) -> Matrix:
    """``1 -> v``, ``y -> y``, ``w_A -> -w`` from toy coordinates (v, H, w) to (H, v, w)."""
    b = completion.base.dim
    entries = {(completion.v_index, 0): 1, (completion.w_index, b + 1): -1}
    for i in range(b):
        entries[(i, 1 + i)] = 1
    return Matrix.from_sparse(b + 2, b + 2, entries)


def to_completion(op: Matrix, completion: MukaiCompletion) -> Matrix:
    """Transport an operator on the toy algebra to the completed quadratic space."""
    phi = _toy_to_completion(completion)
    phi_inv = phi.T  # signed permutation
    return phi @ op @ phi_inv


def psi_matrix(x: Optional[Sequence], completion: MukaiCompletion, which: str = "e") -> Matrix:
    """Image of ``e_x`` (or of ``h`` when ``which='h'``) in so of the completion.

    ``e_x``: ``v -> x``, ``w -> 0``, ``y -> -<x, y> w``; ``h = diag(0, .., 0, -2, 2)``.
    """
    b = completion.base.dim
    n = b + 2
    if which == "h":
        return Matrix.diagonal([0] * b + [-2, 2])
    if which != "e":
        raise ValueError("which must be 'e' or 'h'")
    x = [to_fraction(c) for c in x]
    gx = completion.base.gram.apply(x)
    entries = {}
    for i, c in enumerate(x):
        if c:
            entries[(i, completion.v_index)] = c
    for j, c in enumerate(gx):
        if c:
            entries[(completion.w_index, j)] = -c
    return Matrix.from_sparse(n, n, entries)


# -- Verbitsky component ------------------------------------------------------------------


@dataclass(frozen=True)
class VerbitskyModel:
    """Degree ``2i`` carries ``Sym^min(i, 2n-i)`` of the degree-2 space."""

    b2: int
    n: int

    def sym_degree(self, i: int) -> int:
        if not 0 <= i <= 2 * self.n:
            raise ValueError("degree out of range")
        return min(i, 2 * self.n - i)

    def dims(self) -> dict[int, int]:
        return {2 * i: comb(self.b2 + self.sym_degree(i) - 1, self.sym_degree(i)) for i in range(2 * self.n + 1)}

    def h_eigenvalue(self, degree: int) -> int:
        return degree - 2 * self.n

    def hdeg_eigenvalue(self, degree: int) -> int:
        return self.h_eigenvalue(degree) + 2 * self.n


def verbitsky_graded_model(q: QuadraticSpace | int, n: int) -> VerbitskyModel:
    if n < 1:
        raise ValueError("n must be at least 1")
    b2 = q if isinstance(q, int) else q.dim
    return VerbitskyModel(b2=b2, n=n)
