"""Exact Clifford algebras, spin modules and the derivation action of so(V).

Clifford elements are dicts ``{mask: coefficient}`` over blades of an
orthogonal basis ``f_1..f_m`` of ``V`` (bit ``i`` of the mask means ``f_i``
is a factor, factors in increasing order).  Relations:
``x y + y x = 2 <x, y>``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import IncrementalSpan, Matrix, induced_wedge_power, inverse, rank, solve, to_fraction
from .nilpotent import NilpotentOperator
from .quadratic import QuadraticSpace, is_in_so, orthogonal_basis

__all__ = [
    "MAX_EXPLICIT_DIM",
    "CliffordAlgebra",
    "CommutantReport",
    "SpinModule",
    "spin_rep",
    "so_derivation_action",
    "eigen_multiplicities",
    "derivation_eigen_multiset",
]

MAX_EXPLICIT_DIM = 12
ZERO = Fraction(0)


def _guard(m: int, limit: int = MAX_EXPLICIT_DIM) -> None:
    if m > limit:
        raise ValueError(f"explicit Clifford matrices limited to m <= {limit}, got m = {m}; "
                         "use reduction.wedge_eigen_multiset instead")


def _blade_sign(a: int, b: int) -> int:
    """Reordering sign for the concatenation ``f_A f_B``."""
    swaps = 0
    a >>= 1
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


def _mask_indices(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class CommutantReport:
    m: int
    dim_algebra: int
    commutant_dim: int
    consistent_components: int
    all_left_multiplications: bool

    @property
    def ok(self) -> bool:
        return self.commutant_dim == self.dim_algebra and self.all_left_multiplications


class CliffordAlgebra:
    """Cl(V, q) on an orthogonalized basis of ``base``."""

    def __init__(self, base: QuadraticSpace):
        self.base = base
        self.m = base.dim
        p, diag = orthogonal_basis(base)
        self.change = p  # columns: f_i in original coordinates
        self.change_inv = inverse(p)
        self.diag = tuple(diag)

    @property
    def dim(self) -> int:
        return 1 << self.m

    def even_masks(self) -> list[int]:
        return [s for s in range(self.dim) if bin(s).count("1") % 2 == 0]

    def masks_of_degree(self, k: int) -> list[int]:
        return [s for s in range(self.dim) if bin(s).count("1") == k]

    # -- elements --------------------------------------------------------------

    def one(self) -> dict[int, Fraction]:
        return {0: Fraction(1)}

    def generator(self, i: int) -> dict[int, Fraction]:
        """Orthogonal generator ``f_i``."""
        return {1 << i: Fraction(1)}

    def vector(self, x: Sequence) -> dict[int, Fraction]:
        """Image of ``x`` (original coordinates) in Cl."""
        c = self.change_inv.apply([to_fraction(v) for v in x])
        return {1 << i: v for i, v in enumerate(c) if v}

    def blade_product(self, a: int, b: int) -> tuple[Fraction, int]:
        coeff = Fraction(_blade_sign(a, b))
        for i in _mask_indices(a & b):
            coeff *= self.diag[i]
        return coeff, a ^ b

    def multiply(self, x: dict, y: dict) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                c, s = self.blade_product(a, b)
                v = out.get(s, ZERO) + c * ca * cb
                if v:
                    out[s] = v
                else:
                    out.pop(s, None)
        return out

    # -- regular representations -------------------------------------------------

    def _regular(self, x: dict, left: bool) -> Matrix:
        _guard(self.m)
        entries: dict[tuple[int, int], Fraction] = {}
        for s in range(self.dim):
            for a, ca in x.items():
                c, t = self.blade_product(a, s) if left else self.blade_product(s, a)
                key = (t, s)
                entries[key] = entries.get(key, ZERO) + c * ca
        return Matrix.from_sparse(self.dim, self.dim, entries)

    def left_regular_rep(self, x: dict) -> Matrix:
        """Matrix of ``y -> x y`` in the blade basis (masks in increasing order)."""
        return self._regular(x, True)

    def right_regular_rep(self, x: dict) -> Matrix:
        return self._regular(x, False)

    def commutant_check(self, limit: int = 8) -> CommutantReport:
        """Commutant of all right multiplications, versus left multiplications.

        The commuting conditions with right multiplication by ``f_i`` are
        monomial: ``c(S,i) X[T, S^i] = c(T^i,i) X[T^i, S]``.  They split the
        entries into components indexed by ``T ^ S``; a component carries a
        one-dimensional solution iff its ratios are consistent.
        """
        _guard(self.m, limit)
        m, n = self.m, self.dim
        coef = [[self.blade_product(s, 1 << i)[0] for i in range(m)] for s in range(n)]
        consistent = 0
        all_left = True
        for diff in range(n):
            # value of X[T, T ^ diff] relative to X[diff, 0]
            value = {diff: Fraction(1)}
            stack = [diff]
            ok = True
            while stack and ok:
                t = stack.pop()
                s = t ^ diff
                for i in range(m):
                    bit = 1 << i
                    # c(S^i, i) X[T, S] = c(T, i) X[T^i, S^i]  (from the relation at (T, S^i))
                    t2 = t ^ bit
                    v2 = coef[s ^ bit][i] * value[t] / coef[t2][i]
                    if t2 in value:
                        if value[t2] != v2:
                            ok = False
                            break
                    else:
                        value[t2] = v2
                        stack.append(t2)
            if not ok:
                continue
            consistent += 1
            # the solution should be left multiplication by f_diff
            left = {}
            for s in range(n):
                c, t = self.blade_product(diff, s)
                left[t] = c
            if any(left.get(t) != value[t] for t in value):
                all_left = False
        return CommutantReport(m=m, dim_algebra=n, commutant_dim=consistent,
                               consistent_components=consistent, all_left_multiplications=all_left)


# -- spin modules -------------------------------------------------------------------


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    from math import isqrt

    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def _standard_splitting(q: QuadraticSpace):
    """Read off ``e_i, e'_i[, e_{r+1}]`` when the Gram matrix has that shape."""
    d = q.dim
    r = d // 2
    g = q.gram
    for i in range(d):
        for j in range(d):
            want = 1 if (i < r and j == i + r) or (j < r and i == j + r) else 0
            if d % 2 and i == j == d - 1:
                want = g[i, j]
            if g[i, j] != want:
                return None
    if d % 2 and _rational_sqrt(g[d - 1, d - 1]) is None:
        return None
    unit = lambda k: tuple(Fraction(int(k == t)) for t in range(d))  # noqa: E731
    u = [unit(i) for i in range(r)]
    up = [unit(r + i) for i in range(r)]
    z = unit(d - 1) if d % 2 else None
    return u, up, z


def _diagonal_splitting(q: QuadraticSpace):
    """Pair orthogonal vectors ``f_i, f_j`` with ``-d_i/d_j`` a rational square."""
    p, diag = orthogonal_basis(q)
    cols = p.columns()

    def search(remaining, allow_leftover):
        if not remaining:
            return [], None
        first = remaining[0]
        for k in remaining[1:]:
            t = _rational_sqrt(-diag[first] / diag[k])
            if t is None:
                continue
            found = search([x for x in remaining if x not in (first, k)], allow_leftover)
            if found is not None:
                return [(first, k, t)] + found[0], found[1]
        if allow_leftover and _rational_sqrt(diag[first]) is not None:
            found = search(remaining[1:], False)
            if found is not None:
                return found[0], first
        return None

    best = search(list(range(len(diag))), len(diag) % 2 == 1)
    if best is None:
        return None
    pairs, leftover = best
    u, up = [], []
    for i, j, t in pairs:
        fi, fj = cols[i], cols[j]
        u.append(tuple(a + t * b for a, b in zip(fi, fj)))
        up.append(tuple((a - t * b) / (2 * diag[i]) for a, b in zip(fi, fj)))
    z = cols[leftover] if leftover is not None else None
    return u, up, z


@dataclass(frozen=True)
class SpinModule:
    """Clifford module on ``Λ(U)`` for an isotropic splitting ``U ⊕ U' (⊕ z)``.

    ``gammas[j]`` is the action of the j-th original basis vector.
    """

    base: QuadraticSpace
    gammas: tuple[Matrix, ...]
    parity: Matrix

    @property
    def dim(self) -> int:
        return self.parity.nrows

    def gamma(self, x: Sequence) -> Matrix:
        out = Matrix.zeros(self.dim)
        for c, g in zip(x, self.gammas):
            c = to_fraction(c)
            if c:
                out = out + g * c
        return out

    def check_relations(self) -> bool:
        g = self.base.gram
        ident = Matrix.identity(self.dim)
        for a, ga in enumerate(self.gammas):
            for b in range(a, len(self.gammas)):
                gb = self.gammas[b]
                if ga @ gb + gb @ ga != ident * (2 * g[a, b]):
                    return False
        return True

    def so_action(self, n) -> Matrix:
        """Spin lift ``(1/4) sum_a gamma(N b_a) gamma(b^a)`` of ``N`` in so(V)."""
        mat = n.matrix if isinstance(n, NilpotentOperator) else n
        if not is_in_so(mat, self.base):
            raise ValueError("operator is not skew for the spin module's form")
        ginv = inverse(self.base.gram)
        d = self.base.dim
        out = Matrix.zeros(self.dim)
        for a in range(d):
            image = mat.column(a)
            if not any(image):
                continue
            out = out + self.gamma(image) @ self.gamma(ginv.column(a))
        return out * Fraction(1, 4)

    def surjectivity_rank(self) -> int:
        """Dimension of the span of all gamma-monomials inside End(S)."""
        d = len(self.gammas)
        _guard(d)
        span = IncrementalSpan(self.dim * self.dim)
        for mask in range(1 << d):
            prod = Matrix.identity(self.dim)
            for i in _mask_indices(mask):
                prod = prod @ self.gammas[i]
            span.add(prod.flatten())
        return len(span)


def spin_rep(base: QuadraticSpace) -> SpinModule:
    """Spin module of dimension ``2^(m // 2)``.

    Isotropic ``u_i`` act by wedging with ``a_i``, their partners ``u'_i``
    (``<u_i, u'_j> = delta_ij``) by twice the contraction; an odd leftover
    ``z`` acts as ``sqrt(<z,z>)`` times the parity operator.
    """
    m = base.dim
    _guard(m)
    split = _standard_splitting(base) or _diagonal_splitting(base)
    if split is None:
        raise ValueError("no rational isotropic splitting found for this form; "
                         "it needs a field extension")
    u, up, z = split
    k = len(u)
    size = 1 << k
    creation, annihilation = [], []
    for i in range(k):
        cre, ann = {}, {}
        for s in range(size):
            if not s & (1 << i):
                sign = -1 if bin(s & ((1 << i) - 1)).count("1") % 2 else 1
                cre[(s | (1 << i), s)] = sign
                ann[(s, s | (1 << i))] = sign
        creation.append(Matrix.from_sparse(size, size, cre))
        annihilation.append(Matrix.from_sparse(size, size, ann))
    parity = Matrix.diagonal([(-1) ** bin(s).count("1") for s in range(size)])
    adapted = [creation[i] for i in range(k)] + [annihilation[i] * 2 for i in range(k)]
    vectors = list(u) + list(up)
    if z is not None:
        scale = _rational_sqrt(base.pair(z, z))
        adapted.append(parity * scale)
        vectors.append(z)
    # express each original basis vector in the adapted basis
    coords = solve(Matrix.from_columns(vectors, m), Matrix.identity(m))
    gammas = []
    for j in range(m):
        gj = Matrix.zeros(size)
        for a, c in enumerate(coords.column(j)):
            if c:
                gj = gj + adapted[a] * c
        gammas.append(gj)
    module = SpinModule(base=base, gammas=tuple(gammas), parity=parity)
    if not module.check_relations():
        raise ArithmeticError("spin module violates the Clifford relations")
    return module


# -- derivation action on Cl = Λ V ------------------------------------------------------


@dataclass(frozen=True)
class DerivationAction:
    """Block-diagonal action on ``Λ^0 V ⊕ ... ⊕ Λ^m V``."""

    blocks: tuple[Matrix, ...]

    def even_blocks(self) -> tuple[Matrix, ...]:
        return self.blocks[::2]

    def matrix(self, even_only: bool = False) -> Matrix:
        return Matrix.block_diagonal(self.even_blocks() if even_only else self.blocks)


def so_derivation_action(n, base: QuadraticSpace) -> DerivationAction:
    """Derivation extension of ``N`` to the exterior algebra of ``base``."""
    mat = n.matrix if isinstance(n, NilpotentOperator) else n
    if not is_in_so(mat, base):
        raise ValueError("operator is not skew for the given form")
    _guard(base.dim)
    return DerivationAction(tuple(induced_wedge_power(mat, k) for k in range(base.dim + 1)))


def eigen_multiplicities(m: Matrix, candidates: Sequence) -> dict[Fraction, int]:
    """Eigenvalue multiplicities of a diagonalizable ``m`` among ``candidates``."""
    size = m.nrows
    if size == 0:
        return {}
    out: dict[Fraction, int] = {}
    found = 0
    ident = Matrix.identity(size)
    for lam in candidates:
        nullity = size - rank(m - ident * lam)
        if nullity:
            out[to_fraction(lam)] = nullity
            found += nullity
            if found == size:
                return dict(sorted(out.items()))
    raise ValueError("operator is not diagonalizable over the candidate eigenvalues")


def derivation_eigen_multiset(h: Matrix, base: QuadraticSpace, even_only: bool = True) -> dict[int, int]:
    """Eigenvalue multiset of ``h`` (semisimple, integral spectrum) on Cl⁺ or Cl."""
    action = so_derivation_action(h, base)
    # row-sum norm bounds the spectral radius
    bound = max((sum(abs(x) for x in row) for row in h.rows), default=ZERO)
    bound = -(-bound.numerator // bound.denominator) if bound else 0
    total: Counter = Counter()
    for k, block in enumerate(action.blocks):
        if even_only and k % 2:
            continue
        span = k * bound
        cands = [0] + [s * v for v in range(1, span + 1) for s in (1, -1)]
        for lam, c in eigen_multiplicities(block, cands).items():
            total[int(lam)] += c
    return dict(sorted(total.items()))
