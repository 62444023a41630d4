"""Exact rational linear algebra.

Every matrix entry is a :class:`fractions.Fraction`.  Elimination is done on
primitive integer rows (fraction-free), stored sparsely, which keeps the
intermediate swell small for the very sparse operators built elsewhere in
the package.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import gcd, lcm
from typing import Iterable, Sequence

__all__ = [
    "Matrix",
    "IncrementalSpan",
    "to_fraction",
    "format_rational",
    "rank",
    "kernel_basis",
    "column_space_basis",
    "solve",
    "inverse",
    "determinant",
    "commutator",
    "nilpotency_index",
    "induced_sym_power",
    "induced_wedge_power",
    "sym_basis",
    "wedge_basis",
    "restrict_to_subspace",
]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(x) -> Fraction:
    """Parse ints, Fractions and strings such as ``"3/4"`` exactly.

    Floats are refused: they would silently introduce rounding.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rational(x) -> str:
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Matrix:
    """Immutable dense matrix over the rationals (row-major)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(to_fraction(v) for v in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged matrix rows")
        self.rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def _raw(cls, rows: tuple, nrows: int, ncols: int) -> "Matrix":
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = nrows
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "Matrix":
        ncols = nrows if ncols is None else ncols
        row = (ZERO,) * ncols
        return cls._raw((row,) * nrows, nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.diagonal([ONE] * n)

    @classmethod
    def diagonal(cls, values: Sequence) -> "Matrix":
        n = len(values)
        rows = []
        for i, v in enumerate(values):
            row = [ZERO] * n
            row[i] = to_fraction(v)
            rows.append(tuple(row))
        return cls._raw(tuple(rows), n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        if not columns:
            return cls.zeros(nrows or 0, 0)
        cols = [[to_fraction(v) for v in c] for c in columns]
        n = len(cols[0])
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(n)), n, len(cols))

    @classmethod
    def from_sparse(cls, nrows: int, ncols: int, entries: dict) -> "Matrix":
        """Build from ``{(i, j): value}``."""
        rows = [[ZERO] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            rows[i][j] = to_fraction(v)
        return cls._raw(tuple(tuple(r) for r in rows), nrows, ncols)

    @classmethod
    def block_diagonal(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        n = sum(b.nrows for b in blocks)
        c = sum(b.ncols for b in blocks)
        entries = {}
        r0 = c0 = 0
        for b in blocks:
            for (i, j), v in b.nonzero_items():
                entries[(r0 + i, c0 + j)] = v
            r0 += b.nrows
            c0 += b.ncols
        return cls.from_sparse(n, c, entries)

    # -- basic protocol ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(v) for v in row) for row in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(v) for v in row] for row in self.rows]

    def nonzero_items(self):
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                if v:
                    yield (i, j), v

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def flatten(self) -> tuple[Fraction, ...]:
        return tuple(v for row in self.rows for v in row)

    def is_zero(self) -> bool:
        return not any(v for row in self.rows for v in row)

    # -- arithmetic --------------------------------------------------------

    @property
    def T(self) -> "Matrix":
        if not (self.nrows and self.ncols):
            return Matrix.zeros(self.ncols, self.nrows)
        return Matrix._raw(tuple(zip(*self.rows)), self.ncols, self.nrows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return Matrix._raw(rows, self.nrows, self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        rows = tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return Matrix._raw(rows, self.nrows, self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.nrows, self.ncols)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        c = to_fraction(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.nrows, self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        brows = other.rows
        n = other.ncols
        out = []
        for row in self.rows:
            acc = [ZERO] * n
            for k, a in enumerate(row):
                if a:
                    brow = brows[k]
                    for j, b in enumerate(brow):
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return Matrix._raw(tuple(out), self.nrows, n)

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        vec = [to_fraction(v) for v in vec]
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(row, vec) if a and b), ZERO) for row in self.rows)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        result = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(min(self.nrows, self.ncols))), ZERO)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(rows), len(cols))

    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


# -- fraction-free sparse elimination -----------------------------------------


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {k: v // g for k, v in row.items()}
    return row


def _integer_row(vec) -> dict[int, int]:
    """Scale a rational vector (sequence or ``{index: value}``) to a primitive integer row."""
    items = vec.items() if isinstance(vec, dict) else enumerate(vec)
    fracs = [(k, to_fraction(v)) for k, v in items if v]
    if not fracs:
        return {}
    den = 1
    for _, v in fracs:
        den = lcm(den, v.denominator)
    return _primitive({k: v.numerator * (den // v.denominator) for k, v in fracs})


class IncrementalSpan:
    """Reduced row-echelon basis of a growing subspace of ``Q^dim``.

    Rows are kept as primitive integer vectors; each pivot column is zero in
    every other stored row.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: dict[int, dict[int, int]] = {}

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def _reduce(self, row: dict[int, int]) -> dict[int, int]:
        rows = self._rows
        hits = [k for k in row if k in rows]
        while hits:
            for p in hits:
                c = row.get(p)
                if not c:
                    continue
                prow = rows[p]
                a = prow[p]
                g = gcd(a, c)
                fa, fc = a // g, c // g
                new = {k: fa * v for k, v in row.items()}
                for k, v in prow.items():
                    nv = new.get(k, 0) - fc * v
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                row = new
            if not row:
                return row
            row = _primitive(row)
            hits = [k for k in row if k in rows]
        return row

    def reduce(self, vec) -> dict[int, int]:
        row = _integer_row(vec)
        return self._reduce(row) if row else row

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def add(self, vec) -> bool:
        """Insert ``vec``; return whether the span grew."""
        row = self.reduce(vec)
        if not row:
            return False
        p = min(row)
        a = row[p]
        for q, other in list(self._rows.items()):
            c = other.get(p)
            if not c:
                continue
            g = gcd(a, c)
            fa, fc = a // g, c // g
            new = {k: fa * v for k, v in other.items()}
            for k, v in row.items():
                nv = new.get(k, 0) - fc * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            self._rows[q] = _primitive(new)
        self._rows[p] = row
        return True

    def basis(self) -> list[tuple[Fraction, ...]]:
        """Stored rows, normalized so each pivot entry is 1."""
        out = []
        for p in self.pivots:
            row = self._rows[p]
            a = row[p]
            vec = [ZERO] * self.dim
            for k, v in row.items():
                vec[k] = Fraction(v, a)
            out.append(tuple(vec))
        return out

    def null_space(self) -> list[tuple[Fraction, ...]]:
        """Basis of the vectors orthogonal (dot product) to every stored row."""
        rows = self._rows
        free = [j for j in range(self.dim) if j not in rows]
        out = []
        for f in free:
            vec = [ZERO] * self.dim
            vec[f] = ONE
            for p, row in rows.items():
                c = row.get(f)
                if c:
                    vec[p] = Fraction(-c, row[p])
            out.append(tuple(vec))
        return out


def _span_of_rows(m: Matrix) -> IncrementalSpan:
    span = IncrementalSpan(m.ncols)
    for row in m.rows:
        span.add(row)
    return span


def rank(m: Matrix) -> int:
    """Exact rank via fraction-free elimination."""
    if m.nrows > m.ncols:
        m = m.T
    return len(_span_of_rows(m))


def kernel_basis(m: Matrix) -> list[tuple[Fraction, ...]]:
    """Basis of ``{v : m v = 0}``; ``len == ncols - rank``."""
    return _span_of_rows(m).null_space()


def column_space_basis(m: Matrix) -> list[tuple[Fraction, ...]]:
    """An echelon basis of the image of ``m``."""
    return _span_of_rows(m.T).basis()


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """One solution ``x`` of ``a x = b`` or ``None`` if inconsistent."""
    if a.nrows != b.nrows:
        raise ValueError("row mismatch")
    n = a.ncols
    aug = IncrementalSpan(n + b.ncols)
    for ra, rb in zip(a.rows, b.rows):
        aug.add(ra + rb)
    sol = [[ZERO] * b.ncols for _ in range(n)]
    for p, row in aug._rows.items():
        if p >= n:
            return None
        piv = row[p]
        for k, v in row.items():
            if k >= n:
                sol[p][k - n] = Fraction(v, piv)
    return Matrix(sol, b.ncols)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise ValueError("inverse of a non-square matrix")
    x = solve(m, Matrix.identity(m.nrows))
    if x is None or rank(m) != m.nrows:
        raise ValueError("matrix is singular")
    return x


def determinant(m: Matrix) -> Fraction:
    """Bareiss determinant on a common-denominator integer copy."""
    if not m.is_square:
        raise ValueError("determinant of a non-square matrix")
    n = m.nrows
    if n == 0:
        return ONE
    den = 1
    for row in m.rows:
        for v in row:
            den = lcm(den, v.denominator)
    a = [[int(v * den) for v in row] for row in m.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return ZERO
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], den ** n)


def _scaled_integer_rows(m: Matrix) -> list[dict[int, int]]:
    """Sparse rows of ``c * m`` for a positive integer ``c`` clearing denominators."""
    den = 1
    for _, v in m.nonzero_items():
        den = lcm(den, v.denominator)
    return [{j: int(v * den) for j, v in enumerate(row) if v} for row in m.rows]


def nilpotency_index(m: Matrix) -> int:
    """Smallest ``k`` with ``m^(k+1) = 0``.

    Powers are taken of an integer multiple of ``m``, which vanish exactly
    when the powers of ``m`` do.  Raises ``ValueError`` when no power up to
    the dimension vanishes.
    """
    if not m.is_square:
        raise ValueError("nilpotency index of a non-square matrix")
    a = _scaled_integer_rows(m)
    power = a
    for k in range(m.nrows + 1):
        if not any(power):
            return k
        nxt = []
        for row in power:
            acc: dict[int, int] = {}
            for j, x in row.items():
                for l, y in a[j].items():
                    acc[l] = acc.get(l, 0) + x * y
            nxt.append({l: v for l, v in acc.items() if v})
        power = nxt
    raise ValueError("matrix is not nilpotent")


def restrict_to_subspace(m: Matrix, basis: Sequence[Sequence]) -> Matrix:
    """Matrix of ``m`` on an invariant subspace, in the given basis."""
    b = Matrix.from_columns(basis)
    x = solve(b, m @ b)
    if x is None:
        raise ValueError("subspace is not invariant")
    return x


# -- functorial constructions ---------------------------------------------------


def sym_basis(dim: int, k: int) -> list[tuple[int, ...]]:
    """Weakly increasing index tuples, lexicographic."""
    return list(combinations_with_replacement(range(dim), k))


def wedge_basis(dim: int, k: int) -> list[tuple[int, ...]]:
    """Strictly increasing index tuples, lexicographic."""
    return list(combinations(range(dim), k))


def induced_sym_power(n: Matrix, k: int) -> Matrix:
    """Derivation action of ``n`` on ``Sym^k`` in the monomial basis."""
    if not n.is_square:
        raise ValueError("square matrix required")
    basis = sym_basis(n.nrows, k)
    index = {mono: i for i, mono in enumerate(basis)}
    cols = [[(l, v) for l, v in enumerate(n.column(j)) if v] for j in range(n.ncols)]
    entries: dict[tuple[int, int], Fraction] = {}
    for c, mono in enumerate(basis):
        for pos, j in enumerate(mono):
            rest = mono[:pos] + mono[pos + 1:]
            for l, v in cols[j]:
                target = tuple(sorted(rest + (l,)))
                key = (index[target], c)
                entries[key] = entries.get(key, ZERO) + v
    return Matrix.from_sparse(len(basis), len(basis), entries)


def _sorted_sign(seq: list[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple (0 on repeats)."""
    seq = list(seq)
    sign = 1
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and seq[j - 1] == seq[j]:
            return 0, ()
    return sign, tuple(seq)


def induced_wedge_power(n: Matrix, k: int) -> Matrix:
    """Derivation action of ``n`` on the exterior power ``Λ^k``."""
    if not n.is_square:
        raise ValueError("square matrix required")
    if not 0 <= k <= n.nrows:
        raise ValueError("wedge degree out of range")
    basis = wedge_basis(n.nrows, k)
    index = {mono: i for i, mono in enumerate(basis)}
    cols = [[(l, v) for l, v in enumerate(n.column(j)) if v] for j in range(n.ncols)]
    entries: dict[tuple[int, int], Fraction] = {}
    for c, mono in enumerate(basis):
        for pos, j in enumerate(mono):
            for l, v in cols[j]:
                seq = list(mono)
                seq[pos] = l
                sign, target = _sorted_sign(seq)
                if not sign:
                    continue
                key = (index[target], c)
                entries[key] = entries.get(key, ZERO) + sign * v
    return Matrix.from_sparse(len(basis), len(basis), entries)
