"""Weights of the orthogonal Lie algebras so(2r+1) (type B) and so(2r) (type D).

Weights are tuples of Fractions in the standard ``eps_i`` coordinates with the
Euclidean inner product.  Positive roots are ``eps_i ± eps_j`` (i < j), plus
``eps_i`` for type B.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from .linalg import to_fraction

__all__ = [
    "RootSystemBD",
    "HighestWeight",
    "BranchingError",
    "Branching",
    "positive_roots",
    "rho",
    "is_dominant",
    "dominant_representative",
    "weyl_orbit_max",
    "nu_on_irrep",
    "dominant_weights_below",
    "weight_multiplicities",
    "orbit_size",
    "character_dimension",
    "weyl_dimension",
    "grade_and_branch",
    "decompose_dominant_character",
    "parity_check",
]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class RootSystemBD:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in ("B", "D"):
            raise ValueError(f"family must be 'B' or 'D', got {self.family!r}")
        if self.rank < (1 if self.family == "B" else 2):
            raise ValueError(f"rank {self.rank} too small for type {self.family}")

    @classmethod
    def for_dimension(cls, dim: int) -> "RootSystemBD":
        """Root system of so(dim)."""
        return cls("B" if dim % 2 else "D", dim // 2)

    @property
    def dimension(self) -> int:
        """Dimension of the defining representation."""
        return 2 * self.rank + (1 if self.family == "B" else 0)

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def _coords(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


@dataclass(frozen=True)
class HighestWeight:
    """All-integer or all-half-integer coordinate tuple."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        c = _coords(coords)
        for x in c:
            if (2 * x).denominator != 1:
                raise ValueError(f"coordinate {x} is not in (1/2)Z")
        if len({(2 * x).numerator % 2 for x in c}) > 1:
            raise ValueError(f"mixed integer and half-integer coordinates {tuple(map(str, c))}")
        object.__setattr__(self, "coords", c)

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 for x in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.coords) + ")"


class BranchingError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def positive_roots(rs: RootSystemBD) -> tuple[tuple[int, ...], ...]:
    r = rs.rank
    roots = []
    for i in range(r):
        for j in range(i + 1, r):
            for s in (-1, 1):
                v = [0] * r
                v[i] = 1
                v[j] = s
                roots.append(tuple(v))
    if rs.family == "B":
        for i in range(r):
            v = [0] * r
            v[i] = 1
            roots.append(tuple(v))
    return tuple(roots)


@lru_cache(maxsize=None)
def rho(rs: RootSystemBD) -> tuple[Fraction, ...]:
    r = rs.rank
    if rs.family == "B":
        return tuple(Fraction(2 * (r - i) - 1, 2) for i in range(r))
    return tuple(Fraction(r - 1 - i) for i in range(r))


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _check_rank(coords, rs: RootSystemBD) -> tuple[Fraction, ...]:
    c = tuple(coords.coords) if isinstance(coords, HighestWeight) else _coords(coords)
    if len(c) != rs.rank:
        raise ValueError(f"weight of length {len(c)} for rank-{rs.rank} system")
    return c


def is_dominant(coords, rs: RootSystemBD) -> bool:
    """Dominant integral for the standard positive system."""
    c = _check_rank(coords, rs)
    try:
        HighestWeight(c)
    except ValueError:
        return False
    if any(c[i] < c[i + 1] for i in range(len(c) - 1)):
        if not (rs.family == "D" and all(c[i] >= c[i + 1] for i in range(len(c) - 2))):
            return False
    if rs.family == "B":
        return c[-1] >= 0
    return c[-2] >= abs(c[-1])


def dominant_representative(coords, rs: RootSystemBD) -> tuple[Fraction, ...]:
    c = _check_rank(coords, rs)
    a = sorted((abs(x) for x in c), reverse=True)
    if rs.family == "D" and a[-1] != 0:
        negatives = sum(1 for x in c if x < 0)
        if negatives % 2:
            a[-1] = -a[-1]
    return tuple(a)


def weyl_orbit_max(lam, h, rs: RootSystemBD) -> Fraction:
    """``max_w <w(lam), h>`` over the Weyl group, by sorting.

    For type D the even-sign-change restriction only bites when neither
    vector has a zero coordinate; then an odd combined sign count costs
    twice the smallest paired product.
    """
    lam = _check_rank(lam, rs)
    if not is_dominant(lam, rs):
        raise ValueError(f"{tuple(map(str, lam))} is not dominant for {rs}")
    hv = _check_rank(h, rs)
    a = sorted((abs(x) for x in lam), reverse=True)
    b = sorted((abs(x) for x in hv), reverse=True)
    total = _dot(a, b)
    if rs.family == "D" and a[-1] != 0 and b[-1] != 0:
        negatives = sum(1 for x in lam if x < 0) + sum(1 for x in hv if x < 0)
        if negatives % 2:
            total -= 2 * a[-1] * b[-1]
    return total


def nu_on_irrep(lam, h, rs: RootSystemBD) -> Fraction:
    """Nilpotency index of a Jacobson-Morozov nilpotent on ``V_lam``.

    ``h`` is the cocharacter of the nilpotent (its semisimple partner in
    eps-coordinates).  The index equals the top h-eigenvalue on ``V_lam``.
    """
    return weyl_orbit_max(lam, h, rs)


def _fractional_part(lam: Sequence[Fraction]) -> Fraction:
    return HALF if lam and lam[0].denominator == 2 else Fraction(0)


def _below(diff: Sequence[Fraction], rs: RootSystemBD) -> bool:
    """Whether ``diff`` is a non-negative integer combination of simple roots."""
    if any(x.denominator != 1 for x in diff):
        return False
    r = rs.rank
    partial = []
    s = Fraction(0)
    for x in diff:
        s += x
        partial.append(s)
    if rs.family == "B":
        return all(p >= 0 for p in partial)
    coeffs = partial[: r - 2]
    coeffs.append((partial[r - 2] - diff[r - 1]) / 2)
    coeffs.append(partial[r - 1] / 2)
    return all(c >= 0 and c.denominator == 1 for c in coeffs)


def _nonincreasing(length: int, top: Fraction, offset: Fraction):
    """Non-increasing sequences with entries in ``offset + {0, 1, ...}`` up to ``top``."""
    if length == 0:
        yield ()
        return
    x = top
    while x >= offset:
        for rest in _nonincreasing(length - 1, x, offset):
            yield (x,) + rest
        x -= 1


@lru_cache(maxsize=None)
def _dominant_weights_below(lam: tuple[Fraction, ...], rs: RootSystemBD) -> tuple[tuple[Fraction, ...], ...]:
    off = _fractional_part(lam)
    top = max(abs(x) for x in lam) if lam else Fraction(0)
    out = []
    for cand in _nonincreasing(rs.rank, top, off):
        variants = [cand]
        if rs.family == "D" and cand[-1] != 0:
            variants.append(cand[:-1] + (-cand[-1],))
        for mu in variants:
            if _below(tuple(a - b for a, b in zip(lam, mu)), rs):
                out.append(mu)
    rv = rho(rs)
    out.sort(key=lambda mu: (-_dot(mu, rv), mu), reverse=False)
    return tuple(out)


def dominant_weights_below(lam, rs: RootSystemBD) -> list[tuple[Fraction, ...]]:
    """Dominant weights ``mu <= lam``, highest first."""
    lam = _check_rank(lam, rs)
    if not is_dominant(lam, rs):
        raise ValueError("weight is not dominant")
    return list(_dominant_weights_below(lam, rs))


@lru_cache(maxsize=None)
def _freudenthal(lam: tuple[Fraction, ...], rs: RootSystemBD) -> tuple[tuple[tuple[Fraction, ...], int], ...]:
    rv = rho(rs)
    roots = positive_roots(rs)
    lr = tuple(a + b for a, b in zip(lam, rv))
    norm_top = _dot(lr, lr)
    mult: dict[tuple[Fraction, ...], int] = {}
    for mu in _dominant_weights_below(lam, rs):
        if mu == lam:
            mult[mu] = 1
            continue
        mr = tuple(a + b for a, b in zip(mu, rv))
        denom = norm_top - _dot(mr, mr)
        acc = Fraction(0)
        for alpha in roots:
            k = 1
            while True:
                nu = tuple(m + k * a for m, a in zip(mu, alpha))
                m_nu = mult.get(dominant_representative(nu, rs), 0)
                if not m_nu:
                    break
                acc += m_nu * _dot(nu, alpha)
                k += 1
        value = 2 * acc / denom
        if value.denominator != 1 or value < 0:
            raise ArithmeticError(f"non-integral multiplicity {value} at {mu}")
        if value:
            mult[mu] = int(value)
    return tuple(mult.items())


def weight_multiplicities(lam, rs: RootSystemBD) -> dict[tuple[Fraction, ...], int]:
    """Freudenthal multiplicities of the dominant weights of ``V_lam``."""
    lam = _check_rank(lam, rs)
    if not is_dominant(lam, rs):
        raise ValueError(f"{tuple(map(str, lam))} is not dominant for {rs}")
    return dict(_freudenthal(lam, rs))


def orbit_size(mu, rs: RootSystemBD) -> int:
    c = _check_rank(mu, rs)
    groups = Counter(abs(x) for x in c)
    size = factorial(len(c))
    for k in groups.values():
        size //= factorial(k)
    nonzero = sum(1 for x in c if x != 0)
    size *= 2 ** nonzero
    if rs.family == "D" and nonzero == len(c):
        size //= 2
    return size


def character_dimension(mults: dict, rs: RootSystemBD) -> int:
    return sum(m * orbit_size(mu, rs) for mu, m in mults.items())


def weyl_dimension(lam, rs: RootSystemBD) -> int:
    lam = _check_rank(lam, rs)
    rv = rho(rs)
    lr = tuple(a + b for a, b in zip(lam, rv))
    num = Fraction(1)
    for alpha in positive_roots(rs):
        num *= _dot(lr, alpha) / _dot(rv, alpha)
    if num.denominator != 1:
        raise ArithmeticError("Weyl dimension is not an integer")
    return int(num)


def parity_check(lam, degree_parity: str) -> bool:
    """Even degrees carry integral weights, odd degrees strictly half-integral ones."""
    hw = lam if isinstance(lam, HighestWeight) else HighestWeight(lam)
    if degree_parity == "even":
        return all(x.denominator == 1 for x in hw.coords)
    if degree_parity == "odd":
        return all(x.denominator == 2 for x in hw.coords)
    raise ValueError("degree_parity must be 'even' or 'odd'")


# -- branching so(V + U) -> so(V) graded by the U-weight ------------------------


def decompose_dominant_character(char: dict, rs: RootSystemBD) -> Counter:
    """Split a Weyl-invariant character (given on dominant weights) into irreducibles."""
    residual = {k: v for k, v in char.items() if v}
    rv = rho(rs)
    out: Counter = Counter()
    while residual:
        top = max(residual, key=lambda mu: (_dot(mu, rv), mu))
        c = residual[top]
        if c < 0:
            raise BranchingError(f"negative residual multiplicity at {tuple(map(str, top))}")
        out[top] += c
        for mu, m in _freudenthal(top, rs):
            left = residual.get(mu, 0) - c * m
            if left < 0:
                raise BranchingError(f"peeling {tuple(map(str, top))} overshoots at {tuple(map(str, mu))}")
            if left:
                residual[mu] = left
            else:
                residual.pop(mu, None)
    return out


@dataclass(frozen=True)
class Branching:
    """Graded restriction of an ambient irreducible.

    ``grades[g]`` counts target highest weights (exact, signs kept) in the
    piece where the extra coordinate equals ``-g``.
    """

    ambient: RootSystemBD
    target: RootSystemBD
    mu: tuple[Fraction, ...]
    grades: dict[Fraction, Counter] = field(default_factory=dict)

    def normalized(self) -> dict[Fraction, Counter]:
        """Labels with last coordinate made non-negative (type D mirror pairs merged)."""
        out = {}
        for g, comps in self.grades.items():
            c: Counter = Counter()
            for lam, m in comps.items():
                c[lam[:-1] + (abs(lam[-1]),)] += m
            out[g] = c
        return out

    def mirror_pairs(self) -> dict[Fraction, set]:
        """Per grade, normalized labels whose negative mirror occurs."""
        out = {}
        for g, comps in self.grades.items():
            out[g] = {lam[:-1] + (-lam[-1],) for lam in comps if lam[-1] < 0}
        return out

    def dimension(self) -> int:
        return sum(m * weyl_dimension(lam, self.target) for comps in self.grades.values() for lam, m in comps.items())


def _graded_dominant_characters(mu: tuple[Fraction, ...], ambient: RootSystemBD) -> dict[Fraction, dict]:
    graded: dict[Fraction, dict] = {}
    for nu, m in _freudenthal(mu, ambient):
        seen = set()
        for j, x in enumerate(nu):
            rest = sorted((abs(y) for i, y in enumerate(nu) if i != j), reverse=True)
            for g in {abs(x), -abs(x)}:
                key = (g, tuple(rest))
                if key in seen:
                    continue
                seen.add(key)
                if ambient.family == "B" or rest[-1] == 0:
                    labels = [tuple(rest)]
                elif g == 0:
                    labels = [tuple(rest), tuple(rest[:-1]) + (-rest[-1],)]
                else:
                    # no zero coordinate anywhere: even sign changes fix the last sign
                    sign = (1 if nu[-1] > 0 else -1) * (1 if g > 0 else -1)
                    labels = [tuple(rest[:-1]) + (sign * rest[-1],)]
                piece = graded.setdefault(-g, {})
                for lab in labels:
                    piece[lab] = piece.get(lab, 0) + m
    return graded


def grade_and_branch(mu, ambient: RootSystemBD, target: RootSystemBD) -> Branching:
    """Restrict ``V_mu`` of ``ambient`` (rank r+1) to ``target`` (rank r), graded
    by minus the first coordinate."""
    if ambient.family != target.family or ambient.rank != target.rank + 1:
        raise ValueError(f"cannot branch {ambient} to {target}")
    mu = _check_rank(mu, ambient)
    if not is_dominant(mu, ambient):
        raise ValueError(f"{tuple(map(str, mu))} is not dominant for {ambient}")
    graded = _graded_dominant_characters(mu, ambient)
    grades = {g: decompose_dominant_character(char, target) for g, char in sorted(graded.items())}
    return Branching(ambient=ambient, target=target, mu=mu, grades=grades)
