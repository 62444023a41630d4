"""Graded-dimension bookkeeping for degenerations of Kuga-Satake type.

The X side is the graded profile ``r_i`` of a nilpotent on a space of
dimension ``b2 - 1`` (support in [-2, 2]); the A side is the profile ``s_i``
of a simple factor ``H`` (support in [-1, 1]).  A pair is consistent when the
eigenvalue multiset on the even Clifford algebra (``b2`` even) or the full
Clifford algebra (``b2`` odd) matches the graded dimensions of ``End(H)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "GradedProfile",
    "ReductionCase",
    "wedge_eigen_multiset",
    "end_graded_dims",
    "x_profile_candidates",
    "a_profile_candidates",
    "classify",
    "enumerate_reduction_cases",
    "expected_labels",
    "comparison_dimension",
]


@dataclass(frozen=True)
class GradedProfile:
    counts: tuple[tuple[int, int], ...]

    def __init__(self, counts: Mapping[int, int] | Iterable[tuple[int, int]]):
        items = dict(counts)
        for k, v in items.items():
            if not isinstance(k, int) or not isinstance(v, int) or v < 0:
                raise ValueError(f"bad profile entry {k!r}: {v!r}")
        for k, v in items.items():
            if items.get(-k, 0) != v:
                raise ValueError(f"profile is not symmetric at {k}")
        object.__setattr__(self, "counts", tuple(sorted((k, v) for k, v in items.items() if v)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def __getitem__(self, i: int) -> int:
        return self.as_dict().get(i, 0)

    @property
    def total(self) -> int:
        return sum(v for _, v in self.counts)

    @property
    def support_radius(self) -> int:
        return max((abs(k) for k, _ in self.counts), default=0)


def _as_counts(beta) -> dict[int, int]:
    return beta.as_dict() if isinstance(beta, GradedProfile) else {k: v for k, v in dict(beta).items() if v}


def wedge_eigen_multiset(beta, parity: str = "even") -> dict[int, int]:
    """Subset sums of the multiset ``beta`` over even-size (or all) subsets.

    Coefficients of ``prod_j (1 + t x^{beta_j})``, tracked as a polynomial in
    ``x`` for each parity of the ``t``-degree.
    """
    if parity not in ("even", "all"):
        raise ValueError("parity must be 'even' or 'all'")
    polys = [{0: 1}, {}]  # by t-degree parity
    for value, count in _as_counts(beta).items():
        for _ in range(count):
            new = [dict(polys[0]), dict(polys[1])]
            for par in (0, 1):
                for e, c in polys[par].items():
                    tgt = new[1 - par]
                    tgt[e + value] = tgt.get(e + value, 0) + c
            polys = new
    out: Counter = Counter(polys[0])
    if parity == "all":
        out.update(polys[1])
    return {k: v for k, v in sorted(out.items()) if v}


def end_graded_dims(s) -> dict[int, int]:
    """``gr_i End(H) = sum_{a - b = i} s_a s_b``."""
    counts = _as_counts(s)
    out: Counter = Counter()
    for a, ca in counts.items():
        for b, cb in counts.items():
            out[a - b] += ca * cb
    return {k: v for k, v in sorted(out.items()) if v}


@dataclass(frozen=True)
class ReductionCase:
    label: str
    b2: int
    x_profile: GradedProfile
    a_profile: GradedProfile
    m: int

    @property
    def r(self) -> dict[int, int]:
        return {i: self.x_profile[i] for i in (2, 1, 0, -1, -2)}

    @property
    def a_ratios(self) -> dict[int, Fraction]:
        """``r_i(A)/b_1(A)`` for i = 1, 0, -1 (ratios are those of H)."""
        return {i: Fraction(self.a_profile[i], self.m) for i in (1, 0, -1)}


def comparison_dimension(b2: int) -> tuple[int, str]:
    """``dim H`` and the Clifford parity it is compared against."""
    if b2 < 4:
        raise ValueError(f"b2 must be at least 4, got {b2}")
    if b2 % 2 == 0:
        return 2 ** ((b2 - 2) // 2), "even"
    return 2 ** ((b2 - 1) // 2), "all"


def x_profile_candidates(b2: int) -> list[GradedProfile]:
    """Profiles from sl2-strings of lengths 1, 2, 3 on a (b2-1)-dim space.

    Block parity constraints of orthogonal nilpotents are deliberately not
    imposed, so profiles such as ``r_1 = 1`` stay in the candidate set and
    must be excluded by the Clifford comparison.
    """
    dim = b2 - 1
    out = []
    for n3 in range(dim // 3 + 1):
        for n2 in range((dim - 3 * n3) // 2 + 1):
            n1 = dim - 3 * n3 - 2 * n2
            out.append(GradedProfile({2: n3, -2: n3, 1: n2, -1: n2, 0: n1 + n3}))
    return out


def a_profile_candidates(m: int) -> list[GradedProfile]:
    return [GradedProfile({1: a, -1: a, 0: m - 2 * a}) for a in range(m // 2 + 1)]


def classify(x: GradedProfile, b2: int) -> str:
    r0, r1, r2 = x[0], x[1], x[2]
    if r0 == b2 - 1:
        return "a"
    if r2 == 0 and r1 == 2:
        return "b"
    if r1 == 0 and r2 == 1:
        return "c"
    if r2 == 0 and r1 == 1:
        return "d"
    return "other"


def expected_labels(b2: int) -> list[str]:
    return ["a", "c"] if b2 == 4 else ["a", "b", "c"]


def enumerate_reduction_cases(b2: int) -> list[ReductionCase]:
    """All consistent (X-profile, A-profile) pairs, sorted by label."""
    m, parity = comparison_dimension(b2)
    a_sides = [(s, end_graded_dims(s)) for s in a_profile_candidates(m)]
    out = []
    for x in x_profile_candidates(b2):
        target = wedge_eigen_multiset(x, parity)
        for s, dims in a_sides:
            if dims == target:
                out.append(ReductionCase(label=classify(x, b2), b2=b2, x_profile=x, a_profile=s, m=m))
    out.sort(key=lambda c: (c.label, c.x_profile.counts, c.a_profile.counts))
    return out
