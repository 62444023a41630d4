"""Nilpotency predictions for degenerations of hyper-Kähler varieties.

A decomposition lists irreducible modules of so(b2 + 2) (weights in the
ambient rank ``b2 // 2 + 1``).  Degree ``2i`` of cohomology is the grade
``i - n`` piece of the restriction to so(b2); the monodromy of a reduction
type acts there through a fixed cocharacter, so its nilpotency index on a
degree is the largest ``nu_on_irrep`` among the pieces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .weights import (
    HighestWeight,
    RootSystemBD,
    grade_and_branch,
    is_dominant,
    nu_on_irrep,
)

__all__ = [
    "REDUCTION_TYPES",
    "DeformationTypeData",
    "LLVComponent",
    "LLVDecomposition",
    "NuTable",
    "Theorem71Report",
    "k3n",
    "kumn",
    "og6",
    "og10",
    "deformation_type",
    "verbitsky_only",
    "cocharacter",
    "gklr_condition",
    "validate_decomposition",
    "predict_nu_even",
    "predict_nu_odd",
    "theorem71_check",
    "nu_table",
]

REDUCTION_TYPES = ("I", "II", "III")


@dataclass(frozen=True)
class DeformationTypeData:
    name: str
    n: int
    b2: int
    has_odd: bool
    b3: int = 0
    # odd pieces in so(b2) coordinates: degree -> target highest weights
    odd_pieces: tuple[tuple[int, tuple[tuple[Fraction, ...], ...]], ...] = ()

    def odd_components(self) -> dict[int, list[tuple[Fraction, ...]]]:
        return {deg: list(ws) for deg, ws in self.odd_pieces}


def k3n(n: int) -> DeformationTypeData:
    if n < 1:
        raise ValueError("n must be at least 1")
    return DeformationTypeData("K3n", n, 22 if n == 1 else 23, False)


def kumn(n: int) -> DeformationTypeData:
    if n < 2:
        raise ValueError("Kum_n needs n >= 2")
    half = Fraction(1, 2)
    return DeformationTypeData("Kumn", n, 7, True, 8, ((3, ((half, half, half),)),))


def og6() -> DeformationTypeData:
    return DeformationTypeData("OG6", 3, 8, False)


def og10() -> DeformationTypeData:
    return DeformationTypeData("OG10", 5, 24, False)


def deformation_type(name: str, n: Optional[int] = None) -> DeformationTypeData:
    key = name.lower()
    if key in ("k3n", "k3"):
        return k3n(n or 2)
    if key in ("kumn", "kum"):
        return kumn(n or 2)
    if key == "og6":
        return og6()
    if key == "og10":
        return og10()
    raise ValueError(f"unknown deformation type {name!r}")


@dataclass(frozen=True)
class LLVComponent:
    mu: HighestWeight
    mult: int = 1
    parity: str = "even"


@dataclass(frozen=True)
class LLVDecomposition:
    n: int
    b2: int
    components: tuple[LLVComponent, ...]

    @property
    def ambient(self) -> RootSystemBD:
        return RootSystemBD.for_dimension(self.b2 + 2)

    @property
    def target(self) -> RootSystemBD:
        return RootSystemBD.for_dimension(self.b2)

    def with_component(self, mu, mult: int = 1, parity: str = "even") -> "LLVDecomposition":
        comp = LLVComponent(HighestWeight(mu), mult, parity)
        return LLVDecomposition(self.n, self.b2, self.components + (comp,))

    def verbitsky_weight(self) -> tuple[Fraction, ...]:
        return (Fraction(self.n),) + (Fraction(0),) * (self.ambient.rank - 1)

    @classmethod
    def from_json(cls, data: Mapping) -> "LLVDecomposition":
        comps = []
        for c in data["components"]:
            comps.append(LLVComponent(HighestWeight(c["mu"]), int(c.get("mult", 1)), c.get("parity", "even")))
        return cls(int(data["n"]), int(data["b2"]), tuple(comps))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "b2": self.b2,
            "components": [
                {"mu": [str(x) for x in c.mu.coords], "mult": c.mult, "parity": c.parity}
                for c in self.components
            ],
        }


def verbitsky_only(n: int, b2: int) -> LLVDecomposition:
    d = LLVDecomposition(n, b2, ())
    return d.with_component(d.verbitsky_weight())


def cocharacter(t: str, rank: int) -> tuple[int, ...]:
    """Eigenvalue cocharacter of the normalized monodromy in so(b2) coordinates."""
    if t == "I":
        head = ()
    elif t == "II":
        head = (1, 1)
    elif t == "III":
        head = (2,)
    else:
        raise ValueError(f"unknown reduction type {t!r}")
    if rank < len(head):
        raise ValueError(f"Type {t} needs rank >= {len(head)}")
    return head + (0,) * (rank - len(head))


def validate_decomposition(d: LLVDecomposition) -> list[str]:
    out = []
    if d.n < 1:
        out.append("n must be at least 1")
    if d.b2 < 3:
        out.append("b2 must be at least 3")
        return out
    amb = d.ambient
    for k, c in enumerate(d.components):
        label = f"component {k} {c.mu}"
        if len(c.mu) != amb.rank:
            out.append(f"{label}: expected {amb.rank} coordinates for {amb}")
            continue
        if c.mult < 1:
            out.append(f"{label}: multiplicity must be positive")
        if not is_dominant(c.mu.coords, amb):
            out.append(f"{label}: not dominant for {amb}")
        if c.parity not in ("even", "odd"):
            out.append(f"{label}: parity must be even or odd")
        elif (c.parity == "even") != c.mu.integral:
            out.append(f"{label}: parity rule violated ({c.parity} degree needs "
                       f"{'integral' if c.parity == 'even' else 'half-integral'} weight)")
    if not any(c.mu.coords == d.verbitsky_weight() and c.parity == "even" and c.mult >= 1
               for c in d.components):
        out.append(f"Verbitsky component ({d.n}) missing")
    return out


def _require_valid(d: LLVDecomposition) -> None:
    problems = validate_decomposition(d)
    if problems:
        raise ValueError("invalid decomposition: " + "; ".join(problems))


def gklr_condition(d: LLVDecomposition) -> bool:
    """Every even component has ``mu_0 + mu_1 + mu_2 <= n``."""
    _require_valid(d)
    for c in d.components:
        if c.parity != "even":
            continue
        if sum(c.mu.coords[:3]) > d.n:
            return False
    return True


def _pieces_by_grade(d: LLVDecomposition, parity: str) -> dict[Fraction, set]:
    pieces: dict[Fraction, set] = {}
    for c in d.components:
        if c.parity != parity:
            continue
        br = grade_and_branch(c.mu.coords, d.ambient, d.target)
        for g, comps in br.grades.items():
            pieces.setdefault(g, set()).update(comps)
    return pieces


def _max_nu(weights: Iterable, h, rs: RootSystemBD) -> Fraction:
    return max((nu_on_irrep(lam, h, rs) for lam in weights), default=Fraction(0))


def _as_int(x: Fraction):
    return int(x) if x.denominator == 1 else x


def predict_nu_even(d: LLVDecomposition, t: str) -> dict[int, int]:
    """``{i: nu(N_2i)}`` for ``0 <= i <= n``."""
    if t not in REDUCTION_TYPES:
        raise ValueError(f"unknown reduction type {t!r}")
    _require_valid(d)
    if t == "I":
        return {i: 0 for i in range(d.n + 1)}
    h = cocharacter(t, d.target.rank)
    pieces = _pieces_by_grade(d, "even")
    return {i: _as_int(_max_nu(pieces.get(Fraction(i - d.n), ()), h, d.target)) for i in range(d.n + 1)}


def predict_nu_odd(data, t: str, odd_components: Optional[Mapping[int, Sequence]] = None) -> dict[int, Optional[int]]:
    """``{i: nu(N_{2i+1})}`` for ``1 <= i <= n - 1``; ``None`` where only the
    bound ``2i - 1`` is known.

    ``data`` is a :class:`DeformationTypeData` or an :class:`LLVDecomposition`
    with odd components.  ``odd_components`` maps odd degrees to highest
    weights of so(b2) and overrides fixtures.
    """
    if t not in REDUCTION_TYPES:
        raise ValueError(f"unknown reduction type {t!r}")
    if isinstance(data, DeformationTypeData):
        if not data.has_odd and not odd_components:
            raise ValueError(f"{data.name} has no odd cohomology")
        n, b2 = data.n, data.b2
        supplied = {deg: [tuple(HighestWeight(w).coords) for w in ws]
                    for deg, ws in (odd_components or data.odd_components()).items()}
    elif isinstance(data, LLVDecomposition):
        _require_valid(data)
        n, b2 = data.n, data.b2
        if not any(c.parity == "odd" for c in data.components) and not odd_components:
            raise ValueError("decomposition has no odd components")
        supplied = {}
        for g, ws in _pieces_by_grade(data, "odd").items():
            deg = 2 * n + 2 * g
            supplied[int(deg)] = sorted(ws)
        for deg, ws in (odd_components or {}).items():
            supplied[deg] = [tuple(HighestWeight(w).coords) for w in ws]
    else:
        raise TypeError("expected DeformationTypeData or LLVDecomposition")
    target = RootSystemBD.for_dimension(b2)
    out: dict[int, Optional[int]] = {}
    for i in range(1, n):
        deg = 2 * i + 1
        if t == "I":
            out[i] = 0
        elif deg in supplied:
            h = cocharacter(t, target.rank)
            out[i] = _as_int(_max_nu(supplied[deg], h, target))
        elif t == "III":
            out[i] = 2 * i - 1
        else:
            out[i] = None
    return out


@dataclass(frozen=True)
class Theorem71Report:
    condition1: bool
    condition2: bool
    nu_even: dict = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        return self.condition1 == self.condition2


def theorem71_check(d: LLVDecomposition) -> Theorem71Report:
    if d.b2 < 5:
        raise ValueError("the criterion needs b2 >= 5")
    nus = predict_nu_even(d, "II")
    cond1 = all(v == i for i, v in nus.items())
    return Theorem71Report(condition1=cond1, condition2=gklr_condition(d), nu_even=nus)


@dataclass(frozen=True)
class NuTable:
    """Indices ``nu_k`` for degrees ``k = 0..4n`` (``None``: unknown)."""

    n: int
    reduction_type: str
    values: dict

    def violations(self) -> list[str]:
        out = []
        top = 4 * self.n
        v = self.values
        if v.get(0) not in (0, None) or v.get(top) not in (0, None):
            out.append("extreme degrees must have index 0")
        for k, x in v.items():
            if x is None:
                continue
            if v.get(top - k, x) != x:
                out.append(f"degrees {k} and {top - k} disagree")
            low = min(k, top - k)
            if low % 2 == 0 and x > low:
                out.append(f"degree {k}: {x} exceeds bound {low}")
            if low % 2 == 1 and x > max(low - 2, 0):
                out.append(f"degree {k}: {x} exceeds bound {max(low - 2, 0)}")
        return out


def nu_table(d: LLVDecomposition, t: str, odd: Optional[Mapping[int, Optional[int]]] = None) -> NuTable:
    """Full table, lower half computed and upper half filled by duality."""
    n = d.n
    values: dict = {}
    for i, x in predict_nu_even(d, t).items():
        values[2 * i] = x
        values[4 * n - 2 * i] = x
    if odd is not None:
        for i, x in odd.items():
            values[2 * i + 1] = x
            values[4 * n - 2 * i - 1] = x
    return NuTable(n=n, reduction_type=t, values=dict(sorted(values.items())))
