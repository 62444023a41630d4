import random
from collections import Counter
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hkmono.weights import (
    BranchingError,
    HighestWeight,
    RootSystemBD,
    character_dimension,
    decompose_dominant_character,
    dominant_representative,
    grade_and_branch,
    is_dominant,
    nu_on_irrep,
    orbit_size,
    parity_check,
    weight_multiplicities,
    weyl_dimension,
    weyl_orbit_max,
)

from oracles import brute_orbit, brute_weyl_max

H = Fraction(1, 2)
B = lambda r: RootSystemBD("B", r)  # noqa: E731
D = lambda r: RootSystemBD("D", r)  # noqa: E731


def random_dominant(rng, rs, top=4, allow_half=True):
    half = allow_half and rng.random() < 0.3
    vals = sorted((rng.randint(0, top) for _ in range(rs.rank)), reverse=True)
    lam = [Fraction(v) + (H if half else 0) for v in vals]
    if rs.family == "D" and lam[-1] and rng.random() < 0.5:
        lam[-1] = -lam[-1]
    return tuple(lam)


class TestDominance:
    def test_examples(self):
        assert is_dominant((2, 1, 0), B(3))
        assert is_dominant((1, 1, -1), D(3))
        assert not is_dominant((1, 2), B(2))

    def test_boundaries(self):
        assert not is_dominant((1, 0, -1), B(3))
        assert not is_dominant((1, 0, -1), D(3))
        assert not is_dominant((1, "1/2"), B(2))
        assert is_dominant(("3/2", "1/2", "-1/2"), D(3))

    def test_mixed_parity_rejected(self):
        with pytest.raises(ValueError):
            HighestWeight((1, H))
        with pytest.raises(ValueError):
            HighestWeight(("1/3",))

    def test_small_ranks(self):
        with pytest.raises(ValueError):
            RootSystemBD("D", 1)
        with pytest.raises(ValueError):
            RootSystemBD("C", 3)
        assert RootSystemBD.for_dimension(7) == B(3)
        assert RootSystemBD.for_dimension(8) == D(4)


class TestOrbitMax:
    def test_examples(self):
        for rs in (B(4), D(4)):
            assert weyl_orbit_max((5, 0, 0, 0), (1, 1, 0, 0), rs) == 5
            assert weyl_orbit_max((3, 2, 1, 0), (0, 0, 0, 0), rs) == 0
        assert weyl_orbit_max((1, 1), (1, -1), D(2)) == 0
        assert weyl_orbit_max((1, 1), (1, -1), B(2)) == 2

    def test_rejects_non_dominant(self):
        with pytest.raises(ValueError):
            weyl_orbit_max((0, 1), (1, 0), B(2))

    def test_brute_force(self):
        rng = random.Random(99)
        for _ in range(150):
            fam = rng.choice("BD")
            r = rng.randint(2 if fam == "D" else 1, 5)
            rs = RootSystemBD(fam, r)
            lam = random_dominant(rng, rs)
            h = tuple(rng.randint(-3, 3) for _ in range(r))
            assert weyl_orbit_max(lam, h, rs) == brute_weyl_max(lam, h, fam)


class TestNuOnIrrep:
    def test_examples(self):
        assert nu_on_irrep((4, 0, 0), (1, 1, 0), B(3)) == 4
        assert nu_on_irrep((H, H, H), (2, 0, 0), B(3)) == 1
        assert nu_on_irrep((0, 0, 0), (2, 0, 0), B(3)) == 0

    @settings(max_examples=80, deadline=None)
    @given(st.sampled_from("BD"), st.integers(2, 7), st.lists(st.integers(0, 6), min_size=7, max_size=7),
           st.booleans())
    def test_type_two_value(self, fam, r, raw, flip):
        vals = sorted(raw[:r], reverse=True)
        if fam == "D" and flip and vals[-1]:
            vals[-1] = -vals[-1]
        rs = RootSystemBD(fam, r)
        h = (1, 1) + (0,) * (r - 2)
        assert nu_on_irrep(vals, h, rs) == vals[0] + vals[1]


def wedge_character(rs, k):
    """Dominant part of the character of Λ^k of the defining module."""
    r = rs.rank
    basis = []
    for i in range(r):
        for s in (1, -1):
            v = [0] * r
            v[i] = s
            basis.append(tuple(v))
    if rs.family == "B":
        basis.append((0,) * r)
    char = Counter()
    for combo in combinations(basis, k):
        wt = tuple(Fraction(sum(c[i] for c in combo)) for i in range(r))
        if is_dominant(wt, rs):
            char[wt] += 1
    return dict(char)


class TestMultiplicities:
    def test_standard(self):
        for r in (1, 2, 3, 5):
            m = weight_multiplicities((1,) + (0,) * (r - 1), B(r))
            assert m == {(1,) + (0,) * (r - 1): 1, (0,) * r: 1}
            assert character_dimension(m, B(r)) == 2 * r + 1

    def test_adjoint(self):
        m = weight_multiplicities((1, 1, 0), B(3))
        assert m[(0, 0, 0)] == 3
        assert character_dimension(m, B(3)) == 21

    def test_spin(self):
        m = weight_multiplicities((H, H, H), B(3))
        assert m == {(H, H, H): 1}
        assert character_dimension(m, B(3)) == 8

    @pytest.mark.parametrize("rs,k", [(B(3), 2), (B(3), 3), (B(4), 3), (D(4), 2), (D(5), 3), (D(5), 4)])
    def test_exterior_powers(self, rs, k):
        lam = (1,) * k + (0,) * (rs.rank - k)
        assert weight_multiplicities(lam, rs) == wedge_character(rs, k)

    def test_against_weyl_dimension(self):
        rng = random.Random(4)
        for _ in range(40):
            fam = rng.choice("BD")
            rs = RootSystemBD(fam, rng.randint(2, 5))
            lam = random_dominant(rng, rs, top=3)
            assert character_dimension(weight_multiplicities(lam, rs), rs) == weyl_dimension(lam, rs)

    def test_orbit_sizes(self):
        rng = random.Random(1)
        for _ in range(30):
            fam = rng.choice("BD")
            rs = RootSystemBD(fam, rng.randint(2, 5))
            mu = random_dominant(rng, rs, top=2)
            assert orbit_size(mu, rs) == len(brute_orbit(mu, fam))
            assert dominant_representative(rng.choice(sorted(brute_orbit(mu, fam))), rs) == mu


def labels(comps):
    """Drop trailing zeros, so (2, 0) reads as (2,)."""
    out = Counter()
    for lam, m in comps.items():
        lam = list(lam)
        while lam and lam[-1] == 0:
            lam.pop()
        out[tuple(int(x) for x in lam)] += m
    return out


class TestBranching:
    def test_verbitsky_two(self):
        br = grade_and_branch((2, 0, 0), B(3), B(2))
        got = {g: labels(c) for g, c in br.normalized().items()}
        assert got == {
            -2: Counter({(): 1}), -1: Counter({(1,): 1}), 0: Counter({(2,): 1, (): 1}),
            1: Counter({(1,): 1}), 2: Counter({(): 1}),
        }

    def test_trivial(self):
        br = grade_and_branch((0, 0, 0), B(3), B(2))
        assert br.grades == {0: Counter({(0, 0): 1})}

    @pytest.mark.parametrize("fam,r", [("B", 3), ("D", 4), ("D", 3), ("B", 2)])
    def test_standard(self, fam, r):
        amb, tgt = RootSystemBD(fam, r), RootSystemBD(fam, r - 1)
        br = grade_and_branch((1,) + (0,) * (r - 1), amb, tgt)
        zero = (0,) * (r - 1)
        std = (1,) + (0,) * (r - 2)
        assert br.grades == {-1: Counter({zero: 1}), 0: Counter({std: 1}), 1: Counter({zero: 1})}

    def test_invariants_random(self):
        rng = random.Random(17)
        for _ in range(25):
            fam = rng.choice("BD")
            r = rng.randint(3 if fam == "D" else 2, 5)
            amb, tgt = RootSystemBD(fam, r), RootSystemBD(fam, r - 1)
            mu = random_dominant(rng, amb, top=3)
            br = grade_and_branch(mu, amb, tgt)
            assert br.dimension() == weyl_dimension(mu, amb)
            norm = br.normalized()
            assert all(norm[g] == norm.get(-g) for g in norm)
            top = -mu[0]
            assert mu[1:] in br.grades[top] or mu[1:-1] + (-mu[-1],) in br.grades[top]

    def test_half_integral_grades(self):
        br = grade_and_branch((H, H, H), B(3), B(2))
        assert set(br.grades) == {-H, H}
        assert br.grades[H] == Counter({(H, H): 1})

    def test_mirror_flag(self):
        br = grade_and_branch((1, 1, 1), D(3), D(2))
        assert any(br.mirror_pairs().values())

    def test_bad_systems(self):
        with pytest.raises(ValueError):
            grade_and_branch((1, 0, 0), B(3), D(2))
        with pytest.raises(ValueError):
            grade_and_branch((0, 1, 0), B(3), B(2))

    def test_peeling_failure(self):
        with pytest.raises(BranchingError):
            decompose_dominant_character({(Fraction(1), Fraction(0)): 1}, B(2))


def test_parity():
    assert parity_check((2, 1, 0), "even")
    assert parity_check((H, H, H), "odd")
    assert not parity_check((H, H, H), "even")
    with pytest.raises(ValueError):
        parity_check((1, H), "odd")
