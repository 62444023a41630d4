"""Brute-force reference implementations used only by the tests."""

from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from itertools import combinations, permutations, product
from math import gcd

from hkmono.linalg import Matrix, inverse
from hkmono.quadratic import QuadraticSpace


def signed_permutations(rank: int, family: str):
    for perm in permutations(range(rank)):
        for signs in product((1, -1), repeat=rank):
            if family == "D" and signs.count(-1) % 2:
                continue
            yield perm, signs


def brute_weyl_max(lam, h, family: str) -> Fraction:
    # clear denominators so the inner loop runs on ints
    lam, h = [Fraction(x) for x in lam], [Fraction(x) for x in h]
    scale = 1
    for x in lam + h:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    a = [int(x * scale) for x in lam]
    b = [int(x * scale) for x in h]
    best = max(
        sum(signs[i] * a[perm[i]] * b[i] for i in range(len(a)))
        for perm, signs in signed_permutations(len(a), family)
    )
    return Fraction(best, scale * scale)


def brute_orbit(mu, family: str) -> set:
    out = set()
    for perm, signs in signed_permutations(len(mu), family):
        out.add(tuple(signs[i] * Fraction(mu[perm[i]]) for i in range(len(mu))))
    return out


def subset_sums(beta: dict, parity: str) -> dict:
    vals = [k for k, v in beta.items() for _ in range(v)]
    out = Counter()
    for size in range(len(vals) + 1):
        if parity == "even" and size % 2:
            continue
        for combo in combinations(range(len(vals)), size):
            out[sum(vals[i] for i in combo)] += 1
    return dict(sorted(out.items()))


def antidiagonal(d: int) -> Matrix:
    return Matrix.from_sparse(d, d, {(i, d - 1 - i): 1 for i in range(d)})


def random_invertible(rng: random.Random, d: int) -> Matrix:
    lower = {(i, j): rng.randint(-2, 2) for i in range(d) for j in range(i)}
    upper = {(i, j): rng.randint(-2, 2) for i in range(d) for j in range(i + 1, d)}
    for i in range(d):
        lower[(i, i)] = 1
        upper[(i, i)] = rng.choice([1, -1, 2])
    return Matrix.from_sparse(d, d, lower) @ Matrix.from_sparse(d, d, upper)


def random_skew_nilpotent(rng: random.Random, d: int, density: float = 0.5):
    """Random nilpotent ``N`` skew for a random nondegenerate form ``g``.

    Strictly upper triangular ``U`` gives ``A = U - J U^T J`` in the nilradical
    of so(J) for the antidiagonal ``J``; a random change of basis and a random
    scale then move it to a random form.
    """
    u = Matrix.from_sparse(d, d, {
        (i, j): rng.randint(-3, 3)
        for i in range(d) for j in range(i + 1, d) if rng.random() < density
    })
    j = antidiagonal(d)
    a = u - j @ u.T @ j
    p = random_invertible(rng, d)
    scale = Fraction(rng.choice([1, -1, 2, 3]), rng.choice([1, 2, 5]))
    g = (p.T @ j @ p) * scale
    n = inverse(p) @ a @ p
    return n, QuadraticSpace(g)


def random_matrix(rng: random.Random, rows: int, cols: int, density: float = 0.6) -> Matrix:
    return Matrix([[Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2, 3])) if rng.random() < density else 0
                    for _ in range(cols)] for _ in range(rows)], cols)
