"""Seeded bounded-height rational sampling.

Numerators are drawn uniformly from [-H, H] and denominators from [1, H].
Every sampler takes an explicit :class:`random.Random` so results depend only
on the seed.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .linalg import Matrix

DEFAULT_HEIGHT = 7


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


def random_rational(rng: random.Random, height: int = DEFAULT_HEIGHT) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_nonzero_rational(rng: random.Random, height: int = DEFAULT_HEIGHT) -> Fraction:
    while True:
        x = random_rational(rng, height)
        if x:
            return x


def random_vector(rng: random.Random, n: int, height: int = DEFAULT_HEIGHT) -> tuple:
    return tuple(random_rational(rng, height) for _ in range(n))


def random_matrix(rng: random.Random, n: int, height: int = DEFAULT_HEIGHT) -> Matrix:
    return Matrix(tuple(random_vector(rng, n, height) for _ in range(n)))


def random_invertible_matrix(rng: random.Random, n: int, height: int = DEFAULT_HEIGHT) -> Matrix:
    while True:
        m = random_matrix(rng, n, height)
        if m.determinant():
            return m
