"""Shared helpers for the test suite: seeded random generators and
evaluation utilities.  Everything is deterministic given the Random
instance passed in."""

from __future__ import annotations

from fractions import Fraction

from qshuffle.qring import LaurentQ, RatQ


def random_fraction(rng, lo=-9, hi=9, nonzero=False) -> Fraction:
    while True:
        f = Fraction(rng.randint(lo, hi), rng.randint(1, 7))
        if f or not nonzero:
            return f


def random_q_point(rng) -> Fraction:
    """A random rational q0 avoiding 0 and +-1."""
    while True:
        f = random_fraction(rng, nonzero=True)
        if f not in (1, -1):
            return f


def random_laurent(rng, max_terms=4, exp_range=4, nonzero=False) -> LaurentQ:
    while True:
        terms = {}
        for _ in range(rng.randint(0, max_terms)):
            terms[rng.randint(-exp_range, exp_range)] = random_fraction(rng)
        p = LaurentQ(terms)
        if p or not nonzero:
            return p


def random_ratq(rng, nonzero=False) -> RatQ:
    num = random_laurent(rng, nonzero=nonzero)
    den = random_laurent(rng, max_terms=3, exp_range=2, nonzero=True)
    return RatQ(num, den)


def random_q_monomial(rng, exp_range=3) -> RatQ:
    c = random_fraction(rng, nonzero=True)
    return RatQ(LaurentQ.q_power(rng.randint(-exp_range, exp_range), c))
