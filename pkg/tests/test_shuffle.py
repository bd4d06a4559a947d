"""Shuffle product, canonical forms, Serre and wheel checks."""

import random

import pytest

from qshuffle.cartan import builtin_cartan
from qshuffle.poly import MultiLaurent, aux_var, zvar
from qshuffle.qring import RatQ
from qshuffle.ratfun import BinomialFactor, RatFun
from qshuffle.shuffle import (
    ClosureViolation,
    ShuffleAlgebra,
    ShuffleElement,
    format_word,
    parse_word,
)

A2 = builtin_cartan("A2")
B2 = builtin_cartan("B2")
G2 = builtin_cartan("G2")


def qp(e, c=1):
    return RatQ.q_power(e, c)


def random_word(rng, rank, length):
    return [(rng.randrange(1, rank + 1), rng.randrange(-2, 3)) for _ in range(length)]


def test_unit_and_generator():
    alg = ShuffleAlgebra(A2)
    one = alg.unit()
    assert one.degree == (0, 0)
    assert one.numerator == MultiLaurent.constant(1)
    g = alg.generator(2, -3)
    assert g.degree == (0, 1)
    assert g.numerator == MultiLaurent.var_power(zvar(2, 1), -3)
    with pytest.raises(ValueError):
        alg.generator(3, 0)
    assert alg.mul(one, g) == g
    assert alg.mul(g, one) == g
    assert alg.word_image([]) == one


def test_same_color_square_numerator():
    # the square of a degree-one element picks up 1 + q^(2 d_color)
    for cartan, color, exp in [(A2, 1, 2), (B2, 1, 4), (B2, 2, 2), (G2, 1, 6)]:
        alg = ShuffleAlgebra(cartan)
        sq = alg.mul(alg.generator(color, 0), alg.generator(color, 0))
        assert sq.numerator == MultiLaurent.constant(1) + MultiLaurent.constant(
            qp(exp)
        ), (cartan, color)


def test_generator_products_as_rational_functions():
    for cartan in (A2, B2):
        alg = ShuffleAlgebra(cartan)
        p = cartan.pairing(1, 2)
        z, w = zvar(1, 1), zvar(2, 1)
        for n, m in [(0, 0), (2, 1), (-1, 3)]:
            mono = MultiLaurent.monomial({z: n, w: m})
            # ordered product: the canonical factor cancels, a plain monomial
            fw = alg.mul(alg.generator(1, n), alg.generator(2, m))
            assert alg.to_rational(fw) == RatFun(mono)
            # reversed product keeps the exchange ratio (q^p z - w)/(z - q^p w)
            bw = alg.mul(alg.generator(2, m), alg.generator(1, n))
            expected = RatFun(
                mono.mul_binomial(qp(p), z, -1, w), {BinomialFactor(z, w, qp(p)): 1}
            )
            assert alg.to_rational(bw) == expected
        # same-color square: Vandermonde times (1 + q^2d) z1 z2 over the factor
        sq = alg.mul(alg.generator(1, 1), alg.generator(1, 1))
        num = (
            MultiLaurent.monomial({zvar(1, 1): 1, zvar(1, 2): 1})
            .scale(RatQ.one() + qp(2 * cartan.d(1)))
            .mul_binomial(1, zvar(1, 1), -1, zvar(1, 2))
        )
        assert alg.to_rational(sq) == RatFun(
            num, {BinomialFactor(zvar(1, 1), zvar(1, 2), qp(2 * cartan.d(1))): 1}
        )


def test_printed_orientation_same_color_violation():
    alg = ShuffleAlgebra(A2, orientation="printed")
    with pytest.raises(ClosureViolation):
        alg.mul(alg.generator(1, 0), alg.generator(1, 0))


def test_exactly_one_orientation_closes_same_color():
    closed = []
    for orientation in ("product", "printed"):
        alg = ShuffleAlgebra(A2, orientation=orientation)
        try:
            alg.mul(alg.generator(1, 0), alg.generator(1, 0))
            closed.append(orientation)
        except ClosureViolation:
            pass
    assert closed == ["product"]


def test_printed_orientation_cross_color_still_works():
    alg = ShuffleAlgebra(A2, orientation="printed")
    f = alg.mul(alg.generator(1, 2), alg.generator(2, 1))
    # the printed-orientation rational form still reduces to the monomial
    assert alg.to_rational(f) == RatFun(
        MultiLaurent.monomial({zvar(1, 1): 2, zvar(2, 1): 1})
    )


def test_interleaving_count():
    alg = ShuffleAlgebra(A2)
    picks = list(alg._interleavings((2, 1), (1, 1)))
    assert len(picks) == 3 * 2
    seen = set()
    for fmap, gmap, fset in picks:
        assert len(fmap) == 3 and len(gmap) == 2
        assert fset == frozenset(fmap.values())
        seen.add(tuple(sorted((str(v) for v in fset))))
    assert len(seen) == 6


def test_canonical_denominator_layout():
    alg = ShuffleAlgebra(A2)
    den = alg.canonical_denominator((2, 1))
    expect = {
        BinomialFactor(zvar(1, 1), zvar(1, 2), qp(2)): 1,
        BinomialFactor(zvar(1, 1), zvar(2, 1), qp(-1)): 1,
        BinomialFactor(zvar(1, 2), zvar(2, 1), qp(-1)): 1,
    }
    assert den == expect


def test_symmetric_rational_form():
    alg = ShuffleAlgebra(A2)
    sq = alg.mul(alg.generator(1, 0), alg.generator(1, 0))
    # same-color pairs cancel entirely: a constant
    assert alg.to_symmetric_rational(sq) == RatFun.from_scalar(
        RatQ.one() + qp(2)
    )
    w = alg.word_image(parse_word("a1:0 a1:0 a2:0"))
    got = alg.to_symmetric_rational(w)
    expect = RatFun(
        w.numerator,
        {
            BinomialFactor(zvar(1, 1), zvar(2, 1), RatQ.one()): 1,
            BinomialFactor(zvar(1, 2), zvar(2, 1), RatQ.one()): 1,
        },
    )
    assert got == expect


def test_wheel_example_numerator_and_vanishing():
    alg = ShuffleAlgebra(A2)
    w = alg.word_image(parse_word("a1:0 a1:0 a2:0"))
    x1, x2, y = zvar(1, 1), zvar(1, 2), zvar(2, 1)
    expect = (
        MultiLaurent.constant(RatQ.one() + qp(2))
        * (MultiLaurent.var_power(x1, 1) - MultiLaurent.var_power(y, 1, qp(-1)))
        * (MultiLaurent.var_power(x2, 1) - MultiLaurent.var_power(y, 1, qp(-1)))
    )
    assert w.numerator == expect
    assert alg.wheel_check(w, 1, 2)
    assert alg.wheel_check(w, 1, 2, i_indices=(2, 1))
    # too few alpha variables: vacuously true
    g = alg.generator(1, 0)
    assert alg.wheel_check(g, 1, 2)
    assert not alg.wheel_applicable(g, 1, 2)


def test_wheel_detects_nonvanishing_numerator():
    alg = ShuffleAlgebra(A2)
    fake = ShuffleElement(A2, (2, 1), MultiLaurent.constant(1))
    assert alg.wheel_applicable(fake, 1, 2)
    assert not alg.wheel_check(fake, 1, 2)


def test_wheel_argument_validation():
    alg = ShuffleAlgebra(A2)
    w = alg.word_image(parse_word("a1:0 a1:0 a2:0"))
    with pytest.raises(ValueError):
        alg.wheel_check(w, 1, 1)
    with pytest.raises(ValueError):
        alg.wheel_check(w, 1, 2, i_indices=(1, 1))
    with pytest.raises(ValueError):
        alg.wheel_check(w, 1, 2, i_indices=(1, 3))
    with pytest.raises(ValueError):
        alg.wheel_check(w, 1, 2, j_index=2)


def test_serre_relations_vanish_spot():
    alg = ShuffleAlgebra(A2)
    for modes in [(0, 0), (1, -1), (1, 1)]:
        for s in (-1, 0, 1):
            assert alg.serre_image(1, 2, modes, s).is_zero()
    balg = ShuffleAlgebra(B2)
    assert balg.serre_image(2, 1, (0, 1, 0), 1).is_zero()
    assert balg.serre_image(1, 2, (0, 1), 0).is_zero()


def test_serre_argument_validation():
    alg = ShuffleAlgebra(A2)
    with pytest.raises(ValueError):
        alg.serre_image(1, 1, (0, 0), 0)
    with pytest.raises(ValueError):
        alg.serre_image(1, 2, (0, 0, 0), 0)


def test_serre_needs_the_q_binomial():
    # dropping the q-stretch of the middle coefficient breaks the relation:
    # reconstruct the r-sum with plain binomial coefficients instead
    alg = ShuffleAlgebra(A2)
    acc = MultiLaurent.zero()
    from itertools import permutations
    from math import comb

    modes = (1, -1)
    for r in range(3):
        coeff = RatQ.coerce((-1) ** r * comb(2, r))
        for perm in permutations(modes):
            word = [(1, x) for x in perm[:r]] + [(2, 0)] + [(1, x) for x in perm[r:]]
            acc = acc + alg.word_image(word).numerator.scale(coeff)
    assert not acc.is_zero()


def test_closure_and_twisted_symmetry_random_words():
    rng = random.Random(20240817)
    for cartan in (A2, B2):
        alg = ShuffleAlgebra(cartan)
        for _ in range(12):
            word = random_word(rng, cartan.rank, rng.randrange(1, 5))
            el = alg.word_image(word)
            assert alg.twisted_symmetry_check(el), format_word(word)
            for c in range(1, cartan.rank + 1):
                assert el.numerator.is_symmetric(c)


def test_product_matches_rational_oracle_random():
    rng = random.Random(411)
    alg = ShuffleAlgebra(A2)
    for _ in range(6):
        f = alg.word_image(random_word(rng, 2, rng.randrange(1, 3)))
        g = alg.word_image(random_word(rng, 2, rng.randrange(1, 3)))
        assert alg.to_rational(alg.mul(f, g)) == alg.mul_oracle_rational(f, g)


def test_oracle_mode_checks_every_product():
    alg = ShuffleAlgebra(A2, oracle=True)
    alg.word_image(parse_word("a1:1 a2:0 a1:-1"))
    assert alg.oracle_checks == 3


def test_associativity_samples():
    rng = random.Random(2718)
    for cartan in (builtin_cartan("A1"), A2, B2):
        alg = ShuffleAlgebra(cartan)
        for _ in range(4):
            a = alg.word_image(random_word(rng, cartan.rank, rng.randrange(1, 3)))
            b = alg.word_image(random_word(rng, cartan.rank, 1))
            c = alg.word_image(random_word(rng, cartan.rank, rng.randrange(1, 3)))
            assert alg.mul(alg.mul(a, b), c) == alg.mul(a, alg.mul(b, c))


def test_twisted_symmetry_rejects_asymmetric_numerator():
    alg = ShuffleAlgebra(A2)
    bad = ShuffleElement.raw(A2, (2, 0), MultiLaurent.var_power(zvar(1, 1), 1))
    assert not alg.twisted_symmetry_check(bad)


def test_element_validation():
    with pytest.raises(ValueError):
        ShuffleElement(A2, (1, 0, 0), MultiLaurent.constant(1))
    with pytest.raises(ValueError):
        ShuffleElement(A2, (1, 0), MultiLaurent.var_power(zvar(2, 1), 1))
    with pytest.raises(ValueError):
        ShuffleElement(A2, (2, 0), MultiLaurent.var_power(zvar(1, 1), 1))
    # zero-exponent stray registry entries are harmlessly dropped
    padded = MultiLaurent.constant(1, [zvar(1, 1), aux_var("t")])
    el = ShuffleElement(A2, (1, 0), padded)
    assert el.variables() == (zvar(1, 1),)


def test_mul_rejects_foreign_cartan():
    alg = ShuffleAlgebra(A2)
    other = ShuffleAlgebra(B2)
    with pytest.raises(ValueError):
        alg.mul(alg.generator(1, 0), other.generator(1, 0))


def test_word_parsing():
    assert parse_word("a1:0 a2:-1 a1:3") == [(1, 0), (2, -1), (1, 3)]
    assert format_word([(1, 0), (2, -1)]) == "a1:0 a2:-1"
    assert parse_word(format_word([(3, -2), (1, 5)])) == [(3, -2), (1, 5)]
    for bad in ("b1:0", "a1", "a0:1", "a1:x", "a:3"):
        with pytest.raises(ValueError):
            parse_word(bad)
