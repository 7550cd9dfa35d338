import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from curtis.coeffring import (
    Cyc,
    ConductorError,
    EllLocalError,
    ResidueField,
    cyclotomic_poly,
    ell_local_inv,
    euler_phi,
    is_ell_local,
    kth_roots,
    root_of_unity_order,
)


def test_cyclotomic_polys():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    assert len(cyclotomic_poly(72)) == euler_phi(72) + 1


def test_zeta3_relation():
    z = Cyc.zeta(3)
    assert (z + z ** 2 + 1).is_zero()


def test_zeta6_identity():
    # zeta_6 = -zeta_3^2 after embedding at conductor 6
    assert Cyc.zeta(6) == -(Cyc.zeta(3) ** 2)


def test_mixed_conductor_arithmetic():
    a = Cyc.zeta(4)
    b = Cyc.zeta(3)
    c = a * b
    assert c.conductor == 12
    assert c == Cyc.zeta(12, 3 + 4)


def test_inverse_and_division():
    z = Cyc.zeta(5)
    x = z + 2
    assert (x * x.inv()) == Cyc.one()
    with pytest.raises(ZeroDivisionError):
        Cyc.zero(5).inv()


def test_rational_detection():
    assert (Cyc.zeta(3) + Cyc.zeta(3) ** 2).as_rational() == Fraction(-1)
    assert Cyc.zeta(3).as_rational() is None


def test_min_key_across_conductors():
    a = Cyc.zeta(3).embed(12)
    b = Cyc.zeta(3).embed(6)
    assert a == b
    assert a.min_key() == b.min_key()
    assert hash(a) == hash(b)
    assert Cyc.integer(5, 12).min_key() == Cyc.integer(5, 1).min_key()


def test_root_of_unity_order():
    assert root_of_unity_order(Cyc.one()) == 1
    assert root_of_unity_order(-Cyc.one()) == 2
    assert root_of_unity_order(Cyc.zeta(9)) == 9
    assert root_of_unity_order(Cyc.zeta(9) ** 3) == 3
    assert root_of_unity_order(Cyc.zeta(5) + 1) is None


def test_root_of_unity_constructor():
    assert Cyc.root_of_unity(3, 1, 12) == Cyc.zeta(12, 4)
    assert Cyc.root_of_unity(2, 1, 9) == -Cyc.one(9)
    # zeta_6 inside Q(zeta_9): 6 = 2*3 with 3 | 9
    v = Cyc.root_of_unity(6, 1, 9)
    assert v ** 6 == Cyc.one() and not v ** 3 == Cyc.one() and not v ** 2 == Cyc.one()


def test_kth_roots_of_one():
    roots = kth_roots(Cyc.one(12), 2)
    assert sorted(r.min_key() for r in roots) == sorted(
        [Cyc.one().min_key(), (-Cyc.one()).min_key()]
    )


def test_kth_roots_of_zeta3():
    roots = kth_roots(Cyc.zeta(3).embed(9), 3)
    expected = {(Cyc.zeta(9) * Cyc.zeta(3).embed(9) ** i).min_key() for i in range(3)}
    assert {r.min_key() for r in roots} == expected


def test_kth_roots_of_minus_one():
    roots = kth_roots(-Cyc.one(4), 2)
    z4 = Cyc.zeta(4)
    assert {r.min_key() for r in roots} == {z4.min_key(), (-z4).min_key()}


def test_kth_roots_conductor_error():
    with pytest.raises(ConductorError) as exc:
        kth_roots(Cyc.zeta(3), 3)
    assert exc.value.minimal_conductor == 9


def test_ell_local():
    half = Cyc.rational(Fraction(1, 2))
    assert is_ell_local(half, 3)
    assert not is_ell_local(Cyc.rational(Fraction(1, 3)), 3)
    inv2 = ell_local_inv(Cyc.integer(2), 3)
    assert inv2 == half
    with pytest.raises(EllLocalError):
        ell_local_inv(Cyc.integer(3), 3)


def test_residue_field_examples():
    r3 = ResidueField(3, 12)
    assert r3.reduce(Cyc.integer(3, 12)) == r3.zero()
    # 1/2 -> 2 in F_3
    assert r3.reduce(Cyc.rational(Fraction(1, 2), 12)) == r3.from_int(2)
    # conductor 4 part: factor is x^2 + 1 over F_3, zeta_4 -> class of x
    assert r3.factor == (1, 0, 1)
    assert r3.reduce(Cyc.zeta(4).embed(12)) == (0, 1)
    # ell-power roots of unity die
    r9 = ResidueField(3, 9)
    assert r9.reduce(Cyc.zeta(9)) == r9.one()


def test_residue_field_is_ring_hom():
    rng = random.Random(7)
    rf = ResidueField(3, 12)

    def rand_elem():
        num = [rng.randrange(-6, 7) for _ in range(euler_phi(12))]
        den = rng.choice([1, 2, 4, 5, 7])
        return Cyc(12, num, den)

    for _ in range(1000):
        a, b = rand_elem(), rand_elem()
        assert rf.reduce(a + b) == rf.add(rf.reduce(a), rf.reduce(b))
        assert rf.reduce(a * b) == rf.mul(rf.reduce(a), rf.reduce(b))


small_elems = st.builds(
    lambda num, den: Cyc(6, num, den),
    st.lists(st.integers(-5, 5), min_size=2, max_size=2),
    st.integers(1, 6),
)


@settings(max_examples=80, deadline=None)
@given(small_elems, small_elems)
def test_embed_commutes_with_arithmetic(a, b):
    big = 24
    assert (a + b).embed(big) == a.embed(big) + b.embed(big)
    assert (a * b).embed(big) == a.embed(big) * b.embed(big)


@settings(max_examples=60, deadline=None)
@given(small_elems)
def test_embedding_chains_commute(a):
    assert a.embed(12).embed(24) == a.embed(24)


@settings(max_examples=60, deadline=None)
@given(small_elems, small_elems, small_elems)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a + (b + c) == (a + b) + c
