import random
from fractions import Fraction

import pytest

from jacobi_diagrams.combination import Combination
from jacobi_diagrams.diagram import CIRCLE, INTERVAL, Support, chord_diagram, enumerate_diagrams
from jacobi_diagrams.morphisms import close_interval, leg_swap, pbw_symmetrize, stack_product
from jacobi_diagrams.quotients import is_zero_class, quotient_basis
from jacobi_diagrams.series import (
    TWO_LEG_SUPPORT,
    GradedSeries,
    Poly,
    TwoLeg,
    TwoLegSeries,
    anomaly_identity,
    crossing_from_anomaly,
    exp_series,
    framing_twist,
    induction_coefficients,
    invert_anomaly,
    is_symmetric,
    parity_involution,
    psi_apply,
    random_loci,
    series_calculus,
    strut,
    two_leg_glue,
    two_leg_part,
)
from jacobi_diagrams.suites import random_two_leg_series

S1 = Support((CIRCLE,))
I1 = Support((INTERVAL,))
I2 = Support((INTERVAL, INTERVAL))
B1 = Support((), ("x",))
LEGS = {"v1": 1, "v2": 1}
CHORD = Combination.of(chord_diagram(I1, [((0, 0), (0, 1))]))


def random_on(rng, sup, top, lowest=1):
    pool = [sc for n in range(lowest, top + 1) for sc in enumerate_diagrams(sup, n)]
    return Combination(sup, {sc.encoding: rng.randint(-2, 2) for sc in rng.sample(pool, min(4, len(pool)))})


def two_leg_basis(s):
    q = quotient_basis(TWO_LEG_SUPPORT, s + 1, color_legs=LEGS)
    return [Combination(TWO_LEG_SUPPORT, {b: 1}) for b in q.basis]


# -- series calculus ------------------------------------------------------


def test_inverse_and_sqrt_of_one_plus_chord():
    c2 = stack_product(CHORD, CHORD)
    x = GradedSeries.of(Combination.one(I1) + CHORD, 2)
    assert series_calculus(x, "inverse").value == Combination.one(I1) - CHORD + c2
    assert series_calculus(x, "sqrt").value == Combination.one(I1) + CHORD / 2 - c2 / 8


@pytest.mark.parametrize("seed", range(5))
def test_exp_log_round_trip(seed):
    rng = random.Random(seed)
    a = GradedSeries.of(random_on(rng, I1, 2), 4)
    e = exp_series(a)
    assert (e * exp_series(-a)).value == Combination.one(I1)
    assert series_calculus(e, "log").value == a.value
    r = series_calculus(e, "sqrt")
    assert (r * r).value == e.value


def test_calculus_preconditions():
    with pytest.raises(ValueError):
        exp_series(GradedSeries.one(I1, 2))
    with pytest.raises(ValueError):
        series_calculus(GradedSeries.of(CHORD, 2), "log")
    with pytest.raises(ValueError):
        series_calculus(GradedSeries.one(I1, 2), "cosh")


def test_parity_involution():
    rng = random.Random(4)
    x = GradedSeries.of(random_on(rng, S1, 3, lowest=0), 3)
    y = parity_involution(x)
    assert y.part(3) == -x.part(3) and y.part(2) == x.part(2)
    assert parity_involution(y).value == x.value


def test_framing_twist():
    rng = random.Random(2)
    x = GradedSeries.of(random_on(rng, S1, 2, lowest=0), 3)
    a = GradedSeries.of(CHORD, 3)
    assert framing_twist(x, 0, 0, a).value == x.value
    back = framing_twist(framing_twist(x, 0, Fraction(1, 3), a), 0, Fraction(-1, 3), a)
    assert is_zero_class(back.value - x.value)
    x1 = GradedSeries.of(Combination.one(S1), 1)
    assert framing_twist(x1, 0, 5, a).value == Combination.one(S1) + close_interval(CHORD) * 5


# -- crossing element -----------------------------------------------------


def test_crossing_from_anomaly():
    assert crossing_from_anomaly(GradedSeries.zero(I1, 3)).value == Combination.one(I2)
    half = GradedSeries.of(CHORD / 2, 3)
    a12 = Combination.of(chord_diagram(I2, [((0, 0), (1, 0))]))
    x1 = crossing_from_anomaly(half, 1).value
    assert x1 == Combination.one(I2) + a12 / 2
    doubled = crossing_from_anomaly(half.scale(2), 2).value
    assert doubled != crossing_from_anomaly(half, 2).value * 2


def test_crossing_terms_commute():
    from jacobi_diagrams.morphisms import duplicate_component, tensor_product

    a = GradedSeries.of(CHORD / 2 + random_on(random.Random(1), I1, 3, lowest=2), 3)
    left = duplicate_component(a.value, 0, 2)
    right = tensor_product(a.value, Combination.one(I1)) + tensor_product(Combination.one(I1), a.value)
    comm = stack_product(left, right) - stack_product(right, left)
    assert is_zero_class(comm.truncate(3))


# -- two-leg gluing ---------------------------------------------------------


def test_strut_is_the_gluing_unit():
    for s in (1, 2):
        for x in two_leg_basis(s):
            assert two_leg_glue(strut(), x) == x == two_leg_glue(x, strut())


@pytest.mark.parametrize("seed", range(6))
def test_gluing_commutes_on_classes(seed):
    rng = random.Random(seed)
    s, t = rng.randint(1, 2), rng.randint(1, 2)
    x = sum((b * rng.randint(-2, 2) for b in two_leg_basis(s)), Combination(TWO_LEG_SUPPORT))
    y = sum((b * rng.randint(-2, 2) for b in two_leg_basis(t)), Combination(TWO_LEG_SUPPORT))
    assert is_zero_class(two_leg_glue(x, y) - two_leg_glue(y, x))


# -- anomaly inversion ------------------------------------------------------


def test_inversion_with_vanishing_a2():
    B = invert_anomaly(TwoLegSeries.symbolic_anomaly(6, vanishing=[2]))
    assert B.part(2) == Poly.zero()
    assert B.part(4) == -Poly.gen("A4")
    assert B.part(6) == -Poly.gen("A6")


def test_generic_inversion():
    A = TwoLegSeries.symbolic_anomaly(6)
    B = invert_anomaly(A)
    a2, a4 = Poly.gen("A2"), Poly.gen("A4")
    assert B.part(2) == -a2
    # degree 4: A4 + 3 A2 B2 + B4 = 0, the 3 being the n = 2 recursion coefficient
    c = induction_coefficients(2)
    assert c == {"B2n-2*A2": 3, "B2n-4*A2^2": 0, "B2n-4*A4": 1}
    assert B.part(4) == a2 * a2 * 3 - a4
    assert anomaly_identity(A, B).is_one()


def test_inversion_rejects_bad_input():
    with pytest.raises(ValueError):
        invert_anomaly(TwoLegSeries({0: Poly.one(), 1: Poly.gen("A1")}, 2, Poly))
    with pytest.raises(ValueError):
        invert_anomaly(TwoLegSeries({0: Poly.one() * 2}, 2, Poly))


def test_diagram_valued_inversion():
    rng = random.Random(0)
    parts = {0: TwoLeg.one(), 2: TwoLeg(sum((b * rng.randint(1, 3) for b in two_leg_basis(2)), Combination(TWO_LEG_SUPPORT)))}
    A = TwoLegSeries(parts, 4)
    assert anomaly_identity(A, invert_anomaly(A)).is_one()


# -- Psi ----------------------------------------------------------------------


def test_psi_of_unit_and_scalar():
    one = TwoLegSeries({0: TwoLeg.one()}, 4)
    for n in range(4):
        for b in quotient_basis(S1, n).basis:
            x = Combination(S1, {b: 1})
            assert psi_apply(one, x, 4) == x
            assert is_zero_class(psi_apply(one.scale(Fraction(1, 2)), x, 4) - x * Fraction(1, 2**n))
    # twice the half chord is the chord: 2 * (1/2) strut is the unit
    half = TwoLegSeries({0: TwoLeg.one() * Fraction(1, 2)}, 3)
    assert psi_apply(half.scale(2), Combination(S1, {quotient_basis(S1, 3).basis[0]: 1}), 3) == Combination(
        S1, {quotient_basis(S1, 3).basis[0]: 1}
    )


@pytest.mark.parametrize("seed", range(6))
def test_psi_insertion_locus_on_degree_three(seed):
    rng = random.Random(seed)
    x = random_on(rng, S1, 3, lowest=3)
    beta = random_two_leg_series(rng, 1)
    assert is_zero_class(psi_apply(beta, x, 4) - psi_apply(beta, x, 4, loci=random_loci(rng)))


@pytest.mark.parametrize("seed", range(6))
def test_psi_multiplicative(seed):
    rng = random.Random(seed)
    x, y = random_on(rng, I1, 2), random_on(rng, I1, 1)
    beta = random_two_leg_series(rng, 1)
    lhs = psi_apply(beta, stack_product(x, y), 3)
    rhs = stack_product(psi_apply(beta, x, 3), psi_apply(beta, y, 3)).truncate(3)
    assert is_zero_class(lhs - rhs)


@pytest.mark.parametrize("seed", range(6))
def test_psi_commutes_with_chi(seed):
    rng = random.Random(seed)
    b = random_on(rng, B1, 2)
    beta = random_two_leg_series(rng, 1)
    lhs = psi_apply(beta, pbw_symmetrize(b), 3)
    rhs = pbw_symmetrize(psi_apply(beta, b, 3))
    assert is_zero_class(lhs - rhs)


def test_two_leg_part_of_circle_element():
    x = close_interval(CHORD) * 2
    beta = two_leg_part(x, 2)
    assert beta.part(0) == TwoLeg.one() * 2
    assert is_symmetric(beta)
    for b in two_leg_basis(2):
        assert is_zero_class(leg_swap(b) - b)
