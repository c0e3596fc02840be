from fractions import Fraction

import pytest

from jacobi_diagrams.combination import Combination, parse_combination, serialize_combination
from jacobi_diagrams.diagram import CIRCLE, INTERVAL, DiagramSyntaxError, Support, chord_diagram, enumerate_diagrams

S1 = Support((CIRCLE,))
I1 = Support((INTERVAL,))


def sample(sup, n):
    return Combination(sup, {sc.encoding: Fraction(i + 1, 3) * (-1) ** i for i, sc in enumerate(enumerate_diagrams(sup, n))})


def test_zero_terms_dropped_and_support_checked():
    x = sample(I1, 2)
    assert not (x - x)
    with pytest.raises(ValueError):
        x + sample(S1, 2)


def test_denominator_and_parts():
    x = sample(I1, 2) + Combination.one(I1) * Fraction(1, 7)
    assert x.degrees() == [0, 2]
    assert x.part(0).denominator() == 7
    assert x.truncate(1) == x.part(0)


@pytest.mark.parametrize("sup", [I1, S1, Support((INTERVAL, INTERVAL), ("x",))])
def test_text_round_trip(sup):
    x = sample(sup, 2) + sample(sup, 1)
    assert parse_combination(serialize_combination(x)) == x


def test_zero_serializes_as_comment_and_parses_back():
    text = serialize_combination(Combination(S1))
    assert text.startswith("#")
    assert parse_combination(text) == Combination(S1)
    assert not parse_combination(text, support=S1)


def test_bare_diagram_has_coefficient_one():
    d = chord_diagram(I1, [((0, 0), (0, 1))])
    text = "support: I\ncolors: []\nv0: U M 0 0\nv1: U M 0 1\ne: (v0.0, v1.0)\n"
    assert parse_combination(text) == Combination.of(d)


def test_bad_coefficient_line():
    with pytest.raises(DiagramSyntaxError) as err:
        parse_combination("coeff: 1/x\nsupport: I\n")
    assert err.value.line == 1


def test_mixed_supports_rejected():
    text = serialize_combination(sample(I1, 1)) + "\n" + serialize_combination(sample(S1, 1))
    with pytest.raises(ValueError):
        parse_combination(text)
