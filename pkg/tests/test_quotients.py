import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_diagrams.combination import Combination
from jacobi_diagrams.diagram import (
    CIRCLE,
    INTERVAL,
    Diagram,
    DiagramError,
    Support,
    canonicalize,
    enumerate_diagrams,
)
from jacobi_diagrams.quotients import (
    FOUR_T,
    IHX,
    SLIDE,
    STU,
    SlideSpec,
    chordify,
    generate_relations,
    is_zero_class,
    quotient_basis,
    random_slide,
    reduce_class,
    slide_relation,
    stu_expansion,
)

S1 = Support((CIRCLE,))
I1 = Support((INTERVAL,))

# dimensions of the circle quotient, computed by the oracle and pinned here
CIRCLE_DIMS = [1, 1, 2, 3, 6]


def tripod_s1():
    verts = (("T",), ("M", 0, 0), ("M", 0, 1), ("M", 0, 2))
    return Diagram(S1, verts, (((0, 0), (1, 0)), ((0, 1), (2, 0)), ((0, 2), (3, 0))))


@pytest.mark.parametrize("n", range(5))
def test_circle_dimensions_by_both_routes(n):
    full = quotient_basis(S1, n, method="full")
    chord = quotient_basis(S1, n, method="chord")
    assert full.dim == chord.dim == CIRCLE_DIMS[n]
    assert full.basis == chord.basis


def test_interval_and_circle_agree():
    assert [quotient_basis(I1, n).dim for n in range(4)] == CIRCLE_DIMS[:4]


def test_stu_at_tripod_has_three_terms():
    d = tripod_s1()
    rels = generate_relations(STU, S1, 1) + [Combination.of(d) - stu_expansion(d, 0, 0)]
    rel = rels[-1]
    assert len(rel) in (2, 3)
    assert all(x.is_chord_diagram or x == canonicalize(d).diagram for x, _ in rel.items())
    q = quotient_basis(S1, 2, method="full")
    lifted = [r for r in generate_relations(STU, S1, 2)]
    assert lifted and all(q.is_zero(r) for r in lifted)


@pytest.mark.parametrize("sup", [S1, I1, Support((INTERVAL, INTERVAL))])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_every_relation_reduces_to_zero(sup, n):
    q = quotient_basis(sup, n, method="full")
    for kind in (STU, IHX, FOUR_T):
        for rel in generate_relations(kind, sup, n):
            assert q.is_zero(rel)


def test_four_t_cuts_down_chord_diagrams_at_degree_three():
    chords = enumerate_diagrams(S1, 3, chord_only=True)
    rels = generate_relations(FOUR_T, S1, 3)
    assert any(len(r) >= 2 for r in rels)
    assert quotient_basis(S1, 3, method="chord").dim < len(chords)


def test_basis_reduces_to_unit_vectors():
    q = quotient_basis(S1, 3)
    for i, b in enumerate(q.basis):
        vec = reduce_class(Combination(S1, {b: 1}), q)
        assert vec == tuple(Fraction(int(i == j)) for j in range(q.dim))


def test_reduce_rejects_wrong_degree_and_support():
    q = quotient_basis(S1, 2)
    with pytest.raises(ValueError):
        q.coordinates(Combination.one(S1))
    with pytest.raises(ValueError):
        q.coordinates(Combination.one(I1))
    with pytest.raises(ValueError):
        quotient_basis(Support((), ("x",)), 2, method="chord")


POOL3 = [sc for n in (1, 2, 3) for sc in enumerate_diagrams(S1, n)]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, len(POOL3) - 1), st.integers(0, len(POOL3) - 1), st.integers(-5, 5), st.integers(-5, 5))
def test_reduction_is_linear(i, j, a, b):
    x, y = POOL3[i], POOL3[j]
    if x.encoding[0] + x.encoding[1] != y.encoding[0] + y.encoding[1]:
        y = x
    n = (x.encoding[0] + x.encoding[1]) // 2
    q = quotient_basis(S1, n, method="full")
    X, Y = Combination(S1, {x.encoding: 1}), Combination(S1, {y.encoding: 1})
    lhs = reduce_class(X * a + Y * b, q)
    rhs = tuple(a * u + b * v for u, v in zip(reduce_class(X, q), reduce_class(Y, q)))
    assert lhs == rhs


@pytest.mark.parametrize("sc", POOL3, ids=lambda sc: sc.encoding.hex())
def test_chordify_integral_and_class_preserving(sc):
    x = Combination(S1, {sc.encoding: 1})
    c = chordify(x)
    assert all(d.is_chord_diagram for d, _ in c.items())
    assert c.denominator() == 1
    q = quotient_basis(S1, sc.diagram.degree, method="full")
    assert q.coordinates(c) == q.coordinates(x)


def test_chordify_fixes_chord_diagrams_and_rejects_colors():
    for sc in enumerate_diagrams(S1, 2, chord_only=True):
        x = Combination(S1, {sc.encoding: 1})
        assert chordify(x) == x
    with pytest.raises(DiagramError):
        chordify(Combination.one(Support((), ("x",))))


def test_chordify_both_stu_orders_agree():
    # degree 2 tripod with an extra chord: expand at each leg in turn
    q = quotient_basis(S1, 2, method="full")
    for sc in enumerate_diagrams(S1, 2):
        d = sc.diagram
        if d.n_trivalent != 1:
            continue
        w = next(i for i, v in enumerate(d.vertices) if v[0] == "T")
        images = [chordify(stu_expansion(d, w, s)) for s in range(3) if d.vertices[d.partner[(w, s)][0]][0] == "M"]
        assert len(images) >= 2
        assert all(q.coordinates(im) == q.coordinates(images[0]) for im in images)


@pytest.mark.parametrize("seed", range(10))
def test_random_slides_vanish(seed):
    rng = random.Random(seed)
    for sup in (S1, I1, Support((INTERVAL, CIRCLE)), Support((INTERVAL,), ("x",))):
        spec = random_slide(rng, sup, rng.randint(2, 3))
        assert is_zero_class(slide_relation(spec))


def test_slide_sign_flip_is_detected():
    rng = random.Random(3)
    caught = 0
    for _ in range(30):
        rel = slide_relation(random_slide(rng, S1, 2))
        if len(rel) < 2:
            continue
        k = next(iter(rel))[0]
        mutated = rel - Combination(S1, {k: rel.terms[k] * 2})
        caught += not is_zero_class(mutated)
    assert caught > 0


def test_slide_across_two_arcs():
    # chord from leg 0 to leg 1 on an interval, slide the far end of a second chord
    # around the region holding leg 1: two arcs leave it, giving two skeleton terms
    verts = (("M", 0, 0), ("M", 0, 1), ("M", 0, 2), ("M", 0, 3))
    d = Diagram(I1, verts, (((0, 0), (2, 0)), ((1, 0), (3, 0))))
    rel = generate_relations(SLIDE, I1, 2, SlideSpec(d, 3, 0, frozenset({2})))[0]
    assert rel
    assert is_zero_class(rel)


def test_slide_rejects_inconsistent_specs():
    verts = (("M", 0, 0), ("X", "x"))
    d = Diagram(Support((INTERVAL,), ("x",)), verts, (((0, 0), (1, 0)),))
    with pytest.raises(DiagramError):
        slide_relation(SlideSpec(d, 1, 0, frozenset({0})))
    with pytest.raises(DiagramError):
        slide_relation(SlideSpec(d, 0, 0, frozenset({1})))
    with pytest.raises(ValueError):
        generate_relations(SLIDE, I1, 1)
