import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_diagrams.diagram import (
    CIRCLE,
    INTERVAL,
    Diagram,
    DiagramError,
    DiagramSyntaxError,
    EnumerationCapError,
    Support,
    canonicalize,
    chord_diagram,
    check,
    decode,
    enumerate_diagrams,
    parse_diagram,
    serialize_diagram,
    validate,
)

S1 = Support((CIRCLE,))
I1 = Support((INTERVAL,))


def tripod(support=S1, reverse=False):
    order = (2, 1) if reverse else (1, 2)
    verts = (("T",), ("M", 0, 0), ("M", 0, 1), ("M", 0, 2))
    edges = (((0, 0), (1, 0)), ((0, order[0]), (2, 0)), ((0, order[1]), (3, 0)))
    return Diagram(support, verts, edges)


def tadpole():
    verts = (("M", 0, 0), ("T",))
    return Diagram(S1, verts, (((0, 0), (1, 0)), ((1, 1), (1, 2))))


# -- validation ------------------------------------------------------------


def test_empty_diagram_is_valid_on_any_support():
    for sup in (S1, I1, Support((INTERVAL, CIRCLE), ("x",)), Support()):
        assert validate(Diagram.empty(sup)) is None


def test_closed_dashed_component_rejected():
    theta = Diagram(I1, (("T",), ("T",)), (((0, 0), (1, 0)), ((0, 1), (1, 2)), ((0, 2), (1, 1))))
    assert "closed dashed component" in validate(theta)
    with pytest.raises(DiagramError):
        check(theta)


def test_chord_on_interval():
    d = chord_diagram(I1, [((0, 0), (0, 1))])
    assert d.n_legs == 2 and d.n_edges == 1 and d.degree == 1
    assert d.is_chord_diagram


@pytest.mark.parametrize(
    "verts, edges, fragment",
    [
        ((("M", 0, 0), ("M", 0, 2)), (((0, 0), (1, 0)),), "bad ranks"),
        ((("M", 0, 0), ("M", 0, 1)), (), "unpaired"),
        ((("M", 0, 0), ("X", "y")), (((0, 0), (1, 0)),), "bad color"),
        ((("M", 3, 0), ("M", 3, 1)), (((0, 0), (1, 0)),), "missing component"),
    ],
)
def test_validate_reports_the_violation(verts, edges, fragment):
    assert fragment in validate(Diagram(I1, verts, edges))


def test_unknown_component_rejected():
    with pytest.raises(DiagramError):
        Support(("R",))


# -- canonical form ----------------------------------------------------------


def test_chord_canonical_sign_is_positive():
    sc = canonicalize(chord_diagram(S1, [((0, 0), (0, 1))]))
    assert sc.sign == 1


def test_reversed_tripod_has_sign_minus_one():
    a, b = canonicalize(tripod()), canonicalize(tripod(reverse=True))
    assert a.encoding == b.encoding
    assert a.sign * b.sign == -1


def test_tadpole_is_zero():
    assert canonicalize(tadpole()).is_zero


def test_circle_rotation_is_invisible_but_interval_order_is_not():
    crossing = [((0, 0), (0, 2)), ((0, 1), (0, 3))]
    rotated = [((0, 1), (0, 3)), ((0, 2), (0, 0))]
    assert canonicalize(chord_diagram(S1, crossing)).encoding == canonicalize(chord_diagram(S1, rotated)).encoding
    nested = [((0, 0), (0, 3)), ((0, 1), (0, 2))]
    parallel = [((0, 0), (0, 1)), ((0, 2), (0, 3))]
    assert canonicalize(chord_diagram(S1, nested)).encoding == canonicalize(chord_diagram(S1, parallel)).encoding
    assert canonicalize(chord_diagram(I1, nested)).encoding != canonicalize(chord_diagram(I1, parallel)).encoding


def _relabel(d: Diagram, rng: random.Random) -> tuple[Diagram, int]:
    """Random vertex renumbering, slot permutations and circle rotations.

    Returns the new diagram and the AS sign it picks up.
    """
    n = len(d.vertices)
    perm = list(range(n))
    rng.shuffle(perm)
    slot_perm, sign = {}, 1
    for v, vert in enumerate(d.vertices):
        if vert[0] == "T":
            p = [0, 1, 2]
            rng.shuffle(p)
            inversions = sum(p[i] > p[j] for i in range(3) for j in range(i + 1, 3))
            sign *= -1 if inversions % 2 else 1
            slot_perm[v] = p
    shift = {}
    for c, kind in enumerate(d.support.components):
        k = len(d.legs_on(c))
        shift[c] = rng.randrange(k) if kind == CIRCLE and k else 0
    verts = [None] * n
    for v, vert in enumerate(d.vertices):
        if vert[0] == "M":
            k = len(d.legs_on(vert[1]))
            vert = ("M", vert[1], (vert[2] + shift[vert[1]]) % k)
        verts[perm[v]] = vert

    def move(slot):
        v, s = slot
        return (perm[v], slot_perm[v][s] if v in slot_perm else s)

    edges = tuple((move(a), move(b)) for a, b in d.edges)
    return Diagram(d.support, tuple(verts), edges), sign


POOL = [
    sc.diagram
    for sup in (S1, I1, Support((INTERVAL, CIRCLE)), Support((INTERVAL,), ("x", "y")))
    for n in range(4)
    for sc in enumerate_diagrams(sup, n)
]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, len(POOL) - 1), st.randoms(use_true_random=False))
def test_canonicalize_invariant_under_relabeling(index, rng):
    d = POOL[index]
    g, sign = _relabel(d, rng)
    assert validate(g) is None
    a, b = canonicalize(d), canonicalize(g)
    assert a.encoding == b.encoding
    assert b.sign == a.sign * sign


@settings(max_examples=60, deadline=None)
@given(st.integers(0, len(POOL) - 1))
def test_canonicalize_idempotent(index):
    sc = canonicalize(POOL[index])
    again = canonicalize(decode(sc.support, sc.encoding))
    assert again.encoding == sc.encoding and again.sign == 1


@pytest.mark.parametrize("d", POOL[:80])
def test_vertex_edge_count_identities(d):
    n, t, u, e = d.degree, d.n_trivalent, d.n_legs, d.n_edges
    assert t + u == 2 * n
    assert e + u == 3 * n


# -- enumeration -------------------------------------------------------------


def test_enumerate_small_circle_counts():
    assert [sc.diagram for sc in enumerate_diagrams(S1, 0)] == [Diagram.empty(S1)]
    one = enumerate_diagrams(S1, 1)
    assert len(one) == 1 and one[0].diagram.is_chord_diagram
    assert len(enumerate_diagrams(S1, 2, chord_only=True)) == 2


def test_enumeration_is_stable_on_rerun():
    first = [sc.encoding for sc in enumerate_diagrams(I1, 3)]
    assert first == [sc.encoding for sc in enumerate_diagrams(I1, 3)]
    assert first == sorted(first)


def test_enumeration_cap():
    with pytest.raises(EnumerationCapError):
        enumerate_diagrams(S1, 7)
    with pytest.raises(ValueError):
        enumerate_diagrams(S1, -1)


def test_enumerate_filters():
    assert all(sc.diagram.n_legs == 2 for sc in enumerate_diagrams(Support((), ("x",)), 3, legs=2))
    assert all(sc.diagram.is_connected() for sc in enumerate_diagrams(I1, 3, connected=True))
    two_leg = enumerate_diagrams(Support((), ("v1", "v2")), 2, color_legs={"v1": 1, "v2": 1})
    assert two_leg and all(len(sc.diagram.color_legs("v1")) == 1 for sc in two_leg)


# -- text format -------------------------------------------------------------

CHORD_TEXT = """\
support: I
colors: []
v0: U M 0 0
v1: U M 0 1
e: (v0.0, v1.0)
"""


def test_parse_chord_text():
    d = parse_diagram(CHORD_TEXT)
    assert d.n_legs == 2 and d.n_edges == 1
    assert canonicalize(d).encoding == canonicalize(chord_diagram(I1, [((0, 0), (0, 1))])).encoding


@pytest.mark.parametrize("sc", enumerate_diagrams(Support((INTERVAL, CIRCLE), ("x",)), 2), ids=lambda sc: sc.encoding.hex())
def test_round_trip_degree_two(sc):
    d = sc.diagram
    back = parse_diagram(serialize_diagram(d))
    assert back == d
    assert canonicalize(back).encoding == sc.encoding


@pytest.mark.parametrize(
    "text, line",
    [
        ("support: I\nv0: U M 0 0\nv1: U M 0 1\ne: (v0.0 v1.0)\n", 4),
        ("support: Q\n", 1),
        ("support: I\nv0: U M 0 0\nv0: U M 0 1\n", 3),
        ("support: I\nwhat: 3\n", 2),
        ("support: I\ncolors: x\n", 2),
    ],
)
def test_syntax_errors_carry_position(text, line):
    with pytest.raises(DiagramSyntaxError) as err:
        parse_diagram(text)
    assert err.value.line == line


def test_semantic_error_from_text():
    with pytest.raises(DiagramError):
        parse_diagram("support: I\nv0: U M 0 0\nv1: U M 0 1\ne: (v0.0, v0.0)\n")
