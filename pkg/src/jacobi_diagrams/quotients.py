"""Relations among diagrams and the quotient spaces they define."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .combination import Combination, degree_of
from .diagram import (
    CIRCLE,
    Diagram,
    DiagramError,
    Draft,
    Support,
    canonicalize,
    decode,
    enumerate_diagrams,
)
from .linalg import Echelon

STU, IHX, FOUR_T, SLIDE = "STU", "IHX", "4T", "slide"

_BEFORE = Fraction(-1, 3)
_AFTER = Fraction(1, 3)


# ---------------------------------------------------------------------------
# local relations
# ---------------------------------------------------------------------------


def stu_expansion(d: Diagram, w: int, s0: int) -> Combination:
    """T - U: the two diagrams replacing trivalent ``w`` whose slot ``s0`` meets a skeleton leg.

    With slots (s0, s1, s2) in cyclic order, the leg reached through s2
    comes first along the skeleton in T and second in U.
    """
    leg, _ = d.partner[(w, s0)]
    comp, rank = d.vertices[leg][1], d.vertices[leg][2]
    s1, s2 = (s0 + 1) % 3, (s0 + 2) % 3
    terms = []
    for first, second, sign in ((s2, s1, 1), (s1, s2, -1)):
        dr = Draft.of(d)
        a = dr.unlink((w, first))
        b = dr.unlink((w, second))
        if a[0] == w or b[0] == w:
            return Combination(d.support)
        dr.remove(w)
        dr.remove(leg)
        x = dr.add(("M", comp, rank + _BEFORE))
        y = dr.add(("M", comp, rank + _AFTER))
        dr.link((x, 0), a)
        dr.link((y, 0), b)
        terms.append((dr.freeze(), sign))
    return Combination.from_terms(d.support, terms)


def stu_relations_of(d: Diagram) -> list[Combination]:
    out = []
    for w, v in enumerate(d.vertices):
        if v[0] != "T":
            continue
        for s in range(3):
            other = d.partner[(w, s)]
            if d.vertices[other[0]][0] == "M":
                out.append(Combination.of(d) - stu_expansion(d, w, s))
    return out


def ihx_relations_of(d: Diagram) -> list[Combination]:
    out = []
    for (u, i), (v, j) in d.edges:
        if u == v or d.vertices[u][0] != "T" or d.vertices[v][0] != "T":
            continue
        ports = {
            "A": (u, (i + 1) % 3),
            "B": (u, (i + 2) % 3),
            "C": (v, (j + 1) % 3),
            "D": (v, (j + 2) % 3),
        }
        terms = []
        for p, q, r in (("A", "B", "C"), ("B", "C", "A"), ("C", "A", "B")):
            dr = Draft.of(d)
            outer = {name: dr.partner[h] for name, h in ports.items()}
            dr.remove(u)
            dr.remove(v)
            x = dr.add(("T",))
            y = dr.add(("T",))
            dr.link((x, 2), (y, 0))
            new = {p: (x, 0), q: (x, 1), r: (y, 1), "D": (y, 2)}
            back = {h: name for name, h in ports.items()}
            for name, target in outer.items():
                if target in back:
                    if name < back[target]:
                        dr.link(new[name], new[back[target]])
                else:
                    dr.link(new[name], target)
            terms.append((dr.freeze(), 1))
        out.append(Combination.from_terms(d.support, terms))
    return out


def four_term_relations_of(d: Diagram) -> list[Combination]:
    """All 4T relations moving one chord end around another chord."""
    out = []
    if not d.is_chord_diagram:
        return out
    for (p, _), (q, _) in d.edges:
        for mv in range(len(d.vertices)):
            if mv in (p, q):
                continue
            terms = []
            for end in (p, q):
                for off, sign in ((_BEFORE, 1), (_AFTER, -1)):
                    dr = Draft.of(d)
                    other = dr.unlink((mv, 0))
                    dr.remove(mv)
                    c, r = d.vertices[end][1], d.vertices[end][2]
                    x = dr.add(("M", c, r + off))
                    dr.link((x, 0), other)
                    terms.append((dr.freeze(), sign))
            out.append(Combination.from_terms(d.support, terms))
    return out


# ---------------------------------------------------------------------------
# sliding an edge end around a region
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SlideSpec:
    """An edge end ``v`` of the dashed edge leaving ``v`` by ``beta_slot``,
    and the set ``inside`` of vertices enclosed by the annulus.

    ``v`` is either a skeleton leg or a trivalent vertex subdividing an arc.
    """

    diagram: Diagram
    v: int
    beta_slot: int
    inside: frozenset[int] = field(default_factory=frozenset)


def slide_relation(spec: SlideSpec) -> Combination:
    """Sum of the diagrams obtained by attaching the end of beta to every arc
    leaving the enclosed region, all on the same side."""
    d = spec.diagram
    v, inside = spec.v, set(spec.inside)
    kind = d.vertices[v][0]
    if kind == "X":
        raise DiagramError("slide: v must be a skeleton leg or a trivalent vertex")
    if kind == "M" and spec.beta_slot != 0:
        raise DiagramError("slide: a leg has a single slot")
    if v in inside:
        raise DiagramError("slide: v lies inside the region")
    for w in inside:
        if d.vertices[w][0] == "X":
            raise DiagramError("slide: the region contains a colored leg")
    dr = Draft.of(d)
    tail = dr.unlink((v, spec.beta_slot))
    if tail[0] == v:
        raise DiagramError("slide: beta is a loop")
    if tail[0] in inside:
        raise DiagramError("slide: beta starts inside the region")
    if kind == "T":
        a, b = [dr.unlink((v, s)) for s in range(3) if s != spec.beta_slot]
        if a[0] == v:
            raise DiagramError("slide: v carries a loop")
        dr.remove(v)
        dr.link(a, b)
    else:
        dr.remove(v)

    terms = []
    for a, b in sorted((a, b) for a, b in dr.partner.items()):
        if (a[0] in inside) and (b[0] not in inside):
            nd = dr.copy()
            nd.unlink(a)
            x = nd.add(("T",))
            nd.link((x, 0), tail)
            nd.link((x, 1), a)
            nd.link((x, 2), b)
            terms.append((nd.freeze(), 1))
    for c, kind_c in enumerate(d.support.components):
        legs = dr.legs_on(c)
        flags = [leg in inside for leg in legs]
        if not any(flags) or (kind_c == CIRCLE and all(flags)):
            continue
        k = len(legs)
        for idx in range(k):
            if not flags[idx]:
                continue
            prev_in = flags[idx - 1] if (idx > 0 or kind_c == CIRCLE) else False
            next_in = flags[(idx + 1) % k] if (idx < k - 1 or kind_c == CIRCLE) else False
            pos = dr.vertices[legs[idx]][2]
            # the skeleton enters the region before a run and leaves after it
            if not prev_in:
                terms.append((_with_leg(dr, c, pos + _BEFORE, tail), -1))
            if not next_in:
                terms.append((_with_leg(dr, c, pos + _AFTER, tail), 1))
    if not terms:
        raise DiagramError("slide: no arc leaves the region")
    return Combination.from_terms(d.support, terms)


def _with_leg(dr: Draft, comp: int, pos, tail) -> Diagram:
    nd = dr.copy()
    x = nd.add(("M", comp, pos))
    nd.link((x, 0), tail)
    return nd.freeze()


def random_slide(rng: random.Random, support: Support, degree: int) -> SlideSpec:
    """A random admissible slide configuration on a diagram of the given degree."""
    pool = enumerate_diagrams(support, degree)
    for _ in range(10_000):
        d = rng.choice(pool).diagram
        ends = [i for i, x in enumerate(d.vertices) if x[0] in ("M", "T")]
        if not ends:
            continue
        v = rng.choice(ends)
        slot = rng.randrange(3) if d.vertices[v][0] == "T" else 0
        tail = d.partner[(v, slot)][0]
        if tail == v:
            continue
        if d.vertices[v][0] == "T":
            others = [d.partner[(v, s)][0] for s in range(3) if s != slot]
            if v in others:
                continue
        cand = [i for i, x in enumerate(d.vertices) if i not in (v, tail) and x[0] != "X"]
        inside = frozenset(i for i in cand if rng.random() < 0.5)
        if not inside:
            continue
        spec = SlideSpec(d, v, slot, inside)
        try:
            slide_relation(spec)
        except DiagramError:
            continue
        return spec
    raise ValueError(f"no admissible slide found on {support} in degree {degree}")


def generate_relations(kind: str, support: Support, degree: int, slide_spec: SlideSpec | None = None) -> list[Combination]:
    """Every relation of one kind in the given degree (or the single slide relation)."""
    if kind == SLIDE:
        if slide_spec is None:
            raise ValueError("slide relations need a SlideSpec")
        return [slide_relation(slide_spec)]
    gen = {STU: stu_relations_of, IHX: ihx_relations_of, FOUR_T: four_term_relations_of}.get(kind)
    if gen is None:
        raise ValueError(f"unknown relation kind {kind!r}")
    chord_only = kind == FOUR_T
    out = []
    for sc in enumerate_diagrams(support, degree, chord_only=chord_only):
        out.extend(r for r in gen(sc.diagram) if r)
    return out


# ---------------------------------------------------------------------------
# STU expansion into chord diagrams
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _chordify_encoding(support: Support, enc: bytes) -> Combination:
    d = decode(support, enc)
    if d.n_trivalent == 0:
        return Combination(support, {enc: Fraction(1)})
    for leg in range(len(d.vertices)):
        if d.vertices[leg][0] != "M":
            continue
        w, s = d.partner[(leg, 0)]
        if d.vertices[w][0] == "T":
            break
    else:  # pragma: no cover - excluded by validity
        raise DiagramError("no trivalent vertex touches the skeleton")
    out: dict[bytes, Fraction] = {}
    for k, c in stu_expansion(d, w, s).terms.items():
        for kk, cc in _chordify_encoding(support, k).terms.items():
            out[kk] = out.get(kk, 0) + c * cc
    return Combination(support, out)


def chordify(x: Diagram | Combination) -> Combination:
    """Integral combination of chord diagrams equal to ``x`` modulo STU."""
    if isinstance(x, Diagram):
        x = Combination.of(x)
    if x.support.colors:
        raise DiagramError("chordify needs a support without colors")
    out: dict[bytes, Fraction] = {}
    for k, c in x.terms.items():
        for kk, cc in _chordify_encoding(x.support, k).terms.items():
            out[kk] = out.get(kk, 0) + c * cc
    return Combination(x.support, out)


# ---------------------------------------------------------------------------
# quotient spaces
# ---------------------------------------------------------------------------


@dataclass
class QuotientSpace:
    """Basis of a graded piece of a diagram space and the map onto it.

    ``reduction`` sends every spanning encoding (all nonzero diagrams for
    method ``"full"``, all chord diagrams for method ``"chord"``) to its
    coordinates on ``basis``.
    """

    support: Support
    degree: int
    method: str
    basis: list[bytes]
    reduction: dict[bytes, dict[bytes, Fraction]]
    color_legs: tuple[tuple[str, int], ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_diagrams(self) -> list[Diagram]:
        return [decode(self.support, b) for b in self.basis]

    def element(self, coords: dict[bytes, Fraction]) -> Combination:
        return Combination(self.support, dict(coords))

    def _reduce_encoding(self, enc: bytes) -> dict[bytes, Fraction]:
        red = self.reduction.get(enc)
        if red is not None:
            return red
        if self.method == "chord" and enc[0] > 0:
            out: dict[bytes, Fraction] = {}
            for k, c in _chordify_encoding(self.support, enc).terms.items():
                for b, v in self.reduction[k].items():
                    out[b] = out.get(b, 0) + c * v
            return {b: v for b, v in out.items() if v}
        raise DiagramError("diagram outside the spanning set of this quotient")

    def coordinates(self, x: Combination) -> dict[bytes, Fraction]:
        """Coordinates of the class of ``x`` on the basis; sparse, zeros dropped."""
        if x.support != self.support:
            raise ValueError(f"support mismatch: {x.support} vs {self.support}")
        out: dict[bytes, Fraction] = {}
        for k, c in x.terms.items():
            if degree_of(k) != self.degree:
                raise ValueError(f"term of degree {degree_of(k)} in a degree {self.degree} quotient")
            for b, v in self._reduce_encoding(k).items():
                out[b] = out.get(b, 0) + c * v
        return {b: v for b, v in sorted(out.items()) if v}

    def vector(self, x: Combination) -> tuple[Fraction, ...]:
        coords = self.coordinates(x)
        return tuple(coords.get(b, Fraction(0)) for b in self.basis)

    def normal_form(self, x: Combination) -> Combination:
        return Combination(self.support, self.coordinates(x))

    def is_zero(self, x: Combination) -> bool:
        return not self.coordinates(x)


def _build(support: Support, degree: int, method: str, color_legs) -> QuotientSpace:
    cl = dict(color_legs) if color_legs is not None else None
    if method == "chord":
        spanning = enumerate_diagrams(support, degree, chord_only=True)
        relation_gens = [four_term_relations_of]
    else:
        spanning = enumerate_diagrams(support, degree, color_legs=cl)
        relation_gens = [stu_relations_of, ihx_relations_of]
    encs = [sc.encoding for sc in spanning]
    column = {e: i for i, e in enumerate(encs)}
    ech = Echelon()
    for sc in spanning:
        d = sc.diagram
        for gen in relation_gens:
            for rel in gen(d):
                if rel:
                    ech.add({column[k]: v for k, v in rel.terms.items()})
    solved = ech.reduced()
    basis = [e for i, e in enumerate(encs) if i not in solved]
    reduction: dict[bytes, dict[bytes, Fraction]] = {}
    for i, e in enumerate(encs):
        if i in solved:
            reduction[e] = {encs[j]: v for j, v in sorted(solved[i].items())}
        else:
            reduction[e] = {e: Fraction(1)}
    return QuotientSpace(support, degree, method, basis, reduction, color_legs)


_memo: dict[tuple, QuotientSpace] = {}


def default_method(support: Support) -> str:
    return "full" if support.colors else "chord"


def quotient_basis(
    support: Support,
    degree: int,
    *,
    method: str | None = None,
    color_legs: dict[str, int] | None = None,
    cache=None,
) -> QuotientSpace:
    """The quotient of degree-``degree`` diagrams on ``support``.

    ``method="full"`` spans by all uni-trivalent diagrams modulo AS/STU/IHX;
    ``method="chord"`` (skeleton-only supports) spans by chord diagrams
    modulo 4T.  Both give the same basis on skeleton supports.  For colored
    supports ``color_legs`` restricts to a fixed number of legs per color,
    which relations preserve.
    """
    method = method or default_method(support)
    if method not in ("full", "chord"):
        raise ValueError(f"unknown method {method!r}")
    if method == "chord" and support.colors:
        raise ValueError("the chord method needs a support without colors")
    cl = tuple(sorted(color_legs.items())) if color_legs is not None else None
    key = (support, degree, method, cl)
    q = _memo.get(key)
    if q is not None:
        return q
    if cache is None:
        from .cache import default_cache

        cache = default_cache()
    if cache is not None:
        q = cache.load_or_build(key, lambda: _build(support, degree, method, cl))
    else:
        q = _build(support, degree, method, cl)
    _memo[key] = q
    return q


def clear_memo() -> None:
    _memo.clear()


def reduce_class(x: Combination, q: QuotientSpace) -> tuple[Fraction, ...]:
    """Coordinate vector of the class of ``x`` in ``q``."""
    return q.vector(x)


def graded_coordinates(x: Combination, **kw) -> dict[int, dict[bytes, Fraction]]:
    """Coordinates of every homogeneous part of ``x``."""
    out = {}
    for n in x.degrees():
        q = quotient_basis(x.support, n, **kw)
        c = q.coordinates(x.part(n))
        if c:
            out[n] = c
    return out


def classes_equal(x: Combination, y: Combination, **kw) -> bool:
    return not graded_coordinates(x - y, **kw)


def is_zero_class(x: Combination, **kw) -> bool:
    """Does ``x`` vanish in the quotient (all degrees)?"""
    if x.support.colors and "color_legs" not in kw:
        # relations preserve the leg count of each color
        groups: dict[tuple, Combination] = {}
        for k, v in x.terms.items():
            d = decode(x.support, k)
            cl = tuple(sorted(_color_counts(d).items()))
            groups.setdefault(cl, Combination(x.support))
            groups[cl] = groups[cl] + Combination(x.support, {k: v})
        return all(not graded_coordinates(g, color_legs=dict(cl), **kw) for cl, g in groups.items())
    return not graded_coordinates(x, **kw)


def _color_counts(d: Diagram) -> dict[str, int]:
    out = {c: 0 for c in d.support.colors}
    for v in d.vertices:
        if v[0] == "X":
            out[v[1]] += 1
    return out


def canonical_sign(d: Diagram) -> int:
    return canonicalize(d).sign
