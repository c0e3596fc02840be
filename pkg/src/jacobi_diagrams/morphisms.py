"""Linear maps between diagram spaces.

Every map is first defined on single diagrams and then extended linearly;
none of them needs quotient reduction, so results are exact at the level
of representatives and are compared as classes by the caller.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod

from .combination import Combination
from .diagram import CIRCLE, INTERVAL, Diagram, DiagramError, Draft, Support

ColorOrComponent = int | str


def _as_combination(x) -> Combination:
    return Combination.of(x) if isinstance(x, Diagram) else x


def _bilinear(x: Combination, y: Combination, f, support: Support) -> Combination:
    out: dict[bytes, Fraction] = {}
    ys = list(y.items())
    for a, ca in x.items():
        for b, cb in ys:
            for k, v in f(a, b).terms.items():
                out[k] = out.get(k, 0) + ca * cb * v
    return Combination(support, out)


def _copy_into(dr: Draft, d: Diagram, vertex_map) -> dict[int, int]:
    """Add the vertices of ``d`` (transformed by ``vertex_map``) and its edges."""
    ids = {}
    for i, v in enumerate(d.vertices):
        nv = vertex_map(v)
        ids[i] = dr.add(nv)
    for (a, s), (b, t) in d.edges:
        dr.link((ids[a], s), (ids[b], t))
    return ids


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------


def stack_product(x, y) -> Combination:
    """``x`` below ``y`` on the same strands; colored legs are pooled."""
    x, y = _as_combination(x), _as_combination(y)
    if x.support != y.support:
        raise ValueError(f"support mismatch: {x.support} vs {y.support}")
    if CIRCLE in x.support.components:
        raise ValueError("stacking needs a support made of intervals")

    def one(a: Diagram, b: Diagram) -> Combination:
        dr = Draft(a.support)
        _copy_into(dr, a, lambda v: ("M", v[1], (0, v[2])) if v[0] == "M" else v)
        _copy_into(dr, b, lambda v: ("M", v[1], (1, v[2])) if v[0] == "M" else v)
        return Combination.of(dr.freeze())

    return _bilinear(x, y, one, x.support)


def tensor_product(x, y) -> Combination:
    """Juxtaposition on the disjoint union of the two supports."""
    x, y = _as_combination(x), _as_combination(y)
    if set(x.support.colors) & set(y.support.colors):
        raise ValueError("tensor factors must use distinct colors")
    support = Support(x.support.components + y.support.components, x.support.colors + y.support.colors)
    shift = len(x.support.components)

    def one(a: Diagram, b: Diagram) -> Combination:
        dr = Draft(support)
        _copy_into(dr, a, lambda v: v)
        _copy_into(dr, b, lambda v: ("M", v[1] + shift, v[2]) if v[0] == "M" else v)
        return Combination.of(dr.freeze())

    return _bilinear(x, y, one, support)


def insert_on_component(x, y, component: int, *, reverse: bool = False, locus: int | None = None) -> Combination:
    """Insert ``x`` (on one interval) along a component of ``y``'s support.

    The legs of ``x`` go after the first ``locus`` legs of the component
    (default: after the last one).  With ``reverse`` the interval runs
    against the component, which reverses its legs and costs (-1)^legs.
    """
    x, y = _as_combination(x), _as_combination(y)
    if x.support != Support((INTERVAL,)):
        raise ValueError("the inserted element must live on a single interval")
    if not (0 <= component < len(y.support.components)):
        raise ValueError(f"component {component} is not in {y.support}")

    def one(a: Diagram, b: Diagram) -> Combination:
        m = len(b.legs_on(component))
        at = m if locus is None else locus
        if not (0 <= at <= m):
            raise ValueError(f"insertion locus {at} outside 0..{m}")
        dr = Draft(b.support)
        _copy_into(dr, b, lambda v: ("M", v[1], (v[2], 0)) if v[0] == "M" else v)
        ua = a.n_legs
        _copy_into(
            dr,
            a,
            lambda v: ("M", component, (at - 1, 1, ua - 1 - v[2] if reverse else v[2])) if v[0] == "M" else v,
        )
        sign = -1 if reverse and ua % 2 else 1
        return Combination.of(dr.freeze(), sign)

    return _bilinear(x, y, one, y.support)


# ---------------------------------------------------------------------------
# support surgery
# ---------------------------------------------------------------------------


def _resolve(support: Support, c: ColorOrComponent) -> tuple[str, int | str]:
    if isinstance(c, str):
        if c not in support.colors:
            raise ValueError(f"color {c!r} is not in {support}")
        return "X", c
    if not (0 <= c < len(support.components)):
        raise ValueError(f"component {c} is not in {support}")
    return "M", c


def _on(v: tuple, kind: str, c) -> bool:
    return v[0] == kind and v[1] == c


def delete_component(x, c: ColorOrComponent) -> Combination:
    """Drop every term with a leg on ``c`` and remove ``c`` from the support."""
    x = _as_combination(x)
    kind, c = _resolve(x.support, c)
    if kind == "M":
        comps = x.support.components[:c] + x.support.components[c + 1 :]
        support = Support(comps, x.support.colors)
    else:
        support = Support(x.support.components, tuple(k for k in x.support.colors if k != c))

    def one(d: Diagram) -> Combination:
        if any(_on(v, kind, c) for v in d.vertices):
            return Combination(support)
        if kind == "M":
            verts = tuple(("M", v[1] - (v[1] > c), v[2]) if v[0] == "M" else v for v in d.vertices)
        else:
            verts = d.vertices
        return Combination.of(Diagram(support, verts, d.edges))

    return x.map(one, support)


def duplicate_component(x, c: ColorOrComponent, r: int, names: list[str] | None = None) -> Combination:
    """(r x C)_*: distribute the legs on ``c`` over ``r`` ordered copies of it.

    Copies of a skeleton component take its place in the component order;
    copies of a color are named ``names`` (default ``c1 .. cr``).
    """
    x = _as_combination(x)
    kind, c = _resolve(x.support, c)
    if r < 1:
        raise ValueError("r must be positive")
    if kind == "M":
        comps = x.support.components
        support = Support(comps[:c] + (comps[c],) * r + comps[c + 1 :], x.support.colors)
    else:
        names = names or [f"{c}{i + 1}" for i in range(r)]
        if len(names) != r:
            raise ValueError("need one name per copy")
        cols = x.support.colors
        i = cols.index(c)
        support = Support(x.support.components, cols[:i] + tuple(names) + cols[i + 1 :])

    def one(d: Diagram) -> Combination:
        legs = [i for i, v in enumerate(d.vertices) if _on(v, kind, c)]
        terms = []
        for assign in itertools.product(range(r), repeat=len(legs)):
            where = dict(zip(legs, assign))
            verts = []
            for i, v in enumerate(d.vertices):
                if kind == "M" and v[0] == "M":
                    if v[1] < c:
                        verts.append(v)
                    elif v[1] > c:
                        verts.append(("M", v[1] + r - 1, v[2]))
                    else:
                        verts.append(("M", c + where[i], v[2]))
                elif kind == "X" and i in where:
                    verts.append(("X", names[where[i]]))
                else:
                    verts.append(v)
            dr = Draft.of(Diagram(support, tuple(verts), d.edges))
            terms.append((dr.freeze(), 1))
        return Combination.from_terms(support, terms)

    return x.map(one, support)


def permute_components(x, perm: list[int]) -> Combination:
    """Send component ``i`` to position ``perm[i]``."""
    x = _as_combination(x)
    comps = x.support.components
    if sorted(perm) != list(range(len(comps))):
        raise ValueError("not a permutation of the components")
    new = [None] * len(comps)
    for i, p in enumerate(perm):
        new[p] = comps[i]
    support = Support(tuple(new), x.support.colors)

    def one(d: Diagram) -> Combination:
        verts = tuple(("M", perm[v[1]], v[2]) if v[0] == "M" else v for v in d.vertices)
        return Combination.of(Diagram(support, verts, d.edges))

    return x.map(one, support)


def add_empty_component(x, position: int, kind: str = INTERVAL) -> Combination:
    """Tensor with the unit on a new component placed at ``position``."""
    x = _as_combination(x)
    comps = x.support.components
    support = Support(comps[:position] + (kind,) + comps[position:], x.support.colors)

    def one(d: Diagram) -> Combination:
        verts = tuple(
            ("M", v[1] + (v[1] >= position), v[2]) if v[0] == "M" else v for v in d.vertices
        )
        return Combination.of(Diagram(support, verts, d.edges))

    return x.map(one, support)


def forget_colors(x, target: str | None = None) -> Combination:
    """Relabel every colored leg with a single color."""
    x = _as_combination(x)
    target = target or (x.support.colors[0] if x.support.colors else "x")
    support = Support(x.support.components, (target,))

    def one(d: Diagram) -> Combination:
        verts = tuple(("X", target) if v[0] == "X" else v for v in d.vertices)
        return Combination.of(Diagram(support, verts, d.edges))

    return x.map(one, support)


def rename_colors(x, mapping: dict[str, str]) -> Combination:
    x = _as_combination(x)
    support = Support(x.support.components, tuple(mapping.get(c, c) for c in x.support.colors))

    def one(d: Diagram) -> Combination:
        verts = tuple(("X", mapping.get(v[1], v[1])) if v[0] == "X" else v for v in d.vertices)
        return Combination.of(Diagram(support, verts, d.edges))

    return x.map(one, support)


def _retype(x, frm: str, to: str) -> Combination:
    x = _as_combination(x)
    if x.support.components != (frm,):
        raise ValueError(f"expected a single {frm} component, got {x.support}")
    support = Support((to,), x.support.colors)
    return x.map(lambda d: Combination.of(Diagram(support, d.vertices, d.edges)), support)


def close_interval(x) -> Combination:
    """Glue the ends of the interval into a circle."""
    return _retype(x, INTERVAL, CIRCLE)


def open_circle(x) -> Combination:
    """Cut the circle just before the leg of rank 0."""
    return _retype(x, CIRCLE, INTERVAL)


def leg_swap(x, legs: tuple[str, str] = ("v1", "v2")) -> Combination:
    """Exchange the two distinguished legs of a two-leg element."""
    x = _as_combination(x)
    a, b = legs
    for d, _ in x.items():
        counts = [sum(1 for v in d.vertices if v[0] == "X" and v[1] == c) for c in legs]
        if counts != [1, 1] or d.n_legs != 2:
            raise DiagramError("leg_swap needs exactly one leg of each distinguished color")
    swap = {a: b, b: a}

    def one(d: Diagram) -> Combination:
        verts = tuple(("X", swap.get(v[1], v[1])) if v[0] == "X" else v for v in d.vertices)
        return Combination.of(Diagram(d.support, verts, d.edges))

    return x.map(one, x.support)


# ---------------------------------------------------------------------------
# symmetrization and its inverse
# ---------------------------------------------------------------------------


def pbw_symmetrize(x, color: str = "x", position: int | None = None) -> Combination:
    """chi: average over all orders of the ``color`` legs on a new interval."""
    x = _as_combination(x)
    if color not in x.support.colors:
        raise ValueError(f"color {color!r} is not in {x.support}")
    comps = x.support.components
    pos = len(comps) if position is None else position
    support = Support(comps[:pos] + (INTERVAL,) + comps[pos:], tuple(k for k in x.support.colors if k != color))

    def one(d: Diagram) -> Combination:
        legs = [i for i, v in enumerate(d.vertices) if v[0] == "X" and v[1] == color]
        base = [
            ("M", v[1] + (v[1] >= pos), v[2]) if v[0] == "M" else v for v in d.vertices
        ]
        weight = Fraction(1, factorial(len(legs)))
        terms = []
        for order in itertools.permutations(legs):
            verts = list(base)
            for r, i in enumerate(order):
                verts[i] = ("M", pos, r)
            terms.append((Diagram(support, tuple(verts), d.edges), weight))
        return Combination.from_terms(support, terms)

    return x.map(one, support)


def forget_interval(d: Diagram, color: str = "x") -> Diagram:
    """O: turn the legs on the single interval into legs of one color."""
    support = Support((), (color,))
    verts = tuple(("X", color) if v[0] == "M" else v for v in d.vertices)
    return Diagram(support, verts, d.edges)


def _merge_adjacent(d: Diagram, i: int) -> Diagram | None:
    """STU difference [.. a b ..] - [.. b a ..] for the legs at ranks i, i+1."""
    legs = d.legs_on(0)
    a, b = legs[i], legs[i + 1]
    dr = Draft.of(d)
    pa = dr.unlink((a, 0))
    if pa[0] == b:
        return None
    pb = dr.unlink((b, 0))
    dr.remove(a)
    dr.remove(b)
    leg = dr.add(("M", 0, Fraction(2 * i + 1, 2)))
    w = dr.add(("T",))
    dr.link((w, 0), (leg, 0))
    dr.link((w, 1), pb)
    dr.link((w, 2), pa)
    return dr.freeze()


def _permuted(d: Diagram, order: list[int]) -> Diagram:
    """The diagram whose j-th leg along the interval is the original leg order[j]."""
    legs = d.legs_on(0)
    verts = list(d.vertices)
    for r, j in enumerate(order):
        verts[legs[j]] = ("M", 0, r)
    return Diagram(d.support, tuple(verts), d.edges)


def _lower_legs(d: Diagram) -> Combination:
    """h with (u-1)! ([d] - chi(O(d))) = h, an integral combination of (u-1)-leg diagrams."""
    u = d.n_legs
    out: dict[bytes, Fraction] = {}
    if u <= 1:
        return Combination(d.support)
    for rest in itertools.permutations(range(1, u)):
        target = [0, *rest]
        # bubble the identity order into ``target`` one adjacent swap at a time
        cur = list(range(u))
        for pos_goal, leg in enumerate(target):
            j = cur.index(leg)
            while j > pos_goal:
                before = _permuted(d, cur)
                merged = _merge_adjacent(before, j - 1)
                if merged is not None:
                    # [cur] - [swapped] is the merged diagram
                    for k, v in Combination.of(merged).terms.items():
                        out[k] = out.get(k, 0) + v
                cur[j - 1], cur[j] = cur[j], cur[j - 1]
                j -= 1
    return Combination(d.support, out)


@dataclass
class LegProjectionResult:
    """Leg-graded pieces of the inverse of chi on one interval.

    ``top`` is O(x), ``g[k]`` the integral k-leg pieces, and ``pi[k]`` the
    projections, with pi[k] = g[k] / (k! (k+1)! ... (u-1)!) for a single
    diagram with u legs.
    """

    u: int
    top: Combination
    g: dict[int, Combination] = field(default_factory=dict)
    pi: dict[int, Combination] = field(default_factory=dict)

    def projection(self, k: int) -> Combination:
        """pi_k; zero for every k above the leg count."""
        return self.pi.get(k, Combination(self.top.support))

    def chi_sum(self) -> Combination:
        total = None
        for k in sorted(self.pi):
            c = pbw_symmetrize(self.pi[k])
            total = c if total is None else total + c
        return total if total is not None else Combination(Support((INTERVAL,)))


def factorial_chain(k: int, u: int) -> int:
    """k! (k+1)! ... (u-1)!; the empty product is 1."""
    return prod(factorial(j) for j in range(k, u))


def _pbw_inverse_diagram(d: Diagram) -> LegProjectionResult:
    u = d.n_legs
    bsup = Support((), ("x",))
    top = Combination.of(forget_interval(d))
    g: dict[int, Combination] = {}
    pi: dict[int, Combination] = {u: top}
    h = _lower_legs(d)
    k = u - 1
    while k >= 1:
        gk = h.map(lambda e: Combination.of(forget_interval(e)), bsup)
        g[k] = gk
        if gk:
            pi[k] = gk / factorial_chain(k, u)
        nxt: dict[bytes, Fraction] = {}
        for e, c in h.items():
            for kk, vv in _lower_legs(e).terms.items():
                nxt[kk] = nxt.get(kk, 0) + c * vv
        h = Combination(d.support, nxt)
        k -= 1
    return LegProjectionResult(u, top, g, pi)


def pbw_inverse(x) -> LegProjectionResult:
    """Constructive inverse of chi on diagrams on one interval.

    For a combination the pieces are summed term by term: ``u`` is then the
    largest leg count, ``top`` sums O over the terms, and ``g`` mixes
    scales, so integrality statements concern single diagrams.
    """
    x = _as_combination(x)
    if x.support != Support((INTERVAL,)):
        raise ValueError("pbw_inverse needs a single-interval support; open circles first")
    bsup = Support((), ("x",))
    total = LegProjectionResult(0, Combination(bsup))
    for d, c in x.items():
        r = _pbw_inverse_diagram(d)
        total.u = max(total.u, r.u)
        total.top = total.top + r.top * c
        for k, v in r.g.items():
            total.g[k] = total.g.get(k, Combination(bsup)) + v * c
        for k, v in r.pi.items():
            total.pi[k] = total.pi.get(k, Combination(bsup)) + v * c
    total.pi = {k: v for k, v in total.pi.items() if v}
    return total


# ---------------------------------------------------------------------------
# Adams operation
# ---------------------------------------------------------------------------


def adams_operation(x, r: int) -> Combination:
    """Duplicate the interval ``r`` times and concatenate the copies in order."""
    x = _as_combination(x)
    if x.support.components != (INTERVAL,):
        raise ValueError("the Adams operation acts on a single interval")

    def one(d: Diagram) -> Combination:
        legs = d.legs_on(0)
        terms = []
        for assign in itertools.product(range(r), repeat=len(legs)):
            order = sorted(range(len(legs)), key=lambda j: (assign[j], j))
            verts = list(d.vertices)
            for rank, j in enumerate(order):
                verts[legs[j]] = ("M", 0, rank)
            terms.append((Diagram(d.support, tuple(verts), d.edges), 1))
        return Combination.from_terms(d.support, terms)

    return x.map(one, x.support)
