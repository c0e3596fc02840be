"""Truncated graded series of diagrams, two-leg gluing, and insertion maps."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable

from .combination import Combination, degree_of
from .diagram import INTERVAL, CIRCLE, Diagram, DiagramError, Draft, Support
from .morphisms import (
    duplicate_component,
    insert_on_component,
    open_circle,
    pbw_inverse,
    stack_product,
    tensor_product,
    leg_swap,
)

TWO_LEGS = ("v1", "v2")
TWO_LEG_SUPPORT = Support((), TWO_LEGS)


# ---------------------------------------------------------------------------
# graded series in a diagram algebra
# ---------------------------------------------------------------------------


def algebra_product(x: Combination, y: Combination) -> Combination:
    """The product of the diagram algebra on ``x``'s support.

    Stacking on intervals (disjoint union when there is no skeleton);
    on a single circle, insertion of the opened first factor.
    """
    comps = x.support.components
    if comps == (CIRCLE,):
        return insert_on_component(open_circle(x), y, 0)
    return stack_product(x, y)


@dataclass(frozen=True)
class GradedSeries:
    """Element of a completed diagram space, kept up to degree ``N``."""

    support: Support
    N: int
    value: Combination

    @classmethod
    def of(cls, x: Combination, N: int) -> GradedSeries:
        return cls(x.support, N, x.truncate(N))

    @classmethod
    def one(cls, support: Support, N: int) -> GradedSeries:
        return cls(support, N, Combination.one(support))

    @classmethod
    def zero(cls, support: Support, N: int) -> GradedSeries:
        return cls(support, N, Combination(support))

    def part(self, d: int) -> Combination:
        return self.value.part(d)

    def _n(self, other: GradedSeries) -> int:
        return min(self.N, other.N)

    def __add__(self, other: GradedSeries) -> GradedSeries:
        return GradedSeries.of(self.value + other.value, self._n(other))

    def __sub__(self, other: GradedSeries) -> GradedSeries:
        return GradedSeries.of(self.value - other.value, self._n(other))

    def __neg__(self) -> GradedSeries:
        return GradedSeries(self.support, self.N, -self.value)

    def scale(self, c) -> GradedSeries:
        return GradedSeries(self.support, self.N, self.value * c)

    def __mul__(self, other: GradedSeries) -> GradedSeries:
        n = self._n(other)
        out = Combination(self.support)
        for i in self.value.degrees():
            xi = self.value.part(i)
            for j in other.value.degrees():
                if i + j <= n:
                    out = out + algebra_product(xi, other.value.part(j))
        return GradedSeries(self.support, n, out)

    def power(self, k: int) -> GradedSeries:
        out = GradedSeries.one(self.support, self.N)
        for _ in range(k):
            out = out * self
        return out

    def degree0(self) -> Fraction:
        return self.value.terms.get(_empty_key(self.support), Fraction(0))


def _empty_key(support: Support) -> bytes:
    (k,) = Combination.one(support).terms
    return k


def _power_sum(x: GradedSeries, coeffs: Iterable[Fraction]) -> GradedSeries:
    """sum_k c_k x^k for x of positive filtration, up to x.N."""
    out = GradedSeries.zero(x.support, x.N)
    p = GradedSeries.one(x.support, x.N)
    for k, c in enumerate(coeffs):
        if k > x.N:
            break
        if c:
            out = out + p.scale(c)
        p = p * x
    return out


def series_calculus(x: GradedSeries, op: str) -> GradedSeries:
    """exp, log, inverse or sqrt of a truncated series."""
    n = x.N
    one = GradedSeries.one(x.support, n)
    if op == "exp":
        if x.degree0():
            raise ValueError("exp needs a series without degree-0 part")
        return _power_sum(x, [Fraction(1, factorial(k)) for k in range(n + 1)])
    if x.degree0() != 1:
        raise ValueError(f"{op} needs a series with degree-0 part 1")
    y = x - one
    if op == "log":
        return _power_sum(y, [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, n + 1)])
    if op == "inverse":
        return _power_sum(y, [Fraction((-1) ** k) for k in range(n + 1)])
    if op == "sqrt":
        return _power_sum(y, [_half_binomial(k) for k in range(n + 1)])
    raise ValueError(f"unknown operation {op!r}")


def _half_binomial(k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= (Fraction(1, 2) - j) / (j + 1)
    return out


def exp_series(x: GradedSeries) -> GradedSeries:
    return series_calculus(x, "exp")


def parity_involution(x: GradedSeries) -> GradedSeries:
    """Multiply the degree-d part by (-1)^d."""
    terms = {k: (-v if degree_of(k) % 2 else v) for k, v in x.value.terms.items()}
    return GradedSeries(x.support, x.N, Combination(x.support, terms))


def framing_twist(x: GradedSeries, component: int, c, anomaly: GradedSeries) -> GradedSeries:
    """Insert exp(c * anomaly) along a component, to x's truncation."""
    n = min(x.N, anomaly.N)
    twist = exp_series(anomaly.scale(c))
    out = Combination(x.support)
    for i in twist.value.degrees():
        for j in x.value.degrees():
            if i + j <= n:
                out = out + insert_on_component(twist.part(i), x.part(j), component)
    return GradedSeries(x.support, n, out)


def crossing_from_anomaly(a: GradedSeries, N: int | None = None) -> GradedSeries:
    """exp(1/2 (2 x I)_* a) (exp(-a/2) (x) exp(-a/2)) on two strands."""
    if a.support != Support((INTERVAL,)):
        raise ValueError("the anomaly lives on one interval")
    if a.degree0():
        raise ValueError("the anomaly has no degree-0 part")
    n = a.N if N is None else min(N, a.N)
    a = GradedSeries.of(a.value, n)
    doubled = GradedSeries.of(duplicate_component(a.value, 0, 2), n)
    left = exp_series(doubled.scale(Fraction(1, 2)))
    half = exp_series(a.scale(Fraction(-1, 2)))
    strands = Support((INTERVAL, INTERVAL))
    tens = Combination(strands)
    for i in half.value.degrees():
        for j in half.value.degrees():
            if i + j <= n:
                tens = tens + tensor_product(half.part(i), half.part(j))
    return left * GradedSeries(strands, n, tens)


# ---------------------------------------------------------------------------
# two-leg elements under gluing
# ---------------------------------------------------------------------------


def _two_leg_ends(d: Diagram) -> tuple[int, int]:
    ends = {}
    for i, v in enumerate(d.vertices):
        if v[0] == "X":
            if v[1] in ends or v[1] not in TWO_LEGS:
                raise DiagramError("expected exactly one leg of each of v1, v2")
            ends[v[1]] = i
        elif v[0] == "M":
            raise DiagramError("two-leg elements have no skeleton legs")
    if len(ends) != 2:
        raise DiagramError("expected exactly one leg of each of v1, v2")
    return ends["v1"], ends["v2"]


def _glue_diagrams(a: Diagram, b: Diagram) -> Diagram:
    a1, a2 = _two_leg_ends(a)
    b1, b2 = _two_leg_ends(b)
    dr = Draft(TWO_LEG_SUPPORT)
    ia = {i: dr.add(v) for i, v in enumerate(a.vertices)}
    ib = {i: dr.add(v) for i, v in enumerate(b.vertices)}
    for (x, s), (y, t) in a.edges:
        dr.link((ia[x], s), (ia[y], t))
    for (x, s), (y, t) in b.edges:
        dr.link((ib[x], s), (ib[y], t))
    p = dr.unlink((ia[a2], 0))
    q = dr.unlink((ib[b1], 0))
    dr.remove(ia[a2])
    dr.remove(ib[b1])
    dr.link(p, q)
    return dr.freeze()


def two_leg_glue(x, y) -> Combination:
    """Join the v2 leg of ``x`` to the v1 leg of ``y``."""
    x = Combination.of(x) if isinstance(x, Diagram) else x
    y = Combination.of(y) if isinstance(y, Diagram) else y
    out: dict[bytes, Fraction] = {}
    ys = list(y.items())
    for a, ca in x.items():
        for b, cb in ys:
            for k, v in Combination.of(_glue_diagrams(a, b)).terms.items():
                out[k] = out.get(k, 0) + ca * cb * v
    return Combination(TWO_LEG_SUPPORT, out)


def strut() -> Combination:
    d = Diagram(TWO_LEG_SUPPORT, (("X", "v1"), ("X", "v2")), (((0, 0), (1, 0)),))
    return Combination.of(d)


def shifted_degree(x: Combination) -> list[int]:
    return [d - 1 for d in x.degrees()]


def distinguish_legs(b: Combination, color: str = "x") -> Combination:
    """Average of the two ways of naming the legs of one-color two-leg diagrams."""
    out = Combination(TWO_LEG_SUPPORT)
    for d, c in b.items():
        legs = [i for i, v in enumerate(d.vertices) if v[0] == "X"]
        if len(legs) != 2:
            raise DiagramError("expected two-leg diagrams")
        for first, second in ((legs[0], legs[1]), (legs[1], legs[0])):
            verts = list(d.vertices)
            verts[first] = ("X", "v1")
            verts[second] = ("X", "v2")
            out = out + Combination.of(Diagram(TWO_LEG_SUPPORT, tuple(verts), d.edges), c / 2)
    return out


class TwoLeg:
    """Ring element of the gluing algebra on two-leg diagrams."""

    __slots__ = ("value",)

    def __init__(self, value: Combination):
        self.value = value

    @staticmethod
    def one() -> TwoLeg:
        return TwoLeg(strut())

    @staticmethod
    def zero() -> TwoLeg:
        return TwoLeg(Combination(TWO_LEG_SUPPORT))

    def __add__(self, o: TwoLeg) -> TwoLeg:
        return TwoLeg(self.value + o.value)

    def __sub__(self, o: TwoLeg) -> TwoLeg:
        return TwoLeg(self.value - o.value)

    def __neg__(self) -> TwoLeg:
        return TwoLeg(-self.value)

    def __mul__(self, o) -> TwoLeg:
        if isinstance(o, TwoLeg):
            return TwoLeg(two_leg_glue(self.value, o.value))
        return TwoLeg(self.value * o)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.value)

    def __eq__(self, o) -> bool:
        return isinstance(o, TwoLeg) and self.value == o.value


class Poly:
    """Commutative polynomial in graded formal generators with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple, Fraction] | None = None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @staticmethod
    def gen(name: str) -> Poly:
        return Poly({((name, 1),): Fraction(1)})

    @staticmethod
    def one() -> Poly:
        return Poly({(): Fraction(1)})

    @staticmethod
    def zero() -> Poly:
        return Poly()

    def __add__(self, o: Poly) -> Poly:
        t = dict(self.terms)
        for m, c in o.terms.items():
            t[m] = t.get(m, 0) + c
        return Poly(t)

    def __neg__(self) -> Poly:
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, o: Poly) -> Poly:
        return self + (-o)

    def __mul__(self, o) -> Poly:
        if not isinstance(o, Poly):
            return Poly({m: c * o for m, c in self.terms.items()})
        t: dict[tuple, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                exps = dict(m1)
                for g, e in m2:
                    exps[g] = exps.get(g, 0) + e
                m = tuple(sorted(exps.items()))
                t[m] = t.get(m, 0) + c1 * c2
        return Poly(t)

    __rmul__ = __mul__

    def __eq__(self, o) -> bool:
        return isinstance(o, Poly) and self.terms == o.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return str(self)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(g if e == 1 else f"{g}^{e}" for g, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class TwoLegSeries:
    """Series sum_s x_s in a graded commutative algebra, truncated at shifted degree N.

    Parts are ring elements (``TwoLeg`` for diagrams, ``Poly`` for formal
    generators) keyed by shifted degree; part 0 is a multiple of the unit.
    """

    def __init__(self, parts: dict[int, object], N: int, ring=TwoLeg):
        self.ring = ring
        self.N = N
        self.parts = {s: v for s, v in parts.items() if s <= N and v}

    def part(self, s: int):
        return self.parts.get(s, self.ring.zero())

    def __mul__(self, o: TwoLegSeries) -> TwoLegSeries:
        n = min(self.N, o.N)
        out: dict[int, object] = {}
        for i, x in self.parts.items():
            for j, y in o.parts.items():
                if i + j <= n:
                    out[i + j] = out.get(i + j, self.ring.zero()) + x * y
        return TwoLegSeries(out, n, self.ring)

    def __add__(self, o: TwoLegSeries) -> TwoLegSeries:
        out = dict(self.parts)
        for s, v in o.parts.items():
            out[s] = out.get(s, self.ring.zero()) + v
        return TwoLegSeries(out, min(self.N, o.N), self.ring)

    def scale(self, c) -> TwoLegSeries:
        return TwoLegSeries({s: v * c for s, v in self.parts.items()}, self.N, self.ring)

    def power(self, k: int) -> TwoLegSeries:
        out = TwoLegSeries({0: self.ring.one()}, self.N, self.ring)
        for _ in range(k):
            out = out * self
        return out

    def is_one(self) -> bool:
        return set(self.parts) == {0} and self.parts[0] == self.ring.one()

    @classmethod
    def symbolic_anomaly(cls, N: int, vanishing: Iterable[int] = ()) -> TwoLegSeries:
        """A = 1 + A2 + A4 + ... with formal generators; listed degrees set to 0."""
        skip = set(vanishing)
        parts: dict[int, object] = {0: Poly.one()}
        for s in range(2, N + 1, 2):
            if s not in skip:
                parts[s] = Poly.gen(f"A{s}")
        return cls(parts, N, Poly)


def invert_anomaly(A: TwoLegSeries) -> TwoLegSeries:
    """B with sum_k A^(2k+1) B_2k = 1, solved degree by degree."""
    one = A.ring.one()
    if A.part(0) != one:
        raise ValueError("the anomaly must start with the unit")
    if any(s % 2 for s in A.parts):
        raise ValueError("the anomaly has no odd shifted parts")
    N = A.N
    powers = {k: A.power(2 * k + 1) for k in range(N // 2 + 1)}
    B: dict[int, object] = {0: one}
    for n in range(1, N // 2 + 1):
        acc = A.ring.zero()
        for k in range(n):
            acc = acc + powers[k].part(2 * n - 2 * k) * B[2 * k]
        B[2 * n] = -acc
    return TwoLegSeries(B, N, A.ring)


def anomaly_identity(A: TwoLegSeries, B: TwoLegSeries) -> TwoLegSeries:
    """sum_k A^(2k+1) B_2k, which is 1 when B inverts A."""
    N = min(A.N, B.N)
    total = TwoLegSeries({}, N, A.ring)
    for k in range(N // 2 + 1):
        total = total + A.power(2 * k + 1) * TwoLegSeries({2 * k: B.part(2 * k)}, N, A.ring)
    return total


def induction_coefficients(n: int) -> dict[str, int]:
    """The integers (2n-1), (2n-3), C(2n-3, 2) of the degree-2n recursion."""
    return {"B2n-2*A2": 2 * n - 1, "B2n-4*A4": 2 * n - 3, "B2n-4*A2^2": comb(2 * n - 3, 2)}


# ---------------------------------------------------------------------------
# insertion of two-leg series on dashed components
# ---------------------------------------------------------------------------


def _component_edges(d: Diagram) -> list[tuple[int, list]]:
    """(degree, edges) of every dashed component; edges in sorted order."""
    out = []
    for comp in d.dashed_components():
        members = set(comp)
        edges = [e for e in d.edges if e[0][0] in members]
        out.append((len(comp) // 2, edges))
    return out


def _insert_two_leg(dr: Draft, edge, b: Diagram) -> None:
    (p, q) = edge
    b1, b2 = _two_leg_ends(b)
    ids = {i: dr.add(v) for i, v in enumerate(b.vertices)}
    for (x, s), (y, t) in b.edges:
        dr.link((ids[x], s), (ids[y], t))
    dr.unlink(p)
    r1 = dr.unlink((ids[b1], 0))
    if r1 == (ids[b2], 0):
        dr.remove(ids[b1])
        dr.remove(ids[b2])
        dr.link(p, q)
        return
    r2 = dr.unlink((ids[b2], 0))
    dr.remove(ids[b1])
    dr.remove(ids[b2])
    dr.link(p, r1)
    dr.link(r2, q)


def _glue_powers(beta: TwoLegSeries, m: int, budget: int) -> list[tuple[int, Combination]]:
    """Parts of beta^m by shifted degree, up to ``budget``."""
    p = TwoLegSeries(beta.parts, min(beta.N, budget), beta.ring).power(m)
    return sorted((s, v.value) for s, v in p.parts.items())


def psi_apply(beta: TwoLegSeries, x, N: int, loci=None) -> Combination:
    """Insert beta^s d times on every dashed component of degree d.

    ``loci`` optionally maps a diagram to a list, one entry per dashed
    component (in ``dashed_components`` order), of the edges receiving the
    insertions; by default all insertions go on the component's first edge.
    The result is truncated at degree ``N``.
    """
    if beta.ring is not TwoLeg:
        raise ValueError("psi_apply needs a diagram-valued two-leg series")
    x = Combination.of(x) if isinstance(x, Diagram) else x
    out: dict[bytes, Fraction] = {}
    for d, c in x.items():
        if d.degree > N:
            continue
        comps = _component_edges(d)
        if loci is None:
            plan = [[edges[0]] * deg if edges else [] for deg, edges in comps]
        else:
            plan = loci(d)
        slots: list[tuple] = []
        for choice in plan:
            counts: dict = {}
            for e in choice:
                counts[e] = counts.get(e, 0) + 1
            slots.extend(sorted(counts.items()))
        budget = N - d.degree
        options = [_glue_powers(beta, m, budget) for _, m in slots]
        _expand(d, slots, options, 0, budget, Draft.of(d), c, out)
    return Combination(x.support, out)


def _expand(d, slots, options, i, budget, dr, coeff, out):
    if i == len(slots):
        for k, v in Combination.of(dr.freeze()).terms.items():
            out[k] = out.get(k, 0) + coeff * v
        return
    edge = slots[i][0]
    for s, comb_s in options[i]:
        if s > budget:
            break
        for b, cb in comb_s.items():
            nd = dr.copy()
            _insert_two_leg(nd, edge, b)
            _expand(d, slots, options, i + 1, budget - s, nd, coeff * cb, out)


def random_loci(rng: random.Random):
    """Loci chooser spreading each component's insertions over random edges."""

    def choose(d: Diagram):
        return [[rng.choice(edges) for _ in range(deg)] for deg, edges in _component_edges(d)]

    return choose


def two_leg_part(beta: Combination, N: int) -> TwoLegSeries:
    """beta^s from an element of the circle space: the two-leg projection, legs named."""
    if beta.support != Support((CIRCLE,)):
        raise ValueError("expected an element on one circle")
    pi2 = pbw_inverse(open_circle(beta)).projection(2)
    parts: dict[int, object] = {}
    for n in pi2.degrees():
        if n - 1 <= N:
            parts[n - 1] = TwoLeg(distinguish_legs(pi2.part(n)))
    return TwoLegSeries(parts, N)


def is_symmetric(beta: TwoLegSeries) -> bool:
    """Certificate: every part is fixed by exchanging the legs, as a class."""
    from .quotients import is_zero_class

    return all(is_zero_class(v.value - leg_swap(v.value)) for v in beta.parts.values())
