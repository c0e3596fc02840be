"""Verification suites: each runs a batch of exact checks and reports them.

Output depends only on the configuration (seed, degrees, ranges); nothing
time- or machine-dependent is printed, so two runs with the same seed are
byte-identical.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import associator as asc
from . import denominators as den
from .combination import Combination
from .diagram import CIRCLE, INTERVAL, Support, chord_diagram, enumerate_diagrams
from .linalg import kernel_basis, rank
from .morphisms import adams_operation, factorial_chain, leg_swap, pbw_inverse, pbw_symmetrize, stack_product
from .quotients import (
    FOUR_T,
    generate_relations,
    is_zero_class,
    quotient_basis,
    random_slide,
    slide_relation,
)
from .series import (
    TWO_LEG_SUPPORT,
    GradedSeries,
    Poly,
    TwoLeg,
    TwoLegSeries,
    anomaly_identity,
    crossing_from_anomaly,
    exp_series,
    invert_anomaly,
    psi_apply,
    random_loci,
    strut,
)

S1 = Support((CIRCLE,))
I1 = Support((INTERVAL,))
B1 = Support((), ("x",))
TWO_LEG_LEGS = {"v1": 1, "v2": 1}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def render(self, fmt: str = "text") -> str:
        lines = []
        if fmt == "structured":
            for c in self.checks:
                lines.append(f"suite={self.suite} check={c.name!r} result={'pass' if c.passed else 'fail'} detail={c.detail!r}")
            lines.append(f"suite={self.suite} result={'pass' if self.passed else 'fail'}")
        else:
            lines.append(f"suite: {self.suite}")
            for c in self.checks:
                tail = f" [{c.detail}]" if c.detail else ""
                lines.append(f"  {'pass' if c.passed else 'FAIL'}  {c.name}{tail}")
            lines.append(f"result: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    N: int | None = None  # degree override; each suite has its own default
    max_param: int = 50
    symbolic: bool = True

    def degree(self, default: int) -> int:
        return default if self.N is None else self.N

    def rng(self, suite: str) -> random.Random:
        return random.Random(f"{self.seed}:{suite}")


def _unit_vector(support: Support, b: bytes) -> Combination:
    return Combination(support, {b: 1})


def _columns(q, images):
    index = {b: i for i, b in enumerate(q.basis)}
    return [{index[k]: v for k, v in q.coordinates(x).items()} for x in images]


# ---------------------------------------------------------------------------


def suite_slide(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("slide")
    rng = cfg.rng("slide")
    top = cfg.degree(3)
    supports = [S1, I1, Support((INTERVAL, INTERVAL)), Support((INTERVAL, CIRCLE)), Support((INTERVAL,), ("x",))]
    done, bad = 0, []
    while done < 100:
        sup = rng.choice(supports)
        n = rng.randint(1, top)
        try:
            spec = random_slide(rng, sup, n)
        except ValueError:
            continue
        if not is_zero_class(slide_relation(spec)):
            bad.append(f"{sup} degree {n}")
        done += 1
    res.add(f"random sliding relations reduce to zero (100 samples, degree <= {top})", not bad, "; ".join(bad[:3]))
    return res


def suite_stu4t(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("stu4t")
    top = cfg.degree(4)
    full = [quotient_basis(S1, n, method="full").dim for n in range(top + 1)]
    chord = [quotient_basis(S1, n, method="chord").dim for n in range(top + 1)]
    res.add(f"S1 dimensions agree by both routes, degrees 0..{top}", full == chord, f"full={full} chord={chord}")
    same = all(
        quotient_basis(S1, n, method="full").basis == quotient_basis(S1, n, method="chord").basis
        for n in range(top + 1)
    )
    res.add("S1 bases agree by both routes", same)
    for sup in (S1, I1):
        count, bad = 0, 0
        for n in range(1, min(top, 3) + 1):
            q = quotient_basis(sup, n, method="full")
            for rel in generate_relations(FOUR_T, sup, n):
                count += 1
                bad += bool(q.coordinates(rel))
        res.add(f"4T relations vanish in the STU/IHX quotient on {sup}, degree <= {min(top, 3)}", not bad, f"{count} relations")
    return res


def suite_pbw(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("pbw")
    top = cfg.degree(3)
    ranks = []
    for n in range(top + 1):
        qb, qi = quotient_basis(B1, n), quotient_basis(I1, n)
        r = rank(_columns(qi, [pbw_symmetrize(_unit_vector(B1, b)) for b in qb.basis]))
        ranks.append((qb.dim, qi.dim, r))
    res.add(
        f"chi is bijective in degrees 0..{top}",
        all(a == b == r for a, b, r in ranks),
        " ".join(f"{a}/{b}/{r}" for a, b, r in ranks),
    )
    integral, vanish, inverse, count = True, True, True, 0
    for n in range(top + 1):
        for sc in enumerate_diagrams(I1, n):
            d = sc.diagram
            r = pbw_inverse(d)
            count += 1
            for k in range(1, r.u + 1):
                scaled = r.projection(k) * factorial_chain(k, r.u)
                integral &= den.combo_denominator(scaled) == 1
            vanish &= all(not r.projection(k) for k in range(r.u + 1, r.u + 3))
            inverse &= is_zero_class(r.chi_sum() - Combination.of(d))
    res.add("k!(k+1)!...(u-1)! pi_k is integral", integral, f"{count} diagrams")
    res.add("pi_k vanishes for k > u", vanish)
    res.add("chi(sum pi_k) recovers every diagram", inverse)
    return res


def suite_eigen(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("eigen")
    for n in range(1, cfg.degree(3) + 1):
        qi = quotient_basis(I1, n)
        basis = [_unit_vector(I1, b) for b in qi.basis]
        ker = kernel_basis(_columns(qi, [adams_operation(x, 2) - x * 4 for x in basis]), qi.dim)
        q2 = quotient_basis(B1, n, color_legs={"x": 2})
        image = _columns(qi, [pbw_symmetrize(_unit_vector(B1, b)) for b in q2.basis])
        dim_img = rank(image)
        inside = all(not qi.coordinates(adams_operation(pbw_symmetrize(_unit_vector(B1, b)), 2) - pbw_symmetrize(_unit_vector(B1, b)) * 4) for b in q2.basis)
        contains = rank(image + ker) == dim_img
        res.add(
            f"degree {n}: eigenvalue-4 space of adams(.,2) equals chi(B_2)",
            len(ker) == dim_img and inside and contains,
            f"dim kernel {len(ker)}, dim image {dim_img}",
        )
    return res


def suite_vogel(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("vogel")
    for n in range(1, cfg.degree(4) + 1):
        q = quotient_basis(TWO_LEG_SUPPORT, n, color_legs=TWO_LEG_LEGS)
        ok = all(not q.coordinates(leg_swap(_unit_vector(q.support, b)) - _unit_vector(q.support, b)) for b in q.basis)
        res.add(f"degree {n}: exchanging the two legs fixes every class", ok, f"dim {q.dim}")
    return res


def random_two_leg_series(rng: random.Random, N: int, spread: int = 3) -> TwoLegSeries:
    """strut + random two-leg parts of shifted degree 1..N."""
    parts = {0: TwoLeg.one() * rng.choice([1, 2, -1])}
    for s in range(1, N + 1):
        q = quotient_basis(TWO_LEG_SUPPORT, s + 1, color_legs=TWO_LEG_LEGS)
        val = Combination(TWO_LEG_SUPPORT, {b: rng.randint(-spread, spread) for b in q.basis})
        if val:
            parts[s] = TwoLeg(val)
    return TwoLegSeries(parts, N)


def suite_psi(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("psi")
    rng = cfg.rng("psi")
    top = cfg.degree(4)
    pools = {(sup, n): enumerate_diagrams(sup, n) for sup in (S1, I1) for n in range(1, top + 1)}
    bad = 0
    for _ in range(100):
        sup = rng.choice([S1, I1])
        n = rng.randint(1, top)
        x = Combination.of(rng.choice(pools[(sup, n)]).diagram)
        beta = random_two_leg_series(rng, top - 1)
        a = psi_apply(beta, x, top)
        b = psi_apply(beta, x, top, loci=random_loci(rng))
        bad += not is_zero_class(a - b)
    res.add(f"insertion loci do not matter (100 pairs, degree <= {top})", not bad, f"{bad} mismatched")
    one = TwoLegSeries({0: TwoLeg.one()}, top)
    triple = one.scale(3)
    ident, scaled = True, True
    for sup in (S1, I1):
        for n in range(top + 1):
            for b in quotient_basis(sup, n).basis:
                x = _unit_vector(sup, b)
                ident &= psi_apply(one, x, top) == x
                scaled &= is_zero_class(psi_apply(triple, x, top) - x * 3**n)
    res.add("Psi(strut) is the identity", ident)
    res.add("Psi(3 strut) scales degree n by 3^n", scaled)
    bad = 0
    for _ in range(50):
        n1 = rng.randint(0, top - 1)
        n2 = rng.randint(0, top - n1)
        x = Combination.of(rng.choice(enumerate_diagrams(I1, n1)).diagram)
        y = Combination.of(rng.choice(enumerate_diagrams(I1, n2)).diagram)
        beta = random_two_leg_series(rng, top - 1)
        lhs = psi_apply(beta, stack_product(x, y), top)
        rhs = stack_product(psi_apply(beta, x, top), psi_apply(beta, y, top)).truncate(top)
        bad += not is_zero_class(lhs - rhs)
    res.add("Psi is multiplicative (50 pairs)", not bad, f"{bad} mismatched")
    return res


def suite_bseries(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("bseries")
    N = cfg.degree(6)
    if cfg.symbolic:
        A = TwoLegSeries.symbolic_anomaly(N, vanishing=[2])
        B = invert_anomaly(A)
        shown = ", ".join(f"B_{s}={B.part(s)}" for s in range(2, N + 1, 2))
        expected = {2: Poly.zero(), 4: -Poly.gen("A4"), 6: -Poly.gen("A6")}
        ok = all(B.part(s) == v for s, v in expected.items() if s <= N)
        res.add("with A_2 = 0: B_2 = 0, B_4 = -A_4, B_6 = -A_6", ok, shown)
        G = TwoLegSeries.symbolic_anomaly(N)
        res.add(f"sum A^(2k+1) B_2k = 1 to N = {N} (generic A)", anomaly_identity(G, invert_anomaly(G)).is_one())
        res.add(f"sum A^(2k+1) B_2k = 1 to N = {N} (A_2 = 0)", anomaly_identity(A, B).is_one())

    rng = cfg.rng("bseries")
    top = 4
    parts = {0: TwoLeg.one()}
    for s in (2,):
        q = quotient_basis(TWO_LEG_SUPPORT, s + 1, color_legs=TWO_LEG_LEGS)
        parts[s] = TwoLeg(Combination(TWO_LEG_SUPPORT, {b: rng.randint(-3, 3) or 1 for b in q.basis}))
    Ad = TwoLegSeries(parts, top - 1)
    Bd = invert_anomaly(Ad)
    ok, count = True, 0
    for sup in (S1, I1):
        for n in range(top + 1):
            for b in quotient_basis(sup, n).basis:
                x = _unit_vector(sup, b)
                count += 1
                ok &= is_zero_class(psi_apply(Ad, psi_apply(Bd, x, top), top) - x)
    res.add("Psi(A) o Psi(B) is the identity on chord classes, degree <= 4", ok, f"{count} classes")
    return res


def suite_coboundary(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("coboundary")
    top = cfg.degree(2)
    dd = all(
        not asc.residual_norm(asc.coboundary_d(asc.coboundary_d(b)))
        for n in range(top + 1)
        for b in asc.iter_basis(2, n)
    )
    res.add(f"d o d = 0 on P(2), degree <= {top}", dd)
    res.add("d(a12) = 0", not asc.residual_norm(asc.coboundary_d(asc.chord(1, 2, 2))))
    rng = cfg.rng("coboundary")
    fails, alt = 0, 0
    for _ in range(20):
        psi = asc.coboundary_d(asc.random_admissible(rng, 2))
        fails += not all(asc.check_psi_constraints(psi, 2).values())
        alt += bool(asc.residual_norm(asc.hexagon_form(psi)))
    res.add("d(f) satisfies C1-C4 for 20 random admissible f, degree 2", not fails, f"{fails} violations")
    res.add("d(f) satisfies the hexagon form psi - psi^132 + psi^312 = 0", not alt)
    a12 = asc.check_psi_constraints(asc.chord(1, 2, 3), 1)
    res.add("psi = a12 violates C4", not a12["C4"])
    ok = True
    for n in range(1, top + 1):
        for _ in range(3):
            f0 = asc.random_admissible(rng, n)
            psi = asc.coboundary_d(f0)
            f = asc.solve_coboundary(psi, n)
            ok &= not asc.residual_norm(asc.coboundary_d(f) - psi)
            ok &= not asc.residual_norm(f - asc.permute_strands(f, "21"))
            ok &= not asc.residual_norm(asc.epsilon(f, 1))
    res.add(f"solve_coboundary round-trips d(f0), degree <= {top}", ok)
    return res


def suite_pentagon_hexagon(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("pentagon-hexagon")
    phi = GradedSeries.of(asc.unit(3) + asc.chord(1, 2, 3), 1)
    r = asc.check_pentagon(phi)
    res.add("pentagon residual of 1 + a12 is -a12", not asc.residual_norm(r.value + asc.chord(1, 2, 4)), f"norm {asc.residual_norm(r)}")
    res.add("pentagon residual of 1 is 0", not asc.residual_norm(asc.check_pentagon(GradedSeries.one(asc.strands(3), 2))))
    half = GradedSeries.of(asc.chord(1, 2, 2) * Fraction(1, 2), 2)
    for N, want_zero in ((1, True), (2, False)):
        R = exp_series(GradedSeries.of(half.value, N))
        h = asc.check_hexagon(GradedSeries.one(asc.strands(3), N), R)
        norm = asc.residual_norm(h)
        res.add(f"hexagon of (1, exp(a12/2)) {'vanishes' if want_zero else 'is nonzero'} at N = {N}", (norm == 0) == want_zero, f"norm {norm}")
    chord_I = Combination.of(chord_diagram(I1, [((0, 0), (0, 1))]))
    a = GradedSeries.of(chord_I * Fraction(1, 2), 3)
    X1 = crossing_from_anomaly(a, 1)
    res.add("crossing from anomaly chord/2 at N = 1 is 1 + a12/2", X1.value == asc.unit(2) + asc.chord(1, 2, 2) * Fraction(1, 2))
    X3 = crossing_from_anomaly(a, 3)
    res.add("crossing is symmetric under strand exchange to N = 3", not asc.residual_norm(X3.value - asc.permute_strands(X3.value, "21")))
    return res


def suite_denominators(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("denominators")
    d3, D1 = den.bound("d", 3).value, den.bound("D", 1).value
    res.add("d(3) = D(1) = 3840", d3 == D1 == 3840, f"d(3)={d3} D(1)={D1}")
    m = cfg.max_param
    for ident in den.OBLIGATIONS:
        c = den.verify_divisibility(ident, m)
        detail = f"{c.checked} tuples" if c.passed else " ".join(c.lines()[-2:])
        res.add(f"{ident}: {c.statement}", c.passed, detail)
    mutated = [den.verify_divisibility(i, m, den.Bounds(d=den.without_nine_for_odd_d)) for i in den.CORE_OBLIGATIONS]
    caught = [c for c in mutated if not c.passed]
    res.add(
        "dropping 3^2 from odd d(n) is caught with a witness",
        bool(caught) and all(c.witness for c in caught),
        "; ".join(f"{c.obligation} at {' '.join(f'{k}={v}' for k, v in c.witness.items())} prime {c.prime}" for c in caught),
    )
    x = asc.chord(1, 2, 2)
    res.add("combo_denominator of a12/2 + a12/3 is 6", den.combo_denominator(x / 2 + x / 3) == 6)
    return res


SUITES: dict[str, Callable[[SuiteConfig], SuiteResult]] = {
    "slide": suite_slide,
    "stu4t": suite_stu4t,
    "pbw": suite_pbw,
    "eigen": suite_eigen,
    "vogel": suite_vogel,
    "psi": suite_psi,
    "bseries": suite_bseries,
    "coboundary": suite_coboundary,
    "pentagon-hexagon": suite_pentagon_hexagon,
    "denominators": suite_denominators,
}


def run_suite(name: str, cfg: SuiteConfig | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return SUITES[name](cfg or SuiteConfig())
