"""Denominator bounds, divisibility certificates and exact denominators.

The bounds are factorial products; every value is an exact Python integer.
Divisibility obligations are checked tuple by tuple; a failure records the
first offending tuple and a prime whose exponent is too small.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd, lcm, prod
from typing import Callable, Iterator

from .combination import Combination
from .quotients import QuotientSpace, quotient_basis

KINDS = ("d", "D", "D2")


class BoundDomainError(ValueError):
    pass


@lru_cache(maxsize=None)
def superfactorial_from_2(m: int) -> int:
    """2!3!...m! (the empty product 1 when m < 2)."""
    return prod(factorial(j) for j in range(2, m + 1))


def d_bound(n: int) -> int:
    """Denominator bound for the degree-n part of the framed-link invariant."""
    if n < 3:
        raise BoundDomainError(f"d(n) needs n >= 3, got {n}")
    if n <= 8:
        return factorial(3 * n - 4) * 2 ** (3 * n - 4)
    if n % 2:
        return superfactorial_from_2(n - 5) * factorial(n - 5) * 9 * factorial(3 * n - 4) * 2 ** (2 * n + 1)
    return superfactorial_from_2(n - 6) * factorial(n - 6) * 9 * factorial(3 * n - 4) * 2 ** (2 * n - 1)


def D_bound(k: int) -> int:
    """Bound for the two-leg coefficient B_{2k}."""
    if k < 1:
        raise BoundDomainError(f"D(k) needs k >= 1, got {k}")
    if k <= 3:
        return factorial(6 * k - 1) * 2 ** (6 * k - 1)
    return superfactorial_from_2(2 * k - 4) * factorial(2 * k - 4) * 9 * factorial(6 * k - 1) * 2 ** (4 * k + 3)


def D2_bound(n: int) -> int:
    """Two-leg denominator bound D(2;n) for twice the degree-n anomaly."""
    if n < 5:
        raise BoundDomainError(f"D(2;n) needs n >= 5, got {n}")
    return (
        superfactorial_from_2(n - 1)
        * (factorial(n - 1) // factorial(n - 4))
        * factorial(3 * n - 4)
        * 2 ** (2 * n - 3)
    )


def d_u(n: int, u: int) -> int:
    """2!3!...(u-1)!(3n-u)!2^(3n-u), the PBW bound for u-leg pieces."""
    return superfactorial_from_2(u - 1) * factorial(3 * n - u) * 2 ** (3 * n - u)


_FORMULAS: dict[str, Callable[[int], int]] = {"d": d_bound, "D": D_bound, "D2": D2_bound}
_LARGEST_FACTOR = {"d": lambda p: 3 * p - 4, "D": lambda p: 6 * p - 1, "D2": lambda p: 3 * p - 4}


@lru_cache(maxsize=None)
def primes_up_to(m: int) -> tuple[int, ...]:
    if m < 2:
        return ()
    sieve = bytearray([1]) * (m + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(m**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i, f in enumerate(sieve) if f)


def factorize_smooth(value: int, bound: int) -> dict[int, int]:
    """Trial division by the primes up to ``bound``; the cofactor must be 1."""
    out = {}
    for p in primes_up_to(bound):
        e = 0
        while value % p == 0:
            value //= p
            e += 1
        if e:
            out[p] = e
    if value != 1:
        raise ValueError(f"value is not {bound}-smooth (cofactor {value})")
    return out


def valuation(value: int, p: int) -> int:
    if value == 0:
        raise ValueError("valuation of zero")
    e = 0
    while value % p == 0:
        value //= p
        e += 1
    return e


@dataclass(frozen=True)
class DenominatorBound:
    kind: str
    parameter: int
    value: int
    factorization: dict[int, int] = field(default_factory=dict, compare=False)

    @property
    def label(self) -> str:
        return {"d": "d({})", "D": "D({})", "D2": "D(2;{})"}[self.kind].format(self.parameter)


def bound(kind: str, parameter: int, *, factor: bool = True) -> DenominatorBound:
    if kind not in _FORMULAS:
        raise ValueError(f"unknown bound kind {kind!r}; expected one of {KINDS}")
    value = _FORMULAS[kind](parameter)
    fac = factorize_smooth(value, _LARGEST_FACTOR[kind](parameter)) if factor else {}
    return DenominatorBound(kind, parameter, value, fac)


# ---------------------------------------------------------------------------
# divisibility obligations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bounds:
    """The three bound functions an obligation is checked against."""

    d: Callable[[int], int] = d_bound
    D: Callable[[int], int] = D_bound
    D2: Callable[[int], int] = D2_bound


STANDARD = Bounds()


def without_nine_for_odd_d(n: int) -> int:
    """d(n) with the factor 3^2 dropped on the odd branch; for mutation tests."""
    v = d_bound(n)
    return v // 9 if n >= 9 and n % 2 else v


@dataclass(frozen=True)
class Obligation:
    ident: str
    statement: str
    range_text: str
    # yields (parameter tuple, divisor, dividend)
    tuples: Callable[[Bounds, int], Iterator[tuple[dict[str, int], int, int]]]


def _d_base(b: Bounds, m: int):
    for n in range(3, m + 1):
        yield {"n": n}, factorial(3 * n - 4) * 2 ** (3 * n - 4), b.d(n)


def _D_odd(b: Bounds, m: int):
    for k in range(1, m + 1):
        yield {"k": k}, b.D(k), b.d(2 * k + 1)


def _D_even(b: Bounds, m: int):
    for k in range(1, m + 1):
        yield {"k": k}, 24 * b.D(k), b.d(2 * k + 2)


def _D_r(b: Bounds, m: int):
    for k in range(2, m + 1):
        for r in range(3, m + 1):
            yield {"k": k, "r": r}, factorial(3 * r - 4) * 2 ** (3 * r - 4) * b.D(k), b.d(2 * k + r)


def _D_mult(b: Bounds, m: int):
    for s in range(2, m + 1):
        for k1 in range(1, s // 2 + 1):
            yield {"k1": k1, "k2": s - k1}, b.D(k1) * b.D(s - k1), b.D(s)


def _D2_low(b: Bounds, m: int):
    for n in range(5, m + 1):
        for u in range(4, n + 1):
            yield {"n": n, "u": u}, d_u(n, u), 2 * b.D2(n)


def _D2_top(b: Bounds, m: int):
    for n in range(5, m + 1):
        yield {"n": n, "u": n + 1}, d_u(n, n + 1), 2 * b.D2(n)


def _B_base(b: Bounds, m: int):
    for k in range(1, m + 1):
        yield {"k": k}, factorial(6 * k - 1) * 2 ** (6 * k - 1), b.D(k)


def _B_two_leg(b: Bounds, m: int):
    for s in range(4, m + 1):
        for k1 in range(2, s // 2 + 1):
            yield {"k1": k1, "k2": s - k1}, b.D2(2 * k1 + 1) * b.D2(2 * (s - k1) + 1), b.D(s)


def _B_mixed(b: Bounds, m: int):
    for s in range(6, m + 1):
        for k1 in range(2, s - 3):
            yield {"k1": k1, "k": s - k1}, b.D2(2 * k1 + 1) * b.D(s - k1), b.D(s)


OBLIGATIONS: dict[str, Obligation] = {
    o.ident: o
    for o in [
        Obligation("d-base", "(3n-4)! 2^(3n-4) | d(n)", "3 <= n <= max", _d_base),
        Obligation("D-odd", "D(k) | d(2k+1)", "1 <= k <= max", _D_odd),
        Obligation("D-even", "24 D(k) | d(2k+2)", "1 <= k <= max", _D_even),
        Obligation("D-r", "(3r-4)! 2^(3r-4) D(k) | d(2k+r)", "2 <= k <= max, 3 <= r <= max", _D_r),
        Obligation("Dmult", "D(k1) D(k2) | D(k1+k2)", "k1, k2 >= 1, k1+k2 <= max", _D_mult),
        Obligation("D2-u-le-n", "d_u | 2 D(2;n)", "5 <= n <= max, 4 <= u <= n", _D2_low),
        Obligation("D2-u-eq-n+1", "d_(n+1) | 2 D(2;n)", "5 <= n <= max", _D2_top),
        Obligation("B-base", "(6k-1)! 2^(6k-1) | D(k)", "1 <= k <= max", _B_base),
        Obligation("B-two-leg", "D(2;2k1+1) D(2;2k2+1) | D(k1+k2)", "2 <= k1 <= k2, k1+k2 <= max", _B_two_leg),
        Obligation("B-mixed", "D(2;2k1+1) D(k) | D(k+k1)", "k1 >= 2, k >= 4, k+k1 <= max", _B_mixed),
    ]
}

# the obligations behind the framed-link bound and the two-leg bound
CORE_OBLIGATIONS = ("d-base", "D-odd", "D-even", "D-r", "Dmult", "D2-u-le-n", "D2-u-eq-n+1")


@dataclass(frozen=True)
class Certificate:
    obligation: str
    statement: str
    range_text: str
    max: int
    checked: int
    passed: bool
    witness: dict[str, int] | None = None
    prime: int | None = None
    exponents: tuple[int, int] | None = None  # (needed, available)

    def lines(self) -> list[str]:
        out = [
            f"obligation: {self.obligation}",
            f"statement: {self.statement}",
            f"range: {self.range_text} (max={self.max})",
            f"checked: {self.checked}",
            f"result: {'pass' if self.passed else 'fail'}",
        ]
        if not self.passed:
            w = " ".join(f"{k}={v}" for k, v in self.witness.items())
            out.append(f"witness: {w}")
            out.append(f"prime: {self.prime} (exponent needed {self.exponents[0]}, available {self.exponents[1]})")
        return out

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"


def _failing_prime(divisor: int, dividend: int) -> tuple[int, int, int]:
    g = gcd(divisor, dividend)
    rest = divisor // g
    p = 2
    while rest % p:
        p += 1 if p == 2 else 2
    return p, valuation(divisor, p), valuation(dividend, p)


def verify_divisibility(obligation: str, max_param: int, bounds: Bounds = STANDARD) -> Certificate:
    """Check one obligation for every parameter tuple up to ``max_param``."""
    ob = OBLIGATIONS.get(obligation)
    if ob is None:
        raise ValueError(f"unknown obligation {obligation!r}; known: {', '.join(OBLIGATIONS)}")
    checked = 0
    for params, divisor, dividend in ob.tuples(bounds, max_param):
        checked += 1
        if dividend % divisor:
            p, need, have = _failing_prime(divisor, dividend)
            return Certificate(ob.ident, ob.statement, ob.range_text, max_param, checked, False, params, p, (need, have))
    return Certificate(ob.ident, ob.statement, ob.range_text, max_param, checked, True)


# ---------------------------------------------------------------------------
# denominators of computed elements
# ---------------------------------------------------------------------------


class _Lattice:
    """Integer row lattice in Hermite form (pivot = first nonzero column)."""

    def __init__(self, width: int):
        self.width = width
        self.rows: dict[int, list[int]] = {}

    def add(self, v: list[int]) -> None:
        v = list(v)
        for c in range(self.width):
            if not v[c]:
                continue
            p = self.rows.get(c)
            if p is None:
                self.rows[c] = v if v[c] > 0 else [-x for x in v]
                return
            a, b = p[c], v[c]
            g, s, t = _xgcd(a, b)
            top = [s * x + t * y for x, y in zip(p, v)]
            v = [(a // g) * y - (b // g) * x for x, y in zip(p, v)]
            self.rows[c] = top if top[c] > 0 else [-x for x in top]

    def coordinates(self, target: list[Fraction]) -> list[Fraction]:
        """y with sum y_c * rows[c] = target (the lattice has full rank)."""
        if len(self.rows) != self.width:
            raise ValueError("lattice is not of full rank")
        rest = list(target)
        y = []
        for c in range(self.width):
            row = self.rows[c]
            coeff = Fraction(rest[c]) / row[c]
            y.append(coeff)
            if coeff:
                rest = [r - coeff * x for r, x in zip(rest, row)]
        return y


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


_lattices: dict[tuple, tuple[int, _Lattice]] = {}


def _integral_lattice(q: QuotientSpace) -> tuple[int, _Lattice]:
    """Lattice spanned by the images of all spanning diagrams, scaled by M."""
    key = (q.support, q.degree, q.method, q.color_legs)
    hit = _lattices.get(key)
    if hit is not None:
        return hit
    index = {b: i for i, b in enumerate(q.basis)}
    vectors = []
    for red in q.reduction.values():
        vec = [Fraction(0)] * q.dim
        for b, v in red.items():
            vec[index[b]] = Fraction(v)
        vectors.append(vec)
    scale = lcm(1, *(v.denominator for vec in vectors for v in vec))
    lat = _Lattice(q.dim)
    for vec in vectors:
        lat.add([int(v * scale) for v in vec])
    _lattices[key] = (scale, lat)
    return scale, lat


def class_denominator(x: Combination, q: QuotientSpace) -> int:
    """Least N > 0 such that N times the class of x is an integral combination of diagrams."""
    coords = q.coordinates(x)
    if not coords:
        return 1
    scale, lat = _integral_lattice(q)
    target = [Fraction(coords.get(b, 0)) * scale for b in q.basis]
    return lcm(1, *(y.denominator for y in lat.coordinates(target)))


def combo_denominator(x: Combination) -> int:
    """Denominator of the class of x, degree by degree.

    On skeleton supports the lattice is that of chord diagrams (through
    chordify); with colors it is spanned by all uni-trivalent diagrams.
    """
    out = 1
    for n in x.degrees():
        q = quotient_basis(x.support, n)
        out = lcm(out, class_denominator(x.part(n), q))
    return out


def representative_denominator(x: Combination) -> int:
    """lcm of the coefficient denominators of this particular representative."""
    return x.denominator()
