"""Finite formal sums of canonical diagrams with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Iterator

from .diagram import Diagram, DiagramSyntaxError, Support, canonicalize, decode, parse_diagram, serialize_diagram


def degree_of(encoding: bytes) -> int:
    return (encoding[0] + encoding[1]) // 2


def legs_of(encoding: bytes) -> int:
    return encoding[1]


class Combination:
    """Element of the free vector space on diagrams of one support.

    Terms are keyed by canonical encoding; zero coefficients and
    AS-vanishing diagrams are never stored.
    """

    __slots__ = ("support", "terms")

    def __init__(self, support: Support, terms: dict[bytes, Fraction] | None = None):
        self.support = support
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def of(cls, d: Diagram, coeff=1) -> Combination:
        sc = canonicalize(d)
        if sc.sign == 0 or not coeff:
            return cls(d.support)
        return cls(d.support, {sc.encoding: Fraction(coeff) * sc.sign})

    @classmethod
    def from_terms(cls, support: Support, pairs: Iterable[tuple[Diagram, object]]) -> Combination:
        acc: dict[bytes, Fraction] = {}
        for d, c in pairs:
            if not c:
                continue
            sc = canonicalize(d)
            if sc.sign:
                acc[sc.encoding] = acc.get(sc.encoding, 0) + Fraction(c) * sc.sign
        return cls(support, acc)

    @classmethod
    def one(cls, support: Support) -> Combination:
        return cls.of(Diagram.empty(support))

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: Combination) -> None:
        if other.support != self.support:
            raise ValueError(f"support mismatch: {self.support} vs {other.support}")

    def __add__(self, other: Combination) -> Combination:
        self._check(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return Combination(self.support, t)

    def __sub__(self, other: Combination) -> Combination:
        return self + (-other)

    def __neg__(self) -> Combination:
        return Combination(self.support, {k: -v for k, v in self.terms.items()})

    def __mul__(self, c) -> Combination:
        c = Fraction(c)
        return Combination(self.support, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c) -> Combination:
        return self * (1 / Fraction(c))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Combination)
            and self.support == other.support
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[bytes, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __repr__(self) -> str:
        return f"Combination({self.support}, {len(self.terms)} terms)"

    # -- structure --------------------------------------------------------

    def items(self) -> Iterator[tuple[Diagram, Fraction]]:
        """(canonical diagram, coefficient) pairs in encoding order."""
        for k, v in sorted(self.terms.items()):
            yield decode(self.support, k), v

    def degrees(self) -> list[int]:
        return sorted({degree_of(k) for k in self.terms})

    def part(self, degree: int) -> Combination:
        return Combination(self.support, {k: v for k, v in self.terms.items() if degree_of(k) == degree})

    def truncate(self, degree: int) -> Combination:
        return Combination(self.support, {k: v for k, v in self.terms.items() if degree_of(k) <= degree})

    def filter(self, keep: Callable[[bytes], bool]) -> Combination:
        return Combination(self.support, {k: v for k, v in self.terms.items() if keep(k)})

    def denominator(self) -> int:
        return lcm(1, *(v.denominator for v in self.terms.values()))

    def map(self, f: Callable[[Diagram], Combination], support: Support | None = None) -> Combination:
        """Linear extension of a map defined on diagrams."""
        out: dict[bytes, Fraction] = {}
        target = support
        for d, c in self.items():
            img = f(d)
            if target is None:
                target = img.support
            for k, v in img.terms.items():
                out[k] = out.get(k, 0) + c * v
        return Combination(target if target is not None else self.support, out)


def linear(f: Callable[[Diagram], Combination]) -> Callable[[Combination], Combination]:
    """Lift a diagram-level map to combinations."""

    def lifted(x: Combination, *args, **kwargs) -> Combination:
        return x.map(lambda d: f(d, *args, **kwargs))

    return lifted


_ZERO_PREFIX = "# zero on "


def serialize_combination(x: Combination) -> str:
    """Blocks of ``coeff: <rational>`` followed by a diagram, in encoding order."""
    blocks = [f"coeff: {c}\n" + serialize_diagram(d) for d, c in x.items()]
    if not blocks:
        return f"{_ZERO_PREFIX}{x.support}\n"
    return "\n".join(blocks)


def parse_combination(text: str, support: Support | None = None) -> Combination:
    """Inverse of :func:`serialize_combination`.

    A block without a ``coeff:`` line has coefficient 1, so a bare diagram
    file is read as that diagram.
    """
    blocks: list[tuple[Fraction, int, list[str]]] = []
    zero_support = None
    coeff, start, body = Fraction(1), 1, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("coeff:") or (not line and body):
            if body:
                blocks.append((coeff, start, body))
            coeff, start, body = Fraction(1), lineno + 1, []
            if line:
                try:
                    coeff = Fraction(line[len("coeff:") :].strip())
                except ValueError:
                    raise DiagramSyntaxError("malformed coefficient", lineno, 1) from None
            continue
        if line.startswith("#"):
            if line.startswith(_ZERO_PREFIX) and support is None:
                zero_support = Support.parse(line[len(_ZERO_PREFIX) :])
            continue
        if not body:
            start = lineno
        body.append(raw)
    if body:
        blocks.append((coeff, start, body))
    pairs = [(parse_diagram("\n".join(b), first_line=s), c) for c, s, b in blocks]
    if support is None:
        if not pairs and zero_support is not None:
            return Combination(zero_support)
        if not pairs:
            raise DiagramSyntaxError("no diagram and no support given", 1, 1)
        support = pairs[0][0].support
    for d, _ in pairs:
        if d.support != support:
            raise ValueError(f"mixed supports: {d.support} vs {support}")
    return Combination.from_terms(support, pairs)
