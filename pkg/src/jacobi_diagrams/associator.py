"""Non-associative words, twist cabling and the coboundary on strand algebras.

``P(r)`` is the algebra of diagrams on ``r`` upward intervals, multiplied
by stacking.  Strands are numbered from 1 in this module, matching the
usual notation ``Δ_i``, ``ε_i`` and ``a_ij``.  Elements are plain
:class:`Combination` values (homogeneous pieces) or :class:`GradedSeries`
(truncated series such as Φ, R and F).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .combination import Combination
from .diagram import INTERVAL, Support, chord_diagram
from .linalg import solve
from .morphisms import (
    add_empty_component,
    delete_component,
    duplicate_component,
    permute_components,
    tensor_product,
)
from .quotients import graded_coordinates, quotient_basis
from .series import GradedSeries, series_calculus

LETTER = "·"
MAX_SOLVE_DEGREE = 3


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NotATwist(ValueError):
    pass


class NoSolution(RuntimeError):
    """d(f) = ψ has no admissible solution although ψ passed C1-C4."""


class ConstraintViolation(ValueError):
    def __init__(self, failed: list[str]):
        super().__init__("ψ violates " + ", ".join(failed))
        self.failed = failed


# ---------------------------------------------------------------------------
# non-associative words
# ---------------------------------------------------------------------------

# a tree is LETTER or a pair (left, right); the empty word has tree None
Tree = object


@dataclass(frozen=True)
class NAWord:
    tree: Tree = None

    @property
    def length(self) -> int:
        return _leaves(self.tree)

    def split(self) -> tuple[NAWord, NAWord]:
        """The unique factorization w = w'w'' of a word of length >= 2."""
        if not isinstance(self.tree, tuple):
            raise ValueError("only words of length >= 2 factor")
        return NAWord(self.tree[0]), NAWord(self.tree[1])

    def delete(self, i: int) -> NAWord:
        """Remove the i-th letter (1-based); its parent collapses."""
        if not 1 <= i <= self.length:
            raise ValueError(f"letter {i} not in a word of length {self.length}")
        return NAWord(_delete(self.tree, i))

    def expand(self, i: int) -> NAWord:
        """Replace the i-th letter by (··)."""
        if not 1 <= i <= self.length:
            raise ValueError(f"letter {i} not in a word of length {self.length}")
        return NAWord(_expand(self.tree, i))

    def flip(self) -> NAWord:
        return NAWord(_flip(self.tree))

    def __str__(self) -> str:
        return _print(self.tree)


def _leaves(t) -> int:
    if t is None:
        return 0
    if t == LETTER:
        return 1
    return _leaves(t[0]) + _leaves(t[1])


def _delete(t, i):
    if t == LETTER:
        return None
    n = _leaves(t[0])
    if i <= n:
        left = _delete(t[0], i)
        return t[1] if left is None else (left, t[1])
    right = _delete(t[1], i - n)
    return t[0] if right is None else (t[0], right)


def _expand(t, i):
    if t == LETTER:
        return (LETTER, LETTER)
    n = _leaves(t[0])
    return (_expand(t[0], i), t[1]) if i <= n else (t[0], _expand(t[1], i - n))


def _flip(t):
    return t if t is None or t == LETTER else (_flip(t[1]), _flip(t[0]))


def _print(t) -> str:
    if t is None:
        return ""
    if t == LETTER:
        return LETTER
    return "(" + _print(t[0]) + _print(t[1]) + ")"


def parse_word(text: str) -> NAWord:
    """Parse a fully parenthesized word over ``·`` (``.`` also accepted)."""
    chars = [(i, c) for i, c in enumerate(text) if not c.isspace()]
    if not chars:
        return NAWord(None)
    pos = 0

    def node():
        nonlocal pos
        if pos >= len(chars):
            raise WordSyntaxError("unexpected end of word", len(text))
        i, c = chars[pos]
        if c in (LETTER, "."):
            pos += 1
            return LETTER
        if c != "(":
            raise WordSyntaxError(f"unexpected {c!r}", i)
        pos += 1
        left = node()
        right = node()
        if pos >= len(chars) or chars[pos][1] != ")":
            where = chars[pos][0] if pos < len(chars) else len(text)
            raise WordSyntaxError("expected ')'", where)
        pos += 1
        return (left, right)

    tree = node()
    if pos != len(chars):
        raise WordSyntaxError("trailing input", chars[pos][0])
    return NAWord(tree)


def words_of_length(n: int) -> list[NAWord]:
    return [NAWord(t) for t in _trees(n)]


@lru_cache(maxsize=None)
def _trees(n: int) -> tuple:
    if n == 0:
        return (None,)
    if n == 1:
        return (LETTER,)
    return tuple((a, b) for k in range(1, n) for a in _trees(k) for b in _trees(n - k))


# ---------------------------------------------------------------------------
# strand algebras
# ---------------------------------------------------------------------------


def strands(r: int) -> Support:
    return Support((INTERVAL,) * r)


def unit(r: int) -> Combination:
    return Combination.one(strands(r))


def chord(i: int, j: int, r: int) -> Combination:
    """a_ij: one chord between strands i and j of P(r)."""
    if i == j or not (1 <= i <= r and 1 <= j <= r):
        raise ValueError(f"bad strand pair ({i}, {j}) for {r} strands")
    return Combination.of(chord_diagram(strands(r), [((i - 1, 0), (j - 1, 0))]))


def _lift(x, f):
    if isinstance(x, GradedSeries):
        return GradedSeries.of(f(x.value), x.N)
    return f(x)


def _count(x) -> int:
    return len((x.value if isinstance(x, GradedSeries) else x).support.components)


def delta(x, i: int):
    """Δ_i: double the i-th strand."""
    return _lift(x, lambda v: duplicate_component(v, i - 1, 2))


def epsilon(x, i: int):
    """ε_i: delete the i-th strand (terms touching it vanish)."""
    return _lift(x, lambda v: delete_component(v, i - 1))


def one_tensor(x):
    """1 ⊗ x: a new bare strand on the left."""
    return _lift(x, lambda v: add_empty_component(v, 0))


def tensor_one(x):
    """x ⊗ 1: a new bare strand on the right."""
    return _lift(x, lambda v: add_empty_component(v, len(v.support.components)))


def _one_line(sigma) -> list[int]:
    if isinstance(sigma, str):
        sigma = [int(c) for c in sigma]
    sigma = list(sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise ValueError(f"{sigma} is not a permutation in one-line notation")
    return sigma


def permute_strands(x, sigma):
    """x^σ: strand i goes to strand σ(i); σ in one-line notation ("132")."""
    perm = [s - 1 for s in _one_line(sigma)]
    if len(perm) != _count(x):
        raise ValueError("permutation size differs from the strand count")
    return _lift(x, lambda v: permute_components(v, perm))


def compose(tau, sigma) -> str:
    """τσ in one-line notation, so that (x^σ)^τ = x^{τσ}."""
    t, s = _one_line(tau), _one_line(sigma)
    return "".join(str(t[s[i] - 1]) for i in range(len(s)))


def reverse_strands(x):
    """r_v: reverse the order of the strands."""
    r = _count(x)
    return permute_strands(x, [r - i for i in range(r)])


def embed(x, i: int, r: int):
    """Place an element of P(k) on strands i .. i+k-1 of P(r)."""
    k = _count(x)
    if not (1 <= i and i + k - 1 <= r):
        raise ValueError(f"strands {i}..{i + k - 1} do not fit in {r}")
    for _ in range(i - 1):
        x = one_tensor(x)
    for _ in range(r - i - k + 1):
        x = tensor_one(x)
    return x


def _zero(x: Combination) -> bool:
    return not graded_coordinates(x)


# ---------------------------------------------------------------------------
# twists
# ---------------------------------------------------------------------------


def is_twist(F: GradedSeries) -> bool:
    """Symmetric element of P(2) whose first deletion is 1."""
    if F.support != strands(2):
        return False
    sym = F.value - permute_strands(F.value, "21")
    eps = epsilon(F.value, 1) - unit(1)
    return _zero(sym) and _zero(eps)


def twist_cable(F: GradedSeries, w: NAWord | str) -> GradedSeries:
    """The element ℱ(w) of P(ℓ(w)) built from a twist F by recursion on w."""
    if not is_twist(F):
        raise NotATwist("F must be symmetric with ε_1(F) = 1")
    if isinstance(w, str):
        w = parse_word(w)
    return _cable(F, w.tree)


def _cable(F: GradedSeries, t) -> GradedSeries:
    if t is None or t == LETTER:
        return GradedSeries.one(strands(_leaves(t)), F.N)
    l1, l2 = _leaves(t[0]), _leaves(t[1])
    spread = duplicate_component(duplicate_component(F.value, 1, l2), 0, l1)
    left = GradedSeries.of(spread, F.N)
    a, b = _cable(F, t[0]), _cable(F, t[1])
    return left * tensor_series(a, b)


def tensor_series(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    n = min(a.N, b.N)
    support = Support(a.support.components + b.support.components)
    out = Combination(support)
    for i in a.value.degrees():
        for j in b.value.degrees():
            if i + j <= n:
                out = out + tensor_product(a.part(i), b.part(j))
    return GradedSeries(support, n, out)


def twist_from(f: Combination, N: int) -> GradedSeries:
    """1 + f as a series; f should be admissible (see :func:`admissible`)."""
    return GradedSeries.of(unit(2) + f, N)


# ---------------------------------------------------------------------------
# coboundary and the constraint system
# ---------------------------------------------------------------------------


def coboundary_d(f):
    """d f = 1⊗f − Δ_1 f + Δ_2 f − … + (−1)^{n+1} f⊗1 for f in P(n)."""
    n = _count(f)
    out = one_tensor(f)
    for i in range(1, n + 1):
        term = delta(f, i)
        out = out - term if i % 2 else out + term
    last = tensor_one(f)
    return out + last if (n + 1) % 2 == 0 else out - last


def admissible(f: Combination) -> Combination:
    """Project f in P(2) onto symmetric elements with ε_1 = 0."""
    s = (f + permute_strands(f, "21")) * Fraction(1, 2)
    return s - delta(epsilon(s, 1), 1)


def random_admissible(rng: random.Random, degree: int, spread: int = 5) -> Combination:
    q = quotient_basis(strands(2), degree)
    f = Combination(strands(2), {b: rng.randint(-spread, spread) for b in q.basis})
    return admissible(f)


CONSTRAINTS = ("C1", "C2", "C3", "C4")


def constraint_residuals(psi: Combination) -> dict[str, list[Combination]]:
    """The expressions that C1-C4 require to vanish."""
    if psi.support != strands(3):
        raise ValueError("ψ must live on three strands")
    return {
        "C1": [coboundary_d(psi)],
        "C2": [psi - permute_strands(psi, "132") - permute_strands(psi, "213")],
        "C3": [permute_strands(psi, "321") + psi],
        "C4": [epsilon(psi, i) for i in (1, 2, 3)],
    }


def hexagon_form(psi: Combination) -> Combination:
    """ψ − ψ^{132} + ψ^{312}, the hexagon's linearization (equivalent to C2 given C3)."""
    return psi - permute_strands(psi, "132") + permute_strands(psi, "312")


def check_psi_constraints(psi: Combination, degree: int | None = None) -> dict[str, bool]:
    if degree is not None and any(d != degree for d in psi.degrees()):
        raise ValueError(f"ψ is not homogeneous of degree {degree}")
    return {name: all(_zero(r) for r in rs) for name, rs in constraint_residuals(psi).items()}


def solve_coboundary(psi: Combination, degree: int) -> Combination:
    """A symmetric f in P(2) of the given degree with ε_1 f = 0 and d f = ψ."""
    if degree > MAX_SOLVE_DEGREE:
        raise ValueError(f"solving is capped at degree {MAX_SOLVE_DEGREE}")
    report = check_psi_constraints(psi, degree)
    failed = [c for c in CONSTRAINTS if not report[c]]
    if failed:
        raise ConstraintViolation(failed)
    q2 = quotient_basis(strands(2), degree)
    q3 = quotient_basis(strands(3), degree)
    q1 = quotient_basis(strands(1), degree)
    columns = []
    for b in q2.basis:
        x = Combination(strands(2), {b: 1})
        col = {}
        for k, v in q3.coordinates(coboundary_d(x)).items():
            col[("d", k)] = v
        for k, v in q2.coordinates(x - permute_strands(x, "21")).items():
            col[("sym", k)] = v
        for k, v in q1.coordinates(epsilon(x, 1)).items():
            col[("eps", k)] = v
        columns.append(col)
    target = {("d", k): v for k, v in q3.coordinates(psi).items()}
    x = solve(columns, target)
    if x is None:
        raise NoSolution(f"no admissible f with d f = ψ in degree {degree}")
    return Combination(strands(2), {q2.basis[j]: v for j, v in x.items()})


# ---------------------------------------------------------------------------
# pentagon and hexagon
# ---------------------------------------------------------------------------


def _as_series(x, N: int | None = None) -> GradedSeries:
    if isinstance(x, GradedSeries):
        return x if N is None else GradedSeries.of(x.value, min(N, x.N))
    return GradedSeries.of(x, N if N is not None else max(x.degrees(), default=0))


def check_pentagon(phi: GradedSeries) -> GradedSeries:
    """Δ_1(Φ)Δ_3(Φ) − (Φ⊗1)Δ_2(Φ)(1⊗Φ) in P(4), to Φ's truncation."""
    if phi.support != strands(3) or phi.degree0() != 1:
        raise ValueError("Φ must be a series on three strands starting with 1")
    lhs = delta(phi, 1) * delta(phi, 3)
    rhs = tensor_one(phi) * delta(phi, 2) * one_tensor(phi)
    return lhs - rhs


def check_hexagon(phi: GradedSeries, R: GradedSeries) -> GradedSeries:
    """Δ_1(R) − Φ·(1⊗R)·(Φ^{132})^{-1}·R_{13}·Φ^{312} in P(3).

    The factor written R⊗1 in the tangle picture crosses strands 1 and 3
    once the first crossing has moved strand 1 across, so it enters as
    R_{13} = (R⊗1)^{132}.  This placement is the one for which Φ = 1 and
    R = exp(a_12/2) satisfy the equation in degree 1.
    """
    if phi.support != strands(3) or phi.degree0() != 1:
        raise ValueError("Φ must be a series on three strands starting with 1")
    if R.support != strands(2) or R.degree0() != 1:
        raise ValueError("R must be a series on two strands starting with 1")
    n = min(phi.N, R.N)
    phi, R = _as_series(phi, n), _as_series(R, n)
    inv = series_calculus(permute_strands(phi, "132"), "inverse")
    r13 = permute_strands(tensor_one(R), "132")
    rhs = phi * one_tensor(R) * inv * r13 * permute_strands(phi, "312")
    return delta(R, 1) - rhs


def residual_coordinates(x) -> dict[int, dict[bytes, Fraction]]:
    """Nonzero quotient coordinates of each degree of a residual."""
    v = x.value if isinstance(x, GradedSeries) else x
    return graded_coordinates(v)


def residual_norm(x) -> int:
    """Number of nonzero basis coordinates over all degrees."""
    return sum(len(c) for c in residual_coordinates(x).values())


def iter_basis(r: int, degree: int) -> Iterator[Combination]:
    q = quotient_basis(strands(r), degree)
    for b in q.basis:
        yield Combination(strands(r), {b: 1})
