"""Sparse exact row reduction.

Rows are dicts ``column -> value``.  Columns are integers; a row's pivot is
its *largest* column, so the non-pivot (free) columns are the
lexicographically least set that spans the quotient.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def _integral(row: dict[int, Fraction]) -> dict[int, int]:
    den = lcm(1, *(Fraction(v).denominator for v in row.values()))
    out = {c: int(Fraction(v) * den) for c, v in row.items() if v}
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


class Echelon:
    """Incremental fraction-free echelon form over the integers."""

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: dict[int, object]) -> bool:
        """Insert a row; return True if it increased the rank."""
        r = _integral({c: Fraction(v) for c, v in row.items() if v})
        while r:
            c = max(r)
            p = self.pivots.get(c)
            if p is None:
                if r[c] < 0:
                    r = {k: -v for k, v in r.items()}
                self.pivots[c] = r
                return True
            a, b = p[c], r[c]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            new = {k: ma * v for k, v in r.items()}
            for k, v in p.items():
                w = new.get(k, 0) - mb * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            r = _integral(new) if new else {}
        return False

    def reduced(self) -> dict[int, dict[int, Fraction]]:
        """Pivot rows solved for their pivot: ``pivot = sum(coeff * free column)``.

        The returned mapping sends each pivot column to its expansion over
        free columns only.
        """
        solved: dict[int, dict[int, Fraction]] = {}
        for c in sorted(self.pivots):
            row = self.pivots[c]
            lead = Fraction(row[c])
            expr: dict[int, Fraction] = {}
            for k, v in row.items():
                if k == c:
                    continue
                coeff = -Fraction(v) / lead
                sub = solved.get(k)
                if sub is None:
                    expr[k] = expr.get(k, 0) + coeff
                else:
                    for kk, vv in sub.items():
                        expr[kk] = expr.get(kk, 0) + coeff * vv
            solved[c] = {k: v for k, v in expr.items() if v}
        return solved


def rank(rows: list[dict[int, object]]) -> int:
    e = Echelon()
    for r in rows:
        e.add(r)
    return e.rank


def kernel_basis(columns: list[dict[int, Fraction]], n: int) -> list[dict[int, Fraction]]:
    """Basis of {x : sum_j x_j * columns[j] = 0} for ``n`` unknowns.

    ``columns[j]`` is the image of the j-th unknown as a sparse vector.
    """
    # transpose: one row per coordinate of the target
    rows: dict[object, dict[int, Fraction]] = {}
    for j, col in enumerate(columns):
        for k, v in col.items():
            rows.setdefault(k, {})[j] = Fraction(v)
    e = Echelon()
    for r in rows.values():
        e.add(r)
    solved = e.reduced()
    free = [j for j in range(n) if j not in solved]
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for p, expr in solved.items():
            if f in expr:
                vec[p] = expr[f]
        basis.append(vec)
    return basis


def solve(columns: list[dict[object, Fraction]], target: dict[object, Fraction]) -> dict[int, Fraction] | None:
    """One solution x of sum_j x_j * columns[j] = target, or None.

    Free unknowns are set to zero.
    """
    keys = sorted({k for col in columns for k in col} | set(target), key=repr)
    index = {k: i for i, k in enumerate(keys)}
    rows: dict[int, dict[int, Fraction]] = {}
    for j, col in enumerate(columns):
        for k, v in col.items():
            rows.setdefault(index[k], {})[j] = Fraction(v)
    # the right-hand side sits in column -1, below every unknown
    for k, v in target.items():
        rows.setdefault(index[k], {})[-1] = -Fraction(v)
    e = Echelon()
    for r in rows.values():
        e.add(r)
    if -1 in e.pivots:
        return None
    x = {}
    for p, expr in e.reduced().items():
        if expr.get(-1):
            x[p] = expr[-1]
    return x
