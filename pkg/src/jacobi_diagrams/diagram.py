"""Uni-trivalent diagrams on a skeleton of intervals and circles plus colors.

A diagram is stored as a list of vertices and a perfect pairing of their
half-edge slots.  Vertices are tuples:

* ``("T",)`` -- trivalent; slots 0, 1, 2 listed in the vertex's cyclic order,
* ``("M", component, rank)`` -- univalent, on a skeleton component,
* ``("X", label)`` -- univalent, colored by ``label``.

Univalent vertices on the skeleton always carry the orientation induced by
the skeleton, so the only orientation data is the cyclic order at trivalent
vertices.  Reversing one of them multiplies a diagram by -1 (AS).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterator

INTERVAL = "I"
CIRCLE = "S1"

MAX_DEGREE = 6

Slot = tuple[int, int]
Edge = tuple[Slot, Slot]

# token kinds of the canonical encoding
_START, _NEW_T, _NEW_X, _OLD = 0, 1, 2, 3


class DiagramError(ValueError):
    """Invalid diagram data."""


class DiagramSyntaxError(DiagramError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class EnumerationCapError(ValueError):
    pass


@dataclass(frozen=True)
class Support:
    """Ordered skeleton components (``"I"`` or ``"S1"``) and a color set."""

    components: tuple[str, ...] = ()
    colors: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "colors", tuple(self.colors))
        for c in self.components:
            if c not in (INTERVAL, CIRCLE):
                raise DiagramError(f"unknown skeleton component {c!r}")
        if len(set(self.colors)) != len(self.colors):
            raise DiagramError("color labels must be distinct")

    @classmethod
    def parse(cls, text: str) -> Support:
        """Parse ``"S1"``, ``"I,I"``, ``"I/x"`` or ``"/x,y"``."""
        comps, _, cols = text.strip().partition("/")
        components = tuple(c.strip() for c in comps.split(",") if c.strip())
        colors = tuple(c.strip() for c in cols.split(",") if c.strip())
        return cls(components, colors)

    @classmethod
    def strands(cls, r: int) -> Support:
        return cls((INTERVAL,) * r)

    def __str__(self) -> str:
        s = ",".join(self.components)
        if self.colors:
            s += "/" + ",".join(self.colors)
        return s

    @property
    def has_colors(self) -> bool:
        return bool(self.colors)

    def color_index(self, label: str) -> int:
        return self.colors.index(label)

    def header(self) -> bytes:
        codes = [0 if c == INTERVAL else 1 for c in self.components]
        return bytes([len(codes), *codes, len(self.colors)])


def _norm_edge(a: Slot, b: Slot) -> Edge:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Diagram:
    support: Support
    vertices: tuple[tuple, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        verts = tuple(tuple(v) for v in self.vertices)
        edges = tuple(sorted(_norm_edge(tuple(a), tuple(b)) for a, b in self.edges))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def empty(cls, support: Support) -> Diagram:
        return cls(support, (), ())

    @cached_property
    def partner(self) -> dict[Slot, Slot]:
        p: dict[Slot, Slot] = {}
        for a, b in self.edges:
            p[a] = b
            p[b] = a
        return p

    @property
    def n_trivalent(self) -> int:
        return sum(1 for v in self.vertices if v[0] == "T")

    @property
    def n_legs(self) -> int:
        return len(self.vertices) - self.n_trivalent

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def degree(self) -> int:
        return len(self.vertices) // 2

    @property
    def is_chord_diagram(self) -> bool:
        return self.n_trivalent == 0 and not any(v[0] == "X" for v in self.vertices)

    def legs_on(self, component: int) -> list[int]:
        """Vertex ids of the legs on a skeleton component, by rank."""
        legs = [i for i, v in enumerate(self.vertices) if v[0] == "M" and v[1] == component]
        return sorted(legs, key=lambda i: self.vertices[i][2])

    def color_legs(self, label: str | None = None) -> list[int]:
        return [
            i
            for i, v in enumerate(self.vertices)
            if v[0] == "X" and (label is None or v[1] == label)
        ]

    def dashed_components(self) -> list[list[int]]:
        """Connected components of the dashed graph, as sorted vertex lists."""
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (v, _), (w, _) in self.edges:
            parent[find(v)] = find(w)
        groups: dict[int, list[int]] = {}
        for v in range(len(self.vertices)):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def is_connected(self) -> bool:
        return len(self.dashed_components()) <= 1


def _valence(vertex: tuple) -> int:
    return 3 if vertex[0] == "T" else 1


def validate(d: Diagram) -> str | None:
    """Return ``None`` for a valid diagram, else the first violated invariant."""
    sup = d.support
    for i, v in enumerate(d.vertices):
        if v[0] == "T":
            if len(v) != 1:
                return f"malformed pairing: vertex {i} has bad trivalent data"
        elif v[0] == "M":
            if len(v) != 3 or not (0 <= v[1] < len(sup.components)):
                return f"bad ranks: vertex {i} is on a missing component"
        elif v[0] == "X":
            if len(v) != 2 or v[1] not in sup.colors:
                return f"bad color: vertex {i} has unknown color {v[1:]!r}"
        else:
            return f"malformed pairing: vertex {i} has unknown kind {v[0]!r}"
    seen: set[Slot] = set()
    for a, b in d.edges:
        for v, s in (a, b):
            if not (0 <= v < len(d.vertices)) or not (0 <= s < _valence(d.vertices[v])):
                return f"malformed pairing: slot {(v, s)} does not exist"
            if (v, s) in seen:
                return f"malformed pairing: slot {(v, s)} paired twice"
            seen.add((v, s))
    for i, v in enumerate(d.vertices):
        for s in range(_valence(v)):
            if (i, s) not in seen:
                return f"malformed pairing: slot {(i, s)} is unpaired"
    for c in range(len(sup.components)):
        ranks = sorted(d.vertices[i][2] for i in d.legs_on(c))
        if ranks != list(range(len(ranks))):
            return f"bad ranks: component {c} has ranks {ranks}"
    for comp in d.dashed_components():
        if all(d.vertices[v][0] == "T" for v in comp):
            return "closed dashed component: a component has no univalent vertex"
    return None


def check(d: Diagram) -> Diagram:
    problem = validate(d)
    if problem:
        raise DiagramError(problem)
    return d


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignedCanonicalDiagram:
    """Canonical encoding plus the AS sign relating a diagram to it.

    ``sign == 0`` means the diagram has an orientation-reversing
    automorphism and therefore vanishes.
    """

    encoding: bytes
    sign: int
    support: Support

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @property
    def diagram(self) -> Diagram:
        return decode(self.support, self.encoding)


def _cyclic_sign(order: tuple[int, int, int]) -> int:
    return 1 if order in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1


class _Search:
    """Lexicographically least traversal encoding over all labelings.

    Skeleton legs are labelled first, in skeleton order (every rotation is
    tried on circles).  Then half-edges are consumed breadth first; each
    newly reached trivalent vertex branches on the order of its two free
    slots.  Branches whose token prefix already exceeds the best complete
    encoding are cut.
    """

    def __init__(self, d: Diagram):
        sup = d.support
        self.V = V = len(d.vertices)
        kinds = []
        for v in d.vertices:
            if v[0] == "T":
                kinds.append(-1)
            elif v[0] == "M":
                kinds.append(-2)
            else:
                kinds.append(sup.colors.index(v[1]))
        self.kinds = kinds
        partner = [-1] * (3 * V)
        for (v, s), (w, t) in d.edges:
            partner[3 * v + s] = 3 * w + t
            partner[3 * w + t] = 3 * v + s
        self.partner = partner
        self.comp_legs = [d.legs_on(c) for c in range(len(sup.components))]
        self.circle = [c == CIRCLE for c in sup.components]
        t = kinds.count(-1)
        self.header = bytes([t, V - t]) + sup.header() + bytes(len(l) for l in self.comp_legs)
        self.best: list[int] | None = None
        self.signs: set[int] = set()
        self.zero = False

    def run(self) -> tuple[bytes, int]:
        rotations = [
            range(len(legs)) if self.circle[c] and legs else range(1)
            for c, legs in enumerate(self.comp_legs)
        ]
        for rot in itertools.product(*rotations):
            anchors: list[int] = []
            for c, legs in enumerate(self.comp_legs):
                r = rot[c]
                anchors.extend(legs[r:] + legs[:r])
            labels = [-1] * self.V
            order: list = [None] * self.V
            for i, a in enumerate(anchors):
                labels[a] = i
                order[a] = (0,)
            queue = [3 * a for a in anchors]
            self._walk(labels, order, queue, 0, bytearray(3 * self.V), [], len(anchors))
            if self.zero:
                break
        enc = self.header + bytes(self.best or [])
        return enc, 0 if self.zero else next(iter(self.signs))

    def _cmp(self, tokens) -> int:
        """Compare a token prefix with the same-length prefix of the best."""
        if self.best is None:
            return -1
        ref = self.best[: len(tokens)]
        return (tokens > ref) - (tokens < ref)

    def _finish(self, tokens, order):
        sign = 1
        for v in range(self.V):
            if self.kinds[v] == -1:
                sign *= _cyclic_sign(order[v])
        c = self._cmp(tokens)
        if c < 0:
            self.best = list(tokens)
            self.signs = {sign}
        elif c == 0:
            self.signs.add(sign)
            if len(self.signs) > 1:
                self.zero = True

    def _walk(self, labels, order, queue, ptr, consumed, tokens, nxt):
        partner, kinds, V = self.partner, self.kinds, self.V
        while True:
            if ptr == len(queue):
                remaining = [v for v in range(V) if labels[v] < 0]
                if not remaining:
                    self._finish(tokens, order)
                    return
                cmin = min(kinds[v] for v in remaining if kinds[v] >= 0)
                tokens = tokens + [_START, cmin, 0]
                if self._cmp(tokens) > 0:
                    return
                for v in remaining:
                    if kinds[v] != cmin:
                        continue
                    lab = labels[:]
                    lab[v] = nxt
                    od = order[:]
                    od[v] = (0,)
                    self._walk(lab, od, queue + [3 * v], ptr, bytearray(consumed), tokens[:], nxt + 1)
                    if self.zero or self._cmp(tokens) > 0:
                        return
                return
            h = queue[ptr]
            ptr += 1
            if consumed[h]:
                continue
            p = partner[h]
            consumed[h] = consumed[p] = 1
            w, s = divmod(p, 3)
            if labels[w] >= 0:
                tokens.extend((_OLD, labels[w], order[w].index(s)))
            elif kinds[w] == -1:
                tokens.extend((_NEW_T, 0, 0))
            else:
                tokens.extend((_NEW_X, kinds[w], 0))
            if self._cmp(tokens) > 0:
                return
            if labels[w] >= 0:
                continue
            labels[w] = nxt
            nxt += 1
            if kinds[w] != -1:
                order[w] = (0,)
                continue
            a, b = [x for x in (0, 1, 2) if x != s]
            od = order[:]
            od[w] = (s, a, b)
            self._walk(labels[:], od, queue + [3 * w + a, 3 * w + b], ptr,
                       bytearray(consumed), tokens[:], nxt)
            if self.zero or self._cmp(tokens) > 0:
                return
            order[w] = (s, b, a)
            queue = queue + [3 * w + b, 3 * w + a]


@lru_cache(maxsize=200_000)
def canonicalize(d: Diagram) -> SignedCanonicalDiagram:
    """Canonical encoding of ``d`` and the AS sign of ``d`` relative to it."""
    enc, sign = _Search(d).run()
    return SignedCanonicalDiagram(enc, sign, d.support)


@lru_cache(maxsize=200_000)
def decode(support: Support, encoding: bytes) -> Diagram:
    """Rebuild the canonical representative (sign +1) from its encoding."""
    ncomp = encoding[2]
    ncol = encoding[3 + ncomp]
    pos = 4 + ncomp
    counts = list(encoding[pos : pos + ncomp])
    pos += ncomp
    if ncomp != len(support.components) or ncol != len(support.colors):
        raise DiagramError("encoding does not match the support")
    vertices: list[tuple] = []
    for c, m in enumerate(counts):
        for r in range(m):
            vertices.append(("M", c, r))
    edges: list[Edge] = []
    queue = [(v, 0) for v in range(len(vertices))]
    consumed: set[Slot] = set()
    ptr = 0
    toks = encoding[pos:]
    k = 0
    while k < len(toks):
        kind, a, b = toks[k], toks[k + 1], toks[k + 2]
        if ptr == len(queue):
            if kind != _START:
                raise DiagramError("corrupt encoding")
            vertices.append(("X", support.colors[a]))
            queue.append((len(vertices) - 1, 0))
            k += 3
            continue
        h = queue[ptr]
        ptr += 1
        if h in consumed:
            continue
        consumed.add(h)
        if kind == _OLD:
            other = (a, b)
        elif kind == _NEW_T:
            vertices.append(("T",))
            w = len(vertices) - 1
            other = (w, 0)
            queue.extend([(w, 1), (w, 2)])
        elif kind == _NEW_X:
            vertices.append(("X", support.colors[a]))
            other = (len(vertices) - 1, 0)
        else:
            raise DiagramError("corrupt encoding")
        consumed.add(other)
        edges.append((h, other))
        k += 3
    return Diagram(support, tuple(vertices), tuple(edges))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head, *rest)


def _pairings(leg_sites: list[tuple], n_tri: int) -> Iterator[dict[Slot, Slot]]:
    """Perfect pairings of half-edges with every dashed component reaching a leg.

    Trivalent vertices are opened one at a time from already reached
    half-edges; interchangeable choices (fresh vertices, the two free slots
    of a half-used vertex, same-colored free legs) are tried once only.
    """
    u = len(leg_sites)

    def rec(partner, reached, opened):
        h = next((x for x in reached if x not in partner), None)
        if h is None:
            if opened == n_tri:
                yield dict(partner)
            return
        seen_colors = set()
        cands = []
        for x in reached:
            if x == h or x in partner:
                continue
            v, s = x
            if v >= u:
                if v == h[0]:
                    continue  # self-loop: killed by AS
                if s == 2 and (v, 1) not in partner:
                    continue
            elif leg_sites[v][0] == "X":
                if leg_sites[v] in seen_colors:
                    continue
                seen_colors.add(leg_sites[v])
            cands.append(x)
        for x in cands:
            partner[h] = x
            partner[x] = h
            yield from rec(partner, reached, opened)
            del partner[h], partner[x]
        if opened < n_tri:
            w = u + opened
            partner[h] = (w, 0)
            partner[(w, 0)] = h
            yield from rec(partner, reached + [(w, 1), (w, 2)], opened + 1)
            del partner[h], partner[(w, 0)]

    yield from rec({}, [(i, 0) for i in range(u)], 0)


def enumerate_diagrams(
    support: Support,
    degree: int,
    *,
    legs: int | None = None,
    chord_only: bool = False,
    connected: bool | None = None,
    color_legs: dict[str, int] | None = None,
    predicate: Callable[[Diagram], bool] | None = None,
    cap: int = MAX_DEGREE,
) -> list[SignedCanonicalDiagram]:
    """One nonzero representative per isomorphism class, sorted by encoding."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if degree > cap:
        raise EnumerationCapError(f"degree {degree} exceeds enumeration cap {cap}")
    ncomp = len(support.components)
    found: dict[bytes, SignedCanonicalDiagram] = {}
    for u in range(2 * degree + 1):
        t = 2 * degree - u
        if legs is not None and u != legs:
            continue
        if chord_only and t:
            continue
        if u == 0 and t:
            continue
        for dist in _compositions(u, ncomp + len(support.colors)):
            if color_legs is not None:
                if any(dist[ncomp + j] != color_legs.get(x, 0) for j, x in enumerate(support.colors)):
                    continue
            if chord_only and any(dist[ncomp:]):
                continue
            sites: list[tuple] = []
            for c in range(ncomp):
                sites.extend(("M", c, r) for r in range(dist[c]))
            for j, x in enumerate(support.colors):
                sites.extend([("X", x)] * dist[ncomp + j])
            for partner in _pairings(sites, t):
                vertices = tuple(sites) + (("T",),) * t
                edges = tuple((a, b) for a, b in partner.items() if a < b)
                d = Diagram(support, vertices, edges)
                if connected is not None and d.is_connected() != connected:
                    continue
                if predicate is not None and not predicate(d):
                    continue
                sc = canonicalize(d)
                if sc.sign != 0 and sc.encoding not in found:
                    found[sc.encoding] = SignedCanonicalDiagram(sc.encoding, 1, support)
    return [found[k] for k in sorted(found)]


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

_VERTEX_RE = re.compile(r"v(\d+):\s*(.*)$")
_EDGE_RE = re.compile(r"e:\s*\(\s*v(\d+)\.(\d+)\s*,\s*v(\d+)\.(\d+)\s*\)\s*$")


def serialize_diagram(d: Diagram) -> str:
    lines = [
        "support: " + ", ".join(d.support.components),
        "colors: [" + ", ".join(d.support.colors) + "]",
    ]
    for i, v in enumerate(d.vertices):
        if v[0] == "T":
            lines.append(f"v{i}: T")
        elif v[0] == "M":
            lines.append(f"v{i}: U M {v[1]} {v[2]}")
        else:
            lines.append(f"v{i}: U X {v[1]}")
    for (v, s), (w, t) in d.edges:
        lines.append(f"e: (v{v}.{s}, v{w}.{t})")
    return "\n".join(lines).replace("support: \n", "support:\n") + "\n"


def parse_diagram(text: str, *, first_line: int = 1) -> Diagram:
    support_comps: tuple[str, ...] | None = None
    colors: tuple[str, ...] | None = None
    vertices: dict[int, tuple] = {}
    edges: list[Edge] = []
    for offset, raw in enumerate(text.splitlines()):
        lineno = first_line + offset
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        col = raw.index(line[0]) + 1
        if line.startswith("support:"):
            body = line[len("support:") :].strip()
            comps = tuple(c.strip() for c in body.split(",") if c.strip())
            for c in comps:
                if c not in (INTERVAL, CIRCLE):
                    raise DiagramSyntaxError(f"unknown component {c!r}", lineno, col)
            support_comps = comps
        elif line.startswith("colors:"):
            body = line[len("colors:") :].strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise DiagramSyntaxError("colors must be a bracketed list", lineno, col)
            colors = tuple(c.strip() for c in body[1:-1].split(",") if c.strip())
        elif line.startswith("e:"):
            m = _EDGE_RE.match(line)
            if not m:
                raise DiagramSyntaxError("malformed edge", lineno, col)
            a, s, b, t = map(int, m.groups())
            edges.append(((a, s), (b, t)))
        elif line.startswith("v"):
            m = _VERTEX_RE.match(line)
            if not m:
                raise DiagramSyntaxError("malformed vertex", lineno, col)
            idx = int(m.group(1))
            if idx in vertices:
                raise DiagramSyntaxError(f"vertex v{idx} defined twice", lineno, col)
            parts = m.group(2).split()
            if parts == ["T"]:
                vertices[idx] = ("T",)
            elif len(parts) == 4 and parts[:2] == ["U", "M"] and parts[2].isdigit() and parts[3].isdigit():
                vertices[idx] = ("M", int(parts[2]), int(parts[3]))
            elif len(parts) == 3 and parts[:2] == ["U", "X"]:
                vertices[idx] = ("X", parts[2])
            else:
                raise DiagramSyntaxError("malformed vertex", lineno, col)
        else:
            raise DiagramSyntaxError(f"unexpected field {line.split()[0]!r}", lineno, col)
    if support_comps is None:
        raise DiagramSyntaxError("missing support field", first_line, 1)
    if colors is None:
        colors = ()
    if sorted(vertices) != list(range(len(vertices))):
        raise DiagramSyntaxError("vertex indices must be 0..k-1", first_line, 1)
    d = Diagram(Support(support_comps, colors), tuple(vertices[i] for i in range(len(vertices))), tuple(edges))
    return check(d)


# ---------------------------------------------------------------------------
# small constructors
# ---------------------------------------------------------------------------


def chord_diagram(support: Support, chords: list[tuple[tuple[int, int], tuple[int, int]]]) -> Diagram:
    """Chord diagram from chords given as ((comp, rank), (comp, rank)) pairs."""
    vertices = []
    edges = []
    for a, b in chords:
        i = len(vertices)
        vertices.append(("M", *a))
        vertices.append(("M", *b))
        edges.append(((i, 0), (i + 1, 0)))
    return check(Diagram(support, tuple(vertices), tuple(edges)))


def strut(colors: tuple[str, str] = ("v1", "v2")) -> Diagram:
    """The degree-1 diagram joining two colored legs."""
    sup = Support((), tuple(dict.fromkeys(colors)))
    return Diagram(sup, (("X", colors[0]), ("X", colors[1])), (((0, 0), (1, 0)),))


# ---------------------------------------------------------------------------
# editing
# ---------------------------------------------------------------------------


class Draft:
    """Mutable diagram under construction.

    Skeleton legs carry an arbitrary sortable position instead of a rank;
    :meth:`freeze` renumbers vertices and turns positions into ranks.
    """

    def __init__(self, support: Support):
        self.support = support
        self.vertices: dict[int, list] = {}
        self.partner: dict[Slot, Slot] = {}
        self._next = 0

    @classmethod
    def of(cls, d: Diagram) -> Draft:
        dr = cls(d.support)
        for v in d.vertices:
            dr.add(v)
        for a, b in d.edges:
            dr.link(a, b)
        return dr

    def copy(self) -> Draft:
        dr = Draft(self.support)
        dr.vertices = {k: list(v) for k, v in self.vertices.items()}
        dr.partner = dict(self.partner)
        dr._next = self._next
        return dr

    def add(self, vertex) -> int:
        i = self._next
        self._next += 1
        self.vertices[i] = list(vertex)
        return i

    def link(self, a: Slot, b: Slot) -> None:
        self.partner[a] = b
        self.partner[b] = a

    def unlink(self, a: Slot) -> Slot:
        b = self.partner.pop(a)
        del self.partner[b]
        return b

    def remove(self, v: int) -> None:
        for s in range(_valence(tuple(self.vertices[v]))):
            if (v, s) in self.partner:
                self.unlink((v, s))
        del self.vertices[v]

    def legs_on(self, component: int) -> list[int]:
        legs = [i for i, v in self.vertices.items() if v[0] == "M" and v[1] == component]
        return sorted(legs, key=lambda i: self.vertices[i][2])

    def freeze(self, support: Support | None = None) -> Diagram:
        support = support or self.support
        ids = sorted(self.vertices)
        index = {v: k for k, v in enumerate(ids)}
        rank: dict[int, int] = {}
        comps = {self.vertices[i][1] for i in ids if self.vertices[i][0] == "M"}
        for c in comps:
            for r, i in enumerate(self.legs_on(c)):
                rank[i] = r
        verts = []
        for i in ids:
            v = self.vertices[i]
            verts.append(("M", v[1], rank[i]) if v[0] == "M" else tuple(v))
        edges = [
            ((index[a[0]], a[1]), (index[b[0]], b[1])) for a, b in self.partner.items() if a < b
        ]
        return Diagram(support, tuple(verts), tuple(edges))
