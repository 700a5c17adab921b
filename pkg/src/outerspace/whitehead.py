"""Whitehead graphs, Whitehead automorphisms, and the simplicity decision.

The Whitehead graph of a cyclically reduced word has one vertex per
signed letter and, for each cyclically adjacent pair (x, y), an edge
between x^-1 and y.  Type-II Whitehead automorphisms are parametrized
by a special letter v and a cut set Y with v in Y, v^-1 not in Y:

    x  ->  v^(-1 if x^-1 in Y else 0) . x . v^(1 if x in Y else 0)

for letters x not in {v, v^-1}, and v -> v.

A conjugacy class is simple when it is contained in a proper free
factor.  The decision runs Whitehead's algorithm: greedy strict
shortening, then breadth-first closure of the minimal level set under
length-preserving moves; the class is simple exactly when some minimal
representative omits a generator.  Connectivity data of the Whitehead
graph is reported alongside (a connected, cut-point-free graph at
minimal length certifies non-simplicity).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections import Counter

from .words import Word, CyclicWord, Automorphism, letter_str, letter_key


class OrbitCapExceeded(RuntimeError):
    def __init__(self, partial):
        super().__init__("orbit cap exceeded; simplicity undetermined")
        self.partial = partial


class WhiteheadGraph:
    """Letter-adjacency graph of a cyclic word."""

    def __init__(self, cw):
        if cw.is_trivial():
            raise ValueError("trivial word has no Whitehead graph")
        self.group = cw.group
        self.word = cw
        self.edges = Counter()
        letters = cw.letters
        n = len(letters)
        for k in range(n):
            x, y = letters[k], letters[(k + 1) % n]
            self.edges[frozenset((-x, y)) if -x != y else frozenset((y,))] += 1

    def vertices(self):
        return [s * i for i in range(1, self.group.rank + 1) for s in (1, -1)]

    def support_vertices(self):
        sup = set()
        for e in self.edges:
            sup |= e
        return sup

    def multiplicity(self, x, y):
        key = frozenset((x, y)) if x != y else frozenset((x,))
        return self.edges.get(key, 0)

    def total_multiplicity(self):
        return sum(self.edges.values())

    def neighbors(self, v):
        out = set()
        for e in self.edges:
            if v in e:
                out |= (e - {v}) if len(e) > 1 else {v}
        return out

    def to_dot(self, name="whitehead"):
        lines = [f"graph {name} {{"]
        for v in sorted(self.support_vertices(), key=letter_key):
            lines.append(f'  "{letter_str(v)}";')
        for e, m in sorted(self.edges.items(), key=lambda kv: sorted(map(letter_key, kv[0]))):
            vs = sorted(e, key=letter_key)
            a = vs[0]
            b = vs[-1]
            for _ in range(m):
                lines.append(f'  "{letter_str(a)}" -- "{letter_str(b)}";')
        lines.append("}")
        return "\n".join(lines)


@dataclass
class ConnectivityReport:
    kind: str                   # "disconnected" | "cut-vertex" | "two-connected"
    cut_vertex: int = None
    isolated: tuple = ()        # absent letters, excluded from the analysis

    def __str__(self):
        if self.kind == "cut-vertex":
            return f"cut vertex {letter_str(self.cut_vertex)}"
        return self.kind


def connectivity_report(W):
    """Connectivity / cut-vertex analysis on the support of the graph."""
    support = sorted(W.support_vertices(), key=letter_key)
    isolated = tuple(v for v in W.vertices() if v not in support)

    def connected(verts, skip=None):
        verts = [v for v in verts if v != skip]
        if not verts:
            return True
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            v = stack.pop()
            for w in W.neighbors(v):
                if w != skip and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(verts)

    if not connected(support):
        return ConnectivityReport("disconnected", isolated=isolated)
    for v in support:
        if len(support) > 2 and not connected(support, skip=v):
            return ConnectivityReport("cut-vertex", cut_vertex=v, isolated=isolated)
    return ConnectivityReport("two-connected", isolated=isolated)


def whitehead_graph(cw):
    return WhiteheadGraph(cw)


class WhiteheadAutomorphism:
    """Type-II Whitehead automorphism (special letter v, cut set Y)."""

    __slots__ = ("group", "special", "cut", "_aut")

    def __init__(self, group, special, cut):
        cut = frozenset(cut)
        group.check_letter(special)
        for x in cut:
            group.check_letter(x)
        if special not in cut or -special in cut:
            raise ValueError("cut must contain the special letter and not its inverse")
        self.group = group
        self.special = special
        self.cut = cut
        self._aut = None

    def automorphism(self):
        if self._aut is not None:
            return self._aut
        v = self.special
        images = []
        for i in range(1, self.group.rank + 1):
            if i == abs(v):
                images.append(self.group.generator(i))
                continue
            letters = []
            if -i in self.cut:
                letters.append(-v)
            letters.append(i)
            if i in self.cut:
                letters.append(v)
            images.append(Word(self.group, letters))
        self._aut = Automorphism(self.group, images)
        return self._aut

    def is_identity_like(self):
        return self.cut == frozenset((self.special,))

    def sort_key(self):
        return (letter_key(self.special),
                tuple(sorted(map(letter_key, self.cut))))

    def __repr__(self):
        cut = ",".join(letter_str(x) for x in sorted(self.cut, key=letter_key))
        return f"WhiteheadAutomorphism({letter_str(self.special)}; {{{cut}}})"


_TYPE_II_CACHE = {}


def all_type_ii_automorphisms(group, include_trivial=False):
    """All type-II Whitehead automorphisms of the group (cached per rank)."""
    key = (group.rank, include_trivial)
    cached = _TYPE_II_CACHE.get(key)
    if cached is not None:
        return cached
    letters = group.all_letters()
    out = []
    for v in letters:
        rest = [x for x in letters if abs(x) != abs(v)]
        for mask in range(1 << len(rest)):
            cut = {v} | {rest[k] for k in range(len(rest)) if mask >> k & 1}
            tau = WhiteheadAutomorphism(group, v, cut)
            if tau.is_identity_like() and not include_trivial:
                continue
            out.append(tau)
    out = sorted(out, key=lambda t: t.sort_key())
    _TYPE_II_CACHE[key] = out
    return out


def apply_whitehead(tau, cw):
    """Image of a conjugacy class under a Whitehead automorphism."""
    if isinstance(tau, WhiteheadAutomorphism):
        phi = tau.automorphism()
    else:
        phi = tau
    return phi.apply(cw if isinstance(cw, CyclicWord) else cw.cyclic())


@dataclass
class MinimizationResult:
    minimal_length: int
    representatives: set          # minimal-level classes visited
    descent: list                 # the greedy chain, start to minimum
    capped: bool = False
    omitting: set = field(default_factory=set)

    def some_representative_omits_letter(self):
        return bool(self.omitting)


def reduce_to_minimal(cw, orbit_cap=100_000):
    """Greedy Whitehead descent, then closure of the minimal level set.

    Greedy: while some type-II automorphism strictly shortens the class,
    apply the best one (ties by (special letter, cut set) order).  At
    the bottom, breadth-first closure under length-preserving moves up
    to orbit_cap states.
    """
    group = cw.group
    moves = all_type_ii_automorphisms(group)
    descent = [cw]
    current = cw
    while True:
        best = None
        for tau in moves:
            img = apply_whitehead(tau, current)
            if len(img) < len(current):
                if best is None or len(img) < len(best[1]):
                    best = (tau, img)
        if best is None:
            break
        current = best[1]
        descent.append(current)
    # closure of the level set
    level = {current}
    frontier = [current]
    capped = False
    while frontier and not capped:
        nxt = []
        for w in frontier:
            for tau in moves:
                img = apply_whitehead(tau, w)
                if len(img) == len(w) and img not in level:
                    level.add(img)
                    nxt.append(img)
                    if len(level) > orbit_cap:
                        capped = True
                        break
                elif len(img) < len(w):   # the closure found a shorter word:
                    return reduce_to_minimal(img, orbit_cap)
            if capped:
                break
        frontier = nxt
    omitting = {w for w in level if len(w.support()) < group.rank}
    return MinimizationResult(len(current), level, descent, capped, omitting)


def is_simple(cw, orbit_cap=100_000, cache=None):
    """Is the class contained in a proper free factor?

    Simple exactly when some minimal representative omits a generator
    (a letter pair); with the closure capped the verdict may be
    undetermined, reported by OrbitCapExceeded.

    A word whose support misses a generator is simple outright.  An
    optional cache dict amortizes sweeps: every representative of an
    explored minimal level set gets the verdict.
    """
    if cw.group.rank < 2:
        return True
    if cw.is_trivial():
        return True
    if len(cw.support()) < cw.group.rank:
        return True
    if cache is not None and cw in cache:
        return cache[cw]
    res = reduce_to_minimal(cw, orbit_cap)
    if res.omitting:
        verdict = True
    elif res.capped:
        raise OrbitCapExceeded(res)
    else:
        verdict = False
    if cache is not None:
        cache[cw] = verdict
        for w in res.representatives:
            cache[w] = verdict
    return verdict


def minimal_level_graph_reports(cw, orbit_cap=100_000):
    """Connectivity reports of the Whitehead graphs over the minimal level set."""
    res = reduce_to_minimal(cw, orbit_cap)
    return {w: connectivity_report(whitehead_graph(w)) for w in res.representatives}
