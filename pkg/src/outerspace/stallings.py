"""Folded core graphs for finitely generated subgroups of a free group.

A subgroup graph is a connected graph with oriented edges labeled by
letters (nonzero integers over some alphabet; for subgroups of F_N the
alphabet is the generator index set).  Folded means: at each vertex, at
most one outgoing edge per signed label.  Reading edge labels along
paths from the basepoint spells subgroup elements.

The same machinery doubles as a rewriting engine over arbitrary signed
alphabets (used by the marked-graph module to express based loops in
terms of marking loops), so labels are plain integers here and words
over them are plain tuples.
"""

from __future__ import annotations

from .words import Word, free_reduce, letter_str, invert_basis_map, FreeGroup


class SubgroupCoreGraph:
    """Folded, labeled core graph; based or basepoint-free (cyclic core).

    vertices: set of ints; edges: set of (origin, target, label>0);
    out: dict (vertex, signed label) -> vertex.
    """

    def __init__(self, alphabet_size, vertices, edges, basepoint=None):
        self.alphabet_size = alphabet_size
        self.vertices = set(vertices)
        self.edges = set()
        self.out = {}
        for (o, t, lab) in edges:
            self._add_edge(o, t, lab)
        self.basepoint = basepoint

    def _add_edge(self, o, t, lab):
        if lab <= 0:
            o, t, lab = t, o, -lab
        key_f, key_b = (o, lab), (t, -lab)
        if self.out.get(key_f, t) != t or self.out.get(key_b, o) != o:
            raise ValueError("not folded: duplicate label at vertex")
        self.edges.add((o, t, lab))
        self.out[key_f] = t
        self.out[key_b] = o

    def degree(self, v):
        return sum(1 for (o, t, lab) in self.edges for x in ((o,), (t,)) if x[0] == v)

    def degrees(self):
        deg = {v: 0 for v in self.vertices}
        for (o, t, lab) in self.edges:
            deg[o] += 1
            deg[t] += 1
        return deg

    def rank(self):
        return len(self.edges) - len(self.vertices) + 1

    def step(self, v, letter):
        return self.out.get((v, letter))

    def trace(self, letters, start=None):
        """Follow a letter sequence from start (default basepoint); None if it leaves."""
        v = self.basepoint if start is None else start
        for x in letters:
            v = self.out.get((v, x))
            if v is None:
                return None
        return v

    def copy(self):
        return SubgroupCoreGraph(self.alphabet_size, self.vertices, self.edges,
                                 self.basepoint)

    def spanning_tree(self, root=None):
        """BFS tree: returns (parent edge dict v -> (u, signed label), order)."""
        root = self.basepoint if root is None else root
        if root is None:
            root = min(self.vertices)
        parent = {root: None}
        order = [root]
        queue = [root]
        while queue:
            v = queue.pop(0)
            for lab in sorted(self._labels_at(v), key=lambda s: (abs(s), s < 0)):
                w = self.out[(v, lab)]
                if w not in parent:
                    parent[w] = (v, lab)
                    order.append(w)
                    queue.append(w)
        return parent, order

    def _labels_at(self, v):
        return [lab for (u, lab) in self.out if u == v]

    def path_from_root(self, parent, v):
        path = []
        while parent[v] is not None:
            u, lab = parent[v]
            path.append(lab)
            v = u
        return list(reversed(path))

    def basis_words(self, group):
        """Spanning-tree basis of the subgroup: one word per non-tree edge."""
        parent, _ = self.spanning_tree()
        tree_pairs = set()
        for v, pe in parent.items():
            if pe is not None:
                u, lab = pe
                tree_pairs.add((u, v, lab) if lab > 0 else (v, u, -lab))
        words = []
        for (o, t, lab) in sorted(self.edges):
            if (o, t, lab) in tree_pairs:
                continue
            w = (self.path_from_root(parent, o) + [lab]
                 + [-x for x in reversed(self.path_from_root(parent, t))])
            words.append(Word(group, w))
        return words

    def to_json(self):
        data = {
            "vertices": sorted(self.vertices),
            "edges": [{"from": o, "to": t, "label": letter_str(lab)}
                      for (o, t, lab) in sorted(self.edges)],
        }
        if self.basepoint is not None:
            data["basepoint"] = self.basepoint
        return data

    def to_dot(self, name="core"):
        lines = [f"digraph {name} {{"]
        for v in sorted(self.vertices):
            shape = "doublecircle" if v == self.basepoint else "circle"
            lines.append(f'  {v} [shape={shape}];')
        for (o, t, lab) in sorted(self.edges):
            lines.append(f'  {o} -> {t} [label="{letter_str(lab)}"];')
        lines.append("}")
        return "\n".join(lines)

    def __repr__(self):
        kind = "based" if self.basepoint is not None else "cyclic"
        return (f"SubgroupCoreGraph({kind}, V={len(self.vertices)}, "
                f"E={len(self.edges)}, rank={self.rank()})")


def fold_labeled_graph(alphabet_size, vertices, edges, basepoint=None):
    """Stallings folding via union-find; returns a folded SubgroupCoreGraph.

    edges: iterable of (origin, target, positive label).
    """
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
        return rb

    edge_set = {(o, t, lab) for (o, t, lab) in edges}
    changed = True
    while changed:
        changed = False
        out = {}
        remap = {(find(o), find(t), lab) for (o, t, lab) in edge_set}
        edge_set = remap
        for (o, t, lab) in sorted(edge_set):
            for (key, tgt) in (((o, lab), t), ((t, -lab), o)):
                prev = out.get(key)
                if prev is None:
                    out[key] = tgt
                elif find(prev) != find(tgt):
                    union(prev, tgt)
                    changed = True
        if changed:
            continue
    verts = {find(v) for v in vertices}
    edge_set = {(find(o), find(t), lab) for (o, t, lab) in edge_set}
    bp = find(basepoint) if basepoint is not None else None
    return SubgroupCoreGraph(alphabet_size, verts, edge_set, bp)


def trim_to_core(graph, keep_basepoint=True):
    """Iteratively remove valence-<2 vertices (keeping the basepoint if asked)."""
    g = graph.copy()
    while True:
        deg = g.degrees()
        victims = [v for v in g.vertices
                   if deg.get(v, 0) < 2 and not (keep_basepoint and v == g.basepoint)]
        if not victims:
            return g
        vset = set(victims)
        edges = {(o, t, lab) for (o, t, lab) in g.edges
                 if o not in vset and t not in vset}
        verts = g.vertices - vset
        if not verts:
            # trivial subgroup: keep a single vertex
            verts = {g.basepoint} if g.basepoint is not None else {0}
            edges = set()
        g = SubgroupCoreGraph(g.alphabet_size, verts, edges, g.basepoint)


def wedge_of_words(alphabet_size, letter_words):
    """Unfolded wedge of subdivided circles, one per word, at basepoint 0."""
    vertices = {0}
    edges = []
    nxt = 1
    for w in letter_words:
        if not w:
            continue
        prev = 0
        for k, lab in enumerate(w):
            last = (k == len(w) - 1)
            target = 0 if last else nxt
            if not last:
                vertices.add(nxt)
                nxt += 1
            if lab > 0:
                edges.append((prev, target, lab))
            else:
                edges.append((target, prev, -lab))
            prev = target
    return alphabet_size, vertices, edges


def core_graph(generators, based=True):
    """Folded core of the subgroup generated by the given Words.

    based=True keeps the basepoint (membership queries); based=False
    returns the cyclic core representing the conjugacy class.
    """
    gens = [g for g in generators if len(g) > 0]
    if not gens:
        raise ValueError("empty generator list")
    group = gens[0].group
    a, v, e = wedge_of_words(group.rank, [g.letters for g in gens])
    folded = fold_labeled_graph(a, v, e, basepoint=0)
    if based:
        return trim_to_core(folded, keep_basepoint=True)
    g = trim_to_core(folded, keep_basepoint=False)
    g.basepoint = None
    return g


def cyclic_core(graph):
    """Basepoint-free core of a based subgroup graph."""
    g = trim_to_core(graph, keep_basepoint=False)
    g.basepoint = None
    return g


def contains_element(H, g):
    """Membership g in H for a based core graph H."""
    if H.basepoint is None:
        raise ValueError("membership needs a based core graph")
    if g.is_identity():
        return True
    return H.trace(g.letters) == H.basepoint


def conjugate_into(H, K):
    """Does some conjugate of H lie in K?  (H, K cyclic cores.)

    Returns (True, vertex_map) with a label-preserving morphism
    core(H) -> core(K), or (False, None).  Since K is folded the
    morphism is determined by one vertex image; all seeds are tried.
    """
    if not H.vertices:
        return True, {}
    h0 = min(H.vertices)
    for seed in sorted(K.vertices):
        vmap = {h0: seed}
        queue = [h0]
        ok = True
        while queue and ok:
            v = queue.pop(0)
            for lab in H._labels_at(v):
                w = H.out[(v, lab)]
                img = K.out.get((vmap[v], lab))
                if img is None:
                    ok = False
                    break
                if w in vmap:
                    if vmap[w] != img:
                        ok = False
                        break
                else:
                    vmap[w] = img
                    queue.append(w)
        if ok and len(vmap) == len(H.vertices):
            return True, vmap
    return False, None


def canonical_code(graph):
    """Canonical byte string: equal exactly for isomorphic labeled graphs.

    BFS from every start vertex with label-sorted edge exploration; the
    lexicographically least serialization wins.  Cores here are tiny, so
    the |V| BFS passes are cheap.
    """
    if not graph.vertices:
        return b"empty"
    best = None
    labels = sorted({lab for (_, _, lab) in graph.edges})
    signed = [s * l for l in labels for s in (1, -1)]
    for start in sorted(graph.vertices):
        number = {start: 0}
        order = [start]
        i = 0
        rows = []
        while i < len(order):
            v = order[i]
            i += 1
            row = []
            for lab in signed:
                w = graph.out.get((v, lab))
                if w is None:
                    row.append(-1)
                    continue
                if w not in number:
                    number[w] = len(order)
                    order.append(w)
                row.append(number[w])
            rows.append(tuple(row))
        code = (tuple(labels), tuple(rows))
        if best is None or code < best:
            best = code
    return repr(best).encode()


class FactorHandle:
    """A conjugacy class of a (trusted) free factor, keyed by canonical code.

    Handles do not verify free-factor-ness; they are built only through
    provenance-safe constructors (subgraph factors, automorphism images
    of coordinate factors, explicit sub-bases).
    """

    __slots__ = ("core", "code", "rank", "ambient_rank")

    def __init__(self, core, ambient_rank):
        if core.rank() < 1:
            raise ValueError("factor must have rank >= 1")
        if core.rank() >= ambient_rank:
            raise ValueError("factor must be proper")
        self.core = core
        self.code = canonical_code(core)
        self.rank = core.rank()
        self.ambient_rank = ambient_rank

    @classmethod
    def from_words(cls, words, ambient_rank=None):
        group = words[0].group
        return cls(core_graph(words, based=False),
                   group.rank if ambient_rank is None else ambient_rank)

    def basis_words(self, group):
        return self.core.basis_words(group)

    def edge_count(self):
        return len(self.core.edges)

    def __eq__(self, other):
        return isinstance(other, FactorHandle) and self.code == other.code

    def __hash__(self):
        return hash(self.code)

    def __repr__(self):
        return f"FactorHandle(rank={self.rank}, edges={self.edge_count()})"


def express_in_generators(loop_words, targets, group_rank):
    """Rewrite target letter-tuples as words in the given generating loops.

    loop_words: list of letter tuples over some signed alphabet, assumed
    to generate (as a subgroup of the ambient free group on that
    alphabet) a free group of rank len(loop_words), with the whole
    target readable in their folded wedge.

    Returns a list of Words over FreeGroup(len(loop_words)), one per
    target, such that substituting loop_words into them and reducing
    gives back the targets.
    """
    n = len(loop_words)
    alphabet = max([abs(x) for w in list(loop_words) + list(targets) for x in w],
                   default=1)
    a, v, e = wedge_of_words(alphabet, loop_words)
    folded = fold_labeled_graph(a, v, e, basepoint=0)
    # no trimming: keep every readable path (targets stay traceable)
    parent, _ = folded.spanning_tree(folded.basepoint)
    tree_pairs = set()
    for vv, pe in parent.items():
        if pe is not None:
            u, lab = pe
            tree_pairs.add((u, vv, lab) if lab > 0 else (vv, u, -lab))
    nontree = [ed for ed in sorted(folded.edges) if ed not in tree_pairs]
    if len(nontree) != n:
        raise ValueError(f"loops generate rank {len(nontree)}, expected {n}")
    edge_index = {ed: i + 1 for i, ed in enumerate(nontree)}

    def signature(letters):
        """Trace letters from the basepoint, recording non-tree crossings."""
        sig = []
        vcur = folded.basepoint
        for x in letters:
            w = folded.out.get((vcur, x))
            if w is None:
                raise ValueError("target not readable in the folded wedge")
            ed = (vcur, w, x) if x > 0 else (w, vcur, -x)
            idx = edge_index.get(ed)
            if idx is not None:
                sig.append(idx if x > 0 else -idx)
            vcur = w
        if vcur != folded.basepoint:
            raise ValueError("target is not a loop at the basepoint")
        return free_reduce(sig)

    # s: F_n -> F_n, generator i (the i-th loop) -> its non-tree signature.
    # Targets rewrite as s^-1 applied to their signatures.
    F_n = FreeGroup(n)
    gen_sigs = [Word(F_n, signature(w)) for w in loop_words]
    inverse_images = invert_basis_map(F_n, F_n, gen_sigs)
    results = []
    for t in targets:
        sig = signature(t)
        out = []
        for s in sig:
            img = inverse_images[abs(s) - 1]
            out.extend(img.letters if s > 0 else img.inverse().letters)
        results.append(Word(F_n, out))
    return results
