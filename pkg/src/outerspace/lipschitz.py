"""The asymmetric Lipschitz metric between marked metric graphs.

The stretch factor of a pair is the maximum, over the finite candidate
family (embedded circles, figure-eights, barbells), of target length
over source length.  An optimal map realizing the stretch exactly is
then constructed by certification: starting from the tree-collapse
difference-of-markings map, vertex images slide in exact rational steps
until the maximal slope equals the known stretch factor.
"""

from __future__ import annotations

from fractions import Fraction

from .words import CyclicWord
from .marked_graph import EdgePath
from .paths import TargetPath, vertex_point, edge_point, seg_reverse
from .traintrack import TrainTrackStructure
from . import simplex_lp


class OptimalMapError(RuntimeError):
    """The balancing procedure failed to certify sigma = lambda."""


class BoundaryOptimumError(RuntimeError):
    """The in-simplex minimizer landed on a missing face."""

    def __init__(self, lengths, value):
        super().__init__("optimum on the simplex boundary")
        self.lengths = lengths
        self.value = value


# -- candidates ------------------------------------------------------------


class Candidate:
    """A candidate loop: embedded circle, figure-eight, or barbell."""

    __slots__ = ("edges", "shape")

    def __init__(self, edges, shape):
        self.edges = tuple(edges)
        self.shape = shape

    def canonical_key(self):
        return _loop_canon(self.edges)

    def crossing_counts(self):
        counts = {}
        for e in self.edges:
            counts[abs(e)] = counts.get(abs(e), 0) + 1
        return counts

    def length_in(self, graph):
        return sum(graph.lengths[abs(e)] for e in self.edges)

    def __eq__(self, other):
        return isinstance(other, Candidate) and self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        return f"Candidate({self.shape}, {list(self.edges)})"


def _loop_canon(edges):
    """Canonical form of a cyclic loop up to rotation AND inversion."""
    n = len(edges)
    if n == 0:
        return ()
    rev = tuple(-e for e in reversed(edges))
    forms = [tuple(edges[(r + i) % n] for i in range(n)) for r in range(n)]
    forms += [tuple(rev[(r + i) % n] for i in range(n)) for r in range(n)]
    return min(forms)


def _embedded_circles(graph):
    """All embedded circles (vertex-simple cycles) as oriented edge tuples."""
    found = {}
    for start in graph.oriented_edges():
        v0 = graph.origin(start)
        stack = [((start,), {v0, graph.terminus(start)} - {v0})]
        while stack:
            path, visited = stack.pop()
            head = graph.terminus(path[-1])
            if head == v0 and path:
                key = _loop_canon(path)
                found.setdefault(key, tuple(path))
                continue
            for e in graph.directions_at(head):
                w = graph.terminus(e)
                if w == v0:
                    if e != -path[-1] or len(path) == 0:
                        stack.append((path + (e,), visited))
                elif w not in visited and w != v0:
                    stack.append((path + (e,), visited | {w}))
    return list(found.values())


def _rotate_to_vertex(graph, cycle, v):
    for i, e in enumerate(cycle):
        if graph.origin(e) == v:
            return cycle[i:] + cycle[:i]
    return None


def candidates(graph):
    """All candidate loops, each once up to rotation and inversion."""
    circles = _embedded_circles(graph)
    result = {}
    for c in circles:
        cand = Candidate(c, "embedded-circle")
        result[cand.canonical_key()] = cand
    # figure-eights: edge-disjoint circles sharing exactly one vertex
    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            c1, c2 = circles[i], circles[j]
            if {abs(e) for e in c1} & {abs(e) for e in c2}:
                continue
            v1 = {graph.origin(e) for e in c1}
            v2 = {graph.origin(e) for e in c2}
            common = v1 & v2
            if len(common) != 1:
                continue
            v = common.pop()
            r1 = _rotate_to_vertex(graph, c1, v)
            r2 = _rotate_to_vertex(graph, c2, v)
            for second in (r2, tuple(-e for e in reversed(r2))):
                cand = Candidate(r1 + second, "figure-eight")
                result[cand.canonical_key()] = cand
    # barbells: vertex-disjoint circles joined by an embedded arc
    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            c1, c2 = circles[i], circles[j]
            v1 = {graph.origin(e) for e in c1}
            v2 = {graph.origin(e) for e in c2}
            if v1 & v2:
                continue
            for arc in _arcs_between(graph, v1, v2):
                u1, u2 = graph.origin(arc[0]), graph.terminus(arc[-1])
                r1 = _rotate_to_vertex(graph, c1, u1)
                r2 = _rotate_to_vertex(graph, c2, u2)
                back = tuple(-e for e in reversed(arc))
                for second in (r2, tuple(-e for e in reversed(r2))):
                    cand = Candidate(r1 + arc + second + back, "barbell")
                    result[cand.canonical_key()] = cand
    return sorted(result.values(), key=lambda c: c.canonical_key())


def _arcs_between(graph, v1, v2):
    """Embedded arcs from v1-set to v2-set, interior avoiding both."""
    arcs = []
    for u in sorted(v1):
        stack = [((e,), {graph.terminus(e)})
                 for e in graph.directions_at(u)
                 if graph.terminus(e) not in v1 or graph.terminus(e) in v2]
        while stack:
            path, seen = stack.pop()
            head = graph.terminus(path[-1])
            if head in v2:
                arcs.append(path)
                continue
            if head in v1:
                continue
            for e in graph.directions_at(head):
                w = graph.terminus(e)
                if e == -path[-1]:
                    continue
                if w in seen and w not in v2:
                    continue
                if w in v1:
                    continue
                stack.append((path + (e,), seen | {w}))
    return arcs


# -- stretch ---------------------------------------------------------------


def class_of_loop(graph, edges):
    """Conjugacy class of a cyclic edge path, via marking-out."""
    w = graph.path_word(tuple(edges))
    return CyclicWord(graph.group, w.letters)


def stretch_factor(G, Gp, cands=None):
    """(lambda, witness): max over candidates of target/source length."""
    if G.group.rank != Gp.group.rank:
        raise ValueError("rank mismatch")
    if cands is None:
        cands = candidates(G)
    best = None
    witness = None
    for cand in cands:
        lg = cand.length_in(G)
        lt = Gp.translation_length(class_of_loop(G, cand.edges))
        ratio = lt / lg
        if best is None or ratio > best:
            best = ratio
            witness = cand
    return best, witness


def distance(G, Gp):
    """Asymmetric Lipschitz stretch between normalized representatives."""
    lam, _ = stretch_factor(G.normalize(), Gp.normalize())
    return lam


# -- graph maps --------------------------------------------------------------


class GraphMap:
    """A difference-of-markings map with PL edge images."""

    def __init__(self, source, target, vertex_images, edge_images):
        self.source = source
        self.target = target
        self.vertex_images = dict(vertex_images)   # v -> Point
        self.edge_images = dict(edge_images)       # e>0 -> TargetPath

    def image_of_direction(self, d):
        p = self.edge_images[abs(d)]
        return p if d > 0 else p.reverse()

    def slope(self, e):
        return self.edge_images[abs(e)].length() / self.source.lengths[abs(e)]

    def sigma(self):
        return max(self.slope(e) for e in self.source.edge_ends)

    def slopes(self):
        return {e: self.slope(e) for e in sorted(self.source.edge_ends)}

    def tension_edges(self):
        s = self.sigma()
        return {e for e in self.source.edge_ends if self.slope(e) == s}

    def germ(self, d):
        return self.image_of_direction(d).first_germ()

    def gates(self, restrict_edges=None):
        """Train track structure by first-germ partition.

        restrict_edges: positive edge ids (default: tension graph).
        """
        if restrict_edges is None:
            restrict_edges = self.tension_edges()
        directions = [d for d in self.source.oriented_edges()
                      if abs(d) in restrict_edges]
        for d in directions:
            if self.germ(d) is None:
                raise ValueError(f"collapsed edge {abs(d)} in restriction")
        return TrainTrackStructure.from_germs(self.source, self.germ, directions)

    def loop_image(self, edges):
        """Image of a closed edge path as a closed TargetPath."""
        v = self.source.origin(edges[0])
        path = TargetPath.point(self.target, self.vertex_images[v])
        for d in edges:
            path = path.concat(self.image_of_direction(d))
        return path

    def image_class(self, edges):
        """Conjugacy class (as a CyclicWord) of the image of a loop."""
        closed = self.loop_image(edges)
        cyc = closed.closed_class_edges()
        w = self.target.path_word(cyc)
        return CyclicWord(self.target.group, w.letters)

    def is_difference_of_markings(self):
        group = self.source.group
        for i in range(1, group.rank + 1):
            loop = self.source.marking_in[i]
            if self.image_class(loop) != CyclicWord(group, (i,)):
                return False
        return True

    def check_consistency(self):
        """Edge images connect the right vertex images."""
        for e in sorted(self.source.edge_ends):
            p = self.edge_images[e]
            o, t = self.source.edge_ends[e]
            if p.start != self.vertex_images[o] or p.end() != self.vertex_images[t]:
                raise AssertionError(f"edge {e} image endpoints inconsistent")
        return True

    def to_dot(self, name="graph_map"):
        lines = [f"digraph {name} {{"]
        for v in sorted(self.source.vertices):
            lines.append(f'  "v{v}" [label="{v} -> {self.vertex_images[v]}"];')
        for e in sorted(self.source.edge_ends):
            o, t = self.source.edge_ends[e]
            s = self.slope(e)
            lines.append(f'  "v{o}" -> "v{t}" [label="e{e} slope {s}"];')
        lines.append("}")
        return "\n".join(lines)


def initial_difference_of_markings(G, Gp):
    """Tree-collapse map: every vertex to the target basepoint."""
    parent, _ = G.spanning_tree()
    bp = vertex_point(Gp.basepoint)
    vertex_images = {v: bp for v in G.vertices}
    edge_images = {}
    for e in sorted(G.edge_ends):
        loop = (G.tree_path(parent, G.origin(e)) + (e,)
                + tuple(-x for x in reversed(G.tree_path(parent, G.terminus(e)))))
        word = G.path_word(loop)
        target_loop = Gp.based_loop_of(word)
        edge_images[e] = TargetPath.from_edge_word(Gp, target_loop,
                                                   start=bp)
    return GraphMap(G, Gp, vertex_images, edge_images)


def _slide(f, v, germ, delta):
    """Move the image of v by delta along the germ, updating edge images."""
    Gp = f.target
    e_g, a_g = germ
    new_point = edge_point(Gp, e_g, a_g + delta)
    back_seg = seg_reverse(Gp, (e_g, a_g, a_g + delta))
    for e in sorted(f.source.edge_ends):
        o, t = f.source.edge_ends[e]
        path = f.edge_images[e]
        if o == v:
            if path.first_germ() == germ:
                path = path.drop_prefix(delta)
            else:
                path = path.prepend_segment(back_seg)
        if t == v:
            rev = path.reverse()
            if rev.first_germ() == germ:
                rev = rev.drop_prefix(delta)
            else:
                rev = rev.prepend_segment(back_seg)
            path = rev.reverse()
        if o == v or t == v:
            f.edge_images[e] = path
    f.vertex_images[v] = new_point


def optimal_map(G, Gp, lam=None, witness=None, max_rounds=60, slide_budget=250):
    """An optimal difference-of-markings map: sigma(f) = stretch exactly.

    lam/witness are recomputed if not supplied.  Two alternating moves:

    * single-vertex slides (a vertex whose tension directions share one
      gate moves along that gate by the exact step minimizing the
      maximal slope, with interior draining steps when the tension
      graph sits partly elsewhere);
    * an in-cell jump: within the current combinatorial cell the edge
      image lengths are affine in the vertex offsets, so an exact LP
      moves all vertices at once to the cell optimum.  This removes the
      geometric creep that single-vertex moves exhibit on min-max
      objectives.

    Raises OptimalMapError if certification fails to reach sigma = lam
    (which must not happen on valid inputs).
    """
    if lam is None:
        lam, witness = stretch_factor(G, Gp)
    f = initial_difference_of_markings(G, Gp)
    for _ in range(max_rounds):
        if _slide_phase(f, lam, slide_budget):
            return f
        if f.sigma() == lam:
            return f
        if not _cell_jump(f):
            raise OptimalMapError("no admissible move at sigma > lambda")
    raise OptimalMapError("round cap exceeded")


def _slide_phase(f, lam, budget):
    """Run single-vertex slides until lam is certified or progress stops."""
    for _ in range(budget):
        sigma = f.sigma()
        if sigma == lam:
            return True
        if sigma < lam:
            raise OptimalMapError(f"sigma {sigma} dropped below lambda {lam}")
        slide = _best_slide(f, sigma)
        if slide is not None and slide[3] < sigma:
            v, germ, delta, _ = slide
            _slide(f, v, germ, delta)
            continue
        drain = _drain_slide(f, sigma)
        if drain is None:
            raise OptimalMapError("no admissible slide at sigma > lambda")
        v, germ, delta = drain
        _slide(f, v, germ, delta)
    return f.sigma() == lam


def _slide_options(f, sigma, v):
    """Admissible slide at v, if its tension directions share one germ.

    Returns (germ, delta, sigma_after) minimizing the maximal slope over
    the exact one-vertex line search, or None.
    """
    G = f.source
    dirs = [d for d in G.directions_at(v)
            if f.slope(d) == sigma]
    if not dirs:
        return None
    germs = {f.germ(d) for d in dirs}
    if len(germs) != 1:
        return None
    germ = germs.pop()
    # per-edge growth rates under a slide of v along the germ
    rate = {}
    for d in G.directions_at(v):
        e = abs(d)
        rate[e] = rate.get(e, 0) + (-1 if f.germ(d) == germ else 1)
    # hard cap: stay within the current first segment of each shrinking end
    cap = None
    for d in G.directions_at(v):
        if f.germ(d) == germ:
            seg = f.image_of_direction(d).segs[0]
            c = seg[2] - seg[1]
            cap = c if cap is None else min(cap, c)
    if cap is None or cap <= 0:
        return None
    lines = []   # slope_e(delta) = (len_e + rate_e * delta) / l_e
    for e in sorted(G.edge_ends):
        lines.append((f.edge_images[e].length(), Fraction(rate.get(e, 0)),
                      G.lengths[e]))

    def sig_at(delta):
        return max((ln + r * delta) / l for (ln, r, l) in lines)

    cands = {cap}
    for i in range(len(lines)):
        for j in range(len(lines)):
            ln1, r1, l1 = lines[i]
            ln2, r2, l2 = lines[j]
            den = r1 * l2 - r2 * l1
            if den == 0:
                continue
            d = (ln2 * l1 - ln1 * l2) / den
            if 0 < d <= cap:
                cands.add(d)
    best = None
    for d in sorted(cands, reverse=True):
        s = sig_at(d)
        if best is None or s < best[2]:
            best = (germ, d, s)
    return best


def _best_slide(f, sigma):
    """The slide minimizing the resulting maximal slope over all vertices."""
    best = None
    for v in sorted(f.source.vertices):
        opt = _slide_options(f, sigma, v)
        if opt is None:
            continue
        germ, delta, s_after = opt
        key = (s_after, -delta)
        if best is None or key < best[0]:
            best = (key, v, germ, delta, s_after)
    if best is None:
        return None
    return best[1], best[2], best[3], best[4]


def _vertex_lines(f):
    """Candidate motion lines per vertex: (target edge, offset, wall offset).

    A vertex with an interior image moves along its edge; one sitting on
    a target vertex may move into any germ edge of an incident image
    path, so those give one candidate line each.
    """
    Gp = f.target
    lines = {}
    for v in sorted(f.source.vertices):
        pt = f.vertex_images[v]
        if pt[0] == "e":
            _, e, off = pt
            lines[v] = [(e, off)]
        else:
            u = pt[1]
            cands = []
            for d in f.source.directions_at(v):
                g = f.germ(d)
                if g is None:
                    continue
                e = abs(g[0])
                off = g[1] if g[0] > 0 else Gp.lengths[e] - g[1]
                # germ offset in +e coordinates equals u's position on e
                pos = Fraction(0) if Gp.origin(e) == u else Gp.lengths[e]
                if (e, pos) not in cands:
                    cands.append((e, pos))
            if not cands:
                for d in sorted(Gp.oriented_edges()):
                    if Gp.origin(d) == u:
                        e = abs(d)
                        pos = Fraction(0) if d > 0 else Gp.lengths[e]
                        cands.append((e, pos))
                        break
            lines[v] = cands
    return lines


def _cell_jump(f):
    """Joint LP move of all vertex images within the combinatorial cell.

    Each vertex is confined to a line (a target edge); the LP minimizes
    the maximal slope over offsets on these lines.  Returns True if the
    map strictly improved.
    """
    G, Gp = f.source, f.target
    sigma = f.sigma()
    lines = _vertex_lines(f)
    verts = sorted(G.vertices)
    combos = [{}]
    for v in verts:
        nxt = []
        for c in combos:
            for line in lines[v]:
                d = dict(c)
                d[v] = line
                nxt.append(d)
        combos = nxt[:64]

    for combo in combos:
        moved = _try_cell_lp(f, sigma, combo)
        if moved:
            return True
    return False


def _try_cell_lp(f, sigma, combo):
    G, Gp = f.source, f.target
    verts = sorted(G.vertices)
    x_cur = {}
    for v in verts:
        e, off = combo[v]
        x_cur[v] = off

    # affine model: len_e(x) = len_cur + sum_ends coef * (x_v - x_cur_v),
    # with a pair of rows for ambiguously oriented degenerate edges.
    rows = []          # (coef dict v -> c, base length, edge)
    nonneg = []        # (coef dict, base): model validity, length >= 0
    for e in sorted(G.edge_ends):
        o, t = G.edge_ends[e]
        path = f.edge_images[e]
        base = path.length()
        if path.is_point() and combo[o][0] == combo[t][0]:
            # shared line: length |x_o - x_t|, two signed rows
            for s in (1, -1):
                coef = {}
                coef[o] = coef.get(o, 0) + s
                coef[t] = coef.get(t, 0) - s
                rows.append((coef, Fraction(0), e))
            continue
        coef = {}
        for (v, end) in ((o, "start"), (t, "end")):
            ev, off_v = combo[v]
            c = _end_coefficient(f, path, end, ev, off_v, Gp)
            coef[v] = coef.get(v, 0) + c
        rows.append((coef, base, e))
        if len(path.segs) == 1:
            # a single-segment image may not shrink through zero; the
            # affine model is only valid while its length stays >= 0
            nonneg.append((coef, base))

    # variables: (y+_v, y-_v) per vertex, then z' = sigma - z; maximize z'
    nv = len(verts)
    idx = {v: i for i, v in enumerate(verts)}
    nvar = 2 * nv + 1
    c_obj = [Fraction(0)] * (2 * nv) + [Fraction(1)]
    A, b = [], []
    for coef, base, e in rows:
        row = [Fraction(0)] * nvar
        for v, cv in coef.items():
            row[2 * idx[v]] += cv
            row[2 * idx[v] + 1] -= cv
        row[-1] = G.lengths[e]
        rhs = sigma * G.lengths[e] - base
        if rhs < 0:
            return False     # model mismatch; stay safe
        A.append(row)
        b.append(rhs)
    for coef, base in nonneg:
        row = [Fraction(0)] * nvar
        for v, cv in coef.items():
            row[2 * idx[v]] -= cv
            row[2 * idx[v] + 1] += cv
        A.append(row)
        b.append(base)
    for v in verts:
        e, _ = combo[v]
        L = Gp.lengths[e]
        up = [Fraction(0)] * nvar
        up[2 * idx[v]] = Fraction(1)
        A.append(up)
        b.append(L - x_cur[v])
        dn = [Fraction(0)] * nvar
        dn[2 * idx[v] + 1] = Fraction(1)
        A.append(dn)
        b.append(x_cur[v])
    try:
        value, sol = simplex_lp.solve_lp_max(c_obj, A, b)
    except simplex_lp.Unbounded:
        return False
    if value <= 0:
        return False
    # apply: move each vertex along its line, transporting edge images
    new_points = {}
    for v in verts:
        e, _ = combo[v]
        x_new = x_cur[v] + sol[2 * idx[v]] - sol[2 * idx[v] + 1]
        new_points[v] = edge_point(Gp, e, x_new)
    _transport(f, new_points, combo, x_cur)
    return True


def _end_coefficient(f, path, end, ev, off_v, Gp):
    """Rate of change of the path length when its `end` moves along +ev."""
    L = Gp.lengths[ev]
    if end == "start":
        germ = path.first_germ()
    else:
        germ = path.reverse().first_germ()
    if germ is None:
        # degenerate path, endpoints on distinct lines: it grows away
        # from the wall offset
        return Fraction(1) if off_v == 0 else Fraction(-1)
    ge, ga = germ
    if abs(ge) == ev:
        # moving into the germ shortens the path
        return Fraction(-1) if ge > 0 else Fraction(1)
    # germ on a different edge: the path grows away from the wall
    return Fraction(1) if off_v == 0 else Fraction(-1)


def _transport(f, new_points, combo, x_cur):
    """Move vertex images to new_points, prepending/appending connectors."""
    G, Gp = f.source, f.target
    conn = {}
    for v, pt in new_points.items():
        e, _ = combo[v]
        conn[v] = (e, x_cur[v], _offset_on(Gp, pt, e))
    for eid in sorted(G.edge_ends):
        o, t = G.edge_ends[eid]
        path = f.edge_images[eid]
        e_o, x0_o, x1_o = conn[o]
        if x1_o != x0_o:
            seg = (e_o, min(x0_o, x1_o), max(x0_o, x1_o))
            if x1_o < x0_o:
                seg = seg_reverse(Gp, seg)
            # seg runs old -> new; we need new -> old in front
            back = seg_reverse(Gp, seg)
            path = path.prepend_segment(back)
        e_t, x0_t, x1_t = conn[t]
        if x1_t != x0_t:
            seg = (e_t, min(x0_t, x1_t), max(x0_t, x1_t))
            if x1_t < x0_t:
                seg = seg_reverse(Gp, seg)
            rev = path.reverse().prepend_segment(seg_reverse(Gp, seg))
            path = rev.reverse()
        f.edge_images[eid] = path
    for v, pt in new_points.items():
        f.vertex_images[v] = pt


def _offset_on(Gp, pt, e):
    """Offset of a point on edge e in +e coordinates."""
    if pt[0] == "e":
        if pt[1] != e:
            raise ValueError("point not on the given edge")
        return pt[2]
    u = pt[1]
    if Gp.origin(e) == u:
        return Fraction(0)
    if Gp.terminus(e) == u:
        return Gp.lengths[e]
    raise ValueError("vertex not an endpoint of the edge")


def _drain_slide(f, sigma):
    """A strictly interior slide at a one-gate tension vertex.

    The step keeps every other edge strictly below sigma, so the moved
    vertex's tension edges leave the tension graph and nothing enters.
    """
    G = f.source
    for v in sorted(G.vertices):
        dirs = [d for d in G.directions_at(v) if f.slope(d) == sigma]
        if not dirs:
            continue
        germs = {f.germ(d) for d in dirs}
        if len(germs) != 1:
            continue
        germ = germs.pop()
        rate = {}
        for d in G.directions_at(v):
            e = abs(d)
            rate[e] = rate.get(e, 0) + (-1 if f.germ(d) == germ else 1)
        seg_cap = None
        for d in G.directions_at(v):
            if f.germ(d) == germ:
                seg = f.image_of_direction(d).segs[0]
                c = seg[2] - seg[1]
                seg_cap = c if seg_cap is None else min(seg_cap, c)
        rise_cap = None
        for e, r in rate.items():
            if r > 0:
                slack = (sigma * G.lengths[e] - f.edge_images[e].length()) / r
                rise_cap = slack if rise_cap is None else min(rise_cap, slack)
        if rise_cap is not None and rise_cap <= seg_cap:
            delta = rise_cap / 2
        else:
            delta = seg_cap
        if delta <= 0:
            continue
        return v, germ, delta
    return None


def tension_graph(f):
    """Edges where the slope equals sigma, by exact comparison."""
    return f.tension_edges()


def gates(f, restrict_edges=None):
    return f.gates(restrict_edges)


# -- in-simplex optimization --------------------------------------------------


def optimize_in_simplex(G, Gp):
    """Exact minimizer of the stretch to Gp over the open simplex of G.

    Returns (lengths dict, lambda*).  The underlying LP maximizes t with
    sum_{e in alpha} x_e >= t * l_{Gp}(alpha) over all candidates alpha,
    sum x = 1, x >= 0.  A zero coordinate in the optimum is reported as
    a boundary optimum (caller misuse or degenerate target).
    """
    cands = candidates(G)
    edges = sorted(G.edge_ends)
    n = len(edges)
    target_lengths = []
    mults = []
    for cand in cands:
        lt = Gp.translation_length(class_of_loop(G, cand.edges))
        target_lengths.append(lt)
        counts = cand.crossing_counts()
        mults.append([Fraction(counts.get(e, 0)) for e in edges])
    # variables: x_1..x_{n-1}, t  (x_n = 1 - sum of the others)
    c = [Fraction(0)] * (n - 1) + [Fraction(1)]
    A = []
    b = []
    for lt, m in zip(target_lengths, mults):
        row = [(m[n - 1] - m[i]) for i in range(n - 1)] + [lt]
        A.append(row)
        b.append(m[n - 1])
    A.append([Fraction(1)] * (n - 1) + [Fraction(0)])
    b.append(Fraction(1))
    value, x = simplex_lp.solve_lp_max(c, A, b)
    if value <= 0:
        raise OptimalMapError("degenerate in-simplex optimum")
    xs = list(x[:n - 1]) + [1 - sum(x[:n - 1])]
    lengths = {e: xs[i] for i, e in enumerate(edges)}
    lam_star = 1 / value
    if any(l <= 0 for l in lengths.values()):
        raise BoundaryOptimumError(lengths, lam_star)
    return lengths, lam_star
