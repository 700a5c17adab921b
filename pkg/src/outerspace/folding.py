"""Greedy folding paths and standard geodesics, event by event.

A fold state is a marked metric graph together with a residual map to
the target whose slope is exactly 1 on every edge (the natural
parametrization) and which has at least two gates at every vertex.
Greedy folding identifies initial segments of length t within each
gate; the combinatorics is constant between events, so the path is
represented by its event snapshots:

* an event time is the least metric common-prefix length over all
  same-gate direction pairs (capped at half length for edges folding at
  both ends);
* executing an event subdivides the participating edges, glues the
  gate stubs, rewrites the marking through the fold, and recomputes the
  residual map.

A standard geodesic precomposes this with a segment inside the source
simplex: the edge lengths move to the pullback lengths of an optimal
map, after which the residual map has slope one everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .words import free_reduce
from .marked_graph import MarkedMetricGraph, EdgePath
from .lipschitz import (GraphMap, optimal_map, stretch_factor,
                        OptimalMapError)
from .traintrack import illegal_turn_count
from . import stallings


class FoldTerminationError(RuntimeError):
    """The event loop failed to make progress (internal error)."""


@dataclass
class FoldEvent:
    time: Fraction                  # accumulated natural time
    graph: MarkedMetricGraph        # snapshot after the event
    residual: GraphMap              # snapshot -> target
    fold_edge_map: dict             # oriented old edge -> tuple of new oriented edges
    fold_vertex_map: dict           # old vertex -> new vertex


@dataclass
class FoldingPath:
    source: MarkedMetricGraph
    target: MarkedMetricGraph
    events: list                    # list of FoldEvent; events[0].time == 0
    parametrization: str = "natural"

    def times(self):
        return [ev.time for ev in self.events]

    def snapshot(self, index, normalized=False):
        g = self.events[index].graph
        return g.normalize() if normalized else g

    def connecting_edge_map(self, i, j):
        """Composite fold map (oriented edge -> edge path) from event i to j."""
        if not 0 <= i <= j < len(self.events):
            raise IndexError("event indices out of range")
        nop = {d: (d,) for d in self.events[i].graph.oriented_edges()}
        comp = nop
        for k in range(i + 1, j + 1):
            step = self.events[k].fold_edge_map
            comp = {d: tuple(x for e in path for x in step[e])
                    for d, path in comp.items()}
        out = {}
        for d, path in comp.items():
            out[d] = tuple(free_reduce(list(path)))
        return out


def gates_of_residual(f):
    """Germ partition over all directions (residual maps are never collapsed)."""
    return f.gates(set(f.source.edge_ends))


def _multi_gates(f):
    """All (vertex, gate directions) with at least two directions."""
    tt = gates_of_residual(f)
    out = []
    for v in sorted(tt.gates):
        for g in tt.gates[v]:
            if len(g) >= 2:
                out.append((v, tuple(sorted(g))))
    return out


def _event_depth(f, gates):
    """The first combinatorial event time for the given folding gates."""
    tau = None
    for (v, dirs) in gates:
        for i in range(len(dirs)):
            for j in range(i + 1, len(dirs)):
                c = f.image_of_direction(dirs[i]).common_prefix_length(
                    f.image_of_direction(dirs[j]))
                if c <= 0:
                    raise FoldTerminationError("same gate but no common prefix")
                tau = c if tau is None else min(tau, c)
    folding_dirs = {d for (_, dirs) in gates for d in dirs}
    for e in {abs(d) for d in folding_dirs}:
        if e in folding_dirs and -e in folding_dirs:
            tau = min(tau, f.source.lengths[e] / 2)
    return tau


def fold_step(state_graph, f, gates=None, tau=None):
    """One folding event.  Returns (tau, new_graph, new_residual, edge_map,
    vertex_map) or None when no gate has two directions.

    f must have slope exactly 1 on every edge of state_graph and at
    least two gates at every vertex.
    """
    G, Gp = state_graph, f.target
    if gates is None:
        gates = _multi_gates(f)
    if not gates:
        return None
    if tau is None:
        tau = _event_depth(f, gates)
    folding_dirs = {d for (_, dirs) in gates for d in dirs}

    # subdivision: per positive edge, the cut positions
    cuts = {}
    for e in sorted(G.edge_ends):
        cs = set()
        L = G.lengths[e]
        if e in folding_dirs and tau < L:
            cs.add(tau)
        if -e in folding_dirs and tau < L:
            cs.add(L - tau)
        cuts[e] = sorted(cs)

    next_vertex = max(G.vertices) + 1
    next_edge = max(G.edge_ends) + 1
    new_vertices = set(G.vertices)
    piece_ends = {}      # piece id -> (origin, target)
    piece_len = {}
    piece_image = {}
    pieces_of = {}       # positive old edge -> list of piece ids, in order
    for e in sorted(G.edge_ends):
        o, t = G.edge_ends[e]
        L = G.lengths[e]
        marks = [Fraction(0)] + cuts[e] + [L]
        ids = []
        prev_v = o
        img = f.edge_images[e]
        for k in range(len(marks) - 1):
            a, b = marks[k], marks[k + 1]
            if k == len(marks) - 2:
                nv = t
            else:
                nv = next_vertex
                next_vertex += 1
                new_vertices.add(nv)
            pid = next_edge
            next_edge += 1
            head, img = img.split_at(b - a)
            piece_ends[pid] = (prev_v, nv)
            piece_len[pid] = b - a
            piece_image[pid] = head
            ids.append(pid)
            prev_v = nv
        pieces_of[e] = ids

    # gate gluing: identify stubs and their endpoints
    parent = {v: v for v in new_vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    edge_sub = {}        # oriented piece id -> oriented replacement id
    drop_pieces = set()
    for (v, dirs) in gates:
        stub_pieces = []
        for d in dirs:
            e = abs(d)
            ids = pieces_of[e]
            if d > 0:
                stub_pieces.append(ids[0])          # oriented away from v
            else:
                stub_pieces.append(-ids[-1])        # reverse of the last piece
        # identify all stubs with the first one
        canon = stub_pieces[0]
        canon_end = (piece_ends[canon][1] if canon > 0 else piece_ends[-canon][0])
        for sp in stub_pieces[1:]:
            end_v = piece_ends[sp][1] if sp > 0 else piece_ends[-sp][0]
            union(canon_end, end_v)
            edge_sub[sp] = canon
            edge_sub[-sp] = -canon
            drop_pieces.add(abs(sp))
        # sanity: the identified stubs carry identical image prefixes
        canon_img = piece_image[abs(canon)]
        canon_path = canon_img if canon > 0 else canon_img.reverse()
        for sp in stub_pieces[1:]:
            img = piece_image[abs(sp)]
            path = img if sp > 0 else img.reverse()
            if path.segs != canon_path.segs:
                raise FoldTerminationError("gate stubs have unequal prefixes")

    # assemble quotient graph
    vmap = {v: find(v) for v in new_vertices}
    verts = set(vmap.values())
    edge_ends = {}
    lengths = {}
    images = {}
    for pid in sorted(piece_ends):
        if pid in drop_pieces:
            continue
        o, t = piece_ends[pid]
        edge_ends[pid] = (vmap[o], vmap[t])
        lengths[pid] = piece_len[pid]
        images[pid] = piece_image[pid]

    # fold map on oriented edges
    edge_map = {}
    for e in sorted(G.edge_ends):
        seq = []
        for pid in pieces_of[e]:
            seq.append(edge_sub.get(pid, pid))
        edge_map[e] = tuple(seq)
        edge_map[-e] = tuple(-x for x in reversed(seq))

    # markings through the fold
    marking_in = {}
    for i in range(1, G.group.rank + 1):
        loop = []
        for d in G.marking_in[i]:
            loop.extend(edge_map[d])
        marking_in[i] = tuple(free_reduce(loop))
    basepoint = vmap[G.basepoint]

    new_graph = MarkedMetricGraph(G.group, verts, edge_ends, lengths,
                                  marking_in,
                                  {e: G.group.identity() for e in edge_ends},
                                  basepoint, subdivided=True)
    new_graph.recompute_marking_out()

    vertex_images = {}
    for pid, (o, t) in edge_ends.items():
        vertex_images[o] = images[pid].start
        vertex_images[t] = images[pid].end()
    residual = GraphMap(new_graph, Gp, vertex_images, images)

    # simplify: merge legal degree-2 vertices (not the basepoint)
    new_graph, residual, merge_map = _merge_degree_two(new_graph, residual)
    if merge_map is not None:
        edge_map = {d: tuple(free_reduce([x for e2 in path
                                          for x in merge_map[e2]]))
                    for d, path in edge_map.items()}
        vertex_images = residual.vertex_images

    vertex_map = {v: vmap[v] for v in G.vertices}
    return tau, new_graph, residual, edge_map, vertex_map


def _merge_degree_two(G, f):
    """Merge degree-2 vertices whose two directions make a legal turn."""
    merge_map = {d: (d,) for d in G.oriented_edges()}
    changed = False
    while True:
        victim = None
        for v in sorted(G.vertices):
            if v == G.basepoint:
                continue
            dirs = G.directions_at(v)
            if len(dirs) != 2:
                continue
            d1, d2 = dirs
            if abs(d1) == abs(d2):
                continue   # loop at a valence-2 vertex: leave for folding
            if f.germ(d1) == f.germ(d2):
                continue   # illegal turn: the next event folds here
            victim = (v, d1, d2)
            break
        if victim is None:
            break
        changed = True
        v, d1, d2 = victim
        # new edge E: terminus(d1) -> terminus(d2), path = (-d1) . d2
        E = max(G.edge_ends) + 1
        o, t = G.terminus(d1), G.terminus(d2)
        img = f.image_of_direction(d1).reverse().concat(f.image_of_direction(d2))
        new_ends = {e: G.edge_ends[e] for e in G.edge_ends
                    if e not in (abs(d1), abs(d2))}
        new_ends[E] = (o, t)
        new_lengths = {e: G.lengths[e] for e in new_ends if e != E}
        new_lengths[E] = G.lengths[abs(d1)] + G.lengths[abs(d2)]
        sub = {d: (d,) for d in G.oriented_edges()
               if abs(d) not in (abs(d1), abs(d2))}
        sub[-d1] = (E,)
        sub[d2] = ()      # absorbed: (-d1).(d2) = E, so d2 alone maps through v
        sub[d1] = (-E,)
        sub[-d2] = ()
        # rewriting: every path through v crosses (-d1, d2) or (-d2, d1);
        # substituting -d1 -> E, d2 -> (), d1 -> -E, -d2 -> () realizes both.
        marking_in = {}
        for i in range(1, G.group.rank + 1):
            loop = []
            for d in G.marking_in[i]:
                loop.extend(sub[d])
            marking_in[i] = tuple(free_reduce(loop))
        verts = set(G.vertices) - {v}
        new_graph = MarkedMetricGraph(G.group, verts, new_ends, new_lengths,
                                      marking_in,
                                      {e: G.group.identity() for e in new_ends},
                                      G.basepoint, subdivided=True)
        new_graph.recompute_marking_out()
        new_images = {e: f.edge_images[e] for e in new_ends if e != E}
        new_images[E] = img
        vertex_images = {w: f.vertex_images[w] for w in verts}
        f = GraphMap(new_graph, f.target, vertex_images, new_images)
        merge_map = {d: tuple(free_reduce([x for e2 in path
                                           for x in sub[e2]]))
                     for d, path in merge_map.items()}
        G = new_graph
    if not changed:
        return G, f, None
    return G, f, merge_map


def _is_marking_isometry(f):
    """Is the residual map an isometry onto the target, up to subdivision?

    Called when no gate has two directions, so the map is locally
    injective (tight slope-1 images, singleton gates).  A locally
    injective homotopy equivalence covers the whole core target, and
    equal volumes force multiplicity one everywhere: a bijective local
    isometry.  Degree-2 vertices of the source (the basepoint survives
    folding unmerged) subdivide the target; that is the same point of
    Outer space.
    """
    G, Gp = f.source, f.target
    if G.volume() != Gp.volume():
        return False
    for e in G.edge_ends:
        if f.edge_images[e].is_point():
            return False
    return True


def folding_path(G, f, max_events=5000):
    """Iterate fold events until the residual map is an isometry onto the target.

    G: marked graph rescaled so that f has slope 1 on every edge;
    f: the residual optimal map with >= 2 gates everywhere.
    """
    for e in G.edge_ends:
        if f.slope(e) != 1:
            raise ValueError("natural parametrization requires slope 1 on every edge")
    tt = gates_of_residual(f)
    for v in G.vertices:
        if G.degree(v) >= 2 and tt.gate_count(v) < 2:
            raise ValueError(f"vertex {v} has one gate; the map is not optimal")
    events = [FoldEvent(Fraction(0), G, f, None, None)]
    t = Fraction(0)
    current_graph, current_map = G, f
    for _ in range(max_events):
        step = fold_step(current_graph, current_map)
        if step is None:
            if not _is_marking_isometry(current_map):
                raise FoldTerminationError(
                    "no foldable gate but the residual is not an isometry")
            path = FoldingPath(G, f.target, events)
            return path
        tau, new_graph, new_map, edge_map, vertex_map = step
        if new_graph.volume() >= current_graph.volume():
            raise FoldTerminationError("volume failed to decrease")
        t += tau
        events.append(FoldEvent(t, new_graph, new_map, edge_map, vertex_map))
        current_graph, current_map = new_graph, new_map
    raise FoldTerminationError("event cap exceeded")


@dataclass
class StandardGeodesic:
    source: MarkedMetricGraph
    target: MarkedMetricGraph
    lengths_start: dict
    lengths_end: dict            # pullback lengths on the source graph, normalized
    collapsed_edges: frozenset   # edges whose pullback length is 0 (missing face)
    mid: MarkedMetricGraph       # the rescaled graph actually folded (natural lengths)
    path: FoldingPath


def _tighten_plain(f):
    """Slide vertex classes whose every direction shares one germ.

    Collapsed edges tie their endpoints into one class; a slide moves
    the whole class, strictly reducing total image length.  Terminates
    by the lattice bound and never raises sigma (nothing grows).
    """
    G = f.source
    while True:
        # classes of vertices joined by collapsed edges
        parent = {v: v for v in G.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in G.edge_ends:
            if f.edge_images[e].is_point():
                o, t = G.edge_ends[e]
                ro, rt = find(o), find(t)
                if ro != rt:
                    parent[max(ro, rt)] = min(ro, rt)
        classes = {}
        for v in G.vertices:
            classes.setdefault(find(v), []).append(v)
        moved = False
        for root, members in sorted(classes.items()):
            germs = set()
            live = []
            for v in members:
                for d in G.directions_at(v):
                    p = f.image_of_direction(d)
                    if p.is_point():
                        continue
                    germs.add(p.first_germ())
                    live.append((v, d))
            if len(germs) != 1 or not live:
                continue
            germ = germs.pop()
            delta = None
            for (v, d) in live:
                seg = f.image_of_direction(d).segs[0]
                c = seg[2] - seg[1]
                delta = c if delta is None else min(delta, c)
            # move every member along the germ; all live directions shrink
            from .paths import edge_point, seg_reverse
            e_g, a_g = germ
            new_point = edge_point(f.target, e_g, a_g + delta)
            for e in sorted(G.edge_ends):
                o, t = G.edge_ends[e]
                path = f.edge_images[e]
                if find(o) == root and not path.is_point():
                    path = path.drop_prefix(delta)
                if find(t) == root and not path.is_point():
                    rev = path.reverse().drop_prefix(delta)
                    path = rev.reverse()
                f.edge_images[e] = path
            for v in members:
                f.vertex_images[v] = new_point
            moved = True
            break
        if not moved:
            return f


def standard_geodesic(G, Gp, max_events=5000):
    """Simplex segment to the pullback lengths, then the folding path."""
    lam, wit = stretch_factor(G, Gp)
    f = optimal_map(G, Gp, lam, wit)
    f = _tighten_plain(f)
    if f.sigma() != lam:
        raise OptimalMapError("tightening broke optimality")
    pullback = {e: f.edge_images[e].length() for e in sorted(G.edge_ends)}
    collapsed = frozenset(e for e, l in pullback.items() if l == 0)
    mid_vol = sum(pullback.values())
    lengths_end = {e: l / mid_vol for e, l in pullback.items()}

    # quotient collapsed edges to build the graph the fold runs on
    parent = {v: v for v in G.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in collapsed:
        o, t = G.edge_ends[e]
        ro, rt = find(o), find(t)
        if ro != rt:
            parent[max(ro, rt)] = min(ro, rt)
    vmap = {v: find(v) for v in G.vertices}
    verts = set(vmap.values())
    edge_ends = {e: (vmap[o], vmap[t]) for e, (o, t) in G.edge_ends.items()
                 if e not in collapsed}
    lengths = {e: pullback[e] for e in edge_ends}
    marking_in = {}
    for i in range(1, G.group.rank + 1):
        loop = [d for d in G.marking_in[i] if abs(d) not in collapsed]
        marking_in[i] = tuple(free_reduce(loop))
    mid = MarkedMetricGraph(G.group, verts, edge_ends, lengths, marking_in,
                            {e: G.group.identity() for e in edge_ends},
                            vmap[G.basepoint], subdivided=True)
    mid.recompute_marking_out()
    vertex_images = {}
    for v in G.vertices:
        vertex_images[vmap[v]] = f.vertex_images[v]
    images = {e: f.edge_images[e] for e in edge_ends}
    residual = GraphMap(mid, Gp, vertex_images, images)
    mid2, residual2, _ = _merge_degree_two(mid, residual)
    path = folding_path(mid2, residual2, max_events=max_events)
    return StandardGeodesic(G, Gp, dict(G.lengths), lengths_end, collapsed,
                            mid2, path)


# -- statistics ----------------------------------------------------------------


def path_statistics(path, probe_loops=(), probe_subgroups=()):
    """Per-event statistics table.

    For each event: natural volume; per probe conjugacy class, the
    representative length and its illegal-turn count in the residual
    gate structure; per probe subgroup, the volume of its immersed core
    and a flag for legal segments of normalized length > 2 inside
    topological edges of the core.
    """
    rows = []
    for ev in path.events:
        G, f = ev.graph, ev.residual
        tt = gates_of_residual(f)
        vol = G.volume()
        row = {"time": ev.time, "volume": vol, "loops": [], "subgroups": []}
        for cw in probe_loops:
            rep = G.loop_representative(cw)
            row["loops"].append({
                "class": str(cw),
                "length": rep.length(),
                "illegal_turns": illegal_turn_count(tt, rep),
            })
        for H in probe_subgroups:
            core, hvol = G.subgroup_core_in_graph(H)
            flag = _long_legal_segment_in_core(G, tt, core, vol)
            row["subgroups"].append({
                "volume": hvol,
                "long_legal_segment": flag,
            })
        rows.append(row)
    return rows


def _long_legal_segment_in_core(G, tt, core, total_vol):
    """Any legal segment of normalized length > 2 inside a topological edge
    of the immersed core?"""
    deg = core.degrees()
    branch = {v for v, d in deg.items() if d != 2}
    chains = _core_chains(core, branch)
    for chain in chains:
        run = Fraction(0)
        best = Fraction(0)
        for k, lab in enumerate(chain):
            run += G.lengths[abs(lab)] / total_vol
            best = max(best, run)
            if k + 1 < len(chain):
                turn_ok = not tt.is_illegal_turn(-lab, chain[k + 1])
                if not turn_ok:
                    run = Fraction(0)
        if best > 2:
            return True
    return False


def _core_chains(core, branch):
    """Maximal label chains between branch vertices of an immersed core."""
    chains = []
    if not branch:
        # the core is a disjoint union of circles; walk each once
        seen = set()
        for (o, t, lab) in sorted(core.edges):
            if (o, t, lab) in seen:
                continue
            chain = [lab]
            seen.add((o, t, lab))
            v = t
            while v != o:
                for (o2, t2, lab2) in sorted(core.edges):
                    if (o2, t2, lab2) in seen:
                        continue
                    if o2 == v:
                        chain.append(lab2)
                        seen.add((o2, t2, lab2))
                        v = t2
                        break
                    if t2 == v:
                        chain.append(-lab2)
                        seen.add((o2, t2, lab2))
                        v = o2
                        break
                else:
                    break
            chains.append(tuple(chain))
        return chains
    used = set()
    for b in sorted(branch):
        for (o, t, lab) in sorted(core.edges):
            for start, lab0 in ((o, lab), (t, -lab)):
                if start != b or (abs(lab), frozenset((o, t)), lab0 > 0) in used:
                    continue
                chain = [lab0]
                used.add((abs(lab), frozenset((o, t)), lab0 > 0))
                used.add((abs(lab), frozenset((o, t)), lab0 < 0))
                v = t if lab0 == lab else o
                while v not in branch:
                    for (o2, t2, lab2) in sorted(core.edges):
                        key_f = (abs(lab2), frozenset((o2, t2)), True)
                        key_b = (abs(lab2), frozenset((o2, t2)), False)
                        if key_f in used and key_b in used:
                            continue
                        if o2 == v:
                            chain.append(lab2)
                            used.add(key_f)
                            used.add(key_b)
                            v = t2
                            break
                        if t2 == v:
                            chain.append(-lab2)
                            used.add(key_f)
                            used.add(key_b)
                            v = o2
                            break
                    else:
                        break
                chains.append(tuple(chain))
    return chains
