"""A finite window into the free factor graph.

Vertices are conjugacy classes of proper free factors (FactorHandles);
two handles are adjacent when one conjugates into the other.  True
distances in the factor graph are not computable from a bounded ball,
so distance queries return explicit upper bounds (BFS hop counts in the
ball); the quasi-geodesic checker is phrased accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import stallings
from .stallings import FactorHandle, conjugate_into
from .whitehead import all_type_ii_automorphisms


class ProjectionImage:
    """The set of factors represented by proper core subgraphs of a point."""

    def __init__(self, handles):
        handles = list(handles)
        if not handles:
            raise ValueError("empty projection")
        self.handles = {h.code: h for h in handles}

    def codes(self):
        return set(self.handles)

    def __iter__(self):
        return iter(self.handles.values())

    def __len__(self):
        return len(self.handles)


def project(G):
    """Projection of a marked graph: its subgraph factors, deduplicated."""
    if G.group.rank < 3:
        raise ValueError("the factor graph degenerates below rank 3")
    return ProjectionImage(G.subgraph_factors())


@dataclass
class FactorBall:
    bound: int                      # max cyclic-core edge count
    handles: dict = field(default_factory=dict)    # code -> FactorHandle
    adjacency: dict = field(default_factory=dict)  # code -> set of codes
    truncated: bool = False

    def add(self, handle):
        if handle.edge_count() > self.bound:
            return False
        self.handles.setdefault(handle.code, handle)
        return True

    def contains(self, handle):
        return handle.code in self.handles

    def compute_adjacency(self):
        """Adjacency = proper conjugate containment in either direction.

        Two distinct factor classes of equal rank never properly contain
        one another (a rank-k free factor of a rank-k factor is the whole
        thing), so only cross-rank pairs are tested.
        """
        codes = sorted(self.handles)
        self.adjacency = {c: set() for c in codes}
        for i, c1 in enumerate(codes):
            for c2 in codes[i + 1:]:
                h1, h2 = self.handles[c1], self.handles[c2]
                if h1.rank == h2.rank:
                    continue
                lo, hi = (h1, h2) if h1.rank < h2.rank else (h2, h1)
                if conjugate_into(lo.core, hi.core)[0]:
                    self.adjacency[c1].add(c2)
                    self.adjacency[c2].add(c1)

    def distance_upper(self, h1, h2):
        """BFS hop count in the ball: an upper bound for the true distance."""
        if h1.code not in self.handles or h2.code not in self.handles:
            raise KeyError("handle not in ball")
        if h1.code == h2.code:
            return 0
        from collections import deque
        dist = {h1.code: 0}
        q = deque([h1.code])
        while q:
            c = q.popleft()
            for c2 in self.adjacency[c]:
                if c2 not in dist:
                    dist[c2] = dist[c] + 1
                    if c2 == h2.code:
                        return dist[c2]
                    q.append(c2)
        return None    # unreachable within the ball

    def diameter_upper(self, handles):
        """Max pairwise distance_upper over the given handles (None if split)."""
        hs = list(handles)
        best = 0
        for i in range(len(hs)):
            for j in range(i + 1, len(hs)):
                d = self.distance_upper(hs[i], hs[j])
                if d is None:
                    return None
                best = max(best, d)
        return best


def build_ball(group, seeds=(), bound=6, aut_product_length=3,
               vertex_cap=4000):
    """Enumerate small-core factors: sub-bases of the standard basis, their
    images under products of Whitehead automorphisms, plus the seeds."""
    ball = FactorBall(bound=bound)
    for h in seeds:
        if h.edge_count() > bound:
            raise ValueError("seed exceeds the complexity bound")
        ball.add(h)
    n = group.rank
    base_factors = []
    for mask in range(1, 1 << n):
        gens = [group.generator(i + 1) for i in range(n) if mask >> i & 1]
        if len(gens) >= n:
            continue
        base_factors.append(gens)
    frontier = []
    for gens in base_factors:
        h = FactorHandle.from_words(gens, ambient_rank=n)
        if ball.add(h):
            frontier.append(gens)
    moves = [t.automorphism() for t in all_type_ii_automorphisms(group)]
    for _ in range(aut_product_length):
        nxt = []
        for gens in frontier:
            for phi in moves:
                imgs = [phi.apply(g) for g in gens]
                h = FactorHandle.from_words(imgs, ambient_rank=n)
                if h.edge_count() <= bound and h.code not in ball.handles:
                    ball.add(h)
                    nxt.append(imgs)
                if len(ball.handles) >= vertex_cap:
                    ball.truncated = True
                    break
            if ball.truncated:
                break
        if ball.truncated:
            break
        frontier = nxt
    ball.compute_adjacency()
    return ball


@dataclass
class QuasiGeodesicReport:
    ok: bool
    breakpoints: list = None       # indices into the sequence
    window_diameters: list = None
    failed_window: tuple = None    # (start index, reason)
    progress_table: list = None    # (i, j, |i-j|, distance bound)
    consistent: bool = None        # |i-j| <= d_upper(t_i,t_j) + 2 under upper bounds


def _image_distance(ball, img1, img2):
    """Coarse distance between projection images: min over handle pairs."""
    best = None
    for h1 in img1:
        for h2 in img2:
            d = ball.distance_upper(h1, h2)
            if d is None:
                continue
            best = d if best is None else min(best, d)
    return best


def check_reparam_quasigeodesic(images, K, ball):
    """Greedy subdivision certificate for a projected path.

    images: list of ProjectionImage along the path.  Windows are grown
    while the diameter of the union of their projections stays <= K
    (diameters measured by ball distance_upper, conservative for the
    window condition).  The index condition |i-j| <= d(t_i,t_j) + 2 is
    then checked with the same upper bounds and REPORTED as consistent
    or not: an upper bound cannot refute it, so the verdict certifies
    the subdivision, not the proposition.
    """
    for img in images:
        for h in img:
            if not ball.contains(h):
                raise KeyError("projected handle missing from the ball")
    breakpoints = [0]
    diameters = []
    k = 0
    while k < len(images) - 1:
        j = k
        diam_here = 0
        while j + 1 < len(images):
            window = []
            for img in images[k:j + 2]:
                window.extend(img)
            d = ball.diameter_upper(window)
            if d is None or d > K:
                break
            diam_here = d
            j += 1
        if j == k:
            return QuasiGeodesicReport(
                ok=False, breakpoints=breakpoints,
                window_diameters=diameters,
                failed_window=(k, "single step exceeds the window bound"))
        breakpoints.append(j)
        diameters.append(diam_here)
        k = j
    progress = []
    consistent = True
    for a in range(len(breakpoints)):
        for b in range(a + 1, len(breakpoints)):
            d = _image_distance(ball, images[breakpoints[a]],
                                images[breakpoints[b]])
            bound_ok = d is None or (b - a) <= d + 2
            if d is not None and not bound_ok:
                consistent = False
            progress.append((breakpoints[a], breakpoints[b], b - a, d))
    return QuasiGeodesicReport(ok=True, breakpoints=breakpoints,
                               window_diameters=diameters,
                               progress_table=progress,
                               consistent=consistent)
