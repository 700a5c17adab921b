"""Points and piecewise-linear paths in a metric graph.

A Point is a vertex or an interior position on an edge; a TargetPath is
a tight PL path given by segments ``(signed edge, a, b)`` traversing the
oriented edge from parameter ``a`` to ``b`` (0 <= a < b <= length), the
parameter measured along the segment's own orientation.  All arithmetic
is exact rational.

These paths are the images of graph maps: vertex images are Points and
edge images TargetPaths.  Tightening, prefix splitting, common-prefix
length and germ extraction are what the optimal-map and folding layers
need.
"""

from __future__ import annotations

from fractions import Fraction


def vertex_point(v):
    return ("v", v)


def edge_point(graph, e, offset):
    """Canonical point at `offset` from the origin of oriented edge e."""
    L = graph.lengths[abs(e)]
    if e < 0:
        e, offset = -e, L - offset
    if offset == 0:
        return ("v", graph.origin(e))
    if offset == L:
        return ("v", graph.terminus(e))
    if not (0 < offset < L):
        raise ValueError("offset outside edge")
    return ("e", e, offset)


def seg_start(graph, seg):
    e, a, b = seg
    return edge_point(graph, e, a)


def seg_end(graph, seg):
    e, a, b = seg
    return edge_point(graph, e, b)


def seg_reverse(graph, seg):
    e, a, b = seg
    L = graph.lengths[abs(e)]
    return (-e, L - b, L - a)


class TargetPath:
    """Tight PL path; may be a single point (empty segment list)."""

    __slots__ = ("graph", "start", "segs")

    def __init__(self, graph, start, segs=()):
        self.graph = graph
        self.segs = []
        self.start = start
        for s in segs:
            self._push(s)
        self.segs = tuple(self.segs)

    def _push(self, seg):
        """Append a segment, cancelling backtracks against the tail."""
        e, a, b = seg
        if a == b:
            return
        if a > b:
            raise ValueError("segment must move forward")
        segs = self.segs
        while True:
            if not segs:
                if seg_start(self.graph, seg) != self.start:
                    raise ValueError("segment does not start at path start")
                segs.append(seg)
                return
            last = segs[-1]
            if seg_end(self.graph, last) != seg_start(self.graph, seg):
                raise ValueError("segments not contiguous")
            le, la, lb = last
            e, a, b = seg
            if e == le and a == lb:           # same direction, contiguous
                segs[-1] = (e, la, b)
                return
            if e == -le:                      # potential backtrack
                L = self.graph.lengths[abs(e)]
                # seg runs over the same edge in reverse; overlap length
                delta = min(lb - la, b - a)
                if delta > 0 and a == L - lb:
                    new_last = (le, la, lb - delta)
                    new_seg = (e, a + delta, b)
                    segs.pop()
                    if new_last[1] != new_last[2]:
                        segs.append(new_last)
                        if new_seg[1] != new_seg[2]:
                            segs.append(new_seg)
                        return
                    if new_seg[1] == new_seg[2]:
                        return
                    seg = new_seg
                    continue
            segs.append(seg)
            return

    # -- construction -----------------------------------------------------

    @classmethod
    def point(cls, graph, pt):
        return cls(graph, pt)

    @classmethod
    def from_edge_word(cls, graph, edges, start=None):
        """Whole-edge path from a (tight or not) signed edge tuple."""
        if start is None:
            start = (vertex_point(graph.origin(edges[0])) if edges
                     else vertex_point(graph.basepoint))
        segs = []
        for e in edges:
            L = graph.lengths[abs(e)]
            segs.append((e, Fraction(0), L))
        return cls(graph, start, segs)

    # -- geometry ---------------------------------------------------------

    def length(self):
        return sum(b - a for (_, a, b) in self.segs)

    def end(self):
        if not self.segs:
            return self.start
        return seg_end(self.graph, self.segs[-1])

    def is_point(self):
        return not self.segs

    def reverse(self):
        segs = [seg_reverse(self.graph, s) for s in reversed(self.segs)]
        return TargetPath(self.graph, self.end(), segs)

    def concat(self, other):
        if self.end() != other.start:
            raise ValueError("paths not composable")
        out = TargetPath(self.graph, self.start, self.segs)
        out.segs = list(out.segs)
        for s in other.segs:
            out._push(s)
        out.segs = tuple(out.segs)
        return out

    def first_germ(self):
        """Direction of departure: (signed edge, start parameter), or None."""
        if not self.segs:
            return None
        e, a, b = self.segs[0]
        return (e, a)

    def split_at(self, dist):
        """Split at arclength `dist`; returns (head, tail)."""
        if dist < 0 or dist > self.length():
            raise ValueError("split distance out of range")
        head = []
        segs = list(self.segs)
        remaining = dist
        i = 0
        while i < len(segs) and remaining > 0:
            e, a, b = segs[i]
            if b - a <= remaining:
                head.append((e, a, b))
                remaining -= (b - a)
                i += 1
            else:
                head.append((e, a, a + remaining))
                segs[i] = (e, a + remaining, b)
                remaining = 0
                break
        tail_segs = segs[i:]
        h = TargetPath(self.graph, self.start, head)
        t = TargetPath(self.graph, h.end(), tail_segs)
        return h, t

    def common_prefix_length(self, other):
        """Arclength of the maximal common initial portion."""
        if self.start != other.start:
            return Fraction(0)
        total = Fraction(0)
        i = j = 0
        sa, sb = list(self.segs), list(other.segs)
        while i < len(sa) and j < len(sb):
            e1, a1, b1 = sa[i]
            e2, a2, b2 = sb[j]
            if e1 != e2 or a1 != a2:
                break
            step = min(b1, b2) - a1
            total += step
            if b1 == b2:
                i += 1
                j += 1
            elif b1 < b2:
                sb[j] = (e2, b1, b2)
                i += 1
            else:
                sa[i] = (e1, b2, b1)
                j += 1
        return total

    def drop_prefix(self, dist):
        return self.split_at(dist)[1]

    def prepend_segment(self, seg):
        """New path: seg then self (tightened)."""
        p = TargetPath(self.graph, seg_start(self.graph, seg), [seg])
        return p.concat(self)

    def closed_class_edges(self):
        """Cyclic signed-edge tuple of the free homotopy class of a closed path.

        The path must be closed.  Returns () for a nullhomotopic path.
        """
        if self.end() != self.start:
            raise ValueError("path is not closed")
        if not self.segs:
            return ()
        segs = list(self.segs)
        # normalize across the wrap point: merge same-direction contiguous
        # pieces and cancel backtracks until neither applies
        while len(segs) > 1:
            s1, s2 = segs[-1], segs[0]
            if s1[0] == s2[0] and s1[2] == s2[1]:
                segs[0] = (s1[0], s1[1], s2[2])
                segs.pop()
                continue
            if s1[0] == -s2[0]:
                L = self.graph.lengths[abs(s1[0])]
                if s2[1] == L - s1[2]:
                    d = min(s1[2] - s1[1], s2[2] - s2[1])
                    e1, a1, b1 = s1
                    e2, a2, b2 = s2
                    segs.pop()
                    segs.pop(0)
                    if b1 - d != a1:
                        segs.append((e1, a1, b1 - d))
                    if a2 + d != b2:
                        segs.insert(0, (e2, a2 + d, b2))
                    continue
            break
        if not segs:
            return ()
        if len(segs) == 1:
            e, a, b = segs[0]
            L = self.graph.lengths[abs(e)]
            if a == 0 and b == L:
                return (e,)   # a full loop edge
            return ()
        # rotate to a vertex junction
        n = len(segs)
        rot = None
        for k in range(n):
            prev = segs[(k - 1) % n]
            if seg_end(self.graph, prev)[0] == "v":
                rot = k
                break
        if rot is None:
            return ()
        segs = segs[rot:] + segs[:rot]
        edges = []
        for (e, a, b) in segs:
            L = self.graph.lengths[abs(e)]
            if a != 0 or b != L:
                raise AssertionError("tight closed path has partial segment "
                                     "after rotation")
            edges.append(e)
        from .words import free_reduce, cyclic_reduce
        core, _ = cyclic_reduce(free_reduce(edges))
        return tuple(core)

    def __eq__(self, other):
        return (isinstance(other, TargetPath) and self.graph is other.graph
                and self.start == other.start and self.segs == other.segs)

    def __repr__(self):
        return f"TargetPath(start={self.start}, segs={list(self.segs)})"
