"""Brute-force oracles: slow, independent routes used to check fast paths.

These deliberately avoid the candidate machinery, the direction-digraph
classification, and the greedy Whitehead descent; comparisons against
them are the backbone of the test suite and of the experiment runner.
"""

from __future__ import annotations


def all_short_loops(graph, max_crossings=2, budget=2_000_000):
    """All immersed cyclic loops crossing each unoriented edge at most twice.

    Returns a list of cyclic edge tuples, one per loop class up to
    rotation and inversion.  DFS over oriented edges with usage counts.
    """
    from .lipschitz import _loop_canon

    found = {}
    steps = 0
    edges = sorted(graph.edge_ends)
    index = {e: i for i, e in enumerate(edges)}
    dirs_at = {v: tuple(graph.directions_at(v)) for v in graph.vertices}
    term = {d: graph.terminus(d) for v in graph.vertices for d in dirs_at[v]}
    for start in [s * e for e in edges for s in (1, -1)]:
        v0 = graph.origin(start)
        usage0 = [0] * len(edges)
        usage0[index[abs(start)]] = 1
        stack = [((start,), tuple(usage0))]
        while stack:
            steps += 1
            if steps > budget:
                raise RuntimeError("loop enumeration budget exceeded")
            path, usage = stack.pop()
            head = term[path[-1]]
            if head == v0 and path[-1] != -path[0]:
                key = _loop_canon(path)
                found.setdefault(key, tuple(path))
                # longer loops may still close differently; keep extending
            for e in dirs_at[head]:
                if e == -path[-1]:
                    continue
                i = index[abs(e)]
                if usage[i] >= max_crossings:
                    continue
                u2 = list(usage)
                u2[i] += 1
                stack.append((path + (e,), tuple(u2)))
    return list(found.values())


def brute_stretch(G, Gp, max_crossings=2):
    """Max of target/source length over ALL loops crossing each edge <= twice."""
    from .lipschitz import class_of_loop

    best = None
    best_loop = None
    for loop in all_short_loops(G, max_crossings):
        lg = sum(G.lengths[abs(e)] for e in loop)
        lt = Gp.translation_length(class_of_loop(G, loop))
        ratio = lt / lg
        if best is None or ratio > best:
            best = ratio
            best_loop = loop
    return best, best_loop


def subgroup_elements_up_to(gen_words, max_length, slack=None):
    """Elements of <gen_words> of word length <= max_length, by BFS closure.

    States are reduced words; expansion multiplies by generators on the
    right, pruned at max_length + slack (slack defaults to the longest
    generator; long products that dip back under the bound survive).
    """
    group = gen_words[0].group
    gens = []
    for w in gen_words:
        gens.append(w)
        gens.append(w.inverse())
    slack = max(len(g) for g in gens) if slack is None else slack
    bound = max_length + slack
    seen = {group.identity().letters}
    frontier = [group.identity()]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                u = w * g
                if len(u) > bound:
                    continue
                if u.letters not in seen:
                    seen.add(u.letters)
                    nxt.append(u)
        frontier = nxt
    return {ls for ls in seen if len(ls) <= max_length}


def conjugate_into_bruteforce(H_words, K_words, conjugator_length, member_length=16):
    """Is g^-1 <H> g <= <K> for some |g| <= conjugator_length?  Word search."""
    from .words import Word
    from . import stallings

    group = H_words[0].group
    K_based = stallings.core_graph(K_words, based=True)

    def all_words(n):
        out = [group.identity()]
        frontier = [group.identity()]
        for _ in range(n):
            nxt = []
            for w in frontier:
                for x in group.all_letters():
                    u = w * Word(group, [x])
                    if len(u) == len(w) + 1:
                        nxt.append(u)
            out.extend(nxt)
            frontier = nxt
        return out

    for g in all_words(conjugator_length):
        gi = g.inverse()
        if all(stallings.contains_element(K_based, gi * h * g) for h in H_words):
            return True
    return False


def whitehead_simple_oracle(cw, cap=200_000, cache=None):
    """Simplicity by search: some image under a chain of non-length-increasing
    type-II Whitehead moves omits a generator.

    Independent of the greedy descent: explores the full non-increasing
    cone with breadth-first closure.  A negative verdict certifies every
    word in the explored cone, so an optional cache dict amortizes
    sweeps (positives propagate forward when hit during the search).
    """
    from .whitehead import all_type_ii_automorphisms, apply_whitehead

    group = cw.group
    moves = all_type_ii_automorphisms(group)
    start = cw
    if _omits_generator(start):
        return True
    if cache is not None and start in cache:
        return cache[start]
    seen = {start}
    frontier = [start]
    found = False
    while frontier and not found:
        nxt = []
        for w in frontier:
            for tau in moves:
                img = apply_whitehead(tau, w)
                if len(img) > len(w):
                    continue
                if img in seen:
                    continue
                if _omits_generator(img):
                    found = True
                    break
                if cache is not None and img in cache:
                    if cache[img]:
                        found = True
                        break
                    # a cached negative covers its whole cone; no need
                    # to expand past it
                    seen.add(img)
                    continue
                seen.add(img)
                if len(seen) > cap:
                    raise RuntimeError("oracle state cap exceeded")
                nxt.append(img)
            if found:
                break
        frontier = nxt
    if cache is not None:
        if found:
            cache[start] = True
        else:
            for w in seen:
                cache[w] = False
    return found


def _omits_generator(cw):
    return len(cw.support()) < cw.group.rank
