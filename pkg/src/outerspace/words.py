"""Words, cyclic words and automorphisms of a finite-rank free group.

Letters are nonzero integers: ``+i`` is the i-th generator, ``-i`` its
inverse (1-based, ``i <= rank``).  The string form uses ``a..z`` for
generators and ``A..Z`` for inverses, so ``"abA"`` is a b a^-1.  Ranks
beyond 26 fall back to signed-integer lists.

All values are immutable after construction.  The rank lives on a
shared FreeGroup context object; mixing contexts of different rank is a
hard error.
"""

from __future__ import annotations

from collections import deque


class RankMismatchError(ValueError):
    pass


def letter_inverse(letter):
    return -letter


def letter_key(letter):
    """Sort key realizing the order a < a^-1 < b < b^-1 < ..."""
    return (abs(letter), 0 if letter > 0 else 1)


_LOWER = "abcdefghijklmnopqrstuvwxyz"


def letter_str(letter):
    i = abs(letter)
    if i <= 26:
        ch = _LOWER[i - 1]
        return ch if letter > 0 else ch.upper()
    return str(letter)


def parse_letters(text):
    """Parse a string like ``"abA"`` into a list of signed letters."""
    letters = []
    for ch in text:
        if ch.isspace():
            continue
        lo = ch.lower()
        idx = _LOWER.find(lo)
        if idx < 0:
            raise ValueError(f"unrecognized letter {ch!r}")
        letters.append(idx + 1 if ch.islower() else -(idx + 1))
    return letters


def free_reduce(letters):
    """Freely reduce a letter sequence (stack cancellation)."""
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def cyclic_reduce(letters):
    """Cyclically reduce an already freely reduced sequence.

    Returns (core, conjugator) with original = conjugator * core * conjugator^-1.
    """
    seq = deque(letters)
    pre = []
    while len(seq) >= 2 and seq[0] == -seq[-1]:
        pre.append(seq[0])
        seq.popleft()
        seq.pop()
    return list(seq), pre


class FreeGroup:
    """Context object carrying the rank; words hold a reference to it."""

    def __init__(self, rank):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.rank = rank

    def __eq__(self, other):
        return isinstance(other, FreeGroup) and self.rank == other.rank

    def __hash__(self):
        return hash(("FreeGroup", self.rank))

    def __repr__(self):
        return f"FreeGroup({self.rank})"

    def check_letter(self, letter):
        if letter == 0 or abs(letter) > self.rank:
            raise ValueError(f"letter {letter} out of range for rank {self.rank}")

    def word(self, letters):
        """Build a (reduced) Word from a letter iterable or a string."""
        if isinstance(letters, str):
            letters = parse_letters(letters)
        return Word(self, letters)

    def identity(self):
        return Word(self, [])

    def generator(self, i):
        return Word(self, [i])

    def generators(self):
        return [Word(self, [i]) for i in range(1, self.rank + 1)]

    def all_letters(self):
        return [s * i for i in range(1, self.rank + 1) for s in (1, -1)]


def _same_group(a, b):
    if a.group != b.group:
        raise RankMismatchError(f"mixing ranks {a.group.rank} and {b.group.rank}")


class Word:
    """A freely reduced word.  Construction reduces, so reduce is idempotent."""

    __slots__ = ("group", "letters")

    def __init__(self, group, letters):
        for x in letters:
            group.check_letter(x)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "letters", tuple(free_reduce(list(letters))))

    def __setattr__(self, *a):
        raise AttributeError("Word is immutable")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return (isinstance(other, Word) and self.group == other.group
                and self.letters == other.letters)

    def __hash__(self):
        return hash((self.group.rank, self.letters))

    def __mul__(self, other):
        _same_group(self, other)
        return Word(self.group, list(self.letters) + list(other.letters))

    def inverse(self):
        return Word(self.group, [-x for x in reversed(self.letters)])

    def __pow__(self, n):
        if n == 0:
            return self.group.identity()
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def conjugate_by(self, g):
        """g * self * g^-1."""
        return g * self * g.inverse()

    def is_identity(self):
        return not self.letters

    def __str__(self):
        return "".join(letter_str(x) for x in self.letters) or "1"

    def __repr__(self):
        return f"Word({self})"

    def cyclic(self):
        return CyclicWord(self.group, self.letters)


def _min_rotation(letters):
    """Lexicographically least rotation under letter_key order."""
    n = len(letters)
    if n == 0:
        return ()
    keys = [letter_key(x) for x in letters]
    best = None
    best_rot = None
    for r in range(n):
        cand = tuple(keys[(r + i) % n] for i in range(n))
        if best is None or cand < best:
            best = cand
            best_rot = tuple(letters[(r + i) % n] for i in range(n))
    return best_rot


class CyclicWord:
    """A conjugacy class: cyclically reduced, stored as the least rotation.

    Inversion is NOT quotiented; the classes of g and g^-1 are distinct.
    """

    __slots__ = ("group", "letters")

    def __init__(self, group, letters):
        for x in letters:
            group.check_letter(x)
        core, _ = cyclic_reduce(free_reduce(list(letters)))
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "letters", _min_rotation(core))

    def __setattr__(self, *a):
        raise AttributeError("CyclicWord is immutable")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return (isinstance(other, CyclicWord) and self.group == other.group
                and self.letters == other.letters)

    def __hash__(self):
        return hash(("cyc", self.group.rank, self.letters))

    def is_trivial(self):
        return not self.letters

    def inverse(self):
        return CyclicWord(self.group, [-x for x in reversed(self.letters)])

    def word(self):
        return Word(self.group, self.letters)

    def rotations(self):
        n = len(self.letters)
        return [tuple(self.letters[(r + i) % n] for i in range(n)) for r in range(n)]

    def support(self):
        """Set of generator indices occurring (either sign)."""
        return {abs(x) for x in self.letters}

    def __str__(self):
        return "".join(letter_str(x) for x in self.letters) or "1"

    def __repr__(self):
        return f"CyclicWord({self})"


def reduce_word(group, letters):
    """Raw letters (or a string) -> freely reduced Word."""
    if isinstance(letters, str):
        letters = parse_letters(letters)
    return Word(group, letters)


def cyclic_normal_form(word):
    """Word -> canonical CyclicWord of its conjugacy class."""
    return CyclicWord(word.group, word.letters)


def apply_automorphism(phi, w):
    """Image of a (cyclic) word under an automorphism."""
    return phi.apply(w)


class Automorphism:
    """An automorphism given by generator images.

    Invertibility is certified lazily: ``inverse()`` runs a recorded
    Nielsen reduction on the image tuple and raises if the images do not
    form a basis.
    """

    __slots__ = ("group", "images", "_inverse_cache")

    def __init__(self, group, images):
        images = tuple(images)
        if len(images) != group.rank:
            raise ValueError("need one image per generator")
        for w in images:
            if w.group != group:
                raise RankMismatchError("image in wrong group")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_inverse_cache", None)

    def __setattr__(self, *a):
        raise AttributeError("Automorphism is immutable")

    @classmethod
    def identity(cls, group):
        return cls(group, group.generators())

    def apply(self, w):
        """Apply to a Word (or CyclicWord, returning a CyclicWord)."""
        if isinstance(w, CyclicWord):
            out = self.apply(w.word())
            return CyclicWord(self.group, out.letters)
        _same_group(self, w)
        letters = []
        for x in w.letters:
            img = self.images[abs(x) - 1]
            letters.extend(img.letters if x > 0 else img.inverse().letters)
        return Word(self.group, letters)

    def __call__(self, w):
        return self.apply(w)

    def compose(self, other):
        """self after other: (self.compose(other))(w) == self(other(w))."""
        _same_group(self, other)
        return Automorphism(self.group, [self.apply(im) for im in other.images])

    def __mul__(self, other):
        return self.compose(other)

    def is_identity(self):
        return all(im.letters == (i + 1,) for i, im in enumerate(self.images))

    def inverse(self):
        if self._inverse_cache is None:
            inv = invert_basis_map(self.group, self.group, list(self.images))
            object.__setattr__(self, "_inverse_cache", Automorphism(self.group, inv))
        return self._inverse_cache

    def __eq__(self, other):
        return (isinstance(other, Automorphism) and self.group == other.group
                and self.images == other.images)

    def __hash__(self):
        return hash((self.group.rank, self.images))

    def __repr__(self):
        imgs = ", ".join(f"{letter_str(i + 1)}->{im}" for i, im in enumerate(self.images))
        return f"Automorphism({imgs})"


def invert_basis_map(src, dst, images, max_plateau=200000):
    """Invert a basis-to-basis map src -> dst given by generator images.

    images[i] = image in dst of the i-th generator of src.  Returns the
    list of images (in src) of dst's generators under the inverse map.

    Method: Nielsen-reduce the image tuple with recorded elementary
    moves.  Greedy length descent, with a breadth-first escape across
    equal-length plateaus.  Raises ValueError if the tuple is not a
    basis (or the plateau cap is exceeded).
    """
    n = len(images)
    if n != dst.rank or n != src.rank:
        raise ValueError("rank mismatch")

    # state: tuple of letter-tuples (images), plus the recorded moves.
    def total(state):
        return sum(len(w) for w in state)

    def moves_from(state):
        # elementary Nielsen moves: i <- i*j, i <- i*j^-1, i <- j*i, i <- j^-1*i,
        # and inversion i <- i^-1.  Swaps are unnecessary for reduction.
        res = []
        for i in range(n):
            res.append(("inv", i, 0))
            for j in range(n):
                if i == j:
                    continue
                res.append(("mr", i, j))    # u_i <- u_i u_j
                res.append(("mrI", i, j))   # u_i <- u_i u_j^-1
                res.append(("ml", i, j))    # u_i <- u_j u_i
                res.append(("mlI", i, j))   # u_i <- u_j^-1 u_i
        return res

    def apply_move(state, move):
        kind, i, j = move
        st = list(state)
        if kind == "inv":
            st[i] = tuple(-x for x in reversed(st[i]))
        else:
            u, v = list(st[i]), list(st[j])
            if kind == "mr":
                st[i] = tuple(free_reduce(u + v))
            elif kind == "mrI":
                st[i] = tuple(free_reduce(u + [-x for x in reversed(v)]))
            elif kind == "ml":
                st[i] = tuple(free_reduce(v + u))
            elif kind == "mlI":
                st[i] = tuple(free_reduce([-x for x in reversed(v)] + u))
        return tuple(st)

    start = tuple(tuple(w.letters) for w in images)
    state = start
    trail = []  # recorded moves, in application order

    all_moves = moves_from(None)

    def is_permuted_basis(st):
        seen = set()
        for w in st:
            if len(w) != 1:
                return False
            seen.add(abs(w[0]))
        return len(seen) == n

    while not is_permuted_basis(state):
        cur = total(state)
        # greedy: any single move that strictly reduces total length
        best = None
        for mv in all_moves:
            if mv[0] == "inv":
                continue
            nxt = apply_move(state, mv)
            if total(nxt) < cur:
                best = (mv, nxt)
                break
        if best is not None:
            trail.append(best[0])
            state = best[1]
            continue
        # plateau: BFS over equal-length states for a strict reducer
        seen = {state}
        frontier = [(state, [])]
        found = None
        while frontier and found is None:
            if len(seen) > max_plateau:
                raise ValueError("not invertible (plateau cap exceeded)")
            nxt_frontier = []
            for st, path in frontier:
                for mv in all_moves:
                    st2 = apply_move(st, mv)
                    t2 = total(st2)
                    if t2 < cur:
                        found = (path + [mv], st2)
                        break
                    if t2 == cur and st2 not in seen:
                        seen.add(st2)
                        nxt_frontier.append((st2, path + [mv]))
                if found:
                    break
            frontier = nxt_frontier
        if found is None:
            raise ValueError("images do not form a basis")
        trail.extend(found[0])
        state = found[1]

    # state is a signed permutation: state[i] = (eps_i * sigma(i),)
    # The recorded moves, as automorphisms rho_k of the free group on
    # positions, satisfy  phi o rho_1 o ... o rho_k = pi  where
    # pi(position i) = dst-letter state[i].  Hence
    # phi^-1 = rho_1 o ... o rho_k o pi^-1.
    # Represent maps by images of position-generators in src.
    pos_images = [Word(src, [i + 1]) for i in range(n)]  # identity on positions

    def apply_rho(imgs, move):
        kind, i, j = move
        out = list(imgs)
        if kind == "inv":
            out[i] = imgs[i].inverse()
        elif kind == "mr":
            out[i] = imgs[i] * imgs[j]
        elif kind == "mrI":
            out[i] = imgs[i] * imgs[j].inverse()
        elif kind == "ml":
            out[i] = imgs[j] * imgs[i]
        elif kind == "mlI":
            out[i] = imgs[j].inverse() * imgs[i]
        return out

    # compose rho_1 ... rho_k applied to the identity: build the map
    # positions -> src realizing rho_1 o ... o rho_k.
    comp = pos_images
    for mv in trail:
        comp = apply_rho(comp, mv)

    # pi: positions -> dst basis; invert the signed permutation.
    inv_images = [None] * n
    for i, w in enumerate(state):
        lt = w[0]
        g = abs(lt)
        img = comp[i]
        inv_images[g - 1] = img if lt > 0 else img.inverse()
    return inv_images
