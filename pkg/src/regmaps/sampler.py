"""Exact uniform sampling of charge-0 well-charged d-regular trees.

Two interchangeable methods produce exactly uniform trees:

* ``method="path"`` (default): encode the black skeleton as a lattice word
  and use the cycle lemma.  A tree with n blacks corresponds to one valid
  rotation of a word with n node steps among (d-1)n+1 positions, plus an
  independent uniform slot choice per black vertex for the position of its
  white child.  O(n) time, no big integers.

* ``method="recursive"``: the classical recursive method over exact counts.
  Offspring slots of a white vertex are filled left to right, choosing
  between a closing stem and a planted black subtree with k blacks using
  big-integer weights, so every discrete choice is exactly uniform.
  Intended for small and moderate n.

Both consume only the supplied ``random.Random`` stream, so samples are
bit-reproducible for a fixed seed.  Contexts are read-only after
construction and may be shared by concurrent samplers with independent
streams.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .blossom import BLACK, CLOSE, OPEN, WHITE, BlossomTree, Vertex
from .counting import count_planted_black


def slot_count(d: int, j: int, r: int) -> int:
    """Fillings of j ordered slots (closing stem or planted black) with r blacks."""
    if r < 0:
        return 0
    if r == 0:
        return 1
    if j == 0:
        return 0
    return j * (d - 1) ** r * comb((d - 1) * r + j - 1, r - 1) // r


def slot_table(d: int, j_max: int, r_max: int) -> list:
    """Same numbers by the direct recurrence (independent of the closed form)."""
    b = [count_planted_black(d, k) for k in range(r_max + 1)]
    table = [[0] * (r_max + 1) for _ in range(j_max + 1)]
    table[0][0] = 1
    for j in range(1, j_max + 1):
        for r in range(r_max + 1):
            total = table[j - 1][r]
            for k in range(1, r + 1):
                total += b[k] * table[j - 1][r - k]
            table[j][r] = total
    return table


@dataclass(frozen=True)
class SamplerContext:
    """Precomputed planted-black counts for the recursive method."""

    d: int
    planted_black: tuple

    @classmethod
    def build(cls, d: int, n_max: int) -> "SamplerContext":
        return cls(d=d, planted_black=tuple(count_planted_black(d, k) for k in range(n_max + 1)))


def sample_tree(d: int, n: int, rng, method: str = "path") -> BlossomTree:
    """Exactly uniform tree with n black vertices."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if d < 3:
        raise ValueError("degree must be at least 3")
    if method == "path":
        return _sample_path(d, n, rng)
    if method == "recursive":
        return _sample_recursive(d, n, rng)
    raise ValueError(f"unknown sampling method {method!r}")


def sample_map(d: int, n: int, rng, method: str = "path"):
    """Uniform rooted map: close a uniform tree and forget the marked face.

    Uniformity on rooted maps holds because every rooted map is the closure
    image of the same number of trees (one per face of the map)."""
    from .closure import close_tree
    from dataclasses import replace

    m = close_tree(sample_tree(d, n, rng, method=method))
    return replace(m, marked_face=None)


# ---------------------------------------------------------------------------
# path method


def sample_ary_word(a: int, m: int, rng) -> list:
    """Valid preorder word of an a-ary tree with m internal nodes.

    Word over booleans (True = internal) of length a*m+1; the unique
    rotation of a uniform arrangement whose partial sums (+{a-1} for
    internal, -1 for leaf) stay nonnegative until the final step.
    """
    length = a * m + 1
    word = [False] * length
    for i in rng.sample(range(length), m):
        word[i] = True
    # cycle lemma: rotate so the walk minimum sits at the end
    best_pos = 0
    best = 0
    s = 0
    for i, internal in enumerate(word):
        s += a - 1 if internal else -1
        if s < best:
            best = s
            best_pos = i + 1
    return word[best_pos:] + word[:best_pos]


def _sample_path(d: int, n: int, rng) -> BlossomTree:
    a = d - 1
    word = sample_ary_word(a, n, rng)
    nodes = {}

    # Frames: white slot lists under construction. The first internal node is
    # the root's white child; every other internal node is a black vertex
    # whose white child owns the next frame.
    root_white = _materialize_ary(d, word, nodes, rng)
    pos = rng.randrange(d)
    root_off = [OPEN] * pos + [root_white] + [OPEN] * (d - 1 - pos)
    root_id = max(nodes) + 1 if nodes else 0
    nodes[root_id] = Vertex(BLACK, tuple(root_off))
    return BlossomTree(d=d, root=root_id, root_corner=0, nodes=nodes)


def _materialize_ary(d: int, word, nodes: dict, rng) -> int:
    """Build the blossom structure encoded by a valid ary preorder word.

    Returns the id of the top white vertex.  Internal word symbols after the
    first create a black vertex plus its white child; leaf symbols are
    closing stems.
    """
    a = d - 1
    counter = [0]

    def new_id():
        vid = counter[0]
        counter[0] += 1
        return vid

    assert word[0], "valid nonempty word starts with an internal node"
    top_white = new_id()
    # stack of (white id, slots list)
    stack = [(top_white, [])]
    for symbol in word[1:]:
        white, slots = stack[-1]
        if symbol:
            black = new_id()
            child_white = new_id()
            slots.append(black)
            p = rng.randrange(a)
            off = [OPEN] * p + [child_white] + [OPEN] * (a - 1 - p)
            nodes[black] = Vertex(BLACK, tuple(off))
            stack.append((child_white, []))
        else:
            slots.append(CLOSE)
        while stack and len(stack[-1][1]) == a:
            white, slots = stack.pop()
            nodes[white] = Vertex(WHITE, tuple(slots))
    assert not stack, "word must close every slot frame"
    return top_white


# ---------------------------------------------------------------------------
# recursive method


def _draw_slot(d: int, j: int, r: int, rng, planted):
    """Content of the next of j slots given r blacks remain: CLOSE or size k."""
    total = slot_count(d, j, r)
    u = rng.randrange(total)
    w = slot_count(d, j - 1, r)
    if u < w:
        return CLOSE
    u -= w
    for k in range(1, r + 1):
        w = planted[k] * slot_count(d, j - 1, r - k)
        if u < w:
            return k
        u -= w
    raise AssertionError("slot weights must cover the total")


def _sample_recursive(d: int, n: int, rng) -> BlossomTree:
    planted = [count_planted_black(d, k) for k in range(n)]
    nodes = {}
    counter = [0]

    def new_id():
        vid = counter[0]
        counter[0] += 1
        return vid

    def white(r):
        vid = new_id()
        slots = []
        remaining = r
        for j in range(d - 1, 0, -1):
            choice = _draw_slot(d, j, remaining, rng, planted)
            if choice == CLOSE:
                slots.append(CLOSE)
            else:
                slots.append(black(choice))
                remaining -= choice
        nodes[vid] = Vertex(WHITE, tuple(slots))
        return vid

    def black(r):
        vid = new_id()
        p = rng.randrange(d - 1)
        child = white(r - 1)
        off = [OPEN] * p + [child] + [OPEN] * (d - 2 - p)
        nodes[vid] = Vertex(BLACK, tuple(off))
        return vid

    root = new_id()
    p = rng.randrange(d)
    child = white(n - 1)
    off = [OPEN] * p + [child] + [OPEN] * (d - 1 - p)
    nodes[root] = Vertex(BLACK, tuple(off))
    return BlossomTree(d=d, root=root, root_corner=0, nodes=nodes)
