"""Bipartite plane trees decorated with stems (dangling half-edges).

A blossoming tree is a rooted plane tree endowed with a proper black/white
vertex coloring in which black vertices may carry *opening* stems and white
vertices *closing* stems.  The charge of a subtree is the number of closing
stems minus the number of opening stems it contains; a tree is well charged
when every black subtree has charge at most 1 and every white subtree has
charge at least 0.  Black-rooted, d-regular, well-charged trees of total
charge 0 are exactly the trees whose closure (see :mod:`regmaps.closure`)
is a d-regular bipartite planar map with a marked face.

Conventions used throughout the package:

* offspring lists are ordered and define the plane embedding; entry
  ``"open"``/``"close"`` is a stem, an integer is a child vertex id;
* the contour starts at the root corner, i.e. just before offspring entry
  ``root_corner`` of the root;
* the height of a stem is the height of its incident vertex;
* the ball of radius k keeps every vertex of height < k with its full
  offspring and reduces vertices at height exactly k to bare leaves
  (k >= 1).  The radius-0 ball keeps the root's stems but drops its
  children.  This truncation is the one under which the exact ball
  probability formulas of :mod:`regmaps.counting` hold; it is validated
  against brute-force enumeration in the test suite.

All values are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .errors import ResourceLimitError, StructureError

BLACK = "b"
WHITE = "w"
OPEN = "open"
CLOSE = "close"

#: Offspring entry: child vertex id, or one of the stem markers.
Entry = Union[int, str]


@dataclass(frozen=True)
class Vertex:
    color: str
    offspring: tuple


@dataclass(frozen=True)
class BlossomTree:
    """Immutable rooted blossoming tree.

    ``nodes`` maps vertex id to :class:`Vertex`; ``root_corner`` indexes the
    corner of the root at which the contour starts (corners of the root are
    the gaps of its cyclic offspring list).
    """

    d: int
    root: int
    root_corner: int
    nodes: dict

    def vertex(self, v: int) -> Vertex:
        return self.nodes[v]

    def color(self, v: int) -> str:
        return self.nodes[v].color

    def offspring(self, v: int) -> tuple:
        return self.nodes[v].offspring

    def children(self, v: int) -> list:
        return [e for e in self.nodes[v].offspring if isinstance(e, int)]

    def stem_count(self, v: int) -> int:
        return sum(1 for e in self.nodes[v].offspring if not isinstance(e, int))

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class ChargeReport:
    charge_of: dict
    total: int


@dataclass(frozen=True)
class TreeBall:
    """Radius-k ball of a tree together with its vertex counts.

    ``m_k`` counts vertices at height exactly k, ``n_k`` black vertices in
    the ball.
    """

    ball: BlossomTree
    k: int
    m_k: int
    n_k: int


# ---------------------------------------------------------------------------
# construction helpers


def build_tree(d: int, nested, root_corner: int = 0) -> BlossomTree:
    """Materialize a tree from nested ``(color, [entries])`` structure.

    Entries are ``"open"``/``"close"`` or nested pairs.  Ids are assigned in
    depth-first preorder starting at 0.
    """
    nodes = {}
    counter = [0]

    def alloc(spec):
        color, entries = spec
        vid = counter[0]
        counter[0] += 1
        nodes[vid] = None  # reserve preorder slot
        off = []
        for e in entries:
            if e == OPEN or e == CLOSE:
                off.append(e)
            else:
                off.append(alloc(e))
        nodes[vid] = Vertex(color, tuple(off))
        return vid

    root = alloc(nested)
    return BlossomTree(d=d, root=root, root_corner=root_corner, nodes=nodes)


def parents(tree: BlossomTree) -> dict:
    par = {tree.root: None}
    stack = [tree.root]
    while stack:
        v = stack.pop()
        for c in tree.children(v):
            par[c] = v
            stack.append(c)
    return par


def heights(tree: BlossomTree) -> dict:
    h = {tree.root: 0}
    queue = deque([tree.root])
    while queue:
        v = queue.popleft()
        for c in tree.children(v):
            h[c] = h[v] + 1
            queue.append(c)
    return h


def height(tree: BlossomTree) -> int:
    return max(heights(tree).values())


def _check_stem_colors(tree: BlossomTree) -> None:
    for v, rec in tree.nodes.items():
        for e in rec.offspring:
            if e == OPEN and rec.color != BLACK:
                raise StructureError(f"opening stem on non-black vertex {v}")
            if e == CLOSE and rec.color != WHITE:
                raise StructureError(f"closing stem on non-white vertex {v}")


# ---------------------------------------------------------------------------
# charges


def compute_charges(tree: BlossomTree) -> ChargeReport:
    """Charge of every subtree: closing stems minus opening stems.

    Raises :class:`StructureError` if some stem sits on the wrong color.
    """
    _check_stem_colors(tree)
    order = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(tree.children(v))
    charge = {}
    for v in reversed(order):
        rec = tree.nodes[v]
        c = 0
        for e in rec.offspring:
            if e == CLOSE:
                c += 1
            elif e == OPEN:
                c -= 1
            else:
                c += charge[e]
        charge[v] = c
    return ChargeReport(charge_of=charge, total=charge[tree.root])


def is_well_charged(tree: BlossomTree) -> bool:
    """Black subtree charges <= 1 and white subtree charges >= 0."""
    report = compute_charges(tree)
    for v, c in report.charge_of.items():
        if tree.color(v) == BLACK and c > 1:
            return False
        if tree.color(v) == WHITE and c < 0:
            return False
    return True


def validate_regular(tree: BlossomTree, d: int | None = None) -> bool:
    """Every vertex has total degree d with the regular offspring shape.

    Degree counts the parent edge, children and stems.  Black vertices must
    have exactly one white child with all remaining offspring opening stems;
    white offspring consist of closing stems and black children only.
    """
    if d is None:
        d = tree.d
    try:
        _check_stem_colors(tree)
    except StructureError:
        return False
    for v, rec in tree.nodes.items():
        expected = d if v == tree.root else d - 1
        if len(rec.offspring) != expected:
            return False
        kids = tree.children(v)
        for c in kids:
            if tree.color(c) == rec.color:
                return False
        if rec.color == BLACK:
            if len(kids) != 1:
                return False
            if any(e == CLOSE for e in rec.offspring):
                return False
        else:
            if any(e == OPEN for e in rec.offspring):
                return False
    return True


def is_standard(tree: BlossomTree, d: int | None = None) -> bool:
    """Black-rooted, d-regular, well-charged, total charge 0."""
    if d is None:
        d = tree.d
    return (
        tree.color(tree.root) == BLACK
        and validate_regular(tree, d)
        and is_well_charged(tree)
        and compute_charges(tree).total == 0
    )


# ---------------------------------------------------------------------------
# exhaustive enumeration


def enumerate_trees(d: int, n: int, max_trees: int = 500_000) -> list:
    """All black-rooted well-charged d-regular charge-0 trees with n blacks.

    Returned sorted by canonical code so golden files are reproducible.
    Raises :class:`ResourceLimitError` once more than ``max_trees`` trees
    are produced.
    """
    if d < 3:
        raise ValueError("degree must be at least 3")
    if n < 1:
        raise ValueError("need at least one black vertex")

    white_cache: dict = {}
    black_cache: dict = {}

    def whites(r):
        # offspring lists of a planted white vertex with r black vertices below
        key = r
        if key not in white_cache:
            white_cache[key] = [(WHITE, list(seq)) for seq in slot_seqs(d - 1, r)]
        return white_cache[key]

    def blacks(r):
        # planted black trees with r black vertices (including the root)
        key = r
        if key not in black_cache:
            out = []
            for pos in range(d - 1):
                for w in whites(r - 1):
                    entries = [OPEN] * pos + [w] + [OPEN] * (d - 2 - pos)
                    out.append((BLACK, entries))
            black_cache[key] = out
        return black_cache[key]

    def slot_seqs(slots, r):
        if slots == 0:
            if r == 0:
                yield ()
            return
        for rest in slot_seqs(slots - 1, r):
            yield (CLOSE,) + rest
        for k in range(1, r + 1):
            for b in blacks(k):
                for rest in slot_seqs(slots - 1, r - k):
                    yield (b,) + rest

    trees = []
    for pos in range(d):
        for w in whites(n - 1):
            entries = [OPEN] * pos + [w] + [OPEN] * (d - 1 - pos)
            trees.append(build_tree(d, (BLACK, entries)))
            if len(trees) > max_trees:
                raise ResourceLimitError(
                    f"enumeration guard exceeded ({max_trees}) for d={d}, n={n}"
                )
    trees.sort(key=canonical_code)
    return trees


# ---------------------------------------------------------------------------
# balls


def tree_ball(tree: BlossomTree, k: int) -> TreeBall:
    """Ball of radius k around the root.

    Vertices at height < k keep their full offspring; vertices at height
    exactly k become bare leaves (k >= 1).  At k = 0 the root keeps its
    stems but drops its children.
    """
    if k < 0:
        raise ValueError("radius must be nonnegative")
    h = heights(tree)
    if k == 0:
        stems = tuple(e for e in tree.offspring(tree.root) if not isinstance(e, int))
        nodes = {tree.root: Vertex(tree.color(tree.root), stems)}
        ball = BlossomTree(d=tree.d, root=tree.root, root_corner=0, nodes=nodes)
        return TreeBall(ball=ball, k=0, m_k=1, n_k=1)
    nodes = {}
    for v, hv in h.items():
        if hv > k:
            continue
        rec = tree.nodes[v]
        if hv == k:
            nodes[v] = Vertex(rec.color, ())
        else:
            nodes[v] = rec
    ball = BlossomTree(d=tree.d, root=tree.root, root_corner=tree.root_corner, nodes=nodes)
    m_k = sum(1 for v in nodes if h[v] == k)
    n_k = sum(1 for v in nodes if tree.color(v) == BLACK)
    return TreeBall(ball=ball, k=k, m_k=m_k, n_k=n_k)


# ---------------------------------------------------------------------------
# canonical codes and local distance


def canonical_code(tree: BlossomTree) -> str:
    """Contour serialization; equal codes iff equal rooted trees.

    The root offspring is read starting at the root corner, so trees that
    differ only by a rotation of the root list combined with the matching
    corner shift get the same code.
    """
    out = []
    root_off = tree.offspring(tree.root)
    if root_off and tree.root_corner % len(root_off):
        r = tree.root_corner % len(root_off)
        root_off = root_off[r:] + root_off[:r]
    # frames: (entries tuple, position)
    out.append(tree.color(tree.root))
    stack = [(root_off, 0)]
    while stack:
        entries, pos = stack.pop()
        while pos < len(entries):
            e = entries[pos]
            pos += 1
            if e == OPEN:
                out.append("o")
            elif e == CLOSE:
                out.append("c")
            else:
                stack.append((entries, pos))
                out.append("(")
                out.append(tree.color(e))
                entries, pos = tree.offspring(e), 0
        out.append(")")
    out.pop()  # closing marker of the root frame
    return "".join(out)


def local_distance(t1: BlossomTree, t2: BlossomTree) -> Fraction:
    """1/(1+K) where K is the smallest radius at which the balls differ.

    Equal trees are at distance 0.  Differing radius-0 balls (which include
    the root stems) give distance 1.
    """
    limit = max(height(t1), height(t2)) + 1
    for k in range(limit + 1):
        c1 = canonical_code(tree_ball(t1, k).ball)
        c2 = canonical_code(tree_ball(t2, k).ball)
        if c1 != c2:
            return Fraction(1, 1 + k)
    return Fraction(0)


# ---------------------------------------------------------------------------
# JSON schema


def tree_to_json(tree: BlossomTree) -> dict:
    """Stable wire format:
    {"d":int,"root":id,"root_corner":int,
     "nodes":[{"id":int,"color":"b"|"w","offspring":[{"child":id}|"open"|"close"]}]}
    """
    nodes = []
    for vid in sorted(tree.nodes):
        rec = tree.nodes[vid]
        off = []
        for e in rec.offspring:
            if isinstance(e, int):
                off.append({"child": e})
            else:
                off.append(e)
        nodes.append({"id": vid, "color": rec.color, "offspring": off})
    return {
        "d": tree.d,
        "root": tree.root,
        "root_corner": tree.root_corner,
        "nodes": nodes,
    }


def tree_from_json(data: dict) -> BlossomTree:
    nodes = {}
    for rec in data["nodes"]:
        off = []
        for e in rec["offspring"]:
            if isinstance(e, dict):
                off.append(int(e["child"]))
            elif e in (OPEN, CLOSE):
                off.append(e)
            else:
                raise StructureError(f"unknown offspring entry {e!r}")
        nodes[int(rec["id"])] = Vertex(rec["color"], tuple(off))
    return BlossomTree(
        d=int(data["d"]),
        root=int(data["root"]),
        root_corner=int(data.get("root_corner", 0)),
        nodes=nodes,
    )


def iter_stems(tree: BlossomTree) -> Iterator:
    """Stems in contour order: (vertex, offspring index, kind)."""
    root_off = tree.offspring(tree.root)
    rot = tree.root_corner % len(root_off) if root_off else 0
    order = list(range(rot, len(root_off))) + list(range(rot))
    stack = [(tree.root, order, 0)]
    while stack:
        v, idxs, pos = stack.pop()
        while pos < len(idxs):
            i = idxs[pos]
            e = tree.offspring(v)[i]
            pos += 1
            if e == OPEN or e == CLOSE:
                yield (v, i, e)
            else:
                stack.append((v, idxs, pos))
                v, idxs, pos = e, list(range(len(tree.offspring(e)))), 0
