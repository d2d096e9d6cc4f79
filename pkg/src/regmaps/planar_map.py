"""Rotation-system representation of rooted bipartite planar maps.

A map is stored as, per vertex, the cyclic list of its incident half-edge
ids plus an involution pairing the two halves of each edge.  Partial maps
(used while lazily closing infinite trees) mark unmatched half-edges as
frontier: their twin is ``None``.

The root is a corner: ``(vertex, position)`` designates the gap just
before ``rotation[position]``.  Faces are the orbits of the successor map
h -> rotation-successor of twin(h); the face at a corner is the orbit of
the half-edge the corner precedes.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PartialMapError, StructureError

BLACK = "b"
WHITE = "w"


@dataclass(frozen=True)
class PlanarMap:
    d: int
    colors: dict            # vertex id -> "b" | "w"
    rotations: dict         # vertex id -> tuple of half-edge ids
    twin: dict              # half-edge id -> half-edge id | None (frontier)
    root: tuple             # (vertex id, rotation position)
    marked_face: int | None = None   # any half-edge of the marked face

    def vertices(self):
        return self.colors.keys()

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def half_edge_vertex(self) -> dict:
        owner = {}
        for v, rot in self.rotations.items():
            for h in rot:
                owner[h] = v
        return owner

    def frontier(self) -> set:
        return {h for h, t in self.twin.items() if t is None}

    def is_complete(self) -> bool:
        return all(t is not None for t in self.twin.values())

    def edge_count(self) -> int:
        if not self.is_complete():
            raise PartialMapError("edge count undefined with frontier half-edges")
        return len(self.twin) // 2


@dataclass(frozen=True)
class MapBall:
    """Radius-R ball: the submap induced by the ball rule, plus distances."""

    ball: PlanarMap
    R: int
    distances: dict


@dataclass
class MapReport:
    regular: bool
    bipartite: bool
    connected: bool
    euler_ok: bool | None
    v: int
    e: int | None
    f: int | None
    problems: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.regular and self.bipartite and self.connected and self.euler_ok is not False


def _check_well_formed(m: PlanarMap) -> None:
    owner = m.half_edge_vertex()
    if set(m.twin) != set(owner):
        raise StructureError("twin table and rotations disagree on half-edges")
    for h, t in m.twin.items():
        if t is None:
            continue
        if m.twin.get(t) != h:
            raise StructureError(f"twin is not an involution at {h}")
        if t == h:
            raise StructureError(f"half-edge {h} twinned with itself")
    rv, rp = m.root
    if rv not in m.rotations:
        raise StructureError("root vertex missing")
    if m.rotations[rv] and not (0 <= rp < len(m.rotations[rv])):
        raise StructureError("root corner out of range")


def adjacency(m: PlanarMap) -> dict:
    """Vertex -> neighbor list with multiplicity, frontier slots skipped."""
    owner = m.half_edge_vertex()
    adj = {v: [] for v in m.colors}
    for v, rot in m.rotations.items():
        for h in rot:
            t = m.twin[h]
            if t is not None:
                adj[v].append(owner[t])
    return adj


def distances_from(m: PlanarMap, source: int) -> dict:
    adj = adjacency(m)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def validate_map(m: PlanarMap, d: int | None = None) -> MapReport:
    """Report-style validation: regularity, coloring, connectivity, Euler."""
    if d is None:
        d = m.d
    _check_well_formed(m)
    owner = m.half_edge_vertex()
    problems = []
    regular = all(len(rot) == d for rot in m.rotations.values())
    if not regular:
        problems.append("not all degrees equal d")
    bipartite = True
    for h, t in m.twin.items():
        if t is not None and m.colors[owner[h]] == m.colors[owner[t]]:
            bipartite = False
            problems.append("monochromatic edge")
            break
    dist = distances_from(m, m.root[0])
    connected = len(dist) == len(m.colors)
    if not connected:
        problems.append("map is not connected")
    e = f = None
    euler_ok = None
    if m.is_complete():
        e = m.edge_count()
        f = len(faces(m))
        euler_ok = len(m.colors) - e + f == 2
        if not euler_ok:
            problems.append("Euler characteristic is not 2")
    return MapReport(
        regular=regular,
        bipartite=bipartite,
        connected=connected,
        euler_ok=euler_ok,
        v=len(m.colors),
        e=e,
        f=f,
        problems=problems,
    )


def faces(m: PlanarMap) -> list:
    """Face cycles as lists of half-edges (successor of h: after twin(h), turn)."""
    if not m.is_complete():
        raise PartialMapError("faces are only defined on complete maps")
    owner = m.half_edge_vertex()
    pos = {}
    for v, rot in m.rotations.items():
        for i, h in enumerate(rot):
            pos[h] = (v, i)

    def succ(h):
        t = m.twin[h]
        v, i = pos[t]
        rot = m.rotations[v]
        return rot[(i + 1) % len(rot)]

    seen = set()
    out = []
    for start in sorted(pos):
        if start in seen:
            continue
        cycle = []
        h = start
        while h not in seen:
            seen.add(h)
            cycle.append(h)
            h = succ(h)
        out.append(cycle)
    return out


def face_of_half_edge(m: PlanarMap, h0: int) -> frozenset:
    """Orbit of ``h0`` under the face successor (complete maps)."""
    for cycle in faces(m):
        if h0 in cycle:
            return frozenset(cycle)
    raise StructureError(f"half-edge {h0} not in map")


# ---------------------------------------------------------------------------
# balls


def map_ball(m: PlanarMap, R: int) -> MapBall:
    """Ball rule: vertices at distance <= R, edges with an endpoint at <= R-1.

    The returned ball is the inherited submap: dropped edge slots are
    removed from the rotations (no frontier stubs), so equality of balls is
    equality of rooted submaps.
    """
    if R < 0:
        raise ValueError("radius must be nonnegative")
    dist = distances_from(m, m.root[0])
    owner = m.half_edge_vertex()
    keep_vertices = {v for v, dv in dist.items() if dv <= R}

    def kept(h):
        t = m.twin[h]
        if t is None:
            return False
        u, w = owner[h], owner[t]
        if u not in keep_vertices or w not in keep_vertices:
            return False
        return dist[u] <= R - 1 or dist[w] <= R - 1

    colors = {v: m.colors[v] for v in keep_vertices}
    rotations = {}
    twin = {}
    for v in keep_vertices:
        rot = tuple(h for h in m.rotations[v] if kept(h))
        rotations[v] = rot
        for h in rot:
            twin[h] = m.twin[h]
    rv, rp = m.root
    if rotations[rv]:
        # recompute the root position among kept slots
        old_rot = m.rotations[rv]
        kept_before = sum(1 for h in old_rot[:rp] if kept(h))
        new_pos = kept_before % len(rotations[rv])
    else:
        new_pos = 0
    ball = PlanarMap(
        d=m.d,
        colors=colors,
        rotations=rotations,
        twin=twin,
        root=(rv, new_pos),
        marked_face=None,
    )
    return MapBall(ball=ball, R=R, distances={v: dist[v] for v in keep_vertices})


# ---------------------------------------------------------------------------
# canonical codes and local distance


def canonical_code(m: PlanarMap) -> str:
    """Root-corner BFS code; equal codes iff root-preserving isomorphic.

    Each vertex is relabelled by discovery order; its rotation is read
    starting from the entry half-edge (for the root: from the root corner)
    and serialized as neighbor labels, with ``F`` for frontier slots.  The
    marked face, when present, is appended as the discovery label of one of
    its half-edges (canonicalized to the minimum).
    """
    owner = m.half_edge_vertex()
    rv, rp = m.root
    label = {rv: 0}
    he_label = {}
    order = [(rv, rp)]
    queue = deque([(rv, rp)])
    chunks = []
    he_counter = [0]

    pos_of = {}
    for v, rot in m.rotations.items():
        for i, h in enumerate(rot):
            pos_of[h] = i

    while queue:
        v, start = queue.popleft()
        rot = m.rotations[v]
        entries = []
        for off in range(len(rot)):
            h = rot[(start + off) % len(rot)]
            he_label[h] = he_counter[0]
            he_counter[0] += 1
            t = m.twin[h]
            if t is None:
                entries.append("F")
                continue
            u = owner[t]
            if u not in label:
                label[u] = len(label)
                queue.append((u, pos_of[t]))
            entries.append(str(label[u]))
        chunks.append(m.colors[v] + "[" + ",".join(entries) + "]")
    code = ";".join(chunks)
    if m.marked_face is not None:
        face = face_of_half_edge(m, m.marked_face)
        code += "|f" + str(min(he_label[h] for h in face))
    return code


def local_distance(m1: PlanarMap, m2: PlanarMap) -> Fraction:
    """1/(1+K), K the smallest radius with differing balls; 0 when equal."""
    r1 = max(distances_from(m1, m1.root[0]).values(), default=0)
    r2 = max(distances_from(m2, m2.root[0]).values(), default=0)
    limit = max(r1, r2) + 1
    for k in range(limit + 1):
        c1 = canonical_code(map_ball(m1, k).ball)
        c2 = canonical_code(map_ball(m2, k).ball)
        if c1 != c2:
            return Fraction(1, 1 + k)
    return Fraction(0)


# ---------------------------------------------------------------------------
# simple random walk


@dataclass
class WalkSummary:
    steps: int
    visits: Counter
    returns_to_start: int
    max_distance: int
    truncated: bool = False


def simple_random_walk(m: PlanarMap, steps: int, rng, start: int | None = None) -> WalkSummary:
    """Uniform half-edge walk (multi-edges carry their multiplicity)."""
    if not m.is_complete():
        raise PartialMapError("walking a partial map requires a lazy provider")
    owner = m.half_edge_vertex()
    v = m.root[0] if start is None else start
    start_vertex = v
    dist = distances_from(m, start_vertex)
    visits = Counter([v])
    returns = 0
    max_dist = 0
    for _ in range(steps):
        rot = m.rotations[v]
        h = rot[rng.randrange(len(rot))]
        v = owner[m.twin[h]]
        visits[v] += 1
        if v == start_vertex:
            returns += 1
        if dist[v] > max_dist:
            max_dist = dist[v]
    return WalkSummary(
        steps=steps,
        visits=visits,
        returns_to_start=returns,
        max_distance=max_dist,
    )


# ---------------------------------------------------------------------------
# export / import


def map_to_json(m: PlanarMap) -> dict:
    """Wire format:
    {"d":int,"vertices":[{"id","color","rot":[...]}],"twins":[[h1,h2],...],
     "frontier":[h,...],"root":{"vertex","pos"},"marked_face":h|null}
    """
    twins = []
    seen = set()
    frontier = []
    for h in sorted(m.twin):
        t = m.twin[h]
        if t is None:
            frontier.append(h)
        elif h not in seen:
            twins.append([h, t])
            seen.add(h)
            seen.add(t)
    return {
        "d": m.d,
        "vertices": [
            {"id": v, "color": m.colors[v], "rot": list(m.rotations[v])}
            for v in sorted(m.colors)
        ],
        "twins": twins,
        "frontier": frontier,
        "root": {"vertex": m.root[0], "pos": m.root[1]},
        "marked_face": m.marked_face,
    }


def map_from_json(data: dict) -> PlanarMap:
    colors = {}
    rotations = {}
    for rec in data["vertices"]:
        vid = int(rec["id"])
        colors[vid] = rec["color"]
        rotations[vid] = tuple(int(h) for h in rec["rot"])
    twin = {h: None for rot in rotations.values() for h in rot}
    for h1, h2 in data["twins"]:
        twin[int(h1)] = int(h2)
        twin[int(h2)] = int(h1)
    m = PlanarMap(
        d=int(data["d"]),
        colors=colors,
        rotations=rotations,
        twin=twin,
        root=(int(data["root"]["vertex"]), int(data["root"]["pos"])),
        marked_face=data.get("marked_face"),
    )
    _check_well_formed(m)
    return m


def map_to_dot(m: PlanarMap) -> str:
    owner = m.half_edge_vertex()
    lines = ["graph regmap {", "  node [style=filled];"]
    for v in sorted(m.colors):
        fill = "black" if m.colors[v] == BLACK else "white"
        font = "white" if m.colors[v] == BLACK else "black"
        extra = ""
        if v == m.root[0]:
            extra = ", penwidth=3, color=red"
        lines.append(
            f'  v{v} [fillcolor={fill}, fontcolor={font}, label="{v}"{extra}];'
        )
    seen = set()
    for h in sorted(m.twin):
        t = m.twin[h]
        if t is None or h in seen:
            continue
        seen.add(h)
        seen.add(t)
        lines.append(f"  v{owner[h]} -- v{owner[t]};")
    for h in sorted(m.frontier()):
        lines.append(f'  s{h} [shape=point, label=""];')
        lines.append(f"  v{owner[h]} -- s{h} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(m: PlanarMap, fmt: str):
    import json as _json

    if fmt == "json":
        return _json.dumps(map_to_json(m), sort_keys=True).encode()
    if fmt == "dot":
        return map_to_dot(m).encode()
    raise ValueError(f"unknown export format {fmt!r}")
