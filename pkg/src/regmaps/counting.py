"""Exact arbitrary-precision enumeration of trees, maps and ball probabilities.

Everything here is integer or rational arithmetic; floats never appear.
The two planted-tree families are counted by their number of black
vertices:

* a planted black tree is a black vertex with a dangling half-edge, one
  white child placed among d-1 ordered slots and opening stems elsewhere;
* a planted white tree is a white vertex with a dangling half-edge and
  d-1 ordered slots each holding a closing stem or a planted black tree.

Closed forms come from Lagrange inversion of the fixed-point equation
satisfied by the planted-black counting series; the naive series iteration
(`series_planted_black`) is kept as an independent cross-check and is one
of the three computation routes exercised by the verification experiments.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from . import blossom
from .blossom import BLACK, CLOSE, OPEN, TreeBall, WHITE


def count_planted_black(d: int, n: int) -> int:
    """Number of planted black trees with n black vertices."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 0
    return (d - 1) ** n * comb((d - 1) * n, n - 1) // n


def count_white_forest(d: int, n: int, m: int) -> int:
    """Number of m-tuples of planted white trees with n black vertices total."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if n < 0:
        return 0
    if n == 0:
        return 1
    if m == 0:
        return 0
    # [z^n] of the m-fold white product, via Lagrange inversion
    return m * (d - 1) ** (n + 1) * comb((d - 1) * (n + m) - 1, n - 1) // n


def count_black_forest(d: int, n: int, m: int) -> int:
    """Number of m-tuples of planted black trees with n black vertices total."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if n < 0:
        return 0
    if n == 0:
        return 1 if m == 0 else 0
    if m == 0 or n < m:
        return 0
    return m * (d - 1) ** n * comb((d - 1) * n, n - m) // n


def count_plane_maps(d: int, n: int) -> int:
    """Rooted d-regular bipartite maps with n black vertices and a marked face.

    Equals the number of charge-0 well-charged d-regular trees with n blacks.
    """
    if n < 1:
        raise ValueError("maps need at least one black vertex")
    return d * count_white_forest(d, n - 1, 1)


def count_rooted_maps(d: int, n: int) -> int:
    """Rooted d-regular bipartite maps with n black vertices (no marked face)."""
    plane = count_plane_maps(d, n)
    faces = 2 + (d - 2) * n
    q, r = divmod(plane, faces)
    if r:
        raise StructureInconsistency(
            f"plane map count {plane} not divisible by face count {faces}"
        )
    return q


class StructureInconsistency(RuntimeError):
    """Non-exact division in a count that must be exact: formula bug."""


def convergence_radius(d: int) -> Fraction:
    """Radius of convergence shared by the planted-tree counting series."""
    if d < 3:
        raise ValueError("degree must be at least 3")
    return Fraction((d - 2) ** (d - 2), (d - 1) ** d)


def series_planted_black(d: int, n_max: int) -> list:
    """Coefficients of the planted-black series by fixed-point iteration.

    Independent of the closed form: iterates b <- z(d-1)(1+b)^(d-1) as a
    truncated polynomial until the first n_max+1 coefficients stabilize.
    """
    def mul(p, q):
        out = [0] * (n_max + 1)
        for i, pi in enumerate(p):
            if pi == 0:
                continue
            for j, qj in enumerate(q):
                if i + j > n_max:
                    break
                out[i + j] += pi * qj
        return out

    b = [0] * (n_max + 1)
    for _ in range(n_max + 1):
        one_plus = [1 + b[0]] + b[1:]
        powed = [1] + [0] * n_max
        for _ in range(d - 1):
            powed = mul(powed, one_plus)
        nxt = [0] * (n_max + 1)
        for i in range(n_max):
            nxt[i + 1] = (d - 1) * powed[i]
        if nxt == b:
            break
        b = nxt
    return b


# ---------------------------------------------------------------------------
# ball probabilities


def validate_ball(d: int, ball: TreeBall) -> None:
    """Check a ball is the radius-k truncation of some standard tree."""
    t = ball.ball
    k = ball.k
    if t.color(t.root) != BLACK:
        raise ValueError("ball root must be black")
    h = blossom.heights(t)
    if any(hv > k for hv in h.values()):
        raise ValueError("ball contains vertices above its radius")
    m_k = sum(1 for v in h if h[v] == k)
    n_k = sum(1 for v in h if t.color(v) == BLACK)
    if (m_k, n_k) != (ball.m_k, ball.n_k):
        raise ValueError("ball counts do not match its structure")
    for v, hv in h.items():
        rec = t.nodes[v]
        kids = t.children(v)
        for c in kids:
            if t.color(c) == rec.color:
                raise ValueError("ball is not properly bicolored")
        if hv == k and k >= 1:
            if rec.offspring:
                raise ValueError("radius-k vertices must be bare")
            continue
        if v == t.root and k == 0:
            if rec.offspring != (OPEN,) * (d - 1):
                raise ValueError("radius-0 ball of a standard tree shows d-1 stems")
            continue
        expected = d if v == t.root else d - 1
        if len(rec.offspring) != expected:
            raise ValueError(f"vertex {v} has wrong offspring size")
        if rec.color == BLACK:
            if len(kids) != 1 or any(e == CLOSE for e in rec.offspring):
                raise ValueError("black offspring must be one white child plus stems")
        else:
            if any(e == OPEN for e in rec.offspring):
                raise ValueError("white offspring must be stems or black children")


def ball_probability(d: int, n: int, ball: TreeBall) -> Fraction:
    """Exact probability that the radius-k ball of a uniform n-tree is ``ball``.

    Odd k completes each bare white leaf by a planted white tree; even
    k >= 2 completes each bare black leaf by the rest of a planted black
    tree (the leaf itself already counted).  k = 0 is degenerate: all
    standard trees share the same radius-0 ball.
    """
    validate_ball(d, ball)
    if n < 1:
        raise ValueError("n must be positive")
    if ball.k == 0:
        return Fraction(1)
    denominator = d * count_white_forest(d, n - 1, 1)
    if ball.k % 2 == 1:
        numerator = count_white_forest(d, n - ball.n_k, ball.m_k)
    else:
        numerator = count_black_forest(d, n - ball.n_k + ball.m_k, ball.m_k)
    return Fraction(numerator, denominator)


def ball_probability_limit(d: int, ball: TreeBall) -> Fraction:
    """Limit of :func:`ball_probability` as the tree size grows.

    Closed form in the radius parity; the same value is computed by an
    independent offspring-law product in :mod:`regmaps.limit_tree`.
    """
    validate_ball(d, ball)
    if ball.k == 0:
        return Fraction(1)
    if ball.m_k == 0:
        return Fraction(0)
    rho = convergence_radius(d)
    base = (
        ball.m_k
        * rho ** ball.n_k
        * Fraction((d - 1) * (d - 2), d)
        * Fraction(d - 1, d - 2) ** ((d - 1) * ball.m_k)
    )
    if ball.k % 2 == 0:
        base *= Fraction(d - 1) ** ball.m_k
    return base
