"""Polygon triangulations, d-vector validity, pipelines, and decomposition.

A type-A quiver on n vertices is realized by a triangulation of a convex
(n+3)-gon: diagonals carry labels 1..n, boundary edges n+1..2n+3.  Polygon
corners are 0-based integers in counterclockwise order; all geometric
predicates (crossing, ranks of marked points) are pure index arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import (
    CrossingDiagonals,
    NegativeInput,
    NotInW,
    NotTypeA,
    PositivePartNotInW,
)
from .quiver import (
    CompletelyExtendedLinearQuiver,
    Quiver,
    is_type_a,
    oriented_three_cycles,
    require_type_a,
)


def sigma(x, y, z):
    """Overlap count ([x+y-z]_+ - [x-y-z]_+ - [y-x-z]_+) / 2.

    Equals x when y > x+z, y when x > y+z, 0 when z > x+y, and (x+y-z)/2
    otherwise.  Integer inputs yield an integer in every use on valid
    d-vectors; a half-integer comes back as an exact Fraction.
    """
    if x < 0 or y < 0 or z < 0:
        raise NegativeInput(f"sigma needs nonnegative inputs, got {(x, y, z)}")
    pos = lambda t: t if t > 0 else 0
    num = pos(x + y - z) - pos(x - y - z) - pos(y - x - z)
    if num % 2 == 0:
        return num // 2
    return Fraction(num, 2)


def sigma_int(x, y, z) -> int:
    s = sigma(x, y, z)
    if isinstance(s, Fraction):
        raise NotInW(f"sigma{(x, y, z)} is not an integer; vector violates parity")
    return s


def satisfies_property_a(q: Quiver, a) -> bool:
    """Parity test for membership in the d-vector lattice: on every oriented
    3-cycle whose three entries are positive and satisfy the strict triangle
    inequalities, the sum must be even.  Always true without 3-cycles."""
    require_type_a(q)
    a = tuple(a)
    if len(a) != q.n:
        raise NotInW(f"vector length {len(a)} != {q.n}")
    for (i, j, k) in oriented_three_cycles(q):
        x, y, z = a[i - 1], a[j - 1], a[k - 1]
        if x > 0 and y > 0 and z > 0 and x < y + z and y < x + z and z < x + y:
            if (x + y + z) % 2:
                return False
    return True


def positive_split(q: Quiver, a) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a d-vector into its nonnegative part and the exponents of the
    initial variables carried by the negative entries."""
    a = tuple(a)
    plus = tuple(max(x, 0) for x in a)
    if not satisfies_property_a(q, plus):
        raise PositivePartNotInW(f"positive part {plus} violates the parity condition")
    return plus, tuple(max(-x, 0) for x in a)


# -- triangulations ----------------------------------------------------------


@dataclass(frozen=True)
class Triangulation:
    """Labeled triangulation of a convex polygon.

    edges maps label -> sorted corner pair; labels 1..n are diagonals, higher
    labels boundary edges.  vpoint/wpoint are the distinguished corners of the
    staircase construction (present only when built from a path quiver)."""

    size: int
    n: int
    edges: dict[int, tuple[int, int]]
    vpoint: int | None = None
    wpoint: int | None = None

    @property
    def diagonals(self) -> dict[int, tuple[int, int]]:
        return {i: self.edges[i] for i in range(1, self.n + 1)}

    @property
    def boundary(self) -> dict[int, tuple[int, int]]:
        return {i: e for i, e in self.edges.items() if i > self.n}

    def endpoints(self, label: int) -> tuple[int, int]:
        return self.edges[label]

    def in_open_arc(self, x: int, a: int, b: int) -> bool:
        """Is corner x strictly inside the ccw arc from a to b?"""
        m = self.size
        return 0 < (x - a) % m < (b - a) % m

    def cross(self, d: tuple[int, int], e: tuple[int, int]) -> bool:
        """Strict interior crossing of two corner pairs."""
        a, b = d
        c, f = e
        if {a, b} & {c, f}:
            return False
        return self.in_open_arc(c, a, b) != self.in_open_arc(f, a, b)

    def triangles(self) -> list[tuple[tuple[int, int, int], tuple[int, int, int]]]:
        """All triangular faces as (ccw corner triple, side labels).

        Corner triples are ascending (hence counterclockwise); side labels
        are aligned so that side m joins corners m and m+1 (mod 3)."""
        by_pair = {tuple(sorted(e)): lbl for lbl, e in self.edges.items()}
        adj: dict[int, set[int]] = {}
        for (u, w) in by_pair:
            adj.setdefault(u, set()).add(w)
            adj.setdefault(w, set()).add(u)
        faces = []
        for u in sorted(adj):
            for w in sorted(x for x in adj[u] if x > u):
                for z in sorted(x for x in adj[u] & adj[w] if x > w):
                    sides = (by_pair[(u, w)], by_pair[(w, z)], by_pair[(u, z)])
                    faces.append(((u, w, z), sides))
        return faces


def triangulation_of(celq: CompletelyExtendedLinearQuiver) -> Triangulation:
    """Staircase triangulation realizing a completely extended linear quiver.

    The first diagonal closes the triangle at the distinguished corner; each
    following one pivots counterclockwise when the path arrow points forward
    and clockwise otherwise.  Boundary labels reuse the quiver's extension
    vertex ids."""
    n = celq.n
    m = n + 3
    edges: dict[int, tuple[int, int]] = {}
    edges[celq.start0] = (0, 1)
    edges[celq.start1] = (0, m - 1)
    p, qpos = 1, m - 1
    edges[1] = (p, qpos)
    for i, d in enumerate(celq.delta, start=1):
        if d == 0:
            edges[celq.mid(i)] = (p, p + 1)
            p += 1
        else:
            edges[celq.mid(i)] = (qpos - 1, qpos)
            qpos -= 1
        edges[i + 1] = (p, qpos)
    edges[celq.end1] = (p, p + 1)
    edges[celq.end0] = (p + 1, qpos)
    return Triangulation(m, n, edges, vpoint=0, wpoint=p + 1)


def _ccw_triangle_arrows(sides: tuple[int, int, int]) -> list[tuple[int, int]]:
    """Arrows induced by one triangle with sides listed in ccw corner order:
    side m joins corners m, m+1.  Rotating a side onto its ccw neighbor (by
    less than a straight angle) goes s0 -> s2 -> s1 -> s0."""
    s0, s1, s2 = sides
    return [(s0, s2), (s2, s1), (s1, s0)]


def quiver_of(t: Triangulation, include_boundary: bool = False) -> Quiver:
    """Quiver induced by a triangulation: one vertex per diagonal (or per
    edge when include_boundary), arrows by counterclockwise rotation inside
    each triangle."""
    keep = (lambda lbl: True) if include_boundary else (lambda lbl: lbl <= t.n)
    arrows = []
    for _, sides in t.triangles():
        for (a, b) in _ccw_triangle_arrows(sides):
            if keep(a) and keep(b):
                arrows.append((a, b))
    nverts = 2 * t.n + 3 if include_boundary else t.n
    frozen = frozenset(range(t.n + 1, 2 * t.n + 4)) if include_boundary else frozenset()
    return Quiver(nverts, tuple(arrows), frozen)


def triangulation_for(q: Quiver) -> Triangulation:
    """A triangulation of the (n+3)-gon inducing the given type-A quiver.

    Triangles are read off the quiver (oriented 3-cycles, arrows outside
    3-cycles, boundary caps), oriented by the rotation rule, then glued and
    unrolled into a polygon by one counterclockwise boundary walk."""
    require_type_a(q)
    n = q.n
    cycles = oriented_three_cycles(q)
    in_cycle: set[tuple[int, int]] = set()
    for (i, j, k) in cycles:
        in_cycle.update({(i, j), (j, k), (k, i)})

    next_boundary = [n]

    def fresh() -> int:
        next_boundary[0] += 1
        return next_boundary[0]

    triangles: list[tuple[int, int, int]] = []  # ccw side label triples
    for (i, j, k) in cycles:
        triangles.append((i, k, j))
    for (tl, hd) in sorted(set(q.arrows) - in_cycle):
        triangles.append((tl, fresh(), hd))
    side_count: dict[int, int] = {i: 0 for i in range(1, n + 1)}
    for tri in triangles:
        for s in tri:
            if s <= n:
                side_count[s] += 1
    for i in range(1, n + 1):
        while side_count[i] < 2:
            triangles.append((i, fresh(), fresh()))
            side_count[i] += 1
    if len(triangles) != n + 1:
        raise NotTypeA("triangle accounting failed; quiver is not type A")

    diag_sites: dict[int, list[tuple[int, int]]] = {}
    for ti, tri in enumerate(triangles):
        for m, s in enumerate(tri):
            if s <= n:
                diag_sites.setdefault(s, []).append((ti, m))

    # union-find over triangle corners; side m of a triangle joins its
    # corners m and m+1 (mod 3) in ccw order
    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(c):
        parent.setdefault(c, c)
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def union(c1, c2):
        r1, r2 = find(c1), find(c2)
        if r1 != r2:
            parent[r1] = r2

    emitted: list[tuple[int, int]] = []
    seen_triangles = set()

    def expand(ti: int, m: int):
        label = triangles[ti][m]
        if label > n:
            return
        (t2, m2) = next(site for site in diag_sites[label] if site[0] != ti)
        if t2 in seen_triangles:
            raise NotTypeA("triangulation glue revisited a triangle")
        seen_triangles.add(t2)
        union((ti, (m + 1) % 3), (t2, m2))
        union((ti, m), (t2, (m2 + 1) % 3))
        expand(t2, (m2 + 1) % 3)
        emitted.append((t2, (m2 + 2) % 3))
        expand(t2, (m2 + 2) % 3)

    root = 0
    seen_triangles.add(root)
    for m in range(3):
        emitted.append((root, m))
        expand(root, m)
    if len(seen_triangles) != len(triangles):
        raise NotTypeA("triangulation does not glue into a disk")

    position: dict[tuple[int, int], int] = {}
    for pos, corner in enumerate(emitted):
        position[find(corner)] = pos
    if len(emitted) != n + 3:
        raise NotTypeA("polygon walk emitted a wrong corner count")

    edges: dict[int, tuple[int, int]] = {}
    for ti, tri in enumerate(triangles):
        for m, s in enumerate(tri):
            u = position[find((ti, m))]
            w = position[find((ti, (m + 1) % 3))]
            pair = (min(u, w), max(u, w))
            if s in edges and edges[s] != pair:
                raise NotTypeA("inconsistent gluing of a shared diagonal")
            edges[s] = pair
    t = Triangulation(n + 3, n, edges)
    induced = quiver_of(t)
    if tuple(sorted(induced.arrows)) != tuple(sorted((a, b) for a, b in q.arrows)):
        raise NotTypeA("constructed triangulation does not induce the quiver")
    return t


# -- pipelines ----------------------------------------------------------------


@dataclass(frozen=True)
class Pipeline:
    """One pseudo-diagonal assembled from pipes through marked points."""

    endpoints: tuple[int, int]                    # polygon corners
    crossings: tuple[tuple[int, int], ...]        # ordered (diagonal, rank)
    b_vector: tuple[int, ...]


@dataclass(frozen=True)
class PipelineSet:
    quiver: Quiver
    triangulation: Triangulation
    a: tuple[int, ...]
    pipelines: tuple[Pipeline, ...]
    pipes: tuple[tuple, ...] = field(default=(), compare=False, repr=False)

    def b_vectors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(p.b_vector for p in self.pipelines)

    def as_diagonal_multiset(self) -> list[tuple[int, int]]:
        return [p.endpoints for p in self.pipelines]


def build_pipelines(q: Quiver, a, t: Triangulation | None = None) -> PipelineSet:
    """Marked points and pipes realizing a nonnegative d-vector.

    Each diagonal i carries a_i marked points.  Inside every triangle the
    matching marked points of two sides are joined rank-by-rank (counted from
    the sides' common corner), and leftover points run to the opposite
    corner.  Chaining pipes through marked points yields the pipelines."""
    a = tuple(a)
    if any(x < 0 for x in a):
        raise NotInW(f"pipelines need a nonnegative vector, got {a}")
    if not satisfies_property_a(q, a):
        raise NotInW(f"{a} violates the parity condition on 3-cycles")
    if t is None:
        t = triangulation_for(q)
    count = {lbl: (a[lbl - 1] if lbl <= t.n else 0) for lbl in t.edges}

    def rank_from(label: int, corner: int, r: int) -> int:
        """Canonical rank (counted from the smaller corner) of the r-th
        marked point counted from the given corner."""
        u, w = t.edges[label]
        return r if corner == u else count[label] + 1 - r

    pipes: list[tuple] = []
    per_triangle_used: dict[tuple[int, int], set[int]] = {}
    for ti, (corners, sides) in enumerate(t.triangles()):
        corner_of = {frozenset((sides[m], sides[(m + 1) % 3])): corners[(m + 1) % 3]
                     for m in range(3)}
        opposite = {sides[m]: corners[(m + 2) % 3] for m in range(3)}
        used: dict[int, set[int]] = {s: set() for s in sides}
        for sx, sy in combinations(sorted(set(sides)), 2):
            sz = next(s for s in sides if s not in (sx, sy))
            s_val = sigma_int(count[sx], count[sy], count[sz])
            common = corner_of[frozenset((sx, sy))]
            for r in range(1, s_val + 1):
                rx, ry = rank_from(sx, common, r), rank_from(sy, common, r)
                pipes.append((("pt", sx, rx), ("pt", sy, ry)))
                used[sx].add(rx)
                used[sy].add(ry)
        for s in set(sides):
            for r in range(1, count[s] + 1):
                if r not in used[s]:
                    pipes.append((("pt", s, r), ("vx", opposite[s])))

    adjacency: dict[tuple, list[tuple]] = {}
    for p1, p2 in pipes:
        adjacency.setdefault(p1, []).append(p2)
        adjacency.setdefault(p2, []).append(p1)
    for node, nb in adjacency.items():
        if node[0] == "pt" and len(nb) != 2:
            raise NotInW(f"marked point {node} lies on {len(nb)} pipes")

    seen: set[tuple] = set()
    pipelines = []

    def walk(cur, prev):
        out = []
        while cur[0] == "pt":
            if cur in seen:
                raise NotInW("pipes form a closed loop")
            seen.add(cur)
            out.append(cur)
            nxt = next(x for x in adjacency[cur] if x != prev)
            prev, cur = cur, nxt
        out.append(cur)
        return out

    for node in sorted(adjacency):
        if node[0] != "pt" or node in seen:
            continue
        seen.add(node)
        first, second = adjacency[node]
        chain = list(reversed(walk(first, node))) + [node] + walk(second, node)
        left, right = chain[0], chain[-1]
        inner = [c for c in chain if c[0] == "pt"]
        diagonals = [c[1] for c in inner]
        if len(set(diagonals)) != len(diagonals):
            raise NotInW("a pipeline crosses a diagonal twice")
        b = tuple(1 if i in set(diagonals) else 0 for i in range(1, q.n + 1))
        pipelines.append(Pipeline(
            endpoints=(min(left[1], right[1]), max(left[1], right[1])),
            crossings=tuple((c[1], c[2]) for c in inner),
            b_vector=b,
        ))
    total = [0] * q.n
    for p in pipelines:
        for i, bit in enumerate(p.b_vector):
            total[i] += bit
    if tuple(total) != a:
        raise NotInW(f"pipeline supports sum to {tuple(total)}, expected {a}")
    pipelines.sort(key=lambda p: (p.b_vector, p.endpoints, p.crossings))
    return PipelineSet(q, t, a, tuple(pipelines), tuple(pipes))


def decompose(q: Quiver, a, t: Triangulation | None = None) -> tuple[tuple[int, ...], ...]:
    """Multiset of 0-1 vectors (one per pipeline) whose coordinatewise sum is
    the given nonnegative d-vector; each support induces a path."""
    a = tuple(a)
    if all(x == 0 for x in a):
        return ()
    return tuple(sorted(build_pipelines(q, a, t).b_vectors()))


def intersection_number(t: Triangulation, d: tuple[int, int], e: tuple[int, int]) -> int:
    if tuple(sorted(d)) == tuple(sorted(e)):
        return -1
    return 1 if t.cross(d, e) else 0


def d_vector_of(diagonal_multiset, t: Triangulation) -> tuple[int, ...]:
    """d-vector of a multiset of pairwise non-crossing corner pairs: +1 per
    crossing with diagonal i, -1 per coincidence with it."""
    ds = [tuple(sorted(d)) for d in diagonal_multiset]
    for p1, p2 in combinations(range(len(ds)), 2):
        if t.cross(ds[p1], ds[p2]):
            raise CrossingDiagonals(f"{ds[p1]} crosses {ds[p2]}")
    return tuple(
        sum(intersection_number(t, d, t.edges[i]) for d in ds)
        for i in range(1, t.n + 1)
    )


# -- svg ----------------------------------------------------------------------


def _polygon_xy(size: int, corner: int, radius: float = 200.0):
    import math

    ang = math.pi / 2 + 2 * math.pi * corner / size
    return radius * math.cos(ang) + 250, 250 - radius * math.sin(ang)


def pipelines_svg(ps: PipelineSet) -> str:
    """Cosmetic drawing of a pipeline set on a regular polygon layout."""
    t = ps.triangulation
    count = {lbl: (ps.a[lbl - 1] if lbl <= t.n else 0) for lbl in t.edges}

    def point_xy(label: int, rank: int):
        (u, w) = t.edges[label]
        x1, y1 = _polygon_xy(t.size, u)
        x2, y2 = _polygon_xy(t.size, w)
        f = rank / (count[label] + 1)
        return x1 + f * (x2 - x1), y1 + f * (y2 - y1)

    def node_xy(node):
        return point_xy(node[1], node[2]) if node[0] == "pt" else _polygon_xy(t.size, node[1])

    parts = ['<svg xmlns="http://www.w3.org/2000/svg" width="500" height="500">']
    for lbl, (u, w) in sorted(t.edges.items()):
        x1, y1 = _polygon_xy(t.size, u)
        x2, y2 = _polygon_xy(t.size, w)
        color = "#888" if lbl > t.n else "#000"
        parts.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                     f'stroke="{color}" stroke-width="1"/>')
        if lbl <= t.n:
            parts.append(f'<text x="{(x1 + x2) / 2:.1f}" y="{(y1 + y2) / 2:.1f}" '
                         f'font-size="12">{lbl}</text>')
    for p1, p2 in ps.pipes:
        x1, y1 = node_xy(p1)
        x2, y2 = node_xy(p2)
        parts.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                     f'stroke="#d22" stroke-width="1.5"/>')
    for lbl in range(1, t.n + 1):
        for r in range(1, count[lbl] + 1):
            x, y = point_xy(lbl, r)
            parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="2.5" fill="#d22"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
