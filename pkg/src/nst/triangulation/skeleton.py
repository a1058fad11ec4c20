"""Faces, edges, vertices, vertex links and boundary components."""
from __future__ import annotations

from dataclasses import dataclass, field

from .. import perm as P
from .core import EDGE_INDEX, EDGES, Triangulation


@dataclass
class Face:
    members: list          # [(tet, face)], one or two entries
    boundary: bool


@dataclass
class Edge:
    members: list          # [(tet, edge index)]
    boundary: bool

    @property
    def degree(self) -> int:
        return len(self.members)


@dataclass
class Vertex:
    members: list          # [(tet, vertex)]
    boundary: bool
    link_chi: int
    link_closed: bool
    link_orientable: bool

    @property
    def kind(self) -> str:
        if self.link_closed:
            return "internal" if self.link_chi == 2 else "ideal"
        return "boundary" if self.link_chi == 1 else "invalid"

    @property
    def ideal(self) -> bool:
        return self.kind == "ideal"


@dataclass
class BoundaryComponent:
    faces: list            # [(tet, face)]
    edges: set
    vertices: set
    labels: set = field(default_factory=set)

    @property
    def euler(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    @property
    def genus(self) -> int:
        return (2 - self.euler) // 2


@dataclass
class Skeleton:
    faces: list
    edges: list
    vertices: list
    face_of: list          # face_of[i][f]
    edge_of: list          # edge_of[i][e]
    edge_dir: list         # +1 if tet edge (a<b) runs along the class direction
    vertex_of: list        # vertex_of[i][v]
    boundary_components: list
    problems: list

    @property
    def valid(self) -> bool:
        return not self.problems

    @property
    def interior_edges(self) -> list[int]:
        return [k for k, e in enumerate(self.edges) if not e.boundary]

    def ideal_vertices(self) -> list[int]:
        return [k for k, v in enumerate(self.vertices) if v.kind == "ideal"]

    def satisfies_vertex_condition(self) -> bool:
        """No internal vertices and exactly one vertex on each boundary component."""
        if any(v.kind == "internal" for v in self.vertices):
            return False
        return all(len(bc.vertices) == 1 for bc in self.boundary_components)

    def boundary_genera(self) -> list[int]:
        return sorted(bc.genus for bc in self.boundary_components)


def compute_skeleton(tri: Triangulation) -> Skeleton:
    n = tri.size
    glu = tri.gluings
    problems = []

    # faces
    face_of = [[-1] * 4 for _ in range(n)]
    faces = []
    for i in range(n):
        for f in range(4):
            if face_of[i][f] >= 0:
                continue
            g = glu[i][f]
            face_of[i][f] = len(faces)
            if g is None:
                faces.append(Face([(i, f)], True))
            else:
                j, p = g
                face_of[j][p[f]] = len(faces)
                faces.append(Face([(i, f), (j, p[f])], False))

    # edges, with direction tracking to detect edges glued to themselves reversed
    edge_of = [[-1] * 6 for _ in range(n)]
    edge_dir = [[0] * 6 for _ in range(n)]
    edges = []
    for i in range(n):
        for e in range(6):
            if edge_of[i][e] >= 0:
                continue
            k = len(edges)
            members, boundary, bad = [], False, False
            edge_of[i][e] = k
            edge_dir[i][e] = 1
            stack = [(i, e)]
            while stack:
                a_t, a_e = stack.pop()
                members.append((a_t, a_e))
                a, b = EDGES[a_e]
                d = edge_dir[a_t][a_e]
                for f in range(4):
                    if f == a or f == b:
                        continue
                    g = glu[a_t][f]
                    if g is None:
                        boundary = True
                        continue
                    j, p = g
                    pa, pb = p[a], p[b]
                    ne = EDGE_INDEX[pa, pb]
                    nd = d if pa < pb else -d
                    if edge_of[j][ne] < 0:
                        edge_of[j][ne] = k
                        edge_dir[j][ne] = nd
                        stack.append((j, ne))
                    elif edge_dir[j][ne] != nd:
                        bad = True
            members.sort()
            edges.append(Edge(members, boundary))
            if bad:
                problems.append(f"edge {k} is identified with itself in reverse")

    # vertices and their links
    vertex_of = [[-1] * 4 for _ in range(n)]
    vertices = []
    for i in range(n):
        for v in range(4):
            if vertex_of[i][v] >= 0:
                continue
            k = len(vertices)
            vertex_of[i][v] = k
            stack, members = [(i, v)], []
            while stack:
                a_t, a_v = stack.pop()
                members.append((a_t, a_v))
                for f in range(4):
                    if f == a_v or glu[a_t][f] is None:
                        continue
                    j, p = glu[a_t][f]
                    if vertex_of[j][p[a_v]] < 0:
                        vertex_of[j][p[a_v]] = k
                        stack.append((j, p[a_v]))
            members.sort()
            vertices.append(_link_summary(tri, members))
    for k, vert in enumerate(vertices):
        if vert.kind == "invalid":
            problems.append(f"vertex {k} has a link that is neither a sphere, a disc nor closed")

    # boundary components: boundary faces joined along edge classes
    bfaces = [(i, f) for i in range(n) for f in range(4) if glu[i][f] is None]
    parent = {bf: bf for bf in bfaces}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    by_edge = {}
    for (i, f) in bfaces:
        for a in range(4):
            for b in range(a + 1, 4):
                if f in (a, b):
                    continue
                k = edge_of[i][EDGE_INDEX[a, b]]
                if k in by_edge:
                    ra, rb = find((i, f)), find(by_edge[k])
                    if ra != rb:
                        parent[ra] = rb
                else:
                    by_edge[k] = (i, f)
    groups = {}
    for bf in bfaces:
        groups.setdefault(find(bf), []).append(bf)
    comps = []
    for members in sorted(groups.values()):
        es, vs, labs = set(), set(), set()
        for (i, f) in members:
            for a in range(4):
                if a == f:
                    continue
                vs.add(vertex_of[i][a])
                for b in range(a + 1, 4):
                    if b != f:
                        es.add(edge_of[i][EDGE_INDEX[a, b]])
            if (i, f) in tri.labels:
                labs.add(tri.labels[i, f])
        comps.append(BoundaryComponent(sorted(members), es, vs, labs))

    return Skeleton(faces, edges, vertices, face_of, edge_of, edge_dir, vertex_of, comps, problems)


def _link_summary(tri: Triangulation, corners: list) -> Vertex:
    """Euler characteristic and closedness of the link made of the given corners."""
    glu = tri.gluings
    half_edges = 0
    bdry_edges = 0
    orientable = True
    for (i, v) in corners:
        for f in range(4):
            if f == v:
                continue
            if glu[i][f] is None:
                bdry_edges += 1
            else:
                half_edges += 1
                if P.SIGN[glu[i][f][1]] != -1:
                    orientable = False
    # union-find over edge ends
    parent = {}
    for (i, v) in corners:
        for w in range(4):
            if w != v:
                parent[i, v, w] = (i, v, w)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, v) in corners:
        for w in range(4):
            if w == v:
                continue
            for f in range(4):
                if f in (v, w) or glu[i][f] is None:
                    continue
                j, p = glu[i][f]
                a, b = find((i, v, w)), find((j, p[v], p[w]))
                if a != b:
                    parent[a] = b
    nv = len({find(x) for x in parent})
    ne = half_edges // 2 + bdry_edges
    chi = nv - ne + len(corners)
    boundary = bdry_edges > 0
    return Vertex(corners, boundary, chi, not boundary, orientable)
