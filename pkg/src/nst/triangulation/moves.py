"""Local moves on a mutable copy of a triangulation.

Two engines do the rewriting:

* region replacement: a set of tetrahedra is described by abstract vertex
  names and swapped for new tetrahedra over the same names (2-3, 3-2, 4-4);
* flattening: a set of tetrahedra is deleted and some of their faces are
  paired off, so the outside faces are reglued by following the pairing
  chains (2-0 edge, 2-0 vertex, edge collapse).

Each ``try_*`` method checks its own preconditions and returns False without
touching anything if the move does not apply.
"""
from __future__ import annotations

from .. import perm as P
from ..errors import NotApplicable
from .core import EDGES, Triangulation

_INV = P.INVERSE
_CMP = P.COMPOSE


def _even_order(a, b):
    """(a, b, c, d) with the other two vertices arranged to make an even permutation."""
    c, d = [x for x in range(4) if x != a and x != b]
    if P.SIGN[(a, b, c, d)] < 0:
        c, d = d, c
    return (a, b, c, d)


class _Forest:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        par = self.parent
        root = x
        while par.get(root, root) != root:
            root = par[root]
        while par.get(x, x) != root:
            par[x], x = root, par[x]
        return root

    def union(self, a, b) -> bool:
        """Join two nodes; False if they were already connected (a cycle)."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


class Builder:
    """Mutable gluing tables.  Dead tetrahedra are dropped by :meth:`freeze`."""

    def __init__(self, tri: Triangulation):
        self.adj = [list(row) for row in tri.gluings]
        self.alive = [True] * tri.size
        self.labels = dict(tri.labels)
        self.count = tri.size

    # -- bookkeeping --------------------------------------------------------
    def freeze(self) -> Triangulation:
        order = [i for i, a in enumerate(self.alive) if a]
        new = {old: k for k, old in enumerate(order)}
        rows = []
        for old in order:
            rows.append([None if g is None else (new[g[0]], g[1]) for g in self.adj[old]])
        labels = {(new[i], f): lab for (i, f), lab in self.labels.items()
                  if i in new and self.adj[i][f] is None}
        return Triangulation(rows, labels)

    def live(self):
        return [i for i, a in enumerate(self.alive) if a]

    def _new_tet(self) -> int:
        self.adj.append([None] * 4)
        self.alive.append(True)
        self.count += 1
        return len(self.adj) - 1

    def _kill(self, t):
        self.alive[t] = False
        self.count -= 1
        for f in range(4):
            self.labels.pop((t, f), None)

    def _glue(self, i, f, j, p):
        self.adj[i][f] = (j, p)
        self.adj[j][p[f]] = (i, _INV[p])
        self.labels.pop((i, f), None)
        self.labels.pop((j, p[f]), None)

    def _unglue_to_boundary(self, i, f, label):
        self.adj[i][f] = None
        if label is not None:
            self.labels[i, f] = label

    # -- local skeleton -----------------------------------------------------
    def edge_ring(self, t, a, b):
        """Walk around edge ab of tet t.

        Returns ``(ring, closed)`` where ring lists ``(tet, (a, b, c, d))``
        with the edge as the first two entries; consecutive entries share the
        face opposite ``c`` of the earlier one.  For a boundary edge the ring
        starts and ends at boundary faces.
        """
        start = (t, _even_order(a, b))
        ring = [start]
        tet, (a_, b_, c_, d_) = start
        while True:
            g = self.adj[tet][c_]
            if g is None:
                break
            j, p = g
            nxt = (j, (p[a_], p[b_], p[d_], p[c_]))
            if nxt == start:
                return ring, True
            if len(ring) > 6 * len(self.adj):
                raise NotApplicable("edge ring does not close")
            ring.append(nxt)
            tet, (a_, b_, c_, d_) = nxt
        # boundary edge: walk backwards from the start as well
        back = []
        tet, (a_, b_, c_, d_) = start
        while True:
            g = self.adj[tet][d_]
            if g is None:
                break
            j, p = g
            prev = (j, (p[a_], p[b_], p[d_], p[c_]))
            back.append(prev)
            tet, (a_, b_, c_, d_) = prev
        return back[::-1] + ring, False

    def edge_id(self, t, a, b):
        ring, _ = self.edge_ring(t, a, b)
        return min((tt, min(lab[:2]), max(lab[:2])) for tt, lab in ring)

    def vertex_corners(self, t, v):
        """All corners (tet, vertex) of the vertex class of (t, v), and whether it meets the boundary."""
        seen = {(t, v)}
        stack = [(t, v)]
        boundary = False
        while stack:
            i, w = stack.pop()
            for f in range(4):
                if f == w:
                    continue
                g = self.adj[i][f]
                if g is None:
                    boundary = True
                    continue
                j, p = g
                nxt = (j, p[w])
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen, boundary

    def face_id(self, t, f):
        g = self.adj[t][f]
        if g is None:
            return "boundary"
        return min((t, f), (g[0], g[1][f]))

    # -- region replacement -------------------------------------------------
    def _replace(self, region, new_names):
        """Replace ``region`` ([(tet, names)]) by tetrahedra with the given name tuples."""
        index = []
        for t, names in region:
            index.append((t, {nm: k for k, nm in enumerate(names)}))
        region_tets = {t for t, _ in region}

        def find_old(face_names):
            hits = [(t, pos) for t, pos in index if face_names <= pos.keys()]
            if len(hits) != 1:
                raise NotApplicable("ambiguous region boundary")
            t, pos = hits[0]
            (missing,) = [nm for nm in pos if nm not in face_names]
            return t, pos, pos[missing]

        new_names = [list(x) for x in new_names]
        plan = []
        for names in new_names:
            ext = []
            for r in range(4):
                fn = frozenset(names[:r] + names[r + 1:])
                if any(fn <= pos.keys() for _, pos in index):
                    ext.append(r)
            if not ext:
                raise NotApplicable("new tetrahedron without an outer face")
            r = ext[0]
            fn = frozenset(names[:r] + names[r + 1:])
            t, pos, fold = find_old(fn)
            m = tuple(fold if x == r else pos[names[x]] for x in range(4))
            if P.SIGN[m] < 0:
                names[2], names[3] = names[3], names[2]
            plan.append(names)

        ids = [self._new_tet() for _ in plan]
        inner = {}
        outer = {}     # (old tet, old face) -> (new tet, face, map)
        pending = []
        for X, names in zip(ids, plan):
            for r in range(4):
                fn = frozenset(names[:r] + names[r + 1:])
                if any(fn <= pos.keys() for _, pos in index):
                    t, pos, fold = find_old(fn)
                    m = tuple(fold if x == r else pos[names[x]] for x in range(4))
                    outer[t, fold] = (X, r, m)
                    pending.append((X, r, t, fold, m))
                else:
                    if fn in inner:
                        Y, s, ynames = inner.pop(fn)
                        pi = tuple(s if x == r else ynames.index(names[x]) for x in range(4))
                        self._glue(X, r, Y, pi)
                    else:
                        inner[fn] = (X, r, names)
        if inner:
            raise AssertionError("unmatched inner faces in region replacement")
        for X, r, t, fold, m in pending:
            g = self.adj[t][fold]
            if g is None:
                self._unglue_to_boundary(X, r, self.labels.get((t, fold)))
                continue
            N, q = g
            if N in region_tets:
                Y, s, m2 = outer[N, q[fold]]
                self.adj[X][r] = (Y, _CMP[_INV[m2], _CMP[q, m]])
            else:
                self._glue(X, r, N, _CMP[q, m])
        for t in region_tets:
            self._kill(t)
        return ids

    # -- flattening ----------------------------------------------------------
    def _flatten(self, region, pairs):
        """Delete ``region`` and identify paired faces.

        ``pairs`` lists ``((T, f), (T2, f2), m)`` with ``m`` mapping the
        vertices of T to those of T2 and ``m[f] == f2``.
        """
        link = {}
        for (T, f), (T2, f2), m in pairs:
            link[T, f] = (T2, f2, m)
            link[T2, f2] = (T, f, _INV[m])
        region = set(region)
        done = set()
        updates = []
        for (T, f) in list(link):
            g = self.adj[T][f]
            if g is None or g[0] in region:
                continue
            N, q = g
            start = (N, q[f])
            if start in done:
                continue
            cur = _INV[q]               # N labels -> T labels
            tet, face = T, f
            while True:
                T2, f2, m = link[tet, face]
                cur = _CMP[m, cur]
                g2 = self.adj[T2][f2]
                if g2 is None:
                    updates.append((start, None, self.labels.get((T2, f2))))
                    done.add(start)
                    break
                j, p = g2
                cur = _CMP[p, cur]
                if j not in region:
                    end = (j, p[f2])
                    if end == start:
                        raise NotApplicable("flattening would glue a face to itself")
                    updates.append((start, (j, cur), None))
                    done.add(start)
                    done.add(end)
                    break
                tet, face = j, p[f2]
        for t in region:
            self._kill(t)
        for (N, fN), target, label in updates:
            if target is None:
                self._unglue_to_boundary(N, fN, label)
            else:
                self._glue(N, fN, target[0], target[1])
        # faces of outside tetrahedra that were glued into the region and never reached
        for i in self.live():
            for f in range(4):
                g = self.adj[i][f]
                if g is not None and not self.alive[g[0]]:
                    raise AssertionError("dangling gluing after flattening")

    # -- moves -----------------------------------------------------------------
    def try_32(self, t, a, b) -> bool:
        ring, closed = self.edge_ring(t, a, b)
        if not closed or len(ring) != 3 or len({x for x, _ in ring}) != 3:
            return False
        region = []
        # equator vertex k is c of ring[k]; d of ring[k] is c of ring[k+1]
        for k, (tt, lab) in enumerate(ring):
            names = [None] * 4
            names[lab[0]] = "a"
            names[lab[1]] = "b"
            names[lab[2]] = ("e", k)
            names[lab[3]] = ("e", (k + 1) % 3)
            region.append((tt, names))
        e = [("e", k) for k in range(3)]
        self._replace(region, [["a", *e], ["b", *e]])
        return True

    def try_23(self, t, f) -> bool:
        g = self.adj[t][f]
        if g is None or g[0] == t:
            return False
        j, p = g
        names0 = [("v", x) for x in range(4)]
        names0[f] = "d"
        names1 = [None] * 4
        for x in range(4):
            names1[p[x]] = names0[x]
        names1[p[f]] = "e"
        shared = [names0[x] for x in range(4) if x != f]
        x, y, z = shared
        new = [["d", "e", x, y], ["d", "e", y, z], ["d", "e", z, x]]
        self._replace([(t, names0), (j, names1)], new)
        return True

    def try_44(self, t, a, b, axis=0) -> bool:
        ring, closed = self.edge_ring(t, a, b)
        if not closed or len(ring) != 4 or len({x for x, _ in ring}) != 4:
            return False
        region = []
        for k, (tt, lab) in enumerate(ring):
            names = [None] * 4
            names[lab[0]] = "a"
            names[lab[1]] = "b"
            names[lab[2]] = k
            names[lab[3]] = (k + 1) % 4
            region.append((tt, names))
        u, v = (0, 2) if axis == 0 else (1, 3)
        w, z = (1, 3) if axis == 0 else (2, 0)
        new = [[u, v, "a", w], [u, v, w, "b"], [u, v, "b", z], [u, v, z, "a"]]
        self._replace(region, new)
        return True

    def try_20_edge(self, t, a, b) -> bool:
        ring, closed = self.edge_ring(t, a, b)
        if not closed or len(ring) != 2 or ring[0][0] == ring[1][0]:
            return False
        (t0, l0), (t1, l1) = ring
        # the edges opposite the degree-two edge get merged
        c0, d0 = l0[2], l0[3]
        c1, d1 = l1[2], l1[3]
        r0, closed0 = self.edge_ring(t0, c0, d0)
        r1, closed1 = self.edge_ring(t1, c1, d1)
        if not closed0 and not closed1:
            # both merged edges on the boundary would pinch it
            return False
        id0 = min((tt, min(lab[:2]), max(lab[:2])) for tt, lab in r0)
        id1 = min((tt, min(lab[:2]), max(lab[:2])) for tt, lab in r1)
        if id0 == id1:
            return False
        # names: t0 is (a, b, c, d); t1 shares faces abc and abd
        n0 = {l0[0]: "a", l0[1]: "b", l0[2]: "c", l0[3]: "d"}
        n1 = {l1[0]: "a", l1[1]: "b", l1[2]: "d", l1[3]: "c"}
        inv1 = {nm: k for k, nm in n1.items()}
        m = tuple(inv1[n0[x]] for x in range(4))
        pairs = [((t0, l0[0]), (t1, l1[0]), m), ((t0, l0[1]), (t1, l1[1]), m)]
        if not self._faces_forest(pairs):
            return False
        self._flatten([t0, t1], pairs)
        return True

    def try_20_vertex(self, t, v) -> bool:
        corners, boundary = self.vertex_corners(t, v)
        if boundary or len(corners) != 2:
            return False
        (t0, v0), (t1, v1) = sorted(corners)
        if t0 == t1:
            return False
        # the three faces around v of t0 are all glued to t1
        # the three faces of t0 around the vertex are all glued to t1, compatibly
        m = [None] * 4
        m[v0] = v1
        for f in range(4):
            if f == v0:
                continue
            g = self.adj[t0][f]
            if g is None or g[0] != t1:
                return False
            p = g[1]
            for x in range(4):
                if x != f:
                    if m[x] is not None and m[x] != p[x]:
                        return False
                    m[x] = p[x]
        if sorted(m) != [0, 1, 2, 3]:
            return False
        pairs = [((t0, v0), (t1, v1), tuple(m))]
        if not self._faces_forest(pairs):
            return False
        self._flatten([t0, t1], pairs)
        return True

    def try_collapse_edge(self, t, a, b) -> bool:
        """Collapse edge ab, merging its endpoints and flattening every tetrahedron around it."""
        ring, closed = self.edge_ring(t, a, b)
        tets = [x for x, _ in ring]
        if len(set(tets)) != len(tets):
            return False
        corners_a, bnd_a = self.vertex_corners(t, a)
        if (t, b) in corners_a:
            return False
        _, bnd_b = self.vertex_corners(t, b)
        if bnd_a and bnd_b and closed:
            return False
        # triangles around the edge merge their other two edges
        forest = _Forest()
        for tt, (a_, b_, c_, d_) in ring:
            if not forest.union(self.edge_id(tt, a_, c_), self.edge_id(tt, b_, c_)):
                return False
        if not closed:
            tt, (a_, b_, c_, d_) = ring[-1]
            if not forest.union(self.edge_id(tt, a_, d_), self.edge_id(tt, b_, d_)):
                return False
        pairs = [((tt, lab[0]), (tt, lab[1]), P.transposition(lab[0], lab[1])) for tt, lab in ring]
        if not self._faces_forest(pairs):
            return False
        self._flatten(tets, pairs)
        return True

    def _faces_forest(self, pairs) -> bool:
        forest = _Forest()
        for (T, f), (T2, f2), _ in pairs:
            if not forest.union(self.face_id(T, f), self.face_id(T2, f2)):
                return False
        return True

    def try_shell(self, t) -> bool:
        """Remove a tetrahedron with one, two or three boundary faces."""
        bfaces = [f for f in range(4) if self.adj[t][f] is None]
        nb = len(bfaces)
        if nb == 0 or nb == 4:
            return False
        if any(g is not None and g[0] == t for g in self.adj[t]):
            return False
        label = next((self.labels[t, f] for f in bfaces if (t, f) in self.labels), None)
        if nb == 2:
            x, y = bfaces
            # the edge shared by the two glued faces must stay interior
            _, closed = self.edge_ring(t, x, y)
            if not closed:
                return False
        elif nb == 1:
            (f,) = bfaces
            corners, boundary = self.vertex_corners(t, f)
            if boundary:
                return False
            ids = {self.edge_id(t, f, x) for x in range(4) if x != f}
            if len(ids) != 3:
                return False
        for f in range(4):
            g = self.adj[t][f]
            if g is not None:
                j, p = g
                self._unglue_to_boundary(j, p[f], label)
        self._kill(t)
        return True

    def try_close_book(self, t, a, b) -> bool:
        ring, closed = self.edge_ring(t, a, b)
        if closed:
            return False
        t1, l1 = ring[0]
        t2, l2 = ring[-1]
        f1, f2 = l1[3], l2[2]
        if (t1, f1) == (t2, f2):
            return False
        x, y = l1[2], l2[3]
        corners, _ = self.vertex_corners(t1, x)
        if (t2, y) in corners:
            return False
        forest = _Forest()
        if not forest.union(self.edge_id(t1, l1[0], x), self.edge_id(t2, l2[0], y)):
            return False
        if not forest.union(self.edge_id(t1, l1[1], x), self.edge_id(t2, l2[1], y)):
            return False
        m = [None] * 4
        m[l1[0]], m[l1[1]], m[x], m[f1] = l2[0], l2[1], y, f2
        self._glue(t1, f1, t2, tuple(m))
        return True


def edge_locations(b: Builder):
    """One (tet, a, b) per edge class."""
    seen = set()
    out = []
    for t in b.live():
        for a, c in EDGES:
            if (t, a, c) in seen:
                continue
            ring, _ = b.edge_ring(t, a, c)
            for tt, lab in ring:
                seen.add((tt, min(lab[:2]), max(lab[:2])))
            out.append((t, a, c))
    return out


def pachner_move(tri: Triangulation, move: str, location) -> Triangulation:
    """Apply one move and return the new triangulation.

    ``move`` is ``"2-3"`` (location ``(tet, face)``), ``"3-2"`` or
    ``"2-0"`` (location ``(tet, a, b)`` naming an edge).
    """
    b = Builder(tri)
    if move == "2-3":
        ok = b.try_23(*location)
    elif move == "3-2":
        ok = b.try_32(*location)
    elif move in ("2-0", "2-0-edge"):
        ok = b.try_20_edge(*location)
    elif move == "4-4":
        ok = b.try_44(*location)
    elif move == "2-0-vertex":
        ok = b.try_20_vertex(*location)
    elif move == "collapse-edge":
        ok = b.try_collapse_edge(*location)
    elif move == "shell":
        ok = b.try_shell(*location)
    elif move == "close-book":
        ok = b.try_close_book(*location)
    else:
        raise ValueError(f"unknown move {move!r}")
    if not ok:
        raise NotApplicable(f"{move} move not applicable at {location}")
    return b.freeze()
