"""Regenerate the knot-complement fixtures in src/nst/data from SnapPy's census.

Developer tool only: needs ``snappy`` installed, which the package itself does
not use.  Each fixture records the meridian and longitude that SnapPy
attaches to the cusp, converted into closed walks through the link triangles.

    python3 tools/make_fixtures.py
"""
from __future__ import annotations

import itertools
import pathlib
import sys

import snappy

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "nst" / "data"
KNOTS = ["3_1", "4_1", "5_2", "8_16", "8_17"]
SWAP23 = (0, 1, 3, 2)


def snappea_data(name):
    """Return (gluings, curves) parsed from SnapPy's triangulation file text."""
    text = snappy.Manifold(name)._to_string()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    k = next(n for n, ln in enumerate(lines) if ln.strip().split()[0] in ("torus", "Klein")) + 1
    ntet = int(lines[k])
    k += 1
    rows, curves = [], []
    for _ in range(ntet):
        nb = [int(x) for x in lines[k].split()]
        perms = [tuple(int(c) for c in w) for w in lines[k + 1].split()]
        mer = [int(x) for x in lines[k + 3].split()]
        lon = [int(x) for x in lines[k + 5].split()]
        rows.append([(nb[f], perms[f]) for f in range(4)])
        curves.append((mer, lon))
        k += 8
    return rows, curves


def walk_from_tally(rows, tally):
    """Turn per-(tet, corner, face) signed crossing counts into one closed walk.

    Positive counts mark sides where the curve enters the link triangle.
    Entries are paired with exits inside each triangle; all pairings are tried
    until the arcs join into a single loop.
    """
    tris = sorted({(i, v) for (i, v, f), n in tally.items() if n})
    options = []
    for (i, v) in tris:
        ins = [f for f in range(4) if f != v for _ in range(max(tally.get((i, v, f), 0), 0))]
        outs = [f for f in range(4) if f != v for _ in range(max(-tally.get((i, v, f), 0), 0))]
        assert len(ins) == len(outs)
        options.append([list(zip(ins, o)) for o in set(itertools.permutations(outs))])
    for choice in itertools.product(*options):
        pairs = {}
        for (i, v), arcs in zip(tris, choice):
            for fin, fout in arcs:
                pairs.setdefault((i, v, fin), []).append(fout)
        total = sum(len(x) for x in pairs.values())
        pools = {k: list(x) for k, x in pairs.items()}
        start = next(iter(pools))
        cur, steps = start, []
        while True:
            i, v, fin = cur
            fout = pools[cur].pop()
            steps.append((i, v, fout))
            j, p = rows[i][fout]
            cur = (j, p[v], p[fout])
            if cur == start and not pools[cur]:
                break
            if not pools.get(cur):
                break
        if len(steps) == total:
            return steps
    raise RuntimeError("could not form a single closed walk")


def relabel(rows, curves_steps, sigma):
    inv = [0] * 4
    for a, b in enumerate(sigma):
        inv[b] = a
    new = [[None] * 4 for _ in rows]
    for i, row in enumerate(rows):
        for f, (j, p) in enumerate(row):
            q = tuple(sigma[p[inv[x]]] for x in range(4))
            new[i][sigma[f]] = (j, q)
    steps = {k: [(i, sigma[v], sigma[f]) for (i, v, f) in s] for k, s in curves_steps.items()}
    return new, steps


def render(name, rows, steps, note):
    out = [f"# {note}", f"tets {len(rows)}"]
    for row in rows:
        out.append(" ".join(f"{j}:{''.join(map(str, p))}" for j, p in row))
    for key in ("meridian", "longitude"):
        walk = " ".join(f"{i}.{v}.{f}" for i, v, f in steps[key])
        out.append(f"#@ curve {key} {walk}")
    return "\n".join(out) + "\n"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name in KNOTS:
        rows, curves = snappea_data(name)
        steps = {}
        for idx, key in enumerate(("meridian", "longitude")):
            tally = {}
            for i, c in enumerate(curves):
                for v in range(4):
                    for f in range(4):
                        if c[idx][4 * v + f]:
                            tally[i, v, f] = c[idx][4 * v + f]
            steps[key] = walk_from_tally(rows, tally)
        (OUT / f"{name}.tri").write_text(render(name, rows, steps, f"{name} complement, SnapPy census labels"))
        if name == "4_1":
            r2, s2 = relabel(rows, steps, SWAP23)
            (OUT / "figure8.tri").write_text(render(
                "figure8", r2, s2,
                "figure-eight complement; 4_1 with vertices 2 and 3 swapped in every tetrahedron"))
        print(name, len(rows), "tets")


if __name__ == "__main__":
    sys.exit(main())
