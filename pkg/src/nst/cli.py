"""``nst`` command line: matchings, rays, surface, largeness and batch."""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from pathlib import Path

from .coords import build_q_matching, parse_curves
from .enumerate import enumerate_admissible_rays, q_cone
from .errors import NstError, PreconditionError
from .surface import SpunReport, boundary_slope, reconstruct_from_q
from .triangulation import parse_triangulation

BATCH_FIELDS = ["knot", "verdict", "rays", "seconds_enum", "seconds_test", "seed"]


def load(path):
    text = Path(path).read_text(encoding="utf-8")
    tri = parse_triangulation(text)
    return text, tri, parse_curves(text, tri)


# -- commands: each returns (payload dict, human-readable text) ---------------

def cmd_matchings(args, text, tri, curves):
    m = build_q_matching(tri)
    payload = {"rows": m.to_json()["rows"], "provenance": m.to_json()["provenance"], "rank": m.rank}
    lines = [f"rank {payload['rank']}"]
    for prov, row in zip(payload["provenance"], payload["rows"]):
        lines.append(f"edge {prov}: " + " ".join(str(v) for v in row))
    return payload, "\n".join(lines)


def _rays(tri, q0):
    t0 = time.perf_counter()
    rays = enumerate_admissible_rays(q_cone(tri, closed=q0))
    return rays, time.perf_counter() - t0


def cmd_rays(args, text, tri, curves):
    rays, secs = _rays(tri, args.q0)
    payload = {"cone": "Q0" if args.q0 else "Q", "count": len(rays),
               "rays": [r.to_json() for r in rays], "seconds": round(secs, 6)}
    lines = [f"{payload['count']} admissible rays of {payload['cone']} in {payload['seconds']} s"]
    for k, r in enumerate(payload["rays"]):
        lines.append(f"{k}: " + " ".join(str(v) for v in r))
    return payload, "\n".join(lines)


def _slope_json(value):
    if value == math.inf:
        return "inf"
    return str(value)


def cmd_surface(args, text, tri, curves):
    rays, _ = _rays(tri, args.q0)
    if not 0 <= args.ray < len(rays):
        raise PreconditionError(f"ray index {args.ray} out of range (0..{len(rays) - 1})")
    vec = list(rays[args.ray].vector)
    s = reconstruct_from_q(tri, vec, curves)
    payload = {"ray": args.ray, "q": vec}
    if isinstance(s, SpunReport):
        payload["closed"] = False
        payload["nu"] = {str(v): {k: int(x) for k, x in vals.items()} for v, vals in s.nu.items()}
        slopes = {}
        for v, named in s.curves.items():
            names = list(named)
            mu = named.get("meridian", named[names[0]])
            lam = named.get("longitude", named[names[1]])
            try:
                slopes[str(v)] = _slope_json(boundary_slope(s, mu, lam))
            except NstError:
                slopes[str(v)] = None
        payload["slopes"] = slopes
        lines = [f"ray {args.ray}: spun-normal", "q: " + " ".join(map(str, vec))]
        for v, vals in payload["nu"].items():
            lines.append(f"cusp {v}: " + " ".join(f"nu({k})={x}" for k, x in vals.items())
                         + f" slope={slopes[v]}")
    else:
        cls = s.classify()
        payload["closed"] = True
        payload["std"] = list(s.std)
        payload["surface"] = cls.to_json()
        lines = [f"ray {args.ray}: closed surface", "q: " + " ".join(map(str, vec)),
                 "std: " + " ".join(map(str, payload["std"]))]
        lines += [f"{k}: {v}" for k, v in payload["surface"].items()]
    return payload, "\n".join(lines)


def cmd_largeness(args, text, tri, curves):
    from .pipeline import decide_largeness

    v = decide_largeness(tri, seed=args.seed, knot=Path(args.file).stem,
                         workers=1 if args.deterministic else args.workers)
    payload = v.to_json()
    lines = [f"{payload['knot']}: {payload['verdict']}",
             f"rays: {payload['rays']}", f"seed: {payload['seed']}",
             "timings: " + " ".join(f"{k}={t}" for k, t in payload["timings"].items())]
    if "witness" in payload:
        w = payload["witness"]
        lines.append(f"witness: ray {w['ray']} genus {w['surface']['genus']}")
    return payload, "\n".join(lines)


COMMANDS = {"matchings": cmd_matchings, "rays": cmd_rays, "surface": cmd_surface,
            "largeness": cmd_largeness}


# -- cache -------------------------------------------------------------------

def cache_key(text: str, argv_key: list) -> str:
    h = hashlib.sha256()
    h.update(hashlib.sha256(text.encode("utf-8")).hexdigest().encode())
    h.update(json.dumps(argv_key).encode())
    return h.hexdigest()


def _command_key(args) -> list:
    key = [args.command, args.seed]
    if args.command == "rays":
        key.append(bool(args.q0))
    if args.command == "surface":
        key += [bool(args.q0), args.ray]
    return key


def run_one(args):
    """Run a single-file command; returns (payload json text, human text)."""
    text, tri, curves = load(args.file)
    cache = Path(args.cache) if args.cache else None
    if cache is not None:
        key = cache_key(text, _command_key(args))
        hit = cache / f"{key}.json"
        if hit.exists():
            record = json.loads(hit.read_text(encoding="utf-8"))
            return record["payload"], record["human"]
    payload, human = COMMANDS[args.command](args, text, tri, curves)
    out = json.dumps(payload, sort_keys=True)
    if cache is not None:
        cache.mkdir(parents=True, exist_ok=True)
        record = {"input_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
                  "command": _command_key(args), "payload": out, "human": human}
        hit.write_text(json.dumps(record), encoding="utf-8")
    return out, human


def _batch_job(job):
    path, seed = job
    from .pipeline import decide_largeness

    _, tri, _ = load(path)
    v = decide_largeness(tri, seed=seed, knot=Path(path).stem)
    return {"knot": v.knot, "verdict": v.verdict, "rays": v.rays,
            "seconds_enum": f"{v.timings['enumerate']:.3f}",
            "seconds_test": f"{v.timings['test']:.3f}", "seed": seed}


def run_batch(args) -> str:
    files = sorted(Path(args.dir).glob("*.tri"))
    jobs = [(str(p), args.seed) for p in files]
    if args.workers > 1 and not args.deterministic:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_batch_job, jobs))
    else:
        rows = [_batch_job(j) for j in jobs]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BATCH_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--deterministic", action="store_true", default=argparse.SUPPRESS,
                        help="process candidates one at a time in ray order")
    common.add_argument("--cache", metavar="DIR", default=argparse.SUPPRESS)
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="nst", parents=[common],
                                description="Closed essential surfaces in knot complements.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("matchings", parents=[common], help="print the Q-matching equations")
    s.add_argument("file")
    s = sub.add_parser("rays", parents=[common], help="admissible extremal rays")
    s.add_argument("file")
    s.add_argument("--q0", action="store_true", help="closed-surface cone only")
    s = sub.add_parser("surface", parents=[common], help="reconstruct and classify one ray")
    s.add_argument("file")
    s.add_argument("--ray", type=int, required=True)
    s.add_argument("--q0", action="store_true", help="index into the closed-surface rays")
    s = sub.add_parser("largeness", parents=[common], help="decide large or small")
    s.add_argument("file")
    s = sub.add_parser("batch", parents=[common], help="largeness for every .tri file in DIR")
    s.add_argument("dir")
    return p


_DEFAULTS = {"json": False, "seed": 0, "deterministic": False, "cache": None, "workers": 1}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        if args.command == "batch":
            sys.stdout.write(run_batch(args))
            return 0
        payload, human = run_one(args)
    except (NstError, OSError) as exc:
        kind = exc.kind if isinstance(exc, NstError) else "io"
        err = json.dumps({"error": kind, "message": str(exc)}, sort_keys=True)
        if args.json:
            print(err)
        else:
            print(err, file=sys.stderr)
        return 2
    print(payload if args.json else human)
    return 0


if __name__ == "__main__":
    sys.exit(main())
