"""mwkt command line: compute presented groups and run verification suites."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .errors import MwktError, TooLarge, UsageError
from .rings import parse_ring_spec

CACHE_ENV = "MWKT_CACHE"
DEFAULT_CACHE = ".mwkt-cache"


# cache ------------------------------------------------------------------------------


class Cache:
    """Immutable JSON entries named by the sha256 of their request key."""

    def __init__(self, root=None, enabled=True):
        self.root = Path(root or os.environ.get(CACHE_ENV) or DEFAULT_CACHE)
        self.enabled = enabled

    @staticmethod
    def key(request):
        blob = json.dumps({"version": __version__, **request}, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def path(self, request):
        k = self.key(request)
        return self.root / k[:2] / f"{k}.json"

    def get(self, request):
        if not self.enabled:
            return None
        p = self.path(request)
        if not p.exists():
            return None
        try:
            return json.loads(p.read_text())["value"]
        except (OSError, ValueError, KeyError):
            return None

    def put(self, request, value):
        if not self.enabled:
            return
        p = self.path(request)
        if p.exists():
            return
        p.parent.mkdir(parents=True, exist_ok=True)
        tmp = p.with_suffix(f".{os.getpid()}.tmp")
        tmp.write_text(json.dumps({"request": request, "value": value}, sort_keys=True))
        os.replace(tmp, p)

    def clear(self):
        n = 0
        if self.root.exists():
            for f in self.root.glob("*/*.json"):
                f.unlink()
                n += 1
        return n

    def size(self):
        return sum(1 for _ in self.root.glob("*/*.json")) if self.root.exists() else 0


def cached(cache, request, compute):
    value = cache.get(request)
    if value is None:
        value = compute()
        cache.put(request, value)
    return value


# compute commands ---------------------------------------------------------------------


def ring_info(ring):
    ug = ring.unit_group
    return {
        "ring": ring.spec,
        "description": ring.describe(),
        "size": ring.size,
        "is_field": ring.is_field,
        "residue_field": ring.residue_field.spec,
        "units": list(ring.units),
        "unit_count": len(ring.units),
        "unit_group_generators": list(ug.generators),
        "minus_one": ring.minus_one,
        "maximal_ideal_generators": list(ring.maximal_ideal_generators),
    }


def _object(name, ring, degree, structure, certificates=None):
    return {
        "object": name,
        "ring": ring.spec,
        "degree": degree,
        "structure": structure.to_json(),
        "certificates": certificates or {},
    }


def gw_info(ring, args):
    from .kmw import gw_ring

    gw = gw_ring(ring)
    out = _object("GW", ring, 0, gw.structure, gw.certificate())
    out["angles"] = {str(a): list(gw.angle(a)) for a in ring.units}
    out["multiplication_table"] = [[list(c) for c in row] for row in gw.multiplication_table]
    return out


def _degree(args, default):
    n = default if args.degree is None else args.degree
    if n < 0:
        raise UsageError("negative degrees are not modeled")
    return n


def km_info(ring, args):
    from .kmw import milnor_k

    n = _degree(args, 1)
    return _object("KM", ring, n, milnor_k(ring, n).structure)


def kmw_info(ring, args):
    from .kmw import mw_algebra
    from .linalg import is_isomorphism

    n = _degree(args, 1)
    certs = {}
    if args.max_eta is not None:
        from .tilde import tilde_kmw_truncated

        t, h = tilde_kmw_truncated(ring, n, args.max_eta)
        iso, _ = is_isomorphism(h)
        certs["eta_presentation"] = {"max_eta": args.max_eta, "structure": t.structure.to_json(), "isomorphism": iso}
    return _object("KMW", ring, n, mw_algebra(ring).piece(n).structure, certs)


def khat_info(ring, args):
    from .kmw import hat_algebra
    from .linalg import is_isomorphism
    from .suites import hat_to_mw

    n = _degree(args, 2)
    iso, _ = is_isomorphism(hat_to_mw(ring, n))
    return _object("KHAT", ring, n, hat_algebra(ring).piece(n).structure, {"to_kmw_isomorphism": iso})


def vmod_info(ring, args):
    from .kmw import mw_algebra, v_structure

    vs = v_structure(ring)
    same = vs.to_json() == mw_algebra(ring).piece(1).structure.to_json()
    return _object("V", ring, 1, vs, {"same_invariants_as_kmw_1": same})


def witt_info(ring, args):
    from .witt import witt_tower

    return witt_tower(ring, _degree(args, 3)).to_json()


def fiber_info(ring, args):
    from .witt import fiber_model

    F = fiber_model(ring, _degree(args, 2))
    _, verdict = F.comparison()
    return {**F.to_json(), "comparison": verdict}


def complex_info(ring, args):
    from .complexes import build_complex, complex_homology

    n = _degree(args, 2)
    if n < 1:
        raise UsageError("complex needs degree >= 1")
    cx = build_complex(ring, n, args.variant)
    homology = {}
    for i in range(len(cx.bases)):
        H = complex_homology(cx, i)
        if H is not None:
            homology[str(i)] = H.to_json()
    return {
        "ring": ring.spec,
        "n": n,
        "variant": args.variant,
        "dims": cx.dims,
        "homology": homology,
        "skipped": {str(k): v for k, v in cx.skipped.items()},
        "dd_zero": cx.check_dd(),
    }


def smodule_info(ring, args):
    import itertools

    from .smodule import s_module

    n = _degree(args, 2)
    m = s_module(ring, n, heavy=args.heavy)
    rows = []
    for a in itertools.product(ring.units, repeat=n):
        x = m.symbol(a)
        rows.append({"symbol": list(a), "class": list(x), "det": m.det(x).to_json()})
    return {"ring": ring.spec, "n": n, "structure": m.to_json(), "symbols": rows}


def smodule_csv(ring, data):
    n = data["n"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"a_{i + 1}" for i in range(n)] + ["class"] + [f"det_<{u}>" for u in ring.units])
    for row in data["symbols"]:
        det = row["det"]
        w.writerow(row["symbol"] + [" ".join(map(str, row["class"]))] + [det.get(str(u), 0) for u in ring.units])
    return buf.getvalue()


def gw_csv(ring, data):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["unit", "gw_coords"])
    for u, c in data["angles"].items():
        w.writerow([u, " ".join(map(str, c))])
    return buf.getvalue()


def structure_csv(ring, data):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ring", "free_rank", "invariant_factors"])
    st = data["structure"]
    w.writerow([ring.spec, st["free_rank"], " ".join(map(str, st["invariant_factors"]))])
    return buf.getvalue()


COMMANDS = {
    "gw": (gw_info, gw_csv),
    "km": (km_info, structure_csv),
    "kmw": (kmw_info, structure_csv),
    "khat": (khat_info, structure_csv),
    "vmod": (vmod_info, structure_csv),
    "witt": (witt_info, None),
    "fiber": (fiber_info, None),
    "complex": (complex_info, None),
    "smodule": (smodule_info, smodule_csv),
}


def _is_structure(v):
    return isinstance(v, dict) and set(v) == {"free_rank", "invariant_factors"}


def _group(v):
    parts = [f"Z/{d}" for d in v["invariant_factors"]] + ["Z"] * v["free_rank"]
    return " + ".join(parts) if parts else "0"


def _human(data, indent=0):
    pad = "  " * indent
    lines = []
    for k, v in data.items():
        if _is_structure(v):
            lines.append(f"{pad}{k}: {_group(v)}")
        elif isinstance(v, list) and v and all(_is_structure(x) for x in v):
            lines.append(f"{pad}{k}: " + ", ".join(_group(x) for x in v))
        elif isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_human(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {v}")
    return lines


def _request(command, spec, args):
    return {
        "command": command,
        "ring": spec,
        "degree": args.degree,
        "max_eta": getattr(args, "max_eta", None),
        "variant": getattr(args, "variant", None),
        "heavy": args.heavy,
    }


def run_compute(command, args, cache, out):
    fn, to_csv = COMMANDS[command]
    specs = args.ring or []
    if not specs:
        raise UsageError(f"{command} needs --ring")
    results = []
    for spec in specs:
        ring = parse_ring_spec(spec)
        data = cached(cache, _request(command, spec, args), lambda: fn(ring, args))
        results.append((ring, data))
    if args.csv:
        if to_csv is None:
            raise UsageError(f"{command} has no CSV table")
        for i, (ring, data) in enumerate(results):
            text = to_csv(ring, data)
            out.write(text if i == 0 else text.split("\n", 1)[1])
    elif args.json:
        payload = results[0][1] if len(results) == 1 else [{"ring": r.spec, **d} for r, d in results]
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        for ring, data in results:
            out.write(f"{ring.spec}\n")
            out.write("\n".join(_human(data, 1)) + "\n")
    return 0


# verify -----------------------------------------------------------------------------


def _run_task(task):
    name, spec, opts, cache_root, use_cache = task
    from .suites import run_suite

    cache = Cache(cache_root, use_cache)
    request = {"command": "verify", "suite": name, "ring": spec, **opts.__dict__}
    t0 = time.perf_counter()
    checks = cached(cache, request, lambda: _jsonable(run_suite(name, spec, opts)))
    return (name, spec), checks, time.perf_counter() - t0


def _jsonable(x):
    from .suites import _jsonable as conv

    return json.loads(json.dumps(conv(x), sort_keys=True))


def run_verify(args, cache, out, err):
    from .suites import SUITES, Options, assemble_report

    if args.suite == "all":
        names = sorted(SUITES)
    elif args.suite in SUITES:
        names = [args.suite]
    else:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))} or all")
    for spec in args.ring or []:
        parse_ring_spec(spec)
    opts = Options(degree=args.degree, max_eta=args.max_eta, heavy=args.heavy)
    tasks = [
        (name, spec, opts, str(cache.root), cache.enabled)
        for name in names
        for spec in (args.ring or SUITES[name].rings)
    ]
    results = {}
    timings = {}
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for key, checks, dt in pool.map(_run_task, tasks):
                results[key] = checks
                timings[key] = dt
    else:
        for task in tasks:
            key, checks, dt = _run_task(task)
            results[key] = checks
            timings[key] = dt
    report = assemble_report(results)
    if args.json:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    elif args.csv:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["suite", "ring", "check", "verdict"])
        for s in report["suites"]:
            for c in s["checks"]:
                w.writerow([s["suite"], c["ring"], c["check"], c["verdict"]])
    else:
        for s in report["suites"]:
            out.write(f"== {s['suite']}: {s['anchor']} [{s['verdict']}]\n")
            for c in s["checks"]:
                out.write(f"  {c['verdict']:8} {c['ring']:14} {c['check']}\n")
        c = report["counts"]
        out.write(f"{report['verdict']}: {c['pass']} pass, {c['fail']} fail, {c['finding']} finding, {c['skipped']} skipped\n")
    if args.timings:
        for (name, spec), dt in sorted(timings.items()):
            err.write(f"{name}\t{spec}\t{dt:.3f}s\n")
    return 1 if report["verdict"] == "fail" else 0


# argument parsing ------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", action="append", metavar="SPEC", help="ring spec, repeatable (F5, F3^2[x^2+1], Z/9, F5[t]/t^2)")
    common.add_argument("--degree", type=int, metavar="N")
    common.add_argument("--max-eta", type=int, metavar="M", help="eta truncation for the eta-presentation route")
    common.add_argument("--heavy", action="store_true", help="allow the heavy S_3 / beta path")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    common.add_argument("--jobs", type=int, default=1, metavar="N")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")

    parser = argparse.ArgumentParser(prog="mwkt", description=__doc__)
    parser.add_argument("--version", action="version", version=f"mwkt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ring = sub.add_parser("ring", help="ring facts")
    ring_sub = ring.add_subparsers(dest="ring_command", required=True)
    ring_sub.add_parser("info", parents=[common])

    helps = {
        "gw": "Grothendieck-Witt ring",
        "km": "Milnor K-group in degree N",
        "kmw": "Milnor-Witt K-group in degree N",
        "khat": "hat presentation in degree N",
        "vmod": "the GW-module V",
        "witt": "Witt ring and powers of the fundamental ideal",
        "fiber": "fiber-product model in degree N",
        "complex": "frame or general-position complex on A^N",
        "smodule": "S_N: structure, symbols and determinants",
    }
    for name, h in helps.items():
        p = sub.add_parser(name, parents=[common], help=h)
        if name == "complex":
            p.add_argument("--variant", choices=["U", "GP"], default="U")

    v = sub.add_parser("verify", parents=[common], help="run a named suite or all")
    v.add_argument("suite")
    v.add_argument("--timings", action="store_true", help="per-task timings on stderr")

    c = sub.add_parser("cache", help="inspect or clear the cache")
    c.add_argument("action", choices=["path", "clear"])
    return parser


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "cache":
        cache = Cache()
        if args.action == "path":
            out.write(f"{cache.root}\t{cache.size()} entries\n")
        else:
            out.write(f"removed {cache.clear()} entries\n")
        return 0
    cache = Cache(enabled=not args.no_cache)
    try:
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if args.command == "verify":
            return run_verify(args, cache, out, err)
        if args.command == "ring":
            specs = args.ring or []
            if not specs:
                raise UsageError("ring info needs --ring")
            infos = [ring_info(parse_ring_spec(s)) for s in specs]
            if args.json:
                out.write(json.dumps(infos[0] if len(infos) == 1 else infos, sort_keys=True) + "\n")
            else:
                for info in infos:
                    out.write("\n".join(_human(info)) + "\n")
            return 0
        return run_compute(args.command, args, cache, out)
    except TooLarge as e:
        err.write(f"mwkt: resource cap {e.cap} exceeded ({e.value} > {e.limit})\n")
        return e.exit_code
    except MwktError as e:
        err.write(f"mwkt: {e}\n")
        return e.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
