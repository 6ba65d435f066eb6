"""disto: command-line front end.

Every subcommand writes one deterministic JSON report (schema 1) to stdout
or ``--out``.  Exit codes: 0 pass, 1 property violation, 2 usage error,
3 budget or horizon exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import annulus, cayley, distortion, presentation, rewriter, torus_grid
from .symbolic import Symbolic, exact

SCHEMA = 1


class Violation(Exception):
    def __init__(self, report: dict):
        super().__init__("property violation")
        self.report = report


# -- serialization -------------------------------------------------------------


def jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return exact(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Symbolic):
        return {"expr": str(obj), "terms": {k or "1": exact(v) for k, v in obj.terms}}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset, range)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(x) for x in items]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render(report: dict) -> str:
    return json.dumps(jsonable(report), indent=2, sort_keys=True) + "\n"


def emit(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def base_report(args, command: str, lemma) -> dict:
    return {"schema": SCHEMA, "command": command, "seed": args.seed, "lemma": lemma}


def load_json(path: str):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _rationals(values) -> list[Fraction]:
    return [Fraction(str(v)) for v in values]


# -- group helpers ---------------------------------------------------------------


def _presentation(args) -> presentation.Presentation:
    if getattr(args, "free_rank", None):
        return presentation.make_presentation(presentation.FREE, args.free_rank)
    return presentation.make_presentation(presentation.CLOSED, args.genus)


def _ball(args, p, radius: int) -> cayley.Ball:
    return cayley.enumerate_ball(p, radius, budget=args.budget, method=args.method)


def _ball_dot(ball: cayley.Ball) -> str:
    p = ball.presentation
    lines = ["graph ball {", f'  label="radius {ball.radius}";']
    for fid, (w, d) in enumerate(zip(ball.words, ball.dist)):
        name = p.format(w) or "D0"
        lines.append(f'  f{fid} [label="{name}", dist={d}];')
    for fid, row in enumerate(ball.nbr):
        for x, c in enumerate(row):
            if c > fid:
                lines.append(f'  f{fid} -- f{c} [label="{p.letter_name(x)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- subcommands -------------------------------------------------------------------


def cmd_ball(args) -> str:
    p = _presentation(args)
    ball = _ball(args, p, args.radius)
    if args.format == "dot":
        return _ball_dot(ball)
    faces = []
    for fid, (w, d) in enumerate(zip(ball.words, ball.dist)):
        exc = None if fid == 0 or p.kind != presentation.CLOSED else len(cayley.down_neighbors(ball, fid)) >= 2
        faces.append({"word": p.format(w), "dist": d, "exceptional": exc})
    rep = base_report(args, "ball", "metric")
    rep.update({"kind": p.kind, "genus": p.genus if p.kind == presentation.CLOSED else None,
                "rank": p.rank, "radius": ball.radius, "method": ball.method,
                "spheres": ball.spheres, "faces": faces})
    return render(rep)


def cmd_reduce(args) -> str:
    p = _presentation(args)
    w = p.parse(args.word)
    result, steps = rewriter.dehn_reduce(p, w)
    rep = base_report(args, "reduce", "dehn")
    rep.update({"word": p.format(w), "steps": [p.format(s) for s in steps],
                "result": p.format(result), "trivial": not result})
    return render(rep)


def cmd_classify(args) -> str:
    p = _presentation(args)
    w = presentation.free_reduce(p.parse(args.face))
    radius = max(len(w), args.l or 0, 1)
    ball = _ball(args, p, radius)
    fid = ball.id_of(w)
    rep = base_report(args, "classify", "exceptional")
    rep.update({"face": p.format(ball.words[fid]), "dist": ball.dist[fid],
                "down_neighbors": len(cayley.down_neighbors(ball, fid))})
    rep["exceptional"] = None if fid == 0 else cayley.is_exceptional(ball, fid)
    if args.k is not None and args.l is not None:
        rep["type"] = {"k": args.k, "l": args.l,
                       "recursive": cayley.face_type(ball, fid, args.k, args.l),
                       "extension": cayley.face_type_by_extension(ball, fid, args.k, args.l)}
    return render(rep)


def cmd_geodesics(args) -> str:
    p = _presentation(args)
    w = presentation.free_reduce(p.parse(args.face))
    ball = _ball(args, p, max(len(w), 1))
    fid = ball.id_of(w)
    geos = cayley.geodesics_to(ball, fid, args.cap)
    rep = base_report(args, "geodesics", "geodexc")
    rep.update({"face": p.format(ball.words[fid]), "dist": ball.dist[fid],
                "geodesics": [p.format(g) for g in geos]})
    return render(rep)


def cmd_diam(args) -> str:
    p = _presentation(args)
    faces = [presentation.free_reduce(p.parse(s)) for s in args.faces.split(";")]
    base = presentation.free_reduce(p.parse(args.base)) if args.base else ()
    # pairwise distances are lengths of u^-1 v; beyond the radius they raise OutOfBall
    span = max(len(f) for f in faces + [base])
    ball = _ball(args, p, min(2 * span, args.radius))
    rep = base_report(args, "diam", "el-diam")
    rep.update({"faces": [p.format(f) for f in faces],
                "diam": cayley.diam_discrete(ball, faces),
                "base": p.format(base),
                "el": cayley.eloignement(ball, base, faces)})
    return render(rep)


def _pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for item in filter(None, (s.strip() for s in text.split(";"))):
        i, j = item.split(",")
        out.append((int(i), int(j)))
    return out


def _lines(text: str | None) -> list[Fraction]:
    if not text:
        return []
    return [Fraction(s.strip()) for s in text.split(";") if s.strip()]


def cmd_torus(args) -> str:
    f = torus_grid.GridFootprint.make(_pairs(args.faces), _lines(args.vlines), _lines(args.hlines))
    plan = torus_grid.reduction_plan(f)
    rep = base_report(args, "torus-footprint", ["hertore", "intore"])
    rep.update({
        "length": torus_grid.length(f),
        "height": torus_grid.height(f),
        "diam": torus_grid.diam_discrete(f),
        "connected": torus_grid.is_four_connected(f.faces),
        "plan": {"steps": list(plan.steps), "reductions": plan.reductions, "bound": plan.bound},
    })
    return render(rep)


def _growth(text: str | None, path: str | None) -> distortion.GrowthModel:
    if path:
        data = load_json(path)
        return distortion.prefix_model({int(k): Fraction(str(v)) for k, v in data.items()}
                                       if isinstance(data, dict) else _rationals(data))
    return distortion.parse_growth(text)


def cmd_criterion(args) -> str:
    d = _growth(args.d, args.d_prefix)
    rep = base_report(args, "criterion", ["distorsionimpliquecroissance", "croissanceimpliquedistorsion"])
    rep.update({"d": str(d), "sublinear": distortion.criterion_sublinear(d),
                "nlogn": distortion.criterion_nlogn(d)})
    if args.w:
        w = distortion.parse_growth(args.w)
        rep["w"] = str(w)
        rep["wn"] = distortion.criterion_wn(d, w)
    if not d.symbolic:
        rep["verdict"] = "indeterminate"
        rep["trend"] = distortion.trend_report(d)
    return render(rep)


def cmd_avila(args) -> str:
    word = distortion.avila_enumerate(args.n)
    rep = base_report(args, "avila", "Avila")
    rep.update({"n": args.n, "word": word, "length": len(word),
                "bound": distortion.avila_bound(args.n),
                "inequality": f"l(m_{args.n}) <= 14*{len(word)}+14 (log base 2)"})
    return render(rep)


def cmd_sigma(args) -> str:
    prof = distortion.DecompositionProfile.from_spec(load_json(args.profile))
    rep = base_report(args, "sigma", "fragdist")
    rep.update({"profile": prof.description, "horizon": args.horizon})
    try:
        s = distortion.build_sigma(prof, args.horizon, args.terms)
    except distortion.SigmaFailure as e:
        rep.update({"ok": False, "blocking_m": e.m, "error": str(e)})
        raise Violation(rep)
    bad = distortion.verify_sigma(s, prof)
    rep.update({"ok": not bad, "sigma": list(s.sigma), "witnesses": list(s.witnesses),
                "reverified": not bad, "k_above_l": list(s.k_above_l), "log_base": 2})
    if bad:
        raise Violation(rep)
    return render(rep)


def cmd_cert(args) -> str:
    rep = base_report(args, "cert", None)
    if args.group:
        n = args.n
        if args.group == "baumslag":
            bound = distortion.classical_certificates("baumslag", n, args.p)
            ok = distortion.verify_baumslag(args.p, n)
            rep.update({"lemma": "intro", "group": f"BS(1,{args.p})", "element": f"a^({args.p}^{n})",
                        "witness": distortion.baumslag_witness(args.p, n)})
        else:
            bound = distortion.classical_certificates("heisenberg", n)
            ok = distortion.verify_heisenberg(n)
            rep.update({"lemma": "intro", "group": "Heisenberg", "element": f"c^({n}^2)",
                        "witness": distortion.heisenberg_witness(n)})
        rep.update({"bound": bound, "witness_verified": ok})
        if not ok:
            raise Violation(rep)
        return render(rep)
    if args.lam is not None:
        ab = distortion.a_bound_from_lambda(args.lam)
        lo, hi = ab.interval()
        rep.update({"lemma": "exemple", "lambda": args.lam, "a_bound": str(ab),
                    "log_base": "e", "interval": [lo, hi]})
        return render(rep)
    if args.surface is None:
        raise SystemExit("cert needs --surface, --group or --lambda")
    x = args.el if args.surface == "closed" else args.diam
    if x is None:
        raise SystemExit("--el is needed for closed surfaces, --diam otherwise")
    c = distortion.frag_certificates(args.surface, x, args.genus if args.surface == "closed" else None)
    rep.update({"lemma": list(c.source), "surface": c.surface,
                "el" if args.surface == "closed" else "diam": x,
                "upper": c.upper, "lower": c.lower})
    return render(rep)


def _schedule_report(s: annulus.AnnulusSchedule, table: dict) -> dict:
    ok, where = annulus.verify_final(s, table)
    rep = {
        "l": s.l,
        "lambda": s.lam,
        "N": s.N,
        "i0": s.i0,
        "reach": list(s.reach),
        "partition": {str(i): list(js) for i, js in sorted(s.partition.items())},
        "delays": list(s.delays),
        "trajectory": {str(j): row for j, row in table.items()},
        "final_ok": ok,
        "violation": None if where is None else {"j": where[0], "r": where[1]},
    }
    if s.l:
        ab = distortion.a_bound_from_lambda(s.lam)
        rep["lambda_over_l"] = Fraction(s.lam, s.l)
        rep["a_bound"] = {"expr": str(ab), "log_base": "e", "interval": list(ab.interval())}
    return rep


def cmd_annulus(args) -> str:
    rep = base_report(args, "annulus", "fragexemple")
    if args.reach:
        data = load_json(args.reach)
        reach = {int(k): int(v) for k, v in data.items()} if isinstance(data, dict) else data
        s = annulus.compute_schedule(reach)
    else:
        if not args.v or not args.l:
            raise SystemExit("annulus needs --v and --l (or --reach)")
        data = load_json(args.v)
        raw = data["v"] if isinstance(data, dict) else data
        v = annulus.make_admissible(_rationals(raw), avoid_integers=True)
        model = annulus.build_orbit(v, track=max(args.l, args.lmax or 0) + 1)
        s = annulus.compute_schedule(model, args.l)
        rep["preprocessing"] = list(v.log)
        rep["perturbations"] = [{"n": q.n, "i": q.i, "x": q.x, "delta": q.delta} for q in model.perturbations]
        if args.lmax:
            chain = annulus.lambda_growth_check(v, model, args.lmax)
            rep["lambda_chain"] = {
                "all_ok": chain["all_ok"],
                "non_decaying": chain["non_decaying"],
                "rows": [{"l": r["l"], "lambda": r["lambda"], "bound": r["bound"], "ok": r["ok"],
                          "ratio": r["ratio"], "a_bound": str(r["a_bound"])} for r in chain["rows"]],
            }
    table = annulus.crossing_trajectory(s)
    rep.update(_schedule_report(s, table))
    if args.csv:
        Path(args.csv).write_text(annulus.trajectory_csv(table), encoding="utf-8")
    if args.format == "csv":
        return annulus.trajectory_csv(table)
    if not rep["final_ok"]:
        raise Violation(rep)
    return render(rep)


# -- verify-lemmas -----------------------------------------------------------------


def _entry(id_, lemma, bad, checked, extra=None) -> dict:
    e = {"id": id_, "lemma": lemma, "pass": not bad, "checked": checked,
         "counterexamples": [jsonable(b) for b in list(bad)[:5]]}
    if extra:
        e.update(extra)
    return e


def _random_schedules(rng: random.Random, count: int, lmax: int) -> tuple[list, int]:
    bad = []
    checked = 0
    for _ in range(count):
        c = Fraction(rng.randint(2, 6), 4)
        raw = [c * Fraction(round(n ** 0.5 * 1000), 1000) for n in range(1, 600)]
        v = annulus.make_admissible(raw, avoid_integers=True)
        model = annulus.build_orbit(v, track=lmax + 1)
        for l in range(1, lmax + 1):
            s = annulus.compute_schedule(model, l)
            ok, where = annulus.verify_final(s)
            checked += 1
            if not ok or annulus.check_schedule(s):
                bad.append({"c": c, "l": l, "violation": where})
    return bad, checked


def cmd_verify(args) -> str:
    p = presentation.make_presentation(presentation.CLOSED, args.genus)
    if args.radius < 2 * p.genus:
        raise SystemExit(f"verify-lemmas needs --radius >= {2 * p.genus} so vertex rings of D0 fit")
    rng = random.Random(args.seed)
    matrix = []
    for name, fn in (("fact1", presentation.check_fact1), ("fact2", presentation.check_fact2),
                     ("fact3", presentation.check_fact3)):
        matrix.append(_entry(name, "facts", fn(p), p.n_letters ** 2))
    ball = _ball(args, p, args.radius)
    matrix.append(_entry("parity", "parity", cayley.check_parity(ball), len(ball)))
    ring_faces = [f for f in range(len(ball)) if ball.dist[f] + 2 * p.genus <= args.radius]
    bad = cayley.check_adjacence(ball, ring_faces)
    n_rings = cayley.distinct_vertex_rings(ball)
    if n_rings != 4 * p.genus:
        bad.append(("D0-vertex-rings", n_rings))
    matrix.append(_entry("adjacence", "adjacence", bad, len(ring_faces), {"d0_vertex_rings": n_rings}))
    bad, stats = cayley.check_geodexc(ball)
    matrix.append(_entry("geodexc", "geodexc", bad, stats["exceptional"],
                         {"geodesics": stats["geodesics"], "property2_only": stats["property2_only"],
                          "incoming": {str(k): v for k, v in sorted(stats["incoming"].items())}}))
    bad, checked = cayley.check_faceexc(ball)
    matrix.append(_entry("faceexc", "faceexc", bad, checked))
    bad, hits = cayley.check_geodexc2(ball)
    matrix.append(_entry("geodexc2", "geodexc2", bad, len(ball) - 1, {"exceptional_wrt_D1": hits}))
    bad, count = cayley.check_type_definitions(ball)
    matrix.append(_entry("types", "types", bad, count))
    bad = cayley.check_el_diam(ball, samples=args.samples, seed=args.seed)
    matrix.append(_entry("el-diam", "el-diam", bad, args.samples))
    fig = annulus.compute_schedule({0: 3, 1: 3, 2: 4, 3: 4, 4: 4})
    ok, where = annulus.verify_final(fig)
    matrix.append(_entry("figure-schedule", "fragexemple", [] if ok else [where], 1))
    bad, checked = _random_schedules(rng, args.schedules, args.lmax)
    matrix.append(_entry("schedules", "fragexemple", bad, checked))
    rep = base_report(args, "verify-lemmas", "all")
    rep.update({"genus": args.genus, "radius": args.radius, "spheres": ball.spheres,
                "matrix": matrix, "all_pass": all(e["pass"] for e in matrix)})
    if not rep["all_pass"]:
        raise Violation(rep)
    return render(rep)


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="disto", description="Surface group tilings, fragmentation and distortion certificates.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites (recorded in reports)")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    sub = ap.add_subparsers(dest="command", required=True)

    def group_args(sp, free=False):
        sp.add_argument("--genus", type=int, default=2)
        if free:
            sp.add_argument("--free-rank", type=int, default=None)
        sp.add_argument("--budget", type=int, default=None, help=f"face budget (default ${cayley.BUDGET_ENV} or {cayley.DEFAULT_BUDGET})")
        sp.add_argument("--method", choices=["geometric", "dehn"], default="geometric")

    sp = sub.add_parser("ball", parents=[common], help="enumerate a ball of the Cayley graph")
    group_args(sp, free=True)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--format", choices=["json", "dot"], default="json")
    sp.set_defaults(fn=cmd_ball)

    sp = sub.add_parser("reduce", parents=[common], help="run Dehn's algorithm on a word")
    sp.add_argument("--genus", type=int, default=2)
    sp.add_argument("--word", required=True)
    sp.set_defaults(fn=cmd_reduce)

    sp = sub.add_parser("classify", parents=[common], help="exceptional / type (k,l) classification of a face")
    group_args(sp)
    sp.add_argument("--face", required=True)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--l", type=int, default=None)
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("geodesics", parents=[common], help="all geodesic words to a face")
    group_args(sp)
    sp.add_argument("--face", required=True)
    sp.add_argument("--cap", type=int, default=10_000)
    sp.set_defaults(fn=cmd_geodesics)

    sp = sub.add_parser("diam", parents=[common], help="discrete diameter and eloignement of a face set")
    group_args(sp)
    sp.add_argument("--faces", required=True, help='";"-separated words, e.g. "a1; b1 a2"')
    sp.add_argument("--base", default="")
    sp.add_argument("--radius", type=int, default=6, help="largest distance resolved")
    sp.set_defaults(fn=cmd_diam)

    sp = sub.add_parser("torus-footprint", parents=[common], help="length, height, diameter and plan of a grid footprint")
    sp.add_argument("--faces", required=True, help='squares "i,j;i,j"')
    sp.add_argument("--vlines", default="")
    sp.add_argument("--hlines", default="")
    sp.set_defaults(fn=cmd_torus)

    sp = sub.add_parser("criterion", parents=[common], help="distortion growth criteria")
    sp.add_argument("--d", default=None, help='growth model such as "n^0.5"')
    sp.add_argument("--d-prefix", default=None, help="JSON table of d_n values (gives an indeterminate verdict)")
    sp.add_argument("--w", default=None)
    sp.set_defaults(fn=cmd_criterion)

    sp = sub.add_parser("avila", parents=[common], help="Avila word enumeration and bound")
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(fn=cmd_avila)

    sp = sub.add_parser("sigma", parents=[common], help="greedy sigma schedule for a decomposition profile")
    sp.add_argument("--profile", required=True)
    sp.add_argument("--horizon", type=int, default=1_000_000)
    sp.add_argument("--terms", type=int, default=8)
    sp.set_defaults(fn=cmd_sigma)

    sp = sub.add_parser("cert", parents=[common], help="fragmentation and word-length certificates")
    sp.add_argument("--surface", choices=["boundary", "torus", "closed"], default=None)
    sp.add_argument("--genus", type=int, default=2)
    sp.add_argument("--el", type=int, default=None)
    sp.add_argument("--diam", type=int, default=None)
    sp.add_argument("--group", choices=["baumslag", "heisenberg"], default=None)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--lambda", dest="lam", type=int, default=None)
    sp.set_defaults(fn=cmd_cert)

    sp = sub.add_parser("annulus", parents=[common], help="delay schedule and crossing trajectory")
    sp.add_argument("--v", default=None, help="JSON list of target values")
    sp.add_argument("--reach", default=None, help="JSON reach map j -> i(j)")
    sp.add_argument("--l", type=int, default=None)
    sp.add_argument("--lmax", type=int, default=None, help="also run the lambda growth chain up to lmax")
    sp.add_argument("--emit", default=None, help="schedule JSON path (same as --out)")
    sp.add_argument("--csv", default=None, help="also write the trajectory as CSV")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.set_defaults(fn=cmd_annulus)

    sp = sub.add_parser("verify-lemmas", parents=[common], help="run every invariant suite and print a pass/fail matrix")
    group_args(sp)
    sp.add_argument("--radius", type=int, default=5)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--schedules", type=int, default=5)
    sp.add_argument("--lmax", type=int, default=10)
    sp.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = args.out or getattr(args, "emit", None)
    try:
        emit(args.fn(args), out)
    except Violation as v:
        emit(render(v.report), out)
        return 1
    except (cayley.BudgetExceeded, cayley.OutOfBall, cayley.GeodesicOverflow, annulus.HorizonError) as e:
        print(f"disto: budget exceeded: {e}", file=sys.stderr)
        return 3
    except annulus.ScheduleError as e:
        print(f"disto: schedule invariant violated: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:
        print(f"disto: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"disto: error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
