"""Command-line interface: ``workbench <group> <command> ...``.

Reports are JSON (sorted keys, rationals as "p/q", no floats) written to
stdout or ``--out``; a one-line summary goes to stderr. Exit status: 0 when a
verdict was produced, 2 when the run was inconclusive, 1 on error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from . import folner, lpa, oracle, transalg, translation
from .errors import ValidationFailed, WorkbenchError
from .fixtures import dumps, fixture_names, write_fixture
from .linalg import field_from_name
from .space import (
    INF,
    MetricSpace,
    Window,
    base_window,
    format_rational,
    neighborhood,
    parse_distance,
    space_from_json,
    whole_space,
)

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class Inconclusive(Exception):
    """Carries a report for a run that produced no verdict."""

    def __init__(self, report: dict):
        super().__init__("inconclusive")
        self.report = report


# ---------------------------------------------------------------- input helpers


def _schema(name: str) -> dict:
    text = resources.files("workbench").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


class Inputs:
    """Loads input files and records their digests."""

    def __init__(self):
        self.digests: list[str] = []

    def load(self, path: str, schema: str | None = None):
        data = Path(path).read_bytes()
        self.digests.append(hashlib.sha256(data).hexdigest())
        try:
            obj = json.loads(data.decode("utf-8"))
        except json.JSONDecodeError as exc:
            raise ValidationFailed(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        if schema:
            try:
                jsonschema.validate(obj, _schema(schema))
            except jsonschema.ValidationError as exc:
                loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
                raise ValidationFailed(f"{path}: at {loc}: {exc.message}") from None
        return obj


def _label(obj):
    """JSON label -> point label (lists become tuples, recursively)."""
    if isinstance(obj, list):
        return tuple(_label(x) for x in obj)
    return obj


def _label_json(label):
    if isinstance(label, tuple):
        return [_label_json(x) for x in label]
    return label


def _points_json(space: MetricSpace, pts) -> list:
    return sorted((_label_json(space.label(x)) for x in pts), key=lambda v: json.dumps(v, sort_keys=True))


def _window(space: MetricSpace, radius) -> Window:
    if radius is None:
        if not space.is_finite:
            raise ValidationFailed("infinite space: pass --window-radius")
        return whole_space(space)
    return base_window(space, parse_distance(radius))


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _distance(text: str):
    try:
        return parse_distance(int(text) if text.lstrip("-").isdigit() else text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _element_json(x) -> list:
    be = x.algebra.backend
    return [
        {"coef": format_rational(c), "monomial": be.format(k)}
        for k, c in sorted(x.terms.items(), key=lambda kc: be.sort_key(kc[0]))
    ]


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if obj is INF:
        return "inf"
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((_jsonable(v) for v in obj), key=lambda v: json.dumps(v, sort_keys=True))
    return obj


# ---------------------------------------------------------------- commands


def cmd_space_folner(args, inp: Inputs) -> dict:
    space = space_from_json(inp.load(args.space, "space"))
    window = _window(space, args.window_radius)
    if args.components:
        rep = folner.component_amenability_report(window, args.radius, args.epsilon, args.limit)
        comps = []
        for c in rep.components:
            comps.append({
                "size": len(c.members),
                "status": c.status,
                "evidence": c.evidence,
                "strategy": c.strategy,
                "ratio": c.certificate.ratio if c.certificate else None,
                "F": _points_json(space, c.certificate.F) if c.certificate else None,
            })
        weakest = "proof"
        for c in rep.components:
            if c.evidence == "heuristic-evidence" or (c.evidence == "window-proof" and weakest == "proof"):
                weakest = c.evidence
        report = {"verdict": rep.shape, "reasons": [c.status for c in rep.components],
                  "evidence": weakest, "certificate": {"components": comps}}
        if any(c.status == "none-found" and c.evidence == "heuristic-evidence" for c in rep.components):
            raise Inconclusive({**report, "verdict": "inconclusive"})
        return report
    cert = folner.find_folner(window, args.radius, args.epsilon, args.strategy, limit=args.limit)
    evidence = folner.EVIDENCE[args.strategy]
    if cert is None:
        report = {"verdict": "none-found", "reasons": [args.strategy], "evidence": evidence,
                  "certificate": {"window_size": len(window)}}
        if args.strategy != "exhaustive":
            raise Inconclusive({**report, "verdict": "inconclusive"})
        report["verdict"] = "no-folner-set-in-window"
        return report
    return {
        "verdict": "folner-found",
        "reasons": [args.strategy],
        "evidence": evidence,
        "certificate": {
            "F": _points_json(space, cert.F),
            "size": len(cert.F),
            "R": cert.R,
            "epsilon": cert.epsilon,
            "ratio": cert.ratio,
            "reverified": cert.verify(space),
        },
    }


def cmd_space_paradox(args, inp: Inputs) -> dict:
    space = space_from_json(inp.load(args.space, "space"))
    window = _window(space, args.window_radius)
    res = translation.paradox_certificate(window, args.radius)
    if isinstance(res, translation.HallViolation):
        n, k = res.recount()
        return {
            "verdict": "hall-violation",
            "reasons": ["matching-deficient"],
            "evidence": "window-proof",
            "certificate": {"K_size": k, "neighborhood_size": n, "window_size": len(window),
                            "K": sorted([_label_json(space.label(x)), s] for x, s in res.K)},
        }
    return {
        "verdict": "paradox-certificate",
        "reasons": ["perfect-matching"],
        "evidence": "window-proof",
        "certificate": {
            "window_size": len(window),
            "valid": res.is_valid(),
            "t_plus": sorted([_label_json(space.label(x)), _label_json(space.label(y))] for x, y in res.t_plus.items()),
            "t_minus": sorted([_label_json(space.label(x)), _label_json(space.label(y))] for x, y in res.t_minus.items()),
        },
    }


def _graph(args, inp: Inputs) -> lpa.DirectedGraph:
    return lpa.DirectedGraph.from_json(inp.load(args.graph, "graph"))


def cmd_lpa_classify(args, inp: Inputs) -> dict:
    E = _graph(args, inp)
    cls = lpa.classify(E, witnesses=args.witnesses)
    out = cls.to_json()
    report = {"verdict": out["verdict"], "reasons": out["reasons"], "evidence": "proof",
              "certificate": {"H": out["H"]}, "notes": out["notes"]}
    if args.witnesses:
        report["certificate"]["witnesses"] = out["witnesses"]
    return report


def cmd_lpa_folner_witness(args, inp: Inputs) -> dict:
    E = _graph(args, inp)
    cls = lpa.classify(E, witnesses=False)
    alg = lpa.leavitt_algebra(E, args.field_obj)
    F = [lpa.parse_element(alg, s) for s in args.elements]
    w = lpa.folner_witness(E, cls, F, args.epsilon, args.N)
    return {
        "verdict": "folner-subspace" if w.ok else "construction-failed",
        "reasons": [w.case],
        "evidence": "proof",
        "certificate": {
            "dim": w.dim,
            "N": w.N,
            "epsilon": w.epsilon,
            "ratios": w.ratios,
            "bound": w.bound,
            "bound_dominates": w.bound_dominates,
            "params": w.params,
        },
    }


def cmd_lpa_mul(args, inp: Inputs) -> dict:
    E = _graph(args, inp)
    alg = lpa.leavitt_algebra(E, args.field_obj)
    a, b = lpa.parse_element(alg, args.lhs), lpa.parse_element(alg, args.rhs)
    prod = a * b
    return {"verdict": "computed", "reasons": ["normal-form"], "evidence": "proof",
            "certificate": {"lhs": _element_json(a), "rhs": _element_json(b), "product": _element_json(prod),
                            "text": prod.format()}}


def _testers(obj, space: MetricSpace, window: Window, field) -> list:
    out = []
    for t in obj:
        if t.get("kind") == "projector":
            pts = [space.point(_label(p)) for p in t["set"]]
            out.append(transalg.projector(window, pts, field))
        elif t.get("kind") == "translation":
            pairs = [(space.point(_label(a)), space.point(_label(b))) for a, b in t["map"]]
            pairs = [(x, y) for x, y in pairs if x in window and y in window]
            out.append(transalg.from_partial_translation(window, translation.PartialTranslation(pairs), field))
        else:
            raise ValidationFailed(f"unknown tester kind {t.get('kind')!r}")
    return out


def cmd_transalg_verify(args, inp: Inputs) -> dict:
    space = space_from_json(inp.load(args.space, "space"))
    F = [space.point(_label(p)) for p in inp.load(args.set)]
    window = Window(space, neighborhood(space, F, args.radius))
    testers = _testers(inp.load(args.testers), space, window, args.field_obj)
    cert = transalg.folner_subspace_from_set(window, F, testers, args.radius)
    comm = [transalg.commutator_check(T, F, args.radius).ok for T in testers]
    return {
        "verdict": "bound-holds" if cert.ok and all(comm) else "bound-fails",
        "reasons": ["support-count"],
        "evidence": "window-proof",
        "certificate": {"dim_W": cert.dim, "ratios": cert.ratios, "bound": cert.bound,
                        "commutator_identity": comm, "window_size": len(window)},
    }


def cmd_transalg_bridge(args, inp: Inputs) -> dict:
    obj = inp.load(args.paradox)
    space = space_from_json(obj["space"])
    window = base_window(space, parse_distance(obj["window_radius"]))
    if obj.get("decomposition") == "first_letter":
        dec = translation.free_group_decomposition(space, window)
    else:
        tp = translation.PartialTranslation([(space.point(_label(a)), space.point(_label(b))) for a, b in obj["t_plus"]])
        tm = translation.PartialTranslation([(space.point(_label(a)), space.point(_label(b))) for a, b in obj["t_minus"]])
        dec = translation.ParadoxicalDecomposition(frozenset(), frozenset(), tp, tm)
    rep = transalg.leavitt_relations_from_paradox(dec, window, args.field_obj)
    return {
        "verdict": "relations-hold" if rep.ok else "relations-fail",
        "reasons": rep.failing or ([rep.reason] if rep.reason else ["all-relations"]),
        "evidence": "window-proof",
        "certificate": {"margin": rep.margin, "inner_size": len(rep.inner), "window_size": len(window)},
    }


def cmd_fixtures(args, inp: Inputs) -> dict:
    if args.list:
        return {"verdict": "listed", "reasons": [], "evidence": "proof", "certificate": {"names": fixture_names()}}
    if not args.name:
        raise ValidationFailed("give a fixture name or --list")
    path = write_fixture(args.name, args.out_dir)
    inp.digests.append(hashlib.sha256(path.read_bytes()).hexdigest())
    return {"verdict": "written", "reasons": [args.name], "evidence": "proof", "certificate": {"path": str(path)}}


def cmd_oracle_ball_sizes(args, inp: Inputs) -> dict:
    sizes = [oracle.ball_size(args.kind, args.param, r) for r in range(args.radius + 1)]
    return {"verdict": str(sizes[-1]), "reasons": ["enumeration"], "evidence": "proof",
            "certificate": {"sizes": sizes}}


def cmd_oracle_folner_scan(args, inp: Inputs) -> dict:
    obj = inp.load(args.space, "space")
    pts, dist = oracle.finite_universe(obj)
    S, ratio = oracle.folner_scan(pts, pts, dist, args.radius)
    labels = obj.get("vertices") or obj.get("labels") or pts
    return {"verdict": "found" if ratio <= args.epsilon else "none", "reasons": ["all-subsets"],
            "evidence": "window-proof",
            "certificate": {"F": sorted(labels[i] for i in S), "ratio": ratio, "epsilon": args.epsilon}}


def cmd_oracle_matching(args, inp: Inputs) -> dict:
    if args.kind == "grid":
        window = oracle.grid_ball(args.param, args.radius)
        universe = oracle.grid_ball(args.param, args.radius + int(args.R))
        dist = oracle.grid_dist
    else:
        window = oracle.free_ball(args.param, args.radius)
        universe = oracle.free_ball(args.param, args.radius + int(args.R))
        dist = oracle.free_dist
    ok = oracle.paradox_feasible(window, dist, args.R, universe)
    return {"verdict": "feasible" if ok else "infeasible", "reasons": ["augmenting-paths"], "evidence": "window-proof",
            "certificate": {"window_size": len(window)}}


def cmd_oracle_lpa_mul(args, inp: Inputs) -> dict:
    E = _graph(args, inp)
    res = oracle.lpa_mul_agreement(E, args.trials, args.degree, args.seed, args.orders)
    return {"verdict": "agree" if res["ok"] else "disagree", "reasons": ["naive-rewriting"], "evidence": "proof",
            "certificate": {"trials": res["trials"], "mismatches": len(res["mismatches"])}}


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="workbench", description=__doc__.splitlines()[0])
    p.add_argument("--field", default="rational", choices=["gf2", "gf7", "rational"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the report here instead of stdout")
    groups = p.add_subparsers(dest="group", required=True)

    sp = groups.add_parser("space").add_subparsers(dest="cmd", required=True)
    f = sp.add_parser("folner")
    f.add_argument("--space", required=True)
    f.add_argument("--radius", type=_distance, default=1)
    f.add_argument("--epsilon", type=_rational, required=True)
    f.add_argument("--strategy", choices=folner.STRATEGIES, default="balls")
    f.add_argument("--window-radius")
    f.add_argument("--limit", type=int, default=folner.EXHAUSTIVE_LIMIT)
    f.add_argument("--components", action="store_true")
    f.set_defaults(func=cmd_space_folner)
    f = sp.add_parser("paradox")
    f.add_argument("--space", required=True)
    f.add_argument("--radius", type=_distance, default=1)
    f.add_argument("--window-radius")
    f.set_defaults(func=cmd_space_paradox)

    lp = groups.add_parser("lpa").add_subparsers(dest="cmd", required=True)
    f = lp.add_parser("classify")
    f.add_argument("--graph", required=True)
    f.add_argument("--witnesses", action="store_true")
    f.set_defaults(func=cmd_lpa_classify)
    f = lp.add_parser("folner-witness")
    f.add_argument("--graph", required=True)
    f.add_argument("--elements", nargs="+", required=True)
    f.add_argument("--epsilon", type=_rational, required=True)
    f.add_argument("--N", type=int, default=1)
    f.set_defaults(func=cmd_lpa_folner_witness)
    f = lp.add_parser("mul")
    f.add_argument("--graph", required=True)
    f.add_argument("--lhs", required=True)
    f.add_argument("--rhs", required=True)
    f.set_defaults(func=cmd_lpa_mul)

    ta = groups.add_parser("transalg").add_subparsers(dest="cmd", required=True)
    f = ta.add_parser("verify")
    f.add_argument("--space", required=True)
    f.add_argument("--set", required=True)
    f.add_argument("--radius", type=_distance, default=1)
    f.add_argument("--testers", required=True)
    f.set_defaults(func=cmd_transalg_verify)
    f = ta.add_parser("bridge")
    f.add_argument("--paradox", required=True)
    f.set_defaults(func=cmd_transalg_bridge)

    f = groups.add_parser("fixtures")
    f.add_argument("name", nargs="?")
    f.add_argument("--out-dir", default=".")
    f.add_argument("--list", action="store_true")
    f.set_defaults(func=cmd_fixtures, cmd=None)

    orc = groups.add_parser("oracle").add_subparsers(dest="cmd", required=True)
    f = orc.add_parser("ball-sizes")
    f.add_argument("--kind", choices=["grid", "free"], required=True)
    f.add_argument("--param", type=int, default=2, help="dimension or rank")
    f.add_argument("--radius", type=int, required=True)
    f.set_defaults(func=cmd_oracle_ball_sizes)
    f = orc.add_parser("folner-scan")
    f.add_argument("--space", required=True)
    f.add_argument("--radius", type=_distance, default=1)
    f.add_argument("--epsilon", type=_rational, required=True)
    f.set_defaults(func=cmd_oracle_folner_scan)
    f = orc.add_parser("matching")
    f.add_argument("--kind", choices=["grid", "free"], required=True)
    f.add_argument("--param", type=int, default=2)
    f.add_argument("--radius", type=int, required=True)
    f.add_argument("--R", type=_distance, default=1)
    f.set_defaults(func=cmd_oracle_matching)
    f = orc.add_parser("lpa-mul")
    f.add_argument("--graph", required=True)
    f.add_argument("--trials", type=int, default=1000)
    f.add_argument("--degree", type=int, default=5)
    f.add_argument("--orders", type=int, default=1)
    f.set_defaults(func=cmd_oracle_lpa_mul)
    return p


def _arguments(args) -> dict:
    skip = {"func", "field_obj", "out", "group", "cmd"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    """Parse argv, run the command, return (exit code, report)."""
    return _run(build_parser().parse_args(argv))


def _run(args) -> tuple[int, dict]:
    args.field_obj = field_from_name(args.field)
    inp = Inputs()
    command = " ".join(x for x in (args.group, args.cmd) if x)
    base = {"command": command, "arguments": _jsonable(_arguments(args)), "field": args.field_obj.name}
    try:
        body = args.func(args, inp)
        code = EXIT_OK
    except Inconclusive as exc:
        body = exc.report
        code = EXIT_INCONCLUSIVE
    except (WorkbenchError, OSError, KeyError, ValueError) as exc:
        return EXIT_ERROR, {**base, "error": f"{type(exc).__name__}: {exc}"}
    digest_src = json.dumps({"arguments": base["arguments"], "files": inp.digests}, sort_keys=True)
    report = {**base, "inputs_digest": hashlib.sha256(digest_src.encode()).hexdigest(), "notes": []}
    report.update(_jsonable(body))
    return code, report


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return EXIT_ERROR if exc.code else EXIT_OK
    code, report = _run(args)
    if "error" in report:
        print(f"error: {report['error']}", file=sys.stderr)
        return code
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"{report['command']}: {report['verdict']} ({report['evidence']})", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
