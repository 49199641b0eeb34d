"""Command-line front end.

Every command produces a report (a plain dict) that is printed either as
JSON or as aligned text.  Errors map onto exit codes: 2 for parse errors,
3 for mathematical domain errors, 4 when a verdict is Unknown.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .birmap import (
    BirMap,
    from_affine,
    compose,
    degree_sequence,
    identity,
    indeterminacy_points,
    linear_map,
    monomial_map,
    sigma2,
    verify_inverse,
)
from .config import DEFAULT, Config
from .errors import CremonaError, MathDomainError, NotInverse, ParseError, UnknownVerdict
from .fareycircle import (
    BoundaryCycleGraph,
    Frac,
    PiecewiseCircleMap,
    farey_level,
    matrix_for_interval_pair,
    monomial_boundary_action,
    simulate_label_action,
)
from .exactmath import MultiPoly
from .formula import parse_curve, parse_map
from .geometry import P1xP1, P2, CurveOnX, ambient_named
from .hyptilde import commensuration_defect, defect_growth, orbit_trace
from .jonquieres import JonqMap, transfix_verdict

BUILTINS = {"sigma2": lambda: sigma2(), "id": lambda: identity(P2)}


# ---------------------------------------------------------------------------
# sessions


class Session:
    """Named maps and curves plus configuration, persisted as one JSON file."""

    def __init__(self, path=None):
        self.path = Path(path) if path else None
        self.maps: dict[str, dict] = {}
        self.curves: dict[str, dict] = {}
        self.config: dict = {}
        if self.path and self.path.exists():
            data = json.loads(self.path.read_text())
            self.maps = data.get("maps", {})
            self.curves = data.get("curves", {})
            self.config = data.get("config", {})

    def to_json(self) -> str:
        data = {"version": 1, "config": self.config,
                "maps": dict(sorted(self.maps.items())), "curves": dict(sorted(self.curves.items()))}
        return json.dumps(data, indent=2) + "\n"

    def save(self):
        if self.path is None:
            raise MathDomainError("no --session file given; nothing to save")
        self.path.write_text(self.to_json())


# ---------------------------------------------------------------------------
# resolving arguments


def _transport(f: BirMap, target) -> BirMap:
    """The same affine formula read on the other surface."""
    if f.ambient is target:
        return f
    v = dict(zip(target.variables, MultiPoly.gens(target.variables)))
    if target is P1xP1:
        sub = {"x0": v["x0"] * v["y1"], "x1": v["y0"] * v["x1"], "x2": v["x1"] * v["y1"]}
        F0, F1, F2 = (F.subs(sub) for F in f.parts[0])
        return from_affine(target, [(F0, F2), (F1, F2)])
    sub = {"x0": v["x0"], "x1": v["x2"], "y0": v["x1"], "y1": v["x2"]}
    (G0, G1), (H0, H1) = ([F.subs(sub) for F in grp] for grp in f.parts)
    return from_affine(target, [(G0, G1), (H0, H1)])


def _candidates(f: BirMap, config: Config):
    """Inverses suggested by the family f belongs to (uncertified)."""
    amb = f.ambient
    if amb is P2 and f.degree == 1:
        M = [[F.coefficient(tuple(int(i == j) for i in range(3))) for j in range(3)] for F in f.parts[0]]
        yield lambda: linear_map(M).inverse
    mono = _monomial_matrix(f)
    if mono is not None:
        yield lambda: monomial_map(mono, amb).inverse
    def jonq():
        h = JonqMap.from_birmap(_transport(f, P1xP1)).to_birmap(config)
        return _transport(h.inverse, amb)
    yield jonq
    yield lambda: f


def _attach_inverse(f: BirMap, config: Config) -> bool:
    if f.inverse is not None:
        return True
    for make in _candidates(f, config):
        try:
            verify_inverse(f, make(), config)
            return True
        except MathDomainError:
            continue
    return False


def _monomial_matrix(f: BirMap):
    if any(len(F) != 1 for F in f.components):
        return None
    exps = [next(iter(F.terms())) for F in f.components]
    if f.ambient is P2:
        e0, e1, e2 = exps
        return [[e0[0] - e2[0], e0[1] - e2[1]], [e1[0] - e2[0], e1[1] - e2[1]]]
    x0, x1, y0, y1 = exps
    return [[x0[0] - x1[0], x0[2] - x1[2]], [y0[0] - y1[0], y0[2] - y1[2]]]


def resolve_map(text: str, session: Session, config: Config, inverse: str | None = None,
                ambient=None, need_inverse: bool = True) -> BirMap:
    if text in session.maps:
        f = BirMap.from_record(session.maps[text], config)
    elif text in BUILTINS:
        f = BUILTINS[text]()
    else:
        f = parse_map(text, config, ambient=ambient)
    if inverse is not None:
        g = parse_map(inverse, config, ambient=f.ambient)
        verify_inverse(f, g, config)
    elif not _attach_inverse(f, config) and need_inverse:
        raise NotInverse(f"no inverse known for {f}; pass one with --inverse")
    return f


def resolve_curve(text: str, session: Session, ambient) -> CurveOnX:
    if text in session.curves:
        rec = session.curves[text]
        amb = ambient_named(rec["ambient"])
        if amb != ambient:
            raise MathDomainError(f"curve {text!r} lives on {amb}, not {ambient}")
        return parse_curve("{" + rec["equation"] + "}", amb)
    return parse_curve(text, ambient)


def _ints(text: str, n: int) -> list[int]:
    vals = [int(v) for v in re.findall(r"-?\d+", text)]
    if len(vals) != n:
        raise ParseError(f"expected {n} integers in {text!r}")
    return vals


def _matrix(text: str):
    a, b, c, d = _ints(text, 4)
    return ((a, b), (c, d))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None


# ---------------------------------------------------------------------------
# rendering helpers


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


def _points(pts):
    return [str(p) for p in pts]


def _pairs(pairs):
    return [{"curve": str(C), "image": str(p)} for C, p in pairs]


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args, session, config):
    f = resolve_map(args.map, session, config, args.inverse)
    g = f.inverse
    return {
        "map": str(f),
        "ambient": f.ambient.name,
        "degree": _jsonable(f.degree),
        "inverse": str(g),
        "jacobian": str(f.jacobian),
        "indeterminacy": _points(indeterminacy_points(f, config)),
        "indeterminacy_inverse": _points(indeterminacy_points(g, config)),
        "contracted": _pairs(f.contracted),
        "contracted_inverse": _pairs(g.contracted),
        "exc": [len(f.contracted), len(g.contracted)],
        "defect": commensuration_defect(f),
    }


def cmd_compose(args, session, config):
    f = resolve_map(args.f, session, config, args.inverse_f)
    g = resolve_map(args.g, session, config, args.inverse_g, ambient=f.ambient)
    h = compose(f, g, config)
    return {"f": str(f), "g": str(g), "composite": str(h), "degree": _jsonable(h.degree),
            "inverse": str(h.inverse)}


def cmd_iterate(args, session, config):
    f = resolve_map(args.map, session, config, args.inverse)
    return {"map": str(f), "n": args.n, "degrees": _jsonable(degree_sequence(f, args.n, config))}


def cmd_orbit(args, session, config):
    f = resolve_map(args.map, session, config, args.inverse)
    C = resolve_curve(args.curve, session, f.ambient)
    tr = orbit_trace(f, C, args.back, args.fwd, config)
    return {"map": str(f), "curve": str(C), "entries": tr.to_record(), "status": tr.status}


def cmd_transfix(args, session, config):
    f = resolve_map(args.map, session, config, args.inverse, ambient=P1xP1, need_inverse=False)
    J = JonqMap.from_birmap(f)
    v = transfix_verdict(J, config.stability_n, config)
    return {"map": str(f), "base": str(J.base), "N": config.stability_n, "verdict": v.to_record()}


def cmd_length_growth(args, session, config):
    f = resolve_map(args.map, session, config, args.inverse)
    return {"map": str(f), "n": args.n, "lengths": defect_growth(f, args.n, config)}


def _action_table(h: PiecewiseCircleMap, level: int):
    return [{"x": str(x), "image": str(Frac.of(h(x.value)))} for x in farey_level(level)[:-1]]


def cmd_farey_act(args, session, config):
    pieces = []
    for spec in args.pieces:
        try:
            src, dst = spec.split("->")
            s0, s1 = (_fraction(t) for t in src.split(","))
            d0, d1 = (_fraction(t) for t in dst.split(","))
        except ValueError:
            raise ParseError(f"piece {spec!r} should look like 'a,b->c,d'") from None
        pieces.append((s0, s1, (d0, d1)))
    try:
        pieces = [(s0, s1, matrix_for_interval_pair((s0, s1), dst)) for s0, s1, dst in pieces]
        h = PiecewiseCircleMap.make("farey", pieces)
    except ValueError as err:
        raise MathDomainError(str(err)) from None
    out = {"map": h.to_record(), "dyadic": h.to_dyadic().to_record(),
           "table": _action_table(h, args.level)}
    if args.points:
        out["points"] = [{"x": p, "image": str(Frac.of(h(_fraction(p))))} for p in args.points.split(",")]
    return out



def cmd_monomial_circle(args, session, config):
    if re.fullmatch(r"[\s\[\](),\-\d]+", args.map):
        M = _matrix(args.map)
    else:
        f = resolve_map(args.map, session, config, need_inverse=False)
        M = _monomial_matrix(f)
        if M is None:
            raise MathDomainError(f"{f} is not a monomial map")
        M = tuple(tuple(r) for r in M)
    h = monomial_boundary_action(M)
    return {"matrix": [list(r) for r in M], "farey": h.to_record(), "dyadic": h.to_dyadic().to_record(),
            "table": _action_table(h, args.level)}


def cmd_cycle_sim(args, session, config):
    G = BoundaryCycleGraph.p2_triangle() if args.start == "triangle" else BoundaryCycleGraph.square()
    levels = [G.to_record()]
    for _ in range(args.levels - 1):
        G = G.sweep()
        levels.append(G.to_record())
    out = {"start": args.start, "levels": levels}
    if args.matrix:
        M = _matrix(args.matrix)
        h = monomial_boundary_action(M)
        sim = simulate_label_action(M, args.levels)
        bad = [str(lab) for lab, img in sim.items() if img.value != h(lab.value)]
        out["check"] = {"matrix": [list(r) for r in M], "level": args.levels,
                        "labels": len(sim), "agree": not bad, "mismatches": bad}
    return out


def cmd_define_map(args, session, config):
    f = resolve_map(args.formula, session, config, args.inverse, need_inverse=False)
    session.maps[args.name] = f.to_record()
    session.save()
    return {"name": args.name, "map": str(f), "inverse": str(f.inverse) if f.inverse else None}


def cmd_define_curve(args, session, config):
    C = parse_curve(args.curve, ambient_named(args.on))
    session.curves[args.name] = C.to_record()
    session.save()
    return {"name": args.name, "curve": str(C), "ambient": C.ambient.name}


# ---------------------------------------------------------------------------
# text rendering


def _is_table(v):
    return isinstance(v, list) and bool(v) and all(isinstance(r, dict) for r in v)


def _render(key, val, indent, lines):
    pad = "  " * indent
    if _is_table(val) and any(_is_table(x) for r in val for x in r.values()):
        lines.append(f"{pad}{key}:")
        for r in val:
            head = ", ".join(f"{k}={_flat(x)}" for k, x in r.items() if not _is_table(x))
            lines.append(f"{pad}  [{head}]")
            for k, x in r.items():
                if _is_table(x):
                    _render(k, x, indent + 2, lines)
    elif _is_table(val):
        cols = list(val[0].keys())
        cells = [[_flat(r.get(c)) for c in cols] for r in val]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines.append(f"{pad}{key}:")
        lines.append(pad + "  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
        for row in cells:
            lines.append(pad + "  " + "  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())
    elif isinstance(val, dict):
        lines.append(f"{pad}{key}:")
        for k, x in val.items():
            _render(k, x, indent + 1, lines)
    else:
        lines.append(f"{pad}{key}: {_flat(val)}")


def render_text(result: dict) -> str:
    lines: list[str] = []
    for k, v in result.items():
        _render(k, v, 0, lines)
    return "\n".join(lines)


def _flat(v):
    if isinstance(v, list):
        return "[" + ", ".join(_flat(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_flat(x)}" for k, x in v.items()) + "}"
    return str(v)


# ---------------------------------------------------------------------------
# argument parsing


COMMANDS = {
    "analyze": cmd_analyze,
    "compose": cmd_compose,
    "iterate": cmd_iterate,
    "orbit": cmd_orbit,
    "transfix": cmd_transfix,
    "length-growth": cmd_length_growth,
    "farey-act": cmd_farey_act,
    "monomial-circle": cmd_monomial_circle,
    "cycle-sim": cmd_cycle_sim,
    "define-map": cmd_define_map,
    "define-curve": cmd_define_curve,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--format", choices=["text", "json"], default=S)
    common.add_argument("--seed", type=int, default=S)
    common.add_argument("--jet-depth", type=int, default=S, dest="jet_depth")
    common.add_argument("--stability-N", type=int, default=S, dest="stability_n")
    common.add_argument("--max-degree", type=int, default=S, dest="max_degree")
    common.add_argument("--session", default=S)

    p = argparse.ArgumentParser(prog="cremona", parents=[common],
                                description="Exact workbench for plane birational maps.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    a = add("analyze", "degree, base points, contracted curves and defect of a map")
    a.add_argument("map")
    a.add_argument("--inverse")

    a = add("compose", "compose two maps (f o g)")
    a.add_argument("f")
    a.add_argument("g")
    a.add_argument("--inverse-f")
    a.add_argument("--inverse-g")

    a = add("iterate", "degree sequence of the iterates")
    a.add_argument("map")
    a.add_argument("--n", type=int, default=6)
    a.add_argument("--inverse")

    a = add("orbit", "orbit of a curve, tagged concrete or virtual")
    a.add_argument("map")
    a.add_argument("curve")
    a.add_argument("--back", type=int, default=3)
    a.add_argument("--fwd", type=int, default=3)
    a.add_argument("--inverse")

    a = add("transfix", "transfixing verdict for a fibered map of P1xP1")
    a.add_argument("map")
    a.add_argument("--inverse")

    a = add("length-growth", "defect of the iterates f, f^2, ..., f^n")
    a.add_argument("map")
    a.add_argument("--n", type=int, default=8)
    a.add_argument("--inverse")

    a = add("farey-act", "piecewise circle map from interval pairs 'a,b->c,d'")
    a.add_argument("pieces", nargs="+")
    a.add_argument("--level", type=int, default=4)
    a.add_argument("--points")

    a = add("monomial-circle", "circle action of a monomial map or integer matrix")
    a.add_argument("map")
    a.add_argument("--level", type=int, default=4)

    a = add("cycle-sim", "boundary cycle blow-up tables")
    a.add_argument("--start", choices=["square", "triangle"], default="square")
    a.add_argument("--levels", type=int, default=3)
    a.add_argument("--matrix")

    a = add("define-map", "store a named map in the session")
    a.add_argument("name")
    a.add_argument("formula")
    a.add_argument("--inverse")

    a = add("define-curve", "store a named curve in the session")
    a.add_argument("name")
    a.add_argument("curve")
    a.add_argument("--on", default="P2")
    return p


def run(argv=None) -> tuple[int, str]:
    """Execute a command; return (exit code, rendered output)."""
    args = build_parser().parse_args(argv)
    fmt = getattr(args, "format", "text")
    session = Session(getattr(args, "session", None))
    knobs = dict(session.config)
    for key in ("seed", "jet_depth", "stability_n", "max_degree"):
        if hasattr(args, key):
            knobs[key] = getattr(args, key)
    config = DEFAULT.with_(**{k: v for k, v in knobs.items() if k in DEFAULT.__dataclass_fields__})
    if args.command.startswith("define") and session.path is not None:
        session.config = {k: getattr(config, k) for k in ("seed", "jet_depth", "stability_n", "max_degree")}
    report = {
        "command": args.command,
        "ok": True,
        "exit_code": 0,
        "config": {"seed": config.seed, "jet_depth": config.jet_depth,
                   "stability_N": config.stability_n, "max_degree": config.max_degree},
        "result": None,
        "error": None,
    }
    try:
        report["result"] = COMMANDS[args.command](args, session, config)
        if args.command == "transfix" and report["result"]["verdict"]["outcome"] == "Unknown":
            raise UnknownVerdict(report["result"]["verdict"]["note"])
    except CremonaError as err:
        report["ok"] = False
        report["exit_code"] = err.exit_code
        report["error"] = {"type": type(err).__name__, "message": str(err)}
    if fmt == "json":
        return report["exit_code"], json.dumps(report, indent=2)
    if report["result"] is not None:
        text = render_text(report["result"])
    else:
        text = ""
    if report["error"]:
        text = (text + "\n" if text else "") + f"error ({report['error']['type']}): {report['error']['message']}"
    return report["exit_code"], text


def main(argv=None) -> int:
    code, out = run(argv)
    stream = sys.stdout if code in (0, 4) else sys.stderr
    print(out, file=stream)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
