"""Command-line front end.

Workspace CSV layout: ``outcome_id, base_prob``, then one column per scenario
measure and one ``pos:<name>`` column per position. The optional specs file is
JSON with ``measures`` and ``combinations`` maps.

Exit codes: 0 when every check passed, 1 when a check failed, 2 for usage or
data errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .combinators import (
    F_AXIOMS,
    RHO_AXIOMS,
    CombinationSpec,
    Composed,
    check_f_axiom,
    check_rho_axiom,
)
from .duality import composed_dual_check
from .elicit import ScoringFunction, elicit, elicit_numeric, worst_case_elicitation
from .kusuoka import law_invariant_composed_check
from .measures import RiskMeasureSpec, SpecError, describe, evaluate
from .orders import OrderKind, dominates
from .prob_core import FiniteProbSpace, Position, ScenarioMeasure
from .reporting import plain
from . import suite

log = logging.getLogger("riskcomb")

RENORM_TOL = 1e-9
COMMANDS = ("eval", "combine", "dual-check", "axioms", "dominance", "elicit",
            "kusuoka-check", "report")


class WorkspaceError(ValueError):
    """Malformed workspace or specs file."""


@dataclass
class CombinationEntry:
    f: CombinationSpec
    measures: list = field(default_factory=list)
    scenarios: list = field(default_factory=list)


@dataclass
class Workspace:
    space: FiniteProbSpace
    scenarios: dict
    positions: dict
    measure_specs: dict = field(default_factory=dict)
    combination_specs: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def scenario(self, name: str) -> ScenarioMeasure:
        try:
            return self.scenarios[name]
        except KeyError:
            raise WorkspaceError(f"unknown scenario {name!r}; have {sorted(self.scenarios)}") from None

    def position(self, name: str) -> Position:
        try:
            return self.positions[name]
        except KeyError:
            raise WorkspaceError(f"unknown position {name!r}; have {list(self.positions)}") from None

    def measure(self, text: str) -> RiskMeasureSpec:
        if text in self.measure_specs:
            return self.measure_specs[text]
        if text.lstrip().startswith("{"):
            return RiskMeasureSpec.from_dict(json.loads(text))
        return RiskMeasureSpec.parse(text)

    def position_names(self, text: str | None) -> list:
        if not text or text == "all":
            return list(self.positions)
        return [p.strip() for p in text.split(",") if p.strip()]


@dataclass
class RunConfig:
    command: str
    workspace: str | None = None
    specs: str | None = None
    seed: int = 0
    tol: float | None = None
    out: str | None = None
    format: str = "table"
    options: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# loading

def _number(text: str, row: int, col: str) -> float:
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise WorkspaceError(f"row {row}, field {col!r}: {text!r} is not a number") from None
    if not math.isfinite(v):
        raise WorkspaceError(f"row {row}, field {col!r}: value must be finite")
    return v


def _normalized(name: str, probs: list, warnings: list) -> list:
    if any(p < 0 for p in probs):
        raise WorkspaceError(f"column {name!r}: negative probability")
    total = math.fsum(probs)
    if abs(total - 1) > RENORM_TOL:
        raise WorkspaceError(f"column {name!r}: probabilities sum to {total!r}, not 1")
    if total != 1:
        msg = f"column {name!r}: sum {total!r} renormalized to 1"
        log.warning(msg)
        warnings.append(msg)
        probs = [p / total for p in probs]
    return probs


def _combination_entry(name: str, d) -> CombinationEntry:
    if not isinstance(d, dict):
        raise WorkspaceError(f"combination {name!r} must be an object")
    f = CombinationSpec.from_dict(d)
    return CombinationEntry(f, list(d.get("measures", [])), list(d.get("scenarios", [])))


def load_specs(path: str | Path, ws: Workspace) -> None:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise WorkspaceError(f"{path}: line {e.lineno}: {e.msg}") from None
    for name, spec in data.get("measures", {}).items():
        try:
            ws.measure_specs[name] = (RiskMeasureSpec.parse(spec) if isinstance(spec, str)
                                      else RiskMeasureSpec.from_dict(spec))
        except (SpecError, KeyError, TypeError) as e:
            raise WorkspaceError(f"{path}: measure {name!r}: {e}") from None
    for name, d in data.get("combinations", {}).items():
        try:
            ws.combination_specs[name] = _combination_entry(name, d)
        except (SpecError, KeyError, TypeError) as e:
            raise WorkspaceError(f"{path}: combination {name!r}: {e}") from None


def load_workspace(csv_path: str | Path, specs_path: str | Path | None = None) -> Workspace:
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for required in ("outcome_id", "base_prob"):
            if required not in header:
                raise WorkspaceError(f"{csv_path}: missing column {required!r}")
        pos_cols = [c for c in header if c.startswith("pos:")]
        scen_cols = [c for c in header if c not in ("outcome_id", "base_prob") and c not in pos_cols]
        if "base" in scen_cols:
            raise WorkspaceError("'base' is reserved for the base_prob column")
        ids, base = [], []
        scen = {c: [] for c in scen_cols}
        pos = {c[4:]: [] for c in pos_cols}
        for i, row in enumerate(reader, start=2):
            if None in row or any(v is None for v in row.values()):
                raise WorkspaceError(f"row {i}: expected {len(header)} fields")
            oid = row["outcome_id"].strip()
            if not oid:
                raise WorkspaceError(f"row {i}, field 'outcome_id': empty")
            if oid in ids:
                raise WorkspaceError(f"row {i}: duplicate outcome_id {oid!r}")
            ids.append(oid)
            base.append(_number(row["base_prob"], i, "base_prob"))
            for c in scen_cols:
                scen[c].append(_number(row[c], i, c))
            for c in pos_cols:
                pos[c[4:]].append(_number(row[c], i, c))
    if not ids:
        raise WorkspaceError(f"{csv_path}: no outcome rows")
    warnings: list = []
    space = FiniteProbSpace(tuple(ids), tuple(_normalized("base_prob", base, warnings)))
    scenarios = {"base": space.base}
    for c in scen_cols:
        try:
            scenarios[c] = space.scenario(_normalized(c, scen[c], warnings))
        except ValueError as e:
            raise WorkspaceError(f"column {c!r}: {e}") from None
    positions = {name: space.position(v) for name, v in pos.items()}
    ws = Workspace(space, scenarios, positions, warnings=warnings)
    if specs_path:
        load_specs(specs_path, ws)
    return ws


def canonical_workspace() -> Workspace:
    """Four equally likely outcomes, one alternative scenario and one position."""
    space = suite.canonical_space()
    return Workspace(space, {"base": space.base, "q2": suite.canonical_q2(space)},
                     {"X": suite.canonical_position(space)})


# --------------------------------------------------------------------------
# commands

def _combination(ws: Workspace, opts: dict) -> tuple:
    text = opts.get("combine")
    if not text:
        raise WorkspaceError("--combine is required")
    if text in ws.combination_specs:
        entry = ws.combination_specs[text]
    elif Path(text).suffix == ".json" or Path(text).is_file():
        try:
            entry = _combination_entry(text, json.loads(Path(text).read_text()))
        except OSError as e:
            raise WorkspaceError(str(e)) from None
    else:
        kind, _, arg = text.partition(":")
        d = {"kind": kind}
        if arg:
            d["weights"] = [float(w) for w in arg.split(",")]
        entry = _combination_entry(text, d)
    measures = opts.get("measures")
    measures = measures.split(",") if measures else entry.measures
    scen = opts.get("scenarios")
    scen = scen.split(",") if scen else (entry.scenarios or ["base"])
    if not measures:
        raise WorkspaceError("no component measures: pass --measures or list them in the specs file")
    specs = [ws.measure(m.strip()) for m in measures]
    scenarios = [ws.scenario(s.strip()) for s in scen]
    return entry.f, specs, scenarios


def cmd_eval(ws: Workspace, cfg: RunConfig):
    o = cfg.options
    spec = ws.measure(o["measure"])
    rows = []
    for name in ws.position_names(o.get("position")):
        for s in (o.get("scenario") or "base").split(","):
            v = evaluate(spec, ws.position(name), ws.scenario(s))
            rows.append({"measure": describe(spec), "position": name, "scenario": s, "value": v})
    return {"results": rows}, True, rows


def cmd_combine(ws: Workspace, cfg: RunConfig):
    f, specs, scen = _combination(ws, cfg.options)
    rho = Composed.build(f, specs, scen)
    rows = []
    for name in ws.position_names(cfg.options.get("positions")):
        X = ws.position(name)
        rows.append({"position": name, "profile": list(rho.profile(X).entries), "value": rho(X)})
    return {"combination": f.to_dict(), "results": rows}, True, rows


def cmd_dual_check(ws: Workspace, cfg: RunConfig):
    f, specs, scen = _combination(ws, cfg.options)
    tol = cfg.tol if cfg.tol is not None else 1e-8
    rows, full = [], []
    for name in ws.position_names(cfg.options.get("positions")):
        rep = composed_dual_check(f, specs, scen, ws.position(name), tol=tol)
        d = rep.details
        full.append({"position": name, "passed": rep.passed, **d})
        rows.append({"position": name, "lhs": d["lhs"], "rhs": d["rhs"], "gap": d["gap"],
                     "passed": rep.passed})
    ok = all(r["passed"] for r in rows)
    return {"combination": f.to_dict(), "tol": tol, "results": full}, ok, rows


def cmd_axioms(ws: Workspace, cfg: RunConfig):
    o = cfg.options
    f, specs, scen = _combination(ws, o)
    trials = int(o.get("trials") or 10_000)
    tol = cfg.tol if cfg.tol is not None else 1e-9
    level = o.get("level") or "rho"
    names = F_AXIOMS if level == "f" else RHO_AXIOMS
    wanted = names if not o.get("axioms") or o["axioms"] == "all" else o["axioms"].split(",")
    rows, full = [], []
    rho = Composed.build(f, specs, scen)
    for ax in wanted:
        if ax not in names:
            raise WorkspaceError(f"unknown axiom {ax!r}; choose from {', '.join(names)}")
        if level == "f":
            rep = check_f_axiom(f, ax, seed=cfg.seed, trials=trials, dim=len(rho.components), tol=tol)
        else:
            rep = check_rho_axiom(rho, ax, seed=cfg.seed, trials=trials, tol=tol)
        full.append(rep.to_dict())
        rows.append({"axiom": ax, "passed": rep.passed, "trials": rep.trials})
    ok = all(r["passed"] for r in rows)
    return {"combination": f.to_dict(), "level": level, "seed": cfg.seed, "results": full}, ok, rows


def cmd_dominance(ws: Workspace, cfg: RunConfig):
    o = cfg.options
    names = ws.position_names(o.get("positions"))
    if len(names) != 2:
        raise WorkspaceError("--positions must name exactly two positions")
    kind = OrderKind.parse(o.get("order") or "1")
    scen = [ws.scenario(s) for s in (o.get("scenarios") or "base").split(",")]
    res = dominates(ws.position(names[0]), ws.position(names[1]), kind, scen)
    row = {"X": names[0], "Y": names[1], "degree": kind.degree, "scope": kind.scope,
           "holds": res.holds, "witness_level": res.level, "witness_scenario": res.scenario}
    return row, True, [row]


def cmd_elicit(ws: Workspace, cfg: RunConfig):
    o = cfg.options
    S = ScoringFunction.parse(o.get("scoring") or "squared")
    X = ws.position(o["position"])
    names = (o.get("scenarios") or "base").split(",")
    scen = [ws.scenario(s) for s in names]
    res = float(o["resolution"]) if o.get("resolution") else None
    if len(scen) == 1:
        closed, numeric = elicit(S, X, scen[0]), elicit_numeric(S, X, scen[0], res)
        row = {"scoring": S.kind, "position": o["position"], "scenario": names[0],
               "value": closed, "numeric": numeric}
        return row, True, [row]
    wc = worst_case_elicitation(S, X, scen, res)
    row = {"scoring": S.kind, "position": o["position"], "scenarios": names, **wc.to_dict()}
    return row, wc.agrees, [row]


def cmd_kusuoka(ws: Workspace, cfg: RunConfig):
    f, specs, scen = _combination(ws, cfg.options)
    tol = cfg.tol if cfg.tol is not None else 1e-10
    rows, full = [], []
    for name in ws.position_names(cfg.options.get("positions")):
        rep = law_invariant_composed_check(f, specs, scen, ws.position(name), tol=tol)
        d = rep.details
        full.append({"position": name, "passed": rep.passed, **d})
        rows.append({"position": name, "lhs": d["lhs"], "rhs_admissible": d["rhs_admissible"],
                     "rhs_grid": d["rhs_grid"], "passed": rep.passed})
    return {"combination": f.to_dict(), "results": full}, all(r["passed"] for r in rows), rows


def cmd_report(ws: Workspace, cfg: RunConfig):
    X = ws.positions.get(cfg.options.get("position") or "X")
    results = suite.run_all(seed=cfg.seed, X=X)
    rows = [{"criterion": r.number, "title": r.title, "passed": r.passed} for r in results]
    doc = {"seed": cfg.seed, "criteria": [r.to_dict() for r in results]}
    return doc, all(r.passed for r in results), rows


HANDLERS = {
    "eval": cmd_eval, "combine": cmd_combine, "dual-check": cmd_dual_check,
    "axioms": cmd_axioms, "dominance": cmd_dominance, "elicit": cmd_elicit,
    "kusuoka-check": cmd_kusuoka, "report": cmd_report,
}


# --------------------------------------------------------------------------
# output

def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, list):
        return "[" + ", ".join(_cell(x) for x in v) + "]"
    return str(v)


def render_table(rows: list) -> str:
    rows = plain(rows)
    if not rows:
        return ""
    cols = list(rows[0])
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(r[k]) for r in cells)) for k, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in cells]
    return "\n".join(line.rstrip() for line in lines)


def render(payload: dict, rows: list, cfg: RunConfig, passed: bool) -> str:
    if cfg.format == "structured":
        doc = {"command": cfg.command, "passed": passed, **payload}
        return json.dumps(plain(doc), indent=2, ensure_ascii=False)
    return render_table(rows)


def run(cfg: RunConfig) -> int:
    try:
        if cfg.workspace:
            ws = load_workspace(cfg.workspace, cfg.specs)
        else:
            ws = canonical_workspace()
            if cfg.specs:
                load_specs(cfg.specs, ws)
        payload, passed, rows = HANDLERS[cfg.command](ws, cfg)
    except (WorkspaceError, SpecError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    text = render(payload, rows, cfg, passed)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workspace", help="outcome CSV (default: built-in 4-outcome example)")
    common.add_argument("--specs", help="JSON file with named measures and combinations")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float)
    common.add_argument("--out", help="write the output here instead of stdout")
    common.add_argument("--format", choices=("table", "structured"), default="table")

    p = argparse.ArgumentParser(prog="riskcomb", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate one measure")
    s.add_argument("--measure", required=True, help="name from --specs or e.g. ES:0.5")
    s.add_argument("--position", help="position name(s), comma separated, or 'all'")
    s.add_argument("--scenario", default="base")

    for name, help_ in (("combine", "evaluate a composed measure"),
                        ("dual-check", "compare a composed measure with its dual LP"),
                        ("kusuoka-check", "compare with the ES-mixture representation")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--combine", required=True,
                       help="name from --specs, a JSON file, or e.g. Mixture:0.5,0.5")
        s.add_argument("--measures")
        s.add_argument("--scenarios")
        s.add_argument("--positions", default="all")

    s = sub.add_parser("axioms", parents=[common], help="randomized axiom falsification")
    s.add_argument("--combine", required=True)
    s.add_argument("--measures")
    s.add_argument("--scenarios")
    s.add_argument("--axioms", default="all")
    s.add_argument("--level", choices=("rho", "f"), default="rho")
    s.add_argument("--trials", type=int, default=10_000)

    s = sub.add_parser("dominance", parents=[common], help="stochastic dominance between two positions")
    s.add_argument("--positions", required=True, help="X,Y")
    s.add_argument("--order", default="1", help="1, 2, 1:set or 2:set")
    s.add_argument("--scenarios", default="base")

    s = sub.add_parser("elicit", parents=[common], help="elicit EL or VaR, or the worst case")
    s.add_argument("--scoring", default="squared", help="squared or pinball:<alpha>")
    s.add_argument("--position", required=True)
    s.add_argument("--scenarios", default="base")
    s.add_argument("--resolution")

    s = sub.add_parser("report", parents=[common], help="run every acceptance check")
    s.add_argument("--position", default="X")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(args).items()
            if k not in ("command", "workspace", "specs", "seed", "tol", "out", "format")}
    cfg = RunConfig(args.command, args.workspace, args.specs, args.seed, args.tol,
                    args.out, args.format, opts)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
