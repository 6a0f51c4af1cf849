"""Command line front end.

    etree <command> --model FILE [--time T] [--mode exact|float]
                    [--out FILE] [--format text|json|dot]

Commands: validate, generate, reduce, partition, prob, saifi, export-dot.
Exit status is 0 on success, 1 when the model is invalid or evaluation
fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Any, Sequence

import jsonschema

from .errors import EventTreeError, ModelError
from .prob import EXACT, FLOAT, ProbabilityModel, exp_cdf, exp_reliability, prob_node
from .sample_space import OutcomeSpace, WorldModel, validate_space
from .saifi import CustomerGroup, failure_sum
from .transform import PartitionSpec, ReductionSpec, is_complete_cylinder, partition, reduce_many
from .tree import DOWN, UP, Atomic, AtomicEvent, Branch, Node, Path, fold_paths, generate, paths

SCHEMA_VERSION = "etree-model/1"
COMMANDS = ("validate", "generate", "reduce", "partition", "prob", "saifi", "export-dot")

MODEL_SCHEMA = {
    "type": "object",
    "required": ["schema", "components"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "mode": {"enum": [EXACT, FLOAT]},
        "time": {"type": "number", "minimum": 0},
        "components": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "states": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "object",
                            "required": ["name", "prob"],
                            "additionalProperties": False,
                            "properties": {
                                "name": {"type": "string", "minLength": 1},
                                "prob": {"type": ["number", "string"]},
                            },
                        },
                    },
                    "rate": {"type": "number", "minimum": 0},
                },
                "oneOf": [{"required": ["states"]}, {"required": ["rate"]}],
            },
        },
        "reductions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["indices", "conditional"],
                "additionalProperties": False,
                "properties": {
                    "indices": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "conditional": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "partitions": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        },
        "customer_groups": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "count", "partition"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "count": {"type": "integer", "minimum": 0},
                    "partition": {"type": "string"},
                },
            },
        },
        "reference_saifi": {"type": "number"},
    },
}


@dataclass
class ComponentSpec:
    id: str
    states: list[tuple[str, Any]] | None = None
    rate: float | None = None

    @property
    def state_names(self) -> list[str]:
        return [s for s, _ in self.states] if self.states is not None else [UP, DOWN]


@dataclass
class ModelFile:
    components: list[ComponentSpec]
    mode: str = EXACT
    time: float = 1.0
    reductions: list[ReductionSpec] = field(default_factory=list)
    partitions: dict[str, PartitionSpec] = field(default_factory=dict)
    customer_groups: list[CustomerGroup] = field(default_factory=list)
    reference_saifi: float | None = None

    @property
    def rated(self) -> bool:
        return any(c.rate is not None for c in self.components)

    def probability_model(self) -> ProbabilityModel:
        spaces, rates = [], {}
        for c in self.components:
            if c.rate is not None:
                rates[c.id] = c.rate
                probs = (exp_reliability(c.rate, self.time), exp_cdf(c.rate, self.time))
            else:
                probs = tuple(p if self.mode == EXACT else float(p) for _, p in c.states)
            spaces.append(OutcomeSpace(c.id, tuple(c.state_names), probs))
        return ProbabilityModel(WorldModel(tuple(spaces)), self.mode, rates or None,
                                self.time if rates else None)

    def levels(self) -> list[list[AtomicEvent]]:
        return [[AtomicEvent(c.id, s) for s in c.state_names] for c in self.components]

    def complete_paths(self) -> list[Path]:
        lv = self.levels()
        return paths(lv[:-1], lv[-1])

    def complete_tree(self) -> Node:
        lv = self.levels()
        return Node(generate(lv[:-1], lv[-1]))

    def reduced_paths(self) -> list[Path]:
        return reduce_many(self.complete_paths(), self.reductions)


def _pointer(parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def _parse_prob(raw, mode):
    if isinstance(raw, str):
        value = Fraction(raw.strip())
    else:
        value = Fraction(raw)
    return value if mode == EXACT else float(value)


def parse_model(text: str, *, mode: str | None = None, time: float | None = None) -> ModelFile:
    """Parse and fully validate a model document.

    ``mode`` and ``time`` override the values stored in the file. Raises
    :class:`ModelError` listing every problem found.
    """
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ModelError([("SyntaxError", "", f"line {exc.lineno} column {exc.colno}: {exc.msg}")]) from None

    validator = jsonschema.Draft202012Validator(MODEL_SCHEMA)
    issues = [("SchemaError", _pointer(e.absolute_path), e.message)
              for e in sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))]
    if issues:
        raise ModelError(issues)

    mode = mode or doc.get("mode", EXACT)
    t = float(time if time is not None else doc.get("time", 1))
    if t < 0:
        raise ModelError([("SemanticError", "/time", f"time must be >= 0, got {t}")])

    components, seen = [], set()
    for i, raw in enumerate(doc["components"]):
        where = f"/components/{i}"
        if raw["id"] in seen:
            issues.append(("SchemaError", where + "/id", f"duplicate component id {raw['id']!r}"))
            continue
        seen.add(raw["id"])
        if "rate" in raw:
            if mode == EXACT:
                issues.append(("SemanticError", where + "/rate",
                               "rated components need float mode (exp() is irrational)"))
            components.append(ComponentSpec(raw["id"], rate=float(raw["rate"])))
            continue
        states = []
        for k, s in enumerate(raw["states"]):
            try:
                states.append((s["name"], _parse_prob(s["prob"], mode)))
            except (ValueError, ZeroDivisionError):
                issues.append(("SemanticError", f"{where}/states/{k}/prob", f"not a probability: {s['prob']!r}"))
        if len(states) != len(raw["states"]):
            continue
        report = validate_space(OutcomeSpace(raw["id"], [s for s, _ in states], [p for _, p in states]))
        issues.extend(("SemanticError", where + "/states", f"{v.kind}: {v.message}") for v in report.violations)
        components.append(ComponentSpec(raw["id"], states=states))
    if issues:
        raise ModelError(issues)

    model = ModelFile(components, mode, t, reference_saifi=(
        float(doc["reference_saifi"]) if "reference_saifi" in doc else None))
    known = {(c.id, s) for c in components for s in c.state_names}

    length = 1
    for c in components:
        length *= len(c.state_names)
    for k, raw in enumerate(doc.get("reductions", [])):
        where = f"/reductions/{k}"
        ce = []
        for j, text_ev in enumerate(raw["conditional"]):
            try:
                ev = AtomicEvent.parse(text_ev)
            except ValueError as exc:
                issues.append(("SemanticError", f"{where}/conditional/{j}", str(exc)))
                continue
            if (ev.component, ev.state) not in known:
                issues.append(("SemanticError", f"{where}/conditional/{j}", f"unknown event {text_ev!r}"))
            ce.append(ev)
        spec = ReductionSpec(tuple(raw["indices"]), tuple(ce))
        try:
            spec.check(length)
        except EventTreeError as exc:
            issues.append(("SemanticError", where + "/indices", f"{exc.code}: {exc}"))
            continue
        model.reductions.append(spec)
        length = length - len(spec.indices) + 1

    for name, idx in doc.get("partitions", {}).items():
        bad = [i for i in idx if i >= length]
        if bad:
            issues.append(("SemanticError", _pointer(["partitions", name]),
                           f"IndexOutOfRange: {bad} beyond reduced list of {length} paths"))
        model.partitions[name] = PartitionSpec(tuple(idx))

    for k, raw in enumerate(doc.get("customer_groups", [])):
        if raw["partition"] not in model.partitions:
            issues.append(("SemanticError", f"/customer_groups/{k}/partition",
                           f"no partition named {raw['partition']!r}"))
            continue
        model.customer_groups.append(CustomerGroup(raw["name"], raw["count"], model.partitions[raw["partition"]]))

    if issues:
        raise ModelError(issues)
    return model


# -- DOT -------------------------------------------------------------------

def _label(event) -> str:
    if isinstance(event, Path):
        return " & ".join(map(str, event)) if len(event) else "(any)"
    return str(event)


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(tree) -> str:
    """Render a tree as a Graphviz digraph.

    Node ids follow a preorder walk, so identical trees give identical text.
    """
    lines = ["digraph eventtree {", "  rankdir=LR;", "  node [fontname=\"Helvetica\"];"]
    counter = 0

    def visit(t, parent):
        nonlocal counter
        nid = f"n{counter}"
        counter += 1
        if isinstance(t, Atomic):
            label = _label(t.event)
            lines.append(f"  {nid} [label={_quote(label)}, shape=box];")
        elif isinstance(t, Branch):
            label = str(t.label)
            lines.append(f"  {nid} [label={_quote(label)}, shape=ellipse];")
        else:
            label = ""
            lines.append(f"  {nid} [label=\"\", shape=circle, width=0.2];")
        if parent is not None:
            attr = f" [label={_quote(label)}]" if label else ""
            lines.append(f"  {parent} -> {nid}{attr};")
        for child in () if isinstance(t, Atomic) else t.children:
            visit(child, nid)

    visit(tree, None)
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- reports ---------------------------------------------------------------

def _num(x) -> str:
    return f"{float(x):.12g}"


def _json_num(x, exact: bool) -> dict | float:
    if exact:
        return {"value": float(x), "exact": str(Fraction(x))}
    return float(x)


def _path_rows(model: ProbabilityModel, ps: Sequence[Path]) -> list[tuple[int, Path, Any]]:
    return [(i, p, prob_node(model, [Atomic(p)])) for i, p in enumerate(ps)]


def _table(rows) -> list[str]:
    width = max([len(str(p)) for _, p, _ in rows] + [4])
    out = [f"{'index':>5}  {'path':<{width}}  probability"]
    out += [f"{i:>5}  {str(p):<{width}}  {_num(pr)}" for i, p, pr in rows]
    return out


def _rows_json(rows, exact):
    return [{"index": i, "events": [str(e) for e in p], "probability": _json_num(pr, exact)}
            for i, p, pr in rows]


def run(command: str, model: ModelFile, fmt: str = "text", tree: str = "reduced",
        warn=None) -> tuple[str, int]:
    """Execute ``command`` on a parsed model; returns ``(output, exit_code)``."""
    warn = warn or (lambda msg: None)
    pm = model.probability_model()
    exact = pm.exact
    result: dict[str, Any] = {"command": command, "mode": pm.mode}
    text: list[str] = []

    if command == "validate":
        reduced = model.reduced_paths()
        result.update(components=len(model.components), complete_paths=len(model.complete_paths()),
                      reduced_paths=len(reduced), status="ok")
        text.append(f"ok: {len(model.components)} components, {len(model.complete_paths())} complete paths, "
                    f"{len(reduced)} reduced paths")

    elif command in ("generate", "reduce"):
        if command == "generate":
            ps = model.complete_paths()
        else:
            ps = model.complete_paths()
            for k, spec in enumerate(model.reductions):
                if not spec.conditional:
                    warn(f"reduction #{k} has an empty conditional event list (full-space path)")
                elif not is_complete_cylinder(pm, ps, spec):
                    warn(f"reduction #{k}: paths {list(spec.indices)} do not form a complete cylinder "
                         f"for {_label(Path(spec.conditional))}")
                ps = reduce_many(ps, [spec])
        rows = _path_rows(pm, ps)
        result["paths"] = _rows_json(rows, exact)
        text += _table(rows)

    elif command == "partition":
        reduced = model.reduced_paths()
        result["partitions"] = {}
        for name, spec in model.partitions.items():
            rows = [(i, p, prob_node(pm, [Atomic(p)])) for i, p in zip(spec.indices, partition(spec, reduced))]
            result["partitions"][name] = _rows_json(rows, exact)
            text.append(f"partition {name}: {list(spec.indices)}")
            text += ["  " + line for line in _table(rows)]

    elif command == "prob":
        reduced = model.reduced_paths()
        total = prob_node(pm, [Atomic(p) for p in reduced])
        result["total"] = _json_num(total, exact)
        result["partitions"] = {}
        text.append(f"P(all {len(reduced)} paths) = {_num(total)}")
        for name, spec in model.partitions.items():
            p = prob_node(pm, [Atomic(q) for q in partition(spec, reduced)])
            result["partitions"][name] = _json_num(p, exact)
            text.append(f"P({name}) = {_num(p)}")

    elif command == "saifi":
        reduced = model.reduced_paths()
        groups = model.customer_groups
        customers = sum(g.count for g in groups)
        if customers <= 0:
            raise ModelError([("SemanticError", "/customer_groups", "SAIFI needs at least one customer")])
        if pm.rates:
            binding = ", ".join(f"{c}={r:g}" for c, r in pm.rates.items())
            text.append(f"binding: rates {binding}; t={model.time:g}")
            result["binding"] = {"rates": dict(pm.rates), "time": model.time}
        result["groups"] = {}
        for g in groups:
            p = prob_node(pm, [Atomic(q) for q in partition(g.partition, reduced)])
            result["groups"][g.name] = {"customers": g.count, "probability": _json_num(p, exact)}
            text.append(f"P({g.name}_fail) = {_num(p)}  customers = {g.count}")
        value = failure_sum(pm, reduced, groups) / customers
        result["saifi"] = _json_num(value, exact)
        text.append(f"SAIFI = {_num(value)}")
        if model.reference_saifi is not None:
            delta = float(value) - model.reference_saifi
            result["reference_saifi"] = model.reference_saifi
            result["delta_to_reference"] = delta
            text.append(f"reference = {_num(model.reference_saifi)}  delta = {delta:+.12g}")

    elif command == "export-dot":
        if tree == "complete":
            t = model.complete_tree()
        else:
            t = Node(fold_paths(model.reduced_paths()))
        dot = export_dot(t)
        if fmt == "json":
            return json.dumps({"command": command, "dot": dot}, indent=2, sort_keys=True) + "\n", 0
        return dot, 0

    else:
        raise ValueError(f"unknown command {command!r}")

    if fmt == "json":
        return json.dumps(result, indent=2, sort_keys=True) + "\n", 0
    return "\n".join(text) + "\n", 0


def _colorize(text: str, enabled: bool) -> str:
    if not enabled or not text:
        return text
    head, sep, rest = text.partition("\n")
    return f"\x1b[1m{head}\x1b[0m{sep}{rest}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="etree", description="Event-tree analysis.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--model", required=True, metavar="FILE", help="model file (JSON, etree-model/1)")
    parser.add_argument("--time", type=float, help="override the time horizon")
    parser.add_argument("--mode", choices=(EXACT, FLOAT), help="override the numeric mode")
    parser.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("text", "json", "dot"), default=None)
    parser.add_argument("--tree", choices=("reduced", "complete"), default="reduced",
                        help="which tree export-dot renders")
    return parser


def _error(code: str, message: str, pointer: str = "") -> None:
    where = f" {pointer}" if pointer else ""
    print(f"etree: error[{code}]{where}: {message}", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or ("dot" if args.command == "export-dot" else "text")
    if fmt == "dot" and args.command != "export-dot":
        parser.print_usage(sys.stderr)
        _error("UsageError", "--format dot is only valid for export-dot")
        return 2
    if args.time is not None and args.time < 0:
        _error("UsageError", "--time must be >= 0")
        return 2

    try:
        with open(args.model, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        _error("ReadError", str(exc))
        return 1

    def warn(msg):
        print(f"etree: warning: {msg}", file=sys.stderr)

    try:
        model = parse_model(text, mode=args.mode, time=args.time)
        output, status = run(args.command, model, fmt, args.tree, warn)
    except ModelError as exc:
        for code, pointer, message in exc.issues:
            _error(code, message, pointer or "/")
        return 1
    except EventTreeError as exc:
        _error(exc.code, str(exc))
        return 1

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(output)
    else:
        mode = os.environ.get("ETREE_COLOR", "auto")
        color = fmt == "text" and (mode == "always" or (mode == "auto" and sys.stdout.isatty()))
        sys.stdout.write(_colorize(output, color))
    return status


if __name__ == "__main__":
    sys.exit(main())
