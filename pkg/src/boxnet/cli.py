"""Command-line interface.

Subcommands bind JSON scenario files to the library: ``validate``,
``joint``, ``behavior``, ``decompose``, ``ineq`` (eval/derive), and
``ghz`` (search/eval).  A scenario file names the parties, their
settings alphabets, resource and tree files (or inline objects), and
optional per-party outcome bins.  Bare names like ``wired-pr`` resolve
to the fixtures shipped with the package.

Exit codes: 0 success; 1 domain failure (validation failed, LP
infeasible, inequality violated); 2 input error (missing file,
malformed JSON, bad flags).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Union

from .decompose import (
    Infeasible,
    Mixture,
    VertexSet,
    decompose_extremal,
    local_deterministic_vertices,
    ns_vertices_222,
)
from .ghz import FloatBehavior, QuantumStrategy, ghz_behavior, search_max_violation
from .inequality import (
    InequalityError,
    cao_inequality,
    chao_reichardt_correlator,
    chao_reichardt_probability_form,
    evaluate,
    evaluate_cao_s14,
    mao_inequality,
    verify_derivation_chain,
)
from .network import Network, NetworkError, induced_behavior, joint_distribution
from .resource import (
    Alphabet,
    NonsignalingResource,
    SignalingError,
    TableError,
    ZeroConditioningError,
    validate_nonsignaling,
)
from .wiring import tree_from_json_dict

INEQ_CHOICES = ("mao", "cr-corr", "cr-prob", "cao", "cao-s14")


class InputError(Exception):
    """Unreadable or structurally malformed input (exit code 2)."""


def _fixtures_root() -> Path:
    return Path(__file__).resolve().parent / "fixtures"


def _load_json(path: Path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: malformed JSON: {e}") from e


def _resolve_scenario(arg: str) -> Path:
    p = Path(arg)
    if p.is_dir():
        p = p / "scenario.json"
    if p.exists():
        return p
    fixture = _fixtures_root() / arg / "scenario.json"
    if fixture.exists():
        return fixture
    raise InputError(f"no scenario file or shipped fixture named {arg!r}")


def _parse_transcript_key(key: str) -> tuple:
    if key == "":
        return ()
    return tuple(int(x) for x in key.split(","))


def load_scenario(arg: str) -> Network:
    """Build a Network from a scenario file or shipped fixture name."""
    path = _resolve_scenario(arg)
    base = path.parent
    data = _load_json(path)
    try:
        parties = tuple(data["parties"])
        settings = {p: Alphabet(tuple(data["settings"][p])) for p in parties}
        resources = []
        for entry in data["resources"]:
            if isinstance(entry, str):
                entry = _load_json(base / entry)
            resources.append(NonsignalingResource.from_json_dict(entry))
        trees = {}
        for p in parties:
            entry = data["trees"][p]
            if isinstance(entry, str):
                entry = _load_json(base / entry)
            trees[p] = tree_from_json_dict(entry, party=p)
        bins = None
        if data.get("bins"):
            bins = {p: {_parse_transcript_key(k): int(v)
                        for k, v in mapping.items()}
                    for p, mapping in data["bins"].items()}
    except (KeyError, TypeError) as e:
        raise InputError(f"{path}: missing or malformed scenario field: "
                         f"{e!r}") from e
    return Network(parties, resources, trees, settings, bins,
                   name=data.get("name", path.parent.name))


def load_behavior_file(arg: str) -> Union[NonsignalingResource, FloatBehavior]:
    data = _load_json(Path(arg))
    try:
        if data.get("float"):
            return FloatBehavior.from_json_dict(data)
        return NonsignalingResource.from_json_dict(data)
    except (KeyError, TypeError) as e:
        raise InputError(f"{arg}: malformed behavior file: {e!r}") from e


def _emit(payload: dict, pretty_lines, args) -> None:
    if args.pretty:
        for line in pretty_lines:
            print(line)
    else:
        print(json.dumps(payload))


# ---------------------------------------------------------------------------
# Subcommands.  Each returns the process exit code.


def cmd_validate(args) -> int:
    path = _resolve_scenario(args.scenario)
    base = path.parent
    data = _load_json(path)
    report: dict = {"scenario": data.get("name", args.scenario),
                    "resources": {}, "network": None}
    failed = False
    resources = []
    try:
        entries = list(data["resources"])
    except (KeyError, TypeError) as e:
        raise InputError(f"{path}: missing resources list: {e!r}") from e
    for entry in entries:
        if isinstance(entry, str):
            entry = _load_json(base / entry)
        r = NonsignalingResource.from_json_dict(entry)
        resources.append(r)
        if args.allow_signaling and not r.nonsignaling_checked:
            report["resources"][r.id] = "skipped (marked unchecked)"
            continue
        check = validate_nonsignaling(r)
        if check.passed:
            report["resources"][r.id] = "ok"
        else:
            failed = True
            report["resources"][r.id] = "; ".join(check.errors)
    try:
        net = load_scenario(args.scenario)
        report["network"] = f"ok: parties {list(net.parties)}, " \
                            f"{len(net.resources)} resources"
    except NetworkError as e:
        failed = True
        report["network"] = str(e)
    report["passed"] = not failed
    _emit(report,
          [f"scenario: {report['scenario']}"]
          + [f"resource {rid}: {msg}" for rid, msg in report["resources"].items()]
          + [f"network: {report['network']}",
             "PASS" if not failed else "FAIL"],
          args)
    return 0 if not failed else 1


def cmd_joint(args) -> int:
    net = load_scenario(args.scenario)
    try:
        raw = tuple(int(x) for x in args.settings.split(","))
    except ValueError as e:
        raise InputError(f"--settings must be comma-separated integers: {e}") from e
    if len(raw) != len(net.parties):
        raise InputError(f"--settings needs {len(net.parties)} entries for "
                         f"parties {list(net.parties)}")
    dist = joint_distribution(net, raw,
                              allow_unnormalized=args.allow_unnormalized)
    rids = [r.id for r in net.resources]
    probs = {";".join(f"{rid}:{','.join(map(str, outs))}"
                      for rid, outs in zip(rids, assignment)): str(v)
             for assignment, v in sorted(dist.table.items()) if v != 0}
    payload = {"settings": dict(zip(net.parties, raw)),
               "total": str(dist.total), "probabilities": probs}
    _emit(payload,
          [f"settings: {dict(zip(net.parties, raw))}"]
          + [f"  {outs}: {v}" for outs, v in probs.items()]
          + [f"total: {dist.total}"],
          args)
    return 0


def cmd_behavior(args) -> int:
    net = load_scenario(args.scenario)
    beh = induced_behavior(net)
    if args.check_nosig:
        check = validate_nonsignaling(beh)
        if not check.passed:
            print("; ".join(check.errors), file=sys.stderr)
            return 1
    payload = beh.to_json_dict()
    if args.output:
        Path(args.output).write_text(json.dumps(payload, indent=2) + "\n")
        print(f"wrote behavior {beh.id!r} to {args.output}")
    else:
        _emit(payload,
              [f"behavior {beh.id}: parties {list(beh.parties)}"]
              + [f"  {ctx}: " + ", ".join(f"{o}={v}" for o, v in col.items())
                 for ctx, col in payload["table"].items()],
              args)
    return 0


def _vertex_set_for(r: NonsignalingResource, kind: str, base: Path) -> VertexSet:
    if kind == "local":
        return local_deterministic_vertices(r.parties, r.input_alphabets,
                                            r.output_alphabets)
    if kind == "ns222":
        return ns_vertices_222()
    data = _load_json(base / kind if not Path(kind).exists() else Path(kind))
    try:
        vertices = [NonsignalingResource.from_json_dict(d) for d in data]
    except (KeyError, TypeError) as e:
        raise InputError(f"{kind}: malformed vertex list: {e!r}") from e
    return VertexSet(vertices, [f"file:{i}" for i in range(len(vertices))])


def cmd_decompose(args) -> int:
    data = _load_json(Path(args.resource))
    r = NonsignalingResource.from_json_dict(data)
    vs = _vertex_set_for(r, args.vertices, Path(args.resource).parent)
    result = decompose_extremal(r, vs)
    if isinstance(result, Mixture):
        payload = {"feasible": True,
                   "components": [{"weight": str(w), "vertex": v.to_json_dict()}
                                  for w, v in result]}
        _emit(payload,
              [f"{r.id} is a mixture of {len(result)} vertices:"]
              + [f"  {w} * {v.id}" for w, v in result],
              args)
        return 0
    assert isinstance(result, Infeasible)
    payload = {"feasible": False,
               "certificate": {
                   "coefficients": {",".join(map(str, k[0])) + "|"
                                    + ",".join(map(str, k[1])): str(c)
                                    for k, c in result.coefficients.items()},
                   "threshold": str(result.threshold),
                   "value": str(result.value)}}
    _emit(payload,
          [f"{r.id} lies outside the hull: separating functional reaches "
           f"{result.value} on it, at most {result.threshold} on every vertex"],
          args)
    return 1


def _named_inequality(name: str):
    return {"mao": mao_inequality, "cr-corr": chao_reichardt_correlator,
            "cao": cao_inequality}[name]()


def cmd_ineq(args) -> int:
    if args.action == "derive":
        report = verify_derivation_chain()
        payload = {"steps": [{"name": s.name, "description": s.description,
                              "passed": s.passed, "witness": s.witness}
                             for s in report.steps],
                   "all_passed": report.all_passed}
        _emit(payload, str(report).splitlines(), args)
        return 0 if report.all_passed else 1

    if not args.behavior:
        raise InputError("ineq eval needs --behavior FILE")
    b = load_behavior_file(args.behavior)
    atol = args.atol if args.atol is not None else \
        (1e-9 if isinstance(b, FloatBehavior) else 0)
    if args.ineq == "cr-prob":
        ev = chao_reichardt_probability_form(b, atol=atol)
    elif args.ineq == "cao-s14":
        ev = evaluate_cao_s14(b, atol=atol)
    else:
        ev = evaluate(_named_inequality(args.ineq), b, atol=atol)
    value = float(ev.value) if isinstance(ev.value, float) else str(ev.value)
    payload = {"inequality": args.ineq, "value": value,
               "bound": str(ev.bound), "direction": ev.direction,
               "satisfied": ev.satisfied}
    _emit(payload,
          [f"{args.ineq}: value {ev.value} {ev.direction} {ev.bound} -> "
           + ("satisfied" if ev.satisfied else "VIOLATED")],
          args)
    return 0 if ev.satisfied else 1


def cmd_ghz(args) -> int:
    if args.action == "search":
        ineq = _named_inequality(args.ineq)
        res = search_max_violation(ineq, grid=args.grid,
                                   step_floor=args.refine)
        payload = {"inequality": args.ineq,
                   "angles": {p: list(a) for p, a in
                              sorted(res.strategy.angles().items())},
                   "value": res.value}
        _emit(payload,
              [f"best {args.ineq} value: {res.value}"]
              + [f"  {p}: {list(a)}" for p, a in
                 sorted(res.strategy.angles().items())],
              args)
        return 0

    if not args.angles:
        raise InputError("ghz eval needs --angles a0,a1,b0,b1,c0,c1")
    try:
        flat = [float(x) for x in args.angles.split(",")]
    except ValueError as e:
        raise InputError(f"--angles must be comma-separated numbers: {e}") from e
    if len(flat) != 6:
        raise InputError("--angles needs 6 values: a0,a1,b0,b1,c0,c1")
    strategy = QuantumStrategy.from_angles(
        {"A": flat[0:2], "B": flat[2:4], "C": flat[4:6]})
    beh = ghz_behavior(strategy)
    payload = beh.to_json_dict()
    if args.output:
        Path(args.output).write_text(json.dumps(payload, indent=2) + "\n")
        print(f"wrote behavior {beh.id!r} to {args.output}")
    else:
        _emit(payload, [json.dumps(payload, indent=2)], args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxnet",
        description="Networks of nonsignaling resources: validation, joint "
                    "distributions, decompositions, and inequalities.")
    parser.add_argument("--pretty", action="store_true",
                        help="human-readable tables instead of JSON")
    parser.add_argument("--threads", type=int, default=None,
                        help="accepted for compatibility; every computation "
                             "is deterministic and the output is identical "
                             "for any value")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate resources, trees, network")
    p.add_argument("scenario")
    p.add_argument("--allow-signaling", action="store_true",
                   help="skip the nonsignaling check for resources marked "
                        "unchecked (counterexample scenarios)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("joint", help="joint outcome distribution at fixed settings")
    p.add_argument("scenario")
    p.add_argument("--settings", required=True,
                   help="comma-separated settings, one per party")
    p.add_argument("--allow-unnormalized", action="store_true",
                   help="permit totals != 1 (unchecked resources)")
    p.set_defaults(func=cmd_joint)

    p = sub.add_parser("behavior", help="full induced behavior as a resource file")
    p.add_argument("scenario")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    p.add_argument("--check-nosig", action="store_true",
                   help="re-run the nonsignaling validator on the result")
    p.set_defaults(func=cmd_behavior)

    p = sub.add_parser("decompose",
                       help="write a resource as a mixture of vertices, or "
                            "emit a separating certificate")
    p.add_argument("resource", help="resource JSON file")
    p.add_argument("--vertices", default="local",
                   help="'local', 'ns222', or a JSON file with a vertex list")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("ineq", help="evaluate inequalities / verify derivations")
    p.add_argument("action", choices=("eval", "derive"))
    p.add_argument("--ineq", choices=INEQ_CHOICES, default="mao")
    p.add_argument("--behavior", help="behavior JSON file (eval)")
    p.add_argument("--atol", type=float, default=None,
                   help="satisfaction tolerance (default: 1e-9 for float "
                        "behaviors, exact otherwise)")
    p.set_defaults(func=cmd_ineq)

    p = sub.add_parser("ghz", help="GHZ strategies: search or evaluate")
    p.add_argument("action", choices=("search", "eval"))
    p.add_argument("--ineq", choices=("mao", "cr-corr", "cao"), default="mao")
    p.add_argument("--grid", type=int, default=16,
                   help="grid points per angle (search)")
    p.add_argument("--refine", type=float, default=1e-4,
                   help="coordinate-descent step floor (search)")
    p.add_argument("--angles", help="a0,a1,b0,b1,c0,c1 in radians (eval)")
    p.add_argument("-o", "--output", help="write the behavior JSON here (eval)")
    p.set_defaults(func=cmd_ghz)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except (TableError, SignalingError, NetworkError, ZeroConditioningError,
            InequalityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, AssertionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
