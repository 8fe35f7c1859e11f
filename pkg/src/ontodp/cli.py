"""Command-line entry point: ``ontodp <command> [flags]``.

Exit codes: 0 ok / well-suited, 1 mismatch, 2 parse error, 3 budget exceeded,
4 database not saturated (or outside the valid space), 5 bad epsilon,
6 degenerate attack game.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from .adversary import GameConfig, run_game
from .errors import BudgetExceeded, DegenerateGame, InvalidEpsilon, NotSaturated, ParseError, SchemaViolation
from .formats import load_query, load_rules, load_schema, load_triples
from .graph import Graph, Schema, validate
from .mechanism import ReleaseSpec, release_record
from .rules import DEFAULT_ANTECEDENT_CAP, DEFAULT_TRIPLE_CAP, EMPTY_RULES, is_saturated, saturate
from .sensitivity import sensitivity_report
from .spaces import SpaceConfig, check_well_suited

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_BUDGET, EXIT_UNSATURATED, EXIT_EPSILON, EXIT_DEGENERATE = range(7)


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(data: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(data, out, indent=2, sort_keys=True)
        out.write("\n")
        return
    for key, value in data.items():
        if isinstance(value, list) and value and isinstance(value[0], list):
            out.write(f"{key}:\n")
            for i, graph in enumerate(value):
                out.write(f"  [{i}]\n")
                for line in graph:
                    out.write(f"    {line} .\n")
        else:
            out.write(f"{key}: {json.dumps(value) if isinstance(value, (list, bool)) or value is None else value}\n")


def _load(args, *names: str) -> dict:
    """Parse every requested input up front so nothing runs on a half-read manifest."""
    loaded = {}
    for name in names:
        path = getattr(args, name, None)
        if name == "rules" and path is None:
            loaded[name] = EMPTY_RULES
        elif name == "schema" and path is None:
            loaded[name] = Schema()
        elif path is None:
            raise _Exit(EXIT_PARSE, f"missing required flag --{name}")
        elif name in ("data", "prior"):
            loaded[name] = load_triples(path)
        elif name == "rules":
            loaded[name] = load_rules(path)
        elif name == "schema":
            loaded[name] = load_schema(path)
        elif name == "query":
            loaded[name] = load_query(path)
    return loaded


def _check_epsilon(eps: float) -> None:
    if not (eps > 0) or math.isinf(eps):
        raise _Exit(EXIT_EPSILON, f"epsilon must be a finite positive number, got {eps}")


def _require_member(d: Graph, cfg: SpaceConfig) -> None:
    if not is_saturated(d, cfg.rules):
        raise _Exit(EXIT_UNSATURATED, "database is not saturated under the given rules; run `ontodp saturate` first")
    if cfg.restrict_to_valid:
        problems = validate(d, cfg.schema)
        if problems:
            raise _Exit(EXIT_UNSATURATED, "database violates the schema: " + "; ".join(v.detail for v in problems))


def _space(args, inputs) -> SpaceConfig:
    return SpaceConfig(inputs["schema"], inputs["rules"], restrict_to_valid=not args.unrestricted)


def cmd_saturate(args, out) -> int:
    inputs = _load(args, "data", "rules")
    g = saturate(inputs["data"], inputs["rules"], args.triple_cap)
    if args.format == "json":
        _emit({"triples": [f"{t.subject} {t.predicate} {t.object}" for t in g.sorted()]}, "json", out)
    else:
        out.write(g.canonical())
    return EXIT_OK


def cmd_sensitivity(args, out) -> int:
    inputs = _load(args, "data", "rules", "schema", "query")
    cfg = _space(args, inputs)
    _require_member(inputs["data"], cfg)
    report = sensitivity_report(inputs["query"], inputs["data"], cfg, args.semantics, args.antecedent_cap)
    data = report.to_dict(verbose=args.verbose)
    if report.empty_neighborhood:
        data["warnings"] = ["EMPTY_NEIGHBORHOOD"]
    _emit(data, args.format, out)
    return EXIT_OK


def cmd_release(args, out) -> int:
    _check_epsilon(args.epsilon)
    inputs = _load(args, "data", "rules", "schema", "query")
    cfg = _space(args, inputs)
    _require_member(inputs["data"], cfg)
    report = sensitivity_report(inputs["query"], inputs["data"], cfg, args.semantics, args.antecedent_cap)
    spec = ReleaseSpec(args.epsilon, report.value, args.seed)
    record = release_record(
        inputs["query"], inputs["data"], spec, args.semantics, reveal_true_answer=args.reveal_true_answer
    )
    _emit(record.to_dict(), args.format, out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    inputs = _load(args, "data", "rules", "schema")
    cfg = _space(args, inputs)
    _require_member(inputs["data"], cfg)
    report = check_well_suited(inputs["data"], cfg, args.semantics, args.antecedent_cap)
    data = {"verdict": "WELL_SUITED" if report.equal else "MISMATCH", **report.to_dict()}
    _emit(data, args.format, out)
    return EXIT_OK if report.equal else EXIT_MISMATCH


def cmd_attack_demo(args, out) -> int:
    _check_epsilon(args.epsilon)
    inputs = _load(args, "data", "prior", "rules", "schema", "query")
    cfg = _space(args, inputs)
    _require_member(inputs["data"], cfg)
    reports = {}
    for semantics in ("classical", "onto"):
        game = GameConfig(
            true_db=inputs["data"],
            prior=inputs["prior"],
            query=inputs["query"],
            space=cfg,
            epsilon=args.epsilon,
            semantics=semantics,
            trials=args.trials,
            seed=args.seed,
            antecedent_cap=args.antecedent_cap,
        )
        reports[semantics] = run_game(game, keep_rows=args.csv is not None)
    if args.csv is not None:
        with open(args.csv, "w", newline="") as fh:
            for semantics, rep in reports.items():
                fh.write(f"# semantics={semantics}\n")
                rep.write_csv(fh)
    if args.format == "json":
        _emit({k: r.to_dict() for k, r in reports.items()}, "json", out)
    else:
        c, o = reports["classical"], reports["onto"]
        rows = [
            ("", "classical", "onto"),
            ("sensitivity", c.sensitivity, o.sensitivity),
            ("success_rate", f"{c.success_rate:.4f}", f"{o.success_rate:.4f}"),
            ("stderr", f"{c.stderr:.4f}", f"{o.stderr:.4f}"),
            ("baseline", f"{c.baseline:.4f}", f"{o.baseline:.4f}"),
        ]
        for label, a, b in rows:
            out.write(f"{label:<14}{a!s:>12}{b!s:>12}\n")
        out.write(f"attack_space_size: {c.attack_space_size}\n")
        out.write(f"candidate_answers: {c.candidate_answers}\n")
        out.write(f"perceived_sensitivity: {c.perceived_sensitivity}\n")
        if c.two_candidate_bound is not None:
            out.write(f"two_candidate_bound: {c.two_candidate_bound:.4f}\n")
    return EXIT_OK


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ontodp", description="Ontology-aware differential privacy toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, schema=True, query=False, prior=False):
        p.add_argument("--data", required=True, help="triple file with the (saturated) database")
        p.add_argument("--rules", help="rule file; omitted means no inference")
        if schema:
            p.add_argument("--schema", help="schema file; omitted means an empty schema")
            p.add_argument("--unrestricted", action="store_true",
                           help="do not restrict spaces to valid saturated graphs")
            p.add_argument("--antecedent-cap", type=int, default=DEFAULT_ANTECEDENT_CAP)
        if query:
            p.add_argument("--query", required=True)
        if prior:
            p.add_argument("--prior", required=True)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--verbose", action="store_true")

    p = sub.add_parser("saturate", help="print the saturated database")
    common(p, schema=False)
    p.add_argument("--triple-cap", type=int, default=DEFAULT_TRIPLE_CAP)
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("sensitivity", help="compute a query's sensitivity")
    common(p, query=True)
    p.add_argument("--semantics", choices=("classical", "onto", "perceived"), default="classical")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("release", help="release a Laplace-noised query answer")
    common(p, query=True)
    p.add_argument("--semantics", choices=("classical", "onto"), default="classical")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--reveal-true-answer", action="store_true")
    p.set_defaults(func=cmd_release)

    p = sub.add_parser("check", help="check whether the defense space is well-suited")
    common(p)
    p.add_argument("--semantics", choices=("classical", "onto"), default="onto")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("attack-demo", help="simulate the up-to-one attacker under both semantics")
    common(p, query=True, prior=True)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--csv", help="write per-trial rows to this file")
    p.set_defaults(func=cmd_attack_demo)
    return parser


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except _Exit as exc:
        err.write(f"error: {exc}\n")
        return exc.code
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except BudgetExceeded as exc:
        err.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (NotSaturated, SchemaViolation) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_UNSATURATED
    except InvalidEpsilon as exc:
        err.write(f"error: {exc}\n")
        return EXIT_EPSILON
    except DegenerateGame as exc:
        err.write(f"degenerate game: {exc}\n")
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
