"""Command-line front end: parse, analyse, classify, synthesize, simulate, verify."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import tables
from .catalog import NAMES, get_example
from .classifier import Strategy, classify, threshold_report
from .debruijn import build
from .parameters import compute_all
from .problem import OptLcl, ProblemError, format_problem, format_value, parse_problem, parse_rational
from .simulator import RunResult, algorithm_for, assign_ids, labeling_text, run
from .synthesis import SynthesisError, SynthesisPlan, synthesize
from .verify import BudgetExceeded, evaluate, opt_bruteforce, opt_dp


class CliError(Exception):
    pass


def _alpha(text: str) -> Fraction:
    try:
        a = parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    if a < 1:
        raise argparse.ArgumentTypeError("alpha must be >= 1")
    return a


def _n_list(text: str) -> list[int]:
    """``100``, ``100,200`` or ``100..1000[:step]`` (default step = start)."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            rng, _, step = part.partition(":")
            lo, hi = (int(x) for x in rng.split(".."))
            st = int(step) if step else max(lo, 1)
            out.extend(range(lo, hi + 1, st))
        else:
            out.append(int(part))
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("n must be positive")
    return out


def load_problem(args) -> OptLcl:
    if getattr(args, "example", None):
        try:
            return get_example(args.example)
        except KeyError as e:
            raise CliError(str(e.args[0])) from None
    if not getattr(args, "problem", None):
        raise CliError("give a problem file or --example NAME")
    path = Path(args.problem)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None
    try:
        return parse_problem(text, name=path.stem)
    except ProblemError as e:
        where = f"{path}:{e.line}: " if e.line is not None else f"{path}: "
        raise CliError(where + e.message) from None


def _json_value(v):
    if isinstance(v, (bool, int, str)):
        return v
    return format_value(v)


def emit(args, fields: dict, lines: list[str] | None = None) -> None:
    if getattr(args, "json", False):
        print(json.dumps({k: _json_value(v) for k, v in fields.items()}))
        return
    for line in lines if lines is not None else [f"{k} = {format_value(v)}" for k, v in fields.items()]:
        print(line)


# commands


def cmd_params(args) -> int:
    p = load_problem(args)
    params = compute_all(p)
    if args.dot:
        sys.stdout.write(build(p).to_dot())
        return 0
    fields = {"problem": p.name or "-", "kind": p.kind}
    fields.update(params.as_dict())
    if args.witness:
        g = build(p)
        for key, w in params.witness.items():
            if key == "delta_flex":
                fields["witness_delta_flex"] = f"{g.label(w[0])} lengths {' '.join(map(str, w[1:]))}"
            elif key == "beta_coprime":
                fields["witness_beta_coprime"] = g.label(w[0])
            else:
                fields[f"witness_{key}"] = " -> ".join(g.label(v) for v in w)
    emit(args, fields)
    return 0


def _classification(p: OptLcl, alpha: Fraction):
    params = compute_all(p)
    return params, classify(params, p.objective, p.aggregation, alpha)


def cmd_classify(args) -> int:
    p = load_problem(args)
    _, c = _classification(p, args.alpha)
    fields = {"class": c.cls, "strategy": c.strategy.value, "det": c.det, "rand": c.rand,
              "matched": c.matched, "lower_bound": c.lower_bound_note}
    emit(args, fields, c.report_lines())
    return 0


def cmd_thresholds(args) -> int:
    p = load_problem(args)
    params = compute_all(p)
    rep = threshold_report(params, p.objective, p.aggregation)
    if args.json:
        print(json.dumps([{"alpha": str(iv), "class": c.cls, "strategy": c.strategy.value} for iv, c in rep.pieces]))
    else:
        for iv, c in rep.pieces:
            print(f"{iv} = {c.cls} {c.strategy.value}")
    return 0


def _plan(p: OptLcl, alpha: Fraction, model: str):
    params, c = _classification(p, alpha)
    if c.cls == "E":
        raise CliError("class E: the problem has no solution for infinitely many n")
    try:
        plan = synthesize(p, params, alpha, c, deterministic=(model == "det"))
    except SynthesisError as e:
        raise CliError(f"synthesis failed: {e}") from None
    return c, plan


def cmd_synthesize(args) -> int:
    p = load_problem(args)
    c, plan = _plan(p, args.alpha, args.model)
    if args.dump:
        Path(args.dump).write_text(plan.dumps(), encoding="utf-8")
    lines = [f"class = {c.cls}"] + plan.report_lines()
    if args.show_walks:
        for g_, w in sorted(plan.gap_walks.items()):
            lines.append(f"gap_walk {g_} = {labeling_text(w)}")
    emit(args, {"class": c.cls, **dict(l.split(" = ", 1) for l in plan.report_lines())}, lines)
    return 0


def _execute(p: OptLcl, plan: SynthesisPlan, n: int, seed: int, ids: str, block: int) -> tuple[RunResult, object]:
    alg = algorithm_for(plan)
    inst = assign_ids(n, seed, "adversarial_blocks" if ids == "adversarial" else "random_permutation", block)
    res = run(alg, inst, seed)
    ev = None if res.unsatisfiable else evaluate(p, res.labeling, plan.alpha)
    return res, ev


def cmd_run(args) -> int:
    if args.plan:
        try:
            plan = SynthesisPlan.loads(Path(args.plan).read_text(encoding="utf-8"))
        except (OSError, ValueError, KeyError, ProblemError) as e:
            raise CliError(f"cannot load plan {args.plan}: {e}") from None
        p = plan.problem
        c = classify(compute_all(p), p.objective, p.aggregation, plan.alpha)
    else:
        if args.alpha is None:
            raise CliError("--alpha is required unless --plan is given")
        p = load_problem(args)
        c, plan = _plan(p, args.alpha, args.model)
    res, ev = _execute(p, plan, args.n, args.seed, args.ids, args.block)
    randomized = plan.strategy is Strategy.CONSTANT_FRAGMENT
    fields = {
        "n": args.n,
        "seed": args.seed,
        "class": c.cls,
        "strategy": c.strategy.value,
        "algorithm": res.strategy,
        "model": "rand" if randomized else "det",
        "measured_locality": res.measured_locality,
        "declared_locality": res.declared_locality,
        "fallback": res.fallback,
    }
    if res.unsatisfiable:
        fields["unsatisfiable"] = True
        emit(args, fields)
        print(f"error: no valid labeling exists for n = {args.n}", file=sys.stderr)
        return 1
    fields.update({"valid": ev.valid, "value": ev.value, "opt": ev.opt, "ratio": ev.ratio, "alpha_ok": ev.alpha_ok})
    if args.show:
        fields["labeling"] = labeling_text(res.labeling)
    emit(args, fields)
    if not ev.valid:
        return 1
    if ev.alpha_ok is False and not randomized:
        return 1
    return 0


def cmd_sweep(args) -> int:
    p = load_problem(args)
    c, plan = _plan(p, args.alpha, args.model)
    rows = []
    for n in args.n:
        for seed in range(args.seed, args.seed + args.seeds):
            res, ev = _execute(p, plan, n, seed, args.ids, args.block)
            if res.unsatisfiable:
                rows.append((n, seed, res.strategy, res.measured_locality, "bot", "bot", "", False, ""))
                continue
            rows.append((n, seed, res.strategy, res.measured_locality, format_value(ev.value),
                         format_value(ev.opt), format_value(ev.ratio) if ev.ratio is not None else "",
                         ev.valid, ev.alpha_ok))
    rows.sort(key=lambda r: (r[0], r[1]))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "seed", "strategy", "locality", "value", "opt", "ratio", "valid", "alpha_ok"])
    for r in rows:
        w.writerow([format_value(x) if isinstance(x, bool) else x for x in r])
    ok = sum(1 for r in rows if r[8] is True)
    valid = sum(1 for r in rows if r[7] is True)
    print(f"# runs = {len(rows)}, valid = {valid}, alpha_ok = {ok} ({ok / len(rows):.4f})", file=sys.stderr)
    deterministic = plan.strategy is not Strategy.CONSTANT_FRAGMENT
    if valid < len(rows) or (deterministic and ok < len(rows)):
        return 1
    return 0


def cmd_oracle(args) -> int:
    p = load_problem(args)
    rows = []
    for n in args.n:
        value, witness = opt_dp(p, n)
        row = {"n": n, "opt": value, "witness": labeling_text(witness) if witness else "-"}
        if args.brute:
            try:
                row["brute"] = opt_bruteforce(p, n)
            except BudgetExceeded as e:
                raise CliError(str(e)) from None
        rows.append(row)
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([format_value(v) for v in r.values()])
    elif args.json:
        print(json.dumps([{k: format_value(v) for k, v in r.items()} for r in rows]))
    else:
        for r in rows:
            for k, v in r.items():
                print(f"{k} = {format_value(v)}")
    return 0


def cmd_examples(args) -> int:
    if args.show:
        try:
            sys.stdout.write(format_problem(get_example(args.show)))
        except KeyError as e:
            raise CliError(str(e.args[0])) from None
        return 0
    for name in NAMES:
        p = get_example(name)
        print(f"{name}  ({p.kind}, |alphabet| = {len(p.alphabet)}, radius = {p.radius})")
    return 0


def cmd_tables(args) -> int:
    if args.check:
        problems = tables.check()
        for line in problems:
            print(f"MISMATCH {line}")
        print("tables match the reference" if not problems else f"{len(problems)} mismatches")
        return 1 if problems else 0
    sys.stdout.write(tables.render_csv() if args.format == "csv" else tables.render_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="optlcl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("problem", nargs="?", help="problem file")
    src.add_argument("--example", "-e", help="built-in example name")
    src.add_argument("--json", action="store_true", help="emit one JSON object")

    sp = sub.add_parser("params", parents=[src], help="compute the seven problem parameters")
    sp.add_argument("--witness", action="store_true", help="include witness walks")
    sp.add_argument("--dot", action="store_true", help="print the de Bruijn graph as DOT instead")
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("classify", parents=[src], help="complexity class for a given alpha")
    sp.add_argument("--alpha", type=_alpha, required=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("thresholds", parents=[src], help="classes as a function of alpha")
    sp.set_defaults(func=cmd_thresholds)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--model", choices=("det", "rand"), default="rand")

    sp = sub.add_parser("synthesize", parents=[src, model], help="build the distributed strategy")
    sp.add_argument("--alpha", type=_alpha, required=True)
    sp.add_argument("--dump", metavar="FILE", help="write the plan as JSON for later replay")
    sp.add_argument("--show-walks", action="store_true")
    sp.set_defaults(func=cmd_synthesize)

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--ids", choices=("random", "adversarial"), default="random")
    sim.add_argument("--block", type=int, default=8, help="ascending block length for adversarial ids")

    sp = sub.add_parser("run", parents=[src, model, sim], help="simulate one run and evaluate it")
    sp.add_argument("--alpha", type=_alpha)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--plan", metavar="FILE", help="replay a dumped plan")
    sp.add_argument("--show", action="store_true", help="print the labeling")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("sweep", parents=[src, model, sim], help="CSV over n values and seeds")
    sp.add_argument("--alpha", type=_alpha, required=True)
    sp.add_argument("--n", type=_n_list, required=True)
    sp.add_argument("--seeds", type=int, default=10)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("oracle", parents=[src], help="exact opt(n) with a witness labeling")
    sp.add_argument("--n", type=_n_list, required=True)
    sp.add_argument("--brute", action="store_true", help="also enumerate all labelings")
    sp.add_argument("--format", choices=("text", "csv"), default="text")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("examples", help="list the built-in examples")
    sp.add_argument("--show", metavar="NAME", help="print an example in file format")
    sp.set_defaults(func=cmd_examples)

    sp = sub.add_parser("tables", help="reproduce the parameter and threshold tables")
    sp.add_argument("--check", action="store_true", help="compare against the embedded reference")
    sp.add_argument("--format", choices=("text", "csv"), default="text")
    sp.set_defaults(func=cmd_tables)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
