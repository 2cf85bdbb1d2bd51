"""Command-line front end. Exit codes: 0 ok, 1 check failed, 2 usage error, 3 I/O error."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bounds import audit_run, lb_first_hit, main_bound, sweep_init, sweep_mean
from .construction import ConstructionParams, build_k, validate_structure
from .engine import FPState, Trace, run, with_snapshots
from .equilibrium import concentration_audit, nash_gap, pure_ne_enumerate
from .errors import FictPlayError, LemmaViolation, UsageError
from .experiments import experiment_paper
from .fast_forward import diff_traces, run_ff
from .game import MixedProfile
from .io import (
    decimal12,
    dumps,
    load_matrix,
    parse_profile,
    parse_rational,
    parse_stop,
    parse_vector,
    run_record,
    save_matrix,
    trace_from_csv,
    trace_from_record,
    write_text,
)
from .rules import BUILTIN_RULES, make_rule, rule_from_json

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _even(token: str) -> int:
    try:
        n = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {token!r}") from None
    if n < 2 or n % 2:
        raise argparse.ArgumentTypeError(f"n must be an even integer >= 2, got {n}")
    return n


def _seed(token: str) -> int:
    if not token.isdigit() or int(token) >= 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer: {token!r}")
    return int(token)


def _positive(token: str) -> int:
    if not token.isdigit() or int(token) < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer: {token!r}")
    return int(token)


def _out(text: str) -> None:
    sys.stdout.write(text)


# -- subcommands --------------------------------------------------------------

def cmd_construct(args) -> int:
    A = build_k(ConstructionParams(args.n, args.z))
    if args.out:
        save_matrix(A, Path(args.out))
    else:
        from .io import matrix_to_json
        _out(dumps(matrix_to_json(A)))
    return EXIT_OK


def cmd_validate(args) -> int:
    report = validate_structure(load_matrix(args.matrix))
    _out(dumps(report.to_json()))
    return EXIT_OK if report.ok else EXIT_CHECK


def _rule_for(args, state_rec: dict | None):
    if state_rec is not None and "rule" in state_rec:
        return rule_from_json(state_rec["rule"])
    return make_rule(args.rule, args.seed)


def cmd_simulate(args) -> int:
    A = load_matrix(args.matrix)
    B = load_matrix(args.matrix_b) if args.matrix_b else A
    stop = parse_stop(args.stop)
    resume_rec = json.loads(Path(args.resume).read_text(encoding="utf-8")) if args.resume else None
    resume = trace_from_record(resume_rec) if resume_rec else None
    if resume is None and args.init is None:
        raise UsageError("--init is required unless --resume is given")
    init = resume.init if resume else parse_profile(args.init)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if args.equivalence_check:
        if resume is not None:
            raise UsageError("--equivalence-check cannot be combined with --resume")
        slow = run(A, B, init, make_rule(args.rule, args.seed), stop)
        fast = run_ff(A, B, init, make_rule(args.rule, args.seed), stop, tie_budget=args.tie_budget)
        diff = diff_traces(slow, fast)
        _out(dumps({"identical": diff is None, "difference": diff,
                    "switches": len(fast.switches), "final_round": str(fast.final_state.t)}))
        write_text(out / "trace.csv", fast.to_csv())
        return EXIT_OK if diff is None else EXIT_CHECK

    rule = _rule_for(args, resume_rec)
    ckpt_dir = out / "checkpoints"

    def save_ckpt(tr: Trace) -> None:
        ckpt_dir.mkdir(exist_ok=True)
        write_text(ckpt_dir / f"state_{tr.final_state.t}.json", dumps(run_record(tr, rule.to_json())))

    kwargs = dict(resume=resume, checkpoint_every=args.snapshot_every,
                  on_checkpoint=save_ckpt if args.snapshot_every else None)
    if args.engine == "naive":
        trace = run(A, B, init, rule, stop, **kwargs)
    else:
        trace = run_ff(A, B, init, rule, stop, tie_budget=args.tie_budget, **kwargs)
    write_text(out / "trace.csv", trace.to_csv())
    write_text(out / "state.json", dumps(run_record(trace, rule.to_json(), {"stop": stop.to_json()})))
    _out(dumps({"stop_reason": trace.stop_reason, "final_round": str(trace.final_state.t),
                "switches": len(trace.switches)}))
    return EXIT_OK


def cmd_gap(args) -> int:
    A = load_matrix(args.matrix)
    m = MixedProfile(parse_vector(args.x), parse_vector(args.y))
    g = nash_gap(A, m)
    _out(dumps({"row_gap": str(g.row_gap), "col_gap": str(g.col_gap),
                "gap": str(g.total), "gap_decimal12": decimal12(g.total)}))
    return EXIT_OK


def cmd_purene(args) -> int:
    A = load_matrix(args.matrix)
    B = load_matrix(args.matrix_b) if args.matrix_b else A
    _out(dumps({"pure_ne": [list(p) for p in pure_ne_enumerate(A, B)]}))
    return EXIT_OK


def cmd_audit_concentration(args) -> int:
    eps = parse_rational(args.eps)
    report = concentration_audit(build_k(args.n), eps, args.samples, args.seed,
                                 raise_on_violation=False)
    _out(dumps(report.to_json()))
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_audit_run(args) -> int:
    A = load_matrix(args.matrix)
    switches = trace_from_csv(Path(args.trace).read_text(encoding="utf-8"))
    rec = json.loads(Path(args.state).read_text(encoding="utf-8"))
    trace = with_snapshots(A, A, Trace(switches[0].profile, switches,
                                       FPState.from_json(rec), rec.get("stop_reason", "")))
    report = audit_run(A, trace)
    _out(dumps(report.to_json()))
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_bound(args) -> int:
    out = {"n": args.n, "lb_first_hit": str(lb_first_hit(args.n))}
    if args.eps is not None:
        out["main_bound"] = str(main_bound(args.n, parse_rational(args.eps)))
        _out(dumps(out))
    else:
        _out(out["lb_first_hit"] + "\n")
    return EXIT_OK


def cmd_sweep_init(args) -> int:
    rows = sweep_init(args.n, lambda: make_rule(args.rule, args.seed))
    lines = ["row,col,first_hit,switches"]
    lines += [f"{r['row']},{r['col']},{'' if r['first_hit'] is None else r['first_hit']},{r['switches']}"
              for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        write_text(Path(args.out), text)
        mean = sweep_mean(rows)
        _out(dumps({"mean_first_hit": None if mean is None else str(mean),
                    "mean_decimal12": None if mean is None else decimal12(mean)}))
    else:
        _out(text)
    return EXIT_OK


def cmd_experiment(args) -> int:
    manifest = experiment_paper(args.n, args.rule, Path(args.out), seed=args.seed,
                                tail_factor=args.tail_factor)
    _out(dumps(manifest.to_json()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fictplay", description="Exact fictitious-play laboratory.")
    p.add_argument("--version", action="version", version=f"fictplay {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("construct", help="build K^n(z) as matrix JSON")
    s.add_argument("--n", type=_even, required=True)
    s.add_argument("--z", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("validate", help="check a matrix against the K^n(z) layer rule")
    s.add_argument("--matrix", required=True)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("simulate", help="run fictitious play")
    s.add_argument("--matrix", required=True)
    s.add_argument("--matrix-b")
    s.add_argument("--init")
    s.add_argument("--rule", choices=BUILTIN_RULES, default="lexmin")
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--engine", choices=("naive", "fast"), default="fast")
    s.add_argument("--stop", action="append", required=True,
                   help="first-hit:i,j | rounds:T | gap:p/q (repeatable)")
    s.add_argument("--out", default=".")
    s.add_argument("--snapshot-every", type=_positive)
    s.add_argument("--resume")
    s.add_argument("--equivalence-check", action="store_true")
    s.add_argument("--tie-budget", type=_positive, default=10_000)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("gap", help="exact Nash gap of a mixed profile")
    s.add_argument("--matrix", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.set_defaults(func=cmd_gap)

    s = sub.add_parser("purene", help="enumerate pure Nash equilibria")
    s.add_argument("--matrix", required=True)
    s.add_argument("--matrix-b")
    s.set_defaults(func=cmd_purene)

    s = sub.add_parser("audit", help="falsification audits")
    asub = s.add_subparsers(dest="audit", required=True, parser_class=_Parser)
    a = asub.add_parser("concentration")
    a.add_argument("--n", type=_even, required=True)
    a.add_argument("--eps", required=True)
    a.add_argument("--samples", type=_positive, default=10_000)
    a.add_argument("--seed", type=_seed, default=0)
    a.set_defaults(func=cmd_audit_concentration)
    a = asub.add_parser("run")
    a.add_argument("--matrix", required=True)
    a.add_argument("--trace", required=True)
    a.add_argument("--state", required=True)
    a.set_defaults(func=cmd_audit_run)

    s = sub.add_parser("bound", help="explicit first-hit lower bound")
    s.add_argument("--n", type=_even, required=True)
    s.add_argument("--eps")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("sweep-init", help="first hit from every initial profile")
    s.add_argument("--n", type=_even, required=True)
    s.add_argument("--rule", choices=BUILTIN_RULES, default="lexmin")
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep_init)

    s = sub.add_parser("experiment", help="write the 4x4 experiment CSVs and manifest")
    s.add_argument("--n", type=_even, default=4)
    s.add_argument("--rule", choices=BUILTIN_RULES, default="lexmin")
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--tail-factor", type=_positive, default=8)
    s.add_argument("--out", default="experiment_out")
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO
    except LemmaViolation as exc:
        sys.stderr.write(f"audit failed: {exc}\n")
        return EXIT_CHECK
    except (FictPlayError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
