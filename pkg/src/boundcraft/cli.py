"""Command-line interface.

Every command prints a JSON report (``--human`` for prose). Reports carry a
``command`` field that, re-run, reproduces the numbers exactly: any random
``u`` drawn along the way is written back into it.

Exit codes: 0 success, 2 usage, 3 validation, 4 capacity.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from pathlib import Path

from . import __version__
from .cdf_bounds import (
    band_mean_bound,
    band_quantile_bound,
    lower_band,
    plan_epsilon_sample_size,
    solve_epsilon_star,
    dkw_epsilon,
    upper_band,
)
from .clopper_pearson import clopper_pearson_lower
from .comparison import compare_continuous, compare_policies
from .errors import BoundcraftError, UsageError, ValidationError
from .harness import simulate_binary_coverage, simulate_cdf_coverage, sweep_tightness_curves, write_curves_csv
from .rollouts import BINARY, CONTINUOUS, enforce_plan, ingest, load_testing_plan
from .tightness import DEFAULT_MES_TOL, DEFAULT_N_CAP, PLAN_MES_TOL, max_expected_shortage, plan_sample_size
from .uma import SEEDED_GENERATOR, draw_statistic, uma_lower_bound, uma_lower_bound_on_failure

SCHEMA = "boundcraft/1"


def _report(command: list[str], **body) -> dict:
    return {"schema": SCHEMA, "command": shlex.join(["boundcraft", *command]), **body}


def _fmt(x: float) -> str:
    return repr(float(x))


def _emit(report: dict, human: bool, out=sys.stdout) -> None:
    if human:
        out.write(report.get("verdict", "") + "\n")
        out.write(f"reproduce: {report['command']}\n")
    else:
        json.dump(report, out, indent=2)
        out.write("\n")


def _apply_config(args) -> None:
    if not getattr(args, "config", None):
        return
    try:
        cfg = json.loads(Path(args.config).read_text())
    except OSError as e:
        raise ValidationError(f"cannot read config {args.config}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ValidationError(f"config {args.config} is not valid JSON: {e.msg}") from None
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if hasattr(args, dest) and getattr(args, dest) is None:
            setattr(args, dest, value)


def _require_alpha(args, name: str = "alpha") -> float:
    value = getattr(args, name)
    if value is None:
        flag = "--" + name.replace("_", "-")
        raise UsageError(f"{flag} is required (on the command line or in --config)")
    return float(value)


def _log_args(args) -> list[str]:
    out = ["--input", str(args.input)]
    if args.format:
        out += ["--format", args.format]
    return out


# ---------------------------------------------------------------- bound-binary

def cmd_bound_binary(args) -> dict:
    direct = args.n is not None or args.k is not None
    if direct and args.input:
        raise UsageError("give counts either as --n/--k or via --input, not both")
    if not direct and not args.input:
        raise UsageError("give counts as --n and --k, or a rollout log via --input")
    plan = load_testing_plan(args.testing_plan) if args.testing_plan else None
    if args.alpha is None and plan is not None:
        args.alpha = plan["alpha"]
    alpha = _require_alpha(args)

    if direct:
        if args.n is None or args.k is None:
            raise UsageError("--n and --k must be given together")
        n, k = args.n, args.k
        src = ["--n", str(n), "--k", str(k)]
    else:
        log = ingest(args.input, args.format, BINARY)
        pid = log.resolve(args.policy)
        k, n = log.counts(pid)
        src = _log_args(args) + ["--policy", pid]
    if plan is not None:
        enforce_plan(plan, n, alpha)
    if args.u is not None and args.seed is not None:
        raise UsageError("give at most one of --u and --seed")

    method = args.method
    count = k if args.side == "success" else n - k
    rand = None
    if method == "uma":
        stat = draw_statistic(count, n, u=args.u, seed=args.seed)
        source = "given" if args.u is not None else ("seed" if args.seed is not None else "entropy")
        res = uma_lower_bound(stat, alpha) if args.side == "success" else uma_lower_bound_on_failure(stat, alpha)
        rand = {"u": stat.u, "seed": args.seed, "source": source, "generator": SEEDED_GENERATOR}
        if source == "entropy":
            sys.stderr.write(
                f"warning: u drawn from OS entropy: u = {stat.u!r}. "
                "Record it; the bound cannot be reproduced without it.\n")
    else:
        res = clopper_pearson_lower(count, n, alpha)
    bound = res.to_dict()

    command = ["bound-binary", *src, "--alpha", _fmt(alpha), "--method", method, "--side", args.side]
    if rand is not None:
        command += ["--u", _fmt(rand["u"])]

    tightness = None
    if args.with_mes:
        mes = max_expected_shortage(n, alpha, method, args.mes_tol)
        tightness = mes.to_dict()
        bound["mes"] = mes.mes
        command += ["--with-mes", "--mes-tol", _fmt(args.mes_tol)]

    conf = 1.0 - alpha
    if args.side == "success":
        verdict = f"With {conf:.1%} confidence the success rate is at least {res.p_lo:.4f} ({k}/{n} successes)."
    else:
        bound["success_upper"] = res.upper
        verdict = (f"With {conf:.1%} confidence the failure rate is at least {res.p_lo:.4f}, "
                   f"so the success rate is at most {res.upper:.4f} ({k}/{n} successes).")
    if tightness is not None:
        verdict += f" MES = {tightness['mes']:.4f}."
    return _report(
        command,
        inputs={"n": n, "k": k, "alpha": alpha, "method": method, "side": args.side},
        randomization=rand,
        bound=bound,
        tightness=tightness,
        confidence=conf,
        verdict=verdict,
    )


# ------------------------------------------------------------------- bound-cdf

def cmd_bound_cdf(args) -> dict:
    plan = load_testing_plan(args.testing_plan) if args.testing_plan else None
    if args.alpha is None and plan is not None:
        args.alpha = plan["alpha"]
    alpha = _require_alpha(args)
    log = ingest(args.input, args.format, CONTINUOUS if args.continuous else None)
    if log.metric_kind == BINARY:
        raise ValidationError("log holds only 0/1 outcomes; use bound-binary "
                              "(or pass --continuous to treat them as rewards)")
    pid = log.resolve(args.policy)
    samples = log.outcomes(pid)
    if plan is not None:
        enforce_plan(plan, len(samples), alpha)
    make = upper_band if args.side == "upper" else lower_band
    band = make(samples, alpha, args.method)

    command = ["bound-cdf", *_log_args(args), "--policy", pid, "--alpha", _fmt(alpha),
               "--side", args.side, "--method", args.method]
    if args.continuous:
        command.append("--continuous")
    summary = {"epsilon_star": band.epsilon_star, "n": band.n, "alpha": alpha,
               "method": band.method.value, "side": band.side.value}
    support = None
    if args.support is not None:
        support = tuple(args.support)
        command += ["--support", _fmt(support[0]), _fmt(support[1])]
        key = "worst_case_mean" if args.side == "upper" else "best_case_mean"
        summary[key] = band_mean_bound(band, support)
    if args.quantile:
        summary["quantiles"] = {repr(q): band_quantile_bound(band, q, support) for q in args.quantile}
        for q in args.quantile:
            command += ["--quantile", _fmt(q)]

    report = _report(command, inputs={"policy": pid, "n": band.n}, bound=summary,
                     confidence=1.0 - alpha)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                band.to_csv(fh)
        except OSError as e:
            raise ValidationError(f"cannot write {args.out}: {e.strerror}") from None
        command += ["--out", str(args.out)]
        report["command"] = shlex.join(["boundcraft", *command])
        report["band_csv"] = str(args.out)
    else:
        report["band_csv_text"] = band.to_csv()
    word = "above" if args.side == "upper" else "below"
    verdict = (f"With {1 - alpha:.1%} confidence the reward CDF lies {word} the empirical CDF "
               f"shifted by {band.epsilon_star:.4f} everywhere (n = {band.n}, {band.method.value}).")
    if "worst_case_mean" in summary:
        verdict += f" Worst-case mean reward: {summary['worst_case_mean']:.4f}."
    if "best_case_mean" in summary:
        verdict += f" Best-case mean reward: {summary['best_case_mean']:.4f}."
    report["verdict"] = verdict
    return report


# ------------------------------------------------------------------------ plan

def cmd_plan(args) -> dict:
    alpha = _require_alpha(args)
    if (args.mes_target is None) == (args.epsilon_target is None):
        raise UsageError("give exactly one of --mes-target and --epsilon-target")
    if args.mes_target is not None:
        method = args.method or "uma"
        if method not in ("uma", "cp"):
            raise UsageError("--mes-target works with --method uma or cp")
        n = plan_sample_size(alpha, args.mes_target, method, n_cap=args.n_cap, tol=args.tol)
        achieved = max_expected_shortage(n, alpha, method, args.tol)
        command = ["plan", "--alpha", _fmt(alpha), "--mes-target", _fmt(args.mes_target),
                   "--method", method, "--n-cap", str(args.n_cap), "--tol", _fmt(args.tol)]
        tight = {"kind": "mes", "target": args.mes_target, "achieved": achieved.mes, "gap": achieved.gap}
        verdict = f"{n} rollouts give MES {achieved.mes:.4f} <= {args.mes_target} at {1 - alpha:.1%} confidence ({method})."
    else:
        method = args.method or "ks"
        if method not in ("ks", "dkw"):
            raise UsageError("--epsilon-target works with --method ks or dkw")
        n = plan_epsilon_sample_size(alpha, args.epsilon_target, method, n_cap=args.n_cap)
        eps = solve_epsilon_star(n, alpha) if method == "ks" else dkw_epsilon(n, alpha)
        command = ["plan", "--alpha", _fmt(alpha), "--epsilon-target", _fmt(args.epsilon_target),
                   "--method", method, "--n-cap", str(args.n_cap)]
        tight = {"kind": "epsilon", "target": args.epsilon_target, "achieved": eps}
        verdict = f"{n} rollouts give epsilon* {eps:.4f} <= {args.epsilon_target} at {1 - alpha:.1%} confidence ({method})."
    return _report(command, inputs={"alpha": alpha, "method": method}, n=n, tightness=tight,
                   confidence=1.0 - alpha, verdict=verdict)


# --------------------------------------------------------------------- compare

def cmd_compare(args) -> dict:
    alpha = _require_alpha(args, "joint_alpha")
    if (args.counts is None) == (args.input is None):
        raise UsageError("give either --counts KA NA KB NB or --input")
    if args.input:
        log = ingest(args.input, args.format)
        pols = log.policies()
        if args.policy_a and args.policy_b:
            a, b = log.resolve(args.policy_a), log.resolve(args.policy_b)
        elif len(pols) != 2:
            raise ValidationError(f"comparison needs exactly two policies, log has {len(pols)}: {pols}")
        else:
            a, b = pols
        src = _log_args(args) + ["--policy-a", a, "--policy-b", b]
        if log.metric_kind == CONTINUOUS:
            if args.support is None:
                raise ValidationError("continuous logs need --support A B for a comparison")
            res = compare_continuous(log.outcomes(a), log.outcomes(b), alpha, args.support)
            command = ["compare", *src, "--joint-alpha", _fmt(alpha),
                       "--support", _fmt(args.support[0]), _fmt(args.support[1])]
            verdict = (f"{a} {'outperforms' if res.disjoint else 'is not shown to outperform'} {b}: "
                       f"worst-case mean {res.mean_lo_a:.4f} vs best-case mean {res.mean_hi_b:.4f} "
                       f"at joint confidence {1 - alpha:.1%}.")
            return _report(command, inputs={"policy_a": a, "policy_b": b},
                           verdict_data={"mean_lo_a": res.mean_lo_a, "mean_hi_b": res.mean_hi_b,
                                         "epsilon_a": res.band_a.epsilon_star,
                                         "epsilon_b": res.band_b.epsilon_star,
                                         "disjoint": res.disjoint, "joint_alpha": alpha},
                           verdict=verdict)
        k_a, n_a = log.counts(a)
        k_b, n_b = log.counts(b)
    else:
        k_a, n_a, k_b, n_b = args.counts
        a, b = "A", "B"
        src = ["--counts", *map(str, args.counts)]
    if args.u_a is not None and args.u_b is not None and args.seed is not None:
        raise UsageError("--seed is unused when both --u-a and --u-b are given")
    res = compare_policies(k_a, n_a, k_b, n_b, alpha, u_a=args.u_a, u_b=args.u_b, seed=args.seed,
                           split=args.split, fisher=args.fisher)
    command = ["compare", *src, "--joint-alpha", _fmt(alpha), "--split", _fmt(args.split),
               "--u-a", _fmt(res.u_draws[0]), "--u-b", _fmt(res.u_draws[1])]
    if args.fisher:
        command.append("--fisher")
    word = "outperforms" if res.disjoint else "is not shown to outperform"
    verdict = (f"{a} {word} {b} at joint confidence {1 - alpha:.1%}: "
               f"success({a}) >= {res.p_lo_a:.4f}, success({b}) <= {res.p_ub_b:.4f}.")
    return _report(command, inputs={"policy_a": a, "policy_b": b}, verdict_data=res.to_dict(),
                   verdict=verdict)


# -------------------------------------------------------------------- validate

def cmd_validate(args) -> dict:
    alpha = _require_alpha(args)
    if (args.p is None) == (args.dist is None):
        raise UsageError("give --p for binary coverage or --dist for CDF coverage")
    if args.n is None:
        raise UsageError("--n is required")
    if args.p is not None:
        method = args.method or "uma"
        rep = simulate_binary_coverage(args.p, args.n, alpha, method, args.trials, args.seed, args.workers)
        command = ["validate", "--p", _fmt(args.p)]
        verdict = (f"coverage {rep.empirical_coverage:.4f} (theory {rep.theory_confidence:.4f}), "
                   f"mean shortage {rep.empirical_mean_shortage:.4f} (theory {rep.theory_es:.4f}) "
                   f"over {rep.trials} trials.")
    else:
        method = args.method or "ks"
        rep = simulate_cdf_coverage(args.dist, args.n, alpha, method, args.trials, args.seed, args.workers)
        command = ["validate", "--dist", args.dist]
        verdict = (f"band coverage {rep.empirical_coverage:.4f} (theory >= {rep.theory_confidence:.4f}) "
                   f"over {rep.trials} trials.")
    command += ["--n", str(args.n), "--alpha", _fmt(alpha), "--method", method,
                "--trials", str(args.trials), "--seed", str(args.seed)]
    report = _report(command, report=rep.to_dict(), verdict=verdict)
    if args.out:
        _write(args.out, json.dumps(report, indent=2) + "\n")
    return report


# ---------------------------------------------------------------------- curves

def _parse_ns(text: str) -> list[int]:
    try:
        if ":" in text:
            parts = [int(x) for x in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            return list(range(start, stop + 1, step))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse n range {text!r}; use 5:200, 5:200:5 or 10,20,50") from None


def _parse_floats(text) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    try:
        return [float(x) for x in str(text).split(",")]
    except ValueError:
        raise UsageError(f"cannot parse list {text!r}") from None


def cmd_curves(args) -> dict:
    if args.alpha is None:
        raise UsageError("--alpha is required (a value or comma-separated list)")
    alphas = _parse_floats(args.alpha)
    ns = _parse_ns(args.n)
    kind, _, axis = args.what.partition("-vs-")
    default = ("uma", "cp") if kind == "mes" else ("ks", "dkw")
    methods = tuple(args.methods.split(",")) if args.methods else default
    for m in methods:
        if m not in default:
            raise UsageError(f"method {m!r} does not produce {kind} curves")
    if axis == "alpha" and len(ns) != 1:
        raise UsageError(f"{args.what} needs a single --n")
    if axis == "n" and len(alphas) != 1:
        raise UsageError(f"{args.what} needs a single --alpha")
    rows = sweep_tightness_curves(alphas, ns, methods, args.tol)
    command = ["curves", "--what", args.what, "--alpha", args.alpha if isinstance(args.alpha, str) else _fmt(args.alpha),
               "--n", args.n, "--methods", ",".join(methods), "--tol", _fmt(args.tol)]
    report = _report(command, rows=len(rows), verdict=f"{len(rows)} curve rows")
    if args.out:
        try:
            with open(args.out, "w") as fh:
                write_curves_csv(rows, fh)
        except OSError as e:
            raise ValidationError(f"cannot write {args.out}: {e.strerror}") from None
        report["curve_csv"] = str(args.out)
        report["command"] += " " + shlex.join(["--out", str(args.out)])
    else:
        import io
        buf = io.StringIO()
        write_curves_csv(rows, buf)
        report["curve_csv_text"] = buf.getvalue()
    return report


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise ValidationError(f"cannot write {path}: {e.strerror}") from None


# ---------------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", help="prose summary instead of JSON")
    common.add_argument("--config", help="JSON file supplying defaults for unset flags (e.g. alpha)")

    p = _Parser(prog="boundcraft", description="Tight confidence bounds for policy evaluation.")
    p.add_argument("--version", action="version", version=f"boundcraft {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def log_opts(sp):
        sp.add_argument("--input", help="rollout log (csv with header policy_id,outcome, or jsonl)")
        sp.add_argument("--format", choices=["csv", "jsonl"])

    b = sub.add_parser("bound-binary", parents=[common], help="lower bound on a success rate")
    b.add_argument("--n", type=int)
    b.add_argument("--k", type=int)
    log_opts(b)
    b.add_argument("--policy")
    b.add_argument("--alpha", type=float)
    b.add_argument("--method", choices=["uma", "cp"], default="uma")
    b.add_argument("--side", choices=["success", "failure"], default="success")
    b.add_argument("--u", type=float, help="auxiliary uniform draw in [0, 1)")
    b.add_argument("--seed", type=int)
    b.add_argument("--with-mes", action="store_true")
    b.add_argument("--mes-tol", type=float, default=DEFAULT_MES_TOL)
    b.add_argument("--testing-plan", help="JSON plan with the pre-declared n and alpha")
    b.set_defaults(func=cmd_bound_binary)

    c = sub.add_parser("bound-cdf", parents=[common], help="one-sided confidence band on a reward CDF")
    log_opts(c)
    c.add_argument("--policy")
    c.add_argument("--alpha", type=float)
    c.add_argument("--side", choices=["upper", "lower"], default="upper")
    c.add_argument("--method", choices=["ks", "dkw"], default="ks")
    c.add_argument("--support", type=float, nargs=2, metavar=("A", "B"))
    c.add_argument("--quantile", type=float, action="append")
    c.add_argument("--continuous", action="store_true", help="treat 0/1 outcomes as rewards")
    c.add_argument("--out", help="write the band CSV here")
    c.add_argument("--testing-plan")
    c.set_defaults(func=cmd_bound_cdf)

    pl = sub.add_parser("plan", parents=[common], help="minimal number of rollouts")
    pl.add_argument("--alpha", type=float)
    pl.add_argument("--mes-target", type=float)
    pl.add_argument("--epsilon-target", type=float)
    pl.add_argument("--method", choices=["uma", "cp", "ks", "dkw"])
    pl.add_argument("--n-cap", type=int, default=DEFAULT_N_CAP)
    pl.add_argument("--tol", type=float, default=PLAN_MES_TOL)
    pl.set_defaults(func=cmd_plan)

    cm = sub.add_parser("compare", parents=[common], help="does policy A outperform policy B")
    cm.add_argument("--counts", type=int, nargs=4, metavar=("KA", "NA", "KB", "NB"))
    log_opts(cm)
    cm.add_argument("--policy-a")
    cm.add_argument("--policy-b")
    cm.add_argument("--joint-alpha", type=float)
    cm.add_argument("--split", type=float, default=0.5)
    cm.add_argument("--u-a", type=float)
    cm.add_argument("--u-b", type=float)
    cm.add_argument("--seed", type=int)
    cm.add_argument("--fisher", action="store_true")
    cm.add_argument("--support", type=float, nargs=2, metavar=("A", "B"))
    cm.set_defaults(func=cmd_compare)

    v = sub.add_parser("validate", parents=[common], help="Monte Carlo coverage check")
    v.add_argument("--p", type=float)
    v.add_argument("--dist", choices=["uniform", "normal", "exponential", "two-point"])
    v.add_argument("--n", type=int)
    v.add_argument("--alpha", type=float)
    v.add_argument("--method", choices=["uma", "cp", "ks", "dkw"])
    v.add_argument("--trials", type=int, default=10_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out")
    v.set_defaults(func=cmd_validate)

    cu = sub.add_parser("curves", parents=[common], help="tightness trade-off tables")
    cu.add_argument("--what", choices=["mes-vs-n", "mes-vs-alpha", "eps-vs-n", "eps-vs-alpha"], required=True)
    cu.add_argument("--alpha")
    cu.add_argument("--n", required=True)
    cu.add_argument("--methods")
    cu.add_argument("--tol", type=float, default=DEFAULT_MES_TOL)
    cu.add_argument("--out")
    cu.set_defaults(func=cmd_curves)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args)
        report = args.func(args)
    except BoundcraftError as e:
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code
    _emit(report, args.human, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
