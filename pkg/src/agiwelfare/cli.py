"""Command-line model checker.

Usage::

    agiwelfare diagnose economy.json
    agiwelfare pareto --scenario classical_e0 --format text
    agiwelfare fuzz --seed 7 --count 100 --ablate iv

Every subcommand reads an economy file or a built-in ``--scenario`` and
prints one machine-format record (default) or an aligned text summary.

Exit codes: 0 pass or efficient, 2 a condition or clause failed,
3 an inefficiency was found, 4 input error, 5 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field

from .conditions import CONDITIONS, MARGINS, check_condition_iv, diagnose
from .delegation import certify_delegation_failure, delegation_loss_and_bound
from .economy import Status, validate_economy
from .equilibrium import epsilon_gap_bound, verify_equilibrium
from .errors import DomainError, InputError, ResourceCapError
from .externality import apply_correction, detect_autonomy_externalities, pigouvian_tau
from .feasibility import DEFAULT_CAP
from .io import emit_economy, parse_economy, parse_economy_file
from .lindahl import LindahlBlock, cross_state_pareto_check, lindahl_budget_check
from .pareto import autonomy_pareto_check, classical_pareto_check, compare_status_assignments
from .reports import dumps, record, table
from .scenarios import (
    ABLATIONS,
    SCENARIOS,
    generate_epsilon_instance,
    generate_random_economy,
    scenario,
)

EXIT_OK, EXIT_CONDITION, EXIT_INEFFICIENT, EXIT_INPUT, EXIT_CAP = 0, 2, 3, 4, 5
VERDICTS = {EXIT_OK: "pass", EXIT_CONDITION: "condition-failure", EXIT_INEFFICIENT: "inefficient"}

__all__ = ["main", "run", "build_parser"]


@dataclass
class Outcome:
    code: int
    payload: dict
    text: list = field(default_factory=list)


@dataclass
class Loaded:
    economy: object
    candidate: object
    lindahl: object
    expected: object
    source: str


# ---------------------------------------------------------------- loading

def _load(args, need_candidate: bool = True, validate: bool = True) -> Loaded:
    if args.scenario is not None:
        if args.file is not None:
            raise InputError("give either FILE or --scenario, not both")
        e, cand, exp = scenario(args.scenario)
        lind = exp.extra.get("lindahl")
        if args.exact:
            parsed = parse_economy(emit_economy(e, cand, lind), exact=True)
            e, cand, lind = parsed.economy, parsed.candidate, parsed.lindahl
        loaded = Loaded(e, cand, lind, exp, f"scenario:{args.scenario}")
    elif args.file is not None:
        parsed = parse_economy_file(args.file, exact=args.exact, validate=validate)
        loaded = Loaded(parsed.economy, parsed.candidate, parsed.lindahl, None, str(args.file))
    else:
        raise InputError("no economy given; pass FILE or --scenario NAME")
    if need_candidate and loaded.candidate is None:
        raise InputError(f"{loaded.source} has no candidate section")
    return loaded


def _rows_conditions(report) -> list:
    return [
        (c, MARGINS[c], report.entries[c].verdict, report.entries[c].note) for c in CONDITIONS
    ]


def _pareto_text(v) -> list:
    lines = [f"efficient: {'yes' if v.efficient else 'no'}"]
    if not v.efficient:
        lines.append(f"strictly improved: {v.improved_entity}")
        rows = [(k, b, a) for k, (b, a) in sorted(v.welfare_table.items())]
        lines.append(table(("entity", "before", "after"), rows))
        rows = [(k, list(b)) for k, b in sorted(v.improver.bundles.items())]
        lines.append(table(("holder", "improver bundle"), rows))
    lines.extend(f"note: {n}" for n in v.notes)
    return lines


# ---------------------------------------------------------------- subcommands

def cmd_validate(args) -> Outcome:
    if args.scenario is not None:
        e = _load(args, need_candidate=False).economy
    elif args.file is not None:
        with open(args.file) as fh:
            text = fh.read()
        e = parse_economy(text, exact=args.exact, validate=False).economy
    else:
        raise InputError("no economy given; pass FILE or --scenario NAME")
    res = validate_economy(e)
    rows = [(v.entity, v.clause, v.message) for v in res.violations]
    text = ["valid" if res.ok else "invalid"]
    if rows:
        text.append(table(("entity", "clause", "message"), rows))
    return Outcome(EXIT_OK if res.ok else EXIT_INPUT, res.to_dict(), text)


def cmd_check_eq(args) -> Outcome:
    ld = _load(args)
    v = verify_equilibrium(ld.economy, ld.candidate)
    rows = [(k, c.clause, c.passed, len(c.failures)) for k, c in v.clauses.items()]
    text = [table(("clause", "name", "passed", "failures"), rows)]
    return Outcome(EXIT_OK if v.passed else EXIT_CONDITION, v.to_dict(), text)


def cmd_diagnose(args) -> Outcome:
    # status-map violations surface as condition (i), so skip parse-time validation
    ld = _load(args, need_candidate=False, validate=False)
    rep = diagnose(ld.economy, ld.candidate, chain_mode=args.chain_mode)
    text = [table(("condition", "margin", "verdict", "note"), _rows_conditions(rep))]
    ff = rep.first_fail
    text.append(f"first to fail: {'none' if ff is None else f'({ff}) {MARGINS[ff]}'}")
    return Outcome(EXIT_OK if rep.all_pass else EXIT_CONDITION, rep.to_dict(), text)


def cmd_pareto(args) -> Outcome:
    ld = _load(args)
    fs = ld.candidate.state
    if args.classical:
        v = classical_pareto_check(ld.economy, fs, cap=args.cap)
    else:
        v = autonomy_pareto_check(ld.economy, fs, strict=args.strict, cap=args.cap)
    return Outcome(EXIT_OK if v.efficient else EXIT_INEFFICIENT, v.to_dict(), _pareto_text(v))


def cmd_scenario(args) -> Outcome:
    if args.name not in SCENARIOS:
        raise InputError(f"unknown scenario {args.name!r}; choose from {sorted(SCENARIOS)}")
    args.scenario, args.file = args.name, None
    ld = _load(args)
    if args.emit:
        return Outcome(EXIT_OK, {"economy": emit_economy(ld.economy, ld.candidate, ld.lindahl)},
                       [emit_economy(ld.economy, ld.candidate, ld.lindahl).rstrip("\n")])
    rep = diagnose(ld.economy, ld.candidate)
    v = autonomy_pareto_check(ld.economy, ld.candidate.state, cap=args.cap)
    exp = ld.expected
    matches = rep.first_fail == exp.first_fail and (exp.efficient is None or exp.efficient == v.efficient)
    payload = {
        "name": args.name,
        "diagnosis": rep.to_dict(),
        "pareto": v.to_dict(),
        "expected": {"first_fail": exp.first_fail, "efficient": exp.efficient},
        "matches_expected": matches,
    }
    text = [table(("condition", "margin", "verdict", "note"), _rows_conditions(rep))]
    text.append(f"first to fail: {rep.first_fail or 'none'} (expected {exp.first_fail or 'none'})")
    text.extend(_pareto_text(v))
    if not rep.all_pass:
        code = EXIT_CONDITION
    elif not v.efficient:
        code = EXIT_INEFFICIENT
    else:
        code = EXIT_OK
    return Outcome(code, payload, text)


def cmd_fuzz(args) -> Outcome:
    if args.count < 1:
        raise InputError("--count must be positive")
    ablate = None if args.ablate is None else args.ablate.strip("()").lower()
    if ablate is not None and ablate not in ABLATIONS:
        raise InputError(f"cannot ablate {args.ablate!r}; choose from {list(ABLATIONS)}")
    t0 = time.perf_counter()
    counts = {"instances": 0, "all_pass": 0, "equilibrium": 0, "efficient": 0,
              "sound": 0, "named_exactly": 0}
    counterexamples, misdiagnosed = [], []
    for seed in range(args.seed, args.seed + args.count):
        e, cand = generate_random_economy(seed, ablate=ablate)
        rep = diagnose(e, cand)
        eq = verify_equilibrium(e, cand).passed
        eff = autonomy_pareto_check(e, cand.state, cap=args.cap).efficient
        counts["instances"] += 1
        counts["all_pass"] += rep.all_pass
        counts["equilibrium"] += eq
        counts["efficient"] += eff
        premise = rep.all_pass and eq
        if not premise or eff:
            counts["sound"] += 1
        else:
            counterexamples.append(seed)
        if ablate is not None:
            if rep.failing == [ablate]:
                counts["named_exactly"] += 1
            else:
                misdiagnosed.append({"seed": seed, "failing": rep.failing})
    elapsed = time.perf_counter() - t0
    payload = {"seed": args.seed, "count": args.count, "ablate": ablate, "counts": counts,
               "counterexamples": counterexamples, "misdiagnosed": misdiagnosed}
    n = counts["instances"]
    rows = [(k, f"{v}/{n}") for k, v in counts.items()
            if k != "instances" and (ablate is not None or k != "named_exactly")]
    text = [table(("tally", "count"), rows), f"elapsed: {elapsed:.2f}s"]
    if counterexamples:
        code = EXIT_INEFFICIENT
    elif counts["all_pass"] < n or counts["equilibrium"] < n:
        code = EXIT_CONDITION
    else:
        code = EXIT_OK
    return Outcome(code, payload, text)


def cmd_delegation_bound(args) -> Outcome:
    ld = _load(args)
    b = delegation_loss_and_bound(ld.economy, args.delegate, ld.candidate)
    payload = {"bound": b.to_dict()}
    text = [table(("delegate", "principal", "loss", "bound", "holds", "regime"),
                  [(b.delegate, b.principal, b.loss, b.bound, b.holds, b.regime)])]
    try:
        cert = certify_delegation_failure(ld.economy, args.delegate, ld.candidate)
    except DomainError as exc:
        payload["certification"] = {"suspended": False, "message": str(exc)}
        text.append(str(exc))
    else:
        payload["certification"] = cert.to_dict()
        text.append(cert.message)
    text.extend(f"note: {n}" for n in b.notes)
    return Outcome(EXIT_OK if b.holds else EXIT_CONDITION, payload, text)


def cmd_pigouvian(args) -> Outcome:
    ld = _load(args)
    e, cand = ld.economy, ld.candidate
    tau = pigouvian_tau(e, args.channel, cand)
    payload = {"channel": args.channel, "tau": dict(sorted(tau.items()))}
    text = [table(("action", "tau"), sorted(tau.items()))]
    if not args.apply:
        return Outcome(EXIT_OK, payload, text)
    before_iv = check_condition_iv(e, cand)
    before = autonomy_pareto_check(e, cand.state, cap=args.cap)
    e2 = apply_correction(e, args.channel, tau, state=cand.state.state)
    after_iv = check_condition_iv(e2, cand)
    after = autonomy_pareto_check(e2, cand.state, cap=args.cap)
    payload["before"] = {"condition_iv": before_iv.to_dict(), "pareto": before.to_dict()}
    payload["after"] = {"condition_iv": after_iv.to_dict(), "pareto": after.to_dict(),
                        "remaining_externalities": detect_autonomy_externalities(e2, cand)}
    text.append(table(("stage", "condition (iv)", "efficient"),
                      [("before", before_iv.verdict, before.efficient),
                       ("after", after_iv.verdict, after.efficient)]))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(emit_economy(e2, cand, ld.lindahl))
        text.append(f"corrected economy written to {args.output}")
    if not after_iv.passed:
        code = EXIT_CONDITION
    elif not after.efficient:
        code = EXIT_INEFFICIENT
    else:
        code = EXIT_OK
    return Outcome(code, payload, text)


def _parse_vector(s: str) -> tuple:
    from fractions import Fraction

    try:
        return tuple(Fraction(x.strip()) for x in s.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"malformed vector {s!r}") from None


def cmd_epsilon(args) -> Outcome:
    if args.eps < 0:
        raise InputError("--eps must be nonnegative")
    if args.seed is not None:
        if args.file is not None or args.scenario is not None:
            raise InputError("--seed generates its own instance; drop FILE and --scenario")
        e, cand, delta = generate_epsilon_instance(args.seed, args.eps)
        source = f"epsilon-instance:{args.seed}"
    else:
        ld = _load(args)
        e, cand, source = ld.economy, ld.candidate, ld.source
        if args.delta is None:
            delta = tuple(0 for _ in range(e.L))
        else:
            delta = _parse_vector(args.delta)
            if not e.exact:
                delta = tuple(float(d) for d in delta)
    r = epsilon_gap_bound(e, cand, args.eps, delta, cap=args.cap)
    payload = {"epsilon": args.eps, "delta": [float(d) for d in delta], "source": source, **r.to_dict()}
    text = [table(("epsilon", "measured gap", "bound", "holds"),
                  [(args.eps, r.measured_gap, r.bound, r.holds)])]
    return Outcome(EXIT_OK if r.holds else EXIT_CONDITION, payload, text)


def cmd_lindahl(args) -> Outcome:
    ld = _load(args)
    e, cand = ld.economy, ld.candidate
    block = ld.lindahl
    if block is None:
        block = LindahlBlock.zero(e.welfare_bearing_ordered(), [s.state_id for s in e.states])
    budget = lindahl_budget_check(e, cand, block, cross_state=args.cross_state)
    v = cross_state_pareto_check(e, cand.state, block, cap=args.cap)
    payload = {"block": block.to_dict(), "budget": budget.to_dict(), "pareto": v.to_dict()}
    text = [f"personalised budgets: {'pass' if budget.passed else 'fail'}"] + _pareto_text(v)
    if not v.efficient:
        code = EXIT_INEFFICIENT
    elif not budget.passed:
        code = EXIT_CONDITION
    else:
        code = EXIT_OK
    return Outcome(code, payload, text)


def cmd_compare_sigma(args) -> Outcome:
    ld = _load(args)
    e = ld.economy
    if args.file2 is not None:
        other = parse_economy_file(args.file2, exact=args.exact, validate=False).economy
        sigma1, sigma2 = dict(e.sigma), dict(other.sigma)
    elif ld.expected is not None and "sigma1" in ld.expected.extra:
        base = dict(e.sigma)
        sigma1 = {**base, **ld.expected.extra["sigma1"]}
        sigma2 = {**base, **ld.expected.extra["sigma2"]}
    else:
        raise InputError("compare-sigma needs FILE2 holding the second status assignment")
    for sig in (sigma1, sigma2):
        for i in e.ids:
            if i not in sig:
                raise InputError(f"entity {i!r} has no status in one of the assignments")
    cmp = compare_status_assignments(e, ld.candidate.state, sigma1, sigma2, cap=args.cap)
    rows = [(i, Status(sigma1[i]).value, Status(sigma2[i]).value) for i in e.ids]
    text = [table(("entity", "sigma1", "sigma2"), rows),
            f"sigma1 efficient: {'yes' if cmp.first.efficient else 'no'}",
            f"sigma2 efficient: {'yes' if cmp.second.efficient else 'no'}",
            f"verdicts {'agree' if cmp.agree else 'disagree'}"]
    text.extend(cmp.policy_differences)
    code = EXIT_OK if cmp.first.efficient and cmp.second.efficient else EXIT_INEFFICIENT
    return Outcome(code, cmp.to_dict(), text)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--exact", action="store_true", help="rational arithmetic, zero tolerance")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")
    common.add_argument("--format", choices=("json", "text"), default="json")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("file", nargs="?", default=None, metavar="FILE")
    source.add_argument("--scenario", choices=sorted(SCENARIOS), default=None)

    parser = argparse.ArgumentParser(prog="agiwelfare", description="Finite AGI economy model checker.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, *parents, **kw):
        p = sub.add_parser(name, parents=[common, *parents], **kw)
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, source, help="structural validation")
    add("check-eq", cmd_check_eq, source, help="equilibrium clauses at the candidate")
    p = add("diagnose", cmd_diagnose, source, help="conditions (i) to (vii)")
    p.add_argument("--chain-mode", choices=("sum", "incremental"), default="sum")
    p = add("pareto", cmd_pareto, source, help="exhaustive Pareto check")
    p.add_argument("--strict", action="store_true", help="vary pinned coordinates too")
    p.add_argument("--classical", action="store_true", help="classical oracle on consumption only")
    p = add("scenario", cmd_scenario, help="run a built-in scenario")
    p.add_argument("name", metavar="NAME")
    p.add_argument("--emit", action="store_true", help="print the scenario as an economy file")
    p = add("fuzz", cmd_fuzz, help="seeded random economies")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--ablate", default=None, metavar="COND")
    p = add("delegation-bound", cmd_delegation_bound, source, help="delegation loss against its bound")
    p.add_argument("delegate")
    p = add("pigouvian", cmd_pigouvian, source, help="corrective schedule for a channel")
    p.add_argument("channel")
    p.add_argument("--apply", action="store_true", help="apply the correction and re-check")
    p.add_argument("--output", default=None, help="write the corrected economy here")
    p = add("epsilon", cmd_epsilon, source, help="welfare gap under perturbed prices")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", default=None, help="comma-separated perturbation, default zero")
    p.add_argument("--seed", type=int, default=None, help="use a generated perturbation instance")
    p = add("lindahl", cmd_lindahl, source, help="personalised state prices")
    p.add_argument("--cross-state", action="store_true", help="budgets may cross states")
    p = add("compare-sigma", cmd_compare_sigma, help="oracle under two status assignments")
    p.add_argument("file", nargs="?", default=None, metavar="FILE")
    p.add_argument("file2", nargs="?", default=None, metavar="FILE2")
    p.add_argument("--scenario", choices=sorted(SCENARIOS), default=None)
    return parser


def run(argv=None) -> tuple:
    """Parse ``argv`` and run the subcommand.  Returns ``(exit_code, output)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    source = getattr(args, "file", None) or (
        f"scenario:{args.scenario}" if getattr(args, "scenario", None) else None)
    try:
        if args.cap < 1:
            raise InputError("--cap must be positive")
        out = args.fn(args)
    except ResourceCapError as exc:
        return EXIT_CAP, _error(args, EXIT_CAP, "resource-cap", str(exc), source,
                                {"size": exc.size, "cap": exc.cap})
    except (InputError, OSError) as exc:
        extra = {}
        if hasattr(exc, "line"):
            extra = {"line": exc.line, "column": exc.column}
        return EXIT_INPUT, _error(args, EXIT_INPUT, "input-error", str(exc), source, extra)
    if args.format == "json":
        verdict = VERDICTS.get(out.code, "input-error")
        text = dumps(record(args.command, out.code, verdict, out.payload, source))
    else:
        text = "\n".join(out.text) + "\n"
    return out.code, text


def _error(args, code, verdict, message, source, extra) -> str:
    if args.format == "json":
        return dumps(record(args.command, code, verdict, {"error": message, **extra}, source))
    return f"error: {message}\n"


def main(argv=None) -> int:
    code, text = run(argv)
    failed = code in (EXIT_INPUT, EXIT_CAP)
    (sys.stderr if failed and text.startswith("error:") else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
