"""Command-line front end.

Every subcommand writes exactly one JSON record to stdout (fixed field
order: version, command, status, then payload) and logs to stderr.  Exit
codes: 0 = command completed (the status field carries the outcome),
2 = input error, 3 = internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__, oracle
from .abelian import BudgetExhausted, check_entailment, check_identity, solve_over_descriptor
from .groups import NPHard, Tractable, biembed_normal_form, classify, format_descriptor, parse_descriptor
from .oracle import brute_solve_group, campaign_params, random_instance, witness_group
from .pseudosiggers import verify_pseudo_siggers
from .semilattice import (
    FiniteSemilattice,
    check_entailment_semilattice,
    check_identity_semilattice,
    solve_U,
    solve_finite,
)
from .terms import (
    GROUP,
    SEMILATTICE,
    Eq,
    ParseError,
    flatten,
    format_instance,
    format_term,
    linearize_group,
    parse_instance,
    parse_term_text,
    term_variables,
)
from .verdict import BUDGET, SAT

log = logging.getLogger("neqsolve")

BUDGET_ENV = "NEQSOLVE_BUDGET"


class InputError(Exception):
    """Bad flags, unreadable files, or unparsable input: exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _record(command, status, **payload):
    rec = {"version": __version__, "command": command, "status": status}
    rec.update(payload)
    return rec


def _read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e


def _budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        if args.budget < 1:
            raise InputError("--budget must be a positive integer")
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise InputError(f"bad {BUDGET_ENV} value: {env!r}") from None
        if value < 1:
            raise InputError(f"bad {BUDGET_ENV} value: {env!r}")
        return value
    return oracle.DEFAULT_BUDGET


def _structure(args):
    """Resolve --structure into ('U', None) or ('group', descriptor)."""
    text = args.structure.strip()
    if text == "U":
        return SEMILATTICE, None
    try:
        return GROUP, parse_descriptor(text)
    except ValueError as e:
        raise InputError(str(e)) from e


def _classification_payload(c):
    if isinstance(c, Tractable):
        return {"status": "tractable", "m": c.m, "with_double": c.with_double}
    return {"status": "np-hard"}


def _attach_verdict(rec, verdict):
    if verdict.status == SAT:
        rec["witness"] = verdict.witness.to_json()
    elif verdict.reason is not None:
        rec["reason"] = verdict.reason
        if verdict.pair is not None:
            rec["pair"] = list(verdict.pair)
    return rec


# -- subcommands -------------------------------------------------------------


def cmd_solve(args):
    kind, d = _structure(args)
    try:
        inst = parse_instance(_read_file(args.instance))
    except ParseError as e:
        raise InputError(str(e)) from e
    if inst.signature.kind != kind:
        raise InputError(
            f"instance has structure {inst.signature.kind!r} but the solve target is {args.structure!r}"
        )
    flat = flatten(inst)
    if kind == SEMILATTICE:
        verdict = solve_U(flat)
        if verdict.status == SAT and not verdict.witness.verify(flat):
            raise RuntimeError("witness failed re-verification")
        rec = _record("solve", verdict.status, structure="U", method="polynomial")
        return _attach_verdict(rec, verdict)
    ab = linearize_group(flat)
    c, method, verdict = solve_over_descriptor(d, ab, _budget(args))
    log.info("classified %s as %s; solving via %s", format_descriptor(d), _classification_payload(c)["status"], method)
    if verdict.status == SAT and not verdict.witness.verify(ab):
        raise RuntimeError("witness failed re-verification")
    rec = _record(
        "solve",
        verdict.status,
        structure=format_descriptor(d),
        classification=_classification_payload(c),
        method=method,
    )
    return _attach_verdict(rec, verdict)


def cmd_classify(args):
    try:
        d = parse_descriptor(args.group)
    except ValueError as e:
        raise InputError(str(e)) from e
    c = classify(d)
    nf = [
        {"p": p, "omega_level": m_p, "finite": [[n, s] for n, s in finite]}
        for p, m_p, finite in biembed_normal_form(d).parts
    ]
    status = "tractable" if isinstance(c, Tractable) else "np-hard"
    rec = _record("classify", status, descriptor=format_descriptor(d), normal_form=nf)
    if isinstance(c, Tractable):
        rec["m"] = c.m
        rec["with_double"] = c.with_double
    return rec


def _parse_side(text: str, kind: str, names: list):
    try:
        term, _ = parse_term_text(text, kind, declared=None)
    except ParseError as e:
        raise InputError(str(e)) from e
    term_variables(term, names)
    return term


def _parse_assumptions(path: str, kind: str):
    try:
        inst = parse_instance(_read_file(path))
    except ParseError as e:
        raise InputError(str(e)) from e
    if inst.signature.kind != kind:
        raise InputError(f"assumption file has structure {inst.signature.kind!r}, expected {kind!r}")
    equations = []
    for c in inst.constraints:
        if not isinstance(c, Eq):
            raise InputError("assumption file must contain only eq constraints")
        equations.append((c.lhs, c.rhs))
    return equations


def _identity_like(args, command: str):
    kind, d = _structure(args)
    names: list = []
    lhs = _parse_side(args.lhs, kind, names)
    rhs = _parse_side(args.rhs, kind, names)
    assume_path = getattr(args, "assume", None)
    equations = _parse_assumptions(assume_path, kind) if assume_path else []
    try:
        if kind == SEMILATTICE:
            if command == "entail":
                holds = check_entailment_semilattice(equations, (lhs, rhs))
            else:
                holds = check_identity_semilattice(lhs, rhs)
        else:
            budget = _budget(args)
            if command == "entail":
                holds = check_entailment(equations, (lhs, rhs), d, budget)
            else:
                holds = check_identity(lhs, rhs, d, budget)
    except BudgetExhausted:
        return _record(
            command,
            BUDGET,
            structure=args.structure.strip(),
            lhs=format_term(lhs),
            rhs=format_term(rhs),
        )
    return _record(
        command,
        "valid" if holds else "invalid",
        structure="U" if kind == SEMILATTICE else format_descriptor(d),
        lhs=format_term(lhs),
        rhs=format_term(rhs),
    )


def cmd_check_identity(args):
    return _identity_like(args, "check-identity")


def cmd_entail(args):
    return _identity_like(args, "entail")


def cmd_verify_ps(args):
    if args.n < 1:
        raise InputError("--n must be >= 1")
    if args.truncation < 0 or args.samples < 0:
        raise InputError("--truncation and --samples must be nonnegative")
    report = verify_pseudo_siggers(args.n, args.truncation, args.samples, args.seed)
    return _record("verify-ps", "pass" if report.passed else "fail", report=report.to_json())


def cmd_fuzz(args):
    if args.count < 0:
        raise InputError("--count must be nonnegative")
    kind, d = _structure(args)
    budget = _budget(args)
    if kind == SEMILATTICE:
        max_vars = args.max_vars if args.max_vars is not None else 3
        if max_vars > 3:
            raise InputError("semilattice fuzzing is exact only up to 3 variables")
        reference = FiniteSemilattice.subsets(7)
        structure_name = "U"
    else:
        max_vars = args.max_vars if args.max_vars is not None else 5
        c = classify(d)
        if isinstance(c, NPHard):
            raise InputError("fuzz oracle covers tractable group descriptors and U only")
        structure_name = format_descriptor(d)
    if max_vars < 1:
        raise InputError("--max-vars must be >= 1")

    params = campaign_params(args.seed, args.count, max_vars, args.max_eqs, args.max_neqs)
    log_fh = open(args.log, "w", encoding="utf-8") if args.log else None
    agreements = 0
    disagreements = []
    try:
        for i, p in enumerate(params):
            inst = random_instance(p, kind)
            flat = flatten(inst)
            if kind == SEMILATTICE:
                solver = solve_U(flat).status
                ref = solve_finite(reference, flat, budget)
            else:
                ab = linearize_group(flat)
                solver = solve_over_descriptor(d, ab, budget)[2].status
                ref = brute_solve_group(witness_group(c, len(ab.disequalities)), ab, budget)
            if ref.status == BUDGET:
                return _record(
                    "fuzz", BUDGET, structure=structure_name, count=args.count, completed=i
                )
            agree = solver == ref.status
            if agree:
                agreements += 1
            elif len(disagreements) < 5:
                disagreements.append(
                    {
                        "seed": p.seed,
                        "instance": format_instance(inst),
                        "verdict_solver": solver,
                        "verdict_oracle": ref.status,
                    }
                )
            if log_fh is not None:
                log_fh.write(
                    json.dumps(
                        {
                            "seed": p.seed,
                            "descriptor": structure_name,
                            "verdict_solver": solver,
                            "verdict_oracle": ref.status,
                            "agree": agree,
                        }
                    )
                    + "\n"
                )
            if (i + 1) % 200 == 0:
                log.info("fuzz progress: %d/%d", i + 1, args.count)
    finally:
        if log_fh is not None:
            log_fh.close()
    status = "pass" if agreements == args.count else "fail"
    rec = _record(
        "fuzz",
        status,
        structure=structure_name,
        count=args.count,
        agreements=agreements,
        params={"max_vars": max_vars, "max_eqs": args.max_eqs, "max_neqs": args.max_neqs},
    )
    if disagreements:
        rec["disagreements"] = disagreements
    return rec


# -- wiring ------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="neqsolve", description=__doc__)
    parser.add_argument("--verbose", action="store_true", help="info-level logs on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def structure_flag(p):
        p.add_argument("--structure", required=True, metavar="DESC|U",
                       help="group descriptor like '2^2:1 + 2^1:w', or U")

    p = sub.add_parser("solve", help="decide an instance file")
    structure_flag(p)
    p.add_argument("--instance", required=True, help="instance file path")
    p.add_argument("--budget", type=int, default=None, help="search node budget")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", help="tractable or np-hard, with normal form")
    p.add_argument("--group", required=True, help="group descriptor")
    p.set_defaults(func=cmd_classify)

    for name, helptext in (
        ("check-identity", "does lhs = rhs hold under every assignment?"),
        ("entail", "do the assumptions force lhs = rhs?"),
    ):
        p = sub.add_parser(name, help=helptext)
        structure_flag(p)
        p.add_argument("--lhs", required=True, help="left term, e.g. '(+ x x)'")
        p.add_argument("--rhs", required=True, help="right term")
        if name == "entail":
            p.add_argument("--assume", default=None, help="instance file with eq constraints")
        p.add_argument("--budget", type=int, default=None)
        p.set_defaults(func=cmd_check_identity if name == "check-identity" else cmd_entail)

    p = sub.add_parser("verify-ps", help="sampled check of the 6-ary identity witness")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--truncation", type=int, default=8)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_ps)

    p = sub.add_parser("fuzz", help="differential campaign against brute force")
    structure_flag(p)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-vars", type=int, default=None, dest="max_vars")
    p.add_argument("--max-eqs", type=int, default=6, dest="max_eqs")
    p.add_argument("--max-neqs", type=int, default=4, dest="max_neqs")
    p.add_argument("--log", default=None, help="write one JSONL record per trial")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_fuzz)
    return parser


def _emit(rec) -> None:
    sys.stdout.write(json.dumps(rec) + "\n")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    command = next((a for a in argv if not a.startswith("-")), None)
    try:
        args = _build_parser().parse_args(argv)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        _emit(_record(command, "error", error=str(e)))
        return 2
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    command = args.command
    try:
        rec = args.func(args)
    except InputError as e:
        log.error("%s", e)
        _emit(_record(command, "error", error=str(e)))
        return 2
    except Exception as e:  # pragma: no cover - defensive
        log.exception("internal error")
        _emit(_record(command, "error", error=f"internal error: {e}"))
        return 3
    _emit(rec)
    return 0


if __name__ == "__main__":
    sys.exit(main())
