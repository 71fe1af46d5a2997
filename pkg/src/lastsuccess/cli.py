"""Command-line interface: ``lastsuccess <command> [options]``.

Exit codes: 0 success, 2 input error, 3 internal limit exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from . import __version__
from .core import (
    InstanceTooLarge,
    LastSuccessError,
    Number,
    NumericMode,
    ProblemInstance,
    ValidationError,
    format_number,
    validate,
)
from .dp import Decision, DpSolution, advise, solve
from .families import (
    Family,
    FamilySpec,
    asymptotic_report,
    closed_form_threshold,
    closed_form_value,
    instantiate,
    limits,
)
from .monotonicity import certify, sign_changes, sufficient_condition
from .montecarlo import simulate
from .odds import odds_index, odds_value
from .oracle import brute_force_optimal, evaluate_stop_set

EXIT_OK, EXIT_INPUT, EXIT_LIMIT = 0, 2, 3


class InputError(LastSuccessError):
    pass


# ---------------------------------------------------------------------------
# Reports


def to_json_value(x: Number) -> str | float:
    """Exact values become ``"a/b"`` strings, floats stay JSON numbers."""
    return str(x) if isinstance(x, Fraction) else float(x)


def instance_document(inst: ProblemInstance) -> dict:
    return {"p": [to_json_value(x) for x in inst.p], "w": [to_json_value(x) for x in inst.w]}


def instance_digest(inst: ProblemInstance) -> str:
    canonical = json.dumps(
        {"p": [format_number(x) for x in inst.p], "w": [format_number(x) for x in inst.w]},
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass(frozen=True)
class RunReport:
    command: str
    instance_digest: str
    numeric_mode: str
    results: dict
    tool_version: str = __version__
    instance: dict | None = field(default=None, compare=True)

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "instance_digest": self.instance_digest,
            "mode": self.numeric_mode,
            "results": self.results,
            "version": self.tool_version,
        }
        if self.instance is not None:
            doc["instance"] = self.instance
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        doc = json.loads(text)
        return cls(
            command=doc["command"],
            instance_digest=doc["instance_digest"],
            numeric_mode=doc["mode"],
            results=doc["results"],
            tool_version=doc["version"],
            instance=doc.get("instance"),
        )

    def to_table(self) -> str:
        lines = [
            f"command  {self.command}",
            f"mode     {self.numeric_mode}",
            f"digest   {self.instance_digest[:16]}",
        ]
        rows = None
        for key, value in self.results.items():
            if isinstance(value, list) and value and isinstance(value[0], dict):
                rows = (key, value)
                continue
            if isinstance(value, list):
                value = " ".join(str(v) for v in value) or "(empty)"
            lines.append(f"{key:<20} {value}")
        if rows:
            key, records = rows
            headers = list(records[0])
            cells = [[str(r[h]) for h in headers] for r in records]
            widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(headers)]
            lines.append("")
            lines.append("  ".join(h.ljust(wd) for h, wd in zip(headers, widths)))
            lines.extend("  ".join(c.ljust(wd) for c, wd in zip(row, widths)) for row in cells)
        return "\n".join(lines)


def _report(command: str, inst: ProblemInstance, results: dict) -> RunReport:
    return RunReport(
        command,
        instance_digest(inst),
        inst.mode.value,
        results,
        instance=instance_document(inst),
    )


# ---------------------------------------------------------------------------
# Input


def _split_list(text: str) -> list[str]:
    return [t for t in (s.strip() for s in text.replace(",", " ").split()) if t]


def load_instance(args: argparse.Namespace) -> ProblemInstance:
    if args.input:
        if args.p or args.w:
            raise InputError("give either --input or --p/--w, not both")
        try:
            doc = json.loads(Path(args.input).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {args.input}: {exc}") from None
        if isinstance(doc, dict) and "instance" in doc and "p" not in doc:
            doc = doc["instance"]
        if not isinstance(doc, dict) or "p" not in doc or "w" not in doc:
            raise InputError(f"{args.input}: expected an object with 'p' and 'w' lists")
        raw_p, raw_w = doc["p"], doc["w"]
        if not isinstance(raw_p, list) or not isinstance(raw_w, list):
            raise InputError(f"{args.input}: 'p' and 'w' must be lists")
    elif args.p is not None and args.w is not None:
        raw_p, raw_w = _split_list(args.p), _split_list(args.w)
    else:
        raise InputError("an instance is required: --input FILE or both --p and --w")
    return validate(raw_p, raw_w, args.mode)


def _parse_set(text: str) -> list[int]:
    try:
        return [int(t) for t in _split_list(text)]
    except ValueError:
        raise InputError(f"--set must be a list of indices, got {text!r}") from None


# ---------------------------------------------------------------------------
# Commands


def _solution_results(inst: ProblemInstance, sol: DpSolution) -> dict:
    return {
        "expected_profit": to_json_value(sol.expected_profit),
        "stopping_set": list(sol.stopping_set),
        "table": [
            {
                "k": k,
                "p": to_json_value(inst.prob(k)) if k else "",
                "w": to_json_value(inst.payoff(k)),
                "e_stop": to_json_value(sol.e_stop[k]) if k else "",
                "e_keep": to_json_value(sol.e_keep[k]),
                "stop": k in sol.stopping_set,
            }
            for k in range(inst.n + 1)
        ],
    }


def cmd_solve(args: argparse.Namespace) -> RunReport:
    inst = load_instance(args)
    return _report("solve", inst, _solution_results(inst, solve(inst)))


def cmd_odds(args: argparse.Namespace) -> RunReport:
    inst = load_instance(args)
    sol = solve(inst)
    s = odds_index(inst)
    verdict = certify(inst, sol)
    return _report(
        "odds",
        inst,
        {
            "s": s,
            "degenerate": inst.prob(s) == 1,
            "value": to_json_value(odds_value(inst, s)),
            "monotone": verdict.monotone,
            "dp_expected_profit": to_json_value(sol.expected_profit),
        },
    )


def cmd_monotone(args: argparse.Namespace) -> RunReport:
    inst = load_instance(args)
    sol = solve(inst)
    verdict = certify(inst, sol)
    return _report(
        "monotone",
        inst,
        {
            "monotone": verdict.monotone,
            "certificate": verdict.certificate.value,
            "witness": list(verdict.witness) if verdict.witness else None,
            "sufficient_condition": sufficient_condition(inst),
            "sign_changes": sign_changes(inst),
            "stopping_set": list(sol.stopping_set),
        },
    )


def cmd_oracle(args: argparse.Namespace) -> RunReport:
    inst = load_instance(args)
    best = brute_force_optimal(inst)
    sol = solve(inst)
    return _report(
        "oracle",
        inst,
        {
            "set": list(best.set),
            "value": to_json_value(best.value),
            "dp_expected_profit": to_json_value(sol.expected_profit),
            "dp_set_value": to_json_value(evaluate_stop_set(inst, sol.stopping_set)),
        },
    )


def cmd_simulate(args: argparse.Namespace) -> RunReport:
    inst = load_instance(args)
    members = _parse_set(args.set) if args.set is not None else list(solve(inst).stopping_set)
    if args.trials < 1:
        raise InputError("--trials must be positive")
    if not 0 <= args.seed < 2**64:
        raise InputError("--seed must be a 64-bit unsigned integer")
    result = simulate(inst, members, args.trials, args.seed, workers=args.workers)
    return _report(
        "simulate",
        inst,
        {
            "set": sorted(set(members)),
            "mean": result.mean,
            "stderr": result.stderr,
            "trials": result.trials,
            "seed": result.seed,
            "exact_value": to_json_value(evaluate_stop_set(inst, members)),
        },
    )


def _family_spec(args: argparse.Namespace, n: int) -> FamilySpec:
    prob = None
    if args.prob is not None:
        try:
            prob = Fraction(args.prob)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"--prob: cannot parse {args.prob!r}") from None
    try:
        return FamilySpec(Family(args.name), n, prob)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_family(args: argparse.Namespace) -> RunReport:
    if args.grid:
        try:
            grid = [int(t) for t in _split_list(args.grid)]
        except ValueError:
            raise InputError(f"--grid must be a list of sizes, got {args.grid!r}") from None
        spec = _family_spec(args, grid[0] if grid else 1)
        rows = asymptotic_report(spec.family, grid, spec.p)
        lim = limits(spec.family)
        results = {
            "family": spec.family.value,
            "limit_s_ratio": lim[0] if lim else None,
            "limit_value_ratio": lim[1] if lim else None,
            "rows": [
                {"n": r.n, "s": r.s, "s/n": r.s_ratio, "E": r.value, "E/n": r.value_ratio}
                for r in rows
            ],
        }
        digest = hashlib.sha256(json.dumps([spec.family.value, grid, str(spec.p)]).encode())
        return RunReport("family", digest.hexdigest(), NumericMode.FLOAT.value, results)

    if args.n is None:
        raise InputError("family needs --n or --grid")
    spec = _family_spec(args, args.n)
    inst = instantiate(spec, args.mode or NumericMode.EXACT)
    s = odds_index(inst)
    sol = solve(inst)
    results = {
        "family": spec.family.value,
        "n": spec.n,
        "s": s,
        "closed_form_s": closed_form_threshold(spec),
        "E": to_json_value(odds_value(inst, s)),
        "dp_expected_profit": to_json_value(sol.expected_profit),
        "monotone": certify(inst, sol).monotone,
    }
    if spec.family is Family.CONSTANT_P:
        results["p"] = str(spec.p)
        value = closed_form_value(spec)
        results["closed_form_E"] = to_json_value(value if inst.exact else float(value))
    return _report("family", inst, results)


def advise_session(sol: DpSolution, tokens: Iterable[str]) -> Iterator[str]:
    """Apply the optimal rule to a stream of 0/1 outcomes, one line per event.

    Malformed tokens produce a complaint and do not advance the trial index.
    """
    k = 1
    for token in tokens:
        token = token.strip()
        if token not in ("0", "1"):
            yield f"invalid outcome {token!r} for trial {k}; enter 0 or 1"
            continue
        if advise(sol, k, token == "1") is Decision.STOP:
            yield f"{k}: STOP  expected payoff if last: {format_number(sol.e_stop[k])}"
            return
        yield f"{k}: CONTINUE"
        if k == sol.n:
            yield "END: no stop, unpaid"
            return
        k += 1


def _stdin_tokens(prompt: bool) -> Iterator[str]:
    while True:
        if prompt:
            print("outcome [0/1]: ", end="", file=sys.stderr, flush=True)
        line = sys.stdin.readline()
        if not line:
            return
        yield from line.split() or [""]


def cmd_advise(args: argparse.Namespace) -> None:
    inst = load_instance(args)
    sol = solve(inst)
    if args.outcomes is not None:
        tokens: Iterable[str] = _split_list(args.outcomes)
    else:
        tokens = _stdin_tokens(sys.stdin.isatty())
    for line in advise_session(sol, tokens):
        print(line, flush=True)


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lastsuccess",
        description="Optimal stopping on the last success of weighted Bernoulli trials.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_instance(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", help='JSON file {"p": [...], "w": [...]} or a JSON report')
        p.add_argument("--p", help="comma-separated probabilities, e.g. 1/2,1/3")
        p.add_argument("--w", help="comma-separated payoffs")
        add_common(p)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--mode", choices=[m.value for m in NumericMode], default=None)
        p.add_argument("--format", choices=["table", "json"], default="table")

    for name, helptext in (
        ("solve", "run the dynamic program"),
        ("odds", "weighted odds threshold and value"),
        ("monotone", "certify or refute a threshold rule"),
        ("oracle", "exhaustive search over all stopping sets (n <= 22)"),
    ):
        add_instance(sub.add_parser(name, help=helptext))

    sim = sub.add_parser("simulate", help="Monte Carlo estimate of a stopping-set rule")
    add_instance(sim)
    sim.add_argument("--set", help="stopping set, e.g. 4,5,7 (default: the optimal set)")
    sim.add_argument("--trials", type=int, default=100_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--workers", type=int, default=1)

    fam = sub.add_parser("family", help="closed forms for the secretary-type families")
    fam.add_argument("--name", required=True, choices=[f.value for f in Family])
    fam.add_argument("--n", type=int)
    fam.add_argument("--prob", help="success probability for constant-p, e.g. 1/2")
    fam.add_argument("--grid", help="comma-separated sizes for an asymptotic table")
    add_common(fam)

    adv = sub.add_parser("advise", help="live advice over a stream of outcomes")
    add_instance(adv)
    adv.add_argument("--outcomes", help="comma-separated 0/1 outcomes (default: read stdin)")
    return parser


COMMANDS = {
    "solve": cmd_solve,
    "odds": cmd_odds,
    "monotone": cmd_monotone,
    "oracle": cmd_oracle,
    "simulate": cmd_simulate,
    "family": cmd_family,
    "advise": cmd_advise,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except (ValidationError, InputError) as exc:
        where = ""
        if isinstance(exc, ValidationError) and exc.field:
            where = f" (field {exc.field}" + (f", index {exc.index})" if exc.index else ")")
        print(f"lastsuccess: error: {exc}{where}", file=sys.stderr)
        return EXIT_INPUT
    except InstanceTooLarge as exc:
        print(f"lastsuccess: limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    if report is not None:
        text = report.to_json() if args.format == "json" else report.to_table()
        sys.stdout.write(text + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
