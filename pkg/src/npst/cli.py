"""Command line entry point: ``npst run|verify|sweep``.

Verbosity follows the NPS_LOG environment variable (DEBUG, INFO, WARNING, ...).
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from dataclasses import dataclass, field

from .gfield import make_field, prime_power
from .npsim import CSV_HEADER, UnprotectableError, run_session
from .protcode import (
    CONVENTIONS,
    build_coefficient_matrix,
    field_size_bounds,
    undecodable_patterns,
    verify_recoverability,
)
from .scenario import Scenario, ScenarioError, load_scenario
from .topology import node_relay_degree

log = logging.getLogger("npst")

VERIFY_LIMITS = {"n": 12, "t": 4, "q": 64}
VERIFY_HEADER = ("n", "t", "q", "result", "subsets_checked", "failing_subsets", "bound_lower", "bound_upper")
SUMMARY_HEADER = ("n", "t", "min_passing_q", "bound_lower", "bound_upper", "exceeds_bound_lower")


@dataclass
class CommandResult:
    status: int
    output: str
    rows: list = field(default_factory=list)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_run(sc: Scenario, seed: int | None = None) -> CommandResult:
    plan, matrix = sc.plan(), sc.matrix()
    rec = verify_recoverability(matrix)
    report = run_session(sc.network, plan, matrix, sc.failure(),
                         data=sc.rounds, seed=sc.seed if seed is None else seed, sessions=sc.sessions)
    lines = [report.to_text(),
             f"recoverability={'pass' if rec.all_full_rank else 'FAIL'} ({rec.to_text()})"]
    if not rec.all_full_rank:
        lines.insert(-1, "warning: coefficient matrix has singular t-column subsets; recovery is not guaranteed")
    if sc.n <= 16:
        bad = undecodable_patterns(matrix)
        if bad:
            shown = ", ".join(f"round {j} paths {{{','.join(map(str, fp))}}}" for j, fp in bad[:5])
            lines.append(f"warning: {len(bad)} erasure patterns of <= t paths are undecodable ({shown}"
                         + (", ..." if len(bad) > 5 else "") + ")")
    lines.append(report.summary_line())
    return CommandResult(0 if report.all_decode_ok else 1, "\n".join(lines) + "\n", [report])


def cmd_verify(ns, ts, qs, convention: str = "matrix") -> CommandResult:
    """Brute-force full-rank check per (n, t, q) plus a minimal-q summary."""
    ns, ts, qs = sorted(set(ns)), sorted(set(ts)), sorted(set(qs))
    for name, values in (("n", ns), ("t", ts), ("q", qs)):
        if values and max(values) > VERIFY_LIMITS[name]:
            raise ValueError(f"{name} range exceeds {VERIFY_LIMITS[name]}; refusing oversized enumeration")
    fields = {}
    for q in qs:
        pr = prime_power(q)
        if pr is None:
            raise ValueError(f"q={q} is not a prime power")
        fields[q] = make_field(*pr)

    rows, summary = [], []
    for n in ns:
        for t in ts:
            if not 1 <= t < n:
                continue
            lower, upper = field_size_bounds(n, t)
            passing = []
            for q in qs:
                rep = verify_recoverability(build_coefficient_matrix(n, t, fields[q], convention))
                rec = rep.to_record()
                rows.append({
                    "n": n, "t": t, "q": q, "result": rec["result"],
                    "subsets_checked": rep.subsets_checked,
                    "failing_subsets": ";".join("-".join(map(str, s)) for s in rep.failing_subsets),
                    "bound_lower": lower, "bound_upper": upper,
                })
                if rep.all_full_rank:
                    passing.append(q)
            min_q = min(passing) if passing else None
            summary.append({
                "n": n, "t": t, "min_passing_q": "" if min_q is None else min_q,
                "bound_lower": lower, "bound_upper": upper,
                "exceeds_bound_lower": "" if min_q is None else str(min_q > lower).lower(),
            })
    text = _csv(VERIFY_HEADER, rows) + "\n# summary\n" + _csv(SUMMARY_HEADER, summary)
    return CommandResult(0, text, [rows, summary])


def cmd_sweep(template: Scenario, seeds, nodes=None) -> CommandResult:
    """Fail every listed relay (default: all relays) once per seed."""
    net = template.network
    nodes = net.relays if nodes is None else list(nodes)
    plan, matrix = template.plan(), template.matrix()
    rows, ok = [], True
    for node in nodes:
        d = node_relay_degree(net, node)
        if d > template.t:
            log.info("skipping %s: relay degree %d exceeds t=%d", node, d, template.t)
            rows.append({"n": net.n, "t": template.t, "q": template.field.q, "node": node, "d": d,
                         "case_counts": f"skipped: d={d} > t={template.t}",
                         "capacity_num": "", "capacity_den": "", "recovered_all": "skipped"})
            continue
        failure = template.with_failure(node).failure()
        for seed in seeds:
            report = run_session(net, plan, matrix, failure, seed=seed, sessions=template.sessions)
            ok &= report.all_decode_ok
            rows.append(report.csv_row(d))
    return CommandResult(0 if ok else 1, _csv(CSV_HEADER, rows), rows)


def _int_list(text: str, keep=None) -> list[int]:
    """Parse ``"4-6"``, ``"4,5,7"`` or a mix like ``"2,4-6"``.

    ``keep`` filters the members of ranges only; listed values pass through.
    """
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(v for v in range(int(a), int(b) + 1) if keep is None or keep(v))
        else:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="npst", description="Network-coding protection against single relay failures")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--convention", choices=CONVENTIONS, help="coefficient exponent convention")

    run = sub.add_parser("run", parents=[common], help="run one scenario")
    run.add_argument("--scenario", required=True)
    run.add_argument("--seed", type=int, help="override the scenario's data seed")

    ver = sub.add_parser("verify", parents=[common], help="brute-force full-rank sweep over (n, t, q)")
    ver.add_argument("--n", default="4-6", help="e.g. 4-6 or 4,5,7")
    ver.add_argument("--t", default="2")
    ver.add_argument("--q", default="4,5,7,8")

    sw = sub.add_parser("sweep", parents=[common], help="fail each relay under many seeds")
    sw.add_argument("--scenario", required=True, help="template scenario; its failure entry is ignored")
    sw.add_argument("--seed", type=int, default=0, help="first seed")
    sw.add_argument("--seeds", type=int, default=10, help="number of consecutive seeds")
    sw.add_argument("--nodes", help="comma-separated relays (default: every relay)")
    return ap


def _apply_convention(sc: Scenario, convention: str | None) -> Scenario:
    if convention is None or convention == sc.convention:
        return sc
    return Scenario(sc.field, sc.network, sc.t, sc.failure_node, sc.active_from, sc.seed,
                    sc.rounds, convention, sc.sessions)


def main(argv=None) -> int:
    level = os.environ.get("NPS_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            sc = _apply_convention(load_scenario(args.scenario), args.convention)
            res = cmd_run(sc, args.seed)
        elif args.command == "verify":
            res = cmd_verify(_int_list(args.n), _int_list(args.t), _int_list(args.q, keep=prime_power), args.convention or "matrix")
        else:
            sc = _apply_convention(load_scenario(args.scenario), args.convention)
            nodes = None if args.nodes is None else [s.strip() for s in args.nodes.split(",") if s.strip()]
            res = cmd_sweep(sc, range(args.seed, args.seed + args.seeds), nodes)
    except (ScenarioError, UnprotectableError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(res.output)
    else:
        sys.stdout.write(res.output)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
