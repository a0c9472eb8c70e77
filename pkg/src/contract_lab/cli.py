"""contract-lab command-line tool.

Data goes to --out (or the config's output.path), otherwise stdout.
Summaries and diagnostics go to stderr. Exit codes: 0 ok, 1 verify found a
failing invariant, 2 bad config or arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .config import ScenarioConfig, load_config
from .errors import ConfigError, ContractLabError
from .parallel import worker_count

SCHEMA_VERSION = "1"

EQUILIBRIUM_HEADER = ["regime", "param", "p0", "p1", "principal_utility", "agent_utility", "welfare", "quantity"]
GARBLING_HEADER = ["eps", "p0", "p1", "pi_garb", "v_garb", "w_garb", "p0_prime", "p1_prime", "v_garb_prime_fd"]
RESTRICTION_HEADER = ["r", "p0", "p1", "pi_const", "v_const", "w_const", "v_const_prime"]
REVELATION_HEADER = ["lambda0", "lambda1", "v_rev_minus_v_con", "w_con", "w_rev"]
GARBLING_PRIME_HEADER = ["lambda0", "lambda1", "vgarb_prime_at_one", "prop5_margin"]
REPORT_HEADER = ["name", "holds", "lhs", "rhs", "margin", "grid_used", "notes"]

DEFAULT_EPS_N = 101
DEFAULT_R_N = 101


class UsageError(ConfigError):
    pass


# -- output ----------------------------------------------------------------------


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (list, tuple)):
        return "; ".join(str(v) for v in value)
    return str(value)


def render_csv(header: Sequence[str], records: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for rec in records:
        w.writerow([_cell(rec.get(k)) for k in header])
    return buf.getvalue()


def _json_safe(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def render_json(kind: str, payload: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, **payload}
    return json.dumps(_json_safe(doc), indent=2, allow_nan=False) + "\n"


def emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _fmt_and_path(args, cfg: ScenarioConfig | None) -> tuple[str, str | None]:
    fmt = args.format or (cfg.output.format if cfg else "csv")
    path = args.out or (cfg.output.path if cfg else None)
    return fmt, path


# -- commands --------------------------------------------------------------------


def cmd_solve(args, cfg: ScenarioConfig) -> int:
    from .conditions import check_quantity_lemma
    from .contract import solve_concealed, solve_revealed

    s = cfg.scenario(args.grid_n)
    con, rev = solve_concealed(s), solve_revealed(s)
    lemma = check_quantity_lemma(s)
    records = [con.to_record(), rev.to_record()]
    fmt, path = _fmt_and_path(args, cfg)
    if fmt == "json":
        emit(render_json("solve", {"equilibria": records, "reports": [lemma.to_dict()]}), path)
    else:
        emit(render_csv(EQUILIBRIUM_HEADER, records), path)
    note(f"concealed p*={con.prices[0]!r} V={con.agent_utility!r} W={con.welfare!r}")
    note(f"revealed p0*={rev.prices[0]!r} p1*={rev.prices[1]!r} V={rev.agent_utility!r} W={rev.welfare!r}")
    note(f"quantity lemma audit: {'pass' if lemma.holds else 'FAIL'} (margin {lemma.margin!r})")
    return 0


def cmd_sweep(args, cfg: ScenarioConfig) -> int:
    from .contract import solve_concealed

    s = cfg.scenario(args.grid_n)
    workers = worker_count()
    fmt, path = _fmt_and_path(args, cfg)
    if args.kind == "garbling":
        from .garbling import optimal_garbling, sweep_garbling

        n = cfg.grids.eps_n or DEFAULT_EPS_N
        points = sweep_garbling(s, cfg.gamma, np.linspace(0.0, 1.0, n), workers=workers)
        header, param = GARBLING_HEADER, "eps"
        eps_star, v_star = optimal_garbling(s, cfg.gamma, points)
        interior = points[0].eps < eps_star < points[-1].eps
        v_con = solve_concealed(s).agent_utility
        summary = f"eps*={eps_star!r} ({'interior' if interior else 'boundary'}) V_garb(eps*)={v_star!r} V_con={v_con!r}"
        extra = {"eps_star": eps_star, "v_garb_star": v_star, "interior": interior, "v_con": v_con}
    else:
        from .restriction import sweep_restriction

        n = cfg.grids.r_n or DEFAULT_R_N
        points = sweep_restriction(s, n, workers=workers)
        header, param = RESTRICTION_HEADER, "r"
        vs = [p.v_const for p in points]
        i = max(range(len(vs)), key=lambda k: (vs[k], -k))
        interior = 0 < i < len(points) - 1
        summary = f"r*={points[i].r!r} ({'interior' if interior else 'boundary'}) V_const(r*)={vs[i]!r}"
        extra = {"r_star": points[i].r, "v_const_star": vs[i], "interior": interior}
    records = [p.to_record() for p in points]
    if fmt == "json":
        emit(render_json(f"sweep_{args.kind}", {"param": param, "records": records, "summary": extra}), path)
    else:
        emit(render_csv(header, records), path)
    note(summary)
    return 0


def cmd_grid(args, cfg: ScenarioConfig) -> int:
    from .welfare import sign_changes

    g = cfg.grids
    if g.lambda0 is None:
        raise ConfigError("grid commands need grids.lambda0 in the config")
    l0 = g.lambda0.points()
    l1 = (g.lambda1 or g.lambda0).points()
    workers = worker_count()
    if args.kind == "revelation":
        from .welfare import grid_revelation_preference

        cells = grid_revelation_preference(cfg.b, cfg.theta, l0, l1, workers=workers)
        header, key = REVELATION_HEADER, "v_rev_minus_v_con"
    else:
        from .garbling import grid_vgarb_prime_at_one

        cells = grid_vgarb_prime_at_one(cfg.b, cfg.theta, l0, l1, workers=workers)
        header, key = GARBLING_PRIME_HEADER, "vgarb_prime_at_one"
    records = [c.to_record() for c in cells]
    fmt, path = _fmt_and_path(args, cfg)
    if fmt == "json":
        emit(render_json(f"grid_{args.kind}", {"records": records}), path)
    else:
        emit(render_csv(header, records), path)
    width = len(l1)
    for row in range(len(l0)):
        values = [r[key] for r in records[row * width : (row + 1) * width]]
        note(f"lambda0={l0[row]!r}: {sign_changes(values, 1e-10)} sign change(s)")
    return 0


def format_report_table(reports) -> str:
    lines = [f"{'check':<30} {'verdict':<8} {'lhs':>14} {'rhs':>14} {'margin':>14}"]
    for r in reports:
        verdict = "holds" if r.holds else "fails"
        lines.append(f"{r.name:<30} {verdict:<8} {r.lhs:>14.6g} {r.rhs:>14.6g} {r.margin:>14.6g}")
        if r.notes:
            lines.append(f"    {r.notes}")
    return "\n".join(lines)


def cmd_check(args, cfg: ScenarioConfig) -> int:
    from .conditions import applicable_checks

    reports = applicable_checks(cfg.scenario(args.grid_n))
    fmt, path = _fmt_and_path(args, cfg)
    if fmt == "json":
        emit(render_json("check_conditions", {"reports": [r.to_dict() for r in reports]}), path)
    else:
        emit(render_csv(REPORT_HEADER, [r.to_dict() for r in reports]), path)
    note(format_report_table(reports))
    return 0


def cmd_verify(args) -> int:
    from .battery import run_all

    results = run_all()
    failed = [c for c in results if not c.passed]
    lines = []
    for c in results:
        lines.append(f"{'PASS' if c.passed else 'FAIL'} {c.name} margin={c.margin!r} worst={c.detail}")
    lines.append(f"{len(results) - len(failed)}/{len(results)} invariants passed")
    if args.format == "json":
        emit(
            render_json(
                "verify",
                {"results": [{"name": c.name, "passed": c.passed, "margin": c.margin, "worst": c.detail} for c in results]},
            ),
            args.out,
        )
        note("\n".join(lines))
    else:
        emit("\n".join(lines) + "\n", args.out)
    return 1 if failed else 0


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write data here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default from config)")
    common.add_argument("--grid-n", type=int, dest="grid_n", help="scan size used by the price optimizer")
    common.add_argument("--seedless", action="store_true", help=argparse.SUPPRESS)
    with_config = argparse.ArgumentParser(add_help=False, parents=[common])
    with_config.add_argument("--config", required=True, help="scenario config (JSON)")

    parser = argparse.ArgumentParser(prog="contract-lab", description="Equilibria, sweeps and condition checks for the concealed/revealed contract model.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[with_config], help="concealed and revealed equilibria")
    p = sub.add_parser("sweep", parents=[with_config], help="garbling or restriction sweep")
    p.add_argument("kind", choices=("garbling", "restriction"))
    p = sub.add_parser("grid", parents=[with_config], help="exponential-mean grids")
    p.add_argument("kind", choices=("revelation", "garbling_prime"))
    sub.add_parser("check-conditions", parents=[with_config], help="assumption and proposition checks")
    sub.add_parser("verify", parents=[common], help="run the built-in invariant battery")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    op = args.command
    try:
        if args.seedless:
            raise UsageError("--seedless is reserved: no command uses random numbers, so there is nothing to disable")
        if args.grid_n is not None and args.grid_n < 3:
            raise UsageError("--grid-n must be at least 3")
        if op == "verify":
            return cmd_verify(args)
        cfg = load_config(args.config)
        if args.out:
            Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        handler = {"solve": cmd_solve, "sweep": cmd_sweep, "grid": cmd_grid, "check-conditions": cmd_check}[op]
        return handler(args, cfg)
    except ConfigError as exc:
        note(f"contract-lab {op}: config error: {exc}")
        return 2
    except ContractLabError as exc:
        note(f"contract-lab {op}: {type(exc).__name__}: {exc}")
        return 3
    except (ValueError, ArithmeticError) as exc:
        note(f"contract-lab {op}: numerical failure: {type(exc).__name__}: {exc}")
        return 3


if __name__ == "__main__":
    sys.exit(main())
