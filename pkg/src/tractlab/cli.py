"""Batch command-line front end.

Subcommands::

    tractlab complexity --config cfg.json [--format csv|json] [--out path]
    tractlab bounds     --config cfg.json ...
    tractlab sweep      --config cfg.json ...   (complexity + bounds joined)
    tractlab classify   --config cfg.json ...
    tractlab verify     [--seed N] [--instances N] ...

Exit codes: 0 full success, 2 when any grid point is uncertified, 3 when
any grid point hits its enumeration budget (3 wins over 2).  ``verify``
exits 0 iff every check passes.  Output is deterministic: fixed row order
(d-major, epsilon-minor), repr float formatting, and a ``#schema=1``
header line on CSV.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import sys
from typing import List, Optional

from . import bounds as bounds_mod
from .config import ExperimentConfig, load_config
from .errors import (
    BudgetExceededError,
    DivergenceError,
    DomainError,
    TractlabError,
)
from .tensor import Budget, info_complexity
from .verify import render_report, run_verify

_COMPLEXITY_COLUMNS = (
    "d", "epsilon", "n", "certified", "n_low", "n_high",
    "pops", "trace", "partial_sum", "status",
)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return "" if value is None else str(value)


def _apply_env_budget(budget: Budget) -> Budget:
    raw = os.environ.get("TRACTLAB_BUDGET_NMAX")
    if not raw:
        return budget
    return Budget(n_max=int(raw), heap_bytes=budget.heap_bytes)


def _complexity_point(task):
    cfg, d, eps = task
    problem = cfg.build_problem(d)
    budget = _apply_env_budget(cfg.budget)
    try:
        res = info_complexity(problem, eps, budget=budget, tol_rel=cfg.tol_rel)
    except BudgetExceededError as exc:
        return {
            "d": d, "epsilon": eps, "n": None, "certified": False,
            "n_low": exc.n_lower, "n_high": None, "pops": exc.pops,
            "trace": None, "partial_sum": None, "status": "budget",
        }
    return {
        "d": d, "epsilon": eps, "n": res.n, "certified": res.certified,
        "n_low": res.n_low, "n_high": res.n_high, "pops": res.pops,
        "trace": res.trace, "partial_sum": res.partial_sum,
        "status": "ok" if res.certified else "uncertified",
    }


def _bound_value(cfg: ExperimentConfig, problem, d, eps, request) -> dict:
    params = dict(request)
    name = params.pop("name")
    row = {"d": d, "epsilon": eps, "bound": name, "status": "ok"}
    try:
        if name == "chebyshev":
            tau = float(params.pop("tau", 0.9))
            z = float(params.pop("z", tau))
            value = bounds_mod.chebyshev_bound(problem, eps, tau=tau, z=z)
        elif name == "curse":
            value = bounds_mod.curse_lower_bound(problem, eps)
        elif name == "jensen_lhs":
            value = bounds_mod.jensen_lhs(problem, float(params.pop("gamma", 0.25)))
        elif name == "jensen_lower":
            value = bounds_mod.jensen_lower_bound(
                problem, float(params.pop("gamma", 0.25))
            )
        elif name == "entropy":
            value = bounds_mod.entropy_sum(problem).value
        elif name == "weak_theta":
            value = bounds_mod.weak_tract_theta(
                problem, float(params.pop("tau", 0.9)), d
            )
        elif name == "poltract_ratio":
            value = bounds_mod.poly_tract_ratio(
                problem, q=float(params.pop("q", 0.0)),
                tau=float(params.pop("tau", 0.9)),
            )
        elif name == "pt_log":
            value = bounds_mod.pt_log_criterion(
                problem, float(params.pop("tau", 0.9)), d
            ).value
        else:
            raise DomainError(f"unknown bound name {name!r}")
    except DivergenceError:
        value = None
        row["status"] = "divergent"
    if params:
        raise DomainError(
            f"unknown parameters for bound {name!r}: {sorted(params)}"
        )
    row["value"] = value
    return row


def _emit(rows: List[dict], columns, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=2, default=str))
        out.write("\n")
        return
    out.write("#schema=1\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_fmt(row.get(c)) for c in columns) + "\n")


def _exit_code(rows: List[dict]) -> int:
    statuses = {row.get("status") for row in rows}
    if "budget" in statuses:
        return 3
    if "uncertified" in statuses:
        return 2
    return 0


def _grid(cfg: ExperimentConfig):
    return [(cfg, d, eps) for d in cfg.dims for eps in cfg.epsilons]


def _map_tasks(tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [_complexity_point(t) for t in tasks]
    with multiprocessing.Pool(processes=jobs) as pool:
        return pool.map(_complexity_point, tasks)


def cmd_complexity(cfg: ExperimentConfig, jobs: int, fmt: str, out) -> int:
    rows = _map_tasks(_grid(cfg), jobs)
    _emit(rows, _COMPLEXITY_COLUMNS, fmt, out)
    return _exit_code(rows)


def cmd_bounds(cfg: ExperimentConfig, jobs: int, fmt: str, out) -> int:
    requests = [dict(items) for items in cfg.bounds]
    if not requests:
        requests = [{"name": "chebyshev"}, {"name": "curse"}]
    rows = []
    for d in cfg.dims:
        problem = cfg.build_problem(d)
        for eps in cfg.epsilons:
            for request in requests:
                rows.append(_bound_value(cfg, problem, d, eps, request))
    columns = ("d", "epsilon", "bound", "value", "status")
    _emit(rows, columns, fmt, out)
    return _exit_code(rows)


def cmd_sweep(cfg: ExperimentConfig, jobs: int, fmt: str, out) -> int:
    rows = _map_tasks(_grid(cfg), jobs)
    requests = [dict(items) for items in cfg.bounds]
    columns = list(_COMPLEXITY_COLUMNS)
    for request in requests:
        label = "_".join(
            str(request[k]) for k in sorted(request) if k != "name"
        )
        colname = request["name"] + ("_" + label if label else "")
        columns.append(colname)
        for row in rows:
            problem = cfg.build_problem(row["d"])
            bound_row = _bound_value(
                cfg, problem, row["d"], row["epsilon"], request
            )
            row[colname] = bound_row["value"]
    _emit(rows, tuple(columns), fmt, out)
    return _exit_code(rows)


def cmd_classify(cfg: ExperimentConfig, fmt: str, out) -> int:
    if cfg.family is None:
        raise DomainError(
            "classify needs a problem of kind 'korobov_family'"
        )
    report = cfg.family.classify(horizon=cfg.horizon)
    record = report.to_record()
    out.write(json.dumps(record, indent=2, default=str))
    out.write("\n")
    for key in ("spt", "pt", "qpt", "wt", "curse"):
        out.write(f"# {key:6s} {record[key]}\n")
    if record.get("exponent") is not None:
        out.write(f"# exponent {_fmt(record['exponent'])}\n")
    return 0


def cmd_verify(seed: int, instances: int, out) -> int:
    results = run_verify(seed, instances=instances)
    out.write(render_report(results, seed))
    return 0 if all(r.passed for r in results) else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tractlab",
        description="information complexity and tractability toolbox",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("complexity", "bounds", "sweep", "classify"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")
    v = sub.add_parser("verify")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--instances", type=int, default=50)
    v.add_argument("--out", default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    out = sys.stdout
    close = False
    if args.out:
        out = open(args.out, "w", encoding="utf-8", newline="\n")
        close = True
    try:
        if args.command == "verify":
            return cmd_verify(args.seed, args.instances, out)
        cfg = load_config(args.config)
        if args.command == "complexity":
            return cmd_complexity(cfg, args.jobs, args.format, out)
        if args.command == "bounds":
            return cmd_bounds(cfg, args.jobs, args.format, out)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.jobs, args.format, out)
        return cmd_classify(cfg, args.format, out)
    except TractlabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    finally:
        if close:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
