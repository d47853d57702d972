"""Command-line front end: single solves, branch sweeps, oracle validation.

Outputs are deterministic: floating-point cells use a fixed 16-digit
scientific format, JSON keys are sorted, and sweep results are collected
per branch and written in ascending order regardless of the worker count.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .basis import ascending_branches
from .convergence import convergence_report
from .fdcore import DEFAULT_MESH, fd_solve
from .model import BranchId, ModelError, l1_norm, load_problem
from .oracle import find_eigenvalue
from .residual import log_table, residual_by_rank


@dataclass
class RunConfig:
    """Resolved invocation settings; flags override file values."""

    command: str
    problem_path: str
    family: str = "auto"
    sign: str | None = None
    n: int | None = None
    first: int = 1
    rank: int = 4
    mesh: int = DEFAULT_MESH
    tol: float = 1e-10
    out: str = "out"
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ModelError("rank must be non-negative")
        if self.mesh % 2 or self.mesh < 4:
            raise ModelError("mesh size must be even and at least 4")
        if self.first < 1:
            raise ModelError("branch count must be at least 1")
        if self.jobs < 1:
            raise ModelError("worker count must be at least 1")
        if self.tol <= 0.0:
            raise ModelError("tolerance must be positive")


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _json_safe(value):
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def _resolve_branch(config: RunConfig, file_branch: BranchId | None) -> BranchId:
    sign = None
    if config.sign is not None:
        sign = -1 if config.sign == "-" else 1
    if config.family in ("I", "II"):
        n = config.n if config.n is not None else (0 if config.family == "I" else 1)
        return BranchId(family=config.family, n=n, sign=sign or 1)
    if file_branch is not None:
        return BranchId(family=file_branch.family,
                        n=config.n if config.n is not None else file_branch.n,
                        sign=sign if sign is not None else file_branch.sign)
    return ascending_branches(1)[0]


def _branch_payload(problem_path: str, family: str, sign: int, n: int,
                    rank: int, mesh: int, tol: float) -> dict:
    """Solve one branch and render its CSV and JSON texts."""
    problem, _ = load_problem(problem_path)
    branch = BranchId(family=family, n=n, sign=sign)
    sol = fd_solve(problem, branch, rank, mesh)
    reports = residual_by_rank(sol)
    sol.residual_norms = [r.combined for r in reports]
    conv = convergence_report(l1_norm(problem.potential),
                              problem.nonlinearity, branch, rank)
    lines = ["m,lambda,sup_u1,sup_u2,residual_norm"]
    for m in range(rank + 1):
        lines.append(",".join([
            str(m),
            _fmt(sol.lambda_partial(m)),
            _fmt(sol.corrections[m].u1.sup),
            _fmt(sol.corrections[m].u2.sup),
            _fmt(reports[m].combined),
        ]))
    csv_text = "\n".join(lines) + "\n"
    payload = {
        "branch": branch.tag,
        "config": {"family": branch.family, "mesh": mesh, "n": branch.n,
                   "rank": rank, "sign": branch.sign, "tol": tol},
        "convergence": conv.as_dict(),
        "lambda": sol.lambda_total,
        "problem": problem_path,
        "residual_kind": reports[-1].kind,
        "residual_norm": reports[-1].combined,
        "zero_count": reports[-1].zero_count,
    }
    json_text = json.dumps(_json_safe(payload), sort_keys=True, indent=2,
                           allow_nan=False) + "\n"
    return {
        "tag": branch.tag,
        "csv": csv_text,
        "json": json_text,
        "norms": [r.combined for r in reports],
        "lambda": sol.lambda_total,
        "zero_count": reports[-1].zero_count,
    }


def _sweep_task(args: tuple) -> dict:
    return _branch_payload(*args)


def _write_branch_files(out: Path, payload: dict) -> None:
    (out / f"{payload['tag']}.csv").write_text(payload["csv"],
                                               encoding="utf-8")
    (out / f"{payload['tag']}.json").write_text(payload["json"],
                                                encoding="utf-8")


def cmd_solve(config: RunConfig) -> int:
    _, file_branch = load_problem(config.problem_path)
    branch = _resolve_branch(config, file_branch)
    payload = _branch_payload(config.problem_path, branch.family, branch.sign,
                              branch.n, config.rank, config.mesh, config.tol)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_branch_files(out, payload)
    print(f"{payload['tag']}: lambda = {_fmt(payload['lambda'])}  "
          f"residual = {payload['norms'][-1]:.2e}  "
          f"zeros = {payload['zero_count']}")
    print(f"wrote {out / (payload['tag'] + '.csv')} and .json")
    return 0


def cmd_sweep(config: RunConfig) -> int:
    load_problem(config.problem_path)
    branches = ascending_branches(config.first)
    tasks = [(config.problem_path, b.family, b.sign, b.n,
              config.rank, config.mesh, config.tol) for b in branches]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            payloads = list(pool.map(_sweep_task, tasks))
    else:
        payloads = [_sweep_task(t) for t in tasks]
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    norms = {}
    for index, payload in enumerate(payloads):
        _write_branch_files(out, payload)
        for m, norm in enumerate(payload["norms"]):
            norms[index, m] = norm
    matrix, n_labels, m_labels = log_table(norms)
    lines = ["m," + ",".join(payloads[i]["tag"] for i in n_labels)]
    for row, m in enumerate(m_labels):
        lines.append(f"{m}," + ",".join(_fmt(v) for v in matrix[row]))
    (out / "log_table.csv").write_text("\n".join(lines) + "\n",
                                       encoding="utf-8")
    for payload in payloads:
        print(f"{payload['tag']}: lambda = {_fmt(payload['lambda'])}")
    print(f"wrote {len(payloads)} branch files and log_table.csv to {out}")
    return 0


def _oracle_near(problem, center: float, tol: float) -> float:
    last_error = None
    for width in (0.5, 2.0):
        try:
            return find_eigenvalue(problem, (center - width, center + width),
                                   tol=tol)
        except ValueError as exc:
            last_error = exc
    raise last_error


def cmd_validate(config: RunConfig) -> int:
    problem, _ = load_problem(config.problem_path)
    if problem.is_singular:
        print("validation by shooting is unavailable for a singular "
              "potential; check such solves with the integrated residual "
              "instead", file=sys.stderr)
        return 1
    rows = []
    for index, branch in enumerate(ascending_branches(config.first)):
        sol = fd_solve(problem, branch, config.rank, config.mesh)
        lam_fd = sol.lambda_total
        lam_star = _oracle_near(problem, lam_fd, config.tol)
        rows.append((index, branch.tag, lam_fd, lam_star,
                     abs(lam_fd - lam_star)))
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["index,branch,lambda_fd,lambda_oracle,abs_diff"]
    print(f"{'index':<6}{'branch':<12}{'lambda_fd':<24}"
          f"{'lambda_oracle':<24}abs_diff")
    for index, tag, lam_fd, lam_star, diff in rows:
        lines.append(f"{index},{tag},{_fmt(lam_fd)},{_fmt(lam_star)},"
                     f"{_fmt(diff)}")
        print(f"{index:<6}{tag:<12}{_fmt(lam_fd):<24}"
              f"{_fmt(lam_star):<24}{diff:.2e}")
    (out / "validate.csv").write_text("\n".join(lines) + "\n",
                                      encoding="utf-8")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transeig",
        description="Eigenvalue transmission problems on (0, 1) by the "
                    "correction recursion")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, default_rank: int) -> None:
        p.add_argument("--problem", required=True, metavar="PATH",
                       help="problem description file (JSON)")
        p.add_argument("--rank", type=int, default=default_rank, metavar="M_RANK",
                       help="number of corrections beyond the zero term")
        p.add_argument("--mesh", type=int, default=DEFAULT_MESH, metavar="M",
                       help="panel mesh size (even)")
        p.add_argument("--tol", type=float, default=1e-10, metavar="REAL",
                       help="tolerance for auxiliary root finding")
        p.add_argument("--out", default="out", metavar="DIR",
                       help="output directory")

    solve = sub.add_parser("solve", help="solve a single branch")
    add_common(solve, default_rank=4)
    solve.add_argument("--family", choices=("I", "II", "auto"),
                       default="auto", help="branch family")
    solve.add_argument("--sign", choices=("+", "-"), default=None,
                       help="family I sign")
    solve.add_argument("--n", type=int, default=None, help="branch index")

    sweep = sub.add_parser("sweep", help="solve the first K branches")
    add_common(sweep, default_rank=4)
    sweep.add_argument("--first", type=int, required=True, metavar="K",
                       help="number of branches in ascending order")
    sweep.add_argument("--jobs", type=int, default=1, metavar="INT",
                       help="worker processes")

    validate = sub.add_parser("validate",
                              help="cross-check eigenvalues by shooting")
    add_common(validate, default_rank=6)
    validate.add_argument("--first", type=int, default=6, metavar="K",
                          help="number of branches in ascending order")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            problem_path=args.problem,
            family=getattr(args, "family", "auto"),
            sign=getattr(args, "sign", None),
            n=getattr(args, "n", None),
            first=getattr(args, "first", 1),
            rank=args.rank,
            mesh=args.mesh,
            tol=args.tol,
            out=args.out,
            jobs=getattr(args, "jobs", 1),
        )
        if args.command == "solve":
            return cmd_solve(config)
        if args.command == "sweep":
            return cmd_sweep(config)
        return cmd_validate(config)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
