"""Bridge to command-line MILP solvers: LP file in, `name value` solution file out."""
from __future__ import annotations

import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ..errors import BackendError, FormatError, ParameterError
from ..formulations import INTEGRALITY_TOL, Assignment, LinearModel
from ..lpfile import write_lp

IN, OUT = "{in}", "{out}"


@dataclass(frozen=True)
class SolverProfile:
    name: str
    template: str
    infeasible_markers: tuple[str, ...]
    name_column: int = 0
    value_column: int = 1
    skip_prefixes: tuple[str, ...] = ("#",)


PROFILES = {
    "gurobi": SolverProfile(
        "gurobi", "gurobi_cl ResultFile={out} {in}", ("infeasible",), skip_prefixes=("#",)
    ),
    "scip": SolverProfile(
        "scip",
        'scip -c "read {in} optimize write solution {out} quit"',
        ("solution status: infeasible", "no solution available"),
        skip_prefixes=("#", "solution status:", "objective value:"),
    ),
    "cbc": SolverProfile(
        "cbc",
        "cbc {in} solve solu {out}",
        ("infeasible",),
        name_column=1,
        value_column=2,
        skip_prefixes=("optimal",),
    ),
    "generic": SolverProfile("generic", "", ("infeasible",)),
}


def check_template(template: str) -> None:
    if IN not in template or OUT not in template:
        raise ParameterError(f"command template needs both {IN} and {OUT}: {template!r}")


def render_command(template: str, in_path, out_path) -> list[str]:
    """Argument vector with placeholders substituted token by token (no shell)."""
    check_template(template)
    return [
        tok.replace(IN, str(in_path)).replace(OUT, str(out_path)) for tok in shlex.split(template)
    ]


def _has_marker(text: str, profile: SolverProfile) -> bool:
    low = text.lower()
    return any(mark.lower() in low for mark in profile.infeasible_markers)


def parse_solution(model: LinearModel, text: str, profile: SolverProfile = PROFILES["generic"]) -> Assignment:
    """Values from a solution listing; variables it omits are 0.

    The objective is recomputed from the parsed values and the assignment is
    checked against every model row.
    """
    names = {v.name: k for k, v in enumerate(model.variables)}
    values = {k: Fraction(0) for k in range(model.num_vars)}
    skips = tuple(s.lower() for s in profile.skip_prefixes)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        low = line.lower()
        if any(low.startswith(mark.lower()) for mark in profile.infeasible_markers):
            return Assignment({}, None, "infeasible")
        if low.startswith(skips):
            continue
        toks = line.split()
        try:
            name, val = toks[profile.name_column], toks[profile.value_column]
            num = Fraction(val)
        except (IndexError, ValueError, ZeroDivisionError):
            raise FormatError(f"solution line {lineno}: cannot read {raw!r}") from None
        if name not in names:
            raise FormatError(f"solution line {lineno}: unknown variable {name!r}")
        k = names[name]
        if model.variables[k].kind == "binary":
            r = round(num)
            if abs(num - r) > INTEGRALITY_TOL or r not in (0, 1):
                raise FormatError(f"solution line {lineno}: {name} = {val} is not binary")
            num = Fraction(r)
        values[k] = num
    bad = model.violated(values)
    if bad:
        raise BackendError(f"solver returned an assignment violating {len(bad)} rows, e.g. {bad[0]}")
    obj = model.objective_value(values) if model.sense != "none" else None
    return Assignment(values, obj)


def external_solve(
    model: LinearModel,
    template: str,
    profile: SolverProfile = PROFILES["generic"],
    timeout: float | None = None,
    workdir=None,
) -> Assignment:
    check_template(template)
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        in_path, out_path = Path(tmp) / "model.lp", Path(tmp) / "model.sol"
        write_lp(model, in_path)
        argv = render_command(template, in_path, out_path)
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise BackendError(f"could not run {argv[0]!r}: {exc}") from exc
        output = proc.stdout + proc.stderr
        if proc.returncode != 0:
            raise BackendError(f"{argv[0]} exited with {proc.returncode}:\n{output[-2000:]}")
        if not out_path.exists():
            if _has_marker(output, profile):
                return Assignment({}, None, "infeasible")
            raise BackendError(f"{argv[0]} wrote no solution file:\n{output[-2000:]}")
        return parse_solution(model, out_path.read_text(), profile)
