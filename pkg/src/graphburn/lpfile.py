"""CPLEX-LP text emission for LinearModel."""
from __future__ import annotations

from pathlib import Path

from .formulations import LinearModel

_WRAP = 200


def _terms(model: LinearModel, coeffs) -> list[str]:
    out = []
    for k, (var, c) in enumerate(coeffs):
        name = model.variables[var].name
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = name if mag == 1 else f"{mag} {name}"
        if k == 0:
            out.append(body if c > 0 else f"- {body}")
        else:
            out.append(f"{sign} {body}")
    return out


def _wrapped(head: str, tokens: list[str]) -> list[str]:
    lines, cur = [], head
    for tok in tokens:
        if len(cur) + 1 + len(tok) > _WRAP and cur.strip():
            lines.append(cur)
            cur = "   " + tok
        else:
            cur = f"{cur} {tok}" if cur else tok
    lines.append(cur)
    return lines


def lp_text(model: LinearModel) -> str:
    lines = [f"\\ {model.kind} n={model.n} width={model.width}"]
    if model.sense == "max":
        lines.append("Maximize")
    else:
        lines.append("Minimize")
    if model.objective:
        lines += _wrapped(" obj:", _terms(model, model.objective))
    else:
        # satisfaction model: a zero objective on the first variable
        lines.append(f" obj: 0 {model.variables[0].name}")
    lines.append("Subject To")
    for c in model.constraints:
        rhs = f"{c.rel} {c.rhs}"
        lines += _wrapped(f" {c.name}:", _terms(model, c.coeffs) + [rhs])
    cont = [v for v in model.variables if v.kind == "continuous"]
    if cont:
        lines.append("Bounds")
        for v in cont:
            if v.ub is None:
                lines.append(f" {v.name} >= {v.lb}")
            else:
                lines.append(f" {v.lb} <= {v.name} <= {v.ub}")
    bins = [v.name for v in model.variables if v.kind == "binary"]
    if bins:
        lines.append("Binaries")
        lines += _wrapped("", bins)
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_lp(model: LinearModel, path) -> None:
    Path(path).write_text(lp_text(model))
