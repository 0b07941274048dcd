"""
Output writers: CSV data table, JSON summary and the markdown report.

Every writer renders to a string first, so that identical results give
byte-identical files.
"""

import csv
import io
import json
import math
import os
from typing import Optional, Sequence

from adialab.state import CheckResult, ExperimentConfig, FitRecord

CSV_COLUMNS = [
    "geometry",
    "mode",
    "alpha",
    "rational_p",
    "rational_q",
    "epsilon",
    "t",
    "lambda",
    "observed",
    "predicted",
    "ratio",
    "tolerance",
    "pass",
    "provenance",
]

GEOMETRY_TITLES = {
    "torus": "Torus",
    "heisenberg": "Heisenberg",
    "sol": "Sol",
    "weyl-ref": "Semiclassical references",
}


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def render_csv(checks: Sequence[CheckResult]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for check in checks:
        row = {**check, "lambda": check["lam"], "pass": check["passed"]}
        writer.writerow([_cell(row[column]) for column in CSV_COLUMNS])
    return buffer.getvalue()


def _json_safe(value):
    """Replace non-finite floats by None; JSON has no NaN or Infinity."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    return value


def render_json(
    config_echo: ExperimentConfig | Sequence[ExperimentConfig],
    checks: Sequence[CheckResult],
    fits: Sequence[FitRecord],
    verdict: str,
) -> str:
    summary = {
        "config_echo": config_echo,
        "checks": list(checks),
        "fits": [
            {
                "name": fit["name"],
                "coefficient": fit["coefficient"],
                "exponent": fit["exponent"],
                "residual": fit["residual"],
            }
            for fit in fits
        ],
        "verdict": verdict,
    }
    return json.dumps(_json_safe(summary), indent=2, allow_nan=False) + "\n"


def write_text(path: str, text: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


###########################
# Verdict and report
###########################


def verdict_line(checks: Sequence[CheckResult]) -> str:
    """Overall verdict on the noncommutative Weyl formula.

    Torus, Heisenberg and alpha = 0 Sol checks confirm it when they all
    pass; passing Sol mismatch checks with alpha != 0 show that it fails.
    """
    if not checks:
        return "NC Weyl formula: no experiments run"

    def all_pass(group: list[CheckResult]) -> bool:
        return bool(group) and all(c["passed"] for c in group)

    torus = [c for c in checks if c["geometry"] == "torus"]
    heisenberg = [c for c in checks if c["geometry"] == "heisenberg"]
    sol_riemannian = [c for c in checks if c["geometry"] == "sol" and c["alpha"] == 0]
    mismatch = [c for c in checks if c["geometry"] == "sol" and c["alpha"] != 0 and "mismatch" in c["name"]]

    confirmed = []
    if all_pass(torus):
        confirmed.append("torus")
    if all_pass(heisenberg):
        confirmed.append("Heisenberg-internal")
    if all_pass(sol_riemannian):
        confirmed.append("α=0 Sol")

    parts = []
    if confirmed:
        parts.append(f"CONFIRMED ({', '.join(confirmed)})")
    if all_pass(mismatch):
        worst = max(c["ratio"] if c["kind"] == "bound" else c["observed"] for c in mismatch)
        parts.append(f"FAILS (Sol α≠0, ratio {worst:.4f} < 2/3)")
    if not parts:
        parts.append("INCONCLUSIVE")

    failed = sum(1 for c in checks if not c["passed"])
    line = "NC Weyl formula: " + " / ".join(parts)
    if failed:
        line += f"; {failed} check{'s' if failed != 1 else ''} failed"
    return line


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.6g}"
    return str(value)


def emit_report(
    results: Sequence[CheckResult],
    fits: Sequence[FitRecord] = (),
    verdict: Optional[str] = None,
    criteria: Optional[Sequence[tuple[str, bool]]] = None,
    title: str = "Adiabatic limit experiments",
) -> str:
    """Markdown summary: one table per geometry, then fits, criteria and the verdict line."""
    lines = [f"# {title}", ""]
    if not results:
        lines += ["no experiments run", ""]
        return "\n".join(lines)

    for geometry, heading in GEOMETRY_TITLES.items():
        rows = [c for c in results if c["geometry"] == geometry]
        if not rows:
            continue
        lines += [
            f"## {heading}",
            "",
            "| check | mode | ε | t | λ | observed | predicted | ratio | tolerance | pass |",
            "|---|---|---|---|---|---|---|---|---|---|",
        ]
        for c in rows:
            cells = [c["name"], c["mode"], c["epsilon"], c["t"], c["lam"], c["observed"], c["predicted"], c["ratio"], c["tolerance"]]
            lines.append("| " + " | ".join(_fmt(v) for v in cells) + f" | {'pass' if c['passed'] else 'FAIL'} |")
        lines.append("")

    if fits:
        lines += ["## Power-law fits", "", "| series | coefficient | exponent | residual | points |", "|---|---|---|---|---|"]
        for fit in fits:
            lines.append(
                f"| {fit['name']} | {_fmt(fit['coefficient'])} | {_fmt(fit['exponent'])} | {_fmt(fit['residual'])} | {fit['n_points']} |"
            )
        lines.append("")

    if criteria:
        lines += ["## Acceptance criteria", ""]
        for label, passed in criteria:
            lines.append(f"- [{'pass' if passed else 'FAIL'}] {label}")
        lines.append("")

    lines += [verdict if verdict is not None else verdict_line(results), ""]
    return "\n".join(lines)
