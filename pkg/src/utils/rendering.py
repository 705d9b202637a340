"""Output renderers for the CLI: JSON, CSV and plain text."""

import csv
import io
import json
from typing import Any, Iterable, List, Optional, Sequence

from pydantic import BaseModel

from src.config import config
from src.models import MixingRow, MuDistributionModel

FORMATS = ("json", "csv", "plain")


def format_float(value: float, digits: Optional[int] = None) -> str:
    """Render a float with a fixed number of significant digits."""
    digits = config.FLOAT_DIGITS if digits is None else digits
    return f"{value:.{digits}g}"


def _round_floats(value: Any) -> Any:
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return float(format_float(value))
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_round_floats(v) for v in value]
    return value


def render_json(model: BaseModel) -> str:
    """JSON document of a response model with floats cut to FLOAT_DIGITS."""
    data = model.model_dump(mode="json", by_alias=True, exclude_none=True)
    return json.dumps(_round_floats(data), indent=2)


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if value is None:
        return ""
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV text with a header line and ``\\n`` line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue().rstrip("\n")


def render(fmt: str, model: BaseModel, header: Sequence[str], rows: Iterable[Sequence[Any]], plain: str) -> str:
    """Pick the renderer for ``--format``.

    Args:
        fmt: json, csv or plain
        model: Pydantic model for JSON
        header: CSV column names
        rows: CSV rows
        plain: Plain text form

    Returns:
        The rendered document without trailing newline
    """
    if fmt == "json":
        return render_json(model)
    if fmt == "csv":
        return render_csv(header, rows)
    if fmt == "plain":
        return plain
    raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")


MU_CSV_HEADER = ("d", "mass_a", "mass_b", "mass_float")
MIXING_CSV_HEADER = ("k", "p", "estimate", "stderr", "theorem_bound", "pass")


def mu_csv_rows(model: MuDistributionModel) -> List[List[Any]]:
    return [[e.d, e.mass.a, e.mass.b, e.mass.approx] for e in model.entries]


def mu_plain(model: MuDistributionModel) -> str:
    lines = [f"mu^({model.r})  l={model.ell}  tail below d={model.tail_threshold} with ratio phi^-2"]
    for e in model.entries:
        lines.append(f"{e.d:>6}  {format_float(e.mass.approx):>16}  {e.mass.a} + ({e.mass.b})*phi")
    lines.append(f"total mass {model.checksums.total_mass}, mean {model.checksums.mean}")
    return "\n".join(lines)


def mixing_csv_rows(rows: Sequence[MixingRow]) -> List[List[Any]]:
    return [[m.k, m.p, m.estimate, m.stderr, m.theorem_bound, m.passed] for m in rows]


def mixing_plain(rows: Sequence[MixingRow]) -> str:
    lines = []
    for m in rows:
        verdict = "pass" if m.passed else "FAIL"
        if m.trivially_passed:
            verdict += " (bound >= 1)"
        lines.append(
            f"{m.kind} k={m.k} p={m.p}: {format_float(m.estimate)} +/- {format_float(m.stderr)}"
            f" <= {format_float(m.theorem_bound)}  {verdict}"
        )
    return "\n".join(lines)
