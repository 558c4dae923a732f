"""
Report rendering for cftnvm
JSON and CSV for machines, jinja2 templates and rich tables for people
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

from jinja2 import Environment, FileSystemLoader, StrictUndefined
from rich.console import Console
from rich.table import Table

from .config import get_settings
from .cyclotomic import CycNum, format_approx
from .finite_field import FieldSpec
from .nvm import NvmReport, ProofIdentityCheck, uncertainty_bound
from .transform import CftMatrix, GaussSumSet, GroupAlgebraElement, TSums, fourier_transform

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "table")
CSV_COLUMNS = ["q", "index", "chi_j", "method", "holds", "theorem_prediction", "agreement",
               "witness_I", "witness_J", "minors_checked", "error"]
TABLE_WIDTH = 120

TEMPLATES_DIR = Path(__file__).parent / "templates"


def approx(value: CycNum) -> str:
    digits = get_settings().approx_digits
    return format_approx(value.complex_approx(digits + 5), digits)


def exact_value(value: CycNum) -> Dict[str, Any]:
    """Exact value with its labelled approximation alongside"""
    return {"exact": value.to_dict(), "approx": approx(value)}


class ReportRenderer:
    """jinja2 environment over the packaged text templates"""

    def __init__(self, templates_dir: Optional[Path] = None):
        self.templates_dir = templates_dir or TEMPLATES_DIR
        self.env = Environment(
            loader=FileSystemLoader(str(self.templates_dir)),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
            undefined=StrictUndefined,
        )
        self.env.filters['exact'] = str
        self.env.filters['approx'] = approx
        self.env.filters['yesno'] = lambda value: "n/a" if value is None else ("yes" if value else "no")

    def render(self, name: str, **context: Any) -> str:
        return self.env.get_template(f"{name}.txt.j2").render(**context)


_renderer: Optional[ReportRenderer] = None


def get_renderer() -> ReportRenderer:
    global _renderer
    if _renderer is None:
        _renderer = ReportRenderer()
    return _renderer


def dumps(payload: Any, compact: bool = False) -> str:
    if compact:
        return json.dumps(payload, separators=(",", ":"))
    return json.dumps(payload, indent=2)


# Payloads

def field_payload(spec: FieldSpec) -> Dict[str, Any]:
    payload = spec.to_dict()
    payload["q"] = spec.q
    payload["trace"] = [{"x": x.to_list(), "trace": x.trace()} for x in spec.elements()]
    return payload


def gauss_payload(gauss: GaussSumSet, ts: Optional[TSums] = None,
                  identities: Optional[ProofIdentityCheck] = None) -> Dict[str, Any]:
    q = gauss.chi.field.q
    payload: Dict[str, Any] = {
        "q": q,
        "chi": gauss.chi.to_dict(),
        "sums": [dict(exact_value(g), norm_is_q=(g * g.conjugate() == q)) for g in gauss.sums],
    }
    if ts is not None:
        payload["T"] = [exact_value(ts[j]) for j in range(3)]
    if identities is not None:
        payload["identities"] = identities.to_dict()
    return payload


def cft_payload(cft: CftMatrix, determinant: CycNum) -> Dict[str, Any]:
    payload = cft.to_dict()
    payload["q"] = cft.chi.field.q
    payload["determinant"] = exact_value(determinant)
    return payload


def witness_payload(report: NvmReport, f: Optional[GroupAlgebraElement],
                    cft: CftMatrix) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"report": report.to_dict(), "holds": report.holds}
    if f is None:
        return payload
    f_hat = fourier_transform(f)
    total, bound = uncertainty_bound(f, cft.chi)
    payload.update({
        "f": [{"x": x.to_list(), "value": v.to_dict()}
              for x, v in zip(f.field.elements(), f.values) if not v.is_zero()],
        "support": sorted(x.to_list() for x in f.support()),
        "support_hat": sorted(a.to_list() for a in f_hat.support()),
        "support_sum": total,
        "bound": bound,
    })
    return payload


# Scan output

def csv_row(report: NvmReport) -> Dict[str, Any]:
    data = report.to_dict()
    witness = data.pop("witness")
    data["witness_I"] = " ".join(map(str, witness["I"])) if witness else ""
    data["witness_J"] = " ".join(map(str, witness["J"])) if witness else ""
    return {key: _csv_value(data[key]) for key in CSV_COLUMNS}


def _csv_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def summary_line(reports: Sequence[NvmReport]) -> str:
    holds = sum(1 for r in reports if r.holds)
    fails = sum(1 for r in reports if r.holds is False)
    disagreements = sum(1 for r in reports if r.agreement is False)
    line = (f"summary: instances={len(reports)} holds={holds} "
            f"fails={fails} disagreements={disagreements}")
    errors = len(reports) - holds - fails
    return f"{line} errors={errors}" if errors else line


def reports_table(reports: Iterable[NvmReport]) -> str:
    """Render reports as a plain fixed-width rich table"""
    table = Table(title="NVM scan")
    for column in ("q", "index", "chi_j", "method", "holds", "prediction", "agreement",
                   "witness", "minors"):
        table.add_column(column, justify="right" if column in ("q", "index", "chi_j", "minors") else "left")
    for r in reports:
        witness = f"I={list(r.witness.rows)} J={list(r.witness.cols)}" if r.witness else "-"
        table.add_row(str(r.q), str(r.index), str(r.chi_j), r.method, _csv_value(r.holds) or "error",
                      _csv_value(r.theorem_prediction) or "-", _csv_value(r.agreement) or "-",
                      witness, str(r.minors_checked))
    buffer = io.StringIO()
    console = Console(file=buffer, width=TABLE_WIDTH, color_system=None, force_terminal=False,
                      highlight=False)
    console.print(table)
    return buffer.getvalue()


def write_reports(reports: Sequence[NvmReport], fmt: str, stream: TextIO,
                  summary: bool = True) -> None:
    """Write scan reports, followed by the summary line unless disabled or csv"""
    if fmt == "json":
        for report in reports:
            stream.write(dumps(report.to_dict(), compact=True) + "\n")
    elif fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for report in reports:
            writer.writerow(csv_row(report))
    elif fmt == "table":
        stream.write(reports_table(reports))
    else:
        raise ValueError(f"Unknown format {fmt!r}")
    if summary and fmt != "csv":
        stream.write(summary_line(reports) + "\n")
    logger.info(summary_line(reports))


def read_json_lines(text: str) -> List[Dict[str, Any]]:
    """Parse the report lines of a JSON scan output, skipping the summary"""
    return [json.loads(line) for line in text.splitlines() if line.startswith("{")]
