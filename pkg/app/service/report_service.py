import csv
import io
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Type

from app.shemas.report_shemas import (
    AnomalyRecord,
    BlockReport,
    Record,
    ReportEnvelope,
    Summary,
    TheoremReport,
    ValuationRecord,
)

logger = logging.getLogger(__name__)

CSV_COLUMNS: Dict[type, List[str]] = {
    ValuationRecord: ["p", "n", "observed", "predicted", "discrepancy"],
    BlockReport: ["p", "t", "v0", "v1", "v2", "v3", "irregular_confirmed"],
    AnomalyRecord: ["p", "t", "v0", "v1", "v2", "v3", "d0", "d1", "d2", "d3"],
    TheoremReport: ["p", "theorem_id", "n", "pass", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "modulus"],
}


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def _flatten(record: Record) -> List[Any]:
    if isinstance(record, ValuationRecord):
        return [record.p, record.n, record.observed, record.predicted, record.discrepancy]
    if isinstance(record, BlockReport):
        return [record.p, record.t, *record.valuations, record.irregular_confirmed]
    if isinstance(record, AnomalyRecord):
        return [record.p, record.t, *record.valuations, *record.discrepancies]
    return [
        record.p, record.theorem_id, record.n, record.passed,
        record.lhs.re, record.lhs.im, record.rhs.re, record.rhs.im, record.lhs.modulus,
    ]


def is_passing(record: Record) -> bool:
    """Запись без расхождения: теорема выполнена, оценка совпала, блок подтверждён."""
    if isinstance(record, TheoremReport):
        return record.passed
    if isinstance(record, ValuationRecord):
        return not record.has_discrepancy
    if isinstance(record, BlockReport):
        return record.irregular_confirmed
    return False


def summarize(records: Sequence[Record]) -> Summary:
    passed = sum(1 for r in records if is_passing(r))
    return Summary(checked=len(records), passed=passed, failed=len(records) - passed)


def render_csv(records: Sequence[Record], record_type: Type[Record]) -> str:
    """CSV без кавычек: ни одно поле не содержит разделителей."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, quoting=csv.QUOTE_NONE, lineterminator="\n")
    writer.writerow(CSV_COLUMNS[record_type])
    for record in records:
        writer.writerow([_cell(v) for v in _flatten(record)])
    return buffer.getvalue()


def _int_or_none(cell: str) -> Optional[int]:
    return None if cell == "" else int(cell)


def parse_csv(text: str, record_type: Type[Record]) -> List[Record]:
    """Обратный разбор CSV, выданного render_csv."""
    rows = list(csv.DictReader(io.StringIO(text)))
    records: List[Record] = []
    for row in rows:
        if record_type is ValuationRecord:
            records.append(
                ValuationRecord(
                    p=int(row["p"]),
                    n=int(row["n"]),
                    observed=_int_or_none(row["observed"]),
                    predicted=int(row["predicted"]),
                    discrepancy=_int_or_none(row["discrepancy"]),
                )
            )
        elif record_type is BlockReport:
            records.append(
                BlockReport(
                    p=int(row["p"]),
                    t=int(row["t"]),
                    valuations=[int(row[f"v{i}"]) for i in range(4)],
                    irregular_confirmed=row["irregular_confirmed"] == "true",
                )
            )
        elif record_type is AnomalyRecord:
            records.append(
                AnomalyRecord(
                    p=int(row["p"]),
                    t=int(row["t"]),
                    valuations=[_int_or_none(row[f"v{i}"]) for i in range(4)],
                    discrepancies=[_int_or_none(row[f"d{i}"]) for i in range(4)],
                )
            )
        else:
            modulus = int(row["modulus"])
            records.append(
                TheoremReport(
                    p=int(row["p"]),
                    theorem_id=row["theorem_id"],
                    n=_int_or_none(row["n"]),
                    passed=row["pass"] == "true",
                    lhs={"re": int(row["lhs_re"]), "im": int(row["lhs_im"]), "modulus": modulus},
                    rhs={"re": int(row["rhs_re"]), "im": int(row["rhs_im"]), "modulus": modulus},
                )
            )
    return records


def render_json(command: str, params: Dict[str, Any], records: Sequence[Record]) -> str:
    envelope = ReportEnvelope(
        command=command,
        params=params,
        records=[r.model_dump(mode="json", by_alias=True) for r in records],
        summary=summarize(records),
    )
    return envelope.model_dump_json(by_alias=True, indent=2) + "\n"


def write_report(text: str, out: Optional[Path]) -> None:
    """Запись отчёта в файл; без out текст печатается в stdout."""
    if out is None:
        print(text, end="")
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    logger.info(f"Отчёт записан в {out}")
