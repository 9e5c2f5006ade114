"""On-disk formats: instance files, line-delimited traces, CSV report rows.

Instance text format::

    B n
    s_1 s_2 ... s_n        (any whitespace; line breaks anywhere after line 1)

Instance JSON format (first non-blank character ``{``)::

    {"schema": "sumsq-instance/1", "capacity": B, "items": [...], "meta": {...}}

Trace format: one JSON object per line, keys sorted.  The first line is a
header ``{"kind": "header", "schema_version": 1, "policy", "capacity", "n"}``.
Then one ``{"kind": "place", "i", "size", "target", "delta_ss", "new_bin",
"bin"}`` per item, where ``target`` is the level of the receiving bin before
placement (0 for a new bin) and new-bin records also carry ``"snapshot"``:
``[[level, count], ...]`` of the open bins just before the item.  The last
line is ``{"kind": "final", "bins_used", "closed_bins", "packed_size",
"open_counts"}``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, TextIO, Tuple

from .core import Instance, PackingState, PackTrace, PlacementRecord

TRACE_SCHEMA_VERSION = 1
INSTANCE_SCHEMA = "sumsq-instance/1"


class FormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, source: str = "<input>"):
        self.line, self.column, self.source = line, column, source
        where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


# ---------------------------------------------------------------- instances

def _tokens(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        col = 0
        for part in line.split():
            col = line.index(part, col)
            yield part, lineno, col + 1
            col += len(part)


def _int_token(tok, line, col, source):
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"expected an integer, got {tok!r}", line, col, source) from None


def parse_instance(text: str, source: str = "<input>") -> Tuple[Instance, dict]:
    """Parse either instance format; returns ``(instance, meta)``."""
    if text.lstrip().startswith("{"):
        return _parse_instance_json(text, source)
    toks = list(_tokens(text))
    if not toks:
        raise FormatError("empty file, expected header 'B n'", 1, 1, source)
    if len(toks) < 2 or toks[1][1] != toks[0][1]:
        tok, line, col = toks[0]
        raise FormatError("header must be 'B n' on the first line", line, col, source)
    (bt, bl, bc), (nt, nl, nc) = toks[0], toks[1]
    if bl != 1:
        raise FormatError("header must be on line 1", bl, bc, source)
    B = _int_token(bt, bl, bc, source)
    n = _int_token(nt, nl, nc, source)
    if B < 1:
        raise FormatError(f"capacity must be >= 1, got {B}", bl, bc, source)
    if n < 0:
        raise FormatError(f"item count must be >= 0, got {n}", nl, nc, source)
    header_extra = [t for t in toks[2:] if t[1] == 1]
    if header_extra:
        tok, line, col = header_extra[0]
        raise FormatError("unexpected token after header", line, col, source)
    body = toks[2:]
    items = []
    for tok, line, col in body[:n]:
        s = _int_token(tok, line, col, source)
        if not 1 <= s <= B:
            raise FormatError(f"item size {s} outside [1, {B}]", line, col, source)
        items.append(s)
    if len(body) < n:
        last = toks[-1]
        raise FormatError(f"expected {n} items, found {len(body)}",
                          last[1], last[2], source)
    if len(body) > n:
        tok, line, col = body[n]
        raise FormatError(f"more than {n} items", line, col, source)
    return Instance(B, items), {}


def _parse_instance_json(text, source):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, e.lineno, e.colno, source) from None
    if not isinstance(doc, dict) or doc.get("schema") != INSTANCE_SCHEMA:
        raise FormatError(f"expected schema {INSTANCE_SCHEMA!r}", 1, 1, source)
    try:
        B = doc["capacity"]
        items = doc["items"]
        if not isinstance(B, int) or not all(isinstance(s, int) for s in items):
            raise TypeError
        inst = Instance(B, items)
    except (KeyError, TypeError) as e:
        raise FormatError(f"bad instance document ({e!r})", 1, 1, source) from None
    except ValueError as e:
        raise FormatError(str(e), 1, 1, source) from None
    return inst, dict(doc.get("meta", {}))


def format_instance(instance: Instance, per_line: int = 20) -> str:
    items = instance.items
    lines = [f"{instance.capacity} {len(items)}"]
    for k in range(0, len(items), per_line):
        lines.append(" ".join(map(str, items[k:k + per_line])))
    return "\n".join(lines) + "\n"


def format_instance_json(instance: Instance, meta: Optional[dict] = None) -> str:
    doc = {"schema": INSTANCE_SCHEMA, "capacity": instance.capacity,
           "items": list(instance.items), "meta": meta or {}}
    return json.dumps(doc, sort_keys=True) + "\n"


def read_instance(path: str) -> Tuple[Instance, dict]:
    with open(path) as fh:
        return parse_instance(fh.read(), source=str(path))


# ---------------------------------------------------------------- traces

def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def trace_lines(trace: PackTrace) -> Iterable[str]:
    yield _dump({"kind": "header", "schema_version": TRACE_SCHEMA_VERSION,
                 "policy": trace.policy, "capacity": trace.capacity,
                 "n": len(trace.records)})
    for r in trace.records:
        rec = {"kind": "place", "i": r.index, "size": r.size, "target": r.target,
               "delta_ss": r.delta_ss, "new_bin": r.new_bin, "bin": r.bin_id}
        if r.new_bin:
            rec["snapshot"] = [list(p) for p in trace.snapshots[r.index]]
        yield _dump(rec)
    f = trace.final
    yield _dump({"kind": "final", "bins_used": f.bins_used,
                 "closed_bins": f.closed_bins, "packed_size": f.packed_size,
                 "open_counts": [list(p) for p in f.open_counts()]})


def write_trace(trace: PackTrace, fh: TextIO):
    for line in trace_lines(trace):
        fh.write(line + "\n")


def dumps_trace(trace: PackTrace) -> str:
    buf = io.StringIO()
    write_trace(trace, buf)
    return buf.getvalue()


def parse_trace(text: str, source: str = "<trace>") -> PackTrace:
    lines = [ln for ln in text.splitlines()]
    docs = []
    for k, ln in enumerate(lines, 1):
        if not ln.strip():
            continue
        try:
            docs.append((k, json.loads(ln)))
        except json.JSONDecodeError as e:
            raise FormatError(e.msg, k, e.colno, source) from None
    if not docs or docs[0][1].get("kind") != "header":
        raise FormatError("missing trace header", 1, 1, source)
    k, head = docs[0]
    version = head.get("schema_version")
    if version != TRACE_SCHEMA_VERSION:
        raise FormatError(f"unsupported trace schema_version {version!r} "
                          f"(this reader understands {TRACE_SCHEMA_VERSION})",
                          k, 1, source)
    try:
        B = int(head["capacity"])
        policy = str(head["policy"])
        records: List[PlacementRecord] = []
        snapshots = {}
        final = None
        for k, d in docs[1:]:
            kind = d.get("kind")
            if kind == "place":
                if final is not None:
                    raise FormatError("record after final line", k, 1, source)
                r = PlacementRecord(int(d["i"]), int(d["size"]), int(d["target"]),
                                    int(d["delta_ss"]), bool(d["new_bin"]), int(d["bin"]))
                if r.index != len(records):
                    raise FormatError(f"expected record i={len(records)}", k, 1, source)
                records.append(r)
                if r.new_bin:
                    snapshots[r.index] = tuple((int(h), int(c)) for h, c in d["snapshot"])
            elif kind == "final":
                final = PackingState.from_counts(
                    B, {int(h): int(c) for h, c in d["open_counts"]},
                    int(d["closed_bins"]))
                if (final.bins_used != d["bins_used"]
                        or final.packed_size != d["packed_size"]):
                    raise FormatError("final totals inconsistent with counts", k, 1, source)
            else:
                raise FormatError(f"unknown record kind {kind!r}", k, 1, source)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, FormatError):
            raise
        raise FormatError(f"malformed trace record ({e!r})", k, 1, source) from None
    if final is None:
        raise FormatError("missing final line", len(lines), 1, source)
    if len(records) != head.get("n"):
        raise FormatError(f"header says n={head.get('n')} but found {len(records)} records",
                          1, 1, source)
    return PackTrace(policy, B, records, snapshots, final)


def read_trace(path: str) -> PackTrace:
    with open(path) as fh:
        return parse_trace(fh.read(), source=str(path))


# ---------------------------------------------------------------- reports

def fmt_fraction(q: Optional[Fraction]) -> str:
    if q is None:
        return ""
    return str(q)


def fmt_decimal(q: Optional[Fraction], places: int = 6) -> str:
    if q is None:
        return ""
    scaled = round(q * 10 ** places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10 ** places)
    return f"{sign}{whole}.{frac:0{places}d}"


@dataclass
class ReportRow:
    instance_id: str
    policy: str
    bin_count: int
    total_size: int
    capacity: int
    lower_bound: int
    opt: Optional[int]
    ratio_vs_lb: Optional[Fraction]
    ratio_vs_opt: Optional[Fraction]
    bound_slack: Fraction
    lemma_violations: Optional[int]
    proof_case: str
    all_checks_pass: bool

    def cells(self) -> List[str]:
        def opt_str(v):
            return "" if v is None else str(v)
        return [
            self.instance_id, self.policy, str(self.bin_count), str(self.total_size),
            str(self.capacity), str(self.lower_bound), opt_str(self.opt),
            fmt_fraction(self.ratio_vs_lb), fmt_decimal(self.ratio_vs_lb),
            fmt_fraction(self.ratio_vs_opt), fmt_decimal(self.ratio_vs_opt),
            fmt_fraction(self.bound_slack), fmt_decimal(self.bound_slack),
            opt_str(self.lemma_violations), self.proof_case,
            "true" if self.all_checks_pass else "false",
        ]


REPORT_COLUMNS = [
    "instance_id", "policy", "bin_count", "total_size", "capacity", "lower_bound",
    "opt", "ratio_vs_lb", "ratio_vs_lb_decimal", "ratio_vs_opt",
    "ratio_vs_opt_decimal", "bound_slack", "bound_slack_decimal",
    "lemma_violations", "proof_case", "all_checks_pass",
]


def write_csv(rows: Iterable[List[str]], fh: TextIO):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for row in rows:
        w.writerow(row)


def proof_report_dict(rep) -> dict:
    """JSON-ready view of a ProofTraceReport; rationals rendered as "p/q"."""
    def q(v):
        return None if v is None else str(v)
    bc = rep.bound_check
    return {
        "alpha": q(rep.params.alpha), "delta": q(rep.params.delta),
        "capacity": rep.capacity,
        "x": None if rep.x is None else {"index": rep.x[0], "size": rep.x[1]},
        "x_prime": None if rep.x_prime is None else
        {"index": rep.x_prime[0], "size": rep.x_prime[1]},
        "delta_offset": q(rep.delta_offset),
        "case": None if rep.case_taken is None else rep.case_taken.value,
        "lemma_violations": len(rep.lemma_violations),
        "mate_pairs_checked": len(rep.mate_checks),
        "mate_pairs_failed": sum(not m.passed for m in rep.mate_checks),
        "mate_map_injective": rep.mate_map_injective,
        "closed_mates": rep.closed_mates,
        "classes": [
            {"h": c.h, "d_h": c.d_h, "members": [list(p) for p in c.members],
             "honorary": c.honorary_count, "average": q(c.average_level),
             "passed": c.passed}
            for c in rep.class_reports if c.members or c.honorary_count
        ],
        "bound": None if bc is None else
        {"bins": bc.bin_count, "bound": q(bc.bound), "slack": q(bc.slack),
         "slack_decimal": fmt_decimal(bc.slack), "passed": bc.passed},
        "average_fill_ok": rep.average_fill_ok,
        "violations": list(rep.violations),
        "passed": rep.passed,
    }
