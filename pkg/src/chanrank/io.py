"""Wire formats: observation CSV, reference-ranking CSV, parameter JSON, reports."""

from __future__ import annotations

import csv
import decimal
import hashlib
import io
import json
from datetime import datetime, timezone
from typing import Iterable, TextIO

from .ces import CesParams, ChannelObservation, RankedChannel, round_half_up
from .errors import ParameterError, ParseError
from .utility import UtilityCurve

OBSERVATION_HEADER = ("frequency_ghz", "snr_db", "occupancy_pct")
REFERENCE_HEADER = ("index", "rank")
REPORT_SCHEMA_VERSION = 1

_DEC = decimal.Context(prec=60)


def _pct_to_fraction(text: str) -> float:
    return float(_DEC.divide(decimal.Decimal(text), decimal.Decimal(100)))


def _fraction_to_pct(x: float) -> str:
    # Shortest decimal that survives the parse path exactly.
    exact = _DEC.multiply(decimal.Decimal(x), decimal.Decimal(100))
    for digits in range(1, 40):
        s = format(exact, f".{digits}g")
        if _pct_to_fraction(s) == x:
            plain = format(decimal.Decimal(s), "f")
            return plain if len(plain) <= 24 else s
    return format(exact, "f")


def _read_rows(stream: TextIO, header: tuple[str, ...]):
    reader = csv.reader(stream)
    first = next(reader, None)
    if first is None:
        raise ParseError("empty input, expected a header row", line=1)
    got = tuple(c.strip() for c in first)
    if got != header:
        raise ParseError(f"expected header {','.join(header)!r}, got {','.join(got)!r}", line=1)
    for row in reader:
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}",
                             line=reader.line_num, column=min(len(row), len(header)) + 1)
        yield reader.line_num, [c.strip() for c in row]


def _number(text, line, column, name):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{name}: malformed number {text!r}", line=line, column=column) from None
    if value != value or value in (float("inf"), float("-inf")):
        raise ParseError(f"{name}: non-finite value {text!r}", line=line, column=column)
    return value


def parse_observations(stream: TextIO) -> list[ChannelObservation]:
    """Parse the observations CSV. All-or-nothing; errors carry line/column."""
    out = []
    for line, (f_txt, s_txt, o_txt) in _read_rows(stream, OBSERVATION_HEADER):
        freq = _number(f_txt, line, 1, "frequency_ghz")
        snr = _number(s_txt, line, 2, "snr_db")
        pct = _number(o_txt, line, 3, "occupancy_pct")
        if not 0.0 <= pct <= 100.0:
            raise ParseError(f"occupancy_pct {o_txt} outside [0, 100]", line=line, column=3)
        if freq <= 0:
            raise ParseError(f"frequency_ghz {f_txt} must be > 0", line=line, column=1)
        out.append(ChannelObservation(freq, snr, _pct_to_fraction(o_txt)))
    return out


def format_observations(observations: Iterable[ChannelObservation]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(OBSERVATION_HEADER)
    for o in observations:
        w.writerow([repr(o.frequency_ghz), repr(o.snr_db), _fraction_to_pct(o.occupancy)])
    return buf.getvalue()


def parse_reference(stream: TextIO) -> list[tuple[int, float]]:
    """Parse ``index,rank`` rows (0-based observation index)."""
    out = []
    for line, (i_txt, r_txt) in _read_rows(stream, REFERENCE_HEADER):
        try:
            idx = int(i_txt)
        except ValueError:
            raise ParseError(f"index: malformed integer {i_txt!r}", line=line, column=1) from None
        out.append((idx, _number(r_txt, line, 2, "rank")))
    return out


def params_to_dict(params: CesParams, snr_curve: UtilityCurve, occ_curve: UtilityCurve) -> dict:
    return {
        **params.to_dict(),
        "snr_curve": snr_curve.to_dict(),
        "occ_curve": occ_curve.to_dict(),
    }


def params_from_dict(data: dict):
    """Inverse of :func:`params_to_dict`; also accepts a full report (uses its metadata)."""
    if "metadata" in data:
        data = data["metadata"]["params"]
    try:
        params = CesParams(w_snr=data["w_snr"], w_occ=data.get("w_occ", 1.0 - data["w_snr"]),
                           sigma=data["sigma"])
        snr_c = UtilityCurve.from_dict(data["snr_curve"])
        occ_c = UtilityCurve.from_dict(data["occ_curve"])
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"incomplete parameter file: {exc}") from None
    return params, snr_c, occ_c


def input_digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _row(rc: RankedChannel) -> dict:
    o = rc.observation
    return {
        "rank": rc.rank,
        "frequency_ghz": o.frequency_ghz,
        "snr_db": o.snr_db,
        "occupancy_pct": float(_fraction_to_pct(o.occupancy)),
        "u_snr_display": 100.0 * rc.u_snr,
        "u_occ_display": 100.0 * rc.u_occ,
        "combined": rc.combined,
        "combined_display": rc.combined_display,
    }


def build_report(kind: str, ranked: list[RankedChannel], params: CesParams,
                 snr_curve: UtilityCurve, occ_curve: UtilityCurve, digest: str,
                 utility_ranks: list[int] | None = None, timestamp: str | None = None) -> dict:
    """Structured report; ``utility_ranks`` adds the baseline cross-reference column."""
    rows = [_row(rc) for rc in ranked]
    if utility_ranks is not None:
        for row, ur in zip(rows, utility_ranks):
            row["utility_rank"] = ur
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": kind,
        "metadata": {
            "params": params_to_dict(params, snr_curve, occ_curve),
            "rho": None if params.sigma == 1.0 else params.rho,
            "input_digest": digest,
            "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        },
        "rows": rows,
    }


def _fmt_num(x: float) -> str:
    return f"{x:g}"


def render_text(report: dict) -> str:
    """Aligned plain-text table with a short parameter header."""
    meta = report["metadata"]["params"]
    cols = ["rank", "frequency_ghz", "snr_db", "occupancy_pct", "u_snr", "u_occ", "combined"]
    has_xref = any("utility_rank" in r for r in report["rows"])
    if has_xref:
        cols.append("utility_rank")
    table = [cols]
    for r in report["rows"]:
        line = [str(r["rank"]), _fmt_num(r["frequency_ghz"]), _fmt_num(r["snr_db"]),
                _fmt_num(r["occupancy_pct"]), str(round_half_up(r["u_snr_display"])),
                str(round_half_up(r["u_occ_display"])), str(r["combined_display"])]
        if has_xref:
            line.append(str(r["utility_rank"]))
        table.append(line)
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    s, o = meta["snr_curve"], meta["occ_curve"]
    header = (f"# {report['kind']}: sigma={meta['sigma']:g} w_snr={meta['w_snr']:g} "
              f"w_occ={meta['w_occ']:g} snr_curve={s['family']}(alpha={s['alpha']:g}) "
              f"occ_curve={o['family']}(alpha={o['alpha']:g}, midpoint={o['midpoint']:g})")
    lines = [header]
    for row in table:
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def load_json(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None

