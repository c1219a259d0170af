"""Species catalogs: JSON/CSV ingestion, validation and writing.

A record carries either absolute sector energies (``mode="absolute"``) or the
neutral energy plus I^q and A^q (``mode="descriptor"``). Units are an opaque
tag. Floats are written with ``repr`` so that every value round-trips.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .errors import (
    DuplicateLabel,
    MissingField,
    ModeConflict,
    NonPositiveIonization,
    ParseError,
)
from .simplex import DomainSpec

COLUMNS = ("label", "n_electrons", "q", "mode", "e_neutral", "e_anion", "e_cation", "i_q", "a_q", "units")
MODES = ("absolute", "descriptor")
_MODE_FIELDS = {
    "absolute": ("e_neutral", "e_anion", "e_cation"),
    "descriptor": ("e_neutral", "i_q", "a_q"),
}
_ALL_ENERGIES = ("e_neutral", "e_anion", "e_cation", "i_q", "a_q")


@dataclass(frozen=True)
class SpeciesRecord:
    label: str
    n_electrons: int
    q: int
    mode: str
    e_neutral: float
    e_anion: float | None = None
    e_cation: float | None = None
    i_q: float | None = None
    a_q: float | None = None
    units: str = "eV"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ParseError(f"{self.label}: unknown mode {self.mode!r}", field="mode")
        used = _MODE_FIELDS[self.mode]
        for name in _ALL_ENERGIES:
            value = getattr(self, name)
            if name in used and value is None:
                raise MissingField(f"{self.label}: {self.mode} mode needs {name}", field=name)
            if name not in used and value is not None:
                raise ModeConflict(f"{self.label}: {name} is not allowed in {self.mode} mode", field=name)

    @classmethod
    def absolute(cls, label, n_electrons, q, e_neutral, e_anion, e_cation, units="eV"):
        return cls(label, n_electrons, q, "absolute", e_neutral, e_anion=e_anion, e_cation=e_cation, units=units)

    @classmethod
    def descriptor(cls, label, n_electrons, q, e_neutral, i_q, a_q, units="eV"):
        return cls(label, n_electrons, q, "descriptor", e_neutral, i_q=i_q, a_q=a_q, units=units)


def to_domain(record: SpeciesRecord) -> DomainSpec:
    """Reconstruct the three absolute sector energies and validate them."""
    if record.mode == "descriptor":
        if not record.i_q > 0:
            raise NonPositiveIonization(record.label, f"I^q = {record.i_q!r} must be > 0")
        e_cation = record.e_neutral + record.i_q
        e_anion = record.e_neutral - record.a_q
    else:
        e_cation, e_anion = record.e_cation, record.e_anion
    return DomainSpec(
        label=record.label,
        n_electrons=record.n_electrons,
        q=record.q,
        e_neutral=record.e_neutral,
        e_anion=e_anion,
        e_cation=e_cation,
    )


def _as_int(value, line, name) -> int:
    if isinstance(value, bool):
        raise ParseError(f"expected an integer, got {value!r}", line, name)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise ParseError(f"expected an integer, got {value!r}", line, name)


def _as_float(value, line, name) -> float | None:
    if value is None or value == "":
        return None
    if isinstance(value, bool):
        raise ParseError(f"expected a number, got {value!r}", line, name)
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ParseError(f"expected a number, got {value!r}", line, name) from None
    if not math.isfinite(out):
        raise ParseError(f"non-finite value {value!r}", line, name)
    return out


def _record_from_fields(fields: dict, line: int | None) -> SpeciesRecord:
    for name in ("label", "n_electrons", "q", "mode", "e_neutral"):
        if fields.get(name) in (None, ""):
            raise MissingField("required field is missing", line, name)
    label = fields["label"]
    if not isinstance(label, str):
        raise ParseError(f"label must be text, got {label!r}", line, "label")
    mode = fields["mode"]
    if mode not in MODES:
        raise ParseError(f"{label}: mode must be one of {MODES}, got {mode!r}", line, "mode")
    energies = {name: _as_float(fields.get(name), line, name) for name in _ALL_ENERGIES}
    for name in _ALL_ENERGIES:
        if name in _MODE_FIELDS[mode]:
            if energies[name] is None:
                raise MissingField(f"{label}: {mode} mode needs {name}", line, name)
        elif energies[name] is not None:
            raise ModeConflict(f"{label}: {name} is not allowed in {mode} mode", line, name)
    units = fields.get("units")
    units = "eV" if units in (None, "") else units
    if not isinstance(units, str):
        raise ParseError(f"units must be text, got {units!r}", line, "units")
    return SpeciesRecord(
        label=label,
        n_electrons=_as_int(fields["n_electrons"], line, "n_electrons"),
        q=_as_int(fields["q"], line, "q"),
        mode=mode,
        units=units,
        **energies,
    )


def _parse_json(text: str) -> list[SpeciesRecord]:
    if not text.strip():
        return []
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("species"), list):
        raise ParseError('top level must be an object with a "species" list')
    records = []
    for i, item in enumerate(doc["species"]):
        if not isinstance(item, dict):
            raise ParseError(f"species[{i}] is not an object")
        unknown = set(item) - set(COLUMNS)
        if unknown:
            raise ParseError(f"species[{i}]: unknown keys {sorted(unknown)}", field=sorted(unknown)[0])
        records.append(_record_from_fields(item, None))
    return records


def _parse_csv(text: str) -> list[SpeciesRecord]:
    if not text.strip():
        return []
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ParseError(f"header must be {','.join(COLUMNS)}", 1)
    records = []
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(COLUMNS):
            raise ParseError(f"expected {len(COLUMNS)} cells, got {len(row)}", line)
        records.append(_record_from_fields(dict(zip(COLUMNS, row)), line))
    return records


def parse_catalog(data: bytes | str, fmt: str = "json") -> list[SpeciesRecord]:
    """Parse a catalog document, preserving order and rejecting duplicate labels."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from None
    if fmt == "json":
        records = _parse_json(data)
    elif fmt == "csv":
        records = _parse_csv(data)
    else:
        raise ValueError(f"unknown catalog format {fmt!r}")
    seen = set()
    for r in records:
        if r.label in seen:
            raise DuplicateLabel(f"duplicate label {r.label!r}", field="label")
        seen.add(r.label)
    return records


def csv_line(cells) -> str:
    """One LF-terminated CSV line.

    The stdlib writer leaves a bare CR unquoted when the terminator is LF,
    which a reader then splits; quote it here together with the usual cases.
    """
    out = []
    for cell in cells:
        if any(c in cell for c in ',"\n\r'):
            cell = '"' + cell.replace('"', '""') + '"'
        out.append(cell)
    return ",".join(out) + "\n"


def _fields(record: SpeciesRecord) -> dict:
    return {name: getattr(record, name) for name in COLUMNS}


def write_catalog(records: list[SpeciesRecord], fmt: str = "json") -> bytes:
    if fmt == "json":
        doc = {"species": [_fields(r) for r in records]}
        return (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    if fmt == "csv":
        lines = [csv_line(COLUMNS)]
        for r in records:
            lines.append(csv_line(
                "" if v is None else (repr(v) if isinstance(v, float) else str(v))
                for v in _fields(r).values()
            ))
        return "".join(lines).encode("utf-8")
    raise ValueError(f"unknown catalog format {fmt!r}")


def load_catalog(path, fmt: str | None = None) -> list[SpeciesRecord]:
    """Read a catalog file; the format defaults to the file extension."""
    path = str(path)
    if fmt is None:
        fmt = "csv" if path.lower().endswith(".csv") else "json"
    with open(path, "rb") as fh:
        return parse_catalog(fh.read(), fmt)
