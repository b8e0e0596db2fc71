"""Encoded-file and report formats.

Encoded file layout (all integers little-endian):

    magic   "RARC"                      4 bytes
    version 1                           1 byte
    code    0 = msrr, 1 = mbrr          1 byte
    n, u, k, dbar                       2 bytes each
    field kind  0 = gf256, 1 = prime    1 byte
    field modulus (poly mask or p)      2 bytes
    body     stripes x (n * alpha) symbols, node-major within a stripe,
             each symbol at the field's serialized width
    trailer  original payload byte length, 8 bytes

Reports are line-oriented ``record=<kind> key=value ...`` text.  Rational
values always carry an explicit denominator (``25/18``) so re-parsing
reproduces them exactly; 3-decimal renderings are presentation-only
strings.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .errors import FormatError, ParameterError
from .field import FieldSpec, field_from_descriptor
from .params import MBRR, MSRR, SystemParams

MAGIC = b"RARC"
FORMAT_VERSION = 1
_CODE_IDS = {MSRR: 0, MBRR: 1}
_CODE_NAMES = {v: k for k, v in _CODE_IDS.items()}
_FIELD_IDS = {"gf256": 0, "prime": 1}
_FIELD_NAMES = {v: k for k, v in _FIELD_IDS.items()}
_HEADER = struct.Struct("<4sBBHHHHBH")
_TRAILER = struct.Struct("<Q")


@dataclass
class EncodedFile:
    """Parsed in-memory form of an encoded file."""

    code_type: str
    params: SystemParams
    field_kind: str
    field_modulus: int
    body: np.ndarray  # (stripes, n * alpha)
    payload_len: int

    @property
    def alpha(self) -> int:
        return 1 if self.code_type == MSRR else self.params.dbar

    @property
    def stripes(self) -> int:
        return self.body.shape[0]

    def field(self) -> FieldSpec:
        return field_from_descriptor(self.field_kind, self.field_modulus, self.params.u)


def serialize_encoded(ef: EncodedFile) -> bytes:
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        _CODE_IDS[ef.code_type],
        ef.params.n,
        ef.params.u,
        ef.params.k,
        ef.params.dbar,
        _FIELD_IDS[ef.field_kind],
        ef.field_modulus,
    )
    width = "<u1" if ef.field().symbol_width == 1 else "<u2"
    body = np.ascontiguousarray(ef.body).astype(width).tobytes()
    return header + body + _TRAILER.pack(ef.payload_len)


def parse_encoded(data: bytes) -> EncodedFile:
    if len(data) < _HEADER.size + _TRAILER.size:
        raise FormatError("file shorter than header plus trailer")
    magic, version, code_id, n, u, k, dbar, field_id, modulus = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}")
    if code_id not in _CODE_NAMES:
        raise FormatError(f"unknown code type {code_id}")
    if field_id not in _FIELD_NAMES:
        raise FormatError(f"unknown field kind {field_id}")
    try:
        params = SystemParams(n=n, u=u, k=k, dbar=dbar)
    except ParameterError as exc:
        raise FormatError(f"invalid header parameters: {exc}") from exc
    code_type = _CODE_NAMES[code_id]
    field_kind = _FIELD_NAMES[field_id]
    try:
        field = field_from_descriptor(field_kind, modulus, u)
    except ParameterError as exc:
        raise FormatError(f"invalid field descriptor: {exc}") from exc
    alpha = 1 if code_type == MSRR else dbar
    if code_type == MBRR and dbar < 1:
        raise FormatError("array-code file with dbar=0")
    (payload_len,) = _TRAILER.unpack_from(data, len(data) - _TRAILER.size)
    raw = data[_HEADER.size : len(data) - _TRAILER.size]
    width = field.symbol_width
    record = n * alpha * width
    if record == 0 or len(raw) % record != 0:
        raise FormatError("body length is not a whole number of stripes")
    dtype = "<u1" if width == 1 else "<u2"
    body = np.frombuffer(raw, dtype=dtype).reshape(-1, n * alpha)
    if body.size and int(body.max()) >= field.q:
        raise FormatError("body symbol out of field range")
    return EncodedFile(
        code_type=code_type,
        params=params,
        field_kind=field_kind,
        field_modulus=modulus,
        body=body,
        payload_len=payload_len,
    )


# -- payload <-> symbol packing ----------------------------------------------


def payload_to_symbols(field: FieldSpec, payload: bytes) -> list[int]:
    """Reversible injection of bytes into field symbols.

    GF(256) and primes above 256 take one byte per symbol.  For primes
    below 256 the symbol p-1 escapes: a byte b >= p-1 becomes the pair
    (p-1, b-(p-1)), which requires p >= 131 so the second symbol fits.
    """
    q = field.q
    if q == 256 or q > 256:
        return list(payload)
    if q < 131:
        raise ParameterError(
            f"prime field p={q} is too small for byte packing (needs p >= 131)"
        )
    escape = q - 1
    out: list[int] = []
    for b in payload:
        if b < escape:
            out.append(b)
        else:
            out.append(escape)
            out.append(b - escape)
    return out


def symbols_to_payload(field: FieldSpec, symbols: Iterable[int], payload_len: int) -> bytes:
    """Inverse of ``payload_to_symbols``; trailing padding is ignored."""
    q = field.q
    out = bytearray()
    if q >= 256:
        for s in symbols:
            if len(out) == payload_len:
                break
            if s > 0xFF:
                raise FormatError(f"symbol {s} is not a byte")
            out.append(s)
    else:
        escape = q - 1
        pending_escape = False
        for s in symbols:
            if len(out) == payload_len:
                break
            if pending_escape:
                out.append(escape + s)
                pending_escape = False
            elif s == escape:
                pending_escape = True
            else:
                out.append(s)
    if len(out) < payload_len:
        raise FormatError(f"payload truncated: expected {payload_len} bytes, got {len(out)}")
    return bytes(out)


# -- structured-text reports ----------------------------------------------------


def format_thousandths(value) -> str:
    """Exact 3-decimal rendering of a rational, half away from zero."""
    fr = Fraction(value)
    sign = "-" if fr < 0 else ""
    fr = abs(fr)
    num = fr.numerator * 1000
    q, r = divmod(num, fr.denominator)
    if 2 * r >= fr.denominator:
        q += 1
    return f"{sign}{q // 1000}.{q % 1000:03d}"


def _encode_value(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    text = str(value)
    if not text or any(ch.isspace() for ch in text) or "=" in text:
        raise FormatError(f"value {value!r} does not fit the record grammar")
    return text


def render_records(records: Iterable[tuple[str, Mapping]], notes: Iterable[str] = ()) -> str:
    lines = []
    for note in notes:
        lines.append(f"# {note}")
    for kind, fields in records:
        parts = [f"record={kind}"]
        for key, value in fields.items():
            parts.append(f"{key}={_encode_value(value)}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def _decode_value(text: str):
    if "/" in text:
        num, _, den = text.partition("/")
        try:
            return Fraction(int(num), int(den))
        except ValueError:
            return text
    if "." in text:
        return text  # decimal renderings stay presentation strings
    try:
        return int(text)
    except ValueError:
        return text


def parse_report(text: str) -> list[tuple[str, dict]]:
    records = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if not tokens[0].startswith("record="):
            raise FormatError(f"malformed report line: {line!r}")
        kind = tokens[0][len("record=") :]
        fields = {}
        for token in tokens[1:]:
            key, eq, value = token.partition("=")
            if not eq:
                raise FormatError(f"malformed report token: {token!r}")
            fields[key] = _decode_value(value)
        records.append((kind, fields))
    return records
