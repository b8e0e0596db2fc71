import random
from fractions import Fraction

import numpy as np
import pytest

from rarc.errors import FormatError, ParameterError
from rarc.field import make_field
from rarc.formats import (
    EncodedFile,
    format_thousandths,
    parse_encoded,
    parse_report,
    payload_to_symbols,
    render_records,
    serialize_encoded,
    symbols_to_payload,
)
from rarc.params import SystemParams

RNG = random.Random(223)


def sample_encoded(code_type="msrr", field_kind="gf256"):
    params = SystemParams(n=50, u=5, k=44, dbar=4)
    if field_kind == "gf256":
        field = make_field(50, 5, "gf256")
    else:
        field = make_field(50, 5, "prime")
    alpha = 1 if code_type == "msrr" else params.dbar
    body = np.array(
        [[RNG.randrange(field.q) for _ in range(50 * alpha)] for _ in range(3)],
        dtype=field.np_dtype,
    )
    return EncodedFile(
        code_type=code_type,
        params=params,
        field_kind=field.kind,
        field_modulus=field.modulus,
        body=body,
        payload_len=100,
    )


# ---------------------------------------------------------------------------
# encoded-file round trips
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("code_type", ["msrr", "mbrr"])
@pytest.mark.parametrize("field_kind", ["gf256", "prime"])
def test_encoded_file_round_trip(code_type, field_kind):
    ef = sample_encoded(code_type, field_kind)
    parsed = parse_encoded(serialize_encoded(ef))
    assert parsed.code_type == ef.code_type
    assert parsed.params == ef.params
    assert parsed.field_kind == ef.field_kind
    assert parsed.field_modulus == ef.field_modulus
    assert parsed.payload_len == ef.payload_len
    assert np.array_equal(parsed.body, ef.body)
    assert parsed.alpha == ef.alpha
    assert parsed.stripes == 3


def test_corrupt_magic_rejected():
    blob = bytearray(serialize_encoded(sample_encoded()))
    blob[0] ^= 0xFF
    with pytest.raises(FormatError):
        parse_encoded(bytes(blob))


def test_unknown_version_rejected():
    blob = bytearray(serialize_encoded(sample_encoded()))
    blob[4] = 99
    with pytest.raises(FormatError):
        parse_encoded(bytes(blob))


def test_truncated_body_rejected():
    blob = serialize_encoded(sample_encoded())
    with pytest.raises(FormatError):
        parse_encoded(blob[:-3])  # no longer a whole number of stripes


def test_too_short_file_rejected():
    with pytest.raises(FormatError):
        parse_encoded(b"RARC")


def test_invalid_header_params_rejected():
    ef = sample_encoded()
    blob = bytearray(serialize_encoded(ef))
    blob[10] = 0  # k low byte -> k = 0... actually offset: recompute below
    # corrupt the k field (offset 4+1+1+2+2 = 10, little-endian u16)
    blob[10:12] = (0).to_bytes(2, "little")
    with pytest.raises(FormatError):
        parse_encoded(bytes(blob))


def test_out_of_range_symbol_rejected():
    ef = sample_encoded(field_kind="prime")  # p = 251 < 256
    body = ef.body.copy()
    body[0, 0] = 255
    bad = EncodedFile(
        code_type=ef.code_type,
        params=ef.params,
        field_kind=ef.field_kind,
        field_modulus=ef.field_modulus,
        body=body,
        payload_len=ef.payload_len,
    )
    with pytest.raises(FormatError):
        parse_encoded(serialize_encoded(bad))


# ---------------------------------------------------------------------------
# payload packing
# ---------------------------------------------------------------------------


def test_gf256_packing_is_identity():
    f = make_field(50, 5, "gf256")
    payload = bytes(range(256))
    symbols = payload_to_symbols(f, payload)
    assert symbols == list(range(256))
    assert symbols_to_payload(f, symbols, 256) == payload


def test_wide_prime_packing_is_byte_per_symbol():
    f = make_field(300, 2, "prime")  # p = 307 > 256
    payload = bytes(range(256))
    symbols = payload_to_symbols(f, payload)
    assert symbols == list(range(256))
    assert symbols_to_payload(f, symbols, 256) == payload


def test_small_prime_escape_covers_every_byte():
    f = make_field(130, 2, "prime")  # p = 131
    payload = bytes(range(256))
    symbols = payload_to_symbols(f, payload)
    assert all(0 <= s < f.q for s in symbols)
    # bytes below the escape stay single symbols, the rest become pairs
    assert len(symbols) == 130 + 2 * 126
    assert symbols_to_payload(f, symbols, 256) == payload


def test_small_prime_packing_with_padding_round_trip():
    f = make_field(130, 2, "prime")
    payload = bytes(RNG.randrange(256) for _ in range(999))
    symbols = payload_to_symbols(f, payload) + [0] * 57  # stripe padding
    assert symbols_to_payload(f, symbols, len(payload)) == payload


def test_tiny_prime_field_refuses_payloads():
    f = make_field(6, 2, "prime")  # p = 7 cannot carry bytes
    with pytest.raises(ParameterError):
        payload_to_symbols(f, b"hi")


def test_truncated_symbol_stream_detected():
    f = make_field(50, 5, "gf256")
    with pytest.raises(FormatError):
        symbols_to_payload(f, [1, 2, 3], 10)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def test_report_round_trips_exact_rationals():
    records = [
        (
            "table-row",
            {
                "nbar": 10,
                "code": "msrr",
                "storage": Fraction(25, 18),
                "storage_dec": "1.389",
                "bandwidth": Fraction(0, 1),
            },
        ),
        ("traffic", {"cross_rack_symbols": 4, "helpers": "0,1,2,4"}),
    ]
    text = render_records(records, notes=["one skipped cell"])
    parsed = parse_report(text)
    assert parsed[0][0] == "table-row"
    assert parsed[0][1]["storage"] == Fraction(25, 18)
    assert parsed[0][1]["storage_dec"] == "1.389"  # decimals stay strings
    assert parsed[0][1]["bandwidth"] == Fraction(0, 1)
    assert parsed[0][1]["nbar"] == 10
    assert parsed[1][1]["cross_rack_symbols"] == 4
    assert parsed[1][1]["helpers"] == "0,1,2,4"
    assert "# one skipped cell" in text


def test_report_rejects_malformed_lines():
    with pytest.raises(FormatError):
        parse_report("storage=1/2\n")
    with pytest.raises(FormatError):
        parse_report("record=x badtoken\n")


def test_report_rejects_unencodable_values():
    with pytest.raises(FormatError):
        render_records([("x", {"v": "has space"})])


# ---------------------------------------------------------------------------
# 3-decimal rendering
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "fraction,text",
    [
        (Fraction(25, 18), "1.389"),
        (Fraction(5, 4), "1.250"),
        (Fraction(200, 157), "1.274"),
        (Fraction(100, 81), "1.235"),
        (Fraction(50, 44), "1.136"),
        (Fraction(4, 1), "4.000"),
        (Fraction(0, 1), "0.000"),
        (Fraction(1, 2000), "0.001"),  # exact half rounds away from zero
        (Fraction(17, 8), "2.125"),
    ],
)
def test_format_thousandths(fraction, text):
    assert format_thousandths(fraction) == text
