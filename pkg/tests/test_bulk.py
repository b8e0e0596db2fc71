import itertools
import random

import numpy as np
import pytest

from rarc import bulk
from rarc.errors import VerificationError
from rarc.field import make_field
from rarc.mbrr import MbrrCode, pack_message
from rarc.msrr import MsrrCode
from rarc.params import SystemParams

RNG = random.Random(307)


def msrr_code(n=6, u=2, k=4, dbar=1, preference="prime"):
    return MsrrCode.build(SystemParams(n=n, u=u, k=k, dbar=dbar), make_field(n, u, preference))


def mbrr_code(n=8, u=2, k=5, dbar=1, preference="prime"):
    return MbrrCode.build(SystemParams(n=n, u=u, k=k, dbar=dbar), make_field(n, u, preference))


def random_block(code, stripes):
    return np.array(
        [[RNG.randrange(code.field.q) for _ in range(stripes)] for _ in range(code.B)],
        dtype=code.field.np_dtype,
    )


# ---------------------------------------------------------------------------
# scalar/batch two-path agreement
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "factory", [lambda: msrr_code(), lambda: msrr_code(10, 5, 9, 1, "gf256")]
)
def test_msrr_batch_encode_matches_scalar(factory):
    code = factory()
    data = random_block(code, 9)
    body = bulk.msrr_encode_stripes(code, data)
    for s in range(9):
        assert [int(v) for v in body[:, s]] == code.encode([int(v) for v in data[:, s]])


def test_msrr_batch_reconstruct_matches_scalar():
    code = msrr_code(8, 2, 5, 1)
    data = random_block(code, 6)
    body = bulk.msrr_encode_stripes(code, data)
    for nodes in itertools.combinations(range(8), 5):
        got = bulk.msrr_reconstruct_stripes(code, list(nodes), body[list(nodes), :])
        assert np.array_equal(got, data)


def test_msrr_batch_reconstruct_uses_extra_rows():
    code = msrr_code()
    data = random_block(code, 4)
    body = bulk.msrr_encode_stripes(code, data)
    got = bulk.msrr_reconstruct_stripes(code, list(range(6)), body)
    assert np.array_equal(got, data)


def test_msrr_batch_reconstruct_detects_corruption():
    code = msrr_code()
    data = random_block(code, 4)
    body = bulk.msrr_encode_stripes(code, data).copy()
    body[0, 2] = code.field.add(int(body[0, 2]), 1)
    with pytest.raises(VerificationError):
        bulk.msrr_reconstruct_stripes(code, list(range(6)), body)


def test_msrr_batch_repair_every_node_and_helper():
    code = msrr_code()
    p = code.params
    data = random_block(code, 5)
    body = bulk.msrr_encode_stripes(code, data)
    for idx in range(p.n):
        e_star, g_star = p.node_pair(idx)
        for helper in [e for e in range(p.nbar) if e != e_star]:
            got = bulk.msrr_repair_stripes(code, (e_star, g_star), [helper], body)
            assert np.array_equal(got[0], body[idx])


def test_msrr_batch_repair_local_only():
    code = msrr_code(6, 3, 4, 0)
    data = random_block(code, 5)
    body = bulk.msrr_encode_stripes(code, data)
    got = bulk.msrr_repair_stripes(code, (1, 2), [], body)
    assert np.array_equal(got[0], body[5])


def test_mbrr_batch_encode_matches_scalar():
    for code in (mbrr_code(), mbrr_code(10, 2, 7, 2), mbrr_code(10, 5, 8, 1, "gf256")):
        p = code.params
        data = random_block(code, 7)
        body = bulk.mbrr_encode_stripes(code, data)
        for s in range(7):
            C = code.encode(pack_message(p, [int(v) for v in data[:, s]]))
            flat = [C.at(i, node) for node in range(p.n) for i in range(p.dbar)]
            assert [int(v) for v in body[:, s]] == flat


def test_mbrr_batch_reconstruct_matches_scalar():
    code = mbrr_code(10, 2, 7, 2)
    p = code.params
    data = random_block(code, 6)
    body = bulk.mbrr_encode_stripes(code, data)
    for nodes in itertools.combinations(range(p.n), p.k):
        rows = body[[idx * p.dbar + i for idx in nodes for i in range(p.dbar)], :]
        got = bulk.mbrr_reconstruct_stripes(code, list(nodes), rows)
        assert np.array_equal(got, data)


def test_mbrr_batch_reconstruct_checks_extras_and_structure():
    code = mbrr_code(10, 2, 7, 2)
    p = code.params
    data = random_block(code, 4)
    body = bulk.mbrr_encode_stripes(code, data).copy()
    got = bulk.mbrr_reconstruct_stripes(code, list(range(p.n)), body)
    assert np.array_equal(got, data)
    body[-1, 1] = code.field.add(int(body[-1, 1]), 2)
    with pytest.raises(VerificationError):
        bulk.mbrr_reconstruct_stripes(code, list(range(p.n)), body)


def test_mbrr_batch_repair_every_node_and_helper_set():
    code = mbrr_code(10, 2, 7, 2)
    p = code.params
    data = random_block(code, 5)
    body = bulk.mbrr_encode_stripes(code, data)
    for idx in range(p.n):
        e_star, g_star = p.node_pair(idx)
        others = [e for e in range(p.nbar) if e != e_star]
        for helpers in itertools.combinations(others, p.dbar):
            got = bulk.mbrr_repair_stripes(code, (e_star, g_star), list(helpers), body)
            assert np.array_equal(got, body[idx * p.dbar : (idx + 1) * p.dbar, :])
