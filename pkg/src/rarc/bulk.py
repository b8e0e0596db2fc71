"""Batch stripe codecs.

The per-stripe operations in ``msrr``/``mbrr`` are a handful of small
linear maps that do not depend on the stripe contents.  For whole-file
work these maps are precomputed once with the exact scalar solvers and
then applied across all stripes with the field's vectorized kernels.
Stripe matrices hold one stripe per column.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ParameterError, VerificationError
from .linalg import (
    Matrix,
    invert,
    lagrange_eval_weights,
    lagrange_leading_weights,
    mat_mul,
)
from .mbrr import MbrrCode, message_layout
from .msrr import MsrrCode


def _np(field, rows: Sequence[Sequence[int]]) -> np.ndarray:
    return np.array(rows, dtype=field.np_dtype)


# -- minimum-storage (scalar) code ---------------------------------------------


def msrr_generator(code: MsrrCode) -> np.ndarray:
    """(n x B) systematic generator; codeword = G @ message."""
    n, B = code.params.n, code.B
    rows = [[0] * B for _ in range(n)]
    for pos, b in zip(code.info_set, range(B)):
        rows[pos][b] = 1
    for r, pos in enumerate(code.parity_set):
        rows[pos] = code.enc.row(r)
    return _np(code.field, rows)


def msrr_encode_stripes(code: MsrrCode, data: np.ndarray) -> np.ndarray:
    """Encode a (B x stripes) message block into (n x stripes) symbols."""
    if data.shape[0] != code.B:
        raise ParameterError(f"message block must have {code.B} rows")
    return code.field.np_matmul(msrr_generator(code), data)


def msrr_reconstruct_stripes(
    code: MsrrCode, nodes: Sequence[int], symbols: np.ndarray
) -> np.ndarray:
    """Recover (B x stripes) messages from the rows of >= k nodes.

    ``symbols`` holds one row per entry of ``nodes``.  The filled codewords
    are re-checked against every parity row; inconsistent stripes raise.
    """
    p = code.params
    F = code.field
    nodes = list(nodes)
    if len(set(nodes)) != len(nodes):
        raise ParameterError("duplicate node indices")
    if len(nodes) < p.k:
        raise ParameterError(f"need at least k={p.k} nodes, got {len(nodes)}")
    if symbols.shape[0] != len(nodes):
        raise ParameterError("one symbol row per node required")
    order = sorted(range(len(nodes)), key=lambda i: nodes[i])
    avail = [nodes[i] for i in order]
    rows_avail = symbols[order, :]
    erased = [c for c in range(p.n) if c not in set(avail)]
    stripes = symbols.shape[1]
    full = np.zeros((p.n, stripes), dtype=F.np_dtype)
    full[avail, :] = rows_avail
    if erased:
        he = code.H.take_columns(erased)
        ha = code.H.take_columns(avail)
        # a deterministic invertible row subset of the check rows on the
        # erased columns
        picked: list[int] = []
        reduced: list[tuple[int, list[int]]] = []
        for r in range(he.rows):
            v = he.row(r)
            for lead, vec in reduced:
                if v[lead] != 0:
                    f = v[lead]
                    v = [F.sub(a, F.mul(f, b)) for a, b in zip(v, vec)]
            lead = next((i for i, a in enumerate(v) if a != 0), -1)
            if lead < 0:
                continue
            inv = F.inv(v[lead])
            reduced.append((lead, [F.mul(a, inv) for a in v]))
            picked.append(r)
            if len(picked) == len(erased):
                break
        if len(picked) != len(erased):
            raise VerificationError("check rows cannot isolate the erased columns")
        hsq_inv = invert(F, Matrix.from_rows([he.row(r) for r in picked]))
        q = mat_mul(F, hsq_inv, Matrix.from_rows([ha.row(r) for r in picked]))
        q.entries = [F.neg(v) for v in q.entries]
        full[erased, :] = F.np_matmul(_np(F, q.to_rows()), rows_avail)
    residue = F.np_matmul(_np(F, code.H.to_rows()), full)
    if residue.any():
        raise VerificationError("stripe fails its parity checks")
    return full[code.info_set, :]


def msrr_repair_weights(
    code: MsrrCode, failed: tuple[int, int], helper_racks: Sequence[int]
) -> list[int]:
    """Coefficients gamma with rack_sum(e*) = sum_h gamma_h * response_h."""
    helper_racks = list(helper_racks)
    weights = []
    for j in range(len(helper_racks)):
        unit = [(h, 1 if i == j else 0) for i, h in enumerate(helper_racks)]
        weights.append(code.repair(failed, [0] * (code.params.u - 1), unit))
    return weights


def msrr_repair_stripes(
    code: MsrrCode,
    failed: tuple[int, int],
    helper_racks: Sequence[int],
    node_rows: np.ndarray,
) -> np.ndarray:
    """Recompute the failed node's (1 x stripes) row from the full body
    (``node_rows`` is (n x stripes)) without reading that row."""
    p = code.params
    F = code.field
    e_star, g_star = failed
    if p.dbar == 0:
        acc = np.zeros((1, node_rows.shape[1]), dtype=F.np_dtype)
        for g in range(p.u):
            if g != g_star:
                acc = F.np_add(acc, node_rows[p.node_index(e_star, g)][None, :])
        return F.np_neg(acc)
    gammas = msrr_repair_weights(code, failed, helper_racks)
    responses = []
    for h in helper_racks:
        acc = np.zeros(node_rows.shape[1], dtype=F.np_dtype)
        for g in range(p.u):
            acc = F.np_add(acc, node_rows[p.node_index(h, g)])
        responses.append(acc)
    rack_sum = F.np_matmul(_np(F, [gammas]), np.stack(responses))
    local = np.zeros((1, node_rows.shape[1]), dtype=F.np_dtype)
    for g in range(p.u):
        if g != g_star:
            local = F.np_add(local, node_rows[p.node_index(e_star, g)][None, :])
    return F.np_add(rack_sum, F.np_neg(local))


# -- minimum-bandwidth (array) code ----------------------------------------------


def mbrr_generator(code: MbrrCode) -> np.ndarray:
    """(n*dbar x B) map from data symbols to node-major stored symbols."""
    p = code.params
    F = code.field
    grid = message_layout(p)
    rows = [[0] * code.B for _ in range(p.n * p.dbar)]
    for node in range(p.n):
        lam = code.lam[node]
        powers = [F.pow(lam, j) for j in range(p.k)]
        for i in range(p.dbar):
            row = rows[node * p.dbar + i]
            for j in range(p.k):
                b = grid[i][j]
                if b is not None:
                    row[b] = F.add(row[b], powers[j])
    return _np(F, rows)


def mbrr_encode_stripes(code: MbrrCode, data: np.ndarray) -> np.ndarray:
    """Encode a (B x stripes) data block into (n*dbar x stripes) symbols."""
    if data.shape[0] != code.B:
        raise ParameterError(f"data block must have {code.B} rows")
    return code.field.np_matmul(mbrr_generator(code), data)


def mbrr_reconstruct_stripes(
    code: MbrrCode, nodes: Sequence[int], symbols: np.ndarray
) -> np.ndarray:
    """Recover (B x stripes) data from the column rows of >= k nodes.

    ``symbols`` holds dbar consecutive rows per entry of ``nodes``.  Extra
    nodes and the message-matrix structure are verified per stripe.
    """
    p = code.params
    F = code.field
    nodes = list(nodes)
    if len(set(nodes)) != len(nodes):
        raise ParameterError("duplicate node indices")
    if len(nodes) < p.k:
        raise ParameterError(f"need at least k={p.k} nodes, got {len(nodes)}")
    if symbols.shape[0] != len(nodes) * p.dbar:
        raise ParameterError("dbar symbol rows per node required")
    stripes = symbols.shape[1]
    order = sorted(range(len(nodes)), key=lambda i: nodes[i])
    base, extra = order[: p.k], order[p.k :]
    points = [code.lam[nodes[i]] for i in base]
    vand = Matrix.from_rows([[F.pow(x, j) for j in range(p.k)] for x in points])
    vinv = _np(F, invert(F, vand).to_rows())
    m_rows = []
    for i in range(p.dbar):
        values = symbols[[a * p.dbar + i for a in base], :]
        m_rows.append(F.np_matmul(vinv, values))  # (k x stripes) coefficients
    for a in extra:
        lam = code.lam[nodes[a]]
        powers = _np(F, [[F.pow(lam, j) for j in range(p.k)]])
        for i in range(p.dbar):
            predicted = F.np_matmul(powers, m_rows[i])
            if not np.array_equal(predicted[0], symbols[a * p.dbar + i]):
                raise VerificationError(f"column of node {nodes[a]} is inconsistent")
    j1 = [t * p.u + p.u - 1 for t in range(p.kbar)]
    for t, col in enumerate(j1):
        for i in range(p.dbar):
            if t >= p.dbar:
                if m_rows[i][col].any():
                    raise VerificationError("zero tail of the boundary columns is nonzero")
            elif not np.array_equal(m_rows[i][col], m_rows[t][j1[i]]):
                raise VerificationError("symmetric block mismatch")
    grid = message_layout(p)
    data = np.zeros((code.B, stripes), dtype=F.np_dtype)
    for i in range(p.dbar):
        for j in range(p.k):
            b = grid[i][j]
            if b is not None:
                data[b] = m_rows[i][j]
    return data


def mbrr_repair_stripes(
    code: MbrrCode,
    failed: tuple[int, int],
    helper_racks: Sequence[int],
    node_rows: np.ndarray,
) -> np.ndarray:
    """Recompute the failed node's (dbar x stripes) rows from the full body
    without reading them."""
    p = code.params
    F = code.field
    e_star, g_star = failed
    helper_racks = list(helper_racks)
    if len(set(helper_racks)) != p.dbar or e_star in helper_racks:
        raise ParameterError(f"need {p.dbar} distinct helper racks != {e_star}")
    stripes = node_rows.shape[1]
    # helper responses: leading vectors from storage, then the failed rack's
    # Vandermonde row
    rack_pts = code.rack_points
    target_row = _np(F, [[F.pow(rack_pts[e_star], i) for i in range(p.dbar)]])
    responses = []
    for h in helper_racks:
        pts = [code.lam[p.node_index(h, g)] for g in range(p.u)]
        weights = _np(F, [lagrange_leading_weights(F, pts)])
        lead = []
        for i in range(p.dbar):
            cols = node_rows[[p.node_index(h, g) * p.dbar + i for g in range(p.u)], :]
            lead.append(F.np_matmul(weights, cols)[0])
        responses.append(F.np_matmul(target_row, np.stack(lead))[0])
    # interpolate the failed rack's leading vector from the responses
    vand = Matrix.from_rows(
        [[F.pow(rack_pts[h], j) for j in range(p.dbar)] for h in helper_racks]
    )
    vinv = _np(F, invert(F, vand).to_rows())
    h_star = F.np_matmul(vinv, np.stack(responses))  # (dbar x stripes)
    # evaluate each local polynomial at the failed point: a fixed combination
    # of the u-1 surviving values plus the leading coefficient
    local_slots = [g for g in range(p.u) if g != g_star]
    local_pts = [code.lam[p.node_index(e_star, g)] for g in local_slots]
    target = code.lam[p.node_index(e_star, g_star)]
    eval_w = lagrange_eval_weights(F, local_pts, target)
    lead_coef = F.pow(target, p.u - 1)
    for w, x in zip(eval_w, local_pts):
        lead_coef = F.sub(lead_coef, F.mul(w, F.pow(x, p.u - 1)))
    w_row = _np(F, [eval_w])
    out = np.zeros((p.dbar, stripes), dtype=F.np_dtype)
    for i in range(p.dbar):
        local = node_rows[[p.node_index(e_star, g) * p.dbar + i for g in local_slots], :]
        part = F.np_matmul(w_row, local)[0]
        out[i] = F.np_add(part, F.np_mul(np.full(stripes, lead_coef, dtype=F.np_dtype), h_star[i]))
    return out
