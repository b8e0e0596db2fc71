"""Array minimum-bandwidth code: dbar symbols per node, product encoding.

The B = (k - kbar)*dbar + dbar*(dbar+1)/2 data symbols fill a dbar x k
message matrix M whose rack-boundary columns (indices t*u + u - 1) hold a
symmetric dbar x dbar block S followed by zeros.  Encoding evaluates the
row polynomials of M at the rack-structured points: node (e, g) stores the
column (f_0(lam), ..., f_{dbar-1}(lam)) at lam = lam[(e,g)], so any k
nodes re-interpolate M.

Within rack e the stored columns agree with dbar polynomials of degree
at most u - 1 whose leading coefficients form the vector h_e = S * v_e,
v_e the Vandermonde column at xi**(e*u).  Symmetry of S lets a helper
rack hand the failed rack one inner product of its own leading vector;
dbar such responses pin down h_{e*}, after which each per-rack polynomial
is re-interpolated from the u - 1 surviving columns plus its now-known
leading coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParameterError, VerificationError
from .field import FieldSpec, eval_points
from .linalg import (
    Matrix,
    constrained_interpolate,
    lagrange_leading_coefficient,
    mat_mul,
    poly_eval,
    vandermonde_solve,
)
from .params import SystemParams, mbrr_point


def j1_columns(p: SystemParams) -> list[int]:
    """The kbar rack-boundary column indices t*u + u - 1."""
    return [t * p.u + p.u - 1 for t in range(p.kbar)]


def j2_columns(p: SystemParams) -> list[int]:
    j1 = set(j1_columns(p))
    return [j for j in range(p.k) if j not in j1]


def _triangle_index(i: int, j: int, d: int) -> int:
    # row-major position of (i, j), i <= j, in the upper triangle of a d x d block
    return i * d - i * (i - 1) // 2 + (j - i)


def message_layout(p: SystemParams) -> list[list[int | None]]:
    """dbar x k grid mapping matrix cells to data-symbol indices.

    Symmetric-block cells share an index with their mirror; structural
    zeros map to ``None``.  Fixing this layout makes serialization
    canonical: the first dbar*(dbar+1)/2 symbols fill the upper triangle
    of S row-major (mirrored below), the rest fill the remaining columns
    column-major.
    """
    if p.dbar < 1:
        raise ParameterError("message matrix requires dbar >= 1")
    d = p.dbar
    grid: list[list[int | None]] = [[None] * p.k for _ in range(d)]
    j1 = j1_columns(p)
    for t, col in enumerate(j1):
        if t >= d:
            continue  # structural zero column
        for i in range(d):
            lo, hi = min(i, t), max(i, t)
            grid[i][col] = _triangle_index(lo, hi, d)
    base = d * (d + 1) // 2
    for cidx, col in enumerate(j2_columns(p)):
        for i in range(d):
            grid[i][col] = base + cidx * d + i
    return grid


def message_size(p: SystemParams) -> int:
    return (p.k - p.kbar) * p.dbar + p.dbar * (p.dbar + 1) // 2


def pack_message(p: SystemParams, data: Sequence[int]) -> Matrix:
    """Arrange B data symbols into the structured dbar x k message matrix."""
    B = message_size(p)
    if len(data) != B:
        raise ParameterError(f"data must have {B} symbols, got {len(data)}")
    grid = message_layout(p)
    M = Matrix(p.dbar, p.k)
    for i in range(p.dbar):
        for j in range(p.k):
            idx = grid[i][j]
            if idx is not None:
                M.put(i, j, data[idx])
    return M


def unpack_message(p: SystemParams, M: Matrix) -> list[int]:
    """Inverse of ``pack_message``; does not validate structure."""
    if (M.rows, M.cols) != (p.dbar, p.k):
        raise ParameterError(f"message matrix must be {p.dbar}x{p.k}")
    grid = message_layout(p)
    data = [0] * message_size(p)
    for i in range(p.dbar):
        for j in range(p.k):
            idx = grid[i][j]
            if idx is not None:
                data[idx] = M.at(i, j)
    return data


def symmetric_block(p: SystemParams, M: Matrix) -> Matrix:
    """The dbar x dbar block S sitting in the first dbar boundary columns."""
    j1 = j1_columns(p)
    S = Matrix(p.dbar, p.dbar)
    for i in range(p.dbar):
        for t in range(p.dbar):
            S.put(i, t, M.at(i, j1[t]))
    return S


@dataclass(frozen=True)
class LocalPolySet:
    """Rack-local polynomial family: coeffs[i][j] is the x^j coefficient of
    the i-th degree-<= u-1 polynomial; ``leading`` collects the x^(u-1) row."""

    coeffs: tuple[tuple[int, ...], ...]
    leading: tuple[int, ...]


class MbrrCode:
    """A built array-code instance; immutable after ``build``."""

    code_type = "mbrr"

    def __init__(self, params, field, lam):
        self.params = params
        self.field = field
        self.lam = lam
        self.rack_points = [field.pow(field.xi, e * params.u) for e in range(params.nbar)]
        self._encoding_matrix: Matrix | None = None

    @classmethod
    def build(cls, params: SystemParams, field: FieldSpec) -> "MbrrCode":
        if params.dbar < 1:
            raise ParameterError("the minimum-bandwidth code requires dbar >= 1")
        if field.u != params.u:
            raise ParameterError(f"field rack size {field.u} != system rack size {params.u}")
        if field.q <= params.n:
            raise ParameterError(f"field size {field.q} must exceed node count {params.n}")
        return cls(params, field, eval_points(field, params.nbar))

    @property
    def B(self) -> int:
        return message_size(self.params)

    @property
    def alpha(self) -> int:
        return self.params.dbar

    @property
    def beta(self) -> int:
        return mbrr_point(self.params).beta

    def _lambda_matrix(self) -> Matrix:
        if self._encoding_matrix is None:
            F = self.field
            rows = [
                [F.pow(self.lam[c], j) for c in range(self.params.n)]
                for j in range(self.params.k)
            ]
            self._encoding_matrix = Matrix.from_rows(rows)
        return self._encoding_matrix

    # -- encoding ------------------------------------------------------------

    def encode(self, M: Matrix) -> Matrix:
        """Code matrix C = M * Lambda; node (e, g) stores column (e*u + g)."""
        if (M.rows, M.cols) != (self.params.dbar, self.params.k):
            raise ParameterError(f"message matrix must be {self.params.dbar}x{self.params.k}")
        return mat_mul(self.field, M, self._lambda_matrix())

    def encode_data(self, data: Sequence[int]) -> Matrix:
        return self.encode(pack_message(self.params, data))

    def node_column(self, C: Matrix, index: int) -> list[int]:
        self.params.node_pair(index)  # bounds check
        return C.col(index)

    # -- the rack-local polynomial family --------------------------------------

    def local_polys(self, e: int, M: Matrix) -> LocalPolySet:
        """Degree-<= u-1 polynomials matching the global rows on rack e.

        Coefficient j collects the message columns congruent to j mod u,
        scaled by powers of xi**(e*u); the index ranges follow from
        k = kbar*u + u0, with the top coefficient cut to the symmetric
        block because the boundary columns beyond it are zero.
        """
        p = self.params
        if not 0 <= e < p.nbar:
            raise ParameterError(f"rack {e} out of range")
        F = self.field
        x = self.rack_points[e]
        coeffs = []
        for i in range(p.dbar):
            row = []
            for j in range(p.u):
                if j == p.u - 1:
                    ts = range(p.dbar)
                elif j < p.u0:
                    ts = range(p.kbar + 1)
                else:
                    ts = range(p.kbar)
                acc = 0
                for t in ts:
                    acc = F.add(acc, F.mul(M.at(i, t * p.u + j), F.pow(x, t)))
                row.append(acc)
            coeffs.append(tuple(row))
        return LocalPolySet(
            coeffs=tuple(coeffs),
            leading=tuple(row[p.u - 1] for row in coeffs),
        )

    def leading_vector_from_storage(self, e: int, columns: Sequence[Sequence[int]]) -> list[int]:
        """Leading coefficients of the rack-local polynomials, computed from
        the u stored columns alone (no message access)."""
        p = self.params
        if not 0 <= e < p.nbar:
            raise ParameterError(f"rack {e} out of range")
        if len(columns) != p.u:
            raise ParameterError(f"rack {e} must supply all {p.u} columns")
        points = [self.lam[p.node_index(e, g)] for g in range(p.u)]
        return [
            lagrange_leading_coefficient(self.field, points, [col[i] for col in columns])
            for i in range(p.dbar)
        ]

    # -- repair ----------------------------------------------------------------

    def helper_response(
        self, helper: int, failed_rack: int, columns: Sequence[Sequence[int]]
    ) -> int:
        """One symbol from a helper rack: the inner product of the failed
        rack's Vandermonde row with the helper's leading vector."""
        p = self.params
        if helper == failed_rack:
            raise ParameterError("failed rack cannot help itself")
        if not 0 <= failed_rack < p.nbar:
            raise ParameterError(f"rack {failed_rack} out of range")
        h = self.leading_vector_from_storage(helper, columns)
        F = self.field
        x = self.rack_points[failed_rack]
        acc = 0
        for i in range(p.dbar):
            acc = F.add(acc, F.mul(F.pow(x, i), h[i]))
        return acc

    def repair(
        self,
        failed: tuple[int, int],
        local: Sequence[tuple[int, Sequence[int]]],
        helpers: Iterable[tuple[int, int]],
    ) -> list[int]:
        """Restore the failed node's column from u - 1 (slot, column) pairs of
        its own rack plus dbar helper responses.

        The responses are evaluations of the polynomial with coefficient
        vector h_{e*} at the helpers' rack points (symmetry of the block S
        swaps the roles of helper and failed rack), so interpolation yields
        h_{e*}; each local polynomial then re-interpolates from its u - 1
        surviving values and known leading coefficient.
        """
        p = self.params
        F = self.field
        e_star, g_star = failed
        p.node_index(e_star, g_star)
        seen = set()
        local_points = []
        local_cols = []
        for g, col in local:
            if g == g_star or not 0 <= g < p.u:
                raise ParameterError(f"invalid local slot {g}")
            if g in seen:
                raise ParameterError(f"duplicate local slot {g}")
            if len(col) != p.dbar:
                raise ParameterError("stored columns carry dbar symbols")
            seen.add(g)
            local_points.append(self.lam[p.node_index(e_star, g)])
            local_cols.append(list(col))
        if len(local_points) != p.u - 1:
            raise ParameterError(f"need the other {p.u - 1} columns of rack {e_star}")
        resp = dict()
        for e, s in helpers:
            if not 0 <= e < p.nbar:
                raise ParameterError(f"helper rack {e} out of range")
            if e == e_star:
                raise ParameterError("failed rack cannot help itself")
            if e in resp:
                raise ParameterError(f"duplicate helper rack {e}")
            resp[e] = s
        if len(resp) != p.dbar:
            raise ParameterError(f"need exactly dbar={p.dbar} helper racks, got {len(resp)}")
        helper_list = sorted(resp)
        h_star = vandermonde_solve(
            F,
            [self.rack_points[e] for e in helper_list],
            [resp[e] for e in helper_list],
        )
        target = self.lam[p.node_index(e_star, g_star)]
        column = []
        for i in range(p.dbar):
            coeffs = constrained_interpolate(
                F,
                local_points,
                [col[i] for col in local_cols],
                h_star[i],
                p.u - 1,
            )
            column.append(poly_eval(F, coeffs, target))
        return column

    # -- reconstruction --------------------------------------------------------

    def reconstruct(self, available: Iterable[tuple[int, Sequence[int]]]) -> list[int]:
        """Recover the data file from any k node columns.

        Each row polynomial interpolates from k evaluations; extra columns
        and the message-matrix structure (symmetric block, zero boundary
        tail) act as corruption checks.
        """
        p = self.params
        F = self.field
        got: dict[int, list[int]] = {}
        for idx, col in available:
            if not 0 <= idx < p.n:
                raise ParameterError(f"node index {idx} out of range")
            if idx in got:
                raise ParameterError(f"duplicate node index {idx}")
            if len(col) != p.dbar:
                raise ParameterError("stored columns carry dbar symbols")
            got[idx] = list(col)
        if len(got) < p.k:
            raise ParameterError(f"need at least k={p.k} columns, got {len(got)}")
        order = sorted(got)
        base, extra = order[: p.k], order[p.k :]
        points = [self.lam[idx] for idx in base]
        M = Matrix(p.dbar, p.k)
        for i in range(p.dbar):
            coeffs = vandermonde_solve(F, points, [got[idx][i] for idx in base])
            for j, c in enumerate(coeffs):
                M.put(i, j, c)
        for idx in extra:
            lam = self.lam[idx]
            for i in range(p.dbar):
                if poly_eval(F, M.row(i), lam) != got[idx][i]:
                    raise VerificationError(f"column of node {idx} is inconsistent")
        self._check_structure(M)
        return unpack_message(p, M)

    def _check_structure(self, M: Matrix) -> None:
        p = self.params
        j1 = j1_columns(p)
        for t, col in enumerate(j1):
            for i in range(p.dbar):
                if t >= p.dbar:
                    if M.at(i, col) != 0:
                        raise VerificationError("zero tail of the boundary columns is nonzero")
                elif M.at(i, col) != M.at(t, j1[i]):
                    raise VerificationError("symmetric block mismatch")

    # -- structural check surface -------------------------------------------------

    def mbr_codeword_check(self, M: Matrix, C: Matrix) -> bool:
        """True iff the leading vectors recovered from the stored columns
        equal S times the Vandermonde matrix on the rack points -- i.e. the
        cross-rack storage really carries the block S.  Perturbing any
        stored symbol breaks the identity."""
        p = self.params
        F = self.field
        S = symmetric_block(p, M)
        V = Matrix.from_rows(
            [[F.pow(self.rack_points[e], i) for e in range(p.nbar)] for i in range(p.dbar)]
        )
        expected = mat_mul(F, S, V)
        for e in range(p.nbar):
            stored = [C.col(p.node_index(e, g)) for g in range(p.u)]
            leading = self.leading_vector_from_storage(e, stored)
            for i in range(p.dbar):
                if expected.at(i, e) != leading[i]:
                    return False
        return True
