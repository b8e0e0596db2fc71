"""Scalar minimum-storage code: one symbol per node, systematic encoding.

The code is the set of length-n vectors annihilated by the power sums
``sum_(e,g) lam[(e,g)]**t * c[(e,g)] = 0`` over a check-exponent set

    T = [0, n-k-1]  union  {i*u : i in [0, nbar - dbar - 1]},

which has exactly n - B elements for B = k - kbar + dbar.  The low block
of exponents makes the code a subcode of a generalized Reed-Solomon code,
so any k nodes recover the message; the stride-u block forces the per-rack
symbol sums to lie in a dimension-dbar MDS code over the points
``xi**(e*u)``, so one aggregate symbol from each of any dbar helper racks
pins down the failed rack's sum, and the missing symbol follows from the
u - 1 local symbols.
"""

from __future__ import annotations

import itertools
from dataclasses import replace
from typing import Iterable, Sequence

from .errors import ParameterError, SingularSystemError, VerificationError
from .field import FieldSpec, eval_points
from .linalg import Matrix, gaussian_solve, invert, mat_mul, mat_vec
from .params import SystemParams, msrr_point

#: Enumeration guard for brute-force distance scans.
MAX_ENUMERATION = 1 << 20


def check_exponents(p: SystemParams) -> list[int]:
    """The sorted check-exponent set T; |T| = n - k + kbar - dbar."""
    t1 = {i * p.u for i in range(p.nbar - p.dbar)}
    t = sorted(set(range(p.n - p.k)) | t1)
    expected = p.n - p.k + p.kbar - p.dbar
    if len(t) != expected:
        raise ParameterError("check-exponent set has unexpected size")
    return t


def _select_parity_columns(F: FieldSpec, H: Matrix) -> list[int]:
    """Columns kept as parity by the left-to-right information-set greedy.

    The greedy walks columns in (e, g) order and moves a column to the
    information set whenever the remaining pool still has full row rank.
    The kept set is therefore the unique basis preferring rightmost
    columns, which a single right-to-left independence sweep computes.
    """
    m = H.rows
    kept: list[int] = []
    reduced: list[tuple[int, list[int]]] = []  # (lead index, unit-lead vector)
    for c in range(H.cols - 1, -1, -1):
        v = H.col(c)
        for lead, vec in reduced:
            if v[lead] != 0:
                f = v[lead]
                v = [F.sub(a, F.mul(f, b)) for a, b in zip(v, vec)]
        lead = next((i for i, a in enumerate(v) if a != 0), -1)
        if lead < 0:
            continue
        inv = F.inv(v[lead])
        reduced.append((lead, [F.mul(a, inv) for a in v]))
        kept.append(c)
        if len(kept) == m:
            break
    if len(kept) != m:
        raise SingularSystemError("parity-check matrix is rank deficient")
    return sorted(kept)


class MsrrCode:
    """A built scalar code instance; immutable after ``build``."""

    code_type = "msrr"

    def __init__(self, params, field, T, lam, H, info_set, parity_set, enc):
        self.params = params
        self.field = field
        self.T = T
        self.lam = lam
        self.H = H
        self.info_set = info_set
        self.parity_set = parity_set
        self.enc = enc  # parity positions as a linear map of the message
        self.rack_points = [field.pow(field.xi, e * params.u) for e in range(params.nbar)]

    @classmethod
    def build(
        cls,
        params: SystemParams,
        field: FieldSpec,
        *,
        step_down_aligned_k: bool = False,
    ) -> "MsrrCode":
        """Construct the code for ``params`` over ``field``.

        ``step_down_aligned_k`` replaces k by k - 1 when dbar = 0 and u | k:
        the dimension k - kbar is unchanged but minimum distance improves
        from n - k + 1 to n - k + 2.  The substitution is never silent; it
        errors if requested outside that situation.
        """
        if step_down_aligned_k:
            if params.dbar != 0 or params.k % params.u != 0:
                raise ParameterError(
                    "step_down_aligned_k applies only when dbar == 0 and u | k"
                )
            params = replace(params, k=params.k - 1)
        if field.u != params.u:
            raise ParameterError(f"field rack size {field.u} != system rack size {params.u}")
        if field.q <= params.n:
            raise ParameterError(f"field size {field.q} must exceed node count {params.n}")
        T = check_exponents(params)
        lam = eval_points(field, params.nbar)
        H = Matrix.from_rows(
            [[field.pow(lam[c], t) for c in range(params.n)] for t in T]
        )
        parity_set = _select_parity_columns(field, H)
        info_set = [c for c in range(params.n) if c not in set(parity_set)]
        if len(info_set) != params.n - len(T):
            raise SingularSystemError("no valid information set exists")
        # H_P * c_P = -H_I * m  =>  c_P = -(H_P^-1 H_I) m
        hp_inv = invert(field, H.take_columns(parity_set))
        enc = mat_mul(field, hp_inv, H.take_columns(info_set))
        enc.entries = [field.neg(v) for v in enc.entries]
        return cls(params, field, T, lam, H, info_set, parity_set, enc)

    @property
    def B(self) -> int:
        return len(self.info_set)

    @property
    def alpha(self) -> int:
        return 1

    @property
    def beta(self) -> int:
        return msrr_point(self.params).beta

    # -- encoding ------------------------------------------------------------

    def encode(self, message: Sequence[int]) -> list[int]:
        """Systematic codeword: message symbols sit verbatim at the
        information positions, parity positions satisfy the checks."""
        if len(message) != self.B:
            raise ParameterError(f"message must have {self.B} symbols, got {len(message)}")
        codeword = [0] * self.params.n
        for pos, sym in zip(self.info_set, message):
            codeword[pos] = sym
        for pos, sym in zip(self.parity_set, mat_vec(self.field, self.enc, list(message))):
            codeword[pos] = sym
        return codeword

    def parity_ok(self, codeword: Sequence[int]) -> bool:
        return all(v == 0 for v in mat_vec(self.field, self.H, list(codeword)))

    # -- reconstruction --------------------------------------------------------

    def reconstruct(self, available: Iterable[tuple[int, int]]) -> list[int]:
        """Recover the message from any k (node index, symbol) pairs.

        Solves for the erased symbols with all check rows restricted to the
        erased columns.  Corrupted inputs surface as a solver inconsistency
        or as a failed parity check on the assembled codeword.
        """
        got = dict()
        for idx, sym in available:
            if not 0 <= idx < self.params.n:
                raise ParameterError(f"node index {idx} out of range")
            if idx in got:
                raise ParameterError(f"duplicate node index {idx}")
            got[idx] = sym
        if len(got) < self.params.k:
            raise ParameterError(f"need at least k={self.params.k} symbols, got {len(got)}")
        F = self.field
        codeword = [0] * self.params.n
        for idx, sym in got.items():
            codeword[idx] = sym
        erased = [c for c in range(self.params.n) if c not in got]
        if erased:
            rhs = []
            rows = []
            for r, t in enumerate(self.T):
                acc = 0
                for idx, sym in got.items():
                    acc = F.add(acc, F.mul(self.H.at(r, idx), sym))
                rhs.append(F.neg(acc))
                rows.append([self.H.at(r, c) for c in erased])
            solution = gaussian_solve(F, Matrix.from_rows(rows), rhs)
            for c, sym in zip(erased, solution):
                codeword[c] = sym
        if not self.parity_ok(codeword):
            raise VerificationError("supplied symbols are not consistent with the code")
        return [codeword[c] for c in self.info_set]

    # -- repair ----------------------------------------------------------------

    def helper_response(self, rack: int, symbols: Sequence[int]) -> int:
        """A helper rack's single-symbol aggregate: the sum of its u symbols."""
        if not 0 <= rack < self.params.nbar:
            raise ParameterError(f"rack {rack} out of range")
        if len(symbols) != self.params.u:
            raise ParameterError(f"rack {rack} must supply all {self.params.u} symbols")
        acc = 0
        for sym in symbols:
            acc = self.field.add(acc, sym)
        return acc

    def repair(
        self,
        failed: tuple[int, int],
        local: Sequence[int],
        helpers: Iterable[tuple[int, int]],
    ) -> int:
        """Restore symbol (e*, g*) from u - 1 local symbols and dbar helper
        aggregates.

        The per-rack sums form a codeword of a dimension-dbar MDS code over
        the points xi**(e*u): the stride-u checks leave nbar - dbar unknowns
        (the non-helper racks' sums), solved as a square system.  The failed
        symbol is the recovered rack sum minus the local symbols.
        """
        p = self.params
        if p.dbar < 1:
            raise ParameterError("no helper racks at dbar=0; use repair_local")
        e_star, g_star = failed
        p.node_index(e_star, g_star)  # bounds check
        if len(local) != p.u - 1:
            raise ParameterError(f"need the other {p.u - 1} symbols of rack {e_star}")
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
        F = self.field
        unknown = [e for e in range(p.nbar) if e not in resp]
        rows = []
        rhs = []
        for i in range(p.nbar - p.dbar):
            rows.append([F.pow(self.rack_points[e], i) for e in unknown])
            acc = 0
            for e, s in resp.items():
                acc = F.add(acc, F.mul(F.pow(self.rack_points[e], i), s))
            rhs.append(F.neg(acc))
        sums = gaussian_solve(F, Matrix.from_rows(rows), rhs)
        rack_sum = sums[unknown.index(e_star)]
        for sym in local:
            rack_sum = F.sub(rack_sum, sym)
        return rack_sum

    def repair_local(self, failed: tuple[int, int], local: Sequence[int]) -> int:
        """dbar = 0 repair: every rack sums to zero, so the missing symbol is
        the negated sum of the other u - 1."""
        p = self.params
        if p.dbar != 0:
            raise ParameterError("repair_local applies only at dbar=0")
        e_star, g_star = failed
        p.node_index(e_star, g_star)
        if len(local) != p.u - 1:
            raise ParameterError(f"need the other {p.u - 1} symbols of rack {e_star}")
        acc = 0
        for sym in local:
            acc = self.field.add(acc, sym)
        return self.field.neg(acc)

    # -- analysis ---------------------------------------------------------------

    def minimum_distance(self) -> int:
        """Minimum Hamming weight over all nonzero codewords, by enumeration.

        Guarded to test-scale instances (q**B <= 2**20 codewords).
        """
        q = self.field.q
        if q**self.B > MAX_ENUMERATION:
            raise ParameterError(
                f"{q}**{self.B} codewords exceed the enumeration guard {MAX_ENUMERATION}"
            )
        best = self.params.n + 1
        for message in itertools.product(range(q), repeat=self.B):
            if not any(message):
                continue
            weight = sum(1 for sym in self.encode(message) if sym != 0)
            if weight < best:
                best = weight
        return best
