"""Exact dense linear algebra over a finite field.

Every encode/repair/reconstruct path in the package reduces to one of the
solvers here.  All arithmetic is exact; solutions substitute back into
their systems with equality, never within a tolerance.
"""

from __future__ import annotations

from typing import Sequence

from .errors import SingularSystemError


class Matrix:
    """Dense row-major matrix of field symbols (plain ints)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[int] | None = None):
        if entries is None:
            entries = [0] * (rows * cols)
        else:
            entries = list(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"need {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat: list[int] = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(row)
        return cls(r, c, flat)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = cls(n, n)
        for i in range(n):
            m.entries[i * n + i] = 1
        return m

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def put(self, i: int, j: int, value: int) -> None:
        self.entries[i * self.cols + j] = value

    def row(self, i: int) -> list[int]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> list[int]:
        return self.entries[j :: self.cols]

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def take_columns(self, cols: Sequence[int]) -> "Matrix":
        out = Matrix(self.rows, len(cols))
        for i in range(self.rows):
            base = i * self.cols
            for jj, j in enumerate(cols):
                out.entries[i * len(cols) + jj] = self.entries[base + j]
        return out

    def transpose(self) -> "Matrix":
        out = Matrix(self.cols, self.rows)
        for i in range(self.rows):
            for j in range(self.cols):
                out.entries[j * self.rows + i] = self.entries[i * self.cols + j]
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"


def mat_vec(F, A: Matrix, x: Sequence[int]) -> list[int]:
    if len(x) != A.cols:
        raise ValueError("dimension mismatch")
    out = []
    for i in range(A.rows):
        base = i * A.cols
        acc = 0
        for j in range(A.cols):
            acc = F.add(acc, F.mul(A.entries[base + j], x[j]))
        out.append(acc)
    return out


def mat_mul(F, A: Matrix, B: Matrix) -> Matrix:
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    out = Matrix(A.rows, B.cols)
    for i in range(A.rows):
        arow = A.row(i)
        for j in range(B.cols):
            acc = 0
            for t in range(A.cols):
                acc = F.add(acc, F.mul(arow[t], B.entries[t * B.cols + j]))
            out.entries[i * B.cols + j] = acc
    return out


def _eliminate(F, aug: list[list[int]], cols: int) -> int:
    """Forward elimination with first-nonzero pivoting; returns pivot count."""
    m = len(aug)
    piv = 0
    for col in range(cols):
        sel = -1
        for r in range(piv, m):
            if aug[r][col] != 0:
                sel = r
                break
        if sel < 0:
            continue
        aug[piv], aug[sel] = aug[sel], aug[piv]
        inv = F.inv(aug[piv][col])
        aug[piv] = [F.mul(v, inv) for v in aug[piv]]
        for r in range(m):
            if r != piv and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [F.sub(av, F.mul(f, pv)) for av, pv in zip(aug[r], aug[piv])]
        piv += 1
        if piv == m:
            break
    return piv


def rank(F, A: Matrix) -> int:
    work = [row[:] for row in A.to_rows()]
    return _eliminate(F, work, A.cols)


def gaussian_solve(F, A: Matrix, b: Sequence[int]) -> list[int]:
    """Solve A x = b for square or overdetermined-consistent A.

    Pivoting is deterministic: first nonzero entry in column order.
    """
    if len(b) != A.rows:
        raise ValueError("dimension mismatch")
    if A.rows < A.cols:
        raise SingularSystemError("underdetermined system")
    aug = [A.row(i) + [b[i]] for i in range(A.rows)]
    piv = _eliminate(F, aug, A.cols)
    if piv < A.cols:
        raise SingularSystemError("singular system")
    for r in range(piv, A.rows):
        if aug[r][A.cols] != 0:
            raise SingularSystemError("inconsistent system")
    # Reduced row-echelon: pivot rows are unit columns in order.
    return [aug[i][A.cols] for i in range(A.cols)]


def invert(F, A: Matrix) -> Matrix:
    if A.rows != A.cols:
        raise SingularSystemError("only square matrices invert")
    n = A.rows
    aug = [A.row(i) + Matrix.identity(n).row(i) for i in range(n)]
    piv = _eliminate(F, aug, n)
    if piv < n:
        raise SingularSystemError("singular matrix")
    return Matrix.from_rows([row[n:] for row in aug])


def poly_eval(F, coeffs: Sequence[int], x: int) -> int:
    """Evaluate a lowest-degree-first coefficient list at x (Horner)."""
    acc = 0
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _check_points(points: Sequence[int]) -> None:
    if len(set(points)) != len(points):
        raise SingularSystemError("duplicate interpolation points")


def vandermonde_solve(F, points: Sequence[int], values: Sequence[int]) -> list[int]:
    """Coefficients of the unique degree-< m polynomial through m points.

    Lagrange synthesis: build the master root polynomial, deflate it per
    point, and rescale -- an independent route from ``gaussian_solve`` on
    the explicit Vandermonde system.
    """
    if len(points) != len(values):
        raise ValueError("points/values length mismatch")
    _check_points(points)
    m = len(points)
    if m == 0:
        return []
    # master polynomial prod_i (x - x_i), lowest degree first
    root = [1]
    for x in points:
        root = [0] + root
        for j in range(len(root) - 1):
            root[j] = F.sub(root[j], F.mul(root[j + 1], x))
    coeffs = [0] * m
    for i, x in enumerate(points):
        # deflate: root / (X - x) by synthetic division from the top
        num = [0] * m
        num[m - 1] = root[m]
        for j in range(m - 1, 0, -1):
            num[j - 1] = F.add(root[j], F.mul(num[j], x))
        denom = poly_eval(F, num, x)
        scale = F.div(values[i], denom)
        for j in range(m):
            coeffs[j] = F.add(coeffs[j], F.mul(num[j], scale))
    return coeffs


def lagrange_leading_weights(F, points: Sequence[int]) -> list[int]:
    """Per-point weights w_g = 1 / prod_{g' != g} (x_g - x_{g'}).

    The leading coefficient of the interpolating polynomial is
    ``sum_g y_g * w_g``, so a holder of the y values can produce it as a
    single linear combination of what it stores.
    """
    _check_points(points)
    weights = []
    for i, xi in enumerate(points):
        prod = 1
        for j, xj in enumerate(points):
            if j != i:
                prod = F.mul(prod, F.sub(xi, xj))
        weights.append(F.inv(prod))
    return weights


def lagrange_leading_coefficient(F, points: Sequence[int], values: Sequence[int]) -> int:
    """Coefficient of x^(m-1) of the degree-< m interpolating polynomial."""
    if len(points) != len(values):
        raise ValueError("points/values length mismatch")
    weights = lagrange_leading_weights(F, points)
    acc = 0
    for y, w in zip(values, weights):
        acc = F.add(acc, F.mul(y, w))
    return acc


def lagrange_eval_weights(F, points: Sequence[int], x0: int) -> list[int]:
    """Weights L_g(x0) with interp(x0) = sum_g y_g * L_g(x0)."""
    _check_points(points)
    out = []
    for i, xi in enumerate(points):
        num, den = 1, 1
        for j, xj in enumerate(points):
            if j != i:
                num = F.mul(num, F.sub(x0, xj))
                den = F.mul(den, F.sub(xi, xj))
        out.append(F.div(num, den))
    return out


def constrained_interpolate(
    F,
    points: Sequence[int],
    values: Sequence[int],
    fixed_leading: int,
    degree_bound: int,
) -> list[int]:
    """Unique degree-<= degree_bound polynomial with a known top coefficient.

    Takes exactly ``degree_bound`` points: subtract the fixed leading term
    from the values and interpolate the residual, whose degree is below
    ``degree_bound``.
    """
    if len(points) != degree_bound:
        raise ValueError("need exactly degree_bound points")
    if len(points) != len(values):
        raise ValueError("points/values length mismatch")
    if degree_bound == 0:
        return [fixed_leading]
    residual = [
        F.sub(y, F.mul(fixed_leading, F.pow(x, degree_bound)))
        for x, y in zip(points, values)
    ]
    coeffs = vandermonde_solve(F, points, residual)
    return coeffs + [fixed_leading]
