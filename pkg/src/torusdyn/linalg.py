"""Exact linear algebra over Z and Q.

Everything here is arbitrary precision: matrices carry Python ints (or
Fractions), determinants use fraction-free Bareiss elimination, Smith
normal forms come with their unimodular transforms, and characteristic
polynomials are computed by an integer-preserving recursion.  No floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


class NonSquareMatrixError(ValueError):
    """Operation requires a square matrix."""


class SkewSymmetryError(ValueError):
    """Operation requires an even-dimensional skew-symmetric matrix."""


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable integer matrix, entries row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be >= 1")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntegerMatrix":
        nrows = len(rows)
        if nrows == 0:
            raise ValueError("matrix dimensions must be >= 1")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(nrows, ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntegerMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def scalar(cls, n: int, value: int) -> "IntegerMatrix":
        return cls.diagonal([value] * n)

    @classmethod
    def block_diagonal(cls, blocks: Sequence["IntegerMatrix"]) -> "IntegerMatrix":
        if not blocks:
            raise ValueError("need at least one block")
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls.from_rows(out)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(
            self.cols,
            self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def trace(self) -> int:
        if not self.is_square:
            raise NonSquareMatrixError("trace needs a square matrix")
        return sum(self[i, i] for i in range(self.rows))

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        return IntegerMatrix(
            self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in subtraction")
        return IntegerMatrix(
            self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries))
        )

    def __neg__(self) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __mul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in multiplication")
            ocols = other.cols
            out = []
            for i in range(self.rows):
                ri = self.row(i)
                for j in range(ocols):
                    out.append(sum(ri[k] * other.entries[k * ocols + j] for k in range(self.cols)))
            return IntegerMatrix(self.rows, ocols, tuple(out))
        if isinstance(other, int):
            return IntegerMatrix(self.rows, self.cols, tuple(a * other for a in self.entries))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, exponent: int) -> "IntegerMatrix":
        if not self.is_square:
            raise NonSquareMatrixError("power needs a square matrix")
        if exponent < 0:
            raise ValueError("negative matrix powers are not integral in general")
        result = IntegerMatrix.identity(self.rows)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def apply(self, vector: Sequence) -> tuple:
        """Matrix times column vector; entries may be ints or Fractions."""
        if len(vector) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum(self.row(i)[k] * vector[k] for k in range(self.cols)) for i in range(self.rows)
        )

    def is_skew_symmetric(self) -> bool:
        return self.is_square and all(
            self[i, j] == -self[j, i] for i in range(self.rows) for j in range(self.cols)
        )

    def to_rational(self) -> "RationalMatrix":
        return RationalMatrix(
            self.rows, self.cols, tuple(Fraction(e) for e in self.entries)
        )

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable matrix of exact rationals (Fraction keeps lowest terms)."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be >= 1")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")
        object.__setattr__(self, "entries", tuple(Fraction(e) for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        nrows = len(rows)
        if nrows == 0:
            raise ValueError("matrix dimensions must be >= 1")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(nrows, ncols, tuple(Fraction(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(
            n, n, tuple(Fraction(1 if i == j else 0) for i in range(n) for j in range(n))
        )

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols,
            self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        return RationalMatrix(
            self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in subtraction")
        return RationalMatrix(
            self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries))
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __mul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in multiplication")
            ocols = other.cols
            out = []
            for i in range(self.rows):
                ri = self.row(i)
                for j in range(ocols):
                    out.append(sum(ri[k] * other.entries[k * ocols + j] for k in range(self.cols)))
            return RationalMatrix(self.rows, ocols, tuple(out))
        if isinstance(other, (int, Fraction)):
            return RationalMatrix(self.rows, self.cols, tuple(a * other for a in self.entries))
        if isinstance(other, IntegerMatrix):
            return self * other.to_rational()
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        if isinstance(other, IntegerMatrix):
            return other.to_rational() * self
        return NotImplemented

    def apply(self, vector: Sequence) -> tuple[Fraction, ...]:
        if len(vector) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum((self.row(i)[k] * Fraction(vector[k]) for k in range(self.cols)), Fraction(0))
            for i in range(self.rows)
        )

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)

    def to_integer(self) -> IntegerMatrix:
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return IntegerMatrix(self.rows, self.cols, tuple(int(e) for e in self.entries))

    def determinant(self) -> Fraction:
        if not self.is_square:
            raise NonSquareMatrixError("determinant needs a square matrix")
        n = self.rows
        a = [list(self.row(i)) for i in range(n)]
        det_value = Fraction(1)
        for k in range(n):
            pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
            if pivot_row is None:
                return Fraction(0)
            if pivot_row != k:
                a[k], a[pivot_row] = a[pivot_row], a[k]
                det_value = -det_value
            pivot = a[k][k]
            det_value *= pivot
            for i in range(k + 1, n):
                factor = a[i][k] / pivot
                if factor:
                    for j in range(k, n):
                        a[i][j] -= factor * a[k][j]
        return det_value

    def inverse(self) -> "RationalMatrix":
        """Gauss-Jordan inverse; raises ValueError on a singular matrix."""
        if not self.is_square:
            raise NonSquareMatrixError("inverse needs a square matrix")
        n = self.rows
        a = [list(self.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for k in range(n):
            pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
            if pivot_row is None:
                raise ValueError("singular matrix has no inverse")
            a[k], a[pivot_row] = a[pivot_row], a[k]
            pivot = a[k][k]
            a[k] = [x / pivot for x in a[k]]
            for i in range(n):
                if i != k and a[i][k]:
                    factor = a[i][k]
                    a[i] = [x - factor * y for x, y in zip(a[i], a[k])]
        return RationalMatrix.from_rows([row[n:] for row in a])


@dataclass(frozen=True)
class IntegerPolynomial:
    """Integer polynomial, coefficients in ascending degree order."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        if self.coefficients == (0,):
            return -1
        return len(self.coefficients) - 1

    def __call__(self, x):
        # Horner; works for int, Fraction, float, complex argument types.
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def is_monic(self) -> bool:
        return self.degree >= 0 and self.coefficients[-1] == 1

    def __str__(self) -> str:
        if self.degree < 0:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            if k == 0:
                terms.append(f"{c:+d}")
            else:
                mag = "" if abs(c) == 1 else str(abs(c))
                sign = "+" if c > 0 else "-"
                var = "x" if k == 1 else f"x^{k}"
                terms.append(f"{sign}{mag}{var}")
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V = D with U, V unimodular and D diagonal.

    Elementary divisors are nonnegative, form a divisibility chain, and
    zeros trail.
    """

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix
    elementary_divisors: tuple[int, ...] = field(default=())

    def largest_divisor(self) -> int:
        """Largest nonzero elementary divisor, 0 for the zero matrix."""
        nonzero = [d for d in self.elementary_divisors if d != 0]
        return nonzero[-1] if nonzero else 0


def det(m: IntegerMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    if not m.is_square:
        raise NonSquareMatrixError("determinant needs a square matrix")
    n = m.rows
    if n == 1:
        return m[0, 0]
    a = m.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot_row is None:
                return 0
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # Exact division: Bareiss guarantees divisibility by prev.
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _clear_with_gcd(work, trans, i, j, col, by_rows):
    """2x2 unimodular transform sending (work[i][col], work[j][col]) to (g, 0).

    Applied to rows when by_rows, else to columns (col then indexes rows).
    The same transform is applied to the transform accumulator.
    """
    if by_rows:
        a, b = work[i][col], work[j][col]
    else:
        a, b = work[col][i], work[col][j]
    if b == 0:
        return
    if a == 0:
        # plain swap
        if by_rows:
            work[i], work[j] = work[j], work[i]
            trans[i], trans[j] = trans[j], trans[i]
        else:
            for row in work:
                row[i], row[j] = row[j], row[i]
            for row in trans:
                row[i], row[j] = row[j], row[i]
        return
    if b % a == 0:
        # pure shear; leaves the pivot line untouched, which the
        # termination argument of the caller's clearing loop relies on
        q = b // a
        if by_rows:
            work[j] = [v - q * u for u, v in zip(work[i], work[j])]
            trans[j] = [v - q * u for u, v in zip(trans[i], trans[j])]
        else:
            for row in work:
                row[j] -= q * row[i]
            for row in trans:
                row[j] -= q * row[i]
        return
    g, x, y = _xgcd(a, b)
    p, q = a // g, b // g
    # [[x, y], [-q, p]] has determinant x*p + y*q = 1.
    if by_rows:
        ri, rj = work[i], work[j]
        work[i] = [x * u + y * v for u, v in zip(ri, rj)]
        work[j] = [-q * u + p * v for u, v in zip(ri, rj)]
        ti, tj = trans[i], trans[j]
        trans[i] = [x * u + y * v for u, v in zip(ti, tj)]
        trans[j] = [-q * u + p * v for u, v in zip(ti, tj)]
    else:
        for row in work:
            u, v = row[i], row[j]
            row[i] = x * u + y * v
            row[j] = -q * u + p * v
        for row in trans:
            u, v = row[i], row[j]
            row[i] = x * u + y * v
            row[j] = -q * u + p * v


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) > 0 and x*a + y*b = g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def smith_normal_form(m: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms: U * m * V = D.

    D is diagonal with nonnegative entries d_1 | d_2 | ... ; zeros trail.
    """
    rows, cols = m.rows, m.cols
    work = m.to_lists()
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def col_nonzero_below(k):
        return any(work[i][k] != 0 for i in range(k + 1, rows))

    def row_nonzero_right(k):
        return any(work[k][j] != 0 for j in range(k + 1, cols))

    limit = min(rows, cols)
    for k in range(limit):
        # Bring a nonzero entry to (k, k) if one exists in the submatrix.
        pivot = None
        for i in range(k, rows):
            for j in range(k, cols):
                if work[i][j] != 0:
                    if pivot is None or abs(work[i][j]) < abs(work[pivot[0]][pivot[1]]):
                        pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            work[k], work[pi] = work[pi], work[k]
            U[k], U[pi] = U[pi], U[k]
        if pj != k:
            for row in work:
                row[k], row[pj] = row[pj], row[k]
            for row in V:
                row[k], row[pj] = row[pj], row[k]
        # Alternate row and column clearing until both are clean.
        while col_nonzero_below(k) or row_nonzero_right(k):
            for i in range(k + 1, rows):
                _clear_with_gcd(work, U, k, i, k, by_rows=True)
            for j in range(k + 1, cols):
                _clear_with_gcd(work, V, k, j, k, by_rows=False)
        # Pivot must divide every remaining entry; if not, fold the bad row in.
        while True:
            offender = None
            for i in range(k + 1, rows):
                for j in range(k + 1, cols):
                    if work[i][j] % work[k][k] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            for j in range(cols):
                work[k][j] += work[offender][j]
            for j in range(rows):
                U[k][j] += U[offender][j]
            while col_nonzero_below(k) or row_nonzero_right(k):
                for i in range(k + 1, rows):
                    _clear_with_gcd(work, U, k, i, k, by_rows=True)
                for j in range(k + 1, cols):
                    _clear_with_gcd(work, V, k, j, k, by_rows=False)

    # Normalize signs to nonnegative (row negation keeps U unimodular).
    for k in range(limit):
        if work[k][k] < 0:
            for j in range(cols):
                work[k][j] = -work[k][j]
            for j in range(rows):
                U[k][j] = -U[k][j]

    divisors = tuple(work[k][k] for k in range(limit))
    Dm = IntegerMatrix.from_rows(work)
    Um = IntegerMatrix.from_rows(U)
    Vm = IntegerMatrix.from_rows(V)
    return SmithDecomposition(U=Um, D=Dm, V=Vm, elementary_divisors=divisors)


def charpoly(m: IntegerMatrix) -> IntegerPolynomial:
    """Characteristic polynomial det(xI - m), monic, computed over Z.

    Uses the Faddeev-LeVerrier recursion; every division is exact so no
    rationals (let alone floats) appear.
    """
    if not m.is_square:
        raise NonSquareMatrixError("characteristic polynomial needs a square matrix")
    n = m.rows
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    Mk = IntegerMatrix.identity(n)
    for k in range(1, n + 1):
        AM = m * Mk
        tr = AM.trace()
        if tr % k != 0:
            raise ArithmeticError("inexact division in characteristic polynomial")
        ck = -tr // k
        coeffs[n - k] = ck
        if k < n:
            Mk = AM + IntegerMatrix.scalar(n, ck)
    return IntegerPolynomial(tuple(coeffs))


def _pfaffian_recursive(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    if n == 2:
        return a[0][1]
    total = 0
    for j in range(1, n):
        if a[0][j] == 0:
            continue
        keep = [i for i in range(1, n) if i != j]
        minor = [[a[r][c] for c in keep] for r in keep]
        sign = 1 if j % 2 == 1 else -1
        total += sign * a[0][j] * _pfaffian_recursive(minor)
    return total


def _pfaffian_eliminate(a: list[list[Fraction]]) -> int:
    """Pfaffian by skew elimination over exact rationals.

    Pf(S) = S[0][1] * Pf(S') with S' the Schur complement on rows/cols {0,1};
    row/column swaps flip the sign.  The result of the recursion is an exact
    rational that must be an integer for integer input.
    """
    n = len(a)
    sign = 1
    value = Fraction(1)
    while n > 0:
        j = next((c for c in range(1, n) if a[0][c] != 0), None)
        if j is None:
            return 0
        if j != 1:
            for row in a:
                row[1], row[j] = row[j], row[1]
            a[1], a[j] = a[j], a[1]
            sign = -sign
        p = a[0][1]
        value *= p
        rest = range(2, n)
        b = [
            [
                a[i][k] + (a[0][k] * a[1][i] - a[0][i] * a[1][k]) / p
                for k in rest
            ]
            for i in rest
        ]
        a = b
        n -= 2
    result = sign * value
    if result.denominator != 1:
        raise ArithmeticError("pfaffian elimination produced a non-integer")
    return int(result)


def pfaffian(s: IntegerMatrix) -> int:
    """Pfaffian of an even-dimensional skew-symmetric integer matrix.

    Satisfies Pf(s)^2 = det(s) and Pf(U^T s U) = det(U) Pf(s).  Recursive
    expansion up to dimension 8, exact elimination beyond.
    """
    if not s.is_square or s.rows % 2 != 0:
        raise SkewSymmetryError("pfaffian needs an even-dimensional square matrix")
    if not s.is_skew_symmetric():
        raise SkewSymmetryError("pfaffian needs a skew-symmetric matrix")
    if s.rows <= 8:
        return _pfaffian_recursive(s.to_lists())
    return _pfaffian_eliminate([[Fraction(x) for x in s.row(i)] for i in range(s.rows)])


def exterior_trace_sum(m: IntegerMatrix) -> int:
    """Alternating sum of exterior-power traces, sum_k (-1)^k tr(wedge^k m).

    For each k, tr(wedge^k m) is the k-th signed coefficient of the
    characteristic polynomial, so the sum collapses to det(I - m):
    evaluate charpoly at 1.
    """
    if not m.is_square:
        raise NonSquareMatrixError("exterior trace sum needs a square matrix")
    return int(charpoly(m)(1))
