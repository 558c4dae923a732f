"""
Exact arithmetic in cyclotomic fields Q(zeta_n)
Elements are dense coefficient vectors reduced modulo the n-th cyclotomic polynomial
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath
import sympy
from sympy import QQ, ZZ, Poly

from .config import get_settings
from .errors import InconsistencyError, OrderOverflowError, ShapeError

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

_X = sympy.Symbol('x')

# Below these sizes plain loops beat packing into big integers
_SCHOOLBOOK_LIMIT = 24
_SPARSE_REDUCTION_LIMIT = 20000


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[int, ...]:
    """Coefficients of Phi_n in ascending degree, by exact division of x^n - 1"""
    if n < 1:
        raise ValueError(f"Cyclotomic order must be positive, got {n}")
    quotient = Poly(_X ** n - 1, _X, domain=ZZ)
    for d in sympy.divisors(n)[:-1]:
        divisor = Poly(list(reversed(cyclotomic_polynomial(d))), _X, domain=ZZ)
        quotient = quotient.exquo(divisor)
    return tuple(int(c) for c in reversed(quotient.all_coeffs()))


def _pack(coeffs: Sequence[int], width: int) -> int:
    positive = b''.join((c if c > 0 else 0).to_bytes(width, 'little') for c in coeffs)
    negative = b''.join((-c if c < 0 else 0).to_bytes(width, 'little') for c in coeffs)
    return int.from_bytes(positive, 'little') - int.from_bytes(negative, 'little')


def _kronecker_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    """Multiply integer polynomials through one big-integer product"""
    size = len(a) + len(b) - 1
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    if bound == 0:
        return [0] * size
    width = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * width - 1)
    bias = int.from_bytes(half.to_bytes(width, 'little') * size, 'little')
    raw = (_pack(a, width) * _pack(b, width) + bias).to_bytes(width * size, 'little')
    return [int.from_bytes(raw[i:i + width], 'little') - half
            for i in range(0, width * size, width)]


def _strip(vec: Sequence[int]) -> Tuple[int, List[int]]:
    """Split off leading and trailing zeros, returning (offset, core)"""
    lo, hi = 0, len(vec)
    while hi > lo and not vec[hi - 1]:
        hi -= 1
    while lo < hi and not vec[lo]:
        lo += 1
    return lo, list(vec[lo:hi])


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    """Product of two integer coefficient vectors (ascending degree)"""
    off_a, core_a = _strip(a)
    off_b, core_b = _strip(b)
    if not core_a or not core_b:
        return []
    if min(len(core_a), len(core_b)) <= _SCHOOLBOOK_LIMIT:
        out = [0] * (len(core_a) + len(core_b) - 1)
        for i, x in enumerate(core_a):
            if x:
                for j, y in enumerate(core_b):
                    if y:
                        out[i + j] += x * y
    else:
        out = _kronecker_mul(core_a, core_b)
    return [0] * (off_a + off_b) + out


class _Modulus:
    """Reduction data for one cyclotomic order"""

    __slots__ = ("n", "phi", "poly", "low", "_inverse")

    def __init__(self, n: int):
        self.n = n
        self.poly = cyclotomic_polynomial(n)
        self.phi = len(self.poly) - 1
        self.low = tuple((k, c) for k, c in enumerate(self.poly[:-1]) if c)
        self._inverse: Optional[List[int]] = None

    def inverse_series(self) -> List[int]:
        """Power-series inverse of the reversed modulus, long enough for any folded vector"""
        if self._inverse is None:
            length = self.n - self.phi
            reversed_terms = [(self.phi - k, c) for k, c in self.low]
            series = [0] * length
            if length:
                series[0] = 1
            for i in range(1, length):
                acc = 0
                for k, c in reversed_terms:
                    if k <= i:
                        acc -= c * series[i - k]
                series[i] = acc
            self._inverse = series
        return self._inverse

    def reduce(self, vec: Sequence[int]) -> List[int]:
        """Canonical representative of vec modulo Phi_n, as exactly phi coefficients"""
        n, phi = self.n, self.phi
        if len(vec) > n:
            # Phi_n divides x^n - 1, so exponents may be taken mod n first
            folded = list(vec[:n])
            for i in range(n, len(vec)):
                folded[i % n] += vec[i]
            vec = folded
        extra = len(vec) - phi
        if extra <= 0:
            return list(vec) + [0] * (-extra)

        if extra * len(self.low) <= _SPARSE_REDUCTION_LIMIT:
            work = list(vec)
            for i in range(len(work) - 1, phi - 1, -1):
                c = work[i]
                if c:
                    base = i - phi
                    for k, ck in self.low:
                        work[base + k] -= c * ck
            return work[:phi]

        top = list(vec[phi:])[::-1]
        reversed_quotient = _poly_mul(top, self.inverse_series()[:extra])[:extra]
        reversed_quotient += [0] * (extra - len(reversed_quotient))
        product = _poly_mul(reversed_quotient[::-1], self.poly)
        product += [0] * (phi - len(product))
        return [vec[i] - product[i] for i in range(phi)]


@lru_cache(maxsize=None)
def _modulus(n: int) -> _Modulus:
    if n > 1000:
        logger.debug(f"Preparing cyclotomic modulus of order {n}")
    return _Modulus(n)


def check_order(n: int) -> int:
    """Refuse orders above the configured cap"""
    cap = get_settings().max_order
    if n > cap:
        raise OrderOverflowError(f"Cyclotomic order {n} exceeds the cap {cap}")
    return n


def _lcm_den(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    return den


class CycNum:
    """Exact element of Q(zeta_n) in the power basis 1, zeta_n, zeta_n^2, ...

    Values are immutable. Coefficients are stored as integer numerators over one
    positive common denominator, normalised so the representation is unique.
    Instances are unhashable because equality compares across orders.
    """

    __slots__ = ("_order", "_num", "_den")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, order: int, coeffs: Iterable[Any] = ()):
        if order < 1:
            raise ValueError(f"Cyclotomic order must be positive, got {order}")
        check_order(order)
        values = [Fraction(c) for c in coeffs]
        den = _lcm_den(values)
        num = [int(v * den) for v in values]
        self._order = order
        self._num, self._den = self._normalise(_modulus(order).reduce(num), den)

    @staticmethod
    def _normalise(num: List[int], den: int) -> Tuple[Tuple[int, ...], int]:
        if den != 1:
            g = gcd(den, *num)
            if g > 1:
                num = [c // g for c in num]
                den //= g
        return tuple(num), den

    @classmethod
    def _make(cls, order: int, num: List[int], den: int = 1) -> "CycNum":
        """Build from an already reduced numerator vector"""
        self = object.__new__(cls)
        self._order = order
        self._num, self._den = cls._normalise(num, den)
        return self

    # Constructors

    @classmethod
    def rational(cls, value: Rational, order: int = 1) -> "CycNum":
        value = Fraction(value)
        phi = _modulus(order).phi
        return cls._make(order, [value.numerator] + [0] * (phi - 1), value.denominator)

    @classmethod
    def zero(cls, order: int = 1) -> "CycNum":
        return cls.rational(0, order)

    @classmethod
    def one(cls, order: int = 1) -> "CycNum":
        return cls.rational(1, order)

    @classmethod
    def from_root_counts(cls, order: int, counts: Sequence[int]) -> "CycNum":
        """Sum of counts[e] * zeta_order^e; counts has one entry per exponent"""
        check_order(order)
        return cls._make(order, _modulus(order).reduce(list(counts)))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CycNum":
        return cls(int(data["order"]), [Fraction(c) for c in data["coeffs"]])

    # Accessors

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_integral(self) -> bool:
        """True when all coefficients are integers (an algebraic integer)"""
        return self._den == 1

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # Order handling

    def embed(self, order: int) -> "CycNum":
        """Same value written in Q(zeta_order); order must be a multiple"""
        if order == self._order:
            return self
        if order % self._order:
            raise ValueError(f"Cannot embed order {self._order} into order {order}")
        check_order(order)
        stride = order // self._order
        vec = [0] * ((len(self._num) - 1) * stride + 1)
        for i, c in enumerate(self._num):
            if c:
                vec[i * stride] = c
        return CycNum._make(order, _modulus(order).reduce(vec), self._den)

    @staticmethod
    def common_order(*values: "CycNum") -> int:
        order = 1
        for v in values:
            order = lcm(order, v._order)
        return check_order(order)

    # Arithmetic

    @staticmethod
    def _coerce(other: Any) -> Optional["CycNum"]:
        if isinstance(other, CycNum):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CycNum.rational(other)
        return None

    def _aligned(self, other: "CycNum") -> Tuple["CycNum", "CycNum"]:
        if self._order == other._order:
            return self, other
        order = CycNum.common_order(self, other)
        return self.embed(order), other.embed(order)

    def __add__(self, other: Any) -> "CycNum":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._aligned(other)
        if a._den == b._den:
            num = [x + y for x, y in zip(a._num, b._num)]
            return CycNum._make(a._order, num, a._den)
        num = [x * b._den + y * a._den for x, y in zip(a._num, b._num)]
        return CycNum._make(a._order, num, a._den * b._den)

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        return CycNum._make(self._order, [-c for c in self._num], self._den)

    def __sub__(self, other: Any) -> "CycNum":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "CycNum":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, value: Rational) -> "CycNum":
        """Multiply by a rational scalar"""
        value = Fraction(value)
        num = [c * value.numerator for c in self._num]
        return CycNum._make(self._order, num, self._den * value.denominator)

    def __mul__(self, other: Any) -> "CycNum":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_rational():
            return self.scale(other.rational_value())
        if self.is_rational():
            return other.scale(self.rational_value())
        a, b = self._aligned(other)
        num = _modulus(a._order).reduce(_poly_mul(a._num, b._num))
        return CycNum._make(a._order, num, a._den * b._den)

    __rmul__ = __mul__

    def conjugate(self) -> "CycNum":
        """Complex conjugation, the automorphism zeta_n -> zeta_n^(n-1)"""
        n = self._order
        vec = [0] * n
        for i, c in enumerate(self._num):
            if c:
                vec[-i % n] += c
        return CycNum._make(n, _modulus(n).reduce(vec), self._den)

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("Inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycNum.rational(1 / self.rational_value(), self._order)
        offset, core = _strip(self._num)
        element = Poly(list(reversed(self._num[:offset + len(core)])), _X, domain=QQ)
        modulus = Poly(list(reversed(_modulus(self._order).poly)), _X, domain=QQ)
        inverse = element.invert(modulus)
        coeffs = [Fraction(int(c.numerator), int(c.denominator)) * self._den
                  for c in reversed(inverse.all_coeffs())]
        return CycNum(self._order, coeffs)

    def __truediv__(self, other: Any) -> "CycNum":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_rational():
            value = other.rational_value()
            if value == 0:
                raise ZeroDivisionError("Division by zero in a cyclotomic field")
            return self.scale(1 / value)
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "CycNum":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "CycNum":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycNum.one(self._order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other: Any) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_rational() and other.is_rational():
            return self.rational_value() == other.rational_value()
        a, b = self._aligned(other)
        return a._den == b._den and a._num == b._num

    # Presentation

    def complex_approx(self, digits: int = 15) -> mpmath.mpc:
        """Floating approximation for display only"""
        with mpmath.workdps(digits):
            total = mpmath.mpc(0)
            for i, c in enumerate(self._num):
                if c:
                    total += mpmath.mpf(c) * mpmath.expjpi(mpmath.mpf(2 * i) / self._order)
            return +(total / self._den)

    def to_dict(self) -> Dict[str, Any]:
        return {"order": self._order, "coeffs": [str(c) for c in self.coeffs]}

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                body = str(abs(c))
            else:
                power = f"z{self._order}" if i == 1 else f"z{self._order}^{i}"
                body = power if abs(c) == 1 else f"{abs(c)}*{power}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        sign, body = terms[0]
        text = f"-{body}" if sign == "-" else body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"CycNum(order={self._order}, coeffs=[{', '.join(str(c) for c in self.coeffs)}])"


def root_of_unity(n: int, k: int) -> CycNum:
    """zeta_n^k in canonical form"""
    if n < 1:
        raise ValueError(f"Root of unity order must be positive, got {n}")
    counts = [0] * n
    counts[k % n] = 1
    return CycNum.from_root_counts(n, counts)


# Module-level ring operations

def add(a: CycNum, b: CycNum) -> CycNum:
    return a + b


def mul(a: CycNum, b: CycNum) -> CycNum:
    return a * b


def neg(a: CycNum) -> CycNum:
    return -a


def scalar_mul(a: CycNum, c: Rational) -> CycNum:
    return a.scale(c)


def conjugate(a: CycNum) -> CycNum:
    return a.conjugate()


def is_zero(a: CycNum) -> bool:
    return a.is_zero()


def complex_approx(a: CycNum, precision: int = 15) -> mpmath.mpc:
    return a.complex_approx(precision)


def format_approx(value: mpmath.mpc, digits: int = 15) -> str:
    """Render an approximation deterministically, rounding tiny parts to zero"""
    with mpmath.workdps(digits + 5):
        value = mpmath.chop(value, tol=mpmath.mpf(10) ** (-digits + 2))
        real = mpmath.nstr(mpmath.re(value), digits)
        imag = mpmath.nstr(mpmath.im(value), digits)
    if imag.startswith("-"):
        return f"{real} - {imag[1:]}i"
    return f"{real} + {imag}i"


@dataclass(frozen=True, eq=False)
class CycMatrix:
    """Row-major matrix of CycNum sharing one order, with optional labels"""
    rows: int
    cols: int
    entries: Tuple[CycNum, ...]
    row_labels: Optional[Tuple[Any, ...]] = None
    col_labels: Optional[Tuple[Any, ...]] = None
    order: int = field(init=False, default=1)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError(f"Invalid matrix shape {self.rows}x{self.cols}")
        entries = tuple(e if isinstance(e, CycNum) else CycNum.rational(e) for e in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ShapeError(f"Expected {self.rows * self.cols} entries, got {len(entries)}")
        if self.row_labels is not None and len(self.row_labels) != self.rows:
            raise ShapeError("Row label count does not match the number of rows")
        if self.col_labels is not None and len(self.col_labels) != self.cols:
            raise ShapeError("Column label count does not match the number of columns")
        order = CycNum.common_order(*entries)
        object.__setattr__(self, 'entries', tuple(e.embed(order) for e in entries))
        object.__setattr__(self, 'order', order)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]],
                  row_labels: Optional[Sequence[Any]] = None,
                  col_labels: Optional[Sequence[Any]] = None) -> "CycMatrix":
        rows = [list(r) for r in rows]
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise ShapeError("Rows have different lengths")
        return cls(len(rows), width, tuple(e for r in rows for e in r),
                   tuple(row_labels) if row_labels is not None else None,
                   tuple(col_labels) if col_labels is not None else None)

    @classmethod
    def identity(cls, k: int) -> "CycMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(k)] for i in range(k)])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> CycNum:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> List[CycNum]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> List[List[CycNum]]:
        return [self.row(i) for i in range(self.rows)]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "CycMatrix":
        rows = [[self[i, j] for j in col_idx] for i in row_idx]
        if not rows:
            return CycMatrix(0, len(col_idx), ())
        return CycMatrix.from_rows(
            rows,
            [self.row_labels[i] for i in row_idx] if self.row_labels is not None else None,
            [self.col_labels[j] for j in col_idx] if self.col_labels is not None else None,
        )

    def is_symmetric(self) -> bool:
        if not self.is_square:
            return False
        return all(self[i, j] == self[j, i]
                   for i in range(self.rows) for j in range(i + 1, self.cols))

    def scale_row(self, i: int, factor: CycNum) -> "CycMatrix":
        rows = self.to_rows()
        rows[i] = [e * factor for e in rows[i]]
        return CycMatrix.from_rows(rows, self.row_labels, self.col_labels)

    def scale_col(self, j: int, factor: CycNum) -> "CycMatrix":
        rows = self.to_rows()
        for r in rows:
            r[j] = r[j] * factor
        return CycMatrix.from_rows(rows, self.row_labels, self.col_labels)

    def apply(self, vector: Sequence[CycNum]) -> List[CycNum]:
        """Matrix-vector product"""
        if len(vector) != self.cols:
            raise ShapeError(f"Vector of length {len(vector)} for {self.cols} columns")
        result = []
        for i in range(self.rows):
            total = CycNum.zero(self.order)
            for j in range(self.cols):
                total = total + self[i, j] * vector[j]
            result.append(total)
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[e.to_dict() for e in r] for r in self.to_rows()]}


def _cofactor_det(rows: List[List[CycNum]], order: int) -> CycNum:
    k = len(rows)
    if k == 0:
        return CycNum.one(order)
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = CycNum.zero(order)
    for j, pivot in enumerate(rows[0]):
        if pivot.is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = pivot * _cofactor_det(minor, order)
        total = total - term if j % 2 else total + term
    return total


def _bareiss_det(rows: List[List[CycNum]], order: int) -> CycNum:
    """Fraction-free elimination over Z[zeta_n]; divisions are checked to be exact"""
    n = len(rows)
    a = [list(r) for r in rows]
    integral = all(e.is_integral() for r in a for e in r)
    sign = 1
    previous: Optional[CycNum] = None
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return CycNum.zero(order)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        inverse = previous.inverse() if previous is not None else None
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                value = pivot * a[i][j] - a[i][k] * a[k][j]
                if inverse is not None:
                    value = value * inverse
                    if integral and not value.is_integral():
                        raise InconsistencyError(
                            f"Bareiss step {k} produced a non-integral entry {value}")
                a[i][j] = value
        previous = pivot
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def det_exact(matrix: CycMatrix) -> CycNum:
    """Exact determinant; the empty matrix has determinant 1"""
    if not matrix.is_square:
        raise ShapeError(f"Determinant of a non-square {matrix.rows}x{matrix.cols} matrix")
    rows = matrix.to_rows()
    if matrix.rows <= 4:
        return _cofactor_det(rows, matrix.order)
    return _bareiss_det(rows, matrix.order)


def kernel_vector(matrix: CycMatrix) -> Optional[Tuple[CycNum, ...]]:
    """Nonzero v with Mv = 0 when M is singular, else None; first nonzero entry is 1"""
    if not matrix.is_square:
        raise ShapeError(f"Kernel of a non-square {matrix.rows}x{matrix.cols} matrix")
    n = matrix.rows
    if n == 0:
        return None
    a = matrix.to_rows()
    pivots: List[int] = []
    r = 0
    for c in range(n):
        row = next((i for i in range(r, n) if not a[i][c].is_zero()), None)
        if row is None:
            continue
        a[r], a[row] = a[row], a[r]
        inverse = a[r][c].inverse()
        a[r] = [e * inverse for e in a[r]]
        for i in range(n):
            if i != r and not a[i][c].is_zero():
                factor = a[i][c]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if r == n:
        return None

    free = next(c for c in range(n) if c not in pivots)
    vector = [CycNum.zero(matrix.order) for _ in range(n)]
    vector[free] = CycNum.one(matrix.order)
    for t, pc in enumerate(pivots):
        vector[pc] = -a[t][free]
    lead = next(v for v in vector if not v.is_zero())
    if lead != 1:
        inverse = lead.inverse()
        vector = [v * inverse for v in vector]
    return tuple(vector)
