"""
Deterministic construction of GF(p^m)
Elements are indexed by their polynomial-basis digits; multiplication goes through log tables
"""

import itertools
import logging
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Sequence, Tuple

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_eval, gf_gcd, gf_pow_mod, gf_sub

from .config import get_settings
from .errors import FieldError, InconsistencyError

logger = logging.getLogger(__name__)


def factor_prime_power(q: int) -> Tuple[int, int]:
    """Split q = p^m, rejecting anything that is not a prime power"""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, m), = factors.items()
    return int(p), int(m)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Irreducibility over GF(p) for a monic polynomial given in ascending order"""
    m = len(modulus) - 1
    f = [int(c) % p for c in reversed(modulus)]
    if any(gf_eval(f, c, p, ZZ) == 0 for c in range(p)):
        return m == 1
    x = [1, 0]
    for i in range(1, m // 2 + 1):
        frobenius = gf_pow_mod(x, p ** i, f, p, ZZ)
        if gf_gcd(gf_sub(frobenius, x, p, ZZ), f, p, ZZ) != [1]:
            return False
    return True


def smallest_irreducible(p: int, m: int) -> Tuple[int, ...]:
    """First monic irreducible of degree m, ordering tails (c0, ..., c_{m-1}) lexicographically"""
    for tail in itertools.product(range(p), repeat=m):
        candidate = tail + (1,)
        if is_irreducible(candidate, p):
            return candidate
    raise InconsistencyError(f"No irreducible polynomial of degree {m} over GF({p})")


class FieldElement:
    """Element of GF(p^m), identified by index = sum of c_i * p^i"""

    __slots__ = ("parent", "index")

    def __init__(self, parent: "FieldSpec", index: int):
        self.parent = parent
        self.index = index

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.parent.digits(self.index)

    def is_zero(self) -> bool:
        return self.index == 0

    def _check(self, other: Any) -> "FieldElement":
        if isinstance(other, int) and not isinstance(other, bool):
            return self.parent.prime(other)
        if not isinstance(other, FieldElement):
            raise FieldError(f"Cannot combine a field element with {type(other).__name__}")
        if other.parent.key != self.parent.key:
            raise FieldError(f"Mixed fields GF({self.parent.q}) and GF({other.parent.q})")
        return other

    def __add__(self, other: Any) -> "FieldElement":
        other = self._check(other)
        return FieldElement(self.parent, self.parent.add_index(self.index, other.index))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.parent, self.parent.neg_index(self.index))

    def __sub__(self, other: Any) -> "FieldElement":
        return self + (-self._check(other))

    def __mul__(self, other: Any) -> "FieldElement":
        other = self._check(other)
        return FieldElement(self.parent, self.parent.mul_index(self.index, other.index))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.index == 0:
            raise FieldError("Inverse of zero in a finite field")
        spec = self.parent
        return FieldElement(spec, spec.exp_index(-spec.log_index(self.index)))

    def __truediv__(self, other: Any) -> "FieldElement":
        return self * self._check(other).inverse()

    def __pow__(self, exponent: int) -> "FieldElement":
        spec = self.parent
        if self.index == 0:
            if exponent < 0:
                raise FieldError("Negative power of zero in a finite field")
            return spec.one if exponent == 0 else spec.zero
        return FieldElement(spec, spec.exp_index(spec.log_index(self.index) * exponent))

    def trace(self) -> int:
        return self.parent.trace_of(self.index)

    def discrete_log(self) -> int:
        if self.index == 0:
            raise FieldError("Discrete logarithm of zero")
        return self.parent.log_index(self.index)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            return self.index == self.parent.prime(other).index
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.parent.key == other.parent.key and self.index == other.index

    def __hash__(self) -> int:
        return hash((self.parent.key, self.index))

    def __lt__(self, other: "FieldElement") -> bool:
        return self.index < self._check(other).index

    def to_list(self) -> List[int]:
        return list(self.coeffs)

    def __str__(self) -> str:
        if self.parent.m == 1:
            return str(self.index)
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            power = "1" if i == 0 else ("a" if i == 1 else f"a^{i}")
            if i == 0:
                terms.append(str(c))
            else:
                terms.append(power if c == 1 else f"{c}*{power}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"FieldElement(GF({self.parent.q}), {list(self.coeffs)})"


class FieldSpec:
    """GF(p^m) with a fixed modulus, generator, and log/exp/trace tables"""

    def __init__(self, p: int, m: int, modulus: Tuple[int, ...]):
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = modulus
        self.key = (p, m)
        self._digits = [self._split(i) for i in range(self.q)]
        self._exp: List[int] = []
        self._log: List[int] = [-1] * self.q
        self._trace: List[int] = []
        self.generator = FieldElement(self, self._find_generator())
        self._build_tables()

    # Construction helpers

    def _split(self, index: int) -> Tuple[int, ...]:
        digits = []
        for _ in range(self.m):
            index, c = divmod(index, self.p)
            digits.append(c)
        return tuple(digits)

    def _join(self, digits: Sequence[int]) -> int:
        index = 0
        for c in reversed(digits):
            index = index * self.p + c % self.p
        return index

    def _poly_mulmod(self, a: int, b: int) -> int:
        """Schoolbook product of two indices reduced by the modulus"""
        p, m = self.p, self.m
        if m == 1:
            return a * b % p
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(m):
                    prod[k - m + i] -= c * self.modulus[i]
        return self._join(prod[:m])

    def _poly_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._poly_mulmod(result, a)
            a = self._poly_mulmod(a, a)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        order = self.q - 1
        primes = sympy.primefactors(order) if order > 1 else []
        for index in range(1, self.q):
            if all(self._poly_pow(index, order // ell) != 1 for ell in primes):
                return index
        raise InconsistencyError(f"GF({self.q}) has no multiplicative generator")

    def _build_tables(self) -> None:
        g = self.generator.index
        value = 1
        for t in range(self.q - 1):
            self._exp.append(value)
            self._log[value] = t
            value = self._poly_mulmod(value, g)
        if value != 1 or -1 in self._log[1:]:
            raise InconsistencyError(f"Generator of GF({self.q}) does not have order {self.q - 1}")

        # Trace is additive, so the basis traces determine all others
        basis_traces = []
        for i in range(self.m):
            power = self._join([1 if k == i else 0 for k in range(self.m)])
            total = 0
            for _ in range(self.m):
                total = self.add_index(total, power)
                power = self._poly_pow(power, self.p)
            if total >= self.p:
                raise InconsistencyError(f"Trace of a^{i} left the prime subfield of GF({self.q})")
            basis_traces.append(total)
        self._trace = [sum(c * t for c, t in zip(self._digits[i], basis_traces)) % self.p
                       for i in range(self.q)]

    # Index arithmetic

    def digits(self, index: int) -> Tuple[int, ...]:
        return self._digits[index]

    def add_index(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._join([x + y for x, y in zip(self._digits[a], self._digits[b])])

    def neg_index(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        return self._join([-x for x in self._digits[a]])

    def mul_index(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def exp_index(self, t: int) -> int:
        return self._exp[t % (self.q - 1)]

    def log_index(self, a: int) -> int:
        return self._log[a]

    def trace_of(self, a: int) -> int:
        return self._trace[a]

    # Element access

    def element(self, index: int) -> FieldElement:
        if not 0 <= index < self.q:
            raise FieldError(f"Index {index} outside GF({self.q})")
        return FieldElement(self, index)

    def from_coeffs(self, coeffs: Sequence[int]) -> FieldElement:
        if len(coeffs) != self.m:
            raise FieldError(f"Expected {self.m} coefficients, got {len(coeffs)}")
        return FieldElement(self, self._join(coeffs))

    def prime(self, c: int) -> FieldElement:
        """Image of the integer c in the prime subfield"""
        return FieldElement(self, c % self.p)

    def power_of_generator(self, t: int) -> FieldElement:
        return FieldElement(self, self.exp_index(t))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> Tuple[FieldElement, ...]:
        return tuple(FieldElement(self, i) for i in range(self.q))

    def nonzero(self) -> Iterator[FieldElement]:
        return (FieldElement(self, i) for i in range(1, self.q))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.key == other.key and self.modulus == other.modulus
                and self.generator.index == other.generator.index)

    def __hash__(self) -> int:
        return hash(self.key)

    def __reduce__(self):
        return build_field, (self.p, self.m)

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus),
                "generator": self.generator.to_list()}

    def modulus_str(self) -> str:
        terms = []
        for i in range(self.m, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            power = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if i == 0:
                terms.append(str(c))
            else:
                terms.append(power if c == 1 else f"{c}*{power}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, m={self.m}, modulus={list(self.modulus)})"


@lru_cache(maxsize=64)
def _build_field(p: int, m: int) -> FieldSpec:
    modulus = (0, 1) if m == 1 else smallest_irreducible(p, m)
    spec = FieldSpec(p, m, modulus)
    logger.debug(f"Built GF({spec.q}) with modulus {spec.modulus_str()}, generator {spec.generator}")
    return spec


def build_field(p: int, m: int = 1) -> FieldSpec:
    """Build GF(p^m) with the lexicographically smallest irreducible modulus"""
    if not sympy.isprime(p):
        raise FieldError(f"{p} is not prime")
    if m < 1:
        raise FieldError(f"Extension degree must be at least 1, got {m}")
    cap = get_settings().field_cap
    if p ** m > cap:
        raise FieldError(f"GF({p}^{m}) exceeds the field size cap {cap}")
    return _build_field(p, m)


def field_for_order(q: int) -> FieldSpec:
    p, m = factor_prime_power(q)
    return build_field(p, m)


def elements(spec: FieldSpec) -> Tuple[FieldElement, ...]:
    return spec.elements()


def trace(x: FieldElement) -> int:
    return x.trace()


def discrete_log(x: FieldElement) -> int:
    return x.discrete_log()


def inv(x: FieldElement) -> FieldElement:
    return x.inverse()
