"""
Group algebra of F_q: Fourier transform, chi-symmetry and the compressed Fourier matrix
Gauss sums and the T_j sums of the index-3 case live here too
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Set, Tuple

from .characters import (
    AddCharacter,
    MultCharacter,
    SubgroupChar,
    additive_character,
    canonical_additive,
    extensions,
)
from .cyclotomic import CycMatrix, CycNum, root_of_unity
from .errors import CharacterError, FieldError, RepresentativeError
from .finite_field import FieldElement, FieldSpec

logger = logging.getLogger(__name__)


class GroupAlgebraElement:
    """f = sum of f_a [a] over a in F_q, one CycNum per field element"""

    __slots__ = ("field", "_values")

    def __init__(self, spec: FieldSpec, values: Sequence[Any]):
        if len(values) != spec.q:
            raise FieldError(f"Expected {spec.q} coefficients, got {len(values)}")
        self.field = spec
        self._values = tuple(v if isinstance(v, CycNum) else CycNum.rational(v) for v in values)

    @classmethod
    def zero(cls, spec: FieldSpec) -> "GroupAlgebraElement":
        return cls(spec, [0] * spec.q)

    @classmethod
    def constant(cls, spec: FieldSpec, value: Any = 1) -> "GroupAlgebraElement":
        return cls(spec, [value] * spec.q)

    @classmethod
    def delta(cls, spec: FieldSpec, x: FieldElement, value: Any = 1) -> "GroupAlgebraElement":
        values: List[Any] = [0] * spec.q
        values[x.index] = value
        return cls(spec, values)

    @classmethod
    def from_function(cls, spec: FieldSpec, fn: Callable[[FieldElement], Any]) -> "GroupAlgebraElement":
        return cls(spec, [fn(x) for x in spec.elements()])

    @classmethod
    def from_mapping(cls, spec: FieldSpec, mapping: Mapping[FieldElement, Any]) -> "GroupAlgebraElement":
        values: List[Any] = [0] * spec.q
        for x, value in mapping.items():
            values[x.index] = value
        return cls(spec, values)

    @classmethod
    def from_character(cls, chi: MultCharacter) -> "GroupAlgebraElement":
        """The multiplicative character as an element, with chi(0) = 0"""
        return cls.from_function(chi.parent, chi)

    @property
    def values(self) -> Tuple[CycNum, ...]:
        return self._values

    def __getitem__(self, x: Any) -> CycNum:
        if isinstance(x, FieldElement):
            if x.parent.key != self.field.key:
                raise FieldError("Element of another field used as an index")
            return self._values[x.index]
        return self._values[x]

    def coeffs(self) -> Dict[FieldElement, CycNum]:
        return dict(zip(self.field.elements(), self._values))

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self._values)

    def _check(self, other: "GroupAlgebraElement") -> None:
        if other.field.key != self.field.key:
            raise FieldError("Group algebra elements over different fields")

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._check(other)
        return GroupAlgebraElement(self.field, [a + b for a, b in zip(self._values, other._values)])

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._check(other)
        return GroupAlgebraElement(self.field, [a - b for a, b in zip(self._values, other._values)])

    def scale(self, c: Any) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.field, [v * c for v in self._values])

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.field.key == other.field.key and all(
            a == b for a, b in zip(self._values, other._values))

    __hash__ = None  # type: ignore[assignment]

    def support(self) -> Set[FieldElement]:
        return {x for x, v in zip(self.field.elements(), self._values) if not v.is_zero()}

    def to_list(self) -> List[Dict[str, Any]]:
        return [v.to_dict() for v in self._values]

    def __repr__(self) -> str:
        return f"GroupAlgebraElement(GF({self.field.q}), [{', '.join(str(v) for v in self._values)}])"


def _trace_sum(f: GroupAlgebraElement, a: FieldElement, sign: int) -> CycNum:
    """sum over x of f_x * zeta_p^(sign * Tr(a x)), collecting by trace value first"""
    spec = f.field
    p = spec.p
    buckets: List[Optional[CycNum]] = [None] * p
    for x, value in zip(spec.elements(), f.values):
        if value.is_zero():
            continue
        t = spec.trace_of(spec.mul_index(a.index, x.index))
        buckets[t] = value if buckets[t] is None else buckets[t] + value
    total = CycNum.zero(p)
    for t, bucket in enumerate(buckets):
        if bucket is not None:
            total = total + bucket * root_of_unity(p, sign * t)
    return total


def fourier_transform(f: GroupAlgebraElement) -> GroupAlgebraElement:
    """f_hat as a function of a, where f_hat(epsilon_a) = sum_x f_x epsilon_a(x)"""
    return GroupAlgebraElement(f.field, [_trace_sum(f, a, 1) for a in f.field.elements()])


def inverse_fourier(F: GroupAlgebraElement) -> GroupAlgebraElement:
    """f_x = (1/q) sum_a conjugate(epsilon_a(x)) F_a"""
    q = F.field.q
    return GroupAlgebraElement(F.field, [_trace_sum(F, x, -1).scale(Fraction(1, q))
                                         for x in F.field.elements()])


def support(f: GroupAlgebraElement) -> Set[FieldElement]:
    return f.support()


def support_hat(f: GroupAlgebraElement) -> Set[AddCharacter]:
    return {AddCharacter(a) for a in fourier_transform(f).support()}


def apply_symmetry_action(h: FieldElement, chi: SubgroupChar,
                          f: GroupAlgebraElement) -> GroupAlgebraElement:
    """Coefficient of h*a in the result is chi(h) * f_a"""
    H = chi.subgroup
    if not H.contains(h):
        raise RepresentativeError(f"{h} is not in the subgroup of index {H.index}")
    value = chi(h)
    spec = f.field
    out: List[Any] = [0] * spec.q
    for x, v in zip(spec.elements(), f.values):
        out[spec.mul_index(h.index, x.index)] = value * v
    return GroupAlgebraElement(spec, out)


def is_chi_symmetric(f: GroupAlgebraElement, chi: SubgroupChar) -> bool:
    spec = f.field
    for h in chi.subgroup.elements():
        value = chi(h)
        for x, v in zip(spec.elements(), f.values):
            if f.values[spec.mul_index(h.index, x.index)] != value * v:
                return False
    return True


def orbit_representatives(chi: SubgroupChar) -> Tuple[FieldElement, ...]:
    """generator^0, ..., generator^(index-1), with 0 in front when chi is trivial"""
    H = chi.subgroup
    reps = tuple(H.parent.power_of_generator(t) for t in range(H.index))
    if chi.is_trivial():
        return (H.parent.zero,) + reps
    return reps


def validate_representatives(chi: SubgroupChar, reps: Sequence[FieldElement]) -> Tuple[FieldElement, ...]:
    """Check that reps meet every orbit exactly once"""
    H = chi.subgroup
    seen: Set[Any] = set()
    for r in reps:
        if r.parent.key != H.parent.key:
            raise RepresentativeError(f"Representative {r} belongs to another field")
        orbit = "zero" if r.is_zero() else r.discrete_log() % H.index
        if orbit in seen:
            raise RepresentativeError(f"Two representatives of the same orbit, including {r}")
        seen.add(orbit)
    expected = H.index + (1 if chi.is_trivial() else 0)
    if len(seen) != expected or ("zero" in seen and not chi.is_trivial()):
        raise RepresentativeError(
            f"Expected {expected} representatives for a {'trivial' if chi.is_trivial() else 'nontrivial'} "
            f"character, got {len(reps)}")
    return tuple(reps)


def extend_from_representatives(values: Mapping[FieldElement, Any],
                                chi: SubgroupChar) -> GroupAlgebraElement:
    """chi-symmetric f with f_(h r) = chi(h) values[r]"""
    reps = validate_representatives(chi, list(values))
    spec = chi.field
    out: List[Any] = [0] * spec.q
    elements = chi.subgroup.elements()
    for r in reps:
        value = values[r]
        if not isinstance(value, CycNum):
            value = CycNum.rational(value)
        if r.is_zero():
            out[0] = value
            continue
        for h in elements:
            out[spec.mul_index(h.index, r.index)] = chi(h) * value
    return GroupAlgebraElement(spec, out)


def basis_element(r: FieldElement, chi: SubgroupChar) -> GroupAlgebraElement:
    """sum over h in H of chi(h) [h r]; its transform on epsilon_s is entry(s, r)"""
    spec = chi.field
    if r.is_zero() and not chi.is_trivial():
        raise RepresentativeError("0 is not a representative for a nontrivial character")
    out: List[Any] = [0] * spec.q
    for h in chi.subgroup.elements():
        position = spec.mul_index(h.index, r.index)
        value = chi(h)
        out[position] = value if isinstance(out[position], int) else out[position] + value
    return GroupAlgebraElement(spec, out)


def gauss_sum(chi: MultCharacter, psi: AddCharacter) -> CycNum:
    """G(chi, psi), the sum of chi(c) psi(c) over nonzero c"""
    spec = chi.parent
    if psi.field.key != spec.key:
        raise FieldError("Gauss sum of characters of different fields")
    p = spec.p
    order = lcm(chi.order, p)
    chi_step, psi_step = order // chi.order, order // p
    counts = [0] * order
    for c in spec.nonzero():
        counts[(chi.exponent(c) * chi_step + psi.exponent(c) * psi_step) % order] += 1
    return CycNum.from_root_counts(order, counts)


@dataclass(frozen=True, eq=False)
class GaussSumSet:
    """G_i = G(phi_i, epsilon) for the extensions phi_0, phi_1, ... of chi"""
    chi: SubgroupChar
    sums: Tuple[CycNum, ...]

    def __len__(self) -> int:
        return len(self.sums)

    def __getitem__(self, i: int) -> CycNum:
        return self.sums[i]

    def all_equal(self) -> bool:
        return all(g == self.sums[0] for g in self.sums[1:])

    def to_dict(self) -> Dict[str, Any]:
        return {"chi": self.chi.to_dict(), "sums": [g.to_dict() for g in self.sums]}


def gauss_set(chi: SubgroupChar) -> GaussSumSet:
    epsilon = canonical_additive(chi.field)
    sums = tuple(gauss_sum(phi, epsilon) for phi in extensions(chi))
    return GaussSumSet(chi, sums)


@dataclass(frozen=True, eq=False)
class TSums:
    """T_j = G_0 + zeta_3^j G_1 + zeta_3^(2j) G_2, indexed mod 3"""
    t: Tuple[CycNum, CycNum, CycNum]

    def __getitem__(self, j: int) -> CycNum:
        return self.t[j % 3]

    def to_dict(self) -> Dict[str, Any]:
        return {f"T{j}": value.to_dict() for j, value in enumerate(self.t)}


def t_sums(g: GaussSumSet) -> TSums:
    if len(g) != 3:
        raise CharacterError(f"T sums need exactly 3 Gauss sums, got {len(g)}")
    values = tuple(
        sum((root_of_unity(3, j * i) * g[i] for i in range(3)), CycNum.zero(3))
        for j in range(3)
    )
    return TSums(values)  # type: ignore[arg-type]


@dataclass(frozen=True, eq=False)
class CftMatrix:
    """Compressed Fourier matrix: row s, column r holds entry(s, r)"""
    matrix: CycMatrix
    chi: SubgroupChar
    R: Tuple[FieldElement, ...]
    S: Tuple[FieldElement, ...]

    @property
    def size(self) -> int:
        return self.matrix.rows

    def entry(self, s: FieldElement, r: FieldElement) -> CycNum:
        return self.matrix[self.S.index(s), self.R.index(r)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "chi": self.chi.to_dict(),
            "R": [r.to_list() for r in self.R],
            "S": [s.to_list() for s in self.S],
            "entries": [[e.to_dict() for e in row] for row in self.matrix.to_rows()],
        }


def cft_entry(chi: SubgroupChar, r: FieldElement, s: FieldElement) -> CycNum:
    """sum over h in H of chi(h) epsilon(h r s)"""
    spec = chi.field
    p = spec.p
    order = lcm(chi.order, p)
    chi_step, psi_step = order // chi.order, order // p
    rs = spec.mul_index(r.index, s.index)
    counts = [0] * order
    for h in chi.subgroup.elements():
        t = spec.trace_of(spec.mul_index(h.index, rs))
        counts[(chi.exponent(h) * chi_step + t * psi_step) % order] += 1
    return CycNum.from_root_counts(order, counts)


def cft_matrix(chi: SubgroupChar, R: Optional[Sequence[FieldElement]] = None,
               S: Optional[Sequence[FieldElement]] = None) -> CftMatrix:
    R = validate_representatives(chi, R if R is not None else orbit_representatives(chi))
    S = validate_representatives(chi, S if S is not None else orbit_representatives(chi))
    rows = [[cft_entry(chi, r, s) for r in R] for s in S]
    logger.debug(f"Built {len(S)}x{len(R)} CFT matrix for GF({chi.field.q}), "
                 f"index {chi.subgroup.index}, j={chi.j}")
    return CftMatrix(CycMatrix.from_rows(rows, S, R), chi, R, S)


def lemma_entry(chi: SubgroupChar, r: FieldElement, s: FieldElement,
                gauss: Optional[GaussSumSet] = None) -> CycNum:
    """|H| when rs = 0, else (1/m) sum_i conjugate(phi_i)(rs) G_i"""
    H = chi.subgroup
    rs = r * s
    if rs.is_zero():
        return CycNum.rational(H.order) if chi.is_trivial() else CycNum.zero()
    gauss = gauss or gauss_set(chi)
    total = CycNum.zero()
    for phi, g in zip(extensions(chi), gauss.sums):
        total = total + phi.conjugate()(rs) * g
    return total.scale(Fraction(1, H.index))


def cft_matrix_from_gauss_sums(chi: SubgroupChar, R: Optional[Sequence[FieldElement]] = None,
                               S: Optional[Sequence[FieldElement]] = None) -> CftMatrix:
    R = validate_representatives(chi, R if R is not None else orbit_representatives(chi))
    S = validate_representatives(chi, S if S is not None else orbit_representatives(chi))
    gauss = gauss_set(chi)
    rows = [[lemma_entry(chi, r, s, gauss) for r in R] for s in S]
    return CftMatrix(CycMatrix.from_rows(rows, S, R), chi, R, S)


def additive_characters(spec: FieldSpec) -> List[AddCharacter]:
    return [additive_character(spec, a) for a in spec.elements()]


def character_from_gauss_sums(chi: MultCharacter) -> GroupAlgebraElement:
    """Recover chi from its Gauss sums: chi(c) = (1/q) sum_psi G(chi, conjugate psi) psi(c)"""
    spec = chi.parent
    transform = GroupAlgebraElement(spec, [gauss_sum(chi, psi) for psi in additive_characters(spec)])
    return inverse_fourier(transform)
