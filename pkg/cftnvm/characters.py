"""
Additive and multiplicative characters of a finite field
Subgroups of the multiplicative group, characters on them, extensions and annihilators
"""

from dataclasses import dataclass
from math import gcd
from typing import Any, Dict, List, Tuple

from .cyclotomic import CycNum, root_of_unity
from .errors import CharacterError, FieldError, RepresentativeError
from .finite_field import FieldElement, FieldSpec


def _same_field(spec: FieldSpec, x: FieldElement) -> None:
    if x.parent.key != spec.key:
        raise FieldError(f"Element of GF({x.parent.q}) given to a character of GF({spec.q})")


@dataclass(frozen=True)
class AddCharacter:
    """The additive character x -> epsilon(a*x)"""
    a: FieldElement

    @property
    def field(self) -> FieldSpec:
        return self.a.parent

    def is_trivial(self) -> bool:
        return self.a.is_zero()

    def exponent(self, x: FieldElement) -> int:
        """e with epsilon_a(x) = zeta_p^e"""
        _same_field(self.field, x)
        return (self.a * x).trace()

    def __call__(self, x: FieldElement) -> CycNum:
        return eval_additive(self, x)

    def to_dict(self) -> Dict[str, Any]:
        return {"a": self.a.to_list()}


@dataclass(frozen=True)
class MultCharacter:
    """chi_k(generator^t) = zeta_{q-1}^(k*t), extended by chi(0) = 0"""
    parent: FieldSpec
    k: int

    def __post_init__(self):
        object.__setattr__(self, 'k', self.k % (self.parent.q - 1))

    @property
    def order(self) -> int:
        n = self.parent.q - 1
        return n // gcd(self.k, n)

    def is_trivial(self) -> bool:
        return self.k == 0

    def exponent(self, x: FieldElement) -> int:
        """e with chi(x) = zeta_order^e; x must be nonzero"""
        _same_field(self.parent, x)
        n = self.parent.q - 1
        return (self.k * x.discrete_log() % n) // (n // self.order)

    def __call__(self, x: FieldElement) -> CycNum:
        return eval_multiplicative(self, x)

    def __mul__(self, other: "MultCharacter") -> "MultCharacter":
        if other.parent.key != self.parent.key:
            raise CharacterError("Product of characters of different fields")
        return MultCharacter(self.parent, self.k + other.k)

    def conjugate(self) -> "MultCharacter":
        return MultCharacter(self.parent, -self.k)

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k}


@dataclass(frozen=True)
class Subgroup:
    """The unique subgroup of index s in the cyclic group F_q^x"""
    parent: FieldSpec
    index: int

    @property
    def order(self) -> int:
        return (self.parent.q - 1) // self.index

    @property
    def generator(self) -> FieldElement:
        """omega = generator^index"""
        return self.parent.power_of_generator(self.index)

    def elements(self) -> Tuple[FieldElement, ...]:
        return tuple(self.parent.power_of_generator(self.index * t) for t in range(self.order))

    def contains(self, x: FieldElement) -> bool:
        _same_field(self.parent, x)
        return not x.is_zero() and x.discrete_log() % self.index == 0

    def exponent_of(self, h: FieldElement) -> int:
        """t with h = omega^t"""
        if not self.contains(h):
            raise RepresentativeError(f"{h} is not in the subgroup of index {self.index}")
        return h.discrete_log() // self.index

    def is_full(self) -> bool:
        return self.index == 1

    def is_trivial(self) -> bool:
        return self.order == 1

    def characters(self) -> List["SubgroupChar"]:
        return [SubgroupChar(self, j) for j in range(self.order)]

    def to_dict(self) -> Dict[str, Any]:
        return {"q": self.parent.q, "index": self.index, "order": self.order}


@dataclass(frozen=True)
class SubgroupChar:
    """chi(omega^t) = zeta_d^(j*t) on H = <omega>"""
    subgroup: Subgroup
    j: int

    def __post_init__(self):
        object.__setattr__(self, 'j', self.j % self.subgroup.order)

    @property
    def field(self) -> FieldSpec:
        return self.subgroup.parent

    @property
    def order(self) -> int:
        d = self.subgroup.order
        return d // gcd(self.j, d)

    def is_trivial(self) -> bool:
        return self.j == 0

    def exponent(self, h: FieldElement) -> int:
        """e with chi(h) = zeta_order^e"""
        d = self.subgroup.order
        return (self.j * self.subgroup.exponent_of(h) % d) // (d // self.order)

    def __call__(self, h: FieldElement) -> CycNum:
        return root_of_unity(self.order, self.exponent(h))

    def to_dict(self) -> Dict[str, Any]:
        return {"index": self.subgroup.index, "j": self.j}


def additive_character(spec: FieldSpec, a: Any = 1) -> AddCharacter:
    if not isinstance(a, FieldElement):
        a = spec.prime(a)
    _same_field(spec, a)
    return AddCharacter(a)


def canonical_additive(spec: FieldSpec) -> AddCharacter:
    """epsilon(x) = zeta_p^Tr(x)"""
    return AddCharacter(spec.one)


def eval_additive(psi: AddCharacter, x: FieldElement) -> CycNum:
    return root_of_unity(psi.field.p, psi.exponent(x))


def eval_multiplicative(chi: MultCharacter, x: FieldElement) -> CycNum:
    _same_field(chi.parent, x)
    if x.is_zero():
        return CycNum.zero(chi.order)
    return root_of_unity(chi.order, chi.exponent(x))


def subgroup_of_index(spec: FieldSpec, s: int) -> Subgroup:
    if s < 1 or (spec.q - 1) % s:
        raise CharacterError(f"Index {s} does not divide q - 1 = {spec.q - 1}")
    return Subgroup(spec, s)


def subgroup_character(H: Subgroup, j: int) -> SubgroupChar:
    """Character of exponent j on H; j must lie in [0, |H|)"""
    if not 0 <= j < H.order:
        raise CharacterError(f"Character exponent {j} outside [0, {H.order})")
    return SubgroupChar(H, j)


def annihilator(H: Subgroup) -> List[MultCharacter]:
    """Characters of F_q^x trivial on H, sorted by exponent"""
    return [MultCharacter(H.parent, k) for k in range(0, H.parent.q - 1, H.order)]


def restrict(phi: MultCharacter, H: Subgroup) -> SubgroupChar:
    if phi.parent.key != H.parent.key:
        raise CharacterError("Character and subgroup belong to different fields")
    return SubgroupChar(H, phi.k % H.order)


def extensions(chi: SubgroupChar) -> List[MultCharacter]:
    """All extensions of chi to F_q^x, sorted by exponent

    The first is phi_0 and phi_i = phi_0 * kappa^i where kappa(generator) is a
    primitive root of unity of order [F_q^x : H].
    """
    H = chi.subgroup
    result = [MultCharacter(H.parent, chi.j + H.order * i) for i in range(H.index)]
    omega = H.generator
    for phi in result:
        if phi(omega) != chi(omega):
            raise CharacterError(f"chi_{phi.k} does not restrict to the character j={chi.j}")
    return result


def cubic_character(spec: FieldSpec) -> MultCharacter:
    """kappa with kappa(generator) = zeta_3"""
    if (spec.q - 1) % 3:
        raise CharacterError(f"GF({spec.q}) has no cubic character")
    return MultCharacter(spec, (spec.q - 1) // 3)


def proof_alpha(spec: FieldSpec) -> FieldElement:
    """alpha with conjugate(kappa)(alpha) = zeta_3, namely generator^2"""
    kappa_bar = cubic_character(spec).conjugate()
    alpha = spec.power_of_generator(2)
    if kappa_bar(alpha) != root_of_unity(3, 1):
        raise CharacterError(f"generator^2 does not realise zeta_3 under the cubic character of GF({spec.q})")
    return alpha


def proof_representatives(H: Subgroup) -> Tuple[FieldElement, ...]:
    """(1, alpha, alpha^2), one element per coset of the index-3 subgroup"""
    if H.index != 3:
        raise CharacterError(f"Proof representatives need index 3, got {H.index}")
    alpha = proof_alpha(H.parent)
    return (H.parent.one, alpha, alpha * alpha)
