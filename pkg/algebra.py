"""
Finite-field GF(2^k) and finite-abelian-group arithmetic.

Groups are direct products of cyclic groups Z_m1 x ... x Z_mt. Elements are
immutable coordinate tuples; elements of Z_2^d additionally carry a packed
integer encoding whose XOR is the group addition. Every element has an index
in mixed-radix lexicographic order (last coordinate fastest), which is the
canonical order used by the DP tables and the exact searches.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from config import get_settings
from errors import CapExceededError, FieldError, GroupSpecError

logger = logging.getLogger("zerosum-algebra")
logger.setLevel(logging.INFO)

# GF(2) polynomials are Python ints: bit i is the coefficient of x^i.


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials"""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_mod(a: int, modulus: int) -> int:
    """Remainder of a GF(2) polynomial division"""
    degree = modulus.bit_length() - 1
    while a.bit_length() - 1 >= degree:
        a ^= modulus << (a.bit_length() - 1 - degree)
    return a


def is_irreducible(poly: int) -> bool:
    """
    Test irreducibility over GF(2) by trial division

    Args:
        poly: Polynomial of degree >= 1

    Returns:
        True if no polynomial of degree 1..deg/2 divides it
    """
    degree = poly.bit_length() - 1
    if degree < 1:
        return False
    for divisor in range(2, 1 << (degree // 2 + 1)):
        if poly_mod(poly, divisor) == 0:
            return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(k: int) -> int:
    """
    Lexicographically least irreducible polynomial of degree k

    The table starts x, x^2+x+1, x^3+x+1, x^4+x+1, x^5+x^2+1, x^6+x+1, ...
    and is computed on demand rather than hard-coded.
    """
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}", {"k": k})
    for candidate in range(1 << k, 1 << (k + 1)):
        if is_irreducible(candidate):
            return candidate
    raise FieldError(f"no irreducible polynomial of degree {k}")  # unreachable


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(2^k) as a little-endian coefficient bitvector"""

    value: int


@dataclass(frozen=True)
class FieldContext:
    """GF(2^k) defined by an irreducible modulus of degree k"""

    k: int
    modulus: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise FieldError(f"extension degree must be >= 1, got {self.k}", {"k": self.k})
        if self.modulus.bit_length() - 1 != self.k:
            raise FieldError(
                f"modulus {self.modulus:#x} does not have degree {self.k}",
                {"k": self.k, "modulus": hex(self.modulus)},
            )
        if not is_irreducible(self.modulus):
            raise FieldError(
                f"modulus {self.modulus:#x} is reducible over GF(2)",
                {"modulus": hex(self.modulus)},
            )

    @classmethod
    def default(cls, k: int) -> "FieldContext":
        """Field of degree k over the least irreducible modulus"""
        return cls(k, least_irreducible(k))

    @classmethod
    def from_hex(cls, k: int, modulus_hex: str) -> "FieldContext":
        try:
            modulus = int(modulus_hex, 16)
        except ValueError as e:
            raise FieldError(f"modulus {modulus_hex!r} is not hexadecimal") from e
        return cls(k, modulus)

    @property
    def size(self) -> int:
        return 1 << self.k

    def element(self, value: int) -> FieldElement:
        if not 0 <= value < self.size:
            raise FieldError(
                f"{value} is not an element of GF(2^{self.k})", {"value": value, "k": self.k}
            )
        return FieldElement(value)

    def elements(self) -> Iterator[FieldElement]:
        for value in range(self.size):
            yield FieldElement(value)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1)


def field_add(ctx: FieldContext, a: FieldElement, b: FieldElement) -> FieldElement:
    return FieldElement(a.value ^ b.value)


def field_mul(ctx: FieldContext, a: FieldElement, b: FieldElement) -> FieldElement:
    """
    Multiply in GF(2^k)

    Args:
        ctx: Field context
        a: Left factor
        b: Right factor

    Returns:
        Carry-less product reduced by the context modulus
    """
    return FieldElement(poly_mod(clmul(a.value, b.value), ctx.modulus))


def field_pow(ctx: FieldContext, a: FieldElement, e: int) -> FieldElement:
    """
    Raise to a non-negative power by square-and-multiply

    a^0 is 1 for every a, including 0^0, so the moment-curve vector of 0 is
    the zero vector.
    """
    if e < 0:
        raise FieldError(f"exponent must be non-negative, got {e}", {"e": e})
    result = ctx.one
    base = a
    while e:
        if e & 1:
            result = field_mul(ctx, result, base)
        base = field_mul(ctx, base, base)
        e >>= 1
    return result


def field_inv(ctx: FieldContext, a: FieldElement) -> FieldElement:
    """Multiplicative inverse of a non-zero element (a^(2^k - 2))"""
    if a.value == 0:
        raise FieldError("zero has no multiplicative inverse")
    return field_pow(ctx, a, ctx.size - 2)


# Groups

_FACTOR_RE = re.compile(r"^Z(\d+)(?:\^(\d+))?$", re.IGNORECASE)


@dataclass(frozen=True)
class GroupElement:
    """
    An element of a finite abelian group as a coordinate tuple.

    Equality and hashing use the coordinates only; `packed` is the Z_2^d bit
    encoding (coordinate 0 is the most significant bit) and is None for other
    groups.
    """

    coords: Tuple[int, ...]
    packed: Optional[int] = field(default=None, compare=False, hash=False)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coords)


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group Z_m1 x ... x Z_mt"""

    moduli: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.moduli:
            raise GroupSpecError("a group needs at least one cyclic factor")
        for m in self.moduli:
            if not isinstance(m, int) or m < 2:
                raise GroupSpecError(
                    f"cyclic factor orders must be integers >= 2, got {m!r}",
                    {"moduli": list(self.moduli)},
                )

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """
        Parse group text such as "Z2^5", "Z3^2" or "Z2xZ4"

        Args:
            text: Product of cyclic factors joined by 'x' or '×'

        Returns:
            The parsed GroupSpec
        """
        cleaned = text.strip().replace("×", "x").replace(" ", "")
        if not cleaned:
            raise GroupSpecError("empty group text")
        moduli: list[int] = []
        for part in re.split(r"x(?=Z)", cleaned, flags=re.IGNORECASE):
            match = _FACTOR_RE.match(part)
            if not match:
                raise GroupSpecError(f"cannot parse group factor {part!r} in {text!r}")
            modulus = int(match.group(1))
            power = int(match.group(2)) if match.group(2) else 1
            if power < 1:
                raise GroupSpecError(f"factor power must be >= 1 in {text!r}")
            moduli.extend([modulus] * power)
        return cls(tuple(moduli))

    @classmethod
    def elementary(cls, p: int, d: int) -> "GroupSpec":
        return cls((p,) * d)

    def __str__(self) -> str:
        parts = []
        i = 0
        while i < len(self.moduli):
            j = i
            while j < len(self.moduli) and self.moduli[j] == self.moduli[i]:
                j += 1
            count = j - i
            parts.append(f"Z{self.moduli[i]}" + (f"^{count}" if count > 1 else ""))
            i = j
        return "x".join(parts)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, self.moduli, 1)

    @property
    def is_binary(self) -> bool:
        return all(m == 2 for m in self.moduli)

    @property
    def is_elementary(self) -> bool:
        """True for Z_p^d with p prime"""
        p = self.moduli[0]
        return all(m == p for m in self.moduli) and all(p % q for q in range(2, math.isqrt(p) + 1))

    @property
    def identity(self) -> GroupElement:
        return self.element((0,) * self.rank)

    def element(self, coords: Sequence[int]) -> GroupElement:
        """
        Build a conforming element

        Args:
            coords: Residues, one per cyclic factor

        Returns:
            The element, with its packed encoding for Z_2^d
        """
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise GroupSpecError(
                f"element {coords} has {len(coords)} coordinates, {self} needs {self.rank}"
            )
        for c, m in zip(coords, self.moduli):
            if not 0 <= c < m:
                raise GroupSpecError(f"coordinate {c} out of range for Z{m} in {coords}")
        return GroupElement(coords, self._pack(coords) if self.is_binary else None)

    def _pack(self, coords: Tuple[int, ...]) -> int:
        packed = 0
        for c in coords:
            packed = (packed << 1) | c
        return packed

    def from_packed(self, packed: int) -> GroupElement:
        if not self.is_binary:
            raise GroupSpecError(f"packed encoding only exists for Z2^d, not {self}")
        if not 0 <= packed < (1 << self.rank):
            raise GroupSpecError(f"packed value {packed} out of range for {self}")
        coords = tuple((packed >> (self.rank - 1 - i)) & 1 for i in range(self.rank))
        return GroupElement(coords, packed)

    def index(self, x: GroupElement) -> int:
        """Position of x in mixed-radix lexicographic order"""
        if x.packed is not None and self.is_binary:
            return x.packed
        idx = 0
        for c, m in zip(x.coords, self.moduli):
            idx = idx * m + c
        return idx

    def from_index(self, idx: int) -> GroupElement:
        if self.is_binary:
            return self.from_packed(idx)
        if not 0 <= idx < self.order:
            raise GroupSpecError(f"index {idx} out of range for {self}")
        coords = []
        for m in reversed(self.moduli):
            idx, c = divmod(idx, m)
            coords.append(c)
        return GroupElement(tuple(reversed(coords)))

    def conforms(self, x: GroupElement) -> bool:
        return len(x.coords) == self.rank and all(0 <= c < m for c, m in zip(x.coords, self.moduli))


def group_add(spec: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    """Component-wise addition; Z_2^d elements add by XOR of their packed words"""
    if spec.is_binary:
        if a.packed is not None and b.packed is not None:
            return spec.from_packed(a.packed ^ b.packed)
        return spec.element(tuple(x ^ y for x, y in zip(a.coords, b.coords)))
    return GroupElement(
        tuple((x + y) % m for x, y, m in zip(a.coords, b.coords, spec.moduli))
    )


def group_neg(spec: GroupSpec, a: GroupElement) -> GroupElement:
    """Component-wise negation; every element of Z_2^d is its own inverse"""
    if spec.is_binary:
        return a
    return GroupElement(tuple((-x) % m for x, m in zip(a.coords, spec.moduli)))


def group_scale(spec: GroupSpec, a: GroupElement, c: int) -> GroupElement:
    """The c-fold sum c*a (c may be negative)"""
    coords = tuple((x * c) % m for x, m in zip(a.coords, spec.moduli))
    return spec.element(coords)


def group_sum(spec: GroupSpec, elements: Sequence[GroupElement]) -> GroupElement:
    total = spec.identity
    for x in elements:
        total = group_add(spec, total, x)
    return total


def check_element_cap(spec: GroupSpec, cap: Optional[int] = None) -> None:
    limit = cap if cap is not None else get_settings().element_cap
    if spec.order > limit:
        raise CapExceededError(f"enumerating {spec}", spec.order, limit)


def enumerate_elements(spec: GroupSpec, cap: Optional[int] = None) -> Iterator[GroupElement]:
    """
    Yield every element once, in mixed-radix lexicographic order

    Args:
        spec: The group
        cap: Largest |G| allowed; defaults to the configured element cap

    Returns:
        Iterator over the elements, index 0 (the identity) first
    """
    check_element_cap(spec, cap)
    for idx in range(spec.order):
        yield spec.from_index(idx)


class GroupIndex:
    """
    Index-space view of a group for vectorised DP and search.

    Rows of `coords` are the elements in canonical order; `translate(x, c)`
    is the permutation g -> g + c*x on element indices.
    """

    def __init__(self, spec: GroupSpec):
        check_element_cap(spec)
        self.spec = spec
        self.order = spec.order
        self._moduli = np.array(spec.moduli, dtype=np.int64)
        self.coords = np.stack(
            np.unravel_index(np.arange(self.order, dtype=np.int64), spec.moduli), axis=1
        ).astype(np.int64)
        self.neg = self._ravel((-self.coords) % self._moduli)
        self._translations: Dict[Tuple[int, int], np.ndarray] = {}

    def _ravel(self, coords: np.ndarray) -> np.ndarray:
        return np.ravel_multi_index(tuple(coords.T), self.spec.moduli).astype(np.int64)

    def add(self, a: int, b: int) -> int:
        coords = (self.coords[a] + self.coords[b]) % self._moduli
        return int(np.ravel_multi_index(tuple(coords), self.spec.moduli))

    def scale(self, x: int, c: int) -> int:
        coords = (self.coords[x] * c) % self._moduli
        return int(np.ravel_multi_index(tuple(coords), self.spec.moduli))

    def translate(self, x: int, c: int = 1) -> np.ndarray:
        """Permutation array p with p[g] = g + c*x"""
        key = (x, c)
        perm = self._translations.get(key)
        if perm is None:
            shift = (self.coords[x] * c) % self._moduli
            perm = self._ravel((self.coords + shift) % self._moduli)
            self._translations[key] = perm
        return perm

    def scaled_negatives(self, c: int) -> np.ndarray:
        """Array q with q[x] = -(c*x)"""
        return self._ravel((-c * self.coords) % self._moduli)


@lru_cache(maxsize=32)
def group_index(spec: GroupSpec) -> GroupIndex:
    return GroupIndex(spec)
