"""
Explicit constructions and closed-form bound calculators.

Constructions return a ConstructionOutput whose claimed property is always
re-checked by the zero-sum detector before anyone relies on it. Calculators
work in exact integer arithmetic; real values are only for display.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Literal, Optional, Sequence, Tuple, Union

from algebra import (
    FieldContext,
    GroupElement,
    GroupSpec,
    field_pow,
)
from errors import ParameterError
from zerosum import GSequence, find_zero_sum_subsequence, is_sidon_set, is_zero_free_set

logger = logging.getLogger("zerosum-construct")
logger.setLevel(logging.INFO)

ConstructionKind = Literal[
    "sidon_basis", "sidon_d4", "moment_curve", "extremal_sequence", "s4_lower_sequence"
]
PropertyKind = Literal["sidon", "zero_free", "no_zero_sum"]


@dataclass(frozen=True)
class ClaimedProperty:
    """
    A machine-checkable predicate.

    "sidon" ignores ranks; "zero_free" must hold at every listed rank for a
    set; "no_zero_sum" means the sequence has no zero-sum subsequence of any
    listed length.
    """

    kind: PropertyKind
    ranks: Tuple[int, ...] = ()

    def describe(self) -> str:
        if self.kind == "sidon":
            return "Sidon set"
        ranks = ", ".join(str(r) for r in self.ranks)
        if self.kind == "zero_free":
            return f"zero-free set of rank {ranks}"
        return f"no zero-sum subsequence of length {ranks}"


@dataclass(frozen=True)
class ConstructionOutput:
    kind: ConstructionKind
    spec: GroupSpec
    payload: Union[Tuple[GroupElement, ...], GSequence]
    claimed_property: ClaimedProperty
    notes: Tuple[str, ...] = field(default=())

    @property
    def is_sequence(self) -> bool:
        return isinstance(self.payload, GSequence)

    @property
    def size(self) -> int:
        if isinstance(self.payload, GSequence):
            return self.payload.length
        return len(self.payload)

    def elements(self) -> List[GroupElement]:
        if isinstance(self.payload, GSequence):
            return self.payload.elements()
        return list(self.payload)

    def validate(self) -> bool:
        """
        Re-check the claimed property with the zero-sum detector

        Returns:
            True if the payload has the property it claims
        """
        prop = self.claimed_property
        if prop.kind == "sidon":
            ok = is_sidon_set(self.spec, self.elements())
        elif prop.kind == "zero_free":
            ok = all(is_zero_free_set(self.spec, self.elements(), r).is_zero_free for r in prop.ranks)
        else:
            seq = self.payload if isinstance(self.payload, GSequence) else GSequence.from_elements(
                self.spec, self.payload
            )
            ok = all(find_zero_sum_subsequence(seq, r) is None for r in prop.ranks)
        if not ok:
            logger.error(f"{self.kind} over {self.spec} fails its claim: {prop.describe()}")
        return ok


def _unit(spec: GroupSpec, i: int) -> GroupElement:
    coords = [0] * spec.rank
    coords[i] = 1
    return spec.element(coords)


def sidon_basis(d: int) -> ConstructionOutput:
    """The d+1 vectors of Hamming weight at most 1 in Z_2^d"""
    if d < 1:
        raise ParameterError(f"dimension must be >= 1, got {d}", {"d": d})
    spec = GroupSpec.elementary(2, d)
    elements = (spec.identity,) + tuple(sorted((_unit(spec, i) for i in range(d)), key=spec.index))
    return ConstructionOutput("sidon_basis", spec, elements, ClaimedProperty("sidon"))


def sidon_d4() -> ConstructionOutput:
    """The weight-at-most-1 vectors of Z_2^4 together with (1,1,1,1)"""
    basis = sidon_basis(4)
    spec = basis.spec
    elements = tuple(basis.payload) + (spec.element((1, 1, 1, 1)),)
    return ConstructionOutput("sidon_d4", spec, elements, ClaimedProperty("sidon"))


def moment_curve_point(ctx: FieldContext, m: int, value: int) -> Tuple[int, ...]:
    """
    Coordinates of (x, x^3, ..., x^(2m-1)) in Z_2^(mk)

    Block i holds x^(2i+1), least significant bit first, so coordinate
    i*k + b is bit b of that power.
    """
    x = ctx.element(value)
    coords: List[int] = []
    for i in range(m):
        power = field_pow(ctx, x, 2 * i + 1).value
        coords.extend((power >> b) & 1 for b in range(ctx.k))
    return tuple(coords)


def moment_curve(m: int, k: int, ctx: Optional[FieldContext] = None) -> ConstructionOutput:
    """
    The 2^k moment-curve vectors over GF(2^k), embedded in Z_2^(mk)

    Args:
        m: Number of odd powers; the set is zero-free at ranks 2, 4, ..., 2m
        k: Field degree
        ctx: Field to use; defaults to the least irreducible modulus

    Returns:
        ConstructionOutput claiming zero-freeness at every even rank <= 2m
    """
    if m < 1 or k < 1:
        raise ParameterError(f"moment curve needs m, k >= 1, got m={m}, k={k}", {"m": m, "k": k})
    ctx = ctx or FieldContext.default(k)
    if ctx.k != k:
        raise ParameterError(f"field has degree {ctx.k}, expected {k}")
    spec = GroupSpec.elementary(2, m * k)
    points = [spec.element(moment_curve_point(ctx, m, v)) for v in range(ctx.size)]
    elements = tuple(sorted(points, key=spec.index))
    return ConstructionOutput(
        "moment_curve",
        spec,
        elements,
        ClaimedProperty("zero_free", tuple(range(2, 2 * m + 1, 2))),
        notes=(f"GF(2^{k}) modulus {ctx.modulus:#x}",),
    )


def extremal_sequence_s2m(m: int, k: int, ctx: Optional[FieldContext] = None) -> ConstructionOutput:
    """
    Moment-curve set with one point repeated 2m-1 times

    The repeated point is the image of x = 0, the zero vector. The sequence
    has length 2^k + 2m - 2 and no zero-sum subsequence of length 2m, so
    s_2m(Z_2^(mk)) >= 2^k + 2m - 1.
    """
    curve = moment_curve(m, k, ctx)
    spec = curve.spec
    anchor = spec.identity
    mults = {x: 1 for x in curve.payload}
    mults[anchor] = 2 * m - 1
    seq = GSequence.from_mults(spec, mults)
    return ConstructionOutput(
        "extremal_sequence",
        spec,
        seq,
        ClaimedProperty("no_zero_sum", (2 * m,)),
        notes=curve.notes + (f"anchor {anchor} x {2 * m - 1}",),
    )


def exact_sidon_set(d: int) -> Tuple[GroupElement, ...]:
    """A largest Sidon set of Z_2^d for d <= 4"""
    if d == 4:
        return tuple(sidon_d4().payload)
    if d == 2:
        spec = GroupSpec.elementary(2, 2)
        return (spec.identity, _unit(spec, 1), _unit(spec, 0))
    if d in (1, 3):
        return tuple(sidon_basis(d).payload)
    raise ParameterError(f"no stored largest Sidon set for d={d}; pass one explicitly", {"d": d})


def s4_lower_sequence(
    d: int, sidon_set: Optional[Sequence[GroupElement]] = None
) -> ConstructionOutput:
    """
    A Sidon set with its last element taken three times

    Args:
        d: Dimension of Z_2^d
        sidon_set: Sidon set to extend; required for d > 4

    Returns:
        ConstructionOutput of length |A| + 2 with no zero-sum subsequence of
        length 4, certifying s_4(Z_2^d) >= |A| + 3
    """
    spec = GroupSpec.elementary(2, d)
    members = tuple(sidon_set) if sidon_set is not None else exact_sidon_set(d)
    if not members:
        raise ParameterError("the Sidon set must not be empty")
    if not is_sidon_set(spec, members):
        raise ParameterError(f"the supplied set is not a Sidon set of {spec}")
    mults = {x: 1 for x in members}
    mults[members[-1]] = 3
    seq = GSequence.from_mults(spec, mults)
    return ConstructionOutput("s4_lower_sequence", spec, seq, ClaimedProperty("no_zero_sum", (4,)))


# Closed-form bounds


@dataclass(frozen=True)
class SidonUpperBound:
    """sqrt(2^(d+1) - 7/4) + 1/2 and its floor"""

    d: int
    value: float
    floor: int


def _sidon_radicand(d: int) -> int:
    # 4 * (2^(d+1) - 7/4)
    if d < 1:
        raise ParameterError(f"dimension must be >= 1, got {d}", {"d": d})
    return (1 << (d + 3)) - 7


def sidon_upper_bound(d: int) -> SidonUpperBound:
    """
    Upper bound on the size of a Sidon set in Z_2^d

    Args:
        d: Dimension, at least 1

    Returns:
        The real bound and its floor; the floor comes from math.isqrt
    """
    radicand = _sidon_radicand(d)
    value = math.sqrt(radicand) / 2 + 0.5
    return SidonUpperBound(d, value, (math.isqrt(radicand) + 1) // 2)


def b_d(d: int) -> int:
    """floor(sqrt(2^(d+1) - 7/4) - 1/2), exactly"""
    return (math.isqrt(_sidon_radicand(d)) - 1) // 2


def s4_upper(d: int) -> int:
    """floor(sqrt(2^(d+1) - 7/4) + 7/2), the upper value of s_4(Z_2^d)"""
    return sidon_upper_bound(d).floor + 3


def sidon_trivial_bound(d: int) -> int:
    """Largest b with C(b, 2) <= 2^d"""
    if d < 1:
        raise ParameterError(f"dimension must be >= 1, got {d}", {"d": d})
    b = 1
    while math.comb(b + 1, 2) <= 1 << d:
        b += 1
    return b


def moment_curve_bounds(m: int, k: int) -> Tuple[int, int]:
    """Lower bounds (beta_2m, s_2m) on Z_2^(mk) certified by the moment curve"""
    if m < 1 or k < 1:
        raise ParameterError(f"moment curve needs m, k >= 1, got m={m}, k={k}")
    return 1 << k, (1 << k) + 2 * m - 1


@dataclass(frozen=True)
class GaoValue:
    k: int
    m: int
    d: int
    value: int
    proved: bool
    conjectured: bool


def _is_prime_power(k: int) -> bool:
    if k < 2:
        return False
    p = next(q for q in range(2, k + 1) if k % q == 0)
    while k % p == 0:
        k //= p
    return k == 1


def gao_formula(k: int, m: int, d: int) -> GaoValue:
    """
    km + (k-1)d, the conjectured s_km(Z_k^d)

    `proved` is set for prime powers k with m >= k^(d-1); `conjectured`
    whenever km > (k-1)d.
    """
    if k < 2 or m < 1 or d < 1:
        raise ParameterError(f"invalid Gao parameters k={k}, m={m}, d={d}")
    value = k * m + (k - 1) * d
    proved = _is_prime_power(k) and m >= k ** (d - 1)
    return GaoValue(k, m, d, value, proved, k * m > (k - 1) * d)


def egz_cyclic(k: int) -> int:
    """s(Z_k) = 2k - 1"""
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    return 2 * k - 1


def kemnitz(k: int) -> int:
    """s(Z_k^2) = 4k - 3"""
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    return 4 * k - 3


@dataclass(frozen=True)
class CmTable:
    """
    The lambda_r / N_r recurrence behind the constant C_m.

    q[r], lam[r] are indexed by r = 2..m (entries 0 and 1 unused); N[r] by
    r = 1..m. `product` is m! * N_m = C_m^m, kept as an exact integer.
    """

    m: int
    q: Tuple[int, ...]
    lam: Tuple[int, ...]
    N: Tuple[int, ...]

    @property
    def product(self) -> int:
        return math.factorial(self.m) * self.N[self.m]

    @property
    def value(self) -> float:
        """C_m = (m! N_m)^(1/m), for display"""
        return math.exp(math.log(self.product) / self.m)

    def below(self, decimal: Union[str, Fraction]) -> bool:
        """True iff C_m < decimal, decided by comparing m! N_m with decimal^m exactly"""
        return Fraction(self.product) < Fraction(decimal) ** self.m

    @property
    def lambda_product_bound(self) -> int:
        """m! * prod r * lambda_r"""
        return math.factorial(self.m) * math.prod(r * self.lam[r] for r in range(2, self.m + 1))

    @property
    def coarse_bound(self) -> int:
        """m! * prod 2(m + r^2)"""
        return math.factorial(self.m) * math.prod(2 * (self.m + r * r) for r in range(2, self.m + 1))

    def coarse_check(self) -> bool:
        return self.product < self.lambda_product_bound < self.coarse_bound

    def lambda_check(self) -> bool:
        """lambda_r < 2(m/r + r) for every r"""
        return all(
            Fraction(self.lam[r]) < 2 * (Fraction(self.m, r) + r) for r in range(2, self.m + 1)
        )

    def rows(self) -> List[Tuple[int, int, int, int]]:
        """(r, q(r), lambda_r, N_r) for r = 2..m"""
        return [(r, self.q[r], self.lam[r], self.N[r]) for r in range(2, self.m + 1)]


def cm_constant(m: int) -> CmTable:
    """
    Fill the recurrence for C_m

    q(r) in 0..r-1 with m + q(r) = 0 mod r;
    lambda_r = 2(m+q)/r + 2r - q - 3 when q > 0, else 2m/r - 1;
    N_1 = 1, N_r = lambda_r * (1 + r(N_(r-1) - 1)).

    Args:
        m: At least 2

    Returns:
        The filled CmTable
    """
    if m < 2:
        raise ParameterError(f"m must be >= 2, got {m}", {"m": m})
    q = [0, 0]
    lam = [0, 0]
    N = [0, 1]
    for r in range(2, m + 1):
        qr = (-m) % r
        if qr > 0:
            lr = 2 * (m + qr) // r + 2 * r - qr - 3
        else:
            lr = 2 * m // r - 1
        q.append(qr)
        lam.append(lr)
        N.append(lr * (1 + r * (N[r - 1] - 1)))
    table = CmTable(m, tuple(q), tuple(lam), tuple(N))
    logger.debug(f"C_{m}^{m} = {table.product}")
    return table


# (3/8) * cbrt(207 + 33 sqrt(33)); g(Z_3^d) - 1 <= eta^d
ETA = 0.375 * (207 + 33 * math.sqrt(33)) ** (1 / 3)


def eta() -> float:
    return ETA


def z3_egz_upper(d: int) -> float:
    """2 eta^d + 1, an upper bound on s(Z_3^d)"""
    if d < 1:
        raise ParameterError(f"dimension must be >= 1, got {d}", {"d": d})
    return 2 * ETA**d + 1


def eta_exponent() -> float:
    """ln 3 / ln eta, the exponent in tau(k, 3) = o(k^-1.084)"""
    return math.log(3) / math.log(ETA)

