"""
Sequences over a finite abelian group and exact zero-sum detection.

A sequence is a multiset: whether it has a zero-sum subsequence of length r
depends only on multiplicities. Detection is a layered reachability DP over
(number chosen, partial sum) states, one stage per distinct element in
canonical order, with backtracking to extract a witness.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple

import numpy as np

from algebra import GroupElement, GroupSpec, group_add, group_index, group_sum
from config import get_settings
from errors import CapExceededError, GroupSpecError, ParameterError

logger = logging.getLogger("zerosum-detector")
logger.setLevel(logging.INFO)


@dataclass(frozen=True)
class GSequence:
    """
    A sequence over a group, kept as (element, multiplicity) pairs in
    canonical element order.
    """

    spec: GroupSpec
    items: Tuple[Tuple[GroupElement, int], ...]

    def __post_init__(self) -> None:
        seen = set()
        for x, mult in self.items:
            if not self.spec.conforms(x):
                raise GroupSpecError(f"element {x.coords} does not conform to {self.spec}")
            if mult < 1:
                raise ParameterError(f"multiplicity of {x.coords} must be >= 1, got {mult}")
            if x in seen:
                raise ParameterError(f"element {x.coords} listed twice")
            seen.add(x)

    @classmethod
    def from_mults(cls, spec: GroupSpec, mults: Mapping[GroupElement, int]) -> "GSequence":
        items = sorted(
            ((x, int(m)) for x, m in mults.items() if m > 0), key=lambda item: spec.index(item[0])
        )
        return cls(spec, tuple(items))

    @classmethod
    def from_elements(cls, spec: GroupSpec, elements: Iterable[GroupElement]) -> "GSequence":
        return cls.from_mults(spec, Counter(elements))

    @property
    def mults(self) -> Dict[GroupElement, int]:
        return dict(self.items)

    @property
    def length(self) -> int:
        return sum(m for _, m in self.items)

    @property
    def support(self) -> Tuple[GroupElement, ...]:
        return tuple(x for x, _ in self.items)

    def elements(self) -> List[GroupElement]:
        """The sequence written out with repetitions, in canonical order"""
        return [x for x, m in self.items for _ in range(m)]

    def extend(self, other: Mapping[GroupElement, int]) -> "GSequence":
        merged = Counter(self.mults)
        merged.update(other)
        return GSequence.from_mults(self.spec, merged)


@dataclass(frozen=True)
class ZeroSumWitness:
    """How many copies of each element a zero-sum subsequence takes"""

    picks: Tuple[Tuple[GroupElement, int], ...]

    @property
    def size(self) -> int:
        return sum(c for _, c in self.picks)

    def elements(self) -> List[GroupElement]:
        return [x for x, c in self.picks for _ in range(c)]

    def validate(self, seq: GSequence, r: int) -> bool:
        """
        Re-check the witness against its sequence

        Args:
            seq: The sequence the witness was taken from
            r: Target length

        Returns:
            True if the picks fit the multiplicities, have size r and sum to zero
        """
        mults = seq.mults
        for x, c in self.picks:
            if c < 0 or c > mults.get(x, 0):
                return False
        if self.size != r:
            return False
        return group_sum(seq.spec, self.elements()) == seq.spec.identity


class ZeroFreeCheck(NamedTuple):
    """Outcome of a zero-free test; `violating` is an r-subset summing to zero"""

    is_zero_free: bool
    violating: Optional[Tuple[GroupElement, ...]]


def _check_dp_cells(stages: int, r: int, order: int) -> None:
    cells = (stages + 1) * (r + 1) * order
    limit = get_settings().dp_cell_cap
    if cells > limit:
        raise CapExceededError("zero-sum DP table", cells, limit)


def find_zero_sum_subsequence(seq: GSequence, r: int) -> Optional[ZeroSumWitness]:
    """
    Find a zero-sum subsequence of length r, if one exists

    Elements are scanned in canonical order; backtracking takes as few copies
    of later elements as possible, so the witness is deterministic.

    Args:
        seq: The sequence
        r: Target length, at least 1

    Returns:
        A witness, or None when no zero-sum subsequence of length r exists
    """
    if r < 1:
        raise ParameterError(f"target length must be >= 1, got {r}", {"r": r})
    spec = seq.spec
    if seq.length < r:
        return None
    index = group_index(spec)
    stages = [(spec.index(x), m) for x, m in seq.items]
    _check_dp_cells(len(stages), r, index.order)

    table = np.zeros((len(stages) + 1, r + 1, index.order), dtype=bool)
    table[0, 0, 0] = True
    for t, (x, mult) in enumerate(stages):
        prev = table[t]
        cur = prev.copy()
        for c in range(1, min(mult, r) + 1):
            # c copies of x: sum g is reachable at j if g - c*x was at j - c
            cur[c:] |= prev[: r + 1 - c][:, index.translate(x, -c)]
        table[t + 1] = cur

    if not table[len(stages), r, 0]:
        return None

    picks: List[Tuple[GroupElement, int]] = []
    j, g = r, 0
    for t in range(len(stages) - 1, -1, -1):
        x, mult = stages[t]
        for c in range(0, min(mult, j) + 1):
            prev_g = index.add(g, index.scale(x, -c))
            if table[t, j - c, prev_g]:
                if c:
                    picks.append((seq.items[t][0], c))
                j, g = j - c, prev_g
                break
    picks.reverse()
    witness = ZeroSumWitness(tuple(picks))
    logger.debug(f"zero-sum subsequence of length {r} found: {witness.picks}")
    return witness


def _distinct(spec: GroupSpec, elements: Iterable[GroupElement]) -> Tuple[GroupElement, ...]:
    result = tuple(elements)
    if len(set(result)) != len(result):
        raise ParameterError("set contains repeated elements")
    for x in result:
        if not spec.conforms(x):
            raise GroupSpecError(f"element {x.coords} does not conform to {spec}")
    return result


def is_zero_free_set(spec: GroupSpec, elements: Iterable[GroupElement], r: int) -> ZeroFreeCheck:
    """
    Decide whether no r distinct elements of a set sum to zero

    Args:
        spec: The group
        elements: Distinct elements of the set
        r: Rank, at least 1

    Returns:
        ZeroFreeCheck with a violating r-subset when the set is not zero-free
    """
    members = _distinct(spec, elements)
    witness = find_zero_sum_subsequence(GSequence.from_elements(spec, members), r)
    if witness is None:
        return ZeroFreeCheck(True, None)
    return ZeroFreeCheck(False, tuple(witness.elements()))


def find_sidon_violation(
    spec: GroupSpec, elements: Iterable[GroupElement]
) -> Optional[Tuple[Tuple[GroupElement, GroupElement], Tuple[GroupElement, GroupElement]]]:
    """Two different pairs of distinct elements with the same sum, if any"""
    members = _distinct(spec, elements)
    seen: Dict[GroupElement, Tuple[GroupElement, GroupElement]] = {}
    for a, b in combinations(members, 2):
        total = group_add(spec, a, b)
        if total in seen:
            return seen[total], (a, b)
        seen[total] = (a, b)
    return None


def is_sidon_set(spec: GroupSpec, elements: Iterable[GroupElement]) -> bool:
    """True iff all sums of unordered pairs of distinct elements are distinct"""
    return find_sidon_violation(spec, elements) is None


class ReachabilityLayers:
    """
    Incremental zero-sum state for exact search.

    `layers[j, g]` is True when some j-element sub-multiset of the current
    sequence sums to g, for j = 0..r-1. Adding a copy of x creates a zero-sum
    subsequence of length r exactly when layers[r-1, -x] is set.
    """

    __slots__ = ("index", "r", "layers")

    def __init__(self, spec: GroupSpec, r: int, layers: Optional[np.ndarray] = None):
        if r < 1:
            raise ParameterError(f"target length must be >= 1, got {r}", {"r": r})
        self.index = group_index(spec)
        self.r = r
        if layers is None:
            _check_dp_cells(0, r, self.index.order)
            layers = np.zeros((r, self.index.order), dtype=bool)
            layers[0, 0] = True
        self.layers = layers

    def can_add(self, x: int) -> bool:
        return not self.layers[self.r - 1, self.index.neg[x]]

    def add(self, x: int, copies: int = 1) -> "ReachabilityLayers":
        """Return the state after appending copies of element index x"""
        layers = self.layers
        for _ in range(copies):
            nxt = layers.copy()
            nxt[1:] |= layers[:-1][:, self.index.translate(x, -1)]
            layers = nxt
        return ReachabilityLayers(self.index.spec, self.r, layers)

    def capacities(self, max_copies: int, negatives: List[np.ndarray]) -> np.ndarray:
        """
        Upper bound on how many copies of each element can still be appended

        Args:
            max_copies: Cap per element (1 for sets, r-1 for sequences)
            negatives: negatives[i-1][x] is the index of -(i*x)

        Returns:
            Integer array; entry x is the largest c <= max_copies such that
            appending c copies of x alone creates no zero-sum of length r
        """
        blocked = np.stack(
            [self.layers[self.r - i, negatives[i - 1]] for i in range(1, max_copies + 1)]
        )
        first = blocked.argmax(axis=0)
        return np.where(blocked.any(axis=0), first, max_copies)
