"""
Codegree Turán bounds from zero-sum constants.

A basket witness spreads n vertices over |G| baskets, labels each basket by
a group element and makes r vertices an edge when their labels sum to zero.
Every (r-1)-subset then has codegree about n/|G|, and a set of s_r(G)
vertices always contains an edge, so tau(s_r(G), r) <= 1/|G|.

The bound ledger turns such base facts into tau(k, r) facts, shifts them
along tau(k, r) <= tau(k-1, r-1) and keeps exact provenance for each.
"""

import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, model_validator

from algebra import GroupElement, GroupSpec, group_index
from construct import s4_upper
from errors import CapExceededError, CertificateError, GroupSpecError, LedgerError, ParameterError
from hypergraph import RGraph, check_subset_cap, independence_number
from solver import SearchBudget, SearchResult, solve_beta_r, solve_cap, solve_s_r

logger = logging.getLogger("zerosum-turan")
logger.setLevel(logging.INFO)

EXHAUSTIVE_CODEGREE_LIMIT = 16
# s_4(Z_2^d) is searched directly up to this d; above it beta_4 + 3 stands in
DIRECT_S4_MAX_D = 3


@dataclass(frozen=True)
class BasketWitness:
    """
    n vertices in |G| baskets; vertex i carries element index i mod |G|.

    Round-robin keeps every prefix of the vertex range balanced, so basket
    sizes are n // |G| or n // |G| + 1.
    """

    spec: GroupSpec
    r: int
    n: int

    @property
    def baskets(self) -> int:
        return self.spec.order

    def label_index(self, v: int) -> int:
        return v % self.baskets

    def label(self, v: int) -> GroupElement:
        return self.spec.from_index(self.label_index(v))

    @property
    def labels(self) -> Tuple[int, ...]:
        return tuple(self.label_index(v) for v in range(self.n))

    def basket_size(self, t: int) -> int:
        q, extra = divmod(self.n, self.baskets)
        return q + (1 if t < extra else 0)

    @property
    def basket_sizes(self) -> Tuple[int, ...]:
        return tuple(self.basket_size(t) for t in range(self.baskets))

    def label_sum(self, vertices: Sequence[int]) -> int:
        """Element index of the sum of the labels"""
        index = group_index(self.spec)
        moduli = np.array(self.spec.moduli, dtype=np.int64)
        rows = index.coords[[self.label_index(v) for v in vertices]]
        total = rows.sum(axis=0) % moduli if len(vertices) else np.zeros_like(moduli)
        return int(np.ravel_multi_index(tuple(total), self.spec.moduli))

    def is_edge(self, vertices: Sequence[int]) -> bool:
        return len(vertices) == self.r and self.label_sum(vertices) == 0

    def graph(self) -> RGraph:
        return RGraph.implicit(
            self.n, self.r, self.is_edge, codegree=lambda s: witness_codegree(self, s)
        )


def build_witness(spec: GroupSpec, r: int, n: int) -> BasketWitness:
    """
    Basket witness for tau(s_r(G), r) <= 1/|G|

    Args:
        spec: The group
        r: Edge size, a multiple of exp(G)
        n: Number of vertices, at least r

    Returns:
        The witness with round-robin labels
    """
    if r < 1 or r % spec.exponent:
        raise ParameterError(
            f"r={r} is not a positive multiple of exp({spec})={spec.exponent}",
            {"r": r, "exponent": spec.exponent},
        )
    if n < r:
        raise ParameterError(f"need n >= r, got n={n}, r={r}", {"n": n, "r": r})
    return BasketWitness(spec, r, n)


def witness_codegree(w: BasketWitness, subset: Sequence[int]) -> int:
    """
    Degree of an (r-1)-subset in closed form

    The completing vertex must come from basket t = -(sum of labels of S)
    and must not already be in S.
    """
    members = tuple(subset)
    if len(members) != w.r - 1 or len(set(members)) != len(members):
        raise ParameterError(f"need {w.r - 1} distinct vertices, got {members}")
    if any(not 0 <= v < w.n for v in members):
        raise ParameterError(f"vertices {members} leave the range [0, {w.n})")
    index = group_index(w.spec)
    target = int(index.neg[w.label_sum(members)])
    inside = sum(1 for v in members if w.label_index(v) == target)
    return w.basket_size(target) - inside


def _enumerated_codegree(w: BasketWitness, subset: Tuple[int, ...]) -> int:
    taken = set(subset)
    return sum(
        1 for v in range(w.n) if v not in taken and w.is_edge(tuple(sorted(subset + (v,))))
    )


class WitnessCertificate(BaseModel):
    """Codegree and independence facts about one basket witness"""

    group: str
    r: int
    n: int
    s: int
    basket_sizes: List[int]
    min_codegree: int
    max_codegree: int
    codegree_enumerated: bool = False
    alpha: Optional[int] = None
    independent_set: Optional[List[int]] = None
    alpha_omitted: bool = False
    verdict: Optional[bool] = None

    @property
    def partial(self) -> bool:
        return self.alpha_omitted


def certify_witness(w: BasketWitness, s: int) -> WitnessCertificate:
    """
    Certify codegrees and independence number of a basket witness

    Codegrees come from the closed form over every (r-1)-subset; for
    n <= 16 each one is also recounted by enumeration. The independence
    number is exact; past the hypergraph cap it is omitted and the
    certificate is partial.

    Args:
        w: The witness
        s: Claimed s_r(G); the verdict is alpha(w) < s

    Returns:
        WitnessCertificate
    """
    check_subset_cap(w.n, w.r - 1)
    enumerate_too = w.n <= EXHAUSTIVE_CODEGREE_LIMIT
    degrees = []
    for subset in combinations(range(w.n), w.r - 1):
        degree = witness_codegree(w, subset)
        if enumerate_too and degree != _enumerated_codegree(w, subset):
            raise CertificateError(f"closed-form codegree disagrees with enumeration at {subset}")
        degrees.append(degree)

    certificate = WitnessCertificate(
        group=str(w.spec),
        r=w.r,
        n=w.n,
        s=s,
        basket_sizes=list(w.basket_sizes),
        min_codegree=min(degrees, default=0),
        max_codegree=max(degrees, default=0),
        codegree_enumerated=enumerate_too,
    )
    try:
        independent = independence_number(w.graph())
    except CapExceededError as e:
        logger.warning(f"independence number omitted: {e.message}")
        return certificate.model_copy(update={"alpha_omitted": True})

    verdict = independent.size < s
    if not verdict:
        logger.error(f"alpha={independent.size} is not below s={s} for {w.spec}, r={w.r}, n={w.n}")
    return certificate.model_copy(
        update={
            "alpha": independent.size,
            "independent_set": list(independent.vertices),
            "verdict": verdict,
        }
    )


# Bound ledger

StepKind = Literal["base", "shift", "classical", "external", "monotone"]
SourceKind = Literal["solved", "published-table", "external"]


class ProvenanceStep(BaseModel):
    """One step of a derivation; the first step of a chain seeds (k, r, bound)"""

    kind: StepKind
    group: Optional[str] = None
    r: Optional[int] = None
    s: Optional[int] = None
    source: Optional[SourceKind] = None
    k: Optional[int] = None
    d: Optional[int] = None
    by: Optional[int] = None
    citation: Optional[str] = None

    def describe(self) -> str:
        if self.kind == "base":
            return f"base({self.group}, s_{self.r}={self.s}, {self.source})"
        if self.kind == "shift":
            return f"shift(+{self.by})"
        if self.kind == "classical":
            return f"classical(t({self.k},2)=1/{(self.k or 0) - 1})"
        if self.kind == "external":
            return f"external(tau(r+{self.d},r)<=2^-{self.d}, r={self.r})"
        return f"monotone(k={self.k})"


def replay_steps(steps: Sequence[ProvenanceStep]) -> Tuple[int, int, Fraction]:
    """
    Re-derive (k, r, bound) from a provenance chain

    Raises:
        LedgerError: if the chain is empty, malformed or breaks a precondition
    """
    if not steps:
        raise LedgerError("empty provenance chain")
    first = steps[0]
    if first.kind == "base":
        if first.group is None or first.r is None or first.s is None:
            raise LedgerError("base step needs group, r and s")
        try:
            spec = GroupSpec.parse(first.group)
        except GroupSpecError as e:
            raise LedgerError(f"base step group is malformed: {e.message}") from e
        if first.r < 2 or first.r % spec.exponent:
            raise LedgerError(f"base step r={first.r} is not a multiple of exp({spec})")
        k, r, bound = first.s, first.r, Fraction(1, spec.order)
    elif first.kind == "classical":
        if first.k is None or first.k < 3:
            raise LedgerError("classical step needs k >= 3")
        k, r, bound = first.k, 2, Fraction(1, first.k - 1)
    elif first.kind == "external":
        if first.d is None or first.r is None or first.d < 1:
            raise LedgerError("external step needs d >= 1 and r")
        if first.r < max(2, 2 * math.ceil(first.d / 2)):
            raise LedgerError(f"external fact needs r >= 2*ceil(d/2), got r={first.r}, d={first.d}")
        k, r, bound = first.r + first.d, first.r, Fraction(1, 1 << first.d)
    else:
        raise LedgerError(f"a chain cannot start with a {first.kind} step")

    for step in steps[1:]:
        if step.kind == "shift":
            if step.by is None or step.by < 0:
                raise LedgerError(f"shift must be non-negative, got {step.by}")
            k, r = k + step.by, r + step.by
        elif step.kind == "monotone":
            if step.k is None or step.k < k:
                raise LedgerError(f"monotone step cannot lower k from {k} to {step.k}")
            k = step.k
        else:
            raise LedgerError(f"{step.kind} step can only start a chain")
    if k <= r:
        raise LedgerError(f"derived fact has k={k} <= r={r}")
    return k, r, bound


class BoundFact(BaseModel):
    """tau(k, r) <= bound_num / bound_den, with how it was derived"""

    k: int
    r: int
    bound_num: int
    bound_den: int
    provenance: List[ProvenanceStep]
    alternatives: List[List[ProvenanceStep]] = []

    @model_validator(mode="after")
    def _check(self) -> "BoundFact":
        if not self.k > self.r >= 2:
            raise ValueError(f"need k > r >= 2, got k={self.k}, r={self.r}")
        if not 0 < self.bound <= 1:
            raise ValueError(f"bound {self.bound} is outside (0, 1]")
        return self

    @property
    def bound(self) -> Fraction:
        return Fraction(self.bound_num, self.bound_den)

    @property
    def provenance_class(self) -> str:
        first = self.provenance[0]
        if first.kind == "base":
            return first.source or "published-table"
        return "published-table" if first.kind == "classical" else "external"

    def describe_provenance(self) -> str:
        return " > ".join(step.describe() for step in self.provenance)

    @classmethod
    def from_steps(cls, steps: Sequence[ProvenanceStep]) -> "BoundFact":
        k, r, bound = replay_steps(steps)
        return cls(
            k=k,
            r=r,
            bound_num=bound.numerator,
            bound_den=bound.denominator,
            provenance=list(steps),
        )


def replay_fact(fact: BoundFact) -> BoundFact:
    """
    Rebuild a fact from its provenance and check it matches

    Raises:
        LedgerError: if the chain does not reproduce (k, r, bound)
    """
    replayed = BoundFact.from_steps(fact.provenance)
    if (replayed.k, replayed.r, replayed.bound) != (fact.k, fact.r, fact.bound):
        raise LedgerError(
            f"provenance replays to tau({replayed.k},{replayed.r}) <= {replayed.bound}, "
            f"not tau({fact.k},{fact.r}) <= {fact.bound}"
        )
    for chain in fact.alternatives:
        replay_steps(chain)
    return replayed.model_copy(update={"alternatives": fact.alternatives})


class BaseFact(BaseModel):
    """s_r(G) = s, giving tau(s, r) <= 1/|G|"""

    group: str
    r: int
    s: int
    source: SourceKind = "published-table"
    citation: Optional[str] = None

    def step(self) -> ProvenanceStep:
        return ProvenanceStep(
            kind="base", group=self.group, r=self.r, s=self.s, source=self.source,
            citation=self.citation,
        )


def base_fact_from_result(result: SearchResult) -> BaseFact:
    """
    Base fact from an exhaustive solver result

    s_r results give s directly; cap results give s_3(Z_3^d) = 2 a_d + 1;
    beta_4 results over Z_2^d give s_4(Z_2^d) = beta_4 + 3.
    """
    if not result.exhaustive:
        raise LedgerError(f"{result.constant_name}({result.group}) is only a lower bound")
    if result.constant_name == "s_r":
        return BaseFact(group=result.group, r=result.r, s=result.value, source="solved")
    if result.constant_name == "beta_r" and result.r == 4 and result.spec().is_binary:
        return BaseFact(
            group=result.group, r=4, s=result.value + 3, source="solved",
            citation="s_4(Z2^d) = beta_4(Z2^d) + 3",
        )
    if result.constant_name == "cap":
        return BaseFact(
            group=result.group, r=3, s=2 * result.value + 1, source="solved",
            citation="s(Z3^d) = 2 g(Z3^d) - 1",
        )
    raise LedgerError(f"no base fact follows from {result.constant_name}")


def solved_base_facts(
    max_d: int = 4, cap_d: int = 2, budget: Optional[SearchBudget] = None
) -> List[BaseFact]:
    """
    Base facts certified by running the solvers

    Args:
        max_d: s_4(Z_2^d) facts for d = 1..max_d
        cap_d: s_3(Z_3^d) facts from cap searches for d = 1..cap_d
        budget: Search limits for every run

    Returns:
        One solved BaseFact per exhaustive run; runs that hit the budget are skipped
    """
    if max_d < 0 or cap_d < 0:
        raise ParameterError(f"dimensions must be >= 0, got max_d={max_d}, cap_d={cap_d}")
    results: List[SearchResult] = []
    for d in range(1, max_d + 1):
        spec = GroupSpec.elementary(2, d)
        solve = solve_s_r if d <= DIRECT_S4_MAX_D else solve_beta_r
        results.append(solve(spec, 4, budget))
    results += [solve_cap(d, budget) for d in range(1, cap_d + 1)]

    facts = []
    for result in results:
        if not result.exhaustive:
            logger.warning(f"skipping {result.constant_name}({result.group}): budget exhausted")
            continue
        facts.append(base_fact_from_result(result))
    logger.info(f"certified {len(facts)} base facts from {len(results)} solver runs")
    return facts


class BoundLedger:
    """
    Strongest known tau(k, r) bound per (k, r).

    Equal bounds keep every provenance; a stronger bound keeps the weaker
    chain among its alternatives. `prune_monotone` drops facts implied by a
    fact with the same r, smaller k and no larger bound.
    """

    def __init__(self) -> None:
        self.facts: Dict[Tuple[int, int], BoundFact] = {}
        self.dominated: List[Tuple[BoundFact, Tuple[int, int]]] = []

    def add(self, fact: BoundFact) -> None:
        key = (fact.k, fact.r)
        current = self.facts.get(key)
        if current is None:
            self.facts[key] = fact
        elif fact.bound < current.bound:
            self.facts[key] = fact.model_copy(
                update={"alternatives": [current.provenance] + current.alternatives}
            )
        elif fact.provenance != current.provenance and fact.provenance not in current.alternatives:
            current.alternatives.append(fact.provenance)

    def prune_monotone(self) -> None:
        kept: Dict[Tuple[int, int], BoundFact] = {}
        best_by_r: Dict[int, Tuple[Fraction, int]] = {}
        for (k, r), fact in sorted(self.facts.items(), key=lambda item: (item[0][1], item[0][0])):
            best = best_by_r.get(r)
            if best is not None and best[0] <= fact.bound:
                self.dominated.append((fact, (best[1], r)))
                continue
            kept[(k, r)] = fact
            best_by_r[r] = (fact.bound, k)
        self.facts = kept

    def get(self, k: int, r: int) -> Optional[BoundFact]:
        return self.facts.get((k, r))

    def best_bound(self, k: int, r: int) -> Optional[BoundFact]:
        """
        Strongest bound for tau(k, r), using tau(k', r) <= tau(k, r) for k' >= k

        Returns:
            The fact, extended by a monotone step when it comes from a smaller k
        """
        candidates = [f for (fk, fr), f in self.facts.items() if fr == r and fk <= k]
        if not candidates:
            return None
        best = min(candidates, key=lambda f: (f.bound, -f.k))
        if best.k == k:
            return best
        return BoundFact.from_steps(best.provenance + [ProvenanceStep(kind="monotone", k=k)])

    def sorted_facts(self) -> List[BoundFact]:
        return [self.facts[key] for key in sorted(self.facts, key=lambda kr: (kr[1], kr[0]))]

    def __len__(self) -> int:
        return len(self.facts)

    def to_csv(self) -> str:
        lines = ["k,r,bound_num,bound_den,provenance"]
        for fact in self.sorted_facts():
            lines.append(
                f"{fact.k},{fact.r},{fact.bound_num},{fact.bound_den},"
                f"\"{fact.provenance_class}: {fact.describe_provenance()}\""
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "schema": 1,
            "facts": [fact.model_dump(exclude_none=True) for fact in self.sorted_facts()],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "BoundLedger":
        try:
            payload = json.loads(text)
            facts = [BoundFact(**item) for item in payload["facts"]]
        except (ValueError, KeyError, TypeError) as e:
            raise LedgerError(f"cannot read ledger: {str(e)}") from e
        ledger = cls()
        for fact in facts:
            ledger.add(replay_fact(fact))
        return ledger


def classical_facts(max_k: int = 12) -> List[BoundFact]:
    """t(k, 2) = 1/(k-1) for k = 3..max_k"""
    return [
        BoundFact.from_steps(
            [ProvenanceStep(kind="classical", k=k, citation="Turán: t(k,2) = 1/(k-1)")]
        )
        for k in range(3, max_k + 1)
    ]


def external_facts(max_d: int = 6, max_r: int = 12) -> List[BoundFact]:
    """tau(r+d, r) <= 2^-d for r >= 2*ceil(d/2), from s_2m(Z_2^d) = 2m + d"""
    facts = []
    for d in range(1, max_d + 1):
        for r in range(max(2, 2 * math.ceil(d / 2)), max_r + 1):
            facts.append(
                BoundFact.from_steps(
                    [
                        ProvenanceStep(
                            kind="external",
                            d=d,
                            r=r,
                            citation="Gao's formula for k = 2 with the basket witness",
                        )
                    ]
                )
            )
    return facts


def s4_upper_facts(max_d: int = 8) -> List[BaseFact]:
    """s_4(Z_2^d) <= floor(sqrt(2^(d+1) - 7/4) + 7/2), as base facts"""
    return [
        BaseFact(
            group=str(GroupSpec.elementary(2, d)),
            r=4,
            s=s4_upper(d),
            source="published-table",
            citation="s_4 = beta + 3 with the Sidon upper bound",
        )
        for d in range(1, max_d + 1)
    ]


def default_base_facts() -> List[BaseFact]:
    """Bundled s_r values: s_4(Z_2^d) for d <= 4, s_3(Z_3^d) = 2 a_d + 1, s_4 upper values"""
    cap_sizes = {1: 2, 2: 4, 3: 9, 4: 20, 5: 45, 6: 112}
    facts = [
        BaseFact(group=str(GroupSpec.elementary(2, d)), r=4, s=s, citation="s_4 = beta + 3")
        for d, s in {1: 5, 2: 6, 3: 7, 4: 9}.items()
    ]
    facts += [
        BaseFact(
            group=str(GroupSpec.elementary(3, d)),
            r=3,
            s=2 * a + 1,
            citation=f"a_{d} = {a}",
        )
        for d, a in cap_sizes.items()
    ]
    return facts + s4_upper_facts()


def derive_bounds(
    base_facts: Iterable[BaseFact],
    shifts: Iterable[int] = range(0, 9),
    extra_facts: Iterable[BoundFact] = (),
    monotone: bool = True,
) -> BoundLedger:
    """
    Shift base facts along tau(k, r) <= tau(k-1, r-1)

    Args:
        base_facts: s_r(G) values, each giving tau(s, r) <= 1/|G|
        shifts: Shift amounts j >= 0; tau(s+j, r+j) <= 1/|G| is emitted for each
        extra_facts: Seed facts shifted the same way (classical, external)
        monotone: Drop facts implied by a smaller k at the same r

    Returns:
        The ledger, one strongest fact per (k, r)
    """
    shifts = sorted(set(shifts))
    if any(j < 0 for j in shifts):
        raise LedgerError(f"shifts must be non-negative, got {shifts}")
    ledger = BoundLedger()
    seeds = [BoundFact.from_steps([base.step()]) for base in base_facts]
    seeds += list(extra_facts)
    for seed in seeds:
        for j in shifts:
            steps = seed.provenance + ([ProvenanceStep(kind="shift", by=j)] if j else [])
            ledger.add(BoundFact.from_steps(steps))
    if monotone:
        ledger.prune_monotone()
    logger.info(f"derived {len(ledger)} bound facts from {len(seeds)} seeds")
    return ledger


def reference_facts() -> List[BoundFact]:
    """Seed facts taken from the literature: classical t(k,2) and the external 2^-d family"""
    return classical_facts() + external_facts()


@dataclass(frozen=True)
class Annotation:
    name: str
    statement: str


def annotations() -> List[Annotation]:
    """Statements recorded as prose only"""
    return [
        Annotation(
            "log-k",
            "c1 ln k / k^(r-1) <= tau(k, r) <= c2 ln k / k^(r-1) as k -> infinity, for r >= 3",
        ),
        Annotation("tau-k-4", "tau(k, 4) <= 2 k^-2 + O(k^-3) as k -> infinity"),
        Annotation("tau-k-r", "tau(k, r) <= O(k^-floor(r/2)) as k -> infinity, for r >= 4"),
        Annotation("tau-k-3", "tau(k, 3) = o(k^-1.084) via s(Z3^d) <= 2 eta^d + 1"),
        Annotation("turan-number", "T(n, k, r): min edges of an n-vertex r-graph with alpha < k"),
        Annotation(
            "t-l",
            "t_l(k, r) <= t_(l-1)(k-1, r-1) for every l; only l = r-1 (codegree) is tracked",
        ),
        Annotation("unknown", "no value of t(k, r) is known for k > r > 2"),
    ]
