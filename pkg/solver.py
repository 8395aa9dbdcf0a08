"""
Exact computation of s_r(G), beta_r(G), g(G) and cap sizes a_d.

All four constants come out of one branch-and-bound engine over element
indices in canonical order. A node fixes how many copies of each element
before a position are taken; the state is the set of (count, sum) pairs
reachable by sub-multisets, and an element may be appended while it closes
no zero-sum subsequence of length r. A node is pruned when its length plus
the per-element capacity of everything after it cannot beat the incumbent.

Children try the largest multiplicity first, so the first extremal object
met is the lexicographically least one; the threaded search keeps that
property by merging subtree results in pre-order.

Symmetry: when exp(G) divides r, translating every element by t changes
each r-sum by r*t = 0, so an extremal object may be assumed to contain 0
(with the largest multiplicity, for sequences). For Z_p^d a linear
automorphism fixing 0 moves any other support element to the first unit
vector, index 1. Both constraints keep the lexicographically least
extremal object feasible, so they never change the reported witness.
"""

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from algebra import GroupElement, GroupSpec, group_index
from config import get_settings
from errors import CapExceededError, CertificateError, GroupSpecError, ParameterError
from zerosum import GSequence, ReachabilityLayers, find_zero_sum_subsequence, is_zero_free_set

logger = logging.getLogger("zerosum-solver")
logger.setLevel(logging.INFO)

ConstantName = Literal["s_r", "beta_r", "g", "cap"]
Choice = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class SearchBudget:
    """Node and wall-time limits plus execution options for one search"""

    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None
    threads: int = 1
    symmetry: bool = True


class WitnessEntry(BaseModel):
    coords: List[int]
    mult: int = 1


class SearchResult(BaseModel):
    """An exactly computed constant with its extremal witness"""

    schema_version: int = Field(default=1, alias="schema")
    constant_name: ConstantName
    group: str
    r: int
    value: int
    witness: List[WitnessEntry]
    exhaustive: bool
    nodes_explored: int = 0
    wall_time: float = 0.0
    multiplicity_cap: Optional[int] = None
    symmetry: List[str] = []

    model_config = {"populate_by_name": True}

    def spec(self) -> GroupSpec:
        return GroupSpec.parse(self.group)

    @property
    def label(self) -> str:
        return "exact" if self.exhaustive else "lower bound"

    def witness_elements(self) -> List[GroupElement]:
        spec = self.spec()
        try:
            return [spec.element(entry.coords) for entry in self.witness]
        except GroupSpecError as e:
            raise CertificateError(f"witness element does not conform: {e.message}") from e

    def witness_sequence(self) -> GSequence:
        spec = self.spec()
        elements = self.witness_elements()
        if any(entry.mult < 1 for entry in self.witness):
            raise CertificateError("witness multiplicities must be >= 1")
        if len(set(elements)) != len(elements):
            raise CertificateError("witness lists an element twice")
        return GSequence.from_mults(spec, {x: e.mult for x, e in zip(elements, self.witness)})

    @property
    def witness_size(self) -> int:
        return sum(entry.mult for entry in self.witness)


class _BudgetExhausted(Exception):
    pass


class _SearchControl:
    """Shared node counter, deadline and incumbent for one search"""

    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.started = time.monotonic()
        self.deadline = (
            self.started + budget.max_seconds if budget.max_seconds is not None else None
        )
        self.exhausted = False
        self.shared_best = -1
        self._lock = threading.Lock()

    def tick(self) -> None:
        with self._lock:
            self.nodes += 1
            nodes = self.nodes
        if self.exhausted:
            raise _BudgetExhausted()
        if self.budget.max_nodes is not None and nodes > self.budget.max_nodes:
            self.exhausted = True
            raise _BudgetExhausted()
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.exhausted = True
            raise _BudgetExhausted()

    def offer(self, length: int) -> None:
        with self._lock:
            if length > self.shared_best:
                self.shared_best = length

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started


@dataclass
class _Node:
    pos: int
    state: ReachabilityLayers
    length: int
    chosen: Choice


class _Recorder:
    """Best object found inside one (sub)tree"""

    def __init__(self) -> None:
        self.length = -1
        self.chosen: Choice = ()


class _ExtremalSearch:
    """
    Longest zero-sum-free multiset with per-element multiplicity cap.

    max_copies = 1 searches sets (beta_r); max_copies = r - 1 searches
    sequences (s_r).
    """

    def __init__(self, spec: GroupSpec, r: int, max_copies: int, budget: SearchBudget):
        self.spec = spec
        self.r = r
        self.max_copies = max_copies
        self.budget = budget
        self.index = group_index(spec)
        self.order = self.index.order
        self.negatives = [self.index.scaled_negatives(i) for i in range(1, max_copies + 1)]
        self.forced = self._forced_prefix() if budget.symmetry else ()
        self.control = _SearchControl(budget)
        self.parallel = budget.threads > 1

    def _forced_prefix(self) -> Tuple[int, ...]:
        forced = [0]
        if self.spec.is_elementary and self.order > 1:
            forced.append(1)
        return tuple(forced)

    @property
    def symmetry_labels(self) -> List[str]:
        labels = []
        if 0 in self.forced:
            labels.append("translation")
        if 1 in self.forced:
            labels.append("linear")
        return labels

    def _root(self) -> _Node:
        return _Node(0, ReachabilityLayers(self.spec, self.r), 0, ())

    def _children(self, node: _Node, caps: np.ndarray) -> List[_Node]:
        live = np.flatnonzero(caps[node.pos :])
        if live.size == 0:
            return []
        x = node.pos + int(live[0])
        low = 1 if x in self.forced else 0
        children = []
        for c in range(int(caps[x]), low - 1, -1):
            state = node.state.add(x, c) if c else node.state
            chosen = node.chosen + ((x, c),) if c else node.chosen
            children.append(_Node(x + 1, state, node.length + c, chosen))
        return children

    def _capacities(self, node: _Node) -> Optional[np.ndarray]:
        caps = node.state.capacities(self.max_copies, self.negatives)
        caps[: node.pos] = 0
        for f in self.forced:
            if f >= node.pos and caps[f] == 0:
                return None
        return caps

    def _prune_level(self, recorder: _Recorder) -> Tuple[int, int]:
        if self.parallel:
            return recorder.length, self.control.shared_best - 1
        return recorder.length, recorder.length

    def _dfs(self, node: _Node, recorder: _Recorder) -> None:
        self.control.tick()
        if node.length > recorder.length:
            recorder.length = node.length
            recorder.chosen = node.chosen
            self.control.offer(node.length)
            logger.debug(f"incumbent {node.length} after {self.control.nodes} nodes")
        caps = self._capacities(node)
        if caps is None:
            return
        local, shared = self._prune_level(recorder)
        bound = node.length + int(caps.sum())
        if bound <= max(local, shared):
            return
        for child in self._children(node, caps):
            self._dfs(child, recorder)
            local, shared = self._prune_level(recorder)
            if node.length + int(caps.sum()) <= max(local, shared):
                break

    def _frontier(self, target: int) -> List[_Node]:
        """Expand the tree breadth-wise, keeping pre-order, until enough subtrees exist"""
        frontier = [self._root()]
        for _ in range(self.order):
            if len(frontier) >= target:
                break
            expanded: List[_Node] = []
            grew = False
            for node in frontier:
                caps = self._capacities(node)
                children = self._children(node, caps) if caps is not None else []
                if children:
                    expanded.extend(children)
                    grew = True
                elif caps is not None:
                    expanded.append(node)
            frontier = expanded
            if not grew:
                break
        return frontier

    def run(self) -> Tuple[int, Choice]:
        if not self.parallel:
            recorder = _Recorder()
            try:
                self._dfs(self._root(), recorder)
            except _BudgetExhausted:
                logger.warning(f"budget exhausted after {self.control.nodes} nodes")
            return recorder.length, recorder.chosen

        frontier = self._frontier(self.budget.threads * 4)
        recorders = [_Recorder() for _ in frontier]

        def work(i: int) -> None:
            try:
                self._dfs(frontier[i], recorders[i])
            except _BudgetExhausted:
                pass

        with ThreadPoolExecutor(max_workers=self.budget.threads) as pool:
            list(pool.map(work, range(len(frontier))))
        if self.control.exhausted:
            logger.warning(f"budget exhausted after {self.control.nodes} nodes")
        best = max((rec.length for rec in recorders), default=0)
        for rec in recorders:
            if rec.length == best:
                return rec.length, rec.chosen
        return 0, ()


def _check_r(spec: GroupSpec, r: int) -> None:
    if r < 1:
        raise ParameterError(f"r must be >= 1, got {r}", {"r": r})
    if r % spec.exponent:
        raise ParameterError(
            f"r={r} is not a multiple of exp({spec})={spec.exponent}",
            {"r": r, "exponent": spec.exponent},
        )


def _witness(spec: GroupSpec, chosen: Choice) -> List[WitnessEntry]:
    return [
        WitnessEntry(coords=list(spec.from_index(x).coords), mult=c)
        for x, c in sorted(chosen)
    ]


def _search(
    constant: ConstantName, spec: GroupSpec, r: int, max_copies: int, budget: SearchBudget
) -> Tuple[int, List[WitnessEntry], _ExtremalSearch]:
    settings = get_settings()
    if spec.order > settings.element_cap:
        raise CapExceededError(f"searching {spec}", spec.order, settings.element_cap)
    logger.info(f"solving {constant} for {spec}, r={r} (threads={budget.threads})")
    search = _ExtremalSearch(spec, r, max_copies, budget)
    length, chosen = search.run()
    return length, _witness(spec, chosen), search


def _result(
    constant: ConstantName,
    spec: GroupSpec,
    r: int,
    value: int,
    witness: List[WitnessEntry],
    search: _ExtremalSearch,
    multiplicity_cap: Optional[int] = None,
) -> SearchResult:
    result = SearchResult(
        constant_name=constant,
        group=str(spec),
        r=r,
        value=value,
        witness=witness,
        exhaustive=not search.control.exhausted,
        nodes_explored=search.control.nodes,
        wall_time=round(search.control.elapsed, 6),
        multiplicity_cap=multiplicity_cap,
        symmetry=search.symmetry_labels,
    )
    logger.info(
        f"{constant}({spec}, r={r}) = {value} [{result.label}] "
        f"nodes={result.nodes_explored} seconds={result.wall_time:.3f}"
    )
    return result


def solve_beta_r(spec: GroupSpec, r: int, budget: Optional[SearchBudget] = None) -> SearchResult:
    """
    Largest zero-free set of rank r

    Args:
        spec: The group
        r: Rank, a multiple of exp(G)
        budget: Search limits; an exhausted budget yields a lower bound

    Returns:
        SearchResult whose witness is a zero-free set of size `value`
    """
    _check_r(spec, r)
    budget = budget or SearchBudget()
    length, witness, search = _search("beta_r", spec, r, 1, budget)
    return _result("beta_r", spec, r, length, witness, search)


def solve_s_r(spec: GroupSpec, r: int, budget: Optional[SearchBudget] = None) -> SearchResult:
    """
    Generalized Erdős–Ginzburg–Ziv constant s_r(G)

    Multiplicities are capped at r-1: r copies of any element sum to zero
    because exp(G) divides r.

    Args:
        spec: The group
        r: Subsequence length, a multiple of exp(G)
        budget: Search limits; an exhausted budget yields a lower bound

    Returns:
        SearchResult with value = 1 + longest length, witness = that sequence
    """
    _check_r(spec, r)
    budget = budget or SearchBudget()
    length, witness, search = _search("s_r", spec, r, r - 1, budget)
    return _result("s_r", spec, r, length + 1, witness, search, multiplicity_cap=r - 1)


def solve_harborth(spec: GroupSpec, budget: Optional[SearchBudget] = None) -> SearchResult:
    """Harborth constant g(G) = beta_exp(G)(G) + 1"""
    budget = budget or SearchBudget()
    r = spec.exponent
    length, witness, search = _search("g", spec, r, 1, budget)
    return _result("g", spec, r, length + 1, witness, search)


def solve_cap(d: int, budget: Optional[SearchBudget] = None) -> SearchResult:
    """
    Maximum cap size a_d in AG(d, 3), i.e. beta_3(Z_3^d)

    Args:
        d: Dimension, at most the configured cap-search limit
        budget: Search limits

    Returns:
        SearchResult whose witness is a cap of size `value`
    """
    limit = get_settings().cap_search_limit
    if d < 1:
        raise ParameterError(f"dimension must be >= 1, got {d}", {"d": d})
    if d > limit:
        raise CapExceededError("cap search dimension", d, limit)
    budget = budget or SearchBudget()
    spec = GroupSpec.elementary(3, d)
    length, witness, search = _search("cap", spec, 3, 1, budget)
    return _result("cap", spec, 3, length, witness, search)


@dataclass(frozen=True)
class CertificateCheck:
    """Independent re-validation of a SearchResult witness"""

    ok: bool
    certified: str
    message: str
    violating: Optional[Tuple[GroupElement, ...]] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(result: SearchResult) -> CertificateCheck:
    """
    Re-validate a result's witness without trusting the search

    The witness certifies the lower-bound half of the value; the upper-bound
    half is certified only by an exhaustive search.

    Args:
        result: A SearchResult, typically read back from a certificate file

    Returns:
        CertificateCheck naming the certified half, or the violation found
    """
    try:
        spec = result.spec()
    except GroupSpecError as e:
        raise CertificateError(f"certificate group is malformed: {e.message}") from e
    certified = "exact (exhaustive search + witness)" if result.exhaustive else "lower bound only"

    def fail(message: str, violating: Optional[Sequence[GroupElement]] = None) -> CertificateCheck:
        logger.warning(f"certificate rejected for {result.constant_name}({spec}): {message}")
        return CertificateCheck(False, "nothing", message, tuple(violating) if violating else None)

    if result.r < 1 or result.r % spec.exponent:
        return fail(f"r={result.r} is not a multiple of exp(G)={spec.exponent}")

    if result.constant_name == "s_r":
        seq = result.witness_sequence()
        if seq.length != result.value - 1:
            return fail(f"witness length {seq.length} != value - 1 = {result.value - 1}")
        found = find_zero_sum_subsequence(seq, result.r)
        if found is not None:
            return fail(f"witness has a zero-sum subsequence of length {result.r}", found.elements())
        return CertificateCheck(
            True, certified, f"s_{result.r}({spec}) >= {result.value}: no zero-sum "
            f"subsequence of length {result.r} in a sequence of length {seq.length}"
        )

    elements = result.witness_elements()
    if any(entry.mult != 1 for entry in result.witness) or len(set(elements)) != len(elements):
        return fail("set witness must list distinct elements once")
    expected = result.value - 1 if result.constant_name == "g" else result.value
    if len(elements) != expected:
        return fail(f"witness size {len(elements)} != {expected}")
    if result.constant_name == "g" and result.r != spec.exponent:
        return fail(f"g(G) uses r = exp(G) = {spec.exponent}, not {result.r}")
    if result.constant_name == "cap" and (not spec.is_elementary or spec.moduli[0] != 3 or result.r != 3):
        return fail("cap certificates must be over Z3^d with r = 3")
    check = is_zero_free_set(spec, elements, result.r)
    if not check.is_zero_free:
        return fail(f"{result.r} distinct witness elements sum to zero", check.violating)
    return CertificateCheck(
        True, certified, f"{result.constant_name}({spec}, r={result.r}) >= {result.value}: "
        f"witness of size {len(elements)} is zero-free of rank {result.r}"
    )


def multiset_bound_holds(beta: SearchResult, s: SearchResult) -> bool:
    """s_r(G) <= beta_r(G) + r - 1 for Z_2^d and even r"""
    if beta.group != s.group or beta.r != s.r:
        raise ParameterError("results must share group and r")
    return s.value <= beta.value + beta.r - 1


def embed_witness(result: SearchResult, modulus: Optional[int] = None) -> SearchResult:
    """
    Embed a witness into G' = Z_m x G by prepending a zero coordinate

    The embedded witness keeps its property, so it is a lower-bound result
    (never exhaustive) for the larger group.
    """
    spec = result.spec()
    modulus = modulus or spec.moduli[0]
    bigger = GroupSpec((modulus,) + spec.moduli)
    return SearchResult(
        constant_name=result.constant_name,
        group=str(bigger),
        r=result.r,
        value=result.value,
        witness=[WitnessEntry(coords=[0] + e.coords, mult=e.mult) for e in result.witness],
        exhaustive=False,
        multiplicity_cap=result.multiplicity_cap,
    )
