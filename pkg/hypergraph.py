"""
r-graph statistics: l-degrees, independence number and matching number.

Graphs are either explicit (a sorted edge list) or implicit (a membership
predicate plus an optional closed-form codegree), so large witness graphs
never materialise their edges.
"""

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from config import get_settings
from errors import CapExceededError, ParameterError

logger = logging.getLogger("zerosum-hypergraph")
logger.setLevel(logging.INFO)

Edge = Tuple[int, ...]
EdgePredicate = Callable[[Edge], bool]
CodegreeFn = Callable[[Edge], int]


class RGraph:
    """
    An r-uniform hypergraph on vertices 0..n-1.

    Explicit graphs hold a sorted tuple of strictly increasing r-tuples.
    Implicit graphs answer membership through `is_edge` and, when given,
    (r-1)-subset degrees through `codegree`; their edges are enumerated
    lazily under the configured subset cap.
    """

    def __init__(
        self,
        n: int,
        r: int,
        edges: Optional[Iterable[Sequence[int]]] = None,
        is_edge: Optional[EdgePredicate] = None,
        codegree: Optional[CodegreeFn] = None,
    ):
        if n < 0 or r < 1:
            raise ParameterError(f"need n >= 0 and r >= 1, got n={n}, r={r}", {"n": n, "r": r})
        if (edges is None) == (is_edge is None):
            raise ParameterError("give either an explicit edge list or a membership predicate")
        self.n = n
        self.r = r
        self._is_edge = is_edge
        self._codegree = codegree
        self._edges: Optional[Tuple[Edge, ...]] = None
        self._edge_set: FrozenSet[Edge] = frozenset()
        if edges is not None:
            self._edges = self._validate(edges)
            self._edge_set = frozenset(self._edges)

    def _validate(self, edges: Iterable[Sequence[int]]) -> Tuple[Edge, ...]:
        seen = set()
        for raw in edges:
            edge = tuple(int(v) for v in raw)
            if len(edge) != self.r:
                raise ParameterError(f"edge {edge} does not have {self.r} vertices")
            if any(b <= a for a, b in zip(edge, edge[1:])):
                raise ParameterError(f"edge {edge} is not strictly increasing")
            if edge and (edge[0] < 0 or edge[-1] >= self.n):
                raise ParameterError(f"edge {edge} leaves the vertex range [0, {self.n})")
            if edge in seen:
                raise ParameterError(f"duplicate edge {edge}")
            seen.add(edge)
        return tuple(sorted(seen))

    @classmethod
    def explicit(cls, n: int, r: int, edges: Iterable[Sequence[int]]) -> "RGraph":
        return cls(n, r, edges=edges)

    @classmethod
    def implicit(
        cls, n: int, r: int, is_edge: EdgePredicate, codegree: Optional[CodegreeFn] = None
    ) -> "RGraph":
        return cls(n, r, is_edge=is_edge, codegree=codegree)

    @classmethod
    def complete(cls, n: int, r: int) -> "RGraph":
        return cls(n, r, edges=combinations(range(n), r))

    @classmethod
    def empty(cls, n: int, r: int) -> "RGraph":
        return cls(n, r, edges=())

    @property
    def is_explicit(self) -> bool:
        return self._edges is not None

    def has_edge(self, edge: Sequence[int]) -> bool:
        key = tuple(sorted(edge))
        if self._edges is not None:
            return key in self._edge_set
        return len(key) == self.r and self._is_edge(key)  # type: ignore[misc]

    def iter_edges(self) -> Iterator[Edge]:
        """Edges in lexicographic order; implicit graphs enumerate all r-subsets"""
        if self._edges is not None:
            yield from self._edges
            return
        check_subset_cap(self.n, self.r)
        for candidate in combinations(range(self.n), self.r):
            if self._is_edge(candidate):  # type: ignore[misc]
                yield candidate

    @property
    def edges(self) -> Tuple[Edge, ...]:
        if self._edges is None:
            self._edges = tuple(self.iter_edges())
            self._edge_set = frozenset(self._edges)
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, subset: Sequence[int]) -> int:
        """Number of edges containing the given vertex subset"""
        members = tuple(sorted(set(subset)))
        if len(members) > self.r:
            return 0
        if len(members) == self.r - 1 and self._codegree is not None:
            return self._codegree(members)
        if self._edges is not None:
            return sum(1 for e in self._edges if set(members).issubset(e))
        rest = [v for v in range(self.n) if v not in members]
        check_subset_cap(len(rest), self.r - len(members))
        return sum(
            1
            for extra in combinations(rest, self.r - len(members))
            if self.has_edge(members + extra)
        )

    def incidence(self) -> Dict[int, List[Edge]]:
        by_vertex: Dict[int, List[Edge]] = defaultdict(list)
        for e in self.edges:
            for v in e:
                by_vertex[v].append(e)
        return by_vertex


def check_subset_cap(n: int, l: int) -> None:
    count = math.comb(n, l) if 0 <= l <= n else 0
    limit = get_settings().subset_cap
    if count > limit:
        raise CapExceededError(f"enumerating {l}-subsets of {n} vertices", count, limit)


def check_vertex_cap(n: int) -> None:
    limit = get_settings().hypergraph_cap
    if n > limit:
        raise CapExceededError("exact hypergraph search", n, limit)


def delta_l(H: RGraph, l: int) -> int:
    """
    Maximum number of edges containing an l-subset of vertices

    Args:
        H: The hypergraph
        l: Subset size, 0 <= l <= r; l = 0 gives e(H), l = r gives 1 if H has an edge

    Returns:
        Delta_l(H)
    """
    if not 0 <= l <= H.r:
        raise ParameterError(f"l must be in [0, {H.r}], got {l}", {"l": l, "r": H.r})
    if l == H.r - 1 and H._codegree is not None and not H.is_explicit:
        check_subset_cap(H.n, l)
        return max((H.degree(s) for s in combinations(range(H.n), l)), default=0)
    counts: Counter = Counter()
    for e in H.edges:
        counts.update(combinations(e, l))
    return max(counts.values(), default=0)


@dataclass(frozen=True)
class IndependentSet:
    size: int
    vertices: Tuple[int, ...]


def _closes_edge(H: RGraph, chosen: Sequence[int], v: int, u: int) -> bool:
    """True if some edge contains u and v and otherwise lies inside `chosen`"""
    if H.r == 1:
        return False
    for rest in combinations(chosen, H.r - 2):
        if H.has_edge(rest + (u, v)):
            return True
    return False


def _clique_cover_bound(H: RGraph, candidates: Sequence[int]) -> int:
    # an independent set takes at most r-1 vertices of a set whose r-subsets are all edges
    cliques: List[List[int]] = []
    for v in candidates:
        for clique in cliques:
            if all(H.has_edge(t + (v,)) for t in combinations(clique, H.r - 1)):
                clique.append(v)
                break
        else:
            cliques.append([v])
    return sum(min(len(c), H.r - 1) for c in cliques)


def independence_number(H: RGraph) -> IndependentSet:
    """
    Exact independence number by branch and bound

    Vertices are tried by degree, highest first; a node is pruned when the
    chosen set plus a greedy clique-cover bound on the candidates cannot
    beat the incumbent.

    Args:
        H: Hypergraph with n within the configured cap

    Returns:
        IndependentSet with a largest edge-free vertex set
    """
    check_vertex_cap(H.n)
    if H.r == 1:
        singles = {e[0] for e in H.edges}
        free = tuple(v for v in range(H.n) if v not in singles)
        return IndependentSet(len(free), free)

    degrees = Counter(v for e in H.edges for v in e)
    order = sorted(range(H.n), key=lambda v: (-degrees[v], v))
    best: List[Tuple[int, ...]] = [()]

    def expand(chosen: List[int], candidates: List[int]) -> None:
        if len(chosen) > len(best[0]):
            best[0] = tuple(sorted(chosen))
        if len(chosen) + _clique_cover_bound(H, candidates) <= len(best[0]):
            return
        for i, v in enumerate(candidates):
            if len(chosen) + len(candidates) - i <= len(best[0]):
                return
            remaining = [u for u in candidates[i + 1 :] if not _closes_edge(H, chosen, v, u)]
            chosen.append(v)
            expand(chosen, remaining)
            chosen.pop()

    expand([], order)
    logger.debug(f"alpha = {len(best[0])} on n={H.n}, r={H.r}")
    return IndependentSet(len(best[0]), best[0])


@dataclass(frozen=True)
class Matching:
    size: int
    edges: Tuple[Edge, ...]


def matching_number(H: RGraph) -> Matching:
    """
    Maximum number of pairwise disjoint edges, by exact search

    The smallest free vertex is either left unmatched or covered by one of
    its edges; the bound is the number of free vertices divided by r.
    """
    check_vertex_cap(H.n)
    incidence = H.incidence()
    best: List[Tuple[Edge, ...]] = [()]

    def search(v: int, used: int, picked: List[Edge]) -> None:
        while v < H.n and used >> v & 1:
            v += 1
        if len(picked) > len(best[0]):
            best[0] = tuple(picked)
        if v >= H.n:
            return
        free = H.n - bin(used).count("1")
        if len(picked) + free // H.r <= len(best[0]):
            return
        for e in incidence.get(v, ()):
            mask = sum(1 << u for u in e)
            if used & mask:
                continue
            picked.append(e)
            search(v + 1, used | mask, picked)
            picked.pop()
        search(v + 1, used | (1 << v), picked)

    search(0, 0, [])
    return Matching(len(best[0]), best[0])


@dataclass(frozen=True)
class ChainCheck:
    """Delta_l / C(n-l, r-l) for l = 0..r-1"""

    holds: bool
    values: Tuple[Fraction, ...]

    def __bool__(self) -> bool:
        return self.holds


def check_monotonicity_chain(H: RGraph) -> ChainCheck:
    """
    Check that Delta_l(H) / C(n-l, r-l) is non-decreasing in l

    Args:
        H: Hypergraph with n >= r

    Returns:
        ChainCheck with the exact chain values
    """
    if H.n < H.r:
        raise ParameterError(f"need n >= r, got n={H.n}, r={H.r}")
    values = tuple(
        Fraction(delta_l(H, l), math.comb(H.n - l, H.r - l)) for l in range(H.r)
    )
    holds = all(a <= b for a, b in zip(values, values[1:]))
    if not holds:
        logger.error(f"degree chain decreases on n={H.n}, r={H.r}: {values}")
    return ChainCheck(holds, values)


@dataclass(frozen=True)
class LemmaCheck:
    """e(H) <= nu * (1 + r(Delta_1 - 1))"""

    holds: bool
    edges: int
    matching: int
    delta1: int
    bound: int

    def __bool__(self) -> bool:
        return self.holds


def check_lemma_bound(H: RGraph) -> LemmaCheck:
    if H.edge_count == 0:
        raise ParameterError("the independent-edges bound needs at least one edge")
    nu = matching_number(H).size
    d1 = delta_l(H, 1)
    bound = nu * (1 + H.r * (d1 - 1))
    holds = H.edge_count <= bound
    if not holds:
        logger.error(f"e(H)={H.edge_count} exceeds {bound} (nu={nu}, Delta_1={d1})")
    return LemmaCheck(holds, H.edge_count, nu, d1, bound)


@dataclass(frozen=True)
class EkrCheck:
    holds: bool
    intersecting: bool
    edges: int
    bound: int

    @property
    def vacuous(self) -> bool:
        return not self.intersecting

    def __bool__(self) -> bool:
        return self.holds


def check_ekr_bound(H: RGraph) -> EkrCheck:
    """
    Intersecting families on n >= 2r vertices have at most C(n-1, r-1) edges

    Returns:
        EkrCheck; vacuously true when H has two disjoint edges
    """
    if H.n < 2 * H.r:
        raise ParameterError(f"need n >= 2r, got n={H.n}, r={H.r}")
    bound = math.comb(H.n - 1, H.r - 1)
    intersecting = matching_number(H).size == 1
    holds = not intersecting or H.edge_count <= bound
    if not holds:
        logger.error(f"intersecting family with {H.edge_count} edges exceeds C(n-1, r-1)={bound}")
    return EkrCheck(holds, intersecting, H.edge_count, bound)
