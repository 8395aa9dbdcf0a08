"""
Utility functions for the set, sequence, hypergraph and facts file formats.

Set and sequence files hold one element per line as comma-separated
coordinates; sequences may append a multiplicity ("1,0,1 × 3", "x 3" or
"* 3"). '#' starts a comment, and a "# group: Z2^4" line names the group.
Hypergraph files start with "n r" and list one edge per line.
"""

import json
import logging
import re
from collections import Counter
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from algebra import GroupElement, GroupSpec
from errors import FormatError, GroupSpecError, ZeroSumError
from hypergraph import RGraph
from turan import BaseFact
from zerosum import GSequence

logger = logging.getLogger("format-utils")
logger.setLevel(logging.INFO)

GROUP_DIRECTIVE = re.compile(r"^#\s*group\s*:\s*(\S+)\s*$", re.IGNORECASE)
MULTIPLICITY = re.compile(r"^(?P<coords>[^×x*]+?)\s*(?:[×x*]\s*(?P<mult>\d+))?$")


def parse_element_lines(
    text: str, spec: Optional[GroupSpec] = None
) -> Tuple[GroupSpec, List[Tuple[GroupElement, int]]]:
    """
    Parse set / sequence text

    Args:
        text: File contents
        spec: Group to use when the text has no group directive

    Returns:
        Tuple containing (group, list of (element, multiplicity) in file order)
    """
    rows: List[Tuple[int, Tuple[int, ...], int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        directive = GROUP_DIRECTIVE.match(line)
        if directive:
            try:
                found = GroupSpec.parse(directive.group(1))
            except GroupSpecError as e:
                raise FormatError(f"line {lineno}: {e.message}") from e
            if spec is not None and found != spec:
                raise FormatError(f"line {lineno}: file declares {found}, expected {spec}")
            spec = found
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        match = MULTIPLICITY.match(line)
        if not match:
            raise FormatError(f"line {lineno}: cannot parse {raw!r}")
        try:
            coords = tuple(int(c) for c in match.group("coords").split(","))
        except ValueError as e:
            raise FormatError(f"line {lineno}: coordinates must be integers in {raw!r}") from e
        mult = int(match.group("mult")) if match.group("mult") else 1
        if mult < 1:
            raise FormatError(f"line {lineno}: multiplicity must be >= 1")
        rows.append((lineno, coords, mult))

    if spec is None:
        raise FormatError("no group given: add a '# group: ...' line or pass the group")
    parsed = []
    for lineno, coords, mult in rows:
        try:
            parsed.append((spec.element(coords), mult))
        except GroupSpecError as e:
            raise FormatError(f"line {lineno}: {e.message}") from e
    return spec, parsed


def parse_set(text: str, spec: Optional[GroupSpec] = None) -> Tuple[GroupSpec, Tuple[GroupElement, ...]]:
    """Parse a set file; multiplicities and repeated elements are rejected"""
    spec, rows = parse_element_lines(text, spec)
    if any(mult != 1 for _, mult in rows):
        raise FormatError("set files cannot carry multiplicities")
    elements = tuple(x for x, _ in rows)
    repeated = [x for x, count in Counter(elements).items() if count > 1]
    if repeated:
        raise FormatError(f"element {repeated[0]} appears twice in a set file")
    return spec, elements


def parse_sequence(text: str, spec: Optional[GroupSpec] = None) -> GSequence:
    """Parse a sequence file; repeated lines add up"""
    spec, rows = parse_element_lines(text, spec)
    mults: Counter = Counter()
    for x, mult in rows:
        mults[x] += mult
    try:
        return GSequence.from_mults(spec, mults)
    except ZeroSumError as e:
        raise FormatError(e.message) from e


def read_set_file(path: str, spec: Optional[GroupSpec] = None) -> Tuple[GroupSpec, Tuple[GroupElement, ...]]:
    return parse_set(_read(path), spec)


def read_sequence_file(path: str, spec: Optional[GroupSpec] = None) -> GSequence:
    return parse_sequence(_read(path), spec)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {str(e)}") from e


def format_elements(spec: GroupSpec, elements: Iterable[GroupElement], comment: Optional[str] = None) -> str:
    """
    Write a set file

    Args:
        spec: The group
        elements: Elements, written in the given order
        comment: Optional first comment line

    Returns:
        File text with a group directive
    """
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"# group: {spec}")
    lines.extend(str(x) for x in elements)
    return "\n".join(lines) + "\n"


def format_sequence(seq: GSequence, comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"# group: {seq.spec}")
    for x, mult in seq.items:
        lines.append(f"{x} × {mult}" if mult > 1 else str(x))
    return "\n".join(lines) + "\n"


# Hypergraph exchange format

def parse_hypergraph(text: str) -> RGraph:
    """
    Parse "n r" followed by one edge per line (space-separated vertices)

    Edges are sorted on read, so vertex order within a line is free.
    """
    lines = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise FormatError("empty hypergraph file")
    try:
        n, r = (int(v) for v in lines[0].split())
    except ValueError as e:
        raise FormatError(f"header must be 'n r', got {lines[0]!r}") from e
    edges = []
    for line in lines[1:]:
        try:
            edges.append(tuple(sorted(int(v) for v in line.split())))
        except ValueError as e:
            raise FormatError(f"edge line {line!r} is not a list of integers") from e
    try:
        return RGraph.explicit(n, r, edges)
    except ZeroSumError as e:
        raise FormatError(e.message) from e


def read_hypergraph_file(path: str) -> RGraph:
    return parse_hypergraph(_read(path))


def format_hypergraph(H: RGraph) -> str:
    lines = [f"{H.n} {H.r}"]
    lines.extend(" ".join(str(v) for v in e) for e in H.edges)
    return "\n".join(lines) + "\n"


# Facts file

def parse_base_facts(text: str) -> List[BaseFact]:
    """
    Parse a base-facts JSON file

    Accepts a list of {"group", "r", "s", "source", "citation"} objects or
    an object with such a list under "facts".
    """
    try:
        payload = json.loads(text)
    except ValueError as e:
        raise FormatError(f"facts file is not JSON: {str(e)}") from e
    items = payload.get("facts") if isinstance(payload, dict) else payload
    if not isinstance(items, list):
        raise FormatError("facts file must hold a list of facts")
    facts = []
    for i, item in enumerate(items):
        try:
            facts.append(BaseFact(**item))
        except (TypeError, ValueError) as e:
            raise FormatError(f"fact {i} is malformed: {str(e)}") from e
    return facts


def read_base_facts_file(path: str) -> List[BaseFact]:
    return parse_base_facts(_read(path))


def coords_list(elements: Sequence[GroupElement]) -> List[List[int]]:
    return [list(x.coords) for x in elements]


def mults_list(seq: GSequence) -> List[Dict[str, object]]:
    return [{"coords": list(x.coords), "mult": m} for x, m in seq.items]
