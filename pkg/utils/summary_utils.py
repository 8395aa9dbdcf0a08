"""
Utility functions for generating human-readable reports.
"""

import logging
from typing import Iterable, List, Sequence

from construct import CmTable, ConstructionOutput, SidonUpperBound
from database import ReferenceEntryRead
from solver import CertificateCheck, SearchResult
from turan import BoundFact, BoundLedger, WitnessCertificate

logger = logging.getLogger("summary-utils")
logger.setLevel(logging.INFO)

CONSTANT_TITLES = {
    "s_r": "s_r",
    "beta_r": "beta_r",
    "g": "g",
    "cap": "a_d",
}


def generate_result_summary(result: SearchResult) -> str:
    """
    Summarise a solver result

    Args:
        result: The result

    Returns:
        Multi-line report; the value is only called exact for exhaustive runs
    """
    title = CONSTANT_TITLES.get(result.constant_name, result.constant_name)
    summary = [f"{title}({result.group}, r={result.r}) = {result.value} [{result.label}]"]
    if not result.exhaustive:
        summary.append("- search budget exhausted: the value is a lower bound only")
    summary.append(f"- nodes explored: {result.nodes_explored}")
    summary.append(f"- wall time: {result.wall_time:.3f}s")
    if result.symmetry:
        summary.append(f"- symmetry: {', '.join(result.symmetry)}")
    if result.multiplicity_cap is not None:
        summary.append(f"- multiplicity cap: {result.multiplicity_cap}")
    summary.append(f"- witness ({result.witness_size} terms):")
    for entry in result.witness:
        coords = ",".join(str(c) for c in entry.coords)
        summary.append(f"    {coords}" + (f" × {entry.mult}" if entry.mult > 1 else ""))
    return "\n".join(summary)


def generate_certificate_summary(check: CertificateCheck) -> str:
    if check.ok:
        return f"certificate OK ({check.certified}): {check.message}"
    lines = [f"certificate REJECTED: {check.message}"]
    if check.violating:
        lines.append("violating subsequence: " + "; ".join(str(x) for x in check.violating))
    return "\n".join(lines)


def generate_construction_summary(output: ConstructionOutput, valid: bool) -> str:
    summary = [
        f"{output.kind} over {output.spec}: {output.size} terms",
        f"- claim: {output.claimed_property.describe()}",
        f"- re-checked: {'yes' if valid else 'NO, the claim fails'}",
    ]
    summary.extend(f"- {note}" for note in output.notes)
    return "\n".join(summary)


def generate_cm_summary(table: CmTable) -> str:
    summary = [f"C_{table.m} = ({table.m}! * N_{table.m})^(1/{table.m}) = {table.product}^(1/{table.m}) ~ {table.value:.6f}"]
    summary.append("  r  q(r)  lambda_r  N_r")
    for r, q, lam, n in table.rows():
        summary.append(f"  {r:<2} {q:<5} {lam:<9} {n}")
    summary.append(f"- lambda_r < 2(m/r + r): {table.lambda_check()}")
    summary.append(f"- m! N_m < m! prod r lambda_r < m! prod 2(m + r^2): {table.coarse_check()}")
    return "\n".join(summary)


def generate_sidon_bound_summary(bound: SidonUpperBound) -> str:
    return f"beta(Z2^{bound.d}) <= sqrt(2^{bound.d + 1} - 7/4) + 1/2 = {bound.value:.6f}, floor {bound.floor}"


def generate_witness_summary(certificate: WitnessCertificate) -> str:
    """
    Summarise a basket-witness certificate
    """
    summary = [
        f"basket witness {certificate.group}, r={certificate.r}, n={certificate.n}",
        f"- basket sizes: {certificate.basket_sizes}",
        f"- codegree range: {certificate.min_codegree}..{certificate.max_codegree}"
        + (" (closed form matches enumeration)" if certificate.codegree_enumerated else ""),
    ]
    if certificate.alpha_omitted:
        summary.append("- independence number omitted: above the hypergraph cap (partial certificate)")
    else:
        summary.append(f"- alpha = {certificate.alpha}, independent set {certificate.independent_set}")
        summary.append(f"- alpha < s = {certificate.s}: {certificate.verdict}")
    return "\n".join(summary)


def format_bound(fact: BoundFact) -> str:
    return f"tau({fact.k},{fact.r}) <= {fact.bound_num}/{fact.bound_den}"


def generate_ledger_table(ledger: BoundLedger) -> str:
    lines = []
    for fact in ledger.sorted_facts():
        lines.append(f"{format_bound(fact):<24} [{fact.provenance_class}] {fact.describe_provenance()}")
    return "\n".join(lines)


def generate_fact_lines(facts: Iterable[BoundFact]) -> List[str]:
    return [f"{format_bound(f):<24} [{f.provenance_class}] {f.describe_provenance()}" for f in facts]


def generate_reference_table(entries: Sequence[ReferenceEntryRead]) -> str:
    """
    Format reference rows as (d, value, provenance) lines
    """
    if not entries:
        return "no entries"
    lines = [f"{'constant':<8} {'group':<8} {'r':>3} {'d':>3} {'value':>6}  provenance"]
    for e in entries:
        r = "" if e.r is None else str(e.r)
        d = "" if e.d is None else str(e.d)
        lines.append(f"{e.constant:<8} {e.group:<8} {r:>3} {d:>3} {e.value:>6}  {e.provenance}"
                     + (f" ({e.citation})" if e.citation else ""))
    return "\n".join(lines)
