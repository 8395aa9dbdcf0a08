"""
Utilities package for the zero-sum toolkit.
"""

from utils.format_utils import (
    parse_element_lines,
    parse_set,
    parse_sequence,
    read_set_file,
    read_sequence_file,
    format_elements,
    format_sequence,
    parse_hypergraph,
    read_hypergraph_file,
    format_hypergraph,
    parse_base_facts,
    read_base_facts_file,
    coords_list,
    mults_list
)

from utils.output_utils import (
    dump_json,
    result_payload,
    witness_envelope,
    violation_payload,
    write_text
)

from utils.summary_utils import (
    generate_result_summary,
    generate_certificate_summary,
    generate_construction_summary,
    generate_cm_summary,
    generate_sidon_bound_summary,
    generate_witness_summary,
    generate_ledger_table,
    generate_fact_lines,
    generate_reference_table,
    format_bound
)

__all__ = [
    # Format utilities
    'parse_element_lines', 'parse_set', 'parse_sequence', 'read_set_file', 'read_sequence_file',
    'format_elements', 'format_sequence', 'parse_hypergraph', 'read_hypergraph_file',
    'format_hypergraph', 'parse_base_facts', 'read_base_facts_file', 'coords_list', 'mults_list',

    # Output utilities
    'dump_json', 'result_payload', 'witness_envelope', 'violation_payload', 'write_text',

    # Summary utilities
    'generate_result_summary', 'generate_certificate_summary', 'generate_construction_summary',
    'generate_cm_summary', 'generate_sidon_bound_summary', 'generate_witness_summary',
    'generate_ledger_table', 'generate_fact_lines', 'generate_reference_table', 'format_bound'
]
