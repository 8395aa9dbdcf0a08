"""
Utility functions for machine-readable output: JSON envelopes and files.
"""

import json
import logging
import os
from typing import Any, Dict, Optional

from solver import SearchResult
from utils.format_utils import coords_list
from zerosum import ZeroSumWitness

logger = logging.getLogger("output-utils")
logger.setLevel(logging.INFO)

SCHEMA_VERSION = 1


def dump_json(payload: Dict[str, Any]) -> str:
    """
    Serialise a payload deterministically

    Args:
        payload: JSON-compatible dictionary; "schema" is added when missing

    Returns:
        Indented JSON with sorted keys and a trailing newline
    """
    body = {"schema": SCHEMA_VERSION, **payload}
    return json.dumps(body, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def result_payload(result: SearchResult, witness_file: Optional[str] = None) -> Dict[str, Any]:
    """The CLI's JSON view of a solver result"""
    return {
        "constant": result.constant_name,
        "group": result.group,
        "r": result.r,
        "value": result.value,
        "label": result.label,
        "exhaustive": result.exhaustive,
        "witness_file": witness_file,
        "nodes": result.nodes_explored,
        "seconds": result.wall_time,
    }


def witness_envelope(witness: ZeroSumWitness, r: int) -> Dict[str, Any]:
    """JSON envelope around a zero-sum subsequence"""
    return {
        "target_r": r,
        "sum_check": "identity",
        "picks": [{"coords": list(x.coords), "mult": c} for x, c in witness.picks],
    }


def violation_payload(violating) -> Optional[list]:
    return coords_list(violating) if violating else None


def write_text(path: str, text: str) -> str:
    """Write text to a file, creating parent directories"""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info(f"Wrote {path}")
    return path
