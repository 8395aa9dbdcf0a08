#!/usr/bin/env python3
"""
Script to build the reference data for the zero-sum toolkit including:
- Published values of s_r, beta_r, g and cap sizes
- Solved values with JSON certificates
- The codegree density ledger (CSV and JSON)
- Closed-form constants and construction checks

Usage:
    python create_reference_data.py [--slow]
"""

import asyncio
import sys
import logging
import os

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import database
from config import get_settings
from construct import b_d, cm_constant, eta_exponent, moment_curve, s4_lower_sequence, sidon_d4, s4_upper
from turan import classical_facts, default_base_facts, derive_bounds

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger("create-reference-data")

# Closed-form constants to log
CM_VALUES = [2, 3, 4, 5]
BD_DIMENSIONS = range(1, 9)

# Constructions re-checked on every run: (name, builder)
CONSTRUCTIONS = [
    ("Sidon set of size 6 in Z2^4", sidon_d4),
    ("moment curve m=2, k=2", lambda: moment_curve(2, 2)),
    ("moment curve m=3, k=2", lambda: moment_curve(3, 2)),
    ("s_4 lower sequence over Z2^4", lambda: s4_lower_sequence(4)),
]


async def create_data(include_slow: bool = False):
    database.create_db_and_tables()
    logger.info("Database initialized")

    added = await database.seed_published_entries()
    logger.info(f"Seeded {added} published rows")

    solved = await database.build_solved_entries(include_slow=include_slow)
    for entry in solved:
        logger.info(f"Solved {entry.constant}({entry.group}, r={entry.r}) = {entry.value} -> {entry.certificate_path}")

    for entry, ok, message in await database.verify_solved_entries(rerun=False):
        if ok:
            logger.info(f"Verified {entry.constant}({entry.group}) = {entry.value}")
        else:
            logger.error(f"Verification failed for {entry.constant}({entry.group}): {message}")

    ledger = derive_bounds(default_base_facts(), range(0, 9), extra_facts=classical_facts())
    out_dir = get_settings().certificate_dir
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "ledger.csv"), "w", encoding="utf-8") as f:
        f.write(ledger.to_csv())
    with open(os.path.join(out_dir, "ledger.json"), "w", encoding="utf-8") as f:
        f.write(ledger.to_json())
    logger.info(f"Ledger with {len(ledger)} facts written to {out_dir}")

    for m in CM_VALUES:
        table = cm_constant(m)
        logger.info(f"C_{m}^{m} = {table.product}, C_{m} ~ {table.value:.4f}")
    for d in BD_DIMENSIONS:
        logger.info(f"d={d}: b_d = {b_d(d)}, s_4(Z2^{d}) <= {s4_upper(d)}")
    logger.info(f"ln 3 / ln eta = {eta_exponent():.4f}")

    for name, build in CONSTRUCTIONS:
        output = build()
        if output.validate():
            logger.info(f"Checked {name}: {output.size} terms, {output.claimed_property.describe()}")
        else:
            logger.error(f"Construction failed its check: {name}")

    logger.info("Reference data creation complete!")


if __name__ == "__main__":
    asyncio.run(create_data(include_slow="--slow" in sys.argv[1:]))
