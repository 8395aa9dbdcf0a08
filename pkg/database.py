"""
Reference table of zero-sum constants.
Uses SQLModel (SQLAlchemy + Pydantic) for the stored rows; solved rows point
at JSON certificate files that can be re-verified at any time.
"""

import json
import logging
import os
import re
from contextlib import asynccontextmanager
from datetime import datetime
from typing import Dict, List, Optional, Tuple

from sqlmodel import Field, Session, SQLModel, create_engine, select

from algebra import GroupSpec
from config import get_settings
from errors import CertificateError, ZeroSumError
from solver import SearchBudget, SearchResult, solve_beta_r, solve_cap, solve_s_r, verify_certificate

# Create a logger
logger = logging.getLogger("zerosum-database")
logger.setLevel(logging.INFO)

PROVENANCES = ("published", "solved", "external")
CHEAP_RERUN_ORDER = 16

_engines: Dict[str, object] = {}


def get_engine():
    """Engine for the configured database URL, created on first use"""
    url = get_settings().database_url
    engine = _engines.get(url)
    if engine is None:
        engine = create_engine(url, echo=False)
        _engines[url] = engine
    return engine


# Models

class ReferenceEntryBase(SQLModel):
    """A known value of a zero-sum constant"""
    constant: str  # s_r, beta_r, g, cap
    family: str  # Z2, Z3, Zk, ...
    group: str
    r: Optional[int] = None
    d: Optional[int] = None
    value: int
    provenance: str = "published"  # published, solved, external
    citation: Optional[str] = None
    certificate_path: Optional[str] = None


class ReferenceEntry(ReferenceEntryBase, table=True):
    """SQLModel database model for reference values"""
    id: Optional[int] = Field(default=None, primary_key=True)
    created_at: datetime = Field(default_factory=datetime.now)


class ReferenceEntryCreate(ReferenceEntryBase):
    """Schema for creating a reference entry"""
    pass


class ReferenceEntryRead(ReferenceEntryBase):
    """Schema for reading a reference entry"""
    id: Optional[int] = None
    created_at: Optional[datetime] = None


def _family(spec: GroupSpec) -> str:
    if len(set(spec.moduli)) == 1:
        return f"Z{spec.moduli[0]}"
    return str(spec)


def _entry(constant: str, group: str, r: Optional[int], value: int, citation: str,
           provenance: str = "published") -> ReferenceEntryCreate:
    spec = GroupSpec.parse(group)
    return ReferenceEntryCreate(
        constant=constant,
        family=_family(spec),
        group=str(spec),
        r=r,
        d=spec.rank,
        value=value,
        provenance=provenance,
        citation=citation,
    )


def _bundled_entries() -> List[ReferenceEntryCreate]:
    entries: List[ReferenceEntryCreate] = []
    for d, beta in {1: 2, 2: 3, 3: 4, 4: 6}.items():
        entries.append(_entry("beta_r", f"Z2^{d}", 4, beta, f"largest Sidon set of Z2^{d}"))
    for d, beta in {1: 2, 2: 3, 3: 4, 4: 6}.items():
        entries.append(_entry("s_r", f"Z2^{d}", 4, beta + 3, "s_4(Z2^d) = beta(Z2^d) + 3"))
    for d, a in {2: 4, 3: 9, 4: 20, 5: 45, 6: 112}.items():
        entries.append(_entry("cap", f"Z3^{d}", 3, a, f"a_{d} = {a}, largest cap in AG({d},3)"))
        entries.append(_entry("g", f"Z3^{d}", 3, a + 1, f"g(Z3^{d}) = a_{d} + 1"))
    for k in range(2, 6):
        entries.append(_entry("s_r", f"Z{k}", k, 2 * k - 1, "Erdős–Ginzburg–Ziv: s(Z_k) = 2k - 1"))
    for k in range(2, 6):
        entries.append(_entry("s_r", f"Z{k}^2", k, 4 * k - 3, "Reiher: s(Z_k^2) = 4k - 3"))
    for m, d in ((4, 2), (4, 3), (8, 4)):
        entries.append(
            _entry("s_r", f"Z2^{d}", 2 * m, 2 * m + d,
                   f"Gao: s_km(Z_k^d) = km + (k-1)d for m >= k^(d-1), k=2, m={m}")
        )
    return entries


BUNDLED_ENTRIES: List[ReferenceEntryCreate] = _bundled_entries()


# Database Functions

def create_db_and_tables():
    """Create the database and tables if they don't exist"""
    try:
        SQLModel.metadata.create_all(get_engine())
        logger.info("Database and tables created successfully")
    except Exception as e:
        logger.error(f"Error creating database and tables: {str(e)}")
        raise


@asynccontextmanager
async def get_session():
    """Get a database session - async context manager"""
    session = Session(get_engine())
    try:
        yield session
    finally:
        session.close()


async def add_reference_entry(entry: ReferenceEntryCreate) -> Optional[ReferenceEntryRead]:
    """
    Add a reference value

    Args:
        entry: The value to store

    Returns:
        The stored entry with its ID, or None on failure
    """
    if entry.provenance not in PROVENANCES:
        logger.error(f"Unknown provenance {entry.provenance!r} for {entry.constant}({entry.group})")
        return None
    async with get_session() as session:
        try:
            db_entry = ReferenceEntry.model_validate(entry.model_dump())
            session.add(db_entry)
            session.commit()
            session.refresh(db_entry)
            return ReferenceEntryRead.model_validate(db_entry.model_dump())
        except Exception as e:
            logger.error(f"Error adding reference entry: {str(e)}")
            return None


async def list_reference_entries(
    constant: Optional[str] = None,
    family: Optional[str] = None,
    provenance: Optional[str] = None,
) -> List[ReferenceEntryRead]:
    """
    List stored entries, optionally filtered

    Returns:
        Entries ordered by constant, group and r
    """
    async with get_session() as session:
        try:
            statement = select(ReferenceEntry)
            if constant:
                statement = statement.where(ReferenceEntry.constant == constant)
            if family:
                statement = statement.where(ReferenceEntry.family == family)
            if provenance:
                statement = statement.where(ReferenceEntry.provenance == provenance)
            rows = session.exec(statement).all()
            entries = [ReferenceEntryRead.model_validate(row.model_dump()) for row in rows]
            return sorted(entries, key=lambda e: (e.constant, e.family, e.d or 0, e.r or 0, e.id or 0))
        except Exception as e:
            logger.error(f"Error listing reference entries: {str(e)}")
            return []


async def get_reference_value(constant: str, group: str, r: Optional[int] = None) -> Optional[int]:
    """
    Look up a value, preferring solved rows over published rows

    Args:
        constant: Constant name
        group: Group text, e.g. "Z2^3"
        r: Subsequence length / rank, if the constant has one

    Returns:
        The value, or None if no row matches
    """
    canonical = str(GroupSpec.parse(group))
    async with get_session() as session:
        try:
            statement = select(ReferenceEntry).where(
                ReferenceEntry.constant == constant, ReferenceEntry.group == canonical
            )
            if r is not None:
                statement = statement.where(ReferenceEntry.r == r)
            rows = session.exec(statement).all()
            if not rows:
                return None
            rows = sorted(rows, key=lambda row: row.provenance != "solved")
            return rows[0].value
        except Exception as e:
            logger.error(f"Error getting reference value: {str(e)}")
            return None


def bundled_value(constant: str, group: str, r: Optional[int] = None) -> Optional[int]:
    """Look up a value in the bundled rows without touching the database"""
    canonical = str(GroupSpec.parse(group))
    for entry in BUNDLED_ENTRIES:
        if entry.constant == constant and entry.group == canonical and (r is None or entry.r == r):
            return entry.value
    return None


def bundled_entries(constant: Optional[str] = None, family: Optional[str] = None) -> List[ReferenceEntryRead]:
    return [
        ReferenceEntryRead.model_validate(entry.model_dump())
        for entry in BUNDLED_ENTRIES
        if (constant is None or entry.constant == constant) and (family is None or entry.family == family)
    ]


async def seed_published_entries() -> int:
    """
    Store every bundled row that is not in the table yet

    Returns:
        Number of rows added
    """
    existing = {
        (e.constant, e.group, e.r, e.provenance) for e in await list_reference_entries(provenance="published")
    }
    added = 0
    for entry in BUNDLED_ENTRIES:
        if (entry.constant, entry.group, entry.r, entry.provenance) in existing:
            continue
        if await add_reference_entry(entry):
            added += 1
    logger.info(f"Seeded {added} published entries")
    return added


# Certificates

def certificate_filename(result: SearchResult) -> str:
    group = re.sub(r"[^A-Za-z0-9]+", "_", result.group)
    return f"{result.constant_name}_{group}_r{result.r}.json"


def save_certificate(result: SearchResult, directory: Optional[str] = None) -> str:
    """
    Write a SearchResult as a JSON certificate

    Returns:
        Path of the written file
    """
    directory = directory or get_settings().certificate_dir
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, certificate_filename(result))
    with open(path, "w", encoding="utf-8") as f:
        f.write(result.model_dump_json(by_alias=True, indent=2) + "\n")
    logger.info(f"Certificate written to {path}")
    return path


def load_certificate(path: str) -> SearchResult:
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
        return SearchResult.model_validate(payload)
    except OSError as e:
        raise CertificateError(f"cannot read certificate {path}: {str(e)}") from e
    except ValueError as e:
        raise CertificateError(f"certificate {path} is malformed: {str(e)}") from e


def desk_scale_jobs(include_slow: bool = False) -> List[Tuple[str, str, Optional[int]]]:
    """(constant, group, r) triples solved by `table build`"""
    jobs: List[Tuple[str, str, Optional[int]]] = [
        ("beta_r", f"Z2^{d}", 4) for d in range(1, 5)
    ]
    jobs += [("s_r", f"Z2^{d}", 4) for d in range(1, 4)]
    jobs += [("s_r", "Z2", 2), ("s_r", "Z3", 3), ("s_r", "Z4", 4), ("s_r", "Z3^2", 3)]
    jobs += [("cap", "Z3^2", 3)]
    if include_slow:
        jobs += [("s_r", "Z2^4", 4), ("cap", "Z3^3", 3)]
    return jobs


def run_job(constant: str, group: str, r: Optional[int], budget: Optional[SearchBudget] = None) -> SearchResult:
    spec = GroupSpec.parse(group)
    if constant == "beta_r":
        return solve_beta_r(spec, r or spec.exponent, budget)
    if constant == "s_r":
        return solve_s_r(spec, r or spec.exponent, budget)
    if constant == "cap":
        return solve_cap(spec.rank, budget)
    raise ZeroSumError(f"no solver job for {constant}")


async def build_solved_entries(
    include_slow: bool = False, budget: Optional[SearchBudget] = None
) -> List[ReferenceEntryRead]:
    """
    Solve the desk-scale constants and store them with certificates

    Non-exhaustive results are logged and skipped.
    """
    stored: List[ReferenceEntryRead] = []
    for constant, group, r in desk_scale_jobs(include_slow):
        try:
            result = run_job(constant, group, r, budget)
        except ZeroSumError as e:
            logger.error(f"Error solving {constant}({group}): {e.message}")
            continue
        if not result.exhaustive:
            logger.warning(f"{constant}({group}, r={r}) not exhaustive; skipping")
            continue
        path = save_certificate(result)
        entry = _entry(constant, result.group, result.r, result.value,
                       f"exhaustive search, {result.nodes_explored} nodes", provenance="solved")
        entry.certificate_path = path
        row = await add_reference_entry(entry)
        if row:
            stored.append(row)
    return stored


async def verify_solved_entries(rerun: bool = True) -> List[Tuple[ReferenceEntryRead, bool, str]]:
    """
    Re-check every solved row against its certificate

    Args:
        rerun: Also re-run the solver for groups of order <= 16

    Returns:
        (entry, ok, message) per solved row
    """
    outcomes: List[Tuple[ReferenceEntryRead, bool, str]] = []
    for entry in await list_reference_entries(provenance="solved"):
        if not entry.certificate_path:
            outcomes.append((entry, False, "no certificate file"))
            continue
        try:
            result = load_certificate(entry.certificate_path)
            check = verify_certificate(result)
        except ZeroSumError as e:
            logger.error(f"Error verifying {entry.constant}({entry.group}): {e.message}")
            outcomes.append((entry, False, e.message))
            continue
        if not check.ok or result.value != entry.value or not result.exhaustive:
            outcomes.append((entry, False, check.message if not check.ok else "value mismatch"))
            continue
        if rerun and GroupSpec.parse(entry.group).order <= CHEAP_RERUN_ORDER:
            fresh = run_job(entry.constant, entry.group, entry.r)
            if fresh.value != entry.value:
                outcomes.append((entry, False, f"re-run gives {fresh.value}"))
                continue
        outcomes.append((entry, True, check.certified))
    return outcomes
