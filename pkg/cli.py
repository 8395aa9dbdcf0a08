#!/usr/bin/env python3
"""
Command-line interface for the zero-sum toolkit.

Usage:
    python cli.py solve beta --group Z2^4 --r 4
    python cli.py construct moment-curve --m 3 --k 2
    python cli.py bound cm --m 4
    python cli.py witness build --group Z2^2 --r 4 --n 12 --certify --s auto
    python cli.py bounds derive --max-shift 8 --emit table.csv
    python cli.py verify zerofree --file A.set --r 4
    python cli.py table show --constant beta --group-family Z2

Exit status: 0 success / true verdict, 1 false verdict, non-exhaustive
result or a request above the configured caps, 2 usage error. With --json
every command prints one JSON document carrying "schema": 1.
"""

import argparse
import asyncio
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

import database
from algebra import FieldContext, GroupSpec
from config import VERSION, configure_logging, override_settings
from construct import (
    b_d,
    cm_constant,
    eta,
    eta_exponent,
    extremal_sequence_s2m,
    gao_formula,
    moment_curve,
    s4_lower_sequence,
    s4_upper,
    sidon_basis,
    sidon_d4,
    sidon_upper_bound,
    z3_egz_upper,
)
from errors import CapExceededError, ZeroSumError
from hypergraph import check_ekr_bound, check_lemma_bound, check_monotonicity_chain
from solver import (
    SearchBudget,
    SearchResult,
    solve_beta_r,
    solve_cap,
    solve_harborth,
    solve_s_r,
    verify_certificate,
)
from turan import (
    annotations,
    build_witness,
    certify_witness,
    classical_facts,
    default_base_facts,
    derive_bounds,
    external_facts,
    reference_facts,
    solved_base_facts,
)
from utils import (
    coords_list,
    dump_json,
    format_elements,
    format_sequence,
    generate_certificate_summary,
    generate_cm_summary,
    generate_construction_summary,
    generate_fact_lines,
    generate_ledger_table,
    generate_reference_table,
    generate_result_summary,
    generate_sidon_bound_summary,
    generate_witness_summary,
    mults_list,
    read_base_facts_file,
    read_hypergraph_file,
    read_sequence_file,
    read_set_file,
    result_payload,
    violation_payload,
    witness_envelope,
    write_text,
)
from zerosum import find_sidon_violation, find_zero_sum_subsequence, is_zero_free_set

logger = logging.getLogger("zerosum-cli")
logger.setLevel(logging.INFO)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2

CONSTANT_ALIASES = {
    "beta": "beta_r",
    "beta_r": "beta_r",
    "s": "s_r",
    "sr": "s_r",
    "s_r": "s_r",
    "g": "g",
    "cap": "cap",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so run() owns the exit code"""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _emit(args: argparse.Namespace, payload: Dict[str, Any], text: str) -> None:
    if args.json:
        sys.stdout.write(dump_json(payload))
    else:
        print(text)


def _group(text: Optional[str]) -> GroupSpec:
    if not text:
        raise UsageError("--group is required")
    return GroupSpec.parse(text)


def _budget(args: argparse.Namespace) -> SearchBudget:
    return SearchBudget(
        max_nodes=args.budget_nodes,
        max_seconds=args.budget_secs,
        threads=max(1, args.threads),
        symmetry=not args.no_symmetry,
    )


# solve

def cmd_solve(args: argparse.Namespace) -> int:
    budget = _budget(args)
    if args.constant == "cap":
        if args.d is None:
            raise UsageError("solve cap needs --d")
        result = solve_cap(args.d, budget)
    else:
        spec = _group(args.group)
        if args.constant == "g":
            result = solve_harborth(spec, budget)
        else:
            r = args.r if args.r is not None else spec.exponent
            solve = solve_s_r if args.constant == "sr" else solve_beta_r
            result = solve(spec, r, budget)

    witness_file = None
    if args.emit_witness:
        witness_file = write_text(args.emit_witness, result.model_dump_json(by_alias=True, indent=2) + "\n")
    _emit(args, result_payload(result, witness_file), generate_result_summary(result))
    return EXIT_OK if result.exhaustive else EXIT_FALSE


# construct

def cmd_construct(args: argparse.Namespace) -> int:
    ctx = FieldContext.from_hex(args.k, args.modulus) if getattr(args, "modulus", None) else None
    if args.kind == "sidon":
        output = sidon_d4() if args.d == 4 and not args.basis else sidon_basis(args.d)
    elif args.kind == "moment-curve":
        output = moment_curve(args.m, args.k, ctx)
    elif args.kind == "egz-lower":
        output = extremal_sequence_s2m(args.m, args.k, ctx)
    else:
        output = s4_lower_sequence(args.d)

    valid = output.validate()
    if output.is_sequence:
        body = format_sequence(output.payload, comment=output.claimed_property.describe())
        listing = mults_list(output.payload)
    else:
        body = format_elements(output.spec, output.payload, comment=output.claimed_property.describe())
        listing = [{"coords": c, "mult": 1} for c in coords_list(output.payload)]
    if args.emit:
        write_text(args.emit, body)
    payload = {
        "kind": output.kind,
        "group": str(output.spec),
        "size": output.size,
        "claimed_property": output.claimed_property.describe(),
        "valid": valid,
        "elements": listing,
        "file": args.emit,
    }
    _emit(args, payload, generate_construction_summary(output, valid) + "\n" + body.rstrip())
    return EXIT_OK if valid else EXIT_FALSE


# bound

def cmd_bound(args: argparse.Namespace) -> int:
    if args.kind == "cm":
        table = cm_constant(args.m)
        payload = {
            "m": table.m,
            "q": list(table.q[2:]),
            "lambda": list(table.lam[2:]),
            "N": list(table.N[1:]),
            "power": table.product,
            "value": table.value,
            "lambda_check": table.lambda_check(),
            "coarse_check": table.coarse_check(),
            "coarse_bound": table.coarse_bound,
        }
        _emit(args, payload, generate_cm_summary(table))
    elif args.kind == "bd":
        value = b_d(args.d)
        _emit(args, {"d": args.d, "b_d": value}, f"b_{args.d} = {value}  (tau(r+{value}, r) <= 2^-{args.d})")
    elif args.kind == "sidon-upper":
        bound = sidon_upper_bound(args.d)
        _emit(args, {"d": bound.d, "value": bound.value, "floor": bound.floor}, generate_sidon_bound_summary(bound))
    elif args.kind == "s4-upper":
        value = s4_upper(args.d)
        _emit(args, {"d": args.d, "s4_upper": value}, f"s_4(Z2^{args.d}) <= {value}")
    elif args.kind == "z3-egz":
        value = z3_egz_upper(args.d)
        payload = {"d": args.d, "bound": value, "eta": eta(), "eta_exponent": eta_exponent()}
        _emit(args, payload, f"s(Z3^{args.d}) <= 2 eta^{args.d} + 1 = {value:.6f}  (eta = {eta():.7f})")
    else:
        gao = gao_formula(args.k, args.m, args.d)
        payload = {"k": gao.k, "m": gao.m, "d": gao.d, "value": gao.value,
                   "proved": gao.proved, "conjectured": gao.conjectured}
        status = "proved" if gao.proved else ("conjectured" if gao.conjectured else "outside the conjecture")
        _emit(args, payload, f"s_{gao.k * gao.m}(Z{gao.k}^{gao.d}) = {gao.value} [{status}]")
    return EXIT_OK


# witness

def _auto_s(spec: GroupSpec, r: int) -> int:
    value = database.bundled_value("s_r", str(spec), r)
    if value is not None:
        return value
    result = solve_s_r(spec, r)
    if not result.exhaustive:
        raise UsageError(f"s_{r}({spec}) is not known; pass --s")
    return result.value


def cmd_witness(args: argparse.Namespace) -> int:
    spec = _group(args.group)
    w = build_witness(spec, args.r, args.n)
    if not args.certify:
        payload = {"group": str(spec), "r": w.r, "n": w.n, "basket_sizes": list(w.basket_sizes),
                   "labels": list(w.labels)}
        _emit(args, payload, f"basket witness {spec}, r={w.r}, n={w.n}, basket sizes {list(w.basket_sizes)}")
        return EXIT_OK
    s = _auto_s(spec, args.r) if args.s == "auto" else int(args.s)
    certificate = certify_witness(w, s)
    _emit(args, certificate.model_dump(), generate_witness_summary(certificate))
    return EXIT_OK if certificate.verdict else EXIT_FALSE


# bounds

def cmd_bounds(args: argparse.Namespace) -> int:
    if args.kind == "reference":
        facts = reference_facts()
        notes = annotations()
        payload = {
            "facts": [f.model_dump(exclude_none=True) for f in facts],
            "annotations": [{"name": a.name, "statement": a.statement} for a in notes],
        }
        text = "\n".join(generate_fact_lines(facts) + [""] + [f"{a.name}: {a.statement}" for a in notes])
        _emit(args, payload, text)
        return EXIT_OK

    if args.from_solved:
        base = solved_base_facts(max_d=args.solved_max_d, cap_d=args.solved_cap_d)
    elif args.base_file:
        base = read_base_facts_file(args.base_file)
    else:
        base = default_base_facts()
    extra = [] if args.no_classical else classical_facts(max_k=3 + args.max_shift)
    if args.with_external:
        extra += external_facts(max_r=4 + args.max_shift)
    ledger = derive_bounds(base, range(0, args.max_shift + 1), extra_facts=extra)
    if args.emit:
        write_text(args.emit, ledger.to_csv())
    if args.json:
        sys.stdout.write(ledger.to_json())
    else:
        print(generate_ledger_table(ledger))
    return EXIT_OK


# verify

def cmd_verify(args: argparse.Namespace) -> int:
    spec = GroupSpec.parse(args.group) if getattr(args, "group", None) else None
    if args.kind == "zerofree":
        spec, elements = read_set_file(args.file, spec)
        check = is_zero_free_set(spec, elements, args.r)
        payload = {"group": str(spec), "r": args.r, "zero_free": check.is_zero_free,
                   "violating": violation_payload(check.violating)}
        text = f"zero-free of rank {args.r}: {check.is_zero_free}"
        if check.violating:
            text += "\nviolating subset: " + "; ".join(str(x) for x in check.violating)
        _emit(args, payload, text)
        return EXIT_OK if check.is_zero_free else EXIT_FALSE

    if args.kind == "sidon":
        spec, elements = read_set_file(args.file, spec)
        violation = find_sidon_violation(spec, elements)
        payload = {"group": str(spec), "sidon": violation is None,
                   "violating": [coords_list(pair) for pair in violation] if violation else None}
        text = f"Sidon: {violation is None}"
        if violation:
            (a, b), (c, e) = violation
            text += f"\n{a} + {b} = {c} + {e}"
        _emit(args, payload, text)
        return EXIT_OK if violation is None else EXIT_FALSE

    if args.kind == "zerosum":
        seq = read_sequence_file(args.file, spec)
        witness = find_zero_sum_subsequence(seq, args.r)
        payload = {"group": str(seq.spec), "length": seq.length, "r": args.r,
                   "zero_sum": witness is not None,
                   "witness": witness_envelope(witness, args.r) if witness else None}
        text = f"zero-sum subsequence of length {args.r}: {witness is not None}"
        if witness:
            text += "\n" + "; ".join(str(x) for x in witness.elements())
        _emit(args, payload, text)
        return EXIT_OK if witness is None else EXIT_FALSE

    if args.kind == "certificate":
        result = database.load_certificate(args.file)
        check = verify_certificate(result)
        payload = {"ok": check.ok, "certified": check.certified, "message": check.message,
                   "violating": violation_payload(check.violating)}
        _emit(args, payload, generate_certificate_summary(check))
        return EXIT_OK if check.ok else EXIT_FALSE

    H = read_hypergraph_file(args.file)
    chain = check_monotonicity_chain(H)
    lemma = check_lemma_bound(H) if H.edge_count else None
    ekr = check_ekr_bound(H) if H.n >= 2 * H.r else None
    holds = bool(chain) and (lemma is None or bool(lemma)) and (ekr is None or bool(ekr))
    payload = {
        "n": H.n,
        "r": H.r,
        "edges": H.edge_count,
        "chain": [str(v) for v in chain.values],
        "chain_holds": chain.holds,
        "lemma_holds": lemma.holds if lemma else None,
        "ekr_holds": ekr.holds if ekr else None,
        "ekr_vacuous": ekr.vacuous if ekr else None,
    }
    text = "\n".join([
        f"degree chain {[str(v) for v in chain.values]}: {chain.holds}",
        f"independent-edges bound: {lemma.holds if lemma else 'n/a (no edges)'}",
        f"intersecting-family bound: {ekr.holds if ekr else 'n/a (n < 2r)'}",
    ])
    _emit(args, payload, text)
    return EXIT_OK if holds else EXIT_FALSE


# table

async def _table(args: argparse.Namespace) -> int:
    if args.kind == "show":
        constant = CONSTANT_ALIASES.get(args.constant, args.constant) if args.constant else None
        entries = []
        if args.from_db:
            database.create_db_and_tables()
            entries = await database.list_reference_entries(constant=constant, family=args.group_family)
        if not entries:
            entries = database.bundled_entries(constant=constant, family=args.group_family)
        payload = {"rows": [
            {"constant": e.constant, "group": e.group, "d": e.d, "r": e.r, "value": e.value,
             "provenance": e.provenance, "citation": e.citation}
            for e in entries
        ]}
        _emit(args, payload, generate_reference_table(entries))
        return EXIT_OK

    database.create_db_and_tables()
    if args.kind == "build":
        seeded = await database.seed_published_entries()
        solved = await database.build_solved_entries(include_slow=args.slow)
        payload = {"seeded": seeded, "solved": [
            {"constant": e.constant, "group": e.group, "r": e.r, "value": e.value,
             "certificate": e.certificate_path} for e in solved
        ]}
        _emit(args, payload, f"seeded {seeded} published rows, stored {len(solved)} solved rows")
        return EXIT_OK

    outcomes = await database.verify_solved_entries(rerun=args.rerun)
    payload = {"checked": [
        {"constant": e.constant, "group": e.group, "r": e.r, "value": e.value, "ok": ok, "message": message}
        for e, ok, message in outcomes
    ]}
    text = "\n".join(
        f"{'OK ' if ok else 'BAD'} {e.constant}({e.group}, r={e.r}) = {e.value}: {message}"
        for e, ok, message in outcomes
    ) or "no solved rows"
    _emit(args, payload, text)
    return EXIT_OK if all(ok for _, ok, _ in outcomes) else EXIT_FALSE


def cmd_table(args: argparse.Namespace) -> int:
    if args.kind == "verify" and not args.all:
        raise UsageError("table verify needs --all")
    return asyncio.run(_table(args))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zerosum", description="Exact zero-sum combinatorics toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("--log-level", default=None, help="logging level (default from ZEROSUM_LOG_LEVEL)")
    parser.add_argument("--element-cap", type=int, default=None, help="largest |G| to enumerate")

    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON document")

    search = _Parser(add_help=False)
    search.add_argument("--budget-nodes", type=int, default=None, help="node limit")
    search.add_argument("--budget-secs", type=float, default=None, help="wall-time limit in seconds")
    search.add_argument("--threads", type=int, default=1, help="worker threads")
    search.add_argument("--no-symmetry", action="store_true", help="disable symmetry reduction")
    search.add_argument("--emit-witness", default=None, help="write the certificate JSON here")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    # solve
    solve = sub.add_parser("solve", help="exact constants").add_subparsers(dest="constant", required=True)
    for name, help_text in (("sr", "s_r(G)"), ("beta", "beta_r(G)"), ("g", "g(G)"), ("cap", "a_d")):
        p = solve.add_parser(name, help=help_text, parents=[common, search])
        if name == "cap":
            p.add_argument("--d", type=int, required=True)
        else:
            p.add_argument("--group", required=True)
            if name != "g":
                p.add_argument("--r", type=int, default=None, help="defaults to exp(G)")
        p.set_defaults(func=cmd_solve)

    # construct
    construct = sub.add_parser("construct", help="explicit constructions").add_subparsers(dest="kind", required=True)
    p = construct.add_parser("sidon", parents=[common])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--basis", action="store_true", help="weight <= 1 vectors even for d = 4")
    p.add_argument("--emit", default=None)
    p.set_defaults(func=cmd_construct)
    for name in ("moment-curve", "egz-lower"):
        p = construct.add_parser(name, parents=[common])
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--modulus", default=None, help="irreducible modulus as hex")
        p.add_argument("--emit", default=None)
        p.set_defaults(func=cmd_construct)
    p = construct.add_parser("s4-lower", parents=[common])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--emit", default=None)
    p.set_defaults(func=cmd_construct)

    # bound
    bound = sub.add_parser("bound", help="closed-form bounds").add_subparsers(dest="kind", required=True)
    for name, needs in (("cm", ("m",)), ("bd", ("d",)), ("sidon-upper", ("d",)), ("s4-upper", ("d",)),
                        ("z3-egz", ("d",)), ("gao", ("k", "m", "d"))):
        p = bound.add_parser(name, parents=[common])
        for flag in needs:
            p.add_argument(f"--{flag}", type=int, required=True)
        p.set_defaults(func=cmd_bound)

    # witness
    witness = sub.add_parser("witness", help="basket witness hypergraphs").add_subparsers(dest="kind", required=True)
    p = witness.add_parser("build", parents=[common])
    p.add_argument("--group", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--certify", action="store_true")
    p.add_argument("--s", default="auto", help="s_r(G), or 'auto'")
    p.set_defaults(func=cmd_witness)

    # bounds
    bounds = sub.add_parser("bounds", help="codegree density ledger").add_subparsers(dest="kind", required=True)
    p = bounds.add_parser("derive", parents=[common])
    source = p.add_mutually_exclusive_group()
    source.add_argument("--base-file", default=None, help="JSON list of base facts (default: bundled)")
    source.add_argument("--from-solved", action="store_true", help="base facts from fresh solver runs")
    p.add_argument("--solved-max-d", type=int, default=4, help="s_4(Z2^d) runs for d <= this")
    p.add_argument("--solved-cap-d", type=int, default=2, help="cap runs for d <= this")
    p.add_argument("--max-shift", type=int, default=8)
    p.add_argument("--emit", default=None, help="CSV output file")
    p.add_argument("--no-classical", action="store_true", help="leave out t(k,2) = 1/(k-1)")
    p.add_argument("--with-external", action="store_true", help="mix in the external 2^-d family")
    p.set_defaults(func=cmd_bounds)
    p = bounds.add_parser("reference", parents=[common])
    p.set_defaults(func=cmd_bounds)

    # verify
    verify = sub.add_parser("verify", help="check files").add_subparsers(dest="kind", required=True)
    for name in ("zerofree", "sidon", "zerosum", "certificate", "hypergraph"):
        p = verify.add_parser(name, parents=[common])
        p.add_argument("--file", required=True)
        if name in ("zerofree", "sidon", "zerosum"):
            p.add_argument("--group", default=None, help="group when the file has no directive")
        if name in ("zerofree", "zerosum"):
            p.add_argument("--r", type=int, required=True)
        p.set_defaults(func=cmd_verify)

    # table
    table = sub.add_parser("table", help="reference table").add_subparsers(dest="kind", required=True)
    p = table.add_parser("show", parents=[common])
    p.add_argument("--constant", default=None)
    p.add_argument("--group-family", default=None)
    p.add_argument("--from-db", action="store_true")
    p.set_defaults(func=cmd_table)
    p = table.add_parser("build", parents=[common])
    p.add_argument("--slow", action="store_true", help="include the long runs")
    p.set_defaults(func=cmd_table)
    p = table.add_parser("verify", parents=[common])
    p.add_argument("--all", action="store_true")
    p.add_argument("--rerun", action="store_true", help="re-run cheap solvers too")
    p.set_defaults(func=cmd_table)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, dispatch and map the outcome to an exit status

    Args:
        argv: Arguments without the program name

    Returns:
        0 on success, 1 for a false verdict, a lower bound or an exceeded
        cap, 2 for usage and input errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(dump_json({"error": "UsageError", "message": str(e), "details": {}}))
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    if args.element_cap is not None:
        override_settings(element_cap=args.element_cap)
    configure_logging(args.log_level)

    handler: Callable[[argparse.Namespace], int] = args.func
    try:
        return handler(args)
    except UsageError as e:
        sys.stderr.write(dump_json({"error": "UsageError", "message": str(e), "details": {}}))
        return EXIT_USAGE
    except CapExceededError as e:
        # a well-formed request larger than the configured caps
        logger.error(f"CapExceededError: {e.message}")
        sys.stderr.write(dump_json(e.to_dict()))
        return EXIT_FALSE
    except ZeroSumError as e:
        logger.error(f"{type(e).__name__}: {e.message}")
        sys.stderr.write(dump_json(e.to_dict()))
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
