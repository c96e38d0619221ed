"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 hypothesis rejection,
3 cap hit or inconclusive result.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import catalog
from .braid import DEFAULT_CAP, DEFAULT_DEPTH, apply_braid, orbit_enumerate
from .convolution import (
    INFINITY,
    InconclusiveError,
    check_jordan_transfer,
    convolution_dimension,
    middle_convolution,
)
from .exact import (
    CycloNum,
    CycloParseError,
    FieldOrderError,
    generalized_multiplicity,
    jordan_data,
    rational_eigenvalues,
    parse,
    render,
    roots_of_unity_eigenvalues,
    get_field_order_cap,
    set_field_order_cap,
)
from .fricke import fricke_residual, trace_coordinates
from .io import DocumentError, dumps, read_tuple, tuple_to_document
from .reflection import (
    READINGS,
    SCALINGS,
    HypothesisError,
    choose_roots,
    phi,
    t_invariants,
    verify_theorem,
)
from .tuples import MatrixTuple

EXIT_OK, EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# input helpers

def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}") from None


def load_input(source: str) -> tuple[MatrixTuple, dict, str]:
    """A tuple document path, '-' for stdin, or 'catalog:NAME'."""
    if source.startswith("catalog:"):
        entry = _catalog_entry(source.split(":", 1)[1])
        text = (catalog.catalog_dir() / f"{entry.name}.json").read_text()
        return entry.triple(), {"catalog": entry.name}, text
    text = _read_text(source)
    t, meta = read_tuple(text)
    return t, meta, text


def _catalog_entry(name: str):
    try:
        return catalog.load(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _literal(text: str, order: int) -> CycloNum:
    return parse(text, order)


def _parse_word(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        if text.startswith("["):
            word = json.loads(text)
        else:
            word = [int(x) for x in text.replace(" ", "").split(",") if x]
    except (ValueError, json.JSONDecodeError):
        raise UsageError(f"bad braid word {text!r}; use e.g. '1,-2,1' or '[1,-2,1]'") from None
    if not all(isinstance(x, int) for x in word):
        raise UsageError(f"bad braid word {text!r}")
    return word


def _parse_generators(text: str):
    if text in ("full", "pure"):
        return text
    try:
        gens = json.loads(text)
    except json.JSONDecodeError:
        raise UsageError("generators must be 'full', 'pure' or a JSON list of words") from None
    if not isinstance(gens, list) or not all(isinstance(w, list) for w in gens):
        raise UsageError("generators must be a JSON list of integer lists")
    return gens


def _digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\0")
    return h.hexdigest()


# ---------------------------------------------------------------------------
# commands; each returns (outputs, warnings, exit code, table text or None)

def cmd_mc(args, t: MatrixTuple) -> tuple[dict, list, int, str | None]:
    warnings: list[str] = []
    code = EXIT_OK
    out: dict[str, Any] = {}
    if args.lambda_search:
        attempts = []
        chosen = None
        inv = roots_of_unity_eigenvalues(t.product(), args.max_order or _default_max_order(t))
        if not inv.resolved:
            warnings.append("spectrum of the product is not resolved; lambda search is partial")
        cands = []
        for k, mu in enumerate(inv.values(), 1):
            cands.append((mu, f"eigenvalue{k}"))
        for k, mu in enumerate(inv.values(), 1):
            cands.append((mu.inverse(), f"inverse{k}"))
        for lam, source in cands:
            if lam.is_one():
                attempts.append({"lambda": render(lam), "source": source, "dimension": None,
                                 "note": "lambda = 1 skipped"})
                continue
            dim = middle_convolution(t, lam, check=False).dimension
            attempts.append({"lambda": render(lam), "source": source, "dimension": dim})
            if chosen is None and dim == args.target_dim:
                chosen = lam
        out["lambda_search"] = {"target_dimension": args.target_dim, "attempts": attempts}
        if chosen is None:
            out["result"] = None
            return out, warnings + [f"no lambda candidate gives dimension {args.target_dim}"], EXIT_INCONCLUSIVE, None
        lam = chosen
    elif args.lam is not None:
        lam = _literal(args.lam, args.lambda_order or t.order)
    else:
        raise UsageError("mc needs --lambda or --lambda-search")
    res = middle_convolution(t, lam)
    warnings.extend(res.warnings)
    out["result"] = res.to_json()
    if args.check_dim:
        if lam.is_one():
            out["check_dim"] = {"skipped": "lambda = 1"}
        else:
            formula = convolution_dimension(t, lam)
            ok = formula == res.dimension
            out["check_dim"] = {"formula": formula, "computed": res.dimension, "pass": ok,
                                "hypotheses_ok": res.hypotheses_ok}
            if not ok and res.hypotheses_ok:
                code = EXIT_INCONCLUSIVE
    if args.jordan:
        checks = []
        positions: list = list(range(1, t.length + 1)) + [INFINITY]
        for pos in positions:
            src = t.product() if pos == INFINITY else t.slot(pos)
            cands, resolved = _eigen_candidates(src, args, t)
            if not resolved:
                checks.append({"position": str(pos), "skipped": "spectrum not resolved"})
                continue
            chk = check_jordan_transfer(t, res.lam, res, pos, cands)
            checks.append({"position": str(pos), "pass": chk.ok, "message": chk.message,
                           "predicted": chk.predicted.to_json(), "actual": chk.actual.to_json(),
                           "free_blocks": chk.free_blocks})
            if not chk.ok:
                code = EXIT_INCONCLUSIVE
        out["jordan"] = checks
    table = None
    if args.format == "table":
        table = f"lambda = {render(res.lam)}\ndimension = {res.dimension}\n"
        for k, m in enumerate(res.tuple if res.dimension else (), 1):
            table += f"N~_{k}:\n" + "\n".join("  " + "  ".join(render(x) for x in row) for row in m.entries) + "\n"
        if "check_dim" in out:
            table += f"check-dim: {out['check_dim']}\n"
    return out, warnings, code, table


def _default_max_order(t: MatrixTuple) -> int:
    return 2 * math.lcm(2, t.order)


def _eigen_candidates(m, args, t: MatrixTuple) -> tuple[list[CycloNum], bool]:
    """Rational eigenvalues plus (scaled) roots of unity; and whether they exhaust the spectrum."""
    cands = rational_eigenvalues(m)
    if sum(generalized_multiplicity(m, a) for a in cands) == m.rows:
        return cands, True
    spec = roots_of_unity_eigenvalues(m, args.max_order or _default_max_order(t), scalars=_scalars(args.scalars))
    extra = [v for v in spec.values() if v not in cands]
    cands = cands + extra
    return cands, sum(generalized_multiplicity(m, a) for a in cands) == m.rows


def _scalars(text: str | None):
    if not text:
        return (1, -1)
    from fractions import Fraction
    return tuple(Fraction(x) for x in text.split(","))


def cmd_orbit(args, t: MatrixTuple):
    gens = _parse_generators(args.generators)
    rep = orbit_enumerate(t, gens, cap=args.cap, depth=args.fingerprint_depth,
                          verify_collisions=not args.no_verify)
    out = rep.to_json()
    code = EXIT_OK if rep.finite else EXIT_INCONCLUSIVE
    table = f"generators: {rep.generator_set}\nsize: {rep.size}\nfinite: {rep.finite}\ncap_hit: {rep.cap_hit}\n"
    return out, list(rep.warnings), code, table


def cmd_traces(args, t: MatrixTuple):
    seven = trace_coordinates(t)
    res = fricke_residual(seven)
    out = {"traces": seven.to_json(), "fricke_residual": render(res)}
    table = "\n".join(f"{k:5} {v}" for k, v in seven.to_json().items()) + f"\nfricke {render(res)}\n"
    return out, [], EXIT_OK, table


def cmd_phi(args, t: MatrixTuple):
    inv = t_invariants(t)
    warnings = ["degenerate: spectrum of r_3 r_2 r_1 is not distinct"] if inv.degenerate else []
    roots = choose_roots(t, inv=inv)
    rows = []
    for rt in roots:
        try:
            rows.append({"roots": rt.to_json(), "m": phi(rt, args.reading).to_json()})
        except ZeroDivisionError as exc:
            rows.append({"roots": rt.to_json(), "error": str(exc)})
    out = {"invariants": inv.to_json(), "reading": args.reading, "root_choices": len(roots), "phi": rows}
    table = "\n".join(f"{r['roots']['labeling']} {r['roots']['signs']} " +
                      " ".join(r.get("m", {}).values()) for r in rows) + "\n"
    return out, warnings, EXIT_OK, table


def cmd_verify(args, t: MatrixTuple):
    if args.braid:
        t = apply_braid(t, _parse_word(args.braid))
    try:
        rep = verify_theorem(t, scalings=args.scalings or SCALINGS, readings=args.readings or READINGS)
    except HypothesisError as exc:
        return {"verdict": False, "rejected": str(exc)}, [f"hypothesis rejected: {exc}"], EXIT_HYPOTHESIS, f"rejected: {exc}\n"
    out = rep.to_json(full_grid=args.full_grid)
    if args.braid:
        out["braid"] = _parse_word(args.braid)
    image = rep.phi_image()
    if image is not None:
        out["phi_image"] = tuple_to_document(image)
        out["phi_image_traces"] = trace_coordinates(image).to_json()
        if args.orbit:
            orb = orbit_enumerate(image, "full", cap=args.cap, depth=args.fingerprint_depth)
            out["phi_image_orbit"] = {"size": orb.size, "finite": orb.finite, "cap_hit": orb.cap_hit}
    code = EXIT_OK if rep.verdict else EXIT_INCONCLUSIVE
    return out, [], code, rep.table() + "\n"


def cmd_jordan(args, t: MatrixTuple):
    if args.matrix == "infinity":
        m = t.product()
    else:
        try:
            m = t.slot(int(args.matrix))
        except (ValueError, IndexError):
            raise UsageError(f"--matrix must be 1..{t.length} or 'infinity'") from None
    if args.candidates:
        cands = [_literal(x, t.order) for x in args.candidates.split(",")]
    else:
        cands, _ = _eigen_candidates(m, args, t)
    jd = jordan_data(m, cands)
    warnings = [] if jd.complete else ["partial: candidates do not exhaust the spectrum"]
    table = "\n".join(f"J({render(a)}, {l})" for a, l in jd.blocks) + f"\ncomplete: {jd.complete}\n"
    return {"matrix": args.matrix, "jordan": jd.to_json()}, warnings, EXIT_OK, table


def cmd_catalog(args):
    if args.action == "list":
        names = catalog.list_entries()
        out = {"entries": [{"name": n, "description": catalog.load(n).description} for n in names]}
        return out, [], EXIT_OK, "\n".join(names) + "\n"
    if not args.name:
        raise UsageError("catalog show needs an entry name")
    entry = _catalog_entry(args.name)
    out = entry.to_json()
    out["triple"] = tuple_to_document(entry.triple())
    return out, [], EXIT_OK, dumps(out)


def cmd_sample(args):
    import random
    from .samples import random_sl2_triple, random_tuple
    from .reflection import random_distinct_triple
    rng = random.Random(args.seed)
    if args.kind == "sl2":
        t = random_sl2_triple(rng, args.order)
    elif args.kind == "reflection":
        t = random_distinct_triple(rng, args.order)
    else:
        t = random_tuple(rng, args.length, args.dimension, args.order)
    doc = tuple_to_document(t, {"kind": args.kind, "seed": str(args.seed)})
    return doc, [], EXIT_OK, dumps(doc)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def add_common(parser, suppress: bool):
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        parser.add_argument("--field-order-cap", type=int, help="maximum cyclotomic field order (default 1000)",
                            **(kw or {"default": None}))
        parser.add_argument("--format", choices=("json", "table"), **(kw or {"default": "json"}))
        parser.add_argument("--no-timing", action="store_true", help="omit the timing field", **kw)
        parser.add_argument("--output", "-o", help="write the report to a file instead of stdout",
                            **(kw or {"default": None}))

    p = _Parser(prog="mcpvi", description="Exact middle convolution, braid orbits and trace coordinates.")
    add_common(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    add_common(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_parser = sub.add_parser

    def add_parser(name, **kw):
        return _add_parser(name, parents=[common], **kw)

    sub.add_parser = add_parser

    def add_input(sp):
        sp.add_argument("input", help="tuple document path, '-' for stdin, or catalog:NAME")

    def add_orbit_flags(sp):
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
        sp.add_argument("--fingerprint-depth", type=int, default=DEFAULT_DEPTH)

    sp = sub.add_parser("mc", help="middle convolution")
    add_input(sp)
    sp.add_argument("--lambda", dest="lam", help="lambda as a cyclotomic literal in z")
    sp.add_argument("--lambda-order", type=int, help="field order for the lambda literal (default: tuple's)")
    sp.add_argument("--lambda-search", action="store_true",
                    help="try each eigenvalue of M_r...M_1 and its inverse, keep the first with --target-dim")
    sp.add_argument("--target-dim", type=int, default=2)
    sp.add_argument("--check-dim", action="store_true")
    sp.add_argument("--jordan", action="store_true")
    sp.add_argument("--max-order", type=int, help="largest root-of-unity order in eigenvalue searches")
    sp.add_argument("--scalars", help="comma-separated rational scalars for eigenvalue candidates (default 1,-1)")

    sp = sub.add_parser("orbit", help="braid orbit enumeration")
    add_input(sp)
    sp.add_argument("--generators", default="full", help="'full', 'pure' or a JSON list of braid words")
    sp.add_argument("--no-verify", action="store_true", help="skip isomorphism checks on fingerprint collisions")
    add_orbit_flags(sp)

    sp = sub.add_parser("traces", help="SL_2 trace coordinates and Fricke residual")
    add_input(sp)

    sp = sub.add_parser("phi", help="reflection invariants, root choices and phi(t)")
    add_input(sp)
    sp.add_argument("--reading", choices=READINGS, default="symmetric")

    sp = sub.add_parser("verify", help="compare phi(t) with the rescaled middle convolution")
    sp.add_argument("input", help="catalog entry name, catalog:NAME, or a tuple document path")
    sp.add_argument("--braid", help="apply this braid word to the triple first, e.g. '1,-2'")
    sp.add_argument("--full-grid", action="store_true", help="report every grid point")
    sp.add_argument("--scalings", nargs="+", choices=SCALINGS)
    sp.add_argument("--readings", nargs="+", choices=READINGS)
    sp.add_argument("--orbit", action="store_true", help="also enumerate the braid orbit of the SL_2 image")
    add_orbit_flags(sp)

    sp = sub.add_parser("jordan", help="Jordan data of one matrix of a tuple")
    add_input(sp)
    sp.add_argument("--matrix", default="1", help="1..r or 'infinity' (M_r...M_1)")
    sp.add_argument("--candidates", help="comma-separated eigenvalue literals")
    sp.add_argument("--max-order", type=int)
    sp.add_argument("--scalars")

    sp = sub.add_parser("catalog", help="list or show catalog entries")
    sp.add_argument("action", choices=("list", "show"))
    sp.add_argument("name", nargs="?")

    sp = sub.add_parser("sample", help="emit a seeded random tuple document")
    sp.add_argument("--kind", choices=("sl2", "tuple", "reflection"), default="sl2")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--order", type=int, default=8)
    sp.add_argument("--length", type=int, default=3)
    sp.add_argument("--dimension", type=int, default=2)
    return p


COMMANDS = {"mc": cmd_mc, "orbit": cmd_orbit, "traces": cmd_traces, "phi": cmd_phi,
            "verify": cmd_verify, "jordan": cmd_jordan}


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str | None]:
    """Run a command; returns (exit code, report or error text, output path)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    old_cap = get_field_order_cap()
    start = time.perf_counter()
    digest = None
    try:
        if args.field_order_cap is not None:
            set_field_order_cap(args.field_order_cap)
        if args.command == "catalog":
            out, warnings, code, table = cmd_catalog(args)
        elif args.command == "sample":
            out, warnings, code, table = cmd_sample(args)
        else:
            source = args.input
            if args.command == "verify" and not source.startswith("catalog:") and not Path(source).exists():
                source = f"catalog:{source}"
            t, _meta, text = load_input(source)
            digest = _digest(args.command, text)
            out, warnings, code, table = COMMANDS[args.command](args, t)
    except (UsageError, DocumentError, CycloParseError) as exc:
        return EXIT_USAGE, f"error: {exc}\n", None
    except FieldOrderError as exc:
        return EXIT_INCONCLUSIVE, f"error: field order cap exceeded: {exc}\n", None
    except HypothesisError as exc:
        return EXIT_HYPOTHESIS, f"error: hypothesis rejected: {exc}\n", None
    except InconclusiveError as exc:
        return EXIT_INCONCLUSIVE, f"error: inconclusive: {exc}\n", None
    except (ValueError, IndexError) as exc:
        return EXIT_USAGE, f"error: {exc}\n", None
    finally:
        set_field_order_cap(old_cap)
    elapsed = time.perf_counter() - start
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.format == "table" and table is not None:
        return code, table, args.output
    if args.command == "sample":
        return code, dumps(out), args.output
    report = {
        "command": args.command,
        "inputs_digest": digest,
        "exit_code": code,
        "outputs": out,
        "warnings": warnings,
    }
    if not args.no_timing:
        report["timing"] = {"seconds": round(elapsed, 6)}
    return code, dumps(report), args.output


def main(argv: Sequence[str] | None = None) -> int:
    code, text, out_path = run(argv)
    if text.startswith("error:"):
        sys.stderr.write(text)
    elif out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
