"""Command-line entry point: `flagloop gb|ss|verify|export`.

Exit codes: 0 success, 2 parse or usage error, 3 math error,
4 d∘d != 0, 5 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .algebra import AmbientMismatch, Generator, Poly, Ring, is_prime
from .groebner import MonomialOrder, buchberger, ideal_intersect
from .parse import ParseError, parse_poly, split_list
from .spectral import DifferentialSquareError, SpectralError

EXIT_OK, EXIT_PARSE, EXIT_MATH, EXIT_DD, EXIT_VERIFY = 0, 2, 3, 4, 5
DEFAULT_CUTOFF = 12


@dataclass
class RunConfig:
    command: str
    modulus: Optional[int] = None
    cutoff: int = DEFAULT_CUTOFF
    bundle: Optional[str] = None
    config: Optional[str] = None
    fmt: str = "text"
    output: Optional[str] = None
    verbose: int = 0

    def __post_init__(self):
        if self.modulus is not None and not is_prime(self.modulus):
            raise ParseError(f"modulus {self.modulus} is not prime")
        if self.cutoff < 2:
            raise ParseError("cutoff must be at least 2")


def default_cutoff() -> int:
    env = os.environ.get("FLAGLOOP_CUTOFF")
    if env is None:
        return DEFAULT_CUTOFF
    try:
        return int(env)
    except ValueError:
        raise ParseError(f"FLAGLOOP_CUTOFF must be an integer, got {env!r}") from None


# gb -------------------------------------------------------------------------

@dataclass
class IdealInput:
    ring: Ring
    order: MonomialOrder
    generators: List[Poly]


def parse_vars(text: str, line: int = 1) -> List[Tuple[str, int]]:
    """`g1, g2` or `g1:2, y1:1`; degree defaults to 2 (even, commuting)."""
    out = []
    for item in [s.strip() for s in text.split(",") if s.strip()]:
        name, _, deg = item.partition(":")
        if deg and not deg.strip().isdigit():
            raise ParseError(f"bad variable {item!r} (expected name or name:degree)", line, 1)
        out.append((name.strip(), int(deg) if deg else 2))
    if not out:
        raise ParseError("no variables given", line, 1)
    return out


def parse_order(text: Optional[str], names: Sequence[str]) -> MonomialOrder:
    """`lex:g2>g1`, `grevlex`, `deglex:y2>y1`."""
    if not text:
        return MonomialOrder("grevlex", tuple(names))
    kind, _, prio = text.partition(":")
    prio_names = tuple(p.strip() for p in prio.split(">") if p.strip())
    for n in prio_names:
        if n not in names:
            raise ParseError(f"order mentions unknown variable {n!r}")
    try:
        return MonomialOrder(kind.strip(), prio_names or tuple(names))
    except ValueError as e:
        raise ParseError(str(e)) from None


def read_ideal_file(path: str, modulus: Optional[int] = None) -> IdealInput:
    """Ideal file: `vars = ...`, optional `order = ...` and `modulus = p`, then
    generators one or more per line (comma separated); `#` starts a comment."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    header, body = {}, []
    for i, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0]
        if not text.strip():
            continue
        key, eq, val = text.partition("=")
        if eq and key.strip() in ("vars", "order", "modulus"):
            header[key.strip()] = (val.strip(), i)
        else:
            body.append((text, i))
    if "vars" not in header:
        raise ParseError(f"{path}: missing `vars = ...` line", 1, 1)
    names = parse_vars(*header["vars"])
    if "modulus" in header and modulus is None:
        val, i = header["modulus"]
        if not val.isdigit():
            raise ParseError(f"{path}: modulus must be an integer", i, 1)
        modulus = int(val)
    ring = Ring([Generator(n, d) for n, d in names], modulus)
    order = parse_order(header.get("order", (None,))[0], ring.names)
    gens = []
    for text, i in body:
        col = 1
        for item in split_list(text):
            off = text.find(item, col - 1)
            try:
                gens.append(parse_poly(item, ring, None, i))
            except ParseError as e:
                raise ParseError(f"{path}: {e.msg}", i, off + e.col) from None
            col = off + len(item) + 1
    if not gens:
        raise ParseError(f"{path}: no generators", len(lines) or 1, 1)
    return IdealInput(ring, order, gens)


def _inline_ideal(args) -> IdealInput:
    if not args.vars:
        raise ParseError("--ideal needs --vars")
    ring = Ring([Generator(n, d) for n, d in parse_vars(args.vars)], args.mod)
    order = parse_order(args.order, ring.names)
    gens = [parse_poly(t, ring) for t in split_list(args.ideal)]
    if not gens:
        raise ParseError("empty ideal")
    return IdealInput(ring, order, gens)


def _merge(a: IdealInput, b: IdealInput, order_text: Optional[str]) -> Tuple[Ring, MonomialOrder, list, list]:
    gens = list(a.ring.generators)
    for g in b.ring.generators:
        if g.name in a.ring.index:
            if a.ring.generators[a.ring.index[g.name]].degree != g.degree:
                raise ParseError(f"variable {g.name} has different degrees in the two files")
        else:
            gens.append(g)
    if a.ring.modulus != b.ring.modulus:
        raise ParseError("the two files use different coefficient rings")
    ring = Ring(gens, a.ring.modulus)
    order = parse_order(order_text, ring.names) if order_text else \
        MonomialOrder(a.order.kind, a.order.priority + tuple(n for n in b.order.priority if n not in a.order.priority))
    return ring, order, [f.change_ring(ring) for f in a.generators], [f.change_ring(ring) for f in b.generators]


def cmd_gb(args, out) -> int:
    if args.intersect:
        A = read_ideal_file(args.intersect[0], args.mod)
        B = read_ideal_file(args.intersect[1], args.mod)
        ring, order, fa, fb = _merge(A, B, args.order)
        gb = ideal_intersect(fa, fb, order, ring=ring)
    else:
        if args.file:
            I = read_ideal_file(args.file, args.mod)
            if args.order:
                I.order = parse_order(args.order, I.ring.names)
        elif args.ideal is not None:
            I = _inline_ideal(args)
        else:
            raise ParseError("give an ideal file, --ideal or --intersect")
        ring = I.ring
        gb = buchberger(I.generators, I.order, ring=ring)
    if args.reduce is not None:
        out.write(f"{gb.reduce(parse_poly(args.reduce, ring))}\n")
    elif args.member is not None:
        out.write(f"{'true' if gb.contains(parse_poly(args.member, ring)) else 'false'}\n")
    else:
        for g in gb:
            out.write(f"{g}\n")
    return EXIT_OK


# ss -------------------------------------------------------------------------

def _load_spec(args):
    from .config import load_spec
    from .flagdata import load_bundle
    if args.bundle and args.config:
        raise ParseError("give either --bundle or --config, not both")
    if args.bundle:
        spec = load_bundle(args.bundle, args.cutoff).fibration
    elif args.config:
        spec = load_spec(args.config, args.cutoff)
    else:
        raise ParseError("give --bundle or --config")
    if args.mod is not None:
        spec = spec.with_modulus(args.mod)
    for i in args.flip or ():
        if not 0 <= i < len(spec.differentials):
            raise ParseError(f"--flip {i}: spec has {len(spec.differentials)} generator assignments")
        spec = spec.flipped(i)
    return spec


def _torsion_str(t: List[int]) -> str:
    return " ".join(f"Z/{d}" for d in t) if t else "-"


def _page_dump(pages) -> List[dict]:
    out = []
    for page in pages:
        cells = []
        for bd in sorted(page.cells):
            f, t = page.structure(bd)
            if f or t:
                cells.append({"p": bd[0], "q": bd[1], "free_rank": f, "torsion": t})
        out.append({"page": page.r, "cells": cells})
    return out


def format_table(table, fmt: str, header: Optional[str] = None, pages=None) -> str:
    if fmt == "json":
        d = table.to_dict()
        if pages is not None:
            d["page_dumps"] = _page_dump(pages)
        if header:
            d["generated"] = header
        return json.dumps(d, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "free_rank", "torsion", "stable"])
        for n, f, t in table.rows(unstable=True):
            w.writerow([n, f, ";".join(map(str, t)), "yes" if n <= table.horizon else "no"])
        return buf.getvalue()
    lines = []
    if header:
        lines.append(f"# {header}")
    coeffs = "Z" if table.modulus is None else f"F{table.modulus}"
    lines.append(f"# {table.name}  cutoff {table.cutoff}  coefficients {coeffs}  "
                 f"pages {','.join(map(str, table.pages)) or '-'}  trusted through degree {table.horizon}")
    rows = [(str(n), str(f), _torsion_str(t), "" if n <= table.horizon else "unstable")
            for n, f, t in table.rows(unstable=True)]
    head = ("degree", "free", "torsion", "")
    widths = [max(len(r[i]) for r in rows + [head]) for i in range(4)]
    for r in [head] + rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    if pages is not None:
        for d in _page_dump(pages):
            lines.append("")
            lines.append(f"E_{d['page']}")
            for c in d["cells"]:
                lines.append(f"  ({c['p']},{c['q']})  free {c['free_rank']}  torsion {_torsion_str(c['torsion'])}")
    return "\n".join(lines) + "\n"


def _header(args) -> Optional[str]:
    if args.no_header:
        return None
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return f"flagloop {__version__} {stamp}"


def cmd_ss(args, out) -> int:
    from .spectral import run
    spec = _load_spec(args)
    table, pages = run(spec, return_pages=True, jobs=args.jobs)
    out.write(format_table(table, args.format, _header(args), pages if args.pages else None))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .verify import verify_bundle
    rep = verify_bundle(args.bundle, args.cutoff)
    h = _header(args)
    if h:
        out.write(f"# {h}\n")
    out.write(f"# verify {rep.bundle} cutoff {rep.cutoff}\n")
    for line in rep.lines():
        out.write(line + "\n")
    fails = sum(c.status == "FAIL" for c in rep.checks)
    out.write(f"{'OK' if rep.ok else 'FAILED'}: {len(rep.checks)} checks, {fails} failed\n")
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_export(args, out) -> int:
    from .config import dumps_spec
    out.write(dumps_spec(_load_spec(args)))
    return EXIT_OK


# driver -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flagloop", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"flagloop {__version__}")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gb", help="Groebner bases, normal forms, membership, intersections")
    g.add_argument("file", nargs="?", help="ideal file (vars/order lines, then generators)")
    g.add_argument("--vars", help="comma-separated variables, optionally name:degree")
    g.add_argument("--order", help="lex|deglex|grevlex[:x>y>...]")
    g.add_argument("--ideal", help="comma-separated generators")
    g.add_argument("--mod", type=int, help="work over F_p")
    g.add_argument("--reduce", metavar="POLY", help="print the normal form of POLY")
    g.add_argument("--member", metavar="POLY", help="print whether POLY lies in the ideal")
    g.add_argument("--intersect", nargs=2, metavar=("A", "B"), help="intersect two ideal files")

    def common(p):
        p.add_argument("--bundle", help="named bundle, e.g. su3-eval")
        p.add_argument("--config", help="fibration config file")
        p.add_argument("--cutoff", type=int, default=None, help="total degree cutoff (default $FLAGLOOP_CUTOFF or 12)")
        p.add_argument("--mod", type=int, help="coefficients F_p")
        p.add_argument("--flip", type=int, action="append", help="negate generator assignment i (repeatable)")
        p.add_argument("--output", "-o", help="write to a file instead of stdout")
        p.add_argument("--no-header", action="store_true", help="omit the timestamp header")

    s = sub.add_parser("ss", help="run a spectral sequence and print E_infinity")
    common(s)
    s.add_argument("--format", choices=("text", "json", "csv"), default="text")
    s.add_argument("--pages", action="store_true", help="also dump every page")
    s.add_argument("--jobs", type=int, default=1, help="worker processes for per-bidegree homology")

    v = sub.add_parser("verify", help="check identities and oracle agreement for a bundle")
    v.add_argument("--bundle", required=True)
    v.add_argument("--cutoff", type=int, default=None)
    v.add_argument("--output", "-o")
    v.add_argument("--no-header", action="store_true")

    e = sub.add_parser("export", help="print a bundle or config as a fibration config file")
    common(e)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    err = sys.stderr
    try:
        # a config file carries its own cutoff
        if getattr(args, "cutoff", 0) is None and not getattr(args, "config", None):
            args.cutoff = default_cutoff()
        RunConfig(args.command, getattr(args, "mod", None), getattr(args, "cutoff", None) or DEFAULT_CUTOFF,
                  getattr(args, "bundle", None), getattr(args, "config", None),
                  getattr(args, "format", "text"), getattr(args, "output", None), args.verbose)
        if getattr(args, "jobs", 1) < 1:
            raise ParseError("--jobs must be at least 1")
        out = io.StringIO()
        code = {"gb": cmd_gb, "ss": cmd_ss, "verify": cmd_verify, "export": cmd_export}[args.command](args, out)
        if getattr(args, "output", None):
            with open(args.output, "w") as fh:
                fh.write(out.getvalue())
        else:
            sys.stdout.write(out.getvalue())
        return code
    except ParseError as e:
        err.write(f"flagloop: parse error: {e}\n")
        return EXIT_PARSE
    except KeyError as e:
        err.write(f"flagloop: {e.args[0] if e.args else e}\n")
        return EXIT_PARSE
    except OSError as e:
        err.write(f"flagloop: {e}\n")
        return EXIT_PARSE
    except DifferentialSquareError as e:
        err.write(f"flagloop: d∘d != 0: {e}\n")
        return EXIT_DD
    except (SpectralError, ArithmeticError, AmbientMismatch, ValueError) as e:
        err.write(f"flagloop: error: {e}\n")
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
