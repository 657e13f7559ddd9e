"""INI-style files for fibrations: generators, relations, substitutions and
differentials as plain ASCII expressions.

    [fibration]
    name = su3-eval
    cutoff = 12
    coefficients = Z            ; or F3, F2, ...

    [base]
    generators = g1:2, g2:2
    relations = g1^2 + g1*g2 + g2^2, g1^2*g2 + g1*g2^2

    [fibre]
    generators = y1:1, y2:1
    families = x2:2:gamma, x4:4:gamma
    relations =

    [substitutions]             ; optional, applied in order
    u1 = be1

    [differentials]
    d2(x2) = y1*(2*g1 + g2) + y2*(g1 + 2*g2)
    d4(a2*zeta) = theta         ; a non-generator source is a class assignment

Family relations ((x)_i (x)_j = c (x)_{i+j}) are generated on load.
"""
from __future__ import annotations

import configparser
import re
from typing import Dict, List, Optional, Tuple

from .algebra import Poly
from .parse import ParseError, parse_poly, split_list
from .presentations import build_presentation, family_relations
from .spectral import ClassAssignment, DifferentialAssignment, FibrationSpec

_DIFF_KEY = re.compile(r"^d(\d+)\((.+)\)$")


def _parser() -> configparser.ConfigParser:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None, delimiters=("=",))
    cp.optionxform = str
    return cp


def _positions(text: str) -> Dict[Tuple[str, str], Tuple[int, int]]:
    """(section, key) -> (line, column where the value starts)."""
    out, section = {}, None
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
        elif section and "=" in line and not line.startswith((";", "#")):
            eq = raw.index("=")
            rest = raw[eq + 1:]
            out[(section, raw[:eq].strip())] = (i, eq + 2 + len(rest) - len(rest.lstrip()))
    return out


def _parse_at(text: str, ring, subs, pos: Tuple[int, int]) -> Poly:
    try:
        return parse_poly(text, ring, subs, pos[0])
    except ParseError as e:
        raise ParseError(e.msg, pos[0], e.col + pos[1] - 1) from None


def parse_modulus(text: str) -> Optional[int]:
    t = text.strip()
    if t in ("", "Z", "ZZ"):
        return None
    if t[0] in "Ff" and t[1:].isdigit():
        return int(t[1:])
    raise ValueError(f"coefficients must be Z or Fp, got {text!r}")


def _generators(text: str, where: str, line: int) -> List[Tuple[str, int]]:
    out = []
    for item in [s.strip() for s in text.split(",") if s.strip()]:
        parts = item.split(":")
        if len(parts) != 2 or not parts[1].strip().isdigit():
            raise ParseError(f"bad generator {item!r} in [{where}] (expected name:degree)", line, 1)
        out.append((parts[0].strip(), int(parts[1])))
    return out


def _families(text: str, line: int) -> List[Tuple[str, int, str]]:
    out = []
    for item in [s.strip() for s in text.split(",") if s.strip()]:
        parts = [p.strip() for p in item.split(":")]
        if len(parts) == 2:
            parts.append("gamma")
        if len(parts) != 3 or not parts[1].isdigit() or parts[2] not in ("gamma", "g2loop"):
            raise ParseError(f"bad family {item!r} (expected name:degree[:gamma|g2loop])", line, 1)
        out.append((parts[0], int(parts[1]), parts[2]))
    return out


def _items(value: str, pos: Tuple[int, int]):
    """Comma-separated polynomials with the file position of each item."""
    col = pos[1]
    for item in split_list(value):
        off = value.find(item)
        yield item, (pos[0], col + off)
        col += off + len(item)
        value = value[off + len(item):]


def loads_spec(text: str, cutoff: Optional[int] = None, modulus: Optional[int] = None) -> FibrationSpec:
    cp = _parser()
    try:
        cp.read_string(text)
    except configparser.Error as e:
        raise ParseError(str(e).splitlines()[0], getattr(e, "lineno", 1) or 1, 1) from None
    where = _positions(text)
    at = lambda sec, key: where.get((sec, key), (1, 1))
    for sec in ("fibration", "base", "fibre"):
        if not cp.has_section(sec):
            raise ParseError(f"missing section [{sec}]", 1, 1)
    fib = cp["fibration"]
    try:
        N = cutoff if cutoff is not None else int(fib.get("cutoff", "12"))
    except ValueError:
        raise ParseError(f"cutoff must be an integer, got {fib.get('cutoff')!r}", *at("fibration", "cutoff")) from None
    try:
        p = modulus if modulus is not None else parse_modulus(fib.get("coefficients", "Z"))
    except ValueError as e:
        raise ParseError(str(e), *at("fibration", "coefficients")) from None
    pres = {}
    for sec in ("base", "fibre"):
        s = cp[sec]
        gens = _generators(s.get("generators", ""), sec, at(sec, "generators")[0])
        fams = _families(s.get("families", ""), at(sec, "families")[0])
        if not gens and not fams:
            raise ParseError(f"[{sec}] declares no generators", *at(sec, "generators"))
        P = build_presentation(sec, gens, fams, (), N, p)
        rels = [_parse_at(t, P.ring, None, pos) for t, pos in _items(s.get("relations", ""), at(sec, "relations"))]
        P.relations = rels + P.relations
        pres[sec] = P
    spec = FibrationSpec(fib.get("name", "custom"), pres["base"], pres["fibre"], N)
    ring = spec.ring
    subs: Dict[str, Poly] = {}
    if cp.has_section("substitutions"):
        for key, val in cp["substitutions"].items():
            subs[key] = _parse_at(val, ring, subs, at("substitutions", key))
    if cp.has_section("differentials"):
        for key, val in cp["differentials"].items():
            pos = at("differentials", key)
            m = _DIFF_KEY.match(key.replace(" ", ""))
            if not m:
                raise ParseError(f"differential key {key!r} must look like d<r>(<source>)", pos[0], 1)
            r, src = int(m.group(1)), m.group(2)
            value = _parse_at(val, ring, subs, pos)
            if src in ring.names or src in ring.aliases:
                spec.differentials.append(DifferentialAssignment(r, src, value))
            else:
                source = _parse_at(src, ring, subs, (pos[0], key.index("(") + 2))
                spec.class_differentials.append(ClassAssignment(r, source, value))
    return spec


def load_spec(path: str, cutoff: Optional[int] = None, modulus: Optional[int] = None) -> FibrationSpec:
    with open(path) as fh:
        return loads_spec(fh.read(), cutoff, modulus)


def _non_family_relations(P) -> List[Poly]:
    generated = set()
    for f in P.families.values():
        generated.update(family_relations(P.ring, f, P.cutoff // f.degree))
    return [r for r in P.relations if r not in generated]


def _gen_list(P) -> str:
    return ", ".join(f"{g.name}:{g.degree}" for g in P.ring.generators if g.family is None)


def dumps_spec(spec: FibrationSpec) -> str:
    lines = ["[fibration]", f"name = {spec.name}", f"cutoff = {spec.cutoff}",
             f"coefficients = {'Z' if spec.modulus is None else 'F%d' % spec.modulus}", ""]
    for sec, P in (("base", spec.base), ("fibre", spec.fibre)):
        lines.append(f"[{sec}]")
        lines.append(f"generators = {_gen_list(P)}")
        if P.families:
            lines.append("families = " + ", ".join(f"{f.name}:{f.degree}:{f.kind}" for f in P.families.values()))
        lines.append("relations = " + ", ".join(str(r) for r in _non_family_relations(P)))
        lines.append("")
    lines.append("[differentials]")
    for a in spec.differentials:
        lines.append(f"d{a.page}({a.source}) = {a.value.scale(a.sign)}")
    for a in spec.class_differentials:
        lines.append(f"d{a.page}({a.source}) = {a.value.scale(a.sign)}")
    return "\n".join(lines) + "\n"
