"""Named ring presentations: flag manifolds, their squares, and the loop-space
fibres, with divided-power families truncated at the cutoff."""
from __future__ import annotations

from typing import Dict, Optional, Sequence

from .algebra import (Family, Generator, Poly, Presentation, Ring, divided_power_coefficient,
                      structure_constant, tensor)

GROUPS = ("su3", "sp2", "g2")

# loop-space families of Omega G: (name, degree of (x)_1, kind)
LOOP_FAMILIES = {
    "su3": (("x2", 2, "gamma"), ("x4", 4, "gamma")),
    "sp2": (("x2", 2, "gamma"), ("x6", 6, "gamma")),
    "g2": (("a2", 2, "g2loop"), ("b10", 10, "gamma")),
}


def flag_manifold(group: str, cutoff: int, g=("g1", "g2"), t: str = "t3",
                  modulus: Optional[int] = None) -> Presentation:
    """H*(G/T^2; Z) on two degree-2 classes (plus t3 for G2)."""
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    gens = [Generator(g[0], 2), Generator(g[1], 2)]
    if group == "g2":
        if cutoff < 6:
            raise ValueError("G2/T needs cutoff >= 6 for its degree-6 generator")
        gens.append(Generator(t, 6))
    ring = Ring(gens, modulus)
    a, b = ring.gen(g[0]), ring.gen(g[1])
    s2 = a * a + a * b + b * b
    s3 = a * a * b + a * b * b
    if group == "su3":
        rels = [s2, s3]
    elif group == "sp2":
        # elementary symmetric polynomials in g1^2, g2^2
        rels = [a * a + b * b, a * a * b * b]
    elif group == "g2":
        tt = ring.gen(t)
        rels = [s2, s3 - 2 * tt, tt * tt]
    else:
        raise ValueError(f"unknown group {group!r}")
    return Presentation(f"H*({group}/T)", ring, rels, cutoff)


def family_relations(ring: Ring, fam: Family, top: int) -> list:
    x = lambda k: ring.gen(f"{fam.name}_{k}")
    rels = []
    for i in range(1, top + 1):
        for j in range(i, top + 1 - i):
            rels.append(x(i) * x(j) - structure_constant(fam.kind, i, j) * x(i + j))
    for k in range(2, top + 1):
        rels.append(x(1) ** k - divided_power_coefficient(fam.kind, k) * x(k))
    return rels


def loop_fibre(group: str, cutoff: int, ys=("y1", "y2"), modulus: Optional[int] = None) -> Presentation:
    """H*(Omega(G/T)) = H*(Omega G) ⊗ Λ(y1, y2), families truncated at cutoff."""
    return build_presentation(f"H*(Omega {group}/T)", [(y, 1) for y in ys], LOOP_FAMILIES[group], (),
                              cutoff, modulus)


def build_presentation(name: str, generators: Sequence, families: Sequence = (), relations: Sequence[str] = (),
                       cutoff: int = 12, modulus: Optional[int] = None) -> Presentation:
    """Presentation from (name, degree) generators, (name, degree, kind)
    families truncated at cutoff, and relation strings."""
    from .parse import parse_poly
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    fams = [Family(n, d, k) for n, d, k in families]
    gens = [Generator(n, d) for n, d in generators]
    aliases = {}
    for f in fams:
        members = f.members(cutoff)
        gens += members
        if members:
            aliases[f.name] = members[0].name
    ring = Ring(gens, modulus, aliases)
    rels = []
    for i, text in enumerate(relations):
        rels.append(parse_poly(text, ring) if isinstance(text, str) else text)
    for f in fams:
        rels += family_relations(ring, f, cutoff // f.degree)
    return Presentation(name, ring, rels, cutoff, {f.name: f for f in fams})


def flag_square(group: str, cutoff: int, modulus: Optional[int] = None) -> Presentation:
    """H*(G/T x G/T) on al_i (first factor) and be_i (second factor)."""
    A = flag_manifold(group, cutoff, ("al1", "al2"), "l3", modulus)
    B = flag_manifold(group, cutoff, ("be1", "be2"), "s3", modulus)
    return tensor(f"H*({group}/T x {group}/T)", A, B, cutoff)


NAMED = {
    "su3/t": lambda N, p: flag_manifold("su3", N, modulus=p),
    "sp2/t": lambda N, p: flag_manifold("sp2", N, modulus=p),
    "g2/t": lambda N, p: flag_manifold("g2", N, modulus=p),
    "omega-su3/t": lambda N, p: loop_fibre("su3", N, modulus=p),
    "omega-sp2/t": lambda N, p: loop_fibre("sp2", N, modulus=p),
    "omega-g2/t": lambda N, p: loop_fibre("g2", N, modulus=p),
    "su3/t^2": lambda N, p: flag_square("su3", N, p),
    "sp2/t^2": lambda N, p: flag_square("sp2", N, p),
    "g2/t^2": lambda N, p: flag_square("g2", N, p),
}


def instantiate_presentation(name: str, cutoff: int, modulus: Optional[int] = None) -> Presentation:
    key = name.lower().replace(" ", "")
    if key not in NAMED:
        raise KeyError(f"unknown ring {name!r}; known: {', '.join(NAMED)}")
    return NAMED[key](cutoff, modulus)
