"""Encoded bundles: the diagonal and evaluation fibrations of SU(3)/T, Sp(2)/T
and G2/T with their differentials and cycle identities.

Diagonal bundles use the basis u_i = be_i, v_i = al_i - be_i of the base
H*(G/T x G/T); for G2 also theta = l3 - s3 and psi = l3.  Evaluation bundles
have base H*(G/T) on g1, g2 (and t3 for G2) and fibre y1, y2 plus the loop
families.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .algebra import Poly
from .presentations import flag_manifold, flag_square, loop_fibre
from .spectral import ClassAssignment, DifferentialAssignment, FibrationSpec

BUNDLE_IDS = ("su3-diagonal", "sp2-diagonal", "g2-diagonal", "su3-eval", "sp2-eval", "g2-eval")

# d2(a2) for G2/T x G2/T.  The form y1(u2+v2+2u1)+y2(u1+v1+2u2) is not a
# d2-cycle; this is the SU(3) image, which agrees with it once v = 0.
ZETA = "y1*v1 + y2*v2 + y1*v2 + 2*y1*u1 + 2*y2*u2 + y1*u2 + y2*u1"
ZETA_UNCORRECTED = "y1*(u2 + v2 + 2*u1) + y2*(u1 + v1 + 2*u2)"
# The only integer d2-cycle spanned by y1*{theta,psi}*{v1^2, v1*u1, u1^2} is
# y1*(theta - 2*psi)*(v1^2 + 3*v1*u1 + 3*u1^2); the combination below is not.
THETA_PSI_UNCORRECTED = ("y1*(theta*v1^2 + 3*theta*v1*u1 + 3*theta*u1^2 + 2*psi*v1^2"
                         " + 3*psi*v1*u1 + 3*psi*u1^2)")

# (page, source, value); sources that are not generators become class assignments
DIFFERENTIALS = {
    "su3-diagonal": [
        (2, "y1", "v1"),
        (2, "y2", "v2"),
        (2, "x2", "y1*v1 + y2*v2 + y1*v2 + 2*y1*u1 + 2*y2*u2 + y1*u2 + y2*u1"),
        (4, "x4", "y1*v1*v2 + y2*v2*v1 + 2*y1*u1*v2 + 2*y2*u2*v1 + y1*v1*u2 + y2*v2*u1"
                  " + 2*y1*u1*u2 + 2*y2*u2*u1 + y1*u2^2 + y2*u1^2"),
    ],
    "sp2-diagonal": [
        (2, "y1", "v1"),
        (2, "y2", "v2"),
        (2, "x2", "y1*v1 + y2*v2 + 2*y1*u1 + 2*y2*u2"),
        (6, "x6", "y1*v1^3 + 4*y1*v1^2*u1 + 6*y1*v1*u1^2 + 4*y1*u1^3"),
    ],
    "g2-diagonal": [
        (2, "y1", "v1"),
        (2, "y2", "v2"),
        (2, "a2", "zeta"),
        (4, "a2*zeta", "theta"),
        (10, "b10", "y1*(theta - 2*psi)*(v1^2 + 3*v1*u1 + 3*u1^2)"),
    ],
    "su3-eval": [
        (2, "x2", "y1*(2*g1 + g2) + y2*(g1 + 2*g2)"),
        (4, "x4", "y1*(g1^2 + 2*g1*g2) + y2*(g2^2 + 2*g1*g2)"),
    ],
    "sp2-eval": [
        (2, "x2", "2*y1*g1 + 2*y2*g2"),
        (6, "x6", "4*y1*g1^3"),
    ],
    "g2-eval": [
        (2, "a2", "y1*(2*g1 + g2) + y2*(g1 + 2*g2)"),
        (10, "b10", "3*y1*t3*g1^2"),
    ],
}


@dataclass(frozen=True)
class Identity:
    """d2(expression) must reduce to 0 (kind "cycle"), must not (kind
    "noncycle", forms kept for comparison), or is compared with `expected`
    modulo the base relations (kind "expansion", informational only).
    `raw` is an optional expected value of d2 before reducing by relations."""

    label: str
    expression: str
    kind: str = "cycle"
    expected: Optional[str] = None
    raw: Optional[str] = None


IDENTITIES = {
    "su3-diagonal": [
        Identity("d2(x2)-image", DIFFERENTIALS["su3-diagonal"][2][2],
                 raw="al1^2 + al2^2 + al1*al2 - be1^2 - be2^2 - be1*be2"),
        Identity("d4(x4)-image", DIFFERENTIALS["su3-diagonal"][3][2]),
    ],
    "sp2-diagonal": [
        Identity("d2(x2)-image", DIFFERENTIALS["sp2-diagonal"][2][2],
                 raw="al1^2 + al2^2 - be1^2 - be2^2"),
        Identity("d6(x6)-image", DIFFERENTIALS["sp2-diagonal"][3][2], raw="al1^4 - be1^4"),
    ],
    "g2-diagonal": [
        Identity("zeta-cycle", ZETA),
        Identity("theta-psi", DIFFERENTIALS["g2-diagonal"][4][2]),
        Identity("zeta-uncorrected", ZETA_UNCORRECTED, "noncycle"),
        Identity("theta-psi-uncorrected", THETA_PSI_UNCORRECTED, "noncycle"),
        Identity("y1*theta*v1^2", "y1*theta*v1^2", "expansion",
                 "2*s3^2 - 4*s3*l3 - 3*s3*al2^2*be1 + 3*al1^2*l3*be1 + 3*s3*al1*be1^2"
                 " - 3*al1*l3*be1^2 + 2*l3^2"),
        Identity("y1*theta*v1*u1", "y1*theta*v1*u1", "expansion",
                 "s3*al1^2*be1 - 2*s3*al1*be1^2 - al1^2*l3*be1 + 2*al1*l3*be1^2 + 2*s3*l3 - 2*l3^2"),
        Identity("y1*theta*u1^2", "y1*theta*u1^2", "expansion",
                 "s3*al1*be1^2 - 2*s3*l3 - al1*l3*be1^2 + 2*l3^2"),
        Identity("y1*psi*v1^2", "y1*psi*v1^2", "expansion",
                 "2*s3*l3 - 3*al1^2*l3*be1 + 3*al1*l3*be1^2 - 2*l3^2"),
        Identity("y1*psi*v1*u1", "y1*psi*v1*u1", "expansion",
                 "al1^2*l3*be1 - 2*al1*l3*be1^2 + 2*l3^2"),
        Identity("y1*psi*u1^2", "y1*psi*u1^2", "expansion", "al1*l3*be1^2 - 2*l3^2"),
    ],
    "su3-eval": [],
    "sp2-eval": [],
    "g2-eval": [],
}


@dataclass
class NamedBundle:
    id: str
    group: str
    kind: str  # "diagonal" | "eval"
    fibration: FibrationSpec
    substitutions: Dict[str, Poly] = field(default_factory=dict)
    identities: List[Identity] = field(default_factory=list)

    def parse(self, text: str) -> Poly:
        return self.fibration.parse(text, self.substitutions)

    def oracle(self):
        if self.kind != "eval":
            return None
        from .oracle import quotient_oracle
        return quotient_oracle(self.group, self.fibration.cutoff, self.fibration.modulus)


def substitutions(group: str, ring) -> Dict[str, Poly]:
    g = ring.gens()
    subs = {"u1": g["be1"], "u2": g["be2"], "v1": g["al1"] - g["be1"], "v2": g["al2"] - g["be2"]}
    if group == "g2":
        subs["theta"] = g["l3"] - g["s3"]
        subs["psi"] = g["l3"]
        subs["zeta"] = ring.parse(ZETA, subs)
    return subs


def load_bundle(bundle_id: str, cutoff: int, modulus: Optional[int] = None) -> NamedBundle:
    if bundle_id not in BUNDLE_IDS:
        raise KeyError(f"unknown bundle {bundle_id!r}; known: {', '.join(BUNDLE_IDS)}")
    group, kind = bundle_id.split("-")
    if kind == "diagonal":
        base = flag_square(group, cutoff, modulus)
    else:
        base = flag_manifold(group, cutoff, modulus=modulus)
    fibre = loop_fibre(group, cutoff, modulus=modulus)
    spec = FibrationSpec(bundle_id, base, fibre, cutoff)
    subs = substitutions(group, spec.ring) if kind == "diagonal" else {}
    for page, source, value in DIFFERENTIALS[bundle_id]:
        if not _fits(spec, subs, source, value):
            # a generator above the cutoff is not in the truncated ring
            continue
        val = spec.parse(value, subs)
        if source in spec.ring.names or source in spec.ring.aliases:
            spec.differentials.append(DifferentialAssignment(page, source, val))
        else:
            spec.class_differentials.append(ClassAssignment(page, spec.parse(source, subs), val))
    return NamedBundle(bundle_id, group, kind, spec, subs, list(IDENTITIES[bundle_id]))


def _fits(spec: FibrationSpec, subs, *texts: str) -> bool:
    known = set(spec.ring.names) | set(spec.ring.aliases) | set(subs)
    return all(name in known for t in texts for name in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", t))


def list_identities(bundle_id: str) -> List[Identity]:
    if bundle_id not in IDENTITIES:
        raise KeyError(f"unknown bundle {bundle_id!r}")
    return list(IDENTITIES[bundle_id])
