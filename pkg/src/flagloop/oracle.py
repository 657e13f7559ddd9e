"""Additive structure of the A/I presentations of the evaluation E_infinity
pages, computed inside E_2 without using any differential.

A is the subring of E_2 generated by the listed classes, I the ideal of A
generated by the listed relations.  Per bidegree we form the lattice M_A
spanned by products of A-generators and M_I = (I-generators) * M_A, and read
off (M_A + M_I) / M_I.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .algebra import Poly
from .intlinalg import Lattice, Subquotient, kernel
from .presentations import flag_manifold, loop_fibre
from .spectral import FibrationSpec, SpectralSequence

SU3_JS = ["y1*y2", "y1*(g1 + g2) + y2*g2", "y2*(g1 + g2) + y1*g1", "y1*g1^2 + 2*y2*g1^2",
          "g1^2*g2", "g1^3", "g1^2 + g1*g2 + g2^2"]
SU3_D2 = "y2*(g1 + 2*g2) + y1*(2*g1 + g2)"

SP2_JS = ["y1*y2", "y1*g2 - y2*g1", "y2*g1^3", "y1*g1 + y2*g2", "g1^2 + g2^2", "g1^4", "g1^3*g2"]

# t3 enters with the convention 2*t3 = g1^3 (substituted before parsing)
G2_JS = ["y1*y2", "y1*(g1 + g2) + y2*g2", "t3*g1^2*(y1 - 2*y2)", "y1*(2*g1 + g2) + y2*(g1 + 2*g2)",
         "g1^2 + g1*g2 + g2^2", "2*t3 - g1^3", "t3", "g1^3", "g1^2*g2"]
G2_D2 = "y1*(2*g1 + g2) + y2*(g1 + 2*g2)"


@dataclass
class OracleData:
    group: str
    cutoff: int
    a_gens: List[Poly]
    i_gens: List[Poly]
    spec: FibrationSpec


@dataclass
class OracleTable:
    group: str
    cutoff: int
    cells: Dict[Tuple[int, int], Tuple[int, List[int]]]
    notes: List[str] = field(default_factory=list)

    def degree(self, n: int) -> Tuple[int, List[int]]:
        free, tors = 0, []
        for (p, q), (f, t) in self.cells.items():
            if p + q == n:
                free += f
                tors += t
        return free, sorted(tors)


def _eval_spec(group: str, cutoff: int, modulus=None) -> FibrationSpec:
    base = flag_manifold(group, cutoff, modulus=modulus)
    fibre = loop_fibre(group, cutoff, modulus=modulus)
    return FibrationSpec(f"{group}-quotient", base, fibre, cutoff)


def _family(ring, name: str, k: int, cutoff: int, degree: int) -> Optional[Poly]:
    if k == 0:
        return ring.one()
    if k * degree > cutoff:
        return None
    return ring.gen(f"{name}_{k}")


def annihilator_generators(spec: FibrationSpec, element: Poly, cutoff: int) -> List[Poly]:
    """Z-basis, degree by degree, of {Q in H*(base) ⊗ Λ(y) : element * Q = 0}."""
    ss = SpectralSequence(spec)
    e2 = ss.build_e2()
    nb = spec.base.ring.nvars
    ys = [spec.ring.lookup(y) for y in ("y1", "y2")]
    keep = set(range(nb)) | set(ys)
    shift = spec.poly_bidegree(ss.normal_form(element))
    out = []
    for (p, q), cell in sorted(e2.cells.items()):
        if q > 2:
            continue
        cols = [m for m in cell.basis if all(e == 0 or i in keep for i, e in enumerate(m))]
        tgt = (p + shift[0], q + shift[1])
        if not cols:
            continue
        if tgt not in e2.cells:  # product lands in a zero group
            out += [Poly(spec.ring, {m: 1}) for m in cols]
            continue
        images = [ss.coords(ss.normal_form(element * Poly(spec.ring, {m: 1})), tgt) for m in cols]
        n_t = len(images[0])
        A = [[images[j][i] for j in range(len(cols))] for i in range(n_t)]
        for v in Lattice.span(len(cols), kernel(A, n_t, len(cols), spec.modulus), spec.modulus).basis:
            out.append(Poly(spec.ring, {m: c for m, c in zip(cols, v) if c}))
    return [f for f in out if f.degree() and f.degree() > 0]


def presentation_data(group: str, cutoff: int, modulus=None, construction: bool = False) -> OracleData:
    """A- and I-generators instantiated up to `cutoff`.

    With construction=True the (x)_m * j generators are replaced by
    (x)_m * K with K the annihilator of the d2 image of the family generator.
    """
    spec = _eval_spec(group, cutoff, modulus)
    R = spec.ring
    N = cutoff
    subs = {"t3": -R.gen("t3")} if group == "g2" else {}
    P = lambda s: R.parse(s, subs)
    A: List[Poly] = []
    I: List[Poly] = []

    def fam(name, k, deg):
        return _family(R, name, k, N, deg)

    if construction:
        image = {"su3": SU3_D2, "sp2": "y1*g1 + y2*g2", "g2": G2_D2}[group]
        js = annihilator_generators(spec, P(image), N)
    else:
        js = [P(j) for j in {"su3": SU3_JS, "sp2": SP2_JS, "g2": G2_JS}[group]]

    if group == "su3":
        A += [P("g1"), P("g2"), P("y1"), P("y2")]
        A += [f for m in range(1, N // 4 + 1) if (f := fam("x4", m, 4)) is not None]
        for m in range(1, N // 2 + 1):
            x = fam("x2", m, 2)
            A += [x * j for j in js]
        for a in range(0, N // 2 + 1):
            x = fam("x2", a, 2)
            I += [x * P("g1^2 + g1*g2 + g2^2"), x * P("g1^3"), x * P(SU3_D2)]
    elif group == "sp2":
        for b in range(0, N // 6 + 1):
            z = fam("x6", b, 6)
            A += [z * P(s) for s in ("g1", "g2", "y1", "y2")]
            for m in range(1, N // 2 + 1):
                x = fam("x2", m, 2)
                A += [x * z * j for j in js]
            for a in range(0, N // 2 + 1):
                x = fam("x2", a, 2)
                I += [x * z * P("g1^2 + g2^2"), x * z * P("g1^4"), (x * z * P("y1*g1 + y2*g2")).scale(2)]
            I.append((z * P("y1*g1^3")).scale(4))
    elif group == "g2":
        for l in range(0, N // 10 + 1):
            z = fam("b10", l, 10)
            A += [z * P(s) for s in ("g1", "g2", "t3", "y1", "y2")]
            for m in range(1, N // 2 + 1):
                x = fam("a2", m, 2)
                A += [x * z * j for j in js]
            for h in range(0, N // 2 + 1):
                x = fam("a2", h, 2)
                I += [x * z * P("2*t3 - g1^3"), x * z * P("g1^2 + g1*g2 + g2^2"), x * z * P("t3^2")]
                # (a2)_h * y1*t3*g1^2 is not a cycle for h >= 1; the ideal already
                # holds the genuine multiples (a2)_h * K * 3*y1*t3*g1^2
                if h == 0 or not construction:
                    I.append((x * z * P("y1*t3*g1^2")).scale(3))
            for s in range(0, N // 2 + 1, 2):
                I.append(fam("a2", s, 2) * z * P(G2_D2))
                nxt = fam("a2", s + 1, 2)
                if nxt is not None:
                    I.append((nxt * z * P(G2_D2)).scale(2))
    else:
        raise ValueError(f"unknown group {group!r}")
    return OracleData(group, N, A, I, spec)


def quotient_oracle(group: str, cutoff: int, modulus=None, construction: bool = False) -> OracleTable:
    """Per-bidegree (free rank, torsion) of A/I up to total degree cutoff."""
    data = presentation_data(group, cutoff, modulus, construction)
    ss = SpectralSequence(data.spec)
    e2 = ss.build_e2()
    p_mod = data.spec.modulus
    spec = data.spec

    def nf_terms(gens):
        out = []
        for g in gens:
            g = ss.normal_form(g)
            if g:
                out.append((spec.poly_bidegree(g), g))
        return out

    A = nf_terms(data.a_gens)
    Igens = nf_terms(data.i_gens)
    dims = {bd: cell.dim for bd, cell in e2.cells.items()}
    MA: Dict[Tuple[int, int], Lattice] = {}
    one = (0, 0)
    MA[one] = Lattice.span(dims[one], [ss.coords(spec.ring.one(), one)], p_mod)
    order = sorted(dims, key=lambda bd: (sum(bd), bd))
    for bd in order:
        if bd == one:
            continue
        vecs = []
        for gbd, g in A:
            src = (bd[0] - gbd[0], bd[1] - gbd[1])
            if src in MA:
                for v in MA[src].basis:
                    vecs.append(ss.coords(ss.normal_form(g * _poly(spec, e2, src, v)), bd))
        MA[bd] = Lattice.span(dims[bd], vecs, p_mod)
    cells = {}
    for bd in order:
        vecs = []
        for gbd, g in Igens:
            src = (bd[0] - gbd[0], bd[1] - gbd[1])
            if src in MA:
                for v in MA[src].basis:
                    vecs.append(ss.coords(ss.normal_form(g * _poly(spec, e2, src, v)), bd))
        MI = Lattice.span(dims[bd], vecs, p_mod)
        cells[bd] = Subquotient(MA[bd] + MI, MI).structure()
    return OracleTable(group, cutoff, cells)


def _poly(spec, page, bd, vec) -> Poly:
    return Poly(spec.ring, {m: c for m, c in zip(page.cells[bd].basis, vec) if c})


def oracle_table(group: str, cutoff: int, modulus=None, construction: bool = False) -> List[Tuple[int, int, List[int]]]:
    t = quotient_oracle(group, cutoff, modulus, construction)
    return [(n,) + t.degree(n) for n in range(cutoff + 1)]
