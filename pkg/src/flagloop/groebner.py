"""Strong Groebner bases over Z (and ordinary ones over F_p).

Reduction uses Euclidean remainders: a term c*m whose monomial is divisible by
a leading monomial with leading coefficient a > 0 is replaced by
(c mod a)*m, so normal forms against a strong basis are unique.  Completion
closes under S-polynomials, GCD-polynomials and, for odd (exterior)
generators y in a leading monomial, the products y*g.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .algebra import AmbientMismatch, Generator, Monomial, Poly, Ring

KINDS = ("lex", "deglex", "grevlex")


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class MonomialOrder:
    """Total monomial order.

    `priority` lists generator names highest first; generators not listed
    follow in ring order.  Generators in `block` are compared first (lex
    within the block), which makes any monomial containing a block variable
    larger than every block-free monomial.
    """

    kind: str = "grevlex"
    priority: Tuple[str, ...] = ()
    block: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown order kind {self.kind!r}")
        object.__setattr__(self, "priority", tuple(self.priority))
        object.__setattr__(self, "block", tuple(self.block))

    def bind(self, ring: Ring) -> "BoundOrder":
        return BoundOrder(self, ring)

    def __str__(self):
        s = f"{self.kind}:{'>'.join(self.priority)}"
        if self.block:
            s = f"block({','.join(self.block)});" + s
        return s


class BoundOrder:
    def __init__(self, order: MonomialOrder, ring: Ring):
        self.order = order
        self.ring = ring
        names = [ring.aliases.get(n, n) for n in order.priority]
        for n in list(names) + list(order.block):
            if n not in ring.index:
                raise KeyError(f"order mentions unknown generator {n!r}")
        rest = [n for n in ring.names if n not in names]
        perm = [ring.index[n] for n in names + rest]
        blk = set(ring.index[n] for n in order.block)
        self.block_idx = [i for i in perm if i in blk]
        self.rest_idx = [i for i in perm if i not in blk]
        self.degrees = ring.degrees
        self._cache: Dict[Monomial, tuple] = {}

    def _part(self, m: Monomial, idx: List[int], kind: str) -> tuple:
        e = tuple(m[i] for i in idx)
        if kind == "lex":
            return e
        w = sum(m[i] * self.degrees[i] for i in idx)
        if kind == "deglex":
            return (w,) + e
        return (w,) + tuple(-x for x in reversed(e))

    def key(self, m: Monomial) -> tuple:
        k = self._cache.get(m)
        if k is None:
            k = self._part(m, self.rest_idx, self.order.kind)
            if self.block_idx:
                k = (self._part(m, self.block_idx, "lex"), k)
            self._cache[m] = k
        return k


class Lead(NamedTuple):
    lm: Monomial
    lc: int


def leading(f: Poly, bo: BoundOrder) -> Lead:
    m = max(f.terms, key=bo.key)
    return Lead(m, f.terms[m])


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def normalize(f: Poly, bo: BoundOrder) -> Poly:
    lead = leading(f, bo)
    p = f.ring.modulus
    if p:
        inv = pow(lead.lc, -1, p)
        return f.scale(inv) if inv != 1 else f
    return -f if lead.lc < 0 else f


def _reduce(f: Poly, basis: Sequence[Tuple[Poly, Lead]], bo: BoundOrder) -> Poly:
    ring = f.ring
    p = ring.modulus
    work = dict(f.terms)
    out: Dict[Monomial, int] = {}
    key = bo.key
    while work:
        m = max(work, key=key)
        c = work[m]
        best = None
        for g, lead in basis:
            if divides(lead.lm, m) and (best is None or abs(lead.lc) < abs(best[1].lc)):
                best = (g, lead)
                if abs(lead.lc) == 1:
                    break
        if best is not None:
            g, lead = best
            q_mono = mono_div(m, lead.lm)
            sign, prod_ = ring.mono_mul(q_mono, lead.lm)
            if prod_ is not None:
                if p:
                    q = c * pow(lead.lc, -1, p) % p
                else:
                    q = c // lead.lc
                if q:
                    q *= sign
                    for gm, gc in g.terms.items():
                        s2, mm = ring.mono_mul(q_mono, gm)
                        if mm is None:
                            continue
                        v = work.get(mm, 0) - q * s2 * gc
                        if p:
                            v %= p
                        if v:
                            work[mm] = v
                        else:
                            work.pop(mm, None)
                    c = work.get(m, 0)
                    if not c:
                        continue
        out[m] = c
        del work[m]
    return Poly._raw(ring, out)


class GroebnerBasis:
    def __init__(self, elements: Sequence[Poly], order: MonomialOrder, ring: Ring, reduced: bool = True):
        self.ring = ring
        self.order = order
        self.bound = order.bind(ring)
        self.elements = list(elements)
        self.leads = [leading(g, self.bound) for g in self.elements]
        self.reduced = reduced

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"GroebnerBasis({self.order}, [{', '.join(map(str, self.elements))}])"

    def reduce(self, f: Poly) -> Poly:
        if f.ring != self.ring:
            raise AmbientMismatch(f"{f.ring!r} vs {self.ring!r}")
        return _reduce(f, list(zip(self.elements, self.leads)), self.bound)

    def contains(self, f: Poly) -> bool:
        return self.reduce(f).is_zero()

    def is_monic(self) -> bool:
        return all(l.lc == 1 for l in self.leads)


def reduce(f: Poly, G: Iterable[Poly], order: MonomialOrder) -> Poly:
    """Normal form of f against the set G (unique when G is a Groebner basis)."""
    G = list(G)
    for g in G:
        if g.ring != f.ring:
            raise AmbientMismatch(f"{g.ring!r} vs {f.ring!r}")
        if g.is_zero():
            raise ValueError("zero polynomial in reducer set")
    bo = order.bind(f.ring)
    return _reduce(f, [(g, leading(g, bo)) for g in G], bo)


def _lcm_mono(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _shifted(g: Poly, lead: Lead, L: Monomial) -> Tuple[Poly, int]:
    """(L/lm) * g together with the sign s so that its leading term is s*lc*L."""
    q = mono_div(L, lead.lm)
    s, _ = g.ring.mono_mul(q, lead.lm)
    return g.mul_monomial(q), s


def s_polynomial(f: Poly, lf: Lead, g: Poly, lg: Lead) -> Poly:
    L = _lcm_mono(lf.lm, lg.lm)
    F, sf = _shifted(f, lf, L)
    G, sg = _shifted(g, lg, L)
    p = f.ring.modulus
    if p:
        return F.scale(sf * pow(lf.lc, -1, p)) - G.scale(sg * pow(lg.lc, -1, p))
    l = abs(lf.lc * lg.lc) // gcd(lf.lc, lg.lc)
    return F.scale(sf * (l // lf.lc)) - G.scale(sg * (l // lg.lc))


def gcd_polynomial(f: Poly, lf: Lead, g: Poly, lg: Lead) -> Optional[Poly]:
    """Bezout combination with leading term gcd(lc_f, lc_g) * lcm(lm_f, lm_g)."""
    if f.ring.modulus or lf.lc % lg.lc == 0 or lg.lc % lf.lc == 0:
        return None
    L = _lcm_mono(lf.lm, lg.lm)
    F, sf = _shifted(f, lf, L)
    G, sg = _shifted(g, lg, L)
    _, s, t = xgcd(lf.lc, lg.lc)
    return F.scale(s * sf) + G.scale(t * sg)


def _unit(c: int, p: Optional[int]) -> bool:
    return bool(p) or abs(c) == 1


def buchberger(F: Iterable[Poly], order: MonomialOrder, degree_bound: Optional[int] = None,
               ring: Optional[Ring] = None) -> GroebnerBasis:
    """Reduced strong Groebner basis of <F>.

    With `degree_bound` (homogeneous inputs only) pairs whose lcm exceeds the
    bound are skipped; the result is then a Groebner basis up to that degree.
    """
    F = [f for f in F]
    if ring is None:
        if not F:
            raise ValueError("empty generating set needs an explicit ring")
        ring = F[0].ring
    for f in F:
        if f.ring != ring:
            raise AmbientMismatch(f"{f.ring!r} vs {ring!r}")
    bo = order.bind(ring)
    p = ring.modulus
    odd = ring.odd_mask
    G: List[Tuple[Poly, Lead]] = []
    alive: List[bool] = []
    heap: list = []
    counter = 0
    pending: List[Poly] = []

    def push(item, L):
        nonlocal counter
        d = ring.mono_degree(L)
        if degree_bound is not None and d > degree_bound:
            return
        counter += 1
        heapq.heappush(heap, (d, counter, item))

    def live():
        return [G[k] for k in range(len(G)) if alive[k]]

    def add(h: Poly):
        h = normalize(h, bo)
        lh = leading(h, bo)
        new_index = len(G)
        for j, (g, lg) in enumerate(G):
            if not alive[j]:
                continue
            # g is superseded when lt(h) divides lt(g); it is reduced again later
            if divides(lh.lm, lg.lm) and (p or lg.lc % lh.lc == 0):
                alive[j] = False
                pending.append(g)
                continue
            push(("pair", j, new_index), _lcm_mono(lg.lm, lh.lm))
        for i, e in enumerate(lh.lm):
            if e and odd[i]:
                push(("odd", new_index, i), lh.lm)
        G.append((h, lh))
        alive.append(True)

    def absorb(polys):
        pending.extend(polys)
        while pending:
            h = _reduce(pending.pop(), live(), bo)
            if h:
                add(h)

    absorb(sorted((f for f in F if f), key=lambda f: bo.key(leading(f, bo).lm), reverse=True))
    while True:
        while heap:
            _, _, item = heapq.heappop(heap)
            cands = []
            if item[0] == "odd":
                _, i, var = item
                if not alive[i]:
                    continue
                e = [0] * ring.nvars
                e[var] = 1
                cands.append(G[i][0].mul_monomial(tuple(e)))
            else:
                _, i, j = item
                if not (alive[i] and alive[j]):
                    continue
                (f, lf), (g, lg) = G[i], G[j]
                coprime = all(not (a and b) for a, b in zip(lf.lm, lg.lm))
                all_even = not any(odd[k] and (lf.lm[k] or lg.lm[k]) for k in range(ring.nvars))
                if not (coprime and all_even and _unit(lf.lc, p) and _unit(lg.lc, p)):
                    cands.append(s_polynomial(f, lf, g, lg))
                gp = gcd_polynomial(f, lf, g, lg)
                if gp is not None:
                    cands.append(gp)
            absorb(cands)
        gb = _interreduce([g for g, _ in live()], order, ring, bo)
        # certify: pairs of the final set and the inputs all reduce to zero
        inputs = [f for f in F if f and (degree_bound is None or (f.degree() or 0) <= degree_bound)]
        extra = closure_defects(gb, degree_bound) + [r for r in (gb.reduce(f) for f in inputs) if r]
        if not extra:
            return gb
        G.clear()
        alive.clear()
        heap.clear()
        absorb(list(gb.elements) + extra)


def _interreduce(polys: List[Poly], order: MonomialOrder, ring: Ring, bo: BoundOrder) -> GroebnerBasis:
    items = [(g, leading(g, bo)) for g in polys]
    keep = []
    for i, (g, lg) in enumerate(items):
        redundant = False
        for j, (h, lh) in enumerate(items):
            if i == j or not divides(lh.lm, lg.lm):
                continue
            if not (ring.modulus or lg.lc % lh.lc == 0):
                continue
            if lh.lm == lg.lm and abs(lh.lc) == abs(lg.lc) and j > i:
                continue
            redundant = True
            break
        if not redundant:
            keep.append((g, lg))
    out = []
    for i, (g, lg) in enumerate(keep):
        others = [kv for k, kv in enumerate(keep) if k != i]
        tail = g - Poly(ring, {lg.lm: lg.lc})
        out.append(Poly(ring, {lg.lm: lg.lc}) + _reduce(tail, others, bo))
    out.sort(key=lambda g: bo.key(leading(g, bo).lm))
    return GroebnerBasis(out, order, ring, reduced=True)


def closure_defects(gb: GroebnerBasis, degree_bound: Optional[int] = None) -> List[Poly]:
    """Nonzero remainders of all S-, GCD- and odd-variable polynomials
    (pairs whose lcm lies above `degree_bound` are skipped)."""
    ring = gb.ring
    items = list(zip(gb.elements, gb.leads))
    bad = []
    too_high = lambda m: degree_bound is not None and ring.mono_degree(m) > degree_bound
    for i in range(len(items)):
        f, lf = items[i]
        for var, e in enumerate(lf.lm):
            if e and ring.odd_mask[var] and not too_high(lf.lm):
                m = [0] * ring.nvars
                m[var] = 1
                r = gb.reduce(f.mul_monomial(tuple(m)))
                if r:
                    bad.append(r)
        for j in range(i + 1, len(items)):
            g, lg = items[j]
            if too_high(_lcm_mono(lf.lm, lg.lm)):
                continue
            for c in (s_polynomial(f, lf, g, lg), gcd_polynomial(f, lf, g, lg)):
                if c is not None:
                    r = gb.reduce(c)
                    if r:
                        bad.append(r)
    return bad


def ideal_membership(f: Poly, F: Iterable[Poly], order: Optional[MonomialOrder] = None) -> bool:
    order = order or MonomialOrder("grevlex", f.ring.names)
    F = list(F)
    return buchberger(F, order, ring=f.ring).contains(f)


def ideal_equal(A: Iterable[Poly], B: Iterable[Poly], order: Optional[MonomialOrder] = None,
                ring: Optional[Ring] = None) -> bool:
    A, B = list(A), list(B)
    ring = ring or (A + B)[0].ring
    order = order or MonomialOrder("grevlex", ring.names)
    ga = buchberger(A, order, ring=ring)
    gb = buchberger(B, order, ring=ring)
    return all(gb.contains(a) for a in A) and all(ga.contains(b) for b in B)


def eliminate(F: Iterable[Poly], block: Sequence[str], order: Optional[MonomialOrder] = None,
              ring: Optional[Ring] = None) -> GroebnerBasis:
    """Groebner basis of <F> intersected with the subring free of `block`."""
    F = list(F)
    ring = ring or F[0].ring
    for b in block:
        if b not in ring.index:
            raise KeyError(f"block variable {b!r} not in ring")
    base = order or MonomialOrder("grevlex", ring.names)
    if not block:
        return buchberger(F, base, ring=ring)
    elim = MonomialOrder(base.kind, base.priority, tuple(block))
    gb = buchberger(F, elim, ring=ring)
    idx = [ring.index[b] for b in block]
    kept = [g for g in gb.elements if all(m[i] == 0 for m in g.terms for i in idx)]
    return GroebnerBasis(kept, elim, ring)


def ideal_intersect(A: Iterable[Poly], B: Iterable[Poly], order: Optional[MonomialOrder] = None,
                    tag: str = "t", ring: Optional[Ring] = None) -> GroebnerBasis:
    """<A> ∩ <B> via a degree-0 tag variable ordered above everything else."""
    A, B = list(A), list(B)
    ring = ring or (A + B)[0].ring
    if tag in ring.index:
        raise ValueError(f"tag variable {tag!r} already in the ring")
    tagged = ring.extend([Generator(tag, 0)], front=True)
    t = tagged.gen(tag)
    gens = [t * a.change_ring(tagged) for a in A] + [(1 - t) * b.change_ring(tagged) for b in B]
    base = order or MonomialOrder("grevlex", ring.names)
    elim = eliminate(gens, [tag], base, ring=tagged)
    kept = [g.change_ring(ring) for g in elim.elements]
    return GroebnerBasis(kept, base, ring)
