"""Graded-commutative polynomial arithmetic over Z and F_p.

A `Ring` is an ordered list of graded generators (plus the coefficient
modulus).  Monomials are exponent tuples in generator order; odd generators
have exponent at most 1 and products pick up the Koszul sign of sorting the
odd factors back into canonical order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb, factorial
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]


class AmbientMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    # divided-power style families: (family base name, index k)
    family: Optional[str] = None
    index: int = 1

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Ring:
    """Free graded-commutative algebra on `generators` with coefficients in Z
    (modulus None) or F_p."""

    def __init__(self, generators: Sequence[Generator], modulus: Optional[int] = None,
                 aliases: Optional[Mapping[str, str]] = None):
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        if modulus is not None and not is_prime(modulus):
            raise ValueError(f"modulus {modulus} is not prime")
        self.generators = tuple(generators)
        self.modulus = modulus
        self.index = {n: i for i, n in enumerate(names)}
        self.aliases = dict(aliases or {})
        self.degrees = tuple(g.degree for g in generators)
        self.odd_mask = tuple(g.odd for g in generators)
        self.nvars = len(generators)

    # identity -----------------------------------------------------------
    def _key(self):
        return (tuple((g.name, g.degree) for g in self.generators), self.modulus)

    def __eq__(self, other):
        return isinstance(other, Ring) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        coeffs = "Z" if self.modulus is None else f"F_{self.modulus}"
        return f"Ring({coeffs}; {', '.join(g.name for g in self.generators)})"

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def with_modulus(self, modulus: Optional[int]) -> "Ring":
        return Ring(self.generators, modulus, self.aliases)

    def extend(self, generators: Sequence[Generator], front: bool = False) -> "Ring":
        gens = list(generators) + list(self.generators) if front else list(self.generators) + list(generators)
        return Ring(gens, self.modulus, self.aliases)

    def lookup(self, name: str) -> int:
        name = self.aliases.get(name, name)
        try:
            return self.index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    # coefficients -------------------------------------------------------
    def coeff(self, c: int) -> int:
        return c % self.modulus if self.modulus else c

    # constructors -------------------------------------------------------
    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {(0,) * self.nvars: 1})

    def const(self, c: int) -> "Poly":
        return Poly(self, {(0,) * self.nvars: c})

    def gen(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.lookup(name)] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self) -> Dict[str, "Poly"]:
        return {g.name: self.gen(g.name) for g in self.generators}

    def monomial(self, exps: Mapping[str, int], coeff: int = 1) -> "Poly":
        e = [0] * self.nvars
        for n, k in exps.items():
            e[self.lookup(n)] += k
        return Poly(self, {tuple(e): coeff})

    def parse(self, text: str, subs: Optional[Mapping[str, "Poly"]] = None) -> "Poly":
        from .parse import parse_poly
        return parse_poly(text, self, subs)

    # monomial helpers ---------------------------------------------------
    def mono_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def mono_mul(self, a: Monomial, b: Monomial) -> Tuple[int, Optional[Monomial]]:
        """Return (sign, a*b); the product is None when an odd generator squares."""
        sign = 1
        odd_in_a_after = 0
        # walk from the right: count odd factors of `a` lying strictly right of each odd factor of `b`
        for i in range(self.nvars - 1, -1, -1):
            if self.odd_mask[i]:
                if a[i] and b[i]:
                    return 0, None
                if b[i] and odd_in_a_after % 2:
                    sign = -sign
                if a[i]:
                    odd_in_a_after += 1
        return sign, tuple(x + y for x, y in zip(a, b))

    def mono_str(self, m: Monomial) -> str:
        parts = []
        for g, e in zip(self.generators, m):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    def monomials_of_degree(self, d: int, allowed: Optional[Sequence[int]] = None) -> Iterator[Monomial]:
        """All monomials (odd exponents <= 1) of weighted degree d."""
        idx = list(range(self.nvars)) if allowed is None else list(allowed)
        idx = [i for i in idx if self.degrees[i] > 0]
        e = [0] * self.nvars

        def rec(pos: int, remaining: int):
            if remaining == 0:
                yield tuple(e)
                return
            if pos == len(idx):
                return
            i = idx[pos]
            deg = self.degrees[i]
            top = remaining // deg
            if self.odd_mask[i]:
                top = min(top, 1)
            for k in range(top, -1, -1):
                e[i] = k
                yield from rec(pos + 1, remaining - k * deg)
            e[i] = 0

        yield from rec(0, d)


class Poly:
    """Immutable polynomial: mapping monomial -> nonzero coefficient."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, int]):
        self.ring = ring
        t = {}
        for m, c in terms.items():
            c = ring.coeff(c)
            if c:
                t[m] = c
        self.terms = t
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, terms: Dict[Monomial, int]) -> "Poly":
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    def _check(self, other: "Poly"):
        if self.ring is not other.ring and self.ring != other.ring:
            raise AmbientMismatch(f"{self.ring!r} vs {other.ring!r}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, int):
            return self.ring.const(other)
        self._check(other)
        return other

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        mod = self.ring.modulus
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if mod:
                v %= mod
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Poly._raw(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c: int) -> "Poly":
        return Poly(self.ring, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        ring = self.ring
        mod = ring.modulus
        out: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                s, m = ring.mono_mul(m1, m2)
                if m is None:
                    continue
                v = out.get(m, 0) + s * c1 * c2
                if mod:
                    v %= mod
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Poly._raw(ring, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, m: Monomial, c: int = 1, left: bool = True) -> "Poly":
        """c*m*self (left) or c*self*m."""
        ring = self.ring
        out = {}
        for m2, c2 in self.terms.items():
            s, prod_ = ring.mono_mul(m, m2) if left else ring.mono_mul(m2, m)
            if prod_ is not None:
                out[prod_] = s * c * c2
        return Poly(ring, out)

    # grading -------------------------------------------------------------
    def degrees(self) -> set:
        return {self.ring.mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> Optional[int]:
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous polynomial {self}")
        return ds.pop()

    def variables(self) -> set:
        return {self.ring.generators[i].name for m in self.terms for i, e in enumerate(m) if e}

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(m, 0)

    def change_ring(self, ring: Ring) -> "Poly":
        """Re-express in `ring` (which must contain every generator used)."""
        src = self.ring
        used = sorted({i for m in self.terms for i, k in enumerate(m) if k})
        pos = {i: ring.lookup(src.generators[i].name) for i in used}
        odd_used = [i for i in used if src.odd_mask[i]]
        if all(pos[a] < pos[b] for a, b in zip(odd_used, odd_used[1:])):
            out = {}
            for m, c in self.terms.items():
                e = [0] * ring.nvars
                for i in used:
                    e[pos[i]] = m[i]
                out[tuple(e)] = c
            return Poly(ring, out)
        result = ring.zero()
        for m, c in self.terms.items():
            term = ring.const(c)
            for i in used:
                if m[i]:
                    term = term * ring.monomial({src.generators[i].name: m[i]})
            result = result + term
        return result

    def substitute(self, values: Mapping[str, "Poly"], target: Optional[Ring] = None) -> "Poly":
        """Ring map sending named generators to `values`; others map to themselves."""
        target = target or self.ring
        result = target.zero()
        src = self.ring
        for m, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(m):
                if not k:
                    continue
                name = src.generators[i].name
                img = values[name] if name in values else target.gen(name)
                term = term * img ** k
            result = result + term
        return result

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            ms = self.ring.mono_str(m)
            if ms == "1":
                s = str(abs(c))
            elif abs(c) == 1:
                s = ms
            else:
                s = f"{abs(c)}*{ms}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    __repr__ = __str__


def multiply(f: Poly, g: Poly) -> Poly:
    return f * g


def graded_sign(f: Poly, g: Poly) -> int:
    return -1 if (f.degree() * g.degree()) % 2 else 1


# ---------------------------------------------------------------------------
# divided-power style families


def divided_power_coefficient(kind: str, m: int) -> int:
    """c_m with x^m = c_m (x)_m."""
    if kind == "gamma":
        return factorial(m)
    if kind == "g2loop":
        return factorial(m) // 2 ** (m // 2)
    raise ValueError(f"unknown family kind {kind!r}")


def structure_constant(kind: str, i: int, j: int) -> int:
    """(x)_i (x)_j = c_ij (x)_{i+j}."""
    if kind == "gamma":
        return comb(i + j, i)
    num = divided_power_coefficient(kind, i + j)
    den = divided_power_coefficient(kind, i) * divided_power_coefficient(kind, j)
    if num % den:
        raise ArithmeticError(f"non-integral structure constant for {kind} at ({i},{j})")
    return num // den


def derivation_coefficient(kind: str, m: int) -> int:
    """d((x)_m) = k_m (x)_{m-1} d(x), from x^m = c_m (x)_m and the Leibniz rule."""
    num = m * divided_power_coefficient(kind, m - 1)
    den = divided_power_coefficient(kind, m)
    if num % den:
        raise ArithmeticError(f"non-integral derivation coefficient for {kind} at m={m}")
    return num // den


@dataclass(frozen=True)
class Family:
    name: str  # base name, e.g. "x2"
    degree: int  # degree of (x)_1
    kind: str = "gamma"  # "gamma" or "g2loop"

    def members(self, cutoff: int) -> list:
        top = cutoff // self.degree
        return [Generator(f"{self.name}_{k}", k * self.degree, self.name, k) for k in range(1, top + 1)]


@dataclass
class Presentation:
    """Graded generators + relations, truncated at total degree `cutoff`."""

    name: str
    ring: Ring
    relations: list
    cutoff: int
    families: Dict[str, Family] = field(default_factory=dict)
    _gb: object = field(default=None, repr=False)

    def __post_init__(self):
        for r in self.relations:
            if r.ring != self.ring:
                raise AmbientMismatch(f"relation {r} not over {self.ring!r}")

    @property
    def generators(self):
        return self.ring.generators

    def default_order(self):
        from .groebner import MonomialOrder
        return MonomialOrder("grevlex", self.ring.names)

    def groebner(self):
        if self._gb is None:
            from .groebner import buchberger
            self._gb = buchberger(self.relations, self.default_order(), degree_bound=self.cutoff, ring=self.ring)
        return self._gb

    def normal_form(self, f: Poly) -> Poly:
        return self.groebner().reduce(f)

    def graded_basis(self, d: int) -> list:
        return graded_basis(self, d)

    def with_modulus(self, p: Optional[int]) -> "Presentation":
        ring = self.ring.with_modulus(p)
        rels = [Poly(ring, r.terms) for r in self.relations]
        return Presentation(self.name, ring, rels, self.cutoff, dict(self.families))

    def family_of(self, gen_name: str) -> Optional[Family]:
        g = self.ring.generators[self.ring.lookup(gen_name)]
        return self.families.get(g.family) if g.family else None

    def rank_table(self) -> list:
        return [len(self.graded_basis(d)) for d in range(self.cutoff + 1)]


def graded_basis(P: Presentation, d: int) -> list:
    """Normal-form monomials of degree d (a Z-basis when the basis is monic)."""
    if d > P.cutoff:
        raise ValueError(f"degree {d} exceeds cutoff {P.cutoff}")
    gb = P.groebner()
    unit_leads = [l.lm for l in gb.leads if l.lc == 1]
    out = []
    for m in P.ring.monomials_of_degree(d):
        if not any(all(a <= b for a, b in zip(lm, m)) for lm in unit_leads):
            out.append(m)
    out.sort(key=gb.bound.key, reverse=True)
    return out


def is_monic_basis(P: Presentation) -> bool:
    return P.groebner().is_monic()


def tensor(name: str, A: Presentation, B: Presentation, cutoff: Optional[int] = None) -> Presentation:
    """A ⊗ B with A's generators first."""
    clash = set(A.ring.names) & set(B.ring.names)
    if clash:
        raise ValueError(f"generator names collide: {sorted(clash)}")
    if A.ring.modulus != B.ring.modulus:
        raise AmbientMismatch("coefficient rings differ")
    aliases = {**A.ring.aliases, **B.ring.aliases}
    ring = Ring(A.ring.generators + B.ring.generators, A.ring.modulus, aliases)
    rels = [r.change_ring(ring) for r in A.relations] + [r.change_ring(ring) for r in B.relations]
    fams = {**A.families, **B.families}
    return Presentation(name, ring, rels, min(A.cutoff, B.cutoff) if cutoff is None else cutoff, fams)
