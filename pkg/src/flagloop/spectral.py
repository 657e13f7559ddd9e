"""First-quadrant cohomology Leray-Serre spectral sequence engine.

E_2 = H*(base) ⊗ H*(fibre), truncated at total degree N.  Each page stores,
per bidegree, a cycle lattice Z_r and a boundary lattice B_r inside the E_2
lattice; classes are Z_r/B_r.  A page-r differential is given on
multiplicative generators and extended to E_2 representatives by the signed
Leibniz rule; class-level assignments (a source class with its image) are
added on top.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Poly, Presentation, Ring, derivation_coefficient, tensor
from .groebner import buchberger
from .intlinalg import Lattice, Subquotient, kernel, smith_normal_form, solve_in_span

log = logging.getLogger(__name__)

Bidegree = Tuple[int, int]


class SpectralError(RuntimeError):
    pass


class DifferentialSquareError(SpectralError):
    """d_r ∘ d_r != 0 on some page."""


@dataclass
class DifferentialAssignment:
    page: int
    source: str  # generator name
    value: Poly  # E_2 expression
    sign: int = 1


@dataclass
class ClassAssignment:
    """d_r(source) = value for a page-r class that is not a generator."""

    page: int
    source: Poly
    value: Poly
    sign: int = 1
    extend_by_base: bool = True


@dataclass
class FibrationSpec:
    name: str
    base: Presentation
    fibre: Presentation
    cutoff: int
    differentials: List[DifferentialAssignment] = field(default_factory=list)
    class_differentials: List[ClassAssignment] = field(default_factory=list)
    _e2: Optional[Presentation] = field(default=None, repr=False)

    def __post_init__(self):
        clash = set(self.base.ring.names) & set(self.fibre.ring.names)
        if clash:
            raise SpectralError(f"base and fibre generator names collide: {sorted(clash)}")
        if self.cutoff < 2:
            raise SpectralError("cutoff must be at least 2")

    @property
    def modulus(self):
        return self.base.ring.modulus

    @property
    def e2(self) -> Presentation:
        if self._e2 is None:
            self._e2 = tensor(f"E2({self.name})", self.base, self.fibre, self.cutoff)
        return self._e2

    @property
    def ring(self) -> Ring:
        return self.e2.ring

    def parse(self, text: str, subs=None) -> Poly:
        return self.ring.parse(text, subs)

    def pages(self) -> List[int]:
        return sorted({a.page for a in self.differentials} | {a.page for a in self.class_differentials})

    def bidegree(self, m) -> Bidegree:
        nb = self.base.ring.nvars
        degs = self.ring.degrees
        p = sum(e * d for e, d in zip(m[:nb], degs[:nb]))
        q = sum(e * d for e, d in zip(m[nb:], degs[nb:]))
        return p, q

    def poly_bidegree(self, f: Poly) -> Optional[Bidegree]:
        bds = {self.bidegree(m) for m in f.terms}
        if not bds:
            return None
        if len(bds) > 1:
            raise SpectralError(f"{f} is not bihomogeneous")
        return bds.pop()

    def with_modulus(self, p: Optional[int]) -> "FibrationSpec":
        base = self.base.with_modulus(p)
        fibre = self.fibre.with_modulus(p)
        spec = FibrationSpec(self.name, base, fibre, self.cutoff)
        ring = spec.ring
        spec.differentials = [DifferentialAssignment(a.page, a.source, Poly(ring, a.value.terms), a.sign)
                              for a in self.differentials]
        spec.class_differentials = [ClassAssignment(a.page, Poly(ring, a.source.terms), Poly(ring, a.value.terms),
                                                    a.sign, a.extend_by_base)
                                    for a in self.class_differentials]
        return spec

    def flipped(self, index: int) -> "FibrationSpec":
        """Copy with the sign of generator assignment `index` negated."""
        spec = FibrationSpec(self.name, self.base, self.fibre, self.cutoff,
                             list(self.differentials), list(self.class_differentials))
        a = spec.differentials[index]
        spec.differentials[index] = DifferentialAssignment(a.page, a.source, a.value, -a.sign)
        return spec


@dataclass
class Cell:
    basis: list  # E_2 monomials
    Z: Lattice
    B: Lattice

    @property
    def dim(self) -> int:
        return len(self.basis)

    def structure(self) -> Tuple[int, List[int]]:
        return Subquotient(self.Z, self.B).structure()


@dataclass
class BigradedPage:
    r: int
    cells: Dict[Bidegree, Cell]
    cutoff: int

    def structure(self, bd: Bidegree) -> Tuple[int, List[int]]:
        cell = self.cells.get(bd)
        return cell.structure() if cell else (0, [])

    def class_representatives(self, bd: Bidegree, spec: "FibrationSpec") -> List[Poly]:
        """E_2 representatives of generators of Z_r/B_r (free first, then torsion)."""
        cell = self.cells[bd]
        Zb = cell.Z.basis
        coords = [cell.Z.coordinates(v) for v in cell.B.basis]
        k = len(Zb)
        if not coords:
            return [_vec_to_poly(spec, cell, v) for v in Zb]
        snf = smith_normal_form(coords, len(coords), k)
        # Z-basis change: new basis rows = V^-1 * Zb ; use V columns to transport
        Vinv = _unimodular_inverse(snf.V)
        reps = []
        inv = [snf.D[i][i] if i < len(coords) else 0 for i in range(k)]
        for j in range(k):
            if j < len(coords) and inv[j] == 1:
                continue
            vec = [sum(Vinv[j][i] * Zb[i][c] for i in range(k)) for c in range(cell.dim)]
            reps.append((inv[j] == 0, _vec_to_poly(spec, cell, vec)))
        reps.sort(key=lambda t: not t[0])
        return [p for _, p in reps]


def _unimodular_inverse(V):
    n = len(V)
    snf = smith_normal_form(V, n, n)
    # U V W = I  =>  V^-1 = W U
    from .intlinalg import matmul
    return matmul(snf.V, snf.U)


def _vec_to_poly(spec, cell, vec) -> Poly:
    return Poly(spec.ring, {m: c for m, c in zip(cell.basis, vec) if c})


@dataclass
class EInfinityTable:
    name: str
    cutoff: int
    horizon: int
    modulus: Optional[int]
    pages: List[int]
    cells: Dict[Bidegree, Tuple[int, List[int]]]

    def degree(self, n: int) -> Tuple[int, List[int]]:
        free, tors = 0, []
        for (p, q), (f, t) in self.cells.items():
            if p + q == n:
                free += f
                tors += t
        return free, sorted(tors)

    def rows(self, unstable: bool = False) -> List[Tuple[int, int, List[int]]]:
        top = self.cutoff if unstable else self.horizon
        return [(n,) + self.degree(n) for n in range(top + 1)]

    def ranks(self) -> List[int]:
        return [self.degree(n)[0] for n in range(self.horizon + 1)]

    def torsion_count(self, n: int, prime: int) -> int:
        return sum(1 for d in self.degree(n)[1] if d % prime == 0)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "cutoff": self.cutoff,
            "horizon": self.horizon,
            "coefficients": "Z" if self.modulus is None else f"F{self.modulus}",
            "pages": self.pages,
            "degrees": [{"degree": n, "free_rank": f, "torsion": t, "stable": n <= self.horizon}
                        for n, f, t in self.rows(unstable=True)],
            "bidegrees": [{"p": p, "q": q, "free_rank": f, "torsion": t}
                          for (p, q), (f, t) in sorted(self.cells.items()) if f or t],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EInfinityTable":
        coeffs = d["coefficients"]
        cells = {(c["p"], c["q"]): (c["free_rank"], list(c["torsion"])) for c in d["bidegrees"]}
        return cls(d["name"], d["cutoff"], d["horizon"], None if coeffs == "Z" else int(coeffs[1:]),
                   list(d["pages"]), cells)

    def __eq__(self, other):
        return isinstance(other, EInfinityTable) and self.to_dict() == other.to_dict()


class SpectralSequence:
    """Holds the E_2 data of a spec and turns pages."""

    def __init__(self, spec: FibrationSpec, jobs: int = 1):
        self.spec = spec
        self.jobs = jobs
        N = spec.cutoff
        for P in (spec.base, spec.fibre):
            if not P.groebner().is_monic():
                raise SpectralError(f"{P.name} has a non-monic Groebner basis; E_2 needs free modules")
        e2 = spec.e2
        self.gb = buchberger(e2.relations, e2.default_order(), degree_bound=N, ring=e2.ring)
        self.nb = spec.base.ring.nvars
        self.index: Dict[Bidegree, Dict[tuple, int]] = {}
        self._check_assignments()

    # E_2 ------------------------------------------------------------------
    def build_e2(self) -> BigradedPage:
        spec = self.spec
        N = spec.cutoff
        p_mod = spec.modulus
        cells = {}
        base_basis = {p: spec.base.graded_basis(p) for p in range(N + 1)}
        fib_basis = {q: spec.fibre.graded_basis(q) for q in range(N + 1)}
        for p in range(N + 1):
            for q in range(N + 1 - p):
                basis = [b + f for b in base_basis[p] for f in fib_basis[q]]
                if not basis:
                    continue
                self.index[(p, q)] = {m: i for i, m in enumerate(basis)}
                cells[(p, q)] = Cell(basis, Lattice.full(len(basis), p_mod), Lattice(len(basis), [], p_mod))
        return BigradedPage(2, cells, N)

    def normal_form(self, f: Poly) -> Poly:
        return self.gb.reduce(f)

    def coords(self, f: Poly, bd: Bidegree) -> List[int]:
        idx = self.index.get(bd)
        if idx is None:
            if f:
                raise SpectralError(f"{f} lands in empty bidegree {bd}")
            return []
        v = [0] * len(idx)
        for m, c in f.terms.items():
            if m not in idx:
                raise SpectralError(f"normal form term {f.ring.mono_str(m)} missing from E_2 basis at {bd}")
            v[idx[m]] = c
        return v

    def in_range(self, bd: Bidegree) -> bool:
        p, q = bd
        return p >= 0 and q >= 0 and p + q <= self.spec.cutoff and bd in self.index

    # differentials ----------------------------------------------------------
    def _check_assignments(self):
        for a in self.spec.differentials:
            idx = self.spec.ring.lookup(a.source)
            gen = self.spec.ring.generators[idx]
            if idx < self.nb:
                raise SpectralError(f"assignment source {a.source} is a base generator")
            bd_src = (0, gen.degree)
            bd_val = self.spec.poly_bidegree(self.normal_form(a.value))
            want = (bd_src[0] + a.page, bd_src[1] - a.page + 1)
            if bd_val is not None and bd_val != want:
                raise SpectralError(f"d{a.page}({a.source}) = {a.value} has bidegree {bd_val}, expected {want}")
        for a in self.spec.class_differentials:
            bs = self.spec.poly_bidegree(self.normal_form(a.source))
            bv = self.spec.poly_bidegree(self.normal_form(a.value))
            if bs and bv and bv != (bs[0] + a.page, bs[1] - a.page + 1):
                raise SpectralError(f"class assignment d{a.page}({a.source}) has wrong bidegree shift")

    def generator_values(self, r: int) -> Dict[int, Poly]:
        """d_r on every generator index with a nonzero value (families included)."""
        ring = self.spec.ring
        out: Dict[int, Poly] = {}
        for a in self.spec.differentials:
            if a.page != r:
                continue
            idx = ring.lookup(a.source)
            val = a.value.scale(a.sign)
            gen = ring.generators[idx]
            out[idx] = val
            fam = self.spec.fibre.families.get(gen.family) if gen.family else None
            if fam is not None and gen.index == 1:
                for k, member in enumerate(fam.members(self.spec.cutoff)[1:], start=2):
                    coef = derivation_coefficient(fam.kind, k)
                    prev = ring.gen(f"{fam.name}_{k - 1}")
                    out[ring.lookup(member.name)] = self.normal_form(prev * val).scale(coef)
        return out

    def derivation(self, f: Poly, values: Dict[int, Poly], normalize: bool = True) -> Poly:
        """Signed Leibniz extension of generator values to f."""
        ring = f.ring
        degs = ring.degrees
        result = ring.zero()
        for m, c in f.terms.items():
            factors = [(i, e) for i, e in enumerate(m) if e]
            for pos, (i, e) in enumerate(factors):
                if i not in values:
                    continue
                prefix = [0] * ring.nvars
                for j, ej in factors[:pos]:
                    prefix[j] = ej
                suffix = [0] * ring.nvars
                for j, ej in factors[pos + 1:]:
                    suffix[j] = ej
                pdeg = sum(prefix[j] * degs[j] for j in range(ring.nvars))
                sign = -1 if pdeg % 2 else 1
                if ring.odd_mask[i]:
                    dg = values[i]
                else:
                    lower = [0] * ring.nvars
                    lower[i] = e - 1
                    dg = Poly(ring, {tuple(lower): e}) * values[i]
                term = Poly(ring, {tuple(prefix): sign * c}) * dg * Poly(ring, {tuple(suffix): 1})
                result = result + term
        return self.normal_form(result) if normalize else result

    def _class_maps(self, r: int, page: BigradedPage):
        """Per source bidegree: list of (source vector, value poly) for class assignments."""
        spec = self.spec
        maps: Dict[Bidegree, list] = {}
        for a in spec.class_differentials:
            if a.page != r:
                continue
            sources = [(a.source, a.value.scale(a.sign))]
            if a.extend_by_base:
                for p in range(1, spec.cutoff + 1):
                    for b in spec.base.graded_basis(p):
                        bm = Poly(spec.ring, {b + (0,) * spec.fibre.ring.nvars: 1})
                        sources.append((bm * a.source, bm * a.value.scale(a.sign)))
            for s, v in sources:
                s = self.normal_form(s)
                if not s:
                    continue
                bd = spec.poly_bidegree(s)
                if bd not in self.index:
                    continue
                maps.setdefault(bd, []).append((self.coords(s, bd), self.normal_form(v)))
        return maps

    def differential_images(self, r: int, page: BigradedPage, bd: Bidegree, vectors, values, class_maps):
        """Images (as polys) of E_2 vectors in cell bd under d_r."""
        cell = page.cells[bd]
        polys = [self.derivation(_vec_to_poly(self.spec, cell, v), values) for v in vectors]
        entries = class_maps.get(bd)
        if entries:
            tgt = (bd[0] + r, bd[1] - r + 1)
            if not self.in_range(tgt):
                return polys
            images = self._class_map(page, bd, tgt, entries)
            for k, v in enumerate(vectors):
                zc = cell.Z.coordinates(v)
                if zc is None:
                    raise SpectralError(f"vector at {bd} is not a page-{r} cycle")
                for a, img in zip(zc, images):
                    if a and img:
                        polys[k] = polys[k] + img.scale(a)
        return polys

    def _class_map(self, page: BigradedPage, bd: Bidegree, tgt: Bidegree, entries) -> List[Poly]:
        """Images of the Z_r basis at bd under the class-level part of d_r.

        With S the source coordinates, U S V = D gives a basis w_j of Z_r
        with d_j w_j = sum_i V_ij s_i; w_j is sent to a solution x of
        d_j x = sum_i V_ij v_i modulo B_r(tgt), and the rest of the basis to 0.
        """
        if self.spec.modulus:
            raise SpectralError("class-level assignments need integer coefficients")
        cell, tcell = page.cells[bd], page.cells[tgt]
        # boundaries are sources with value 0
        entries = list(entries) + [(b, self.spec.ring.zero()) for b in cell.B.basis]
        k, m = len(cell.Z.basis), len(entries)
        S = []
        for vec, _ in entries:
            c = cell.Z.coordinates(vec)
            if c is None:
                raise SpectralError(f"class assignment source at {bd} is not a surviving cycle")
            S.append(c)
        vals = [self.coords(v, tgt) for _, v in entries]
        St = [[S[j][i] for j in range(m)] for i in range(k)]
        snf = smith_normal_form(St, k, m)
        n_t = tcell.dim
        xs = []
        for j in range(m):
            vj = [sum(snf.V[i][j] * vals[i][c] for i in range(m)) for c in range(n_t)]
            dj = snf.D[j][j] if j < k else 0
            if dj == 0:
                if not tcell.B.contains(vj):
                    raise SpectralError(f"class assignment at {bd} is inconsistent with the relations among its sources")
                continue
            gens = [[dj if c == i else 0 for c in range(n_t)] for i in range(n_t)] + tcell.B.basis
            sol = solve_in_span(gens, vj, n_t)
            if sol is None:
                raise SpectralError(f"class assignment value at {tgt} is not divisible by {dj} modulo boundaries")
            xs.append((j, sol[:n_t]))
        out = []
        for i in range(k):
            vec = [0] * n_t
            for j, x in xs:
                u = snf.U[j][i]
                if u:
                    vec = [a + u * b for a, b in zip(vec, x)]
            out.append(_vec_to_poly(self.spec, tcell, vec))
        return out

    def turn_page(self, page: BigradedPage, r: int) -> BigradedPage:
        spec = self.spec
        p_mod = spec.modulus
        values = self.generator_values(r)
        class_maps = self._class_maps(r, page)
        for a in spec.differentials:
            if a.page == r:
                self._check_source_survives(page, a)
        images: Dict[Bidegree, List[List[int]]] = {}
        image_polys: Dict[Bidegree, List[Poly]] = {}
        for bd, cell in page.cells.items():
            tgt = (bd[0] + r, bd[1] - r + 1)
            if not self.in_range(tgt):
                continue
            polys = self.differential_images(r, page, bd, cell.Z.basis, values, class_maps)
            vecs = [self.coords(f, tgt) for f in polys]
            tcell = page.cells[tgt]
            for f, v in zip(polys, vecs):
                if not tcell.Z.contains(v):
                    raise SpectralError(f"d{r} image {f} at {tgt} is not a page-{r} cycle")
            # well-definedness on boundaries
            if cell.B.basis:
                bpolys = self.differential_images(r, page, bd, cell.B.basis, values, class_maps)
                for f in bpolys:
                    if not tcell.B.contains(self.coords(f, tgt)):
                        raise SpectralError(f"d{r} does not preserve boundaries at {bd}")
            # d∘d = 0
            tgt2 = (tgt[0] + r, tgt[1] - r + 1)
            if self.in_range(tgt2):
                second = self.differential_images(r, page, tgt, vecs, values, class_maps)
                for f in second:
                    if not page.cells[tgt2].B.contains(self.coords(f, tgt2)):
                        raise DifferentialSquareError(f"d{r}∘d{r} != 0 from {bd}")
            images[bd] = vecs
            image_polys[bd] = polys
        tasks = []
        for bd, cell in page.cells.items():
            tgt = (bd[0] + r, bd[1] - r + 1)
            src = (bd[0] - r, bd[1] + r - 1)
            hit = bd in images and any(any(v) for v in images[bd])
            tasks.append((cell.dim, cell.Z, cell.B, images[bd] if hit else None,
                          page.cells[tgt].B if hit else None, images.get(src), p_mod))
        if self.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(self.jobs) as pool:
                results = list(pool.map(_next_cell, tasks, chunksize=max(1, len(tasks) // (4 * self.jobs))))
        else:
            results = [_next_cell(t) for t in tasks]
        new_cells = {bd: Cell(cell.basis, Z, B) for (bd, cell), (Z, B) in zip(page.cells.items(), results)}
        return BigradedPage(r + 1, new_cells, page.cutoff)

    def _check_source_survives(self, page: BigradedPage, a: DifferentialAssignment):
        ring = self.spec.ring
        gen = ring.generators[ring.lookup(a.source)]
        bd = (0, gen.degree)
        if bd not in page.cells:
            return
        f = self.normal_form(ring.gen(a.source))
        if not page.cells[bd].Z.contains(self.coords(f, bd)):
            raise SpectralError(f"{a.source} does not survive to page {a.page}")

    # driver -------------------------------------------------------------------
    def pages(self) -> List[BigradedPage]:
        page = self.build_e2()
        out = [page]
        for r in self.spec.pages():
            log.info("%s: turning page %d", self.spec.name, r)
            page = self.turn_page(page, r)
            out.append(page)
        return out

    def horizon(self) -> int:
        return self.spec.cutoff - 1

    def table(self, final: BigradedPage) -> EInfinityTable:
        H = self.horizon()
        cells = {bd: final.structure(bd) for bd in final.cells}
        return EInfinityTable(self.spec.name, self.spec.cutoff, H, self.spec.modulus, self.spec.pages(), cells)


def _next_cell(task):
    """(Z_{r+1}, B_{r+1}) of one bidegree from its d_r data."""
    dim, Z, B, out_images, target_B, in_images, p_mod = task
    if out_images is not None:
        k, m = len(out_images), len(target_B.basis)
        n_t = target_B.n
        A = [[out_images[j][i] for j in range(k)] + [target_B.basis[j][i] for j in range(m)] for i in range(n_t)]
        combos = [row[:k] for row in kernel(A, n_t, k + m, p_mod)]
        vecs = [[sum(c[j] * Z.basis[j][x] for j in range(k)) for x in range(dim)] for c in combos]
        Z = Lattice.span(dim, vecs, p_mod)
    if in_images is not None:
        B = B + Lattice.span(dim, in_images, p_mod)
    return Z, B


def build_e2(spec: FibrationSpec) -> BigradedPage:
    return SpectralSequence(spec).build_e2()


def run(spec: FibrationSpec, return_pages: bool = False, jobs: int = 1):
    ss = SpectralSequence(spec, jobs)
    pages = ss.pages()
    table = ss.table(pages[-1])
    return (table, pages) if return_pages else table


def extend_by_leibniz(spec: FibrationSpec, page: BigradedPage, r: int) -> Dict[Bidegree, List[List[int]]]:
    """Matrices (as column lists over the E_2 basis) of d_r on Z_r generators."""
    ss = SpectralSequence(spec)
    ss.build_e2()
    values = ss.generator_values(r)
    class_maps = ss._class_maps(r, page)
    out = {}
    for bd, cell in page.cells.items():
        tgt = (bd[0] + r, bd[1] - r + 1)
        if ss.in_range(tgt):
            polys = ss.differential_images(r, page, bd, cell.Z.basis, values, class_maps)
            out[bd] = [ss.coords(f, tgt) for f in polys]
    return out
