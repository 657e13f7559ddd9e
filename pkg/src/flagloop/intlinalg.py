"""Exact integer (and F_p) matrix algebra: Smith normal form, lattices,
subquotients.

Matrices are plain lists of rows of Python ints.  Lattices (submodules of
Z^n) are stored as lists of basis vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[int]]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix, cols: Optional[int] = None) -> Matrix:
    if not A:
        return []
    inner = len(B)
    c = len(B[0]) if B else (cols or 0)
    out = []
    for row in A:
        acc = [0] * c
        for k in range(inner):
            a = row[k]
            if a:
                bk = B[k]
                for j in range(c):
                    if bk[j]:
                        acc[j] += a * bk[j]
        out.append(acc)
    return out


def transpose(A: Matrix, rows: int = 0, cols: int = 0) -> Matrix:
    if not A:
        return [[] for _ in range(cols)] if cols else []
    return [list(r) for r in zip(*A)]


def determinant(A: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [row[:] for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass
class SmithDecomposition:
    U: Matrix
    D: Matrix
    V: Matrix
    rows: int
    cols: int

    @property
    def invariant_factors(self) -> List[int]:
        return [self.D[i][i] for i in range(min(self.rows, self.cols)) if self.D[i][i]]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(A: Matrix, rows: Optional[int] = None, cols: Optional[int] = None) -> SmithDecomposition:
    """U*A*V = D with U, V unimodular and d1 | d2 | ... (all >= 0)."""
    m = len(A) if rows is None else rows
    n = (len(A[0]) if A else 0) if cols is None else cols
    D = [list(r) for r in A] if A else zeros(m, n)
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst -= q*row_src
        if q:
            D[dst] = [a - q * b for a, b in zip(D[dst], D[src])]
            U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col_dst -= q*col_src
        if q:
            for row in D:
                row[dst] -= q * row[src]
            for row in V:
                row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = D[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, D[i][t] // p)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, D[t][j] // p)
                    if D[t][j]:
                        done = False
            if done:
                # divisibility against the rest of the block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, -1)
                continue
            # move the smallest entry of row/col t into the pivot
            best = (abs(D[t][t]), t, t)
            for i in range(t + 1, m):
                if D[i][t] and abs(D[i][t]) < best[0]:
                    best = (abs(D[i][t]), i, t)
            for j in range(t + 1, n):
                if D[t][j] and abs(D[t][j]) < best[0]:
                    best = (abs(D[t][j]), t, j)
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SmithDecomposition(U, D, V, m, n)


# ---------------------------------------------------------------------------
# F_p linear algebra


def rref_mod(A: Matrix, p: int, ncols: int) -> Tuple[Matrix, List[int]]:
    M = [[x % p for x in row] for row in A]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank_mod(A: Matrix, p: int, ncols: int) -> int:
    return len(rref_mod(A, p, ncols)[1])


# ---------------------------------------------------------------------------
# lattices: row-basis submodules of R^n, R = Z or F_p


class Lattice:
    """Submodule of R^n spanned by `basis` (rows, linearly independent)."""

    def __init__(self, n: int, basis: Sequence[Sequence[int]], modulus: Optional[int] = None):
        self.n = n
        self.modulus = modulus
        self.basis = [[x % modulus for x in v] if modulus else list(v) for v in basis]
        self._pivots = _echelon_pivots(self.basis)

    @classmethod
    def span(cls, n: int, vectors: Sequence[Sequence[int]], modulus: Optional[int] = None) -> "Lattice":
        vecs = [list(v) for v in vectors if any(v)]
        if modulus:
            return cls(n, rref_mod(vecs, modulus, n)[0], modulus)
        return cls(n, hermite_rows(vecs, n), None)

    @classmethod
    def full(cls, n: int, modulus: Optional[int] = None) -> "Lattice":
        return cls(n, identity(n), modulus)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice.span(self.n, self.basis + other.basis, self.modulus)

    def coordinates(self, v: Sequence[int]) -> Optional[List[int]]:
        """c with c*basis = v, or None if v is not in the lattice."""
        if self._pivots is None:
            return solve_in_span(self.basis, v, self.n, self.modulus)
        p = self.modulus
        w = [x % p for x in v] if p else list(v)
        c = []
        for row, j in zip(self.basis, self._pivots):
            a = row[j]
            if p:
                q = w[j] * pow(a, -1, p) % p
            else:
                if w[j] % a:
                    return None
                q = w[j] // a
            c.append(q)
            if q:
                w = [(x - q * y) % p if p else x - q * y for x, y in zip(w, row)]
        return None if any(w) else c

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(v) for v in other.basis)


def _echelon_pivots(rows: Matrix) -> Optional[List[int]]:
    piv = []
    for r in rows:
        j = next((j for j, x in enumerate(r) if x), None)
        if j is None or (piv and j <= piv[-1]):
            return None
        piv.append(j)
    return piv


def hermite_rows(vectors: List[List[int]], n: int) -> Matrix:
    """Row echelon Z-basis of the span (Hermite-style, via gcd row operations)."""
    M = [list(v) for v in vectors]
    out = []
    col = 0
    while M and col < n:
        nz = [r for r in M if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in M if not r[col]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                if r2[col]:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = new
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        M = rest
        col += 1
    # reduce above pivots
    pcols = [next(j for j, x in enumerate(r) if x) for r in out]
    for i in range(len(out)):
        for k in range(i):
            c = pcols[i]
            q = out[k][c] // out[i][c]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return out


def solve_in_span(basis: Matrix, v: Sequence[int], n: int, modulus: Optional[int] = None) -> Optional[List[int]]:
    """Exact coefficients of v in terms of an independent row basis."""
    k = len(basis)
    if k == 0:
        return [] if not any(x % modulus if modulus else x for x in v) else None
    if modulus:
        # solve c*B = v  <=>  B^T c^T = v^T
        aug = [[basis[i][j] for i in range(k)] + [v[j]] for j in range(n)]
        R, piv = rref_mod(aug, modulus, k + 1)
        if k in piv:
            return None
        c = [0] * k
        for row, pc in zip(R, piv):
            c[pc] = row[k]
        return c
    # integer: use SNF of B^T
    Bt = [[basis[i][j] for i in range(k)] for j in range(n)]
    snf = smith_normal_form(Bt, n, k)
    # U*Bt*V = D ; Bt c = v  <=>  D (V^-1 c) = U v
    Uv = [sum(a * b for a, b in zip(row, v)) for row in snf.U]
    w = [0] * k
    for i in range(n):
        d = snf.D[i][i] if i < k else 0
        if d == 0:
            if Uv[i]:
                return None
        else:
            if Uv[i] % d:
                return None
            w[i] = Uv[i] // d
    return [sum(snf.V[i][j] * w[j] for j in range(k)) for i in range(k)]


def kernel(A: Matrix, rows: int, cols: int, modulus: Optional[int] = None) -> Matrix:
    """Basis (as rows) of {x : A x = 0} in R^cols."""
    if modulus:
        R, piv = rref_mod(A, modulus, cols)
        free = [c for c in range(cols) if c not in piv]
        out = []
        for f in free:
            v = [0] * cols
            v[f] = 1
            for row, pc in zip(R, piv):
                v[pc] = (-row[f]) % modulus
            out.append(v)
        return out
    snf = smith_normal_form(A if A else zeros(rows, cols), rows, cols)
    r = snf.rank
    return [[snf.V[i][j] for i in range(cols)] for j in range(r, cols)]


@dataclass
class Subquotient:
    """Z/B for lattices B ⊆ Z ⊆ R^n."""

    Z: Lattice
    B: Lattice

    def structure(self) -> Tuple[int, List[int]]:
        """(free rank, torsion invariant factors > 1)."""
        if self.Z.modulus:
            return self.Z.rank - self.B.rank, []
        coords = []
        for v in self.B.basis:
            c = self.Z.coordinates(v)
            if c is None:
                raise ValueError("boundary lattice not contained in cycle lattice")
            coords.append(c)
        if not coords:
            return self.Z.rank, []
        snf = smith_normal_form(coords, len(coords), self.Z.rank)
        inv = snf.invariant_factors
        return self.Z.rank - len(inv), sorted(d for d in inv if d > 1)


def homology(d_in: Matrix, d_out: Matrix, n: int, modulus: Optional[int] = None,
             n_in: Optional[int] = None, n_out: Optional[int] = None):
    """ker(d_out)/im(d_in) on R^n.

    d_in: n x n_in matrix (maps R^n_in -> R^n), d_out: n_out x n matrix.
    Returns (free rank, torsion list, representatives of a generating set).
    """
    n_in = n_in if n_in is not None else (len(d_in[0]) if d_in and d_in[0] else 0)
    n_out = n_out if n_out is not None else len(d_out)
    if d_out and d_in and n_in:
        comp = matmul(d_out, d_in, n_in)
        if any(x % modulus if modulus else x for row in comp for x in row):
            raise ValueError("d_out * d_in != 0")
    Z = Lattice.span(n, kernel(d_out, n_out, n, modulus) if n_out else identity(n), modulus)
    B = Lattice.span(n, transpose(d_in) if n_in else [], modulus)
    free, tors = Subquotient(Z, B).structure()
    return free, tors, Z.basis


def prime_power_split(d: int) -> List[int]:
    out = []
    q = 2
    while d > 1:
        if d % q == 0:
            pk = 1
            while d % q == 0:
                d //= q
                pk *= q
            out.append(pk)
        q += 1
    return out
