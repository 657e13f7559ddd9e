from itertools import product
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flagloop.algebra import (AmbientMismatch, Generator, Poly, Ring, derivation_coefficient,
                              divided_power_coefficient, graded_basis, structure_constant)
from flagloop.parse import ParseError, parse_poly
from flagloop.presentations import flag_manifold, flag_square, instantiate_presentation, loop_fibre

MIXED = Ring([Generator("y1", 1), Generator("y2", 1), Generator("a", 2), Generator("b", 2), Generator("z", 3)])


def test_odd_generators_anticommute():
    y1, y2 = MIXED.gen("y1"), MIXED.gen("y2")
    assert str(y1 * y2) == "y1*y2"
    assert y2 * y1 == -(y1 * y2)
    assert (y1 * y1).is_zero()


def test_even_square_expands():
    R = Ring([Generator("al1", 2), Generator("be1", 2)])
    f = R.parse("(al1 - be1)^2")
    assert f == R.parse("al1^2 - 2*al1*be1 + be1^2")


def test_modular_coefficients_reduce():
    R = Ring([Generator("x", 2)], modulus=3)
    assert R.parse("4*x + 2*x").is_zero()
    with pytest.raises(ValueError):
        Ring([Generator("x", 2)], modulus=4)


def test_mixing_rings_raises():
    R = Ring([Generator("x", 2)])
    S = Ring([Generator("x", 2)], modulus=5)
    with pytest.raises(AmbientMismatch):
        R.gen("x") + S.gen("x")


def test_parse_errors_carry_column():
    with pytest.raises(ParseError) as e:
        parse_poly("a + * b", MIXED)
    assert e.value.col == 5
    with pytest.raises(ParseError):
        parse_poly("q1 + a", MIXED)
    with pytest.raises(ParseError):
        parse_poly("(a + b", MIXED)


def _monomial_polys(ring):
    # random polynomials built from a handful of monomials
    mon = st.tuples(*[st.integers(0, 1) if g.odd else st.integers(0, 2) for g in ring.generators])
    return st.dictionaries(mon, st.integers(-4, 4), max_size=4).map(lambda d: Poly(ring, d))


POLYS = _monomial_polys(MIXED)


def _homogeneous_parts(f):
    out = {}
    for m, c in f.terms.items():
        out.setdefault(MIXED.mono_degree(m), {})[m] = c
    return [(d, Poly(MIXED, t)) for d, t in out.items()]


@settings(max_examples=300)
@given(POLYS, POLYS, POLYS)
def test_associativity_and_distributivity(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@settings(max_examples=300)
@given(POLYS, POLYS)
def test_graded_commutativity(f, g):
    for df, fp in _homogeneous_parts(f):
        for dg, gp in _homogeneous_parts(g):
            sign = -1 if (df * dg) % 2 else 1
            assert fp * gp == (gp * fp).scale(sign)


@settings(max_examples=200)
@given(POLYS)
def test_print_parse_roundtrip(f):
    assert parse_poly(str(f), MIXED) == f


def test_divided_power_coefficients():
    for m in range(1, 8):
        assert divided_power_coefficient("gamma", m) == factorial(m)
        assert divided_power_coefficient("g2loop", m) == factorial(m) // 2 ** (m // 2)
    # (a2)_2 = a2^2 and 3 (a2)_3 = a2^3
    assert divided_power_coefficient("g2loop", 2) == 1
    assert divided_power_coefficient("g2loop", 3) == 3
    assert structure_constant("g2loop", 1, 1) == 1
    assert structure_constant("gamma", 2, 3) == 10


def test_derivation_coefficients():
    for m in range(1, 10):
        assert derivation_coefficient("gamma", m) == 1
        # d((a2)_m) = 2 (a2)_{m-1} d(a2) for m even, (a2)_{m-1} d(a2) for m odd
        assert derivation_coefficient("g2loop", m) == (2 if m % 2 == 0 else 1)


def test_family_structure_constants_consistent():
    # (x)_i (x)_j (x)_k is associative through the structure constants
    for kind in ("gamma", "g2loop"):
        for i, j, k in product(range(1, 4), repeat=3):
            left = structure_constant(kind, i, j) * structure_constant(kind, i + j, k)
            right = structure_constant(kind, j, k) * structure_constant(kind, i, j + k)
            assert left == right


def test_su3_flag_presentation():
    P = flag_manifold("su3", 6)
    assert [str(r) for r in P.relations] == ["g1^2 + g1*g2 + g2^2", "g1^2*g2 + g1*g2^2"]
    assert len(graded_basis(P, 2)) == 2
    assert graded_basis(P, 0) == [(0, 0)]


def test_graded_basis_vanishes_above_top():
    P = flag_manifold("su3", 8)
    assert graded_basis(P, 8) == []
    assert graded_basis(P, 7) == []


def _brute_force_rank(P, d):
    """Rank over Q of the degree-d part, by linear algebra on all monomials
    against all relation multiples (independent of Groebner bases)."""
    import sympy
    ring = P.ring
    mons = list(ring.monomials_of_degree(d))
    idx = {m: i for i, m in enumerate(mons)}
    rows = []
    for r in P.relations:
        dr = r.degree()
        for m in ring.monomials_of_degree(d - dr) if d >= dr else []:
            f = r.mul_monomial(m)
            if f:
                row = [0] * len(mons)
                for mm, c in f.terms.items():
                    row[idx[mm]] = c
                rows.append(row)
    rank = sympy.Matrix(rows).rank() if rows else 0
    return len(mons) - rank


@pytest.mark.parametrize("name,ranks", [
    ("su3/t", [1, 0, 2, 0, 2, 0, 1, 0, 0]),
    ("sp2/t", [1, 0, 2, 0, 2, 0, 2, 0, 1]),
    ("g2/t", [1, 0, 2, 0, 2, 0, 2, 0, 2, 0, 2, 0, 1]),
])
def test_flag_manifold_rank_tables(name, ranks):
    P = instantiate_presentation(name, len(ranks) - 1)
    assert P.rank_table() == ranks
    for d in range(len(ranks)):
        assert _brute_force_rank(P, d) == ranks[d]


def test_loop_fibre_sp2_generators():
    P = loop_fibre("sp2", 12)
    names = P.ring.names
    assert [n for n in names if n.startswith("x2_")] == [f"x2_{k}" for k in range(1, 7)]
    assert [n for n in names if n.startswith("x6_")] == ["x6_1", "x6_2"]
    assert P.ring.parse("x2^2") == P.ring.parse("x2_1^2")
    assert P.normal_form(P.ring.parse("x2_1^3 - 6*x2_3")).is_zero()


def test_loop_fibre_g2_relation():
    P = loop_fibre("g2", 4)
    R = P.ring
    assert P.normal_form(R.parse("a2_1^2 - a2_2")).is_zero()


@pytest.mark.parametrize("group,ranks", [
    ("su3", [1, 2, 2, 2, 3, 4, 4, 4, 5, 6, 6, 6, 7]),
    ("g2", [1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 3, 4, 4]),
])
def test_loop_fibre_rank_tables(group, ranks):
    assert loop_fibre(group, 12).rank_table() == ranks


def test_loop_fibre_rank_oracle():
    # Gamma[x2] (x) Gamma[x6] (x) Lambda(y1, y2): count monomials directly
    N = 12
    want = []
    for d in range(N + 1):
        n = 0
        for e in range(3):
            mult = (1, 2, 1)[e]
            rest = d - e
            if rest < 0:
                continue
            n += mult * sum(1 for b in range(rest // 6 + 1) if (rest - 6 * b) % 2 == 0)
        want.append(n)
    assert loop_fibre("sp2", N).rank_table() == want


def test_flag_square_is_tensor():
    # Kunneth: ranks are the convolution of the factor ranks
    a = flag_manifold("su3", 12).rank_table()
    want = [sum(a[i] * a[n - i] for i in range(n + 1)) for n in range(13)]
    assert flag_square("su3", 12).rank_table() == want
    assert want[2] == 4
