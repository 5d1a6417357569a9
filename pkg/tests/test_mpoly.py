from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zetalink.cyclotomic import CycloNumber, zeta
from zetalink.mpoly import (
    BinForm,
    DegreeMismatch,
    LineForm,
    MPoly,
    NotAnEdge,
    NotHomogeneous,
    SingularMatrix,
    binform_gcd,
    coprime_forms,
    dth_power_test,
    edge_polynomial,
    exact_divide,
    linear_substitute,
    multiplicity_multiset,
    newton_polygon,
    partials,
    restrict_to_line,
    resultant_wrt,
    squarefree_decomposition,
    sylvester_resultant,
)

from oracles import convex_hull_brute, minkowski_sum_brute

X, Y, Z = (MPoly.variable(v) for v in "xyz")


def tricuspidal():
    return X * X * Y * Y + Y * Y * Z * Z + X * X * Z * Z + 2 * (X * Y * Z * (X + Y - Z))


def fermat(d):
    return X**d + Y**d + Z**d


# ---------------------------------------------------------------- strategies


def mpolys(max_degree=5, max_terms=5, conductors=(1, 3, 4, 8, 12)):
    def build(args):
        degree, conductor, seeds = args
        terms = {}
        for a, b, c in seeds:
            i = a % (degree + 1)
            j = b % (degree + 1 - i)
            k = degree - i - j
            terms[(i, j, k)] = zeta(conductor, c % conductor) * ((c % 5) - 2)
        return MPoly(degree, terms)

    return st.tuples(
        st.integers(min_value=1, max_value=max_degree),
        st.sampled_from(conductors),
        st.lists(
            st.tuples(
                st.integers(min_value=0, max_value=30),
                st.integers(min_value=0, max_value=30),
                st.integers(min_value=1, max_value=60),
            ),
            min_size=1,
            max_size=max_terms,
        ),
    ).map(build)


# ---------------------------------------------------------------- evaluation


def test_evaluate_frozen_values():
    F = tricuspidal()
    assert F.degree == 4
    for vertex in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        assert F.evaluate(vertex).is_zero()
    # expansion by hand: 1 + 1 + 1 + 2*1*1*1*(1+1-1) = 5
    assert F.evaluate((1, 1, 1)) == CycloNumber.from_rational(5)
    assert fermat(3).evaluate((1, 1, 1)) == CycloNumber.from_rational(3)


def test_homogeneity_enforced():
    with pytest.raises(NotHomogeneous):
        MPoly(2, {(1, 0, 0): CycloNumber.from_rational(1)})
    with pytest.raises(NotHomogeneous):
        X + X * Y


# ---------------------------------------------------------------- substitution


def test_substitute_identity_and_swap():
    F = tricuspidal()
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert linear_substitute(F, eye) == F
    swap_xy = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    assert linear_substitute(F, swap_xy) == F  # symmetric in x and y


def test_substitute_singular_matrix():
    with pytest.raises(SingularMatrix):
        linear_substitute(fermat(2), [[1, 1, 0], [1, 1, 0], [0, 0, 1]])


def test_substitute_three_cube_sum_normalisation():
    # rows: (-x+y+z), (x-y+z), (x+y-z); the sum of their cubes restricts to
    # (y+z)^3 on x=0, (x+z)^3 on y=0 and (x+y)^3 on z=0
    A = [[-1, 1, 1], [1, -1, 1], [1, 1, -1]]
    F = linear_substitute(fermat(3), A)
    r1 = restrict_to_line(F, LineForm(1, 0, 0))
    assert r1 == BinForm([1, 3, 3, 1], ("y", "z"))
    r2 = restrict_to_line(F, LineForm(0, 1, 0))
    assert r2 == BinForm([1, 3, 3, 1], ("x", "z"))
    r3 = restrict_to_line(F, LineForm(0, 0, 1))
    assert r3 == BinForm([1, 3, 3, 1], ("x", "y"))


@settings(max_examples=40, deadline=None)
@given(mpolys(max_degree=4, max_terms=4))
def test_substitute_composition(f):
    A = [[1, 2, 0], [0, 1, 1], [1, 0, 1]]
    B = [[1, 0, 1], [2, 1, 0], [0, 0, 1]]
    AB = [
        [sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)]
        for i in range(3)
    ]
    assert linear_substitute(linear_substitute(f, A), B) == linear_substitute(f, AB)


# ---------------------------------------------------------------- restriction


def test_restrict_fermat_to_coordinate_line():
    r = restrict_to_line(fermat(3), LineForm(1, 0, 0))
    # y^3 + z^3 as a binary form in (y, z)
    assert r == BinForm([1, 0, 0, 1], ("y", "z"))


def test_restrict_tricuspidal_to_z_axis_line():
    # frozen by direct expansion: F(x, y, 0) = x^2 y^2
    r = restrict_to_line(tricuspidal(), LineForm(0, 0, 1))
    assert r == BinForm([0, 0, 1, 0, 0], ("x", "y"))


@settings(max_examples=40, deadline=None)
@given(mpolys(max_degree=4, max_terms=4), st.integers(-3, 3), st.integers(-3, 3))
def test_restriction_agrees_with_evaluation(f, u, v):
    line = LineForm(1, 2, -3)
    r = restrict_to_line(f, line)
    point = (-(2 * u) + 3 * v, u, v)  # x solved from x + 2y - 3z = 0
    assert line.evaluate(point).is_zero()
    assert r.evaluate(u, v) == f.evaluate(point)


# ---------------------------------------------------------------- polygons


def test_polygon_single_monomial():
    f = MPoly.monomial((3, 3, 0))
    np = newton_polygon(f, "z")
    assert np.vertices == ((3, 3),)
    assert np.edges == ()


def test_polygon_tricuspidal_triangle():
    np = newton_polygon(tricuspidal(), "z")
    assert set(np.vertices) == {(0, 2), (2, 0), (2, 2)}
    assert len(np.edges) == 3


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), min_size=1, max_size=10))
def test_polygon_matches_brute_force(pts):
    degree = 20
    terms = {(i, j, degree - i - j): CycloNumber.from_rational(1) for i, j in pts}
    f = MPoly(degree, terms)
    np = newton_polygon(f, "z")
    assert sorted(np.vertices) == convex_hull_brute(pts)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=5),
    st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=5),
)
def test_product_polygon_is_minkowski_sum(pa, pb):
    # positive coefficients prevent cancellation, so supports add up exactly
    da, db = 10, 10
    fa = MPoly(da, {(i, j, da - i - j): CycloNumber.from_rational(1) for i, j in pa})
    fb = MPoly(db, {(i, j, db - i - j): CycloNumber.from_rational(2) for i, j in pb})
    hull_prod = sorted(newton_polygon(fa * fb, "z").vertices)
    sum_pts = minkowski_sum_brute(
        [(i, j) for i, j in pa], [(i, j) for i, j in pb]
    )
    assert hull_prod == convex_hull_brute(sum_pts)


# ---------------------------------------------------------------- edge forms


def test_edge_polynomials_tricuspidal_frozen():
    F = tricuspidal()
    one = CycloNumber.from_rational(1)
    diag = edge_polynomial(F, "z", ((0, 2), (2, 0)))
    assert [c.as_rational() for c in diag.coeffs] == [1, -2, 1]
    assert diag.cofactor == (0, 0, 2)
    horiz = edge_polynomial(F, "z", ((0, 2), (2, 2)))
    assert [c.as_rational() for c in horiz.coeffs] == [1, 2, 1]
    assert horiz.cofactor == (0, 2, 0)
    vert = edge_polynomial(F, "z", ((2, 0), (2, 2)))
    assert [c.as_rational() for c in vert.coeffs] == [1, 2, 1]
    assert vert.cofactor == (2, 0, 0)
    with pytest.raises(NotAnEdge):
        edge_polynomial(F, "z", ((0, 2), (1, 1)))


def test_edge_polynomial_full_binomial_line():
    d = 4
    f = (X + Z) ** d
    np = newton_polygon(f, "z")
    assert np.vertices == ((0, 0), (d, 0))
    form = edge_polynomial(f, "z", ((0, 0), (d, 0)))
    assert [c.as_rational() for c in form.coeffs] == [1, 4, 6, 4, 1]
    assert dth_power_test(form, d) is not None


# ---------------------------------------------------------------- power test


def test_dth_power_examples():
    z3 = zeta(3)
    # zeta3 * (u + zeta3 v)^3
    lin = BinForm([z3, 1])  # coeffs[1] is the u coefficient, coeffs[0] the v one
    g = lin * lin * lin * z3
    res = dth_power_test(g, 3)
    assert res is not None
    c, (a, b) = res
    assert c == z3
    assert a.is_one() and b == z3
    assert dth_power_test(BinForm([1, 0, 0, 1]), 3) is None
    assert dth_power_test(BinForm([0, 0, 1, 0, 0]), 4) is None
    c, (a, b) = dth_power_test(BinForm([5, 0, 0, 0, 0]), 4)
    assert c.as_rational() == 5 and a.is_zero() and b.is_one()
    with pytest.raises(DegreeMismatch):
        dth_power_test(BinForm([1, 2, 1]), 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(-3, 3), st.integers(1, 11))
def test_dth_power_round_trip(d, num, zexp):
    z = zeta(12, zexp)
    scale = CycloNumber.from_rational(Fraction(num, 2) + 3)
    lin = BinForm([z, 1])
    g = BinForm([scale])
    for _ in range(d):
        g = g * lin
    res = dth_power_test(g, d)
    assert res is not None
    c, (a, b) = res
    assert c == scale
    assert a.is_one() and b == z


# ---------------------------------------------------------------- division


def test_exact_divide_examples():
    tau3 = zeta(6)  # zeta_6 cubes to -1
    divisor = X - tau3 * Y
    q = exact_divide(X**3 + Y**3, divisor)
    assert q is not None
    assert q * divisor == X**3 + Y**3
    assert exact_divide(X**3 + Y**3, X - Y) is None


@settings(max_examples=40, deadline=None)
@given(mpolys(max_degree=3, max_terms=3), mpolys(max_degree=3, max_terms=3))
def test_exact_divide_round_trip(f, g):
    if g.is_zero():
        assert exact_divide(f * g, g) is None
    else:
        q = exact_divide(f * g, g)
        assert q == f


# ---------------------------------------------------------------- calculus


@settings(max_examples=50, deadline=None)
@given(mpolys())
def test_euler_identity(f):
    fx, fy, fz = partials(f)
    lhs = X * fx + Y * fy + Z * fz
    assert lhs == f * f.degree


# ---------------------------------------------------------------- resultants


def test_coprime_forms_examples():
    sq = BinForm([1, 2, 1])  # (u + v)^2
    assert coprime_forms(sq, BinForm([-1, 1]))  # u - v shares no root
    assert not coprime_forms(sq, BinForm([-1, 0, 1]))  # (u-v)(u+v) shares u = -v
    assert not coprime_forms(sq, BinForm([0]))


def test_sylvester_resultant_frozen():
    assert sylvester_resultant(BinForm([-1, 1]), BinForm([1, 1])).as_rational() == 2


def test_resultant_wrt_frozen():
    f = X * Z - Y * Y
    g = Z - X
    r = resultant_wrt(f, g, "z")
    assert [c.as_rational() for c in r.coeffs] == [-1, 0, 1]
    # eliminating z from two generic conics: degree 4 binary form
    f2 = X * X + Y * Z
    g2 = Z * Z - X * Y
    r2 = resultant_wrt(f2, g2, "z")
    assert r2.degree == 4


@settings(max_examples=25, deadline=None)
@given(st.integers(-4, 4))
def test_resultant_vanishes_on_shared_factor(a):
    # both polynomials contain the line y = a*z, so eliminating x must give 0
    ell = Y - a * Z
    f = (X + 2 * Z) * ell
    g = (X - 3 * Y) * ell
    r = resultant_wrt(f, g, "x")
    assert r.is_zero()


# ---------------------------------------------------------------- squarefree


def test_squarefree_decomposition_frozen():
    b = BinForm([-1, 1]) * BinForm([-1, 1]) * BinForm([1, 1])
    decomp = squarefree_decomposition(b)
    assert [(m, s.degree) for m, s in decomp] == [(1, 1), (2, 1)]
    assert multiplicity_multiset(b) == (2, 1)
    # (u - v)^2 (u + v) pieces, monic in u
    assert decomp[0][1] == BinForm([1, 1])
    assert decomp[1][1] == BinForm([-1, 1])


def test_multiplicity_with_infinity_root():
    # v^2 * u * (u - v): roots at [1:0] twice, [0:1], [1:1]
    g = BinForm([1, 0, 0]) * BinForm([0, 1]) * BinForm([-1, 1])
    assert multiplicity_multiset(g) == (2, 1, 1)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_squarefree_reconstructs(mults):
    roots = [BinForm([r, 1]) for r in (-1, 2, 5)]
    g = BinForm([1])
    for m, root in zip(mults, roots):
        for _ in range(m):
            g = g * root
    got = []
    for m, s in squarefree_decomposition(g):
        got.extend([m] * s.degree)
    assert sorted(got, reverse=True) == sorted(mults, reverse=True)


def test_binform_gcd():
    a = BinForm([1, 2, 1]) * BinForm([0, 1])  # u(u+v)^2
    b = BinForm([1, 1]) * BinForm([-1, 1]) * BinForm([0, 1])
    g = binform_gcd(a, b)
    assert g.degree == 2  # u(u+v)
    assert g.coeffs[0].is_zero()
