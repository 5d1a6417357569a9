"""Sparse homogeneous polynomials in x, y, z over cyclotomic numbers.

The module also provides the binary-form toolkit used by the curve
verifiers: restriction of a ternary form to a line, Newton polygons with
exact integer hulls, edge polynomials, d-th power detection, exact division,
Sylvester resultants and Yun squarefree decomposition.  Everything is exact;
coefficients are CycloNumber values.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Mapping, Sequence

from .cyclotomic import CycloNumber
from .errors import ZetalinkError


class SingularMatrix(ZetalinkError):
    """Raised when a coordinate change matrix is not invertible."""


class NotAnEdge(ZetalinkError):
    """Raised when a requested segment is not an edge of the Newton polygon."""


class DegreeMismatch(ZetalinkError):
    """Raised when a binary form has the wrong degree for the requested test."""


class NotHomogeneous(ZetalinkError):
    """Raised when terms of differing total degree are combined."""


Exponent = tuple[int, int, int]

_VARS = ("x", "y", "z")


def _coerce_scalar(c) -> CycloNumber:
    if isinstance(c, CycloNumber):
        return c
    return CycloNumber.from_rational(Fraction(c))


class MPoly:
    """A homogeneous polynomial sum of c * x^i y^j z^k with i+j+k fixed."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Mapping[Exponent, CycloNumber]):
        clean: dict[Exponent, CycloNumber] = {}
        for exp, c in terms.items():
            if len(exp) != 3 or any(e < 0 for e in exp):
                raise NotHomogeneous(f"bad exponent triple {exp}")
            if sum(exp) != degree:
                raise NotHomogeneous(
                    f"term {exp} has degree {sum(exp)}, expected {degree}"
                )
            c = _coerce_scalar(c)
            if not c.is_zero():
                clean[tuple(exp)] = c
        self.degree = degree
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(degree: int = 0) -> "MPoly":
        return MPoly(degree, {})

    @staticmethod
    def monomial(exp: Exponent, coeff=1) -> "MPoly":
        return MPoly(sum(exp), {tuple(exp): _coerce_scalar(coeff)})

    @staticmethod
    def variable(name: str) -> "MPoly":
        i = _VARS.index(name)
        exp = [0, 0, 0]
        exp[i] = 1
        return MPoly.monomial(tuple(exp))

    @staticmethod
    def linear(a, b, c) -> "MPoly":
        return MPoly(
            1,
            {
                (1, 0, 0): _coerce_scalar(a),
                (0, 1, 0): _coerce_scalar(b),
                (0, 0, 1): _coerce_scalar(c),
            },
        )

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[Exponent]:
        return sorted(self.terms)

    # -- ring operations ------------------------------------------------------

    def __add__(self, other: "MPoly") -> "MPoly":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise NotHomogeneous(
                f"cannot add degrees {self.degree} and {other.degree}"
            )
        out = dict(self.terms)
        for exp, c in other.terms.items():
            cur = out.get(exp)
            out[exp] = c if cur is None else cur + c
        return MPoly(self.degree, out)

    def __neg__(self) -> "MPoly":
        return MPoly(self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            out: dict[Exponent, CycloNumber] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                    prod = c1 * c2
                    cur = out.get(e)
                    out[e] = prod if cur is None else cur + prod
            return MPoly(self.degree + other.degree, out)
        c = _coerce_scalar(other)
        return MPoly(self.degree, {e: v * c for e, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MPoly":
        if e < 0:
            raise NotHomogeneous("negative power of a polynomial")
        result = MPoly.monomial((0, 0, 0))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        if self.degree != other.degree or set(self.terms) != set(other.terms):
            return False
        return all(c == other.terms[e] for e, c in self.terms.items())

    __hash__ = None

    def __repr__(self):
        if self.is_zero():
            return "MPoly(0)"
        bits = []
        for e in self.support():
            mono = "*".join(
                f"{v}^{p}" if p > 1 else v for v, p in zip(_VARS, e) if p
            )
            bits.append(f"({self.terms[e]!r})*{mono}" if mono else repr(self.terms[e]))
        return f"MPoly[{self.degree}](" + " + ".join(bits) + ")"

    # -- calculus and evaluation -------------------------------------------------

    def evaluate(self, point: Sequence) -> CycloNumber:
        px, py, pz = (_coerce_scalar(p) for p in point)
        total = CycloNumber.from_rational(0)
        for (i, j, k), c in self.terms.items():
            total = total + c * px**i * py**j * pz**k
        return total

    def partial(self, var: str) -> "MPoly":
        idx = _VARS.index(var)
        out: dict[Exponent, CycloNumber] = {}
        for e, c in self.terms.items():
            if e[idx]:
                ne = list(e)
                ne[idx] -= 1
                out[tuple(ne)] = c * e[idx]
        return MPoly(max(self.degree - 1, 0), out)

    def galois(self, k: int) -> "MPoly":
        return MPoly(self.degree, {e: c.galois(k) for e, c in self.terms.items()})

    def conductor(self) -> int:
        n = 1
        for c in self.terms.values():
            n = n * c.conductor // gcd(n, c.conductor)
        return n

    def content_monomial(self) -> Exponent:
        """Componentwise minimum of the support, i.e. the largest monomial divisor."""
        if self.is_zero():
            return (0, 0, 0)
        its = list(self.terms)
        return tuple(min(e[i] for e in its) for i in range(3))

    def strip_monomial(self) -> tuple["MPoly", Exponent]:
        """Divide out the monomial content; returns (quotient, removed exponents)."""
        m = self.content_monomial()
        if m == (0, 0, 0):
            return self, m
        out = {
            (e[0] - m[0], e[1] - m[1], e[2] - m[2]): c for e, c in self.terms.items()
        }
        return MPoly(self.degree - sum(m), out), m

    def coeffs_in(self, var: str) -> list["BinForm"]:
        """Coefficients as binary forms in the other two variables.

        Entry m is the coefficient of var^m; entries run from m = 0 to the
        full homogeneous degree, each a binary form of degree (degree - m).
        """
        idx = _VARS.index(var)
        others = [i for i in range(3) if i != idx]
        rows: list[dict[int, CycloNumber]] = [dict() for _ in range(self.degree + 1)]
        for e, c in self.terms.items():
            rows[e[idx]][e[others[0]]] = c
        out = []
        for m, row in enumerate(rows):
            deg = self.degree - m
            coeffs = [row.get(t, CycloNumber.from_rational(0)) for t in range(deg + 1)]
            out.append(BinForm(coeffs, (_VARS[others[0]], _VARS[others[1]])))
        return out

    # -- serialisation -------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "terms": [
                {"exp": list(e), "coeff": self.terms[e].to_json()}
                for e in self.support()
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "MPoly":
        terms = {
            tuple(t["exp"]): CycloNumber.from_json(t["coeff"]) for t in data["terms"]
        }
        return MPoly(data["degree"], terms)


def evaluate(f: MPoly, point: Sequence) -> CycloNumber:
    return f.evaluate(point)


def partials(f: MPoly) -> tuple[MPoly, MPoly, MPoly]:
    """The three formal partial derivatives (f_x, f_y, f_z)."""
    return f.partial("x"), f.partial("y"), f.partial("z")


def det3(m: Sequence[Sequence]) -> CycloNumber:
    a = [[_coerce_scalar(c) for c in row] for row in m]
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def linear_substitute(f: MPoly, matrix: Sequence[Sequence]) -> MPoly:
    """Substitute (x, y, z) <- M . (x, y, z); M must be invertible.

    Row i of M gives the linear form replacing the i-th variable, so the
    result evaluated at a point p equals f evaluated at M.p.
    """
    m = [[_coerce_scalar(c) for c in row] for row in matrix]
    if det3(m).is_zero():
        raise SingularMatrix("coordinate change matrix is singular")
    forms = [MPoly.linear(*row) for row in m]
    # cache powers of each replacement form
    powers: list[list[MPoly]] = []
    for form in forms:
        cache = [MPoly.monomial((0, 0, 0))]
        for _ in range(f.degree):
            cache.append(cache[-1] * form)
        powers.append(cache)
    total = MPoly.zero(f.degree)
    for (i, j, k), c in f.terms.items():
        total = total + powers[0][i] * powers[1][j] * powers[2][k] * c
    return total


def exact_divide(f: MPoly, g: MPoly) -> MPoly | None:
    """Quotient f / g if the division is exact, else None (lex division)."""
    if g.is_zero():
        return None
    if f.is_zero():
        return MPoly.zero(max(f.degree - g.degree, 0))
    if f.degree < g.degree:
        return None
    lead_g = max(g.terms)
    cg = g.terms[lead_g]
    rem = f
    quo: dict[Exponent, CycloNumber] = {}
    while not rem.is_zero():
        lead_r = max(rem.terms)
        e = tuple(a - b for a, b in zip(lead_r, lead_g))
        if any(v < 0 for v in e):
            return None
        c = rem.terms[lead_r] / cg
        quo[e] = c
        rem = rem - MPoly.monomial(e, c) * g
    return MPoly(f.degree - g.degree, quo)


# ---------------------------------------------------------------------------
# binary forms
# ---------------------------------------------------------------------------


class BinForm:
    """A homogeneous binary form; coeffs[t] multiplies u^t v^(deg-t)."""

    __slots__ = ("coeffs", "labels", "cofactor")

    def __init__(self, coeffs: Sequence, labels=("u", "v"), cofactor: Exponent | None = None):
        self.coeffs = tuple(_coerce_scalar(c) for c in coeffs)
        self.labels = tuple(labels)
        self.cofactor = cofactor

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def evaluate(self, u, v) -> CycloNumber:
        u = _coerce_scalar(u)
        v = _coerce_scalar(v)
        total = CycloNumber.from_rational(0)
        for t, c in enumerate(self.coeffs):
            if not c.is_zero():
                total = total + c * u**t * v ** (self.degree - t)
        return total

    def __mul__(self, other) -> "BinForm":
        if not isinstance(other, BinForm):
            scalar = _coerce_scalar(other)
            return BinForm([c * scalar for c in self.coeffs], self.labels)
        out = [CycloNumber.from_rational(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return BinForm(out, self.labels)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BinForm):
            return NotImplemented
        if self.degree != other.degree:
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __repr__(self):
        u, v = self.labels
        bits = []
        for t, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = []
            if t:
                mono.append(f"{u}^{t}" if t > 1 else u)
            if self.degree - t:
                p = self.degree - t
                mono.append(f"{v}^{p}" if p > 1 else v)
            lhs = "*".join(mono)
            bits.append(f"({c!r})" + (f"*{lhs}" if lhs else ""))
        return "BinForm(" + (" + ".join(bits) or "0") + ")"


def restrict_to_line(f: MPoly, line: "LineForm") -> BinForm:
    """Restrict f to the line, parametrised by the two non-leading coordinates.

    For a line a*x + b*y + c*z with leading (first nonzero, normalised to 1)
    coefficient on variable w, the remaining two variables serve as the
    parameters and w is eliminated by solving the line equation.  The result
    has the same degree as f.
    """
    lead = line.lead_index()
    others = [i for i in range(3) if i != lead]
    # w = -(b*u + c*v) where (u, v) are the remaining variables in order
    cu = -line.coeffs[others[0]]
    cv = -line.coeffs[others[1]]
    deg = f.degree
    out = [CycloNumber.from_rational(0)] * (deg + 1)
    for e, c in f.terms.items():
        m = e[lead]
        # (cu*u + cv*v)^m expands over binomials
        for s in range(m + 1):
            coef = c * comb(m, s) * cu**s * cv ** (m - s)
            t = e[others[0]] + s
            out[t] = out[t] + coef
    return BinForm(out, (_VARS[others[0]], _VARS[others[1]]))


class LineForm:
    """A projective line a*x + b*y + c*z = 0, first nonzero coefficient 1."""

    __slots__ = ("coeffs",)

    def __init__(self, a, b, c):
        coeffs = [_coerce_scalar(a), _coerce_scalar(b), _coerce_scalar(c)]
        lead = next((v for v in coeffs if not v.is_zero()), None)
        if lead is None:
            raise SingularMatrix("zero line form")
        self.coeffs = tuple(v / lead for v in coeffs)

    def lead_index(self) -> int:
        return next(i for i, v in enumerate(self.coeffs) if not v.is_zero())

    def evaluate(self, point: Sequence) -> CycloNumber:
        total = CycloNumber.from_rational(0)
        for c, p in zip(self.coeffs, point):
            total = total + c * _coerce_scalar(p)
        return total

    def as_mpoly(self) -> MPoly:
        return MPoly.linear(*self.coeffs)

    def meet(self, other: "LineForm") -> tuple[CycloNumber, CycloNumber, CycloNumber]:
        """Intersection point, as an exact cross product of coefficient rows."""
        a, o = self.coeffs, other.coeffs
        pt = (
            a[1] * o[2] - a[2] * o[1],
            a[2] * o[0] - a[0] * o[2],
            a[0] * o[1] - a[1] * o[0],
        )
        if all(v.is_zero() for v in pt):
            raise SingularMatrix("lines coincide")
        return pt

    def __eq__(self, other):
        if not isinstance(other, LineForm):
            return NotImplemented
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __repr__(self):
        return f"LineForm({self.coeffs[0]!r}, {self.coeffs[1]!r}, {self.coeffs[2]!r})"

    def to_json(self) -> dict:
        return {"coeffs": [c.to_json() for c in self.coeffs]}

    @staticmethod
    def from_json(data: dict) -> "LineForm":
        return LineForm(*(CycloNumber.from_json(c) for c in data["coeffs"]))


# ---------------------------------------------------------------------------
# Newton polygons
# ---------------------------------------------------------------------------


_CHART_AXES = {"x": (1, 2), "y": (0, 2), "z": (0, 1)}


def _hull_ccw(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Monotone chain convex hull, counterclockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[int, int]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[int, int]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


class NewtonPolygon:
    """Exact convex hull of the support of a dehomogenised polynomial."""

    __slots__ = ("chart", "support", "vertices")

    def __init__(self, chart: str, support: Iterable[tuple[int, int]]):
        self.chart = chart
        self.support = tuple(sorted(set(map(tuple, support))))
        self.vertices = tuple(_hull_ccw(list(self.support)))

    @property
    def edges(self) -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
        v = self.vertices
        if len(v) <= 1:
            return ()
        if len(v) == 2:
            return ((v[0], v[1]),)
        return tuple((v[i], v[(i + 1) % len(v)]) for i in range(len(v)))

    def __eq__(self, other):
        if not isinstance(other, NewtonPolygon):
            return NotImplemented
        return self.chart == other.chart and self.vertices == other.vertices

    __hash__ = None

    def __repr__(self):
        return f"NewtonPolygon({self.chart!r}, vertices={self.vertices})"

    def to_json(self) -> dict:
        return {
            "chart": self.chart,
            "support": [list(p) for p in self.support],
            "vertices": [list(p) for p in self.vertices],
        }


def newton_polygon(f: MPoly, chart: str) -> NewtonPolygon:
    """Newton polygon of f with the chart variable set to 1."""
    if chart not in _CHART_AXES:
        raise NotAnEdge(f"unknown chart {chart!r}")
    a, b = _CHART_AXES[chart]
    return NewtonPolygon(chart, [(e[a], e[b]) for e in f.terms])


def edge_polynomial(f: MPoly, chart: str, edge) -> BinForm:
    """Terms of f supported on one edge of the Newton polygon.

    The result is a binary form read along the lattice points of the edge,
    ordered from the lexicographically smaller endpoint; its cofactor records
    the common monomial factor (in homogeneous coordinates), so that the full
    quasi-homogeneous edge polynomial is cofactor * form.
    """
    polygon = newton_polygon(f, chart)
    pair = tuple(sorted((tuple(edge[0]), tuple(edge[1]))))
    for a, b in polygon.edges:
        if tuple(sorted((a, b))) == pair:
            break
    else:
        raise NotAnEdge(f"{pair} is not an edge of the {chart}-chart polygon")
    v0, v1 = pair
    dx, dy = v1[0] - v0[0], v1[1] - v0[1]
    g = gcd(abs(dx), abs(dy))
    step = (dx // g, dy // g)
    ax, ay = _CHART_AXES[chart]
    chart_idx = _VARS.index(chart)
    coeffs = []
    pts = []
    for t in range(g + 1):
        p = (v0[0] + t * step[0], v0[1] + t * step[1])
        pts.append(p)
        exp = [0, 0, 0]
        exp[ax], exp[ay] = p
        exp[chart_idx] = f.degree - p[0] - p[1]
        c = f.terms.get(tuple(exp))
        coeffs.append(c if c is not None else CycloNumber.from_rational(0))
    # cofactor: componentwise minimum of the full homogeneous exponents
    exps = []
    for p in pts:
        exp = [0, 0, 0]
        exp[ax], exp[ay] = p
        exp[chart_idx] = f.degree - p[0] - p[1]
        exps.append(exp)
    cof = tuple(min(e[i] for e in exps) for i in range(3))
    labels = (f"step{step}", _VARS[chart_idx])
    return BinForm(coeffs, labels, cofactor=cof)


# ---------------------------------------------------------------------------
# d-th power detection, gcds, resultants
# ---------------------------------------------------------------------------


def dth_power_test(g: BinForm, d: int):
    """Decide whether g = c * (a*u + b*v)^d exactly.

    Returns (c, (a, b)) with the linear form normalised (first nonzero
    coefficient 1), or None.  The candidate is read off from the extreme
    coefficients and then verified by exact expansion.
    """
    if g.degree != d:
        raise DegreeMismatch(f"form has degree {g.degree}, expected {d}")
    if g.is_zero():
        return None
    top = g.coeffs[d]
    if top.is_zero():
        # a = 0 forces g = c * v^d
        if any(not c.is_zero() for c in g.coeffs[1:]):
            return None
        return g.coeffs[0], (CycloNumber.from_rational(0), CycloNumber.from_rational(1))
    c = top
    r = g.coeffs[d - 1] / (c * d) if d > 0 else CycloNumber.from_rational(0)
    for t in range(d + 1):
        want = c * comb(d, t) * r ** (d - t)
        if g.coeffs[t] != want:
            return None
    return c, (CycloNumber.from_rational(1), r)


def _ustrip(coeffs: list[CycloNumber]) -> list[CycloNumber]:
    out = list(coeffs)
    while out and out[-1].is_zero():
        out.pop()
    return out


def _udivmod(a: list[CycloNumber], b: list[CycloNumber]):
    a = list(a)
    q = [CycloNumber.from_rational(0)] * max(len(a) - len(b) + 1, 1)
    inv = b[-1].inverse()
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv
        q[i] = c
        if not c.is_zero():
            for j, bj in enumerate(b):
                a[i + j] = a[i + j] - c * bj
    return q, _ustrip(a[: len(b) - 1])


def _ugcd(a: list[CycloNumber], b: list[CycloNumber]) -> list[CycloNumber]:
    a, b = _ustrip(a), _ustrip(b)
    while b:
        _, r = _udivmod(a, b)
        a, b = b, r
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def binform_gcd(g: BinForm, h: BinForm) -> BinForm:
    """Monic gcd of two binary forms, keeping common u- and v-power factors."""
    if g.is_zero():
        return h
    if h.is_zero():
        return g

    def split(form: BinForm):
        lo = next(t for t, c in enumerate(form.coeffs) if not c.is_zero())
        hi = next(
            t for t, c in reversed(list(enumerate(form.coeffs))) if not c.is_zero()
        )
        core = list(form.coeffs[lo : hi + 1])
        vpow = form.degree - hi
        return lo, vpow, core

    ulo1, v1, core1 = split(g)
    ulo2, v2, core2 = split(h)
    core = _ugcd(core1, core2)
    upow = min(ulo1, ulo2)
    vpow = min(v1, v2)
    coeffs = (
        [CycloNumber.from_rational(0)] * upow
        + core
        + [CycloNumber.from_rational(0)] * vpow
    )
    return BinForm(coeffs, g.labels)


def binform_derivative(g: BinForm) -> BinForm:
    """Derivative with respect to the first variable (degree drops by one)."""
    if g.degree == 0:
        return BinForm([0], g.labels)
    out = [g.coeffs[t + 1] * (t + 1) for t in range(g.degree)]
    return BinForm(out, g.labels)


def squarefree_decomposition(g: BinForm) -> list[tuple[int, BinForm]]:
    """Yun decomposition g = c * prod(S_m^m); returns [(m, S_m), ...], S_m monic.

    Multiplicity data of the roots of g is read directly from the output:
    each S_m of degree e contributes e roots of multiplicity m.  Powers of v
    (the point at infinity of the parametrisation) are handled separately.
    """
    if g.is_zero():
        return []
    lo = next(t for t, c in enumerate(g.coeffs) if not c.is_zero())
    hi = next(t for t, c in reversed(list(enumerate(g.coeffs))) if not c.is_zero())
    out: list[tuple[int, BinForm]] = []
    vmult = g.degree - hi
    if vmult:
        # root at [0:1] with multiplicity vmult
        out.append((vmult, BinForm([0, 1], g.labels)))
    umult = lo
    if umult:
        out.append((umult, BinForm([1, 0], g.labels)))

    poly = _ustrip(list(g.coeffs[lo : hi + 1]))
    if len(poly) > 1:
        inv = poly[-1].inverse()
        poly = [c * inv for c in poly]
        deriv = _ustrip([poly[t + 1] * (t + 1) for t in range(len(poly) - 1)])
        a = _ugcd(poly, deriv)
        b, _ = _udivmod(poly, a)
        c, _ = _udivmod(deriv, a)
        dprime = [x * (t + 1) for t, x in enumerate(b[1:])]
        d = _ustrip(
            [
                ci - (dprime[t] if t < len(dprime) else CycloNumber.from_rational(0))
                for t, ci in enumerate(c)
            ]
        )
        m = 1
        while len(b) > 1:
            s = _ugcd(b, d)
            if len(s) > 1:
                # s has a nonzero constant term, so homogenising it to its own
                # degree is faithful
                out.append((m, BinForm(s, g.labels)))
            b, _ = _udivmod(b, s)
            c, _ = _udivmod(d, s)
            dprime = [x * (t + 1) for t, x in enumerate(b[1:])]
            d = _ustrip(
                [
                    ci
                    - (dprime[t] if t < len(dprime) else CycloNumber.from_rational(0))
                    for t, ci in enumerate(c)
                ]
            )
            m += 1
    merged: dict[int, BinForm] = {}
    for m, form in out:
        if m in merged:
            merged[m] = merged[m] * form
        else:
            merged[m] = form
    return sorted(merged.items())


def multiplicity_multiset(g: BinForm) -> tuple[int, ...]:
    """Sorted multiplicities of the projective roots of g (descending)."""
    out: list[int] = []
    for m, s in squarefree_decomposition(g):
        out.extend([m] * s.degree)
    return tuple(sorted(out, reverse=True))


def sylvester_resultant(g: BinForm, h: BinForm) -> CycloNumber:
    """Resultant of two binary forms via Gaussian elimination on Sylvester."""
    n, m = g.degree, h.degree
    if n == 0 and m == 0:
        return CycloNumber.from_rational(1)
    size = n + m
    rows: list[list[CycloNumber]] = []
    zero = CycloNumber.from_rational(0)
    gc = list(reversed(g.coeffs))  # highest u power first
    hc = list(reversed(h.coeffs))
    for i in range(m):
        rows.append([zero] * i + gc + [zero] * (size - n - 1 - i))
    for i in range(n):
        rows.append([zero] * i + hc + [zero] * (size - m - 1 - i))
    return _det_gauss(rows)


def _det_gauss(rows: list[list[CycloNumber]]) -> CycloNumber:
    n = len(rows)
    rows = [list(r) for r in rows]
    det = CycloNumber.from_rational(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not rows[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            return CycloNumber.from_rational(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        pv = rows[col][col]
        det = det * pv
        inv = pv.inverse()
        for r in range(col + 1, n):
            factor = rows[r][col]
            if factor.is_zero():
                continue
            factor = factor * inv
            for c in range(col, n):
                rows[r][c] = rows[r][c] - factor * rows[col][c]
    return det


def coprime_forms(g: BinForm, h: BinForm) -> bool:
    """Whether two binary forms share no projective root (resultant nonzero)."""
    if g.is_zero() or h.is_zero():
        return False
    if g.degree == 0 or h.degree == 0:
        return True
    return not sylvester_resultant(g, h).is_zero()


def resultant_wrt(f: MPoly, g: MPoly, var: str = "z") -> BinForm:
    """Resultant of two ternary forms with respect to one variable.

    Sylvester matrices are built at the formal degrees deg(f), deg(g) (zero
    leading coefficients allowed) and the determinant, a binary form of
    degree deg(f)*deg(g) in the other two variables, is recovered by exact
    evaluation and interpolation.
    """
    fc = f.coeffs_in(var)
    gc = g.coeffs_in(var)
    n, m = f.degree, g.degree
    dres = n * m
    if dres == 0:
        return BinForm([1])
    # evaluate the resultant at (a, 1) for a = 0..dres, then interpolate
    points = list(range(dres + 1))
    values = []
    for a in points:
        fa = [c.evaluate(a, 1) for c in fc]
        ga = [c.evaluate(a, 1) for c in gc]
        values.append(_num_resultant(fa, ga, n, m))
    coeffs = _interpolate(points, values)
    coeffs += [CycloNumber.from_rational(0)] * (dres + 1 - len(coeffs))
    labels = tuple(v for v in _VARS if v != var)
    return BinForm(coeffs[: dres + 1], labels)


def _num_resultant(fa: list[CycloNumber], ga: list[CycloNumber], n: int, m: int) -> CycloNumber:
    size = n + m
    zero = CycloNumber.from_rational(0)
    fc = list(reversed(fa))
    gc = list(reversed(ga))
    rows = []
    for i in range(m):
        rows.append([zero] * i + fc + [zero] * (size - n - 1 - i))
    for i in range(n):
        rows.append([zero] * i + gc + [zero] * (size - m - 1 - i))
    return _det_gauss(rows)


def _interpolate(xs: list[int], ys: list[CycloNumber]) -> list[CycloNumber]:
    """Newton-form interpolation with integer nodes and CycloNumber values."""
    n = len(xs)
    table = list(ys)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / Fraction(xs[i] - xs[i - level])
    # expand Newton basis into monomial coefficients
    coeffs = [CycloNumber.from_rational(0)] * n
    basis = [CycloNumber.from_rational(1)]  # polynomial 1
    for i in range(n):
        for j, b in enumerate(basis):
            coeffs[j] = coeffs[j] + table[i] * b
        # multiply basis by (t - xs[i])
        new_basis = [CycloNumber.from_rational(0)] * (len(basis) + 1)
        for j, b in enumerate(basis):
            new_basis[j] = new_basis[j] - b * xs[i]
            new_basis[j + 1] = new_basis[j + 1] + b
        basis = new_basis
    return _ustrip(coeffs)
