"""Constructions and verifiers for the three plane-curve families.

The package works with projective plane curves over cyclotomic fields in
three related shapes:

- ``sigma``: an irreducible curve of degree 2d whose only singularities are
  three cusps of local type u^d + v^(d+1), placed at the coordinate
  vertices.  Members are labelled by a d-th root of unity zeta (up to
  complex conjugation) read off the diagonal edge of the Newton polygon.
- ``tilde``: a sigma curve together with the coordinate triangle (total
  degree 2d + 3).
- ``hat``: a smooth curve of degree d together with three non-concurrent
  lines, each meeting the curve at a single point with multiplicity d
  (total degree d + 3).  The standard Cremona involution exchanges tilde
  and hat members, and the same zeta labels both.
- ``artal_shirane``: a smooth degree-d curve with three lines and no
  tangency requirement; classified by intersection multiplicity tuples.

All arithmetic is exact.  Verifiers return certificates recording the
normalisation data they used, so results can be re-checked independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Optional, Sequence

from .cyclotomic import (
    CycloNumber,
    RootOfUnity,
    classify_root_of_unity,
    half_plane_class,
    stratum_realizable,
    zeta,
)
from .errors import ZetalinkError
from .mpoly import (
    BinForm,
    LineForm,
    MPoly,
    NewtonPolygon,
    coprime_forms,
    det3,
    dth_power_test,
    edge_polynomial,
    exact_divide,
    linear_substitute,
    multiplicity_multiset,
    newton_polygon,
    partials,
    squarefree_decomposition,
    resultant_wrt,
    restrict_to_line,
)

_VARS = ("x", "y", "z")

FAMILIES = ("sigma", "tilde", "hat", "artal_shirane")


class PrecondViolation(ZetalinkError):
    """Input does not satisfy a documented precondition."""


class NotTriangular(ZetalinkError):
    """The three line components are repeated or concurrent."""


class NotTangentAtOnePoint(ZetalinkError):
    """A line meets the curve in more than one point."""


class NotSmooth(ZetalinkError):
    """The main curve has a singular point."""


class NotNormalizable(ZetalinkError):
    """The tangency data cannot be moved to the standard position."""


class WrongPolygon(ZetalinkError):
    """Newton polygon is not the expected triangle."""


class EdgeNotPower(ZetalinkError):
    """An edge polynomial is not a d-th power of a linear form."""


class LocalTypeUnverified(ZetalinkError):
    """The coprimality criterion for the cusp type failed."""


class NotNormalized(ZetalinkError):
    """Line components are not the coordinate triangle."""


class UnexpectedMultiplicity(ZetalinkError):
    """Vertex multiplicities do not match the family bookkeeping."""


class NotCoprime(ZetalinkError):
    """Galois exponent shares a factor with the conductor."""


class DivisionNotExact(ZetalinkError):
    """A division that the construction requires to be exact was not."""


class FactorizationIncomplete(ZetalinkError):
    """A restricted binary form does not split into linear factors.

    Carries the partial intersection type (multiplicities are still exact,
    only the coordinates of some intersection points are unavailable).
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


# ---------------------------------------------------------------------------
# curve specifications
# ---------------------------------------------------------------------------


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def coordinate_triangle() -> tuple[LineForm, LineForm, LineForm]:
    """The lines x = 0, y = 0, z = 0."""
    return (LineForm(1, 0, 0), LineForm(0, 1, 0), LineForm(0, 0, 1))


def _field_conductor(main: MPoly, lines: Sequence[LineForm]) -> int:
    n = main.conductor()
    for line in lines:
        for c in line.coeffs:
            n = _lcm(n, c.conductor)
    return n


@dataclass(frozen=True)
class CurveSpec:
    """A family member: main curve, optional line components, coefficient field.

    ``degenerate`` marks members on the boundary of the family (concurrent
    lines); they are legal outputs of the degeneration construction but are
    rejected by the verifiers.
    """

    family: str
    d: int
    main: MPoly
    lines: tuple[LineForm, ...]
    conductor: int
    degenerate: bool = False
    predicted_zeta: Optional[RootOfUnity] = field(default=None, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise PrecondViolation(f"unknown family {self.family!r}")
        if self.d < 2:
            raise PrecondViolation(f"degree parameter must be >= 2, got {self.d}")
        expected_lines = 0 if self.family == "sigma" else 3
        if len(self.lines) != expected_lines:
            raise PrecondViolation(
                f"{self.family} expects {expected_lines} lines, got {len(self.lines)}"
            )
        expected_deg = self.d if self.family in ("hat", "artal_shirane") else 2 * self.d
        if self.main.degree != expected_deg:
            raise PrecondViolation(
                f"{self.family} main degree should be {expected_deg}, "
                f"got {self.main.degree}"
            )
        if self.main.is_zero():
            raise PrecondViolation("main curve is the zero polynomial")
        if self.lines:
            for i in range(3):
                for j in range(i + 1, 3):
                    if self.lines[i] == self.lines[j]:
                        raise PrecondViolation("line components must be distinct")
            rows = [line.coeffs for line in self.lines]
            if det3(rows).is_zero() and not self.degenerate:
                raise PrecondViolation(
                    "lines are concurrent; pass degenerate=True for boundary members"
                )
        want = _field_conductor(self.main, self.lines)
        if self.conductor < 1 or self.conductor % want:
            raise PrecondViolation(
                f"conductor {self.conductor} does not contain the coefficients "
                f"(need a multiple of {want})"
            )

    @property
    def total_degree(self) -> int:
        return self.main.degree + len(self.lines)

    def to_json(self) -> dict:
        data = {
            "family": self.family,
            "d": self.d,
            "conductor": self.conductor,
            "main": self.main.to_json(),
            "lines": [[c.to_json() for c in line.coeffs] for line in self.lines],
        }
        if self.degenerate:
            data["degenerate"] = True
        if self.predicted_zeta is not None:
            data["predicted_zeta"] = self.predicted_zeta.to_json()
        return data

    @staticmethod
    def from_json(data: dict) -> "CurveSpec":
        lines = tuple(
            LineForm(*(CycloNumber.from_json(c) for c in entry))
            for entry in data["lines"]
        )
        predicted = data.get("predicted_zeta")
        return CurveSpec(
            family=data["family"],
            d=data["d"],
            main=MPoly.from_json(data["main"]),
            lines=lines,
            conductor=data["conductor"],
            degenerate=data.get("degenerate", False),
            predicted_zeta=RootOfUnity.from_json(predicted) if predicted else None,
        )


@dataclass(frozen=True)
class StratumLabel:
    """Verified stratum membership: zeta class, realizability, curve genus."""

    zeta: RootOfUnity
    realizable: bool
    genus: int

    def __post_init__(self):
        if not self.zeta.in_upper_half_plane():
            raise PrecondViolation("stratum label must lie in the closed upper half plane")

    def to_json(self) -> dict:
        return {
            "zeta": self.zeta.to_json(),
            "realizable": self.realizable,
            "genus": self.genus,
        }


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


_MINUS_ONE = RootOfUnity(2, 1)


def _as_root(tau) -> RootOfUnity:
    if isinstance(tau, RootOfUnity):
        return tau
    if tau == -1:
        return _MINUS_ONE
    if tau == 1:
        return RootOfUnity(1, 0)
    raise PrecondViolation(f"expected a root of unity, got {tau!r}")


def _check_taus(d: int, taus, count: int = 3) -> tuple[RootOfUnity, ...]:
    if not isinstance(d, int) or d < 2:
        raise PrecondViolation(f"degree parameter must be an integer >= 2, got {d!r}")
    roots = tuple(_as_root(t) for t in taus)
    if len(roots) != count:
        raise PrecondViolation(f"expected {count} pencil parameters, got {len(roots)}")
    for t in roots:
        if t**d != _MINUS_ONE:
            raise PrecondViolation(f"{t!r} to the power {d} must equal -1")
    return roots


def kummer_construct(d: int, taus, variant: int) -> CurveSpec:
    """Pull the line arrangement back through [x:y:z] -> [x^d:y^d:z^d].

    Each tau_i with tau_i^d = -1 selects a line in one of the three pencils
    through a coordinate vertex; the pullback of a general line together
    with three pencil lines is a hat-family member.  The returned curve is
    written in coordinates where the three tangent lines are the
    coordinate triangle, and carries the predicted stratum label:
    variant 1 -> (tau1*tau2*tau3)^2, variant 2 -> tau1/tau2, variant 3
    (three concurrent pencil lines, degenerate) -> 1.
    """
    roots = _check_taus(d, taus)
    if variant == 3:
        return degeneration_member(d, roots, Fraction(0))
    if variant not in (1, 2):
        raise PrecondViolation(f"variant must be 1, 2 or 3, got {variant!r}")
    t1, t2, t3 = roots
    n = _lcm(_lcm(t1.order, t2.order), _lcm(t3.order, 1))
    v1, v2, v3 = t1.value(n), t2.value(n), t3.value(n)
    if variant == 1:
        tau = v1 * v2 * v3
        x1 = MPoly.linear(tau, 1, 1)
        y1 = MPoly.linear(tau / v3, 1 / v3, tau / v3)
        z1 = MPoly.linear(v2 * tau, v2 / tau, v2)
        predicted = half_plane_class((t1 * t2 * t3) ** 2, d)
    else:
        if t1 == t2:
            raise PrecondViolation("variant 2 requires tau1 != tau2")
        x1 = MPoly.linear(1, 1, 1)
        y1 = MPoly.linear(v3, v3, 0)
        z1 = MPoly.linear(v3 * v1, v3 * v2, 0)
        predicted = half_plane_class(t1 * t2.inverse(), d)
    main = x1**d + y1**d + z1**d
    lines = coordinate_triangle()
    return CurveSpec(
        family="hat",
        d=d,
        main=main,
        lines=lines,
        conductor=_field_conductor(main, lines),
        predicted_zeta=predicted,
    )


def degeneration_member(d: int, taus, t) -> CurveSpec:
    """A smooth-plus-tangents member that degenerates onto a triple point.

    The three tangent lines lie in the pencil through [0:0:1]; at t = 0
    they become concurrent (the returned spec is flagged degenerate), and
    for small rational t != 0 the member lands in the zeta = 1 stratum:
    the main curve is x^d + y^d + z^d - t*z*(x^d + y^d)/(x - tau3*y) and
    the tangency points are three aligned flexes.
    """
    roots = _check_taus(d, taus)
    if d <= 2:
        raise PrecondViolation("the degeneration family needs d > 2")
    if len({(r.order, r.exponent) for r in roots}) != 3:
        raise PrecondViolation("pencil parameters must be pairwise distinct")
    t = Fraction(t)
    t1, t2, t3 = roots
    n = _lcm(_lcm(t1.order, t2.order), t3.order)
    v1, v2, v3 = t1.value(n), t2.value(n), t3.value(n)
    xd_plus_yd = (
        MPoly.monomial((d, 0, 0)) + MPoly.monomial((0, d, 0))
    )
    quotient = exact_divide(xd_plus_yd, MPoly.linear(1, -v3, 0))
    if quotient is None:
        raise DivisionNotExact("x^d + y^d is not divisible by x - tau3*y")
    fermat = xd_plus_yd + MPoly.monomial((0, 0, d))
    main = fermat - MPoly.variable("z") * quotient * t
    lines = (
        LineForm(1, -v1, 0),
        LineForm(1, -v2, 0),
        LineForm(1, -v3, -t),
    )
    return CurveSpec(
        family="hat",
        d=d,
        main=main,
        lines=lines,
        conductor=_field_conductor(main, lines),
        degenerate=(t == 0),
        predicted_zeta=RootOfUnity(1, 0),
    )


def tricuspidal_quartic() -> CurveSpec:
    """The rational quartic with three cusps at the coordinate vertices."""
    x, y, z = (MPoly.variable(v) for v in _VARS)
    main = x**2 * y**2 + y**2 * z**2 + x**2 * z**2 + x * y * z * (x + y - z) * 2
    return CurveSpec(
        family="sigma",
        d=2,
        main=main,
        lines=(),
        conductor=1,
        predicted_zeta=_MINUS_ONE,
    )


def stratum_representative(d: int, zeta: RootOfUnity) -> CurveSpec:
    """A hat-family curve whose verified label is the class of zeta.

    Chooses among the pullback variants: variant 1 with tau = -1 covers
    zeta = 1 for odd d, variant 2 covers every zeta != 1, and the
    degeneration member (at t = 1/100) covers zeta = 1 for even d.
    """
    cls = half_plane_class(zeta, d)
    if not stratum_realizable(d, cls):
        raise PrecondViolation(f"stratum (d={d}, zeta={cls!r}) has no members")
    if cls.is_one():
        if d % 2:
            return kummer_construct(d, (_MINUS_ONE,) * 3, 1)
        taus = tuple(RootOfUnity(2 * d, j) for j in (1, 3, 5))
        return degeneration_member(d, taus, Fraction(1, 100))
    k = cls.exponent * (d // cls.order)
    tau1 = RootOfUnity(2 * d, 2 * k + 1)
    tau2 = RootOfUnity(2 * d, 1)
    return kummer_construct(d, (tau1, tau2, tau2), 2)


# ---------------------------------------------------------------------------
# smoothness
# ---------------------------------------------------------------------------


def _shifted_partials(f: MPoly) -> tuple[MPoly, MPoly, MPoly]:
    """Partials of f after a coordinate shift making all three z-regular.

    The shift (x, y, z) -> (x + a*z, y + b*z, z) is chosen so that every
    partial derivative has a nonzero coefficient of z^(deg-1); then
    specialising a resultant in z at any (x0, y0) never degenerates.
    """
    fx, fy, fz = partials(f)
    if fx.is_zero() and fy.is_zero() and fz.is_zero():
        raise NotSmooth("zero gradient")
    limit = 6 * f.degree + 3
    for s in range(limit * limit):
        a, b = s % limit, s // limit
        p = (a, b, 1)
        gx = fx.evaluate(p)
        gy = fy.evaluate(p)
        gz = gx * a + gy * b + fz.evaluate(p)
        if not (gx.is_zero() or gy.is_zero() or gz.is_zero()):
            shift = [[1, 0, a], [0, 1, b], [0, 0, 1]]
            return partials(linear_substitute(f, shift))
    # a gradient component vanishing on the whole grid forces a base point
    raise NotSmooth("gradient components share a zero on every test line")


def smoothness_check(f: MPoly) -> str:
    """Certify that f = 0 is a smooth plane curve, or raise NotSmooth.

    A pencil of resultants eliminates z from the gradient: a singular
    point forces a common factor of every member of the pencil, while at a
    nonsingular point at most deg-1 pencil members can vanish (one per
    root of f_x in z).  So, after z-regularising, a nonconstant gcd across
    deg members is equivalent to a singular point.  For degrees above 6
    only 3 members are sampled and the result is marked probabilistic.
    """
    deg = f.degree
    if deg == 0:
        raise PrecondViolation("constant polynomial is not a curve")
    if deg == 1:
        return "exact"
    exact = deg <= 6
    needed = deg if exact else 3
    g1, g2, g3 = _shifted_partials(f)
    if g1.is_zero() or g2.is_zero() or g3.is_zero():
        raise NotSmooth("a partial derivative vanishes identically")
    running: BinForm | None = None
    nonzero = 0
    vanished = 0
    u = 0
    while nonzero < needed and vanished < needed:
        r = resultant_wrt(g1, g2 + g3 * u, "z")
        u += 1
        if r.is_zero():
            vanished += 1
            continue
        nonzero += 1
        running = r if running is None else _binform_gcd(running, r)
        if running.degree == 0:
            return "exact" if exact else "probabilistic"
    if vanished >= needed:
        raise NotSmooth("gradient components share a common factor")
    raise NotSmooth(
        "pencil resultants share the factor "
        f"{running!r}" + ("" if exact else " (probabilistic mode)")
    )


def _binform_gcd(a: BinForm, b: BinForm) -> BinForm:
    from .mpoly import binform_gcd

    return binform_gcd(a, b)


# ---------------------------------------------------------------------------
# verification: hat family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HatCertificate:
    """Successful hat verification: label plus the data used to read it."""

    label: StratumLabel
    matrix: tuple[tuple[CycloNumber, ...], ...]
    restrictions: tuple[BinForm, BinForm, BinForm]
    tangents: tuple[tuple[CycloNumber, CycloNumber], ...]
    smoothness: str
    warnings: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "label": self.label.to_json(),
            "matrix": [[c.to_json() for c in row] for row in self.matrix],
            "restrictions": [
                {"axis": _VARS[i], "coeffs": [c.to_json() for c in b.coeffs]}
                for i, b in enumerate(self.restrictions)
            ],
            "tangents": [[a.to_json(), b.to_json()] for a, b in self.tangents],
            "smoothness": self.smoothness,
            "warnings": list(self.warnings),
        }


def _invert3(rows) -> list[list[CycloNumber]]:
    det = det3(rows)
    if det.is_zero():
        raise NotTriangular("lines are concurrent or repeated")
    m = [[CycloNumber.from_rational(0) if c == 0 else c for c in row] for row in rows]
    cof = [
        [
            m[(i + 1) % 3][(j + 1) % 3] * m[(i + 2) % 3][(j + 2) % 3]
            - m[(i + 1) % 3][(j + 2) % 3] * m[(i + 2) % 3][(j + 1) % 3]
            for i in range(3)
        ]
        for j in range(3)
    ]
    return [[c / det for c in row] for row in cof]


def _axis_restriction(f: MPoly, axis: int) -> BinForm:
    others = [i for i in range(3) if i != axis]
    coeffs = [CycloNumber.from_rational(0)] * (f.degree + 1)
    for e, c in f.terms.items():
        if e[axis] == 0:
            coeffs[e[others[0]]] = c
    return BinForm(coeffs, (_VARS[others[0]], _VARS[others[1]]))


def verify_hat(c: CurveSpec) -> HatCertificate:
    """Certify membership in the smooth-plus-tangent-triangle family.

    Checks, in order: the lines form a triangle; the main curve is smooth;
    each line meets the curve at a single point with full multiplicity.
    The curve is then rewritten in coordinates where the lines are the
    coordinate triangle and the first two tangency forms are proportional
    to (y + z)^d and (x + z)^d; the stratum label is the ratio read from
    the third restriction.  No d-th roots are extracted: the label is a
    product of coefficient ratios of the three tangency forms, and its
    d-th power is 1 identically because opposite vertex coefficients
    cancel in pairs.
    """
    if c.family != "hat":
        raise PrecondViolation(f"verify_hat expects a hat curve, got {c.family!r}")
    d = c.d
    rows = [line.coeffs for line in c.lines]
    if det3(rows).is_zero():
        raise NotTriangular("line components are concurrent or repeated")
    normalized = linear_substitute(c.main, _invert3(rows))
    restrictions = tuple(_axis_restriction(normalized, axis) for axis in range(3))
    forms: list[tuple[CycloNumber, CycloNumber]] = []
    for axis, b in enumerate(restrictions):
        res = dth_power_test(b, d)
        if res is None:
            raise NotTangentAtOnePoint(
                f"restriction to line {axis + 1} is not a d-th power"
            )
        _, (p, q) = res
        if p.is_zero() or q.is_zero():
            raise NotNormalizable(
                f"tangency point of line {axis + 1} sits on another line"
            )
        forms.append((p, q))
    smooth_mode = smoothness_check(c.main)
    (gamma, delta), (alpha, beta), (eps, phi) = forms
    zeta_value = (alpha * delta * phi) / (beta * gamma * eps)
    root = classify_root_of_unity(zeta_value)
    if root is None:  # pragma: no cover - excluded by the vertex identities
        raise NotNormalizable("tangency ratio is not a root of unity")
    label_root = half_plane_class(root, d)
    realizable = stratum_realizable(d, label_root)
    warnings = ()
    if not realizable:
        warnings = ("stratum (2, 1) admits no curve: non-reduced equation",)
    label = StratumLabel(zeta=label_root, realizable=realizable, genus=comb(d - 1, 2))
    return HatCertificate(
        label=label,
        matrix=tuple(tuple(r) for r in rows),
        restrictions=restrictions,
        tangents=tuple(forms),
        smoothness=smooth_mode,
        warnings=warnings,
    )


# ---------------------------------------------------------------------------
# verification: sigma family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaCertificate:
    """Successful sigma verification: label, polygon and edge data."""

    label: StratumLabel
    polygon: tuple[tuple[int, int], ...]
    edges: tuple[BinForm, BinForm, BinForm]
    warnings: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "label": self.label.to_json(),
            "polygon": [list(v) for v in self.polygon],
            "edges": [
                {
                    "cofactor": list(b.cofactor) if b.cofactor else None,
                    "coeffs": [c.to_json() for c in b.coeffs],
                }
                for b in self.edges
            ],
            "warnings": list(self.warnings),
        }


def _vertex_slice(f: MPoly, axis: int, local_degree: int) -> BinForm:
    """Terms of local degree ``local_degree`` at the coordinate vertex.

    At the vertex where only the ``axis`` coordinate is nonzero, a
    monomial has local degree (total degree - axis exponent); the slice is
    a binary form in the other two variables.
    """
    others = [i for i in range(3) if i != axis]
    coeffs = [CycloNumber.from_rational(0)] * (local_degree + 1)
    for e, c in f.terms.items():
        if f.degree - e[axis] == local_degree:
            coeffs[e[others[0]]] = c
    return BinForm(coeffs, (_VARS[others[0]], _VARS[others[1]]))


def verify_sigma(c: CurveSpec) -> SigmaCertificate:
    """Certify membership in the three-cusp family of degree 2d.

    The Newton polygon in the z-chart must be the triangle with vertices
    (0, d), (d, d), (d, 0); the three edge polynomials must be d-th powers
    of linear forms; and at each coordinate vertex the local degree-d part
    must be coprime to the local degree-(d+1) part, which pins the local
    singularity type u^d + v^(d+1).  The label is the coefficient ratio of
    the diagonal edge form.
    """
    if c.family != "sigma":
        raise PrecondViolation(f"verify_sigma expects a sigma curve, got {c.family!r}")
    d = c.d
    polygon = newton_polygon(c.main, "z")
    triangle = NewtonPolygon("z", [(0, d), (d, d), (d, 0)])
    if polygon != triangle:
        raise WrongPolygon(
            f"Newton polygon {polygon.vertices} is not the triangle "
            f"(0,{d}), ({d},{d}), ({d},0)"
        )
    names = ("top", "right", "diagonal")
    endpoints = (((0, d), (d, d)), ((d, d), (d, 0)), ((d, 0), (0, d)))
    edges = []
    linear_forms = []
    for name, edge in zip(names, endpoints):
        b = edge_polynomial(c.main, "z", edge)
        res = dth_power_test(b, d)
        if res is None:
            raise EdgeNotPower(f"{name} edge polynomial is not a d-th power")
        edges.append(b)
        linear_forms.append(res[1])
    # cusp type at each vertex: [0:1:0] sees the top edge, [1:0:0] the
    # right edge, [0:0:1] the diagonal edge
    for name, axis in (("top", 1), ("right", 0), ("diagonal", 2)):
        part_d = _vertex_slice(c.main, axis, d)
        part_d1 = _vertex_slice(c.main, axis, d + 1)
        if part_d1.is_zero() or not coprime_forms(part_d, part_d1):
            raise LocalTypeUnverified(
                f"vertex facing the {name} edge: degree-{d} and degree-{d + 1} "
                "parts share a root"
            )
    p, q = linear_forms[2]
    if q.is_zero():  # pragma: no cover - both endpoints are hull vertices
        raise EdgeNotPower("diagonal edge form is a pure power of one variable")
    root = classify_root_of_unity(p / q)
    if root is None or (d * root.exponent) % root.order:
        raise EdgeNotPower("diagonal edge ratio is not a d-th root of unity")
    label_root = half_plane_class(root, d)
    realizable = stratum_realizable(d, label_root)
    warnings = ()
    if not realizable:
        warnings = ("stratum (2, 1) admits no curve: non-reduced equation",)
    label = StratumLabel(zeta=label_root, realizable=realizable, genus=comb(d - 1, 2))
    return SigmaCertificate(
        label=label,
        polygon=polygon.vertices,
        edges=tuple(edges),
        warnings=warnings,
    )


# ---------------------------------------------------------------------------
# Cremona involution, Galois conjugation, intersection types
# ---------------------------------------------------------------------------


def cremona_map(c: CurveSpec) -> CurveSpec:
    """Apply the standard quadratic involution [x:y:z] -> [yz:xz:xy].

    Exchanges tilde and hat members whose lines are the coordinate
    triangle: the pullback of the main curve acquires a monomial factor
    x^a y^b z^c recording the multiplicities of the curve at the opposite
    vertices, and stripping it leaves the partner curve.  Applying the map
    twice recovers the input up to a scalar.
    """
    if c.family not in ("tilde", "hat"):
        raise PrecondViolation(f"cremona_map expects tilde or hat, got {c.family!r}")
    triangle = coordinate_triangle()
    if not all(line in triangle for line in c.lines):
        raise NotNormalized("line components must be the coordinate triangle")
    mults = tuple(
        c.main.degree - max(e[i] for e in c.main.terms) for i in range(3)
    )
    expected = (0, 0, 0) if c.family == "hat" else (c.d,) * 3
    if mults != expected:
        raise UnexpectedMultiplicity(
            f"vertex multiplicities {mults} do not match a {c.family} member "
            f"(expected {expected})"
        )
    pulled_terms: dict[tuple[int, int, int], CycloNumber] = {}
    for (a, b, e), coeff in c.main.terms.items():
        key = (b + e, a + e, a + b)
        cur = pulled_terms.get(key)
        pulled_terms[key] = coeff if cur is None else cur + coeff
    pulled = MPoly(2 * c.main.degree, pulled_terms)
    stripped, removed = pulled.strip_monomial()
    if removed != mults:
        raise UnexpectedMultiplicity(
            f"pullback content {removed} does not match multiplicities {mults}"
        )
    return CurveSpec(
        family="tilde" if c.family == "hat" else "hat",
        d=c.d,
        main=stripped,
        lines=triangle,
        conductor=c.conductor,
        predicted_zeta=c.predicted_zeta,
    )


def galois_conjugate_curve(c: CurveSpec, k: int) -> CurveSpec:
    """Apply zeta_N -> zeta_N^k to every coefficient of the curve."""
    if gcd(k, c.conductor) != 1:
        raise NotCoprime(f"k = {k} shares a factor with the conductor {c.conductor}")
    predicted = c.predicted_zeta
    if predicted is not None and gcd(k, predicted.order) == 1:
        predicted = RootOfUnity(predicted.order, predicted.exponent * k)
    else:
        predicted = None
    return CurveSpec(
        family=c.family,
        d=c.d,
        main=c.main.galois(k),
        lines=tuple(
            LineForm(*(v.galois(k) for v in line.coeffs)) for line in c.lines
        ),
        conductor=c.conductor,
        degenerate=c.degenerate,
        predicted_zeta=predicted,
    )


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = int(num**0.5 + 0.5), int(den**0.5 + 0.5)
    # float guess, exact confirmation
    while rn * rn > num:
        rn -= 1
    while rn * rn < num:
        rn += 1
    while rd * rd > den:
        rd -= 1
    while rd * rd < den:
        rd += 1
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _squarefree_split(n: int) -> tuple[int, int]:
    """Write n > 0 as m*m*D with D squarefree, by trial division."""
    m, d = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            m *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    return m, d * n


def _gauss_sum(p: int) -> CycloNumber:
    """Sum of legendre(a, p) * zeta_p^a; squares to p if p = 1 mod 4, else -p."""
    total = CycloNumber.from_rational(0, p)
    for a in range(1, p):
        term = zeta(p, a)
        total = total + term if pow(a, (p - 1) // 2, p) == 1 else total - term
    return total


def _rational_sqrt_in_field(q: Fraction, conductor: int) -> Optional[CycloNumber]:
    """A square root of the rational q in Q(zeta_conductor), or None.

    sqrt(p) sits in the p-th (p = 1 mod 4), 4p-th or 8-th cyclotomic field,
    with Gauss sums as explicit witnesses; a general q reduces to its
    squarefree part.  The candidate is squared and compared before being
    returned, so the classical sign bookkeeping is double-checked.
    """
    if q == 0:
        return CycloNumber.from_rational(0)
    m, squarefree = _squarefree_split(abs(q.numerator) * q.denominator)
    scale = Fraction(m, q.denominator)
    candidate = CycloNumber.from_rational(scale)
    sign = 1
    if squarefree % 2 == 0:
        if conductor % 8:
            return None
        candidate = candidate * (zeta(8, 1) + zeta(8, 7))
        squarefree //= 2
    p = 3
    while squarefree > 1:
        while squarefree % p:
            p += 2
        squarefree //= p
        if conductor % p:
            return None
        candidate = candidate * _gauss_sum(p)
        if p % 4 == 3:
            sign = -sign
    if sign != (-1 if q < 0 else 1):
        if conductor % 4:
            return None
        candidate = candidate * zeta(4, 1)
    if (candidate * candidate - CycloNumber.from_rational(q)).is_zero():
        return candidate
    return None  # pragma: no cover - the sign bookkeeping above is exact


def _field_sqrt(a: CycloNumber, conductor: int) -> Optional[CycloNumber]:
    """A square root of a in Q(zeta_conductor), for the shapes we meet.

    Handles rational multiples of roots of unity: the unit part is halved
    inside the torsion of the field, the rational part goes through
    quadratic Gauss sums.  Returns None (possibly missing an exotic square
    root) otherwise; a returned value always squares back to a.
    """
    if a.is_zero():
        return CycloNumber.from_rational(0)
    norm = a * a.conj()
    if not norm.is_rational():
        return None
    r = _rational_sqrt(norm.as_rational())
    if r is None:
        return None
    torsion = conductor if conductor % 2 == 0 else 2 * conductor
    for signed in (r, -r):
        unit = a / CycloNumber.from_rational(signed)
        root = classify_root_of_unity(unit)
        if root is None:
            continue
        half: Optional[RootOfUnity]
        if root.exponent % 2 == 0:
            half = RootOfUnity(root.order, root.exponent // 2)
        elif torsion % (2 * root.order) == 0:
            half = RootOfUnity(2 * root.order, root.exponent)
        else:
            half = None
        if half is None:
            continue
        rational_part = _rational_sqrt_in_field(Fraction(signed), conductor)
        if rational_part is None:
            continue
        value = half.value(conductor if conductor % half.order == 0 else half.order)
        candidate = value * rational_part
        if (candidate * candidate - a).is_zero():
            return candidate
    return None


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def _find_unit_root(coeffs: list[CycloNumber], torsion: int) -> Optional[CycloNumber]:
    """A root of sum(c_t q^t) of the form rational * torsion unit, or None.

    For a fixed unit u, valid rational scales q are common roots of the
    coordinate polynomials of sum(c_t u^t q^t), so rational-root candidates
    of any one nonzero coordinate suffice; each candidate is then checked
    against the full cyclotomic polynomial.
    """
    k = len(coeffs) - 1
    for j in range(torsion):
        u = zeta(torsion, j)
        weighted = []
        acc = CycloNumber.from_rational(1, torsion)
        for c in coeffs:
            weighted.append(c * acc)
            acc = acc * u
        common = 1
        for w in weighted:
            common = common * w.conductor // gcd(common, w.conductor)
        vecs = [w.lift(common).coeffs for w in weighted]
        width = len(vecs[0])
        candidates: set[Fraction] = set()
        for i in range(width):
            column = [vec[i] for vec in vecs]
            if not any(column):
                continue
            den = 1
            for f in column:
                den = den * f.denominator // gcd(den, f.denominator)
            ints = [int(f * den) for f in column]
            low = next(t for t in range(k + 1) if ints[t])
            high = next(t for t in range(k, -1, -1) if ints[t])
            if low == high:
                break  # this coordinate forces q = 0, not a root here
            for p in _divisors(ints[low]):
                for q in _divisors(ints[high]):
                    candidates.add(Fraction(p, q))
                    candidates.add(Fraction(-p, q))
            break
        for cand in candidates:
            total = CycloNumber.from_rational(0)
            power = CycloNumber.from_rational(1)
            root = u * CycloNumber.from_rational(cand)
            for c in coeffs:
                total = total + c * power
                power = power * root
            if total.is_zero():
                return root
    return None


def _peel_unit_roots(part: BinForm, torsion: int) -> list[CycloNumber]:
    """Divide out roots found by _find_unit_root; returns leftover coefficients."""
    coeffs = list(part.coeffs)
    while len(coeffs) > 1:
        if coeffs[-1].is_zero():  # root at infinity: the second variable divides
            coeffs.pop()
            continue
        if coeffs[0].is_zero():
            coeffs.pop(0)
            continue
        root = _find_unit_root(coeffs, torsion)
        if root is None:
            return coeffs
        k = len(coeffs) - 1
        out: list[CycloNumber] = [CycloNumber.from_rational(0)] * k
        out[k - 1] = coeffs[k]
        for t in range(k - 1, 0, -1):
            out[t - 1] = coeffs[t] + root * out[t]
        coeffs = out
    return coeffs


def _splits_into_lines(b: BinForm, conductor: int) -> bool:
    """Whether every root of b lies in the working field (best effort).

    Roots of the shape rational * root-of-unity are peeled off directly at
    any degree; a leftover quadratic splits when its discriminant has a
    recognisable square root.  A leftover of higher degree is reported as
    non-split even though an exotic factorization may exist.
    """
    torsion = conductor if conductor % 2 == 0 else 2 * conductor
    for _, part in squarefree_decomposition(b):
        if part.degree <= 1:
            continue
        rest = _peel_unit_roots(part, torsion)
        if len(rest) == 1:
            continue
        if len(rest) != 3:
            return False
        cc, bb, aa = rest  # a*u^2 + b*u*v + c*v^2
        disc = bb * bb - aa * cc * 4
        if _field_sqrt(disc, conductor) is None:
            return False
    return True


@dataclass(frozen=True)
class IntersectionType:
    """Per-line intersection multiplicities of the main curve, and their gcd."""

    d: int
    multiplicities: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    s: int
    split: tuple[bool, bool, bool]

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "multiplicities": [list(m) for m in self.multiplicities],
            "s": self.s,
            "split": list(self.split),
        }


def artal_shirane_type(c: CurveSpec, strict: bool = False) -> IntersectionType:
    """Intersection multiplicity tuples of the main curve with its lines.

    Multiplicities come from the squarefree decomposition of the
    restriction of the main curve to each line, which is exact regardless
    of whether the individual intersection points have coordinates in the
    working field.  ``split`` records, per line, whether every point does;
    with strict=True a non-splitting restriction raises
    FactorizationIncomplete (carrying the partial type).
    """
    if c.family not in ("hat", "artal_shirane"):
        raise PrecondViolation(
            f"intersection types apply to hat or artal_shirane curves, got {c.family!r}"
        )
    mults = []
    split_flags = []
    for line in c.lines:
        b = restrict_to_line(c.main, line)
        if b.is_zero():
            raise PrecondViolation("a line component divides the main curve")
        mults.append(multiplicity_multiset(b))
        split_flags.append(_splits_into_lines(b, c.conductor))
    entries = [m for ms in mults for m in ms]
    s = 0
    for m in entries:
        s = gcd(s, m)
    result = IntersectionType(
        d=c.d,
        multiplicities=tuple(mults),
        s=s,
        split=tuple(split_flags),
    )
    if strict and not all(split_flags):
        raise FactorizationIncomplete(
            "a restriction does not split into linear factors over the working field",
            partial=result,
        )
    return result
