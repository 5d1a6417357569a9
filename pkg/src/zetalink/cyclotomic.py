"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored in the power basis 1, x, ..., x^(phi(N)-1) of
Q[x]/(Phi_N(x)), where Phi_N is the N-th cyclotomic polynomial and x stands
for zeta_N = exp(2*pi*i/N).  Coefficients are rationals kept as an integer
vector over a single positive denominator, so all arithmetic is integer
arithmetic plus one gcd normalisation per operation.  No floating point is
used anywhere in this module.

Mixed conductors are handled by lifting both operands into Q(zeta_L) with
L = lcm(N1, N2); the power-basis representation there is unique, which makes
equality decidable.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import ZetalinkError


class InvalidOperand(ZetalinkError):
    """Raised for division by zero and malformed field operations."""


class NotDthRoot(ZetalinkError):
    """Raised when a root of unity does not satisfy z^d = 1."""


class InvalidDegree(ZetalinkError):
    """Raised when a degree parameter is outside the supported range."""


class ExcludedOrder(ZetalinkError):
    """Raised for orders whose arithmetic data is degenerate (m in {1,2,3,4,6})."""


def euler_phi(n: int) -> int:
    """Euler totient, by trial-division factorisation."""
    if n < 1:
        raise InvalidDegree(f"totient undefined for {n}")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if m > 1:
        result -= result // m
    return result


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _poly_divmod_int(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials with monic-up-to-sign divisor.
    # Coefficient lists are low degree first.
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c % lead != 0:
            raise ArithmeticError("non-exact cyclotomic division")
        q = c // lead
        out[i] = q
        if q:
            for j, dj in enumerate(den):
                num[i + j] -= q * dj
    if any(num[: len(den) - 1]):
        raise ArithmeticError("non-exact cyclotomic division")
    return out


_CYCLO_CACHE: dict[int, tuple[int, ...]] = {}


def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, low degree first, monic."""
    if n in _CYCLO_CACHE:
        return _CYCLO_CACHE[n]
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in _divisors(n):
        if d != n:
            poly = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
    result = tuple(poly)
    _CYCLO_CACHE[n] = result
    return result


class _FieldTables:
    """Per-conductor reduction data, computed once and cached."""

    def __init__(self, n: int):
        self.n = n
        self.phi = euler_phi(n)
        self.poly = cyclotomic_polynomial(n)
        # reduction[m - phi] expresses x^m modulo Phi_n for phi <= m <= 2*phi - 2
        rows: list[tuple[int, ...]] = []
        row = [-c for c in self.poly[:-1]]
        rows.append(tuple(row))
        for _ in range(self.phi - 2):
            shifted = [0] + row[:-1]
            top = row[-1]
            if top:
                first = rows[0]
                shifted = [s + top * f for s, f in zip(shifted, first)]
            row = shifted
            rows.append(tuple(row))
        self.reduction = rows
        # power[j] = x^j mod Phi_n as an integer vector, for 0 <= j < n
        powers: list[tuple[int, ...]] = []
        vec = [0] * self.phi
        for j in range(n):
            if j < self.phi:
                vec = [0] * self.phi
                vec[j] = 1
            else:
                prev = powers[-1]
                vec = [0] + list(prev[:-1])
                top = prev[-1]
                if top:
                    vec = [v + top * r for v, r in zip(vec, rows[0])]
            powers.append(tuple(vec))
        self.power = powers


_TABLES: dict[int, _FieldTables] = {}


def _tables(n: int) -> _FieldTables:
    t = _TABLES.get(n)
    if t is None:
        t = _FieldTables(n)
        _TABLES[n] = t
    return t


def _normalise(nums: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den == 0:
        raise InvalidOperand("zero denominator")
    if den < 0:
        nums = [-v for v in nums]
        den = -den
    g = den
    for v in nums:
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        nums = [v // g for v in nums]
        den //= g
    if not any(nums):
        return (0,) * len(nums), 1
    return tuple(nums), den


class CycloNumber:
    """An element of Q(zeta_N) in canonical power-basis form."""

    __slots__ = ("conductor", "nums", "den")

    def __init__(self, conductor: int, nums: Sequence[int], den: int = 1):
        phi = _tables(conductor).phi
        if len(nums) != phi:
            raise InvalidOperand(
                f"conductor {conductor} needs {phi} coefficients, got {len(nums)}"
            )
        self.conductor = conductor
        self.nums, self.den = _normalise(nums, den)

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_rational(q: Fraction | int, conductor: int = 1) -> "CycloNumber":
        q = Fraction(q)
        phi = _tables(conductor).phi
        nums = [0] * phi
        nums[0] = q.numerator
        return CycloNumber(conductor, nums, q.denominator)

    @staticmethod
    def from_fractions(conductor: int, coeffs: Iterable[Fraction]) -> "CycloNumber":
        coeffs = [Fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        nums = [int(c * den) for c in coeffs]
        return CycloNumber(conductor, nums, den)

    # -- views -------------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.den) for v in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_one(self) -> bool:
        return self.den == 1 and self.nums[0] == 1 and not any(self.nums[1:])

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise InvalidOperand("not a rational number")
        return Fraction(self.nums[0], self.den)

    # -- conductor handling -------------------------------------------------

    def lift(self, conductor: int) -> "CycloNumber":
        """Rewrite in Q(zeta_M) for a multiple M of the current conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor != 0:
            raise InvalidOperand(
                f"cannot lift conductor {self.conductor} into {conductor}"
            )
        t = _tables(conductor)
        step = conductor // self.conductor
        out = [0] * t.phi
        for i, v in enumerate(self.nums):
            if v:
                row = t.power[(i * step) % conductor]
                for j, r in enumerate(row):
                    if r:
                        out[j] += v * r
        return CycloNumber(conductor, out, self.den)

    @staticmethod
    def _common(a: "CycloNumber", b: "CycloNumber"):
        if a.conductor == b.conductor:
            return a, b
        m = a.conductor * b.conductor // gcd(a.conductor, b.conductor)
        return a.lift(m), b.lift(m)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other, self.conductor)
        if other is NotImplemented:
            return NotImplemented
        a, b = CycloNumber._common(self, other)
        nums = [x * b.den + y * a.den for x, y in zip(a.nums, b.nums)]
        return CycloNumber(a.conductor, nums, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.conductor, [-v for v in self.nums], self.den)

    def __sub__(self, other):
        other = _coerce(other, self.conductor)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other, self.conductor)
        if other is NotImplemented:
            return NotImplemented
        a, b = CycloNumber._common(self, other)
        t = _tables(a.conductor)
        phi = t.phi
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a.nums):
            if x:
                for j, y in enumerate(b.nums):
                    if y:
                        conv[i + j] += x * y
        out = conv[:phi]
        for m in range(phi, 2 * phi - 1):
            c = conv[m]
            if c:
                row = t.reduction[m - phi]
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return CycloNumber(a.conductor, out, a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise InvalidOperand("division by zero")
        t = _tables(self.conductor)
        # extended Euclid over Q[x] against Phi_N
        r0 = [Fraction(c) for c in t.poly]
        r1 = [Fraction(v, self.den) for v in self.nums]
        s0 = [Fraction(0)]
        s1 = [Fraction(1)]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if len(r1) == 1:
                inv_c = 1 / r1[0]
                coeffs = [c * inv_c for c in s1]
                coeffs += [Fraction(0)] * (t.phi - len(coeffs))
                return CycloNumber.from_fractions(self.conductor, coeffs[: t.phi])
            q = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, _frac_poly_sub(r0, _frac_poly_mul(q, r1))
            s0, s1 = s1, _frac_poly_sub(s0, _frac_poly_mul(q, s1))

    def __truediv__(self, other):
        other = _coerce(other, self.conductor)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other, self.conductor) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycloNumber.from_rational(1, self.conductor)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def galois(self, k: int) -> "CycloNumber":
        """Apply the automorphism zeta_N -> zeta_N^k; k must be a unit mod N."""
        n = self.conductor
        if gcd(k, n) != 1:
            raise InvalidOperand(f"{k} is not invertible modulo {n}")
        t = _tables(n)
        out = [0] * t.phi
        for i, v in enumerate(self.nums):
            if v:
                row = t.power[(i * k) % n]
                for j, r in enumerate(row):
                    if r:
                        out[j] += v * r
        return CycloNumber(n, out, self.den)

    def conj(self) -> "CycloNumber":
        """Complex conjugation, zeta -> zeta^(-1)."""
        return self.galois(self.conductor - 1) if self.conductor > 1 else self

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other, self.conductor)
        if other is NotImplemented:
            return NotImplemented
        a, b = CycloNumber._common(self, other)
        return a.nums == b.nums and a.den == b.den

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None  # mixed-conductor equality makes hashing unreliable

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                z = f"z{self.conductor}" + (f"^{i}" if i > 1 else "")
                terms.append(z if c == 1 else f"{c}*{z}")
        return "CycloNumber(0)" if not terms else "CycloNumber(" + " + ".join(terms) + ")"

    # -- serialisation ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "conductor": self.conductor,
            "coeffs": [[c.numerator, c.denominator] for c in self.coeffs],
        }

    @staticmethod
    def from_json(data: dict) -> "CycloNumber":
        coeffs = [Fraction(n, d) for n, d in data["coeffs"]]
        return CycloNumber.from_fractions(data["conductor"], coeffs)


def _coerce(value, conductor: int):
    if isinstance(value, CycloNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return CycloNumber.from_rational(value, conductor)
    return NotImplemented


def _frac_poly_divmod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / b[-1]
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return q


def _frac_poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _frac_poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    out = list(a)
    for i, y in enumerate(b):
        out[i] -= y
    return out


def zeta(n: int, k: int = 1) -> CycloNumber:
    """The root of unity zeta_n^k as a CycloNumber of conductor n."""
    if n < 1:
        raise InvalidDegree(f"bad order {n}")
    t = _tables(n)
    return CycloNumber(n, list(t.power[k % n]))


def field_arith(op: str, a: CycloNumber, b: CycloNumber | None = None) -> CycloNumber:
    """Dispatcher over the basic field operations.

    Binary ops: add, sub, mul, div.  Unary: neg, inv, conj.
    """
    if op in ("add", "sub", "mul", "div"):
        if b is None:
            raise InvalidOperand(f"operation {op} needs two operands")
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        if b.is_zero():
            raise InvalidOperand("division by zero")
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        if a.is_zero():
            raise InvalidOperand("division by zero")
        return a.inverse()
    if op == "conj":
        return a.conj()
    raise InvalidOperand(f"unknown operation {op!r}")


class RootOfUnity:
    """A root of unity stored as exp(2*pi*i*k/n) with n minimal.

    After normalisation either k is coprime to n, or (n, k) = (1, 0).
    """

    __slots__ = ("order", "exponent")

    def __init__(self, order: int, exponent: int):
        if order < 1:
            raise InvalidDegree(f"bad order {order}")
        k = exponent % order
        g = gcd(k, order)
        if k == 0:
            order, k = 1, 0
        elif g > 1:
            order //= g
            k //= g
        self.order = order
        self.exponent = k

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        n = self.order * other.order // gcd(self.order, other.order)
        k = self.exponent * (n // self.order) + other.exponent * (n // other.order)
        return RootOfUnity(n, k)

    def __pow__(self, e: int) -> "RootOfUnity":
        return RootOfUnity(self.order, self.exponent * e)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.exponent)

    def conj(self) -> "RootOfUnity":
        return self.inverse()

    def value(self, conductor: int | None = None) -> CycloNumber:
        v = zeta(self.order, self.exponent)
        return v if conductor is None else v.lift(conductor)

    def is_one(self) -> bool:
        return self.order == 1

    def in_upper_half_plane(self) -> bool:
        """Whether Im >= 0, decided from (order, exponent) alone."""
        return 2 * self.exponent <= self.order

    def __eq__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return self.order == other.order and self.exponent == other.exponent

    def __hash__(self):
        return hash((self.order, self.exponent))

    def __repr__(self):
        if self.order == 1:
            return "RootOfUnity(1)"
        if self.order == 2:
            return "RootOfUnity(-1)"
        e = f"^{self.exponent}" if self.exponent != 1 else ""
        return f"RootOfUnity(z{self.order}{e})"

    def to_json(self) -> dict:
        return {"order": self.order, "exponent": self.exponent}

    @staticmethod
    def from_json(data: dict) -> "RootOfUnity":
        return RootOfUnity(data["order"], data["exponent"])


ONE = RootOfUnity(1, 0)
MINUS_ONE = RootOfUnity(2, 1)


def classify_root_of_unity(a: CycloNumber) -> RootOfUnity | None:
    """Return the (order, exponent) of a if it is a root of unity, else None.

    Torsion units of Q(zeta_N) all lie in the cyclic group of order
    lcm(2, N), so one exact power computation settles membership.
    """
    if a.is_zero():
        return None
    n0 = a.conductor
    bound = n0 if n0 % 2 == 0 else 2 * n0
    if not (a ** bound).is_one():
        return None
    order = bound
    for d in _divisors(bound):
        if (a ** d).is_one():
            order = d
            break
    if order == 1:
        return ONE
    root = zeta(order)
    power = zeta(order, 0)
    for k in range(order):
        if gcd(k, order) == 1 or k == 0:
            if power == a:
                return RootOfUnity(order, k)
        power = power * root
    raise InvalidOperand("inconsistent root-of-unity classification")  # pragma: no cover


def half_plane_class(z: RootOfUnity, d: int) -> RootOfUnity:
    """Normalise a d-th root of unity into the closed upper half plane.

    The representative set {z : z^d = 1, Im z >= 0} contains exactly one of
    each conjugate pair {z, conj(z)}.
    """
    if (d * z.exponent) % z.order != 0:
        raise NotDthRoot(f"{z!r} is not a {d}-th root of unity")
    return z if z.in_upper_half_plane() else z.conj()


def enumerate_strata(d: int) -> list[RootOfUnity]:
    """The d-th roots of unity with Im >= 0, ordered by increasing angle.

    There are floor(d/2) + 1 of them.
    """
    if d < 2:
        raise InvalidDegree(f"degree parameter must be at least 2, got {d}")
    return [RootOfUnity(d, k) for k in range(d // 2 + 1)]


def stratum_realizable(d: int, z: RootOfUnity) -> bool:
    """Whether the class z admits a curve of the family; only (d, z) = (2, 1) fails."""
    half_plane_class(z, d)  # validate that z is a d-th root
    return not (d == 2 and z.is_one())


def arithmetic_tuple_size(m: int) -> int:
    """Number of conjugate pairs of primitive m-th roots, phi(m)/2.

    Orders 1, 2, 3, 4, 6 are excluded: their data collapses (phi(m) <= 2 and
    the pair count carries no information).
    """
    if m in (1, 2, 3, 4, 6):
        raise ExcludedOrder(f"order {m} is excluded")
    if m < 1:
        raise InvalidDegree(f"bad order {m}")
    return euler_phi(m) // 2
