"""Exact arithmetic foundation: cyclotomic phases, tagged Laurent monomials,
sparse polynomials and truncated power series.

All phase factors are powers of A = exp(i*pi/6), a primitive 12th root of
unity.  A generates a degree-4 extension of Q with minimal polynomial
z^4 - z^2 + 1, so every phase sum is stored exactly as four rational
coordinates in the power basis {1, A, A^2, A^3}.  Floating point never
enters the filtering logic; the cancellations the engine relies on
(sums of A^k collapsing to 0 or +-1) are exact.

Monomials carry nine integer exponents: the unsigned axis tags u, v, w
(non-negative), the signed direction tags l, m, n, and the Fourier symbols
e_p, e_q, e_r.  Polynomials are sparse maps monomial -> cyclotomic number;
series are truncated arrays of polynomials indexed by the power of x.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Iterable, NamedTuple

_ZETA = cmath.exp(1j * cmath.pi / 6)

# zeta^k in the power basis, k = 0..11; zeta^4 = zeta^2 - 1 and zeta^6 = -1.
_POWER_TABLE = [
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
    (-1, 0, 1, 0),
    (0, -1, 0, 1),
    (-1, 0, 0, 0),
    (0, -1, 0, 0),
    (0, 0, -1, 0),
    (0, 0, 0, -1),
    (1, 0, -1, 0),
    (0, 1, 0, -1),
]


class CycloNum:
    """Element of Q(A), A = exp(i*pi/6), in the basis {1, A, A^2, A^3}."""

    __slots__ = ("coords",)

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self.coords = (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3))

    @classmethod
    def _raw(cls, coords) -> "CycloNum":
        obj = object.__new__(cls)
        obj.coords = coords
        return obj

    @classmethod
    def from_power(cls, k: int) -> "CycloNum":
        """Canonical A^k for any signed integer k."""
        c = _POWER_TABLE[k % 12]
        return cls(*c)

    @classmethod
    def from_rational(cls, q) -> "CycloNum":
        return cls(q, 0, 0, 0)

    def __add__(self, other):
        if not isinstance(other, CycloNum):
            return NotImplemented
        a, b = self.coords, other.coords
        return CycloNum._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    def __sub__(self, other):
        if not isinstance(other, CycloNum):
            return NotImplemented
        a, b = self.coords, other.coords
        return CycloNum._raw((a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]))

    def __neg__(self):
        a = self.coords
        return CycloNum._raw((-a[0], -a[1], -a[2], -a[3]))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            a = self.coords
            return CycloNum._raw((a[0] * other, a[1] * other, a[2] * other, a[3] * other))
        if not isinstance(other, CycloNum):
            return NotImplemented
        a, b = self.coords, other.coords
        # raw convolution up to degree 6, then reduce with z^4 = z^2 - 1
        c0 = a[0] * b[0]
        c1 = a[0] * b[1] + a[1] * b[0]
        c2 = a[0] * b[2] + a[1] * b[1] + a[2] * b[0]
        c3 = a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0]
        c4 = a[1] * b[3] + a[2] * b[2] + a[3] * b[1]
        c5 = a[2] * b[3] + a[3] * b[2]
        c6 = a[3] * b[3]
        # z^6 = -1, z^5 = z^3 - z, z^4 = z^2 - 1
        return CycloNum._raw((c0 - c4 - c6, c1 - c5, c2 + c4, c3 + c5))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            inv = Fraction(1, 1) / other
            return self * inv
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNum.from_rational(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def is_rational(self) -> bool:
        return not self.coords[1] and not self.coords[2] and not self.coords[3]

    def rational_part(self) -> Fraction:
        """The value as a Fraction; raises if the number is not rational."""
        if not self.is_rational():
            raise ValueError(f"not a rational cyclotomic number: {self!r}")
        return self.coords[0]

    def conjugate(self) -> "CycloNum":
        # complex conjugation maps A -> A^-1 = A^11
        a = self.coords
        out = CycloNum.from_rational(a[0])
        for k, coef in ((1, a[1]), (2, a[2]), (3, a[3])):
            if coef:
                out = out + CycloNum.from_power(-k) * coef
        return out

    def as_complex(self) -> complex:
        a = self.coords
        return (
            complex(a[0])
            + complex(a[1]) * _ZETA
            + complex(a[2]) * _ZETA**2
            + complex(a[3]) * _ZETA**3
        )

    def __repr__(self):
        return f"CycloNum{self.coords}"

    def __str__(self):
        names = ["", "A", "A^2", "A^3"]
        parts = []
        for coef, name in zip(self.coords, names):
            if coef:
                parts.append(f"{coef}{('*' + name) if name else ''}")
        return " + ".join(parts) if parts else "0"


CYCLO_ZERO = CycloNum()
CYCLO_ONE = CycloNum(1)


def cyclo_pow(k: int) -> CycloNum:
    """Canonical A^k (k reduced mod 12)."""
    return CycloNum.from_power(k)


class TagMonomial(NamedTuple):
    """Exponent tuple of a tagged Laurent monomial.

    du, dv, dw are the unsigned axis-usage exponents (never negative in any
    object the engine produces); el, em, en are signed direction exponents;
    ep, eq, er are signed Fourier-symbol exponents.
    """

    du: int = 0
    dv: int = 0
    dw: int = 0
    el: int = 0
    em: int = 0
    en: int = 0
    ep: int = 0
    eq: int = 0
    er: int = 0

    def __mul__(self, other: "TagMonomial") -> "TagMonomial":
        return TagMonomial(*(a + b for a, b in zip(self, other)))

    def reversed_walk(self) -> "TagMonomial":
        """Tag of the reversed traversal: signed exponents flip, unsigned stay."""
        return TagMonomial(
            self.du, self.dv, self.dw,
            -self.el, -self.em, -self.en,
            -self.ep, -self.eq, -self.er,
        )

    @property
    def uvw(self):
        return (self.du, self.dv, self.dw)

    @property
    def lmn(self):
        return (self.el, self.em, self.en)

    @property
    def modes(self):
        return (self.ep, self.eq, self.er)

    def pretty(self) -> str:
        names = ("u", "v", "w", "l", "m", "n", "e_p", "e_q", "e_r")
        parts = [f"{s}^{e}" for s, e in zip(names, self) if e]
        return " ".join(parts) if parts else "1"


MONO_ONE = TagMonomial()


class TaggedPoly:
    """Sparse polynomial: finite map TagMonomial -> CycloNum, no zero values."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[TagMonomial, CycloNum] = {}
        if terms:
            for mono, coef in terms.items() if isinstance(terms, dict) else terms:
                self._accumulate(mono, coef)

    def _accumulate(self, mono: TagMonomial, coef: CycloNum):
        if not isinstance(coef, CycloNum):
            coef = CycloNum.from_rational(coef)
        cur = self.terms.get(mono)
        new = coef if cur is None else cur + coef
        if new:
            self.terms[mono] = new
        elif cur is not None:
            del self.terms[mono]

    @classmethod
    def zero(cls) -> "TaggedPoly":
        return cls()

    @classmethod
    def one(cls) -> "TaggedPoly":
        return cls.term(MONO_ONE, CYCLO_ONE)

    @classmethod
    def term(cls, mono: TagMonomial, coef) -> "TaggedPoly":
        p = cls()
        p._accumulate(mono, coef)
        return p

    @classmethod
    def scalar(cls, value) -> "TaggedPoly":
        return cls.term(MONO_ONE, value)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TaggedPoly.scalar(other)
        if not isinstance(other, TaggedPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, TaggedPoly):
            return NotImplemented
        out = TaggedPoly()
        out.terms = dict(self.terms)
        for mono, coef in other.terms.items():
            out._accumulate(mono, coef)
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        out = TaggedPoly()
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNum)):
            return self.scaled(other)
        if not isinstance(other, TaggedPoly):
            return NotImplemented
        out = TaggedPoly()
        if len(self.terms) > len(other.terms):
            big, small = self.terms, other.terms
        else:
            big, small = other.terms, self.terms
        for m2, c2 in small.items():
            for m1, c1 in big.items():
                out._accumulate(m1 * m2, c1 * c2)
        return out

    __rmul__ = __mul__

    def scaled(self, factor) -> "TaggedPoly":
        if isinstance(factor, (int, Fraction)):
            factor = CycloNum.from_rational(factor)
        if not factor:
            return TaggedPoly()
        out = TaggedPoly()
        out.terms = {m: c * factor for m, c in self.terms.items()}
        return out

    def coefficient(self, mono: TagMonomial) -> CycloNum:
        return self.terms.get(mono, CYCLO_ZERO)

    def map_monomials(self, fn) -> "TaggedPoly":
        """Rebuild with monomials transformed by fn (None drops the term)."""
        out = TaggedPoly()
        for mono, coef in self.terms.items():
            new = fn(mono)
            if new is not None:
                out._accumulate(new, coef)
        return out

    def substitute_lmn_one(self) -> "TaggedPoly":
        """Set l = m = n = 1 (and the mode symbols with them, which are
        locked to the direction tags in every propagator-derived object)."""
        return self.map_monomials(
            lambda m: TagMonomial(m.du, m.dv, m.dw, 0, 0, 0, 0, 0, 0)
        )

    def substitute_uvw_one(self) -> "TaggedPoly":
        return self.map_monomials(
            lambda m: TagMonomial(0, 0, 0, m.el, m.em, m.en, m.ep, m.eq, m.er)
        )

    def substitute_all_tags_one(self) -> "TaggedPoly":
        """Set u = v = w = l = m = n = 1, keep Fourier symbols."""
        return self.map_monomials(
            lambda m: TagMonomial(0, 0, 0, 0, 0, 0, m.ep, m.eq, m.er)
        )

    def project_modes(self, side: int | None = None) -> "TaggedPoly":
        """Exact Fourier mode sum (1/N) sum_{p,q,r}: keep terms whose mode
        exponents all vanish mod `side`; `None` means symbolically large."""

        def keep(m: TagMonomial):
            if side is None:
                ok = m.ep == 0 and m.eq == 0 and m.er == 0
            else:
                ok = m.ep % side == 0 and m.eq % side == 0 and m.er % side == 0
            if not ok:
                return None
            return TagMonomial(m.du, m.dv, m.dw, m.el, m.em, m.en, 0, 0, 0)

        return self.map_monomials(keep)

    def rational_value(self) -> Fraction:
        """Value of a fully scalar polynomial (only the unit monomial)."""
        if not self.terms:
            return Fraction(0)
        if set(self.terms) != {MONO_ONE}:
            raise ValueError("polynomial still carries tags or mode symbols")
        return self.terms[MONO_ONE].rational_part()

    def is_scalar(self) -> bool:
        return not self.terms or set(self.terms) == {MONO_ONE}

    def evalf(self, u=1.0, v=1.0, w=1.0, l=1.0, m=1.0, n=1.0,
              ep=1.0, eq=1.0, er=1.0) -> complex:
        """Numerical evaluation; tag values may be complex."""
        total = 0j
        for mono, coef in self.terms.items():
            val = coef.as_complex()
            for base, expo in zip((u, v, w, l, m, n, ep, eq, er), mono):
                if expo:
                    val *= base ** expo
            total += val
        return total

    def __repr__(self):
        if not self.terms:
            return "TaggedPoly(0)"
        bits = [f"({coef}) {mono.pretty()}" for mono, coef in sorted(self.terms.items())]
        return "TaggedPoly[" + " + ".join(bits) + "]"


class XSeries:
    """Power series in x truncated at a fixed order, TaggedPoly coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[TaggedPoly] | None = None):
        if order < 0:
            raise ValueError("order must be non-negative")
        self.order = order
        cs = list(coeffs) if coeffs is not None else []
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        while len(cs) < order + 1:
            cs.append(TaggedPoly.zero())
        self.coeffs = cs

    @classmethod
    def one(cls, order: int) -> "XSeries":
        s = cls(order)
        s.coeffs[0] = TaggedPoly.one()
        return s

    @classmethod
    def from_scalars(cls, order: int, values) -> "XSeries":
        return cls(order, [TaggedPoly.scalar(v) for v in values])

    def copy(self) -> "XSeries":
        return XSeries(self.order, list(self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __add__(self, other):
        order = min(self.order, other.order)
        return XSeries(order, [self.coeffs[i] + other.coeffs[i] for i in range(order + 1)])

    def __sub__(self, other):
        order = min(self.order, other.order)
        return XSeries(order, [self.coeffs[i] - other.coeffs[i] for i in range(order + 1)])

    def __neg__(self):
        return XSeries(self.order, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNum)):
            return XSeries(self.order, [c * other for c in self.coeffs])
        order = min(self.order, other.order)
        out = [TaggedPoly.zero() for _ in range(order + 1)]
        for i, a in enumerate(self.coeffs[: order + 1]):
            if not a:
                continue
            for j in range(order + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return XSeries(order, out)

    __rmul__ = __mul__

    def shifted(self, k: int) -> "XSeries":
        """Multiply by x^k."""
        return XSeries(self.order, [TaggedPoly.zero()] * k + self.coeffs[: self.order + 1 - k])

    def scalar_coefficients(self) -> list[Fraction]:
        return [c.rational_value() for c in self.coeffs]

    def map_coeffs(self, fn) -> "XSeries":
        return XSeries(self.order, [fn(c) for c in self.coeffs])

    def __repr__(self):
        return f"XSeries(order={self.order}, coeffs={self.coeffs})"


def _unit_constant_term(s: XSeries, what: str):
    if s.coeffs[0] != TaggedPoly.one():
        raise ValueError(f"{what} requires a series with constant term 1")


def _powers_of_deviation(s: XSeries) -> list[XSeries]:
    """[y^0, y^1, ..., y^order] with y = s - 1, truncated at s.order."""
    order = s.order
    y = s.copy()
    y.coeffs[0] = y.coeffs[0] - TaggedPoly.one()
    powers = [XSeries.one(order), y]
    for _ in range(2, order + 1):
        powers.append(powers[-1] * y)
    return powers[: order + 1]


def series_sqrt(s: XSeries) -> XSeries:
    """Binomial expansion of s^(1/2); constant term of s must be 1."""
    _unit_constant_term(s, "series_sqrt")
    powers = _powers_of_deviation(s)
    out = XSeries(s.order)
    coef = Fraction(1)
    for k, yk in enumerate(powers):
        if k > 0:
            coef *= Fraction(2 * (1 - k) + 1, 2 * k)  # C(1/2,k)/C(1/2,k-1)
        out = out + yk * coef
    return out


def series_log(s: XSeries) -> XSeries:
    """log s = -sum_{k>=1} (1-s)^k / k; constant term of s must be 1."""
    _unit_constant_term(s, "series_log")
    powers = _powers_of_deviation(s)
    out = XSeries(s.order)
    for k in range(1, len(powers)):
        sign = Fraction(1, k) if k % 2 == 1 else Fraction(-1, k)
        out = out + powers[k] * sign
    return out


def series_exp(s: XSeries) -> XSeries:
    """exp of a series with zero constant term (inverse of series_log)."""
    if s.coeffs[0]:
        raise ValueError("series_exp requires zero constant term")
    out = XSeries.one(s.order)
    term = XSeries.one(s.order)
    for k in range(1, s.order + 1):
        term = term * s * Fraction(1, k)
        out = out + term
    return out


def project_mode_sum(s: XSeries, side: int | None = None) -> XSeries:
    """Apply the exact per-site Fourier mode sum coefficient-wise.

    A finite geometric sum over p = 0..L-1 of e^(jp) equals L when j = 0
    mod L and vanishes otherwise, so after dividing by the site count the
    projection keeps exactly the terms with all mode exponents = 0 mod L
    (all zero, when L exceeds every exponent in the series).
    """
    return s.map_coeffs(lambda c: c.project_modes(side))
