"""Hand-transcribed golden forms of the classical determinant displays.

These are the published closed forms the engine must reproduce term for
term; they are kept separate from the construction code so that the
comparison stays a genuine two-route check.
"""

from __future__ import annotations

from .ring import CycloNum, TagMonomial, TaggedPoly, XSeries


def _poly(entries) -> TaggedPoly:
    return TaggedPoly({TagMonomial(**mono): CycloNum(c) for mono, c in entries})


def pt_determinant_fixture(convention: str = "paper") -> XSeries:
    """Plane-triangular det(I - x Omega) in Fourier symbols.

    Cosines are expanded into symbol pairs: 2 cos(2 pi p / L) = e_p + 1/e_p.
    The two conventions differ only in the leading x^3 piece: the circulant
    bookkeeping yields 8 cos(4 pi (p-q)/L) where the drawn-angle bookkeeping
    yields the constant 8.
    """
    six = [dict(ep=1), dict(ep=-1), dict(eq=1), dict(eq=-1),
           dict(ep=1, eq=-1), dict(ep=-1, eq=1)]
    x1 = _poly([(m, -1) for m in six])
    x3_tail = [(m, 2) for m in six]
    if convention == "paper":
        x3 = _poly([(dict(ep=2, eq=-2), 4), (dict(ep=-2, eq=2), 4)] + x3_tail)
    elif convention == "geometric":
        x3 = _poly([(dict(), 8)] + x3_tail)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    coeffs = [
        _poly([(dict(), 1)]),
        x1,
        _poly([(dict(), 3)]),
        x3,
        _poly([(dict(), 3)]),
        x1,
        _poly([(dict(), 1)]),
    ]
    return XSeries(6, coeffs)


def sc_determinant_fixture() -> XSeries:
    """Tagged simple-cubic det(I - x Omega), all 27 terms."""

    def conj(entries):
        out = []
        for mono, c in entries:
            flipped = {k: -v if k in ("el", "em", "en", "ep", "eq", "er") else v
                       for k, v in mono.items()}
            out.append((flipped, c))
        return out

    x1_half = [
        (dict(ep=1, du=2, el=-2), -1),
        (dict(eq=1, dv=2, em=-2), -1),
        (dict(er=1, dw=2, en=-2), -1),
    ]
    x3_half = [
        (dict(eq=1, du=4, dv=2, em=-2), 1),
        (dict(ep=1, du=2, dv=4, el=-2), 1),
        (dict(er=1, du=4, dw=2, en=-2), 1),
        (dict(er=1, dv=4, dw=2, en=-2), 1),
        (dict(ep=1, du=2, dw=4, el=-2), 1),
        (dict(eq=1, dv=2, dw=4, em=-2), 1),
        (dict(ep=1, eq=1, er=1, du=2, dv=2, dw=2, el=-2, em=-2, en=-2), 4),
    ]
    x5_half = [
        (dict(er=1, du=4, dv=4, dw=2, en=-2), -1),
        (dict(eq=1, du=4, dv=2, dw=4, em=-2), -1),
        (dict(ep=1, du=2, dv=4, dw=4, el=-2), -1),
    ]
    coeffs = [
        _poly([(dict(), 1)]),
        _poly(x1_half + conj(x1_half)),
        _poly([(dict(du=4), 1), (dict(dv=4), 1), (dict(dw=4), 1)]),
        _poly(x3_half + conj(x3_half)),
        _poly([(dict(du=4, dv=4), 1), (dict(du=4, dw=4), 1), (dict(dv=4, dw=4), 1)]),
        _poly(x5_half + conj(x5_half)),
        _poly([(dict(du=4, dv=4, dw=4), 1)]),
    ]
    return XSeries(6, coeffs)


def sc_naive_fixture() -> XSeries:
    """The naive reduction (all six tags set to one) of the tagged form."""
    six = [dict(ep=1), dict(ep=-1), dict(eq=1), dict(eq=-1),
           dict(er=1), dict(er=-1)]
    x1 = _poly([(m, -1) for m in six])
    x3 = _poly([(m, 2) for m in six]
               + [(dict(ep=1, eq=1, er=1), 4), (dict(ep=-1, eq=-1, er=-1), 4)])
    coeffs = [
        _poly([(dict(), 1)]),
        x1,
        _poly([(dict(), 3)]),
        x3,
        _poly([(dict(), 3)]),
        x1,
        _poly([(dict(), 1)]),
    ]
    return XSeries(6, coeffs)


def sqrt_order2_fixture() -> XSeries:
    """First three coefficients of the square root of the tagged form:
    1, half the linear bracket, and half of (quadratic bracket minus a
    quarter of the linear bracket squared)."""
    from fractions import Fraction

    psi = sc_determinant_fixture()
    b1 = psi.coeffs[1]
    a2 = psi.coeffs[2]
    coeffs = [
        _poly([(dict(), 1)]),
        b1 * Fraction(1, 2),
        (a2 - b1 * b1 * Fraction(1, 4)) * Fraction(1, 2),
    ]
    return XSeries(2, coeffs)
