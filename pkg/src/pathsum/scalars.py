"""Scalars, univariate polynomials and rational functions.

Two scalar kinds coexist:

* exact scalars, ``GaussRat`` (complex numbers with ``Fraction`` parts);
  plain ``int`` and ``Fraction`` values are accepted wherever a
  ``GaussRat`` is;
* floating scalars, Python ``complex`` (or ``float``).

Mixing the two promotes to ``complex``.  Polynomials and rational functions
are generic over both, but gcd cancellation and exact multiplicities are only
available when every coefficient is exact.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import FloatModeUnsupported, NonConvergence, ParseError

_EXACT_TYPES = (int, Fraction)


class GaussRat:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRat):
            re, im = re.re + 0, re.im + Fraction(im)
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("GaussRat parts must be exact; use rationalize()")
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "GaussRat":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    # arithmetic -------------------------------------------------------------

    def __add__(self, o):
        if isinstance(o, GaussRat):
            return GaussRat._make(self.re + o.re, self.im + o.im)
        if isinstance(o, _EXACT_TYPES):
            return GaussRat._make(self.re + o, self.im)
        if isinstance(o, (float, complex)):
            return complex(self) + o
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussRat._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, o):
        if isinstance(o, GaussRat):
            return GaussRat._make(self.re - o.re, self.im - o.im)
        if isinstance(o, _EXACT_TYPES):
            return GaussRat._make(self.re - o, self.im)
        if isinstance(o, (float, complex)):
            return complex(self) - o
        return NotImplemented

    def __rsub__(self, o):
        if isinstance(o, _EXACT_TYPES):
            return GaussRat._make(o - self.re, -self.im)
        if isinstance(o, (float, complex)):
            return o - complex(self)
        return NotImplemented

    def __mul__(self, o):
        if isinstance(o, GaussRat):
            if not o.im:
                return GaussRat._make(self.re * o.re, self.im * o.re)
            if not self.im:
                return GaussRat._make(self.re * o.re, self.re * o.im)
            return GaussRat._make(self.re * o.re - self.im * o.im,
                                  self.re * o.im + self.im * o.re)
        if isinstance(o, _EXACT_TYPES):
            return GaussRat._make(self.re * o, self.im * o)
        if isinstance(o, (float, complex)):
            return complex(self) * o
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> "GaussRat":
        if not self.im:
            if not self.re:
                raise ZeroDivisionError("GaussRat division by zero")
            return GaussRat._make(1 / self.re, self.im)
        n = self.re * self.re + self.im * self.im
        return GaussRat._make(self.re / n, -self.im / n)

    def __truediv__(self, o):
        if isinstance(o, GaussRat):
            return self * o.reciprocal()
        if isinstance(o, _EXACT_TYPES):
            if not o:
                raise ZeroDivisionError("GaussRat division by zero")
            return GaussRat._make(self.re / o, self.im / o)
        if isinstance(o, (float, complex)):
            return complex(self) / o
        return NotImplemented

    def __rtruediv__(self, o):
        if isinstance(o, _EXACT_TYPES):
            return self.reciprocal() * o
        if isinstance(o, (float, complex)):
            return o / complex(self)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return self.reciprocal() ** (-n)
        result, base = GaussRat._make(Fraction(1), Fraction(0)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison / conversion --------------------------------------------------

    def __eq__(self, o):
        if isinstance(o, GaussRat):
            return self.re == o.re and self.im == o.im
        if isinstance(o, _EXACT_TYPES):
            return not self.im and self.re == o
        if isinstance(o, (float, complex)):
            return complex(self) == o
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def conjugate(self) -> "GaussRat":
        return GaussRat._make(self.re, -self.im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __repr__(self):
        return f"GaussRat({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


I = GaussRat(0, 1)


def is_exact(x) -> bool:
    return isinstance(x, (GaussRat, int, Fraction))


def exact(x) -> GaussRat:
    """Coerce ``int``/``Fraction``/``GaussRat`` to ``GaussRat``."""
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, _EXACT_TYPES):
        return GaussRat._make(Fraction(x), Fraction(0))
    raise TypeError(f"{x!r} is not an exact scalar")


def rationalize_real(x: float, tol: float = 1e-12) -> Fraction:
    """Smallest-denominator rational within ``tol * max(1, |x|)`` of ``x``."""
    if not math.isfinite(x):
        raise ValueError(f"cannot rationalize {x!r}")
    f = Fraction(x)
    bound = tol * max(1.0, abs(x))
    limit = 10
    while limit < 10**18:
        cand = f.limit_denominator(limit)
        if abs(cand - f) <= bound:
            return cand
        limit *= 10
    return f


def rationalize(x, tol: float = 1e-12) -> GaussRat:
    """Exact scalar close to ``x`` (identity on exact input)."""
    if is_exact(x):
        return exact(x)
    z = complex(x)
    return GaussRat._make(rationalize_real(z.real, tol), rationalize_real(z.imag, tol))


def is_zero(x, tol: float = 0.0) -> bool:
    if is_exact(x):
        return x == 0
    return abs(x) <= tol


def principal_power(base, q):
    """``base**q`` on the principal branch; exact when both are exact integers."""
    if isinstance(q, GaussRat) and not q.im and q.re.denominator == 1:
        q = int(q.re)
    if isinstance(q, Fraction) and q.denominator == 1:
        q = int(q)
    if isinstance(q, int) and is_exact(base):
        return exact(base) ** q
    b = complex(base)
    qc = complex(q)
    if b == 0:
        if qc == 0:
            return 1.0 + 0j
        if qc.real > 0:
            return 0j
        raise ZeroDivisionError("0 raised to a power with non-positive real part")
    return cmath.exp(qc * cmath.log(b))


# text format -------------------------------------------------------------------

def _format_real(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _format_float(x: float) -> str:
    return repr(float(x))


def format_scalar(x) -> str:
    """Serialize a scalar: ``re``, ``re+imi`` or ``re-imi``."""
    if is_exact(x):
        g = exact(x)
        re_s = _format_real(g.re)
        if not g.im:
            return re_s
        sign = "+" if g.im > 0 else "-"
        return f"{re_s}{sign}{_format_real(abs(g.im))}i"
    z = complex(x)
    re_s = _format_float(z.real)
    if z.imag == 0:
        return re_s
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{re_s}{sign}{_format_float(abs(z.imag))}i"


_NUM_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?$")


def _parse_part(text: str, exact_mode: bool):
    if not _NUM_RE.match(text):
        raise ValueError(text)
    if "/" in text:
        n, d = text.split("/")
        if int(d) == 0:
            raise ZeroDivisionError
        return Fraction(n) / int(d) if exact_mode else float(n) / float(d)
    return Fraction(text) if exact_mode else float(text)


def _split_complex(s: str) -> tuple[str, str]:
    """Split ``s`` into real and imaginary texts (either may be empty)."""
    if not s.endswith("i"):
        return s, ""
    body = s[:-1]
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            im = body[k:]
            return body[:k], im if im not in ("+", "-") else im + "1"
    if body in ("", "+", "-"):
        body += "1"
    return "", body


def parse_scalar(text: str, exact_mode: bool = True):
    """Parse ``re``, ``re+imi``, ``re-imi`` or ``imi``; parts are decimals or ``p/q``."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError(f"malformed scalar {text!r}")
    re_text, im_text = _split_complex(s)
    try:
        re_part = _parse_part(re_text, exact_mode) if re_text else 0
        im_part = _parse_part(im_text, exact_mode) if im_text else 0
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed scalar {text!r}") from exc
    if exact_mode:
        return GaussRat(re_part, im_part)
    return complex(re_part, im_part)


# polynomials -------------------------------------------------------------------

def _strip(coeffs: Sequence) -> tuple:
    c = list(coeffs)
    while c and is_zero(c[-1]):
        c.pop()
    return tuple(c)


class Poly:
    """Univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def __eq__(self, o):
        if isinstance(o, Poly):
            return self.coeffs == o.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[format_scalar(c) for c in self.coeffs]})"

    def __add__(self, o):
        if not isinstance(o, Poly):
            o = Poly.const(o)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, o):
        if not isinstance(o, Poly):
            o = Poly.const(o)
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, Poly):
            return Poly([c * o for c in self.coeffs])
        return poly_mul(self, o)

    __rmul__ = __mul__

    def __divmod__(self, o: "Poly"):
        return poly_divmod(self, o)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def deriv(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.lc
        if lc == 1:
            return self
        inv = (1 / exact(lc)) if is_exact(lc) else 1 / lc
        return Poly([c * inv for c in self.coeffs])

    def shift(self, a) -> "Poly":
        """Taylor shift: the polynomial ``h -> self(a + h)``."""
        c = list(self.coeffs)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] = c[j] + a * c[j + 1]
        return Poly(c)


def poly_mul(p: Poly, q: Poly) -> Poly:
    if p.is_zero() or q.is_zero():
        return Poly()
    a, b = p.coeffs, q.coeffs
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return Poly(out)


def poly_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if q.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p.coeffs)
    dq = q.degree
    lc = q.lc
    inv = (1 / exact(lc)) if is_exact(lc) else 1 / lc
    if len(r) <= dq:
        return Poly(), p
    quot = [0] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] * inv
        quot[k] = c
        if is_zero(c):
            continue
        for j in range(dq + 1):
            r[k + j] = r[k + j] - c * q.coeffs[j]
    # leading positions are cancelled by construction
    return Poly(quot), Poly(r[:dq])


def _require_exact(*polys: Poly) -> None:
    for p in polys:
        if not p.is_exact():
            raise FloatModeUnsupported("exact coefficients required")


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over the Gaussian rationals; ``gcd(p, 0) = monic(p)``."""
    _require_exact(p, q)
    a, b = p.monic(), q.monic()
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1].monic()
    return a


def poly_exact_quotient(p: Poly, q: Poly) -> Poly:
    quot, rem = poly_divmod(p, q)
    assert rem.is_zero(), "inexact polynomial division"
    return quot


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic square-free factors ``[(g_i, i)]`` with ``p ~ prod g_i**i``."""
    _require_exact(p)
    if p.degree < 1:
        return []
    f = p.monic()
    df = f.deriv()
    a = poly_gcd(f, df)
    b = poly_exact_quotient(f, a)
    c = poly_exact_quotient(df, a)
    d = c - b.deriv()
    out = []
    i = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        if a.degree >= 1:
            out.append((a, i))
        b = poly_exact_quotient(b, a)
        c = poly_exact_quotient(d, a)
        d = c - b.deriv()
        i += 1
    return out


# root finding --------------------------------------------------------------------

ROOT_ITER_CAP = 200
ROOT_RESIDUAL = 1e-14


def _horner2(coeffs: Sequence[complex], z: complex) -> tuple[complex, complex]:
    p = 0j
    dp = 0j
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _aberth(coeffs: Sequence[complex]) -> list[complex]:
    """All roots of a polynomial (complex floats, lowest first) by simultaneous iteration."""
    n = len(coeffs) - 1
    lc = coeffs[-1]
    c = [x / lc for x in coeffs]
    if n == 1:
        return [-c[0]]
    radius = max(abs(x) for x in c[:-1]) ** 1.0
    radius = 1.0 + radius if radius > 0 else 1.0
    # Fujiwara-type bound is tighter; start just inside the Cauchy circle
    fuj = 2 * max(abs(c[n - k]) ** (1.0 / k) for k in range(1, n + 1))
    radius = min(radius, fuj) if fuj > 0 else radius
    z = [radius * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]
    scale = [abs(x) for x in c]
    for _ in range(ROOT_ITER_CAP):
        done = True
        for k in range(n):
            zk = z[k]
            p, dp = _horner2(c, zk)
            if p == 0:
                continue
            mag = 0.0
            az = abs(zk)
            for s in reversed(scale):
                mag = mag * az + s
            if abs(p) <= ROOT_RESIDUAL * mag:
                continue
            done = False
            s = 0j
            for j in range(n):
                if j != k:
                    diff = zk - z[j]
                    if diff != 0:
                        s += 1 / diff
            ratio = p / dp if dp != 0 else p
            denom = 1 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            z[k] = zk - w
            if abs(w) > ROOT_RESIDUAL * (1 + abs(zk)):
                done = False
        if done:
            break
    else:
        for zk in z:
            p, _ = _horner2(c, zk)
            mag = 0.0
            for s in reversed(scale):
                mag = mag * abs(zk) + s
            if abs(p) > 1e-9 * mag:
                raise NonConvergence(f"root iteration did not converge in {ROOT_ITER_CAP} steps")
    return z


def _polish(coeffs: Sequence[complex], z: complex, steps: int = 3) -> complex:
    for _ in range(steps):
        p, dp = _horner2(coeffs, z)
        if dp == 0 or p == 0:
            break
        step = p / dp
        z -= step
        if abs(step) <= 1e-17 * (1 + abs(z)):
            break
    return z


def _snap(z: complex, g: Poly):
    """Exact Gaussian-rational root of ``g`` equal to ``z`` up to rounding, if any."""
    for limit in (1000, 10**6):
        cand = GaussRat._make(Fraction(z.real).limit_denominator(limit),
                              Fraction(z.imag).limit_denominator(limit))
        if abs(complex(cand) - z) > 1e-6 * (1 + abs(z)):
            continue
        if g(cand) == 0:
            return cand
    return None


def _simple_roots_exact(g: Poly) -> list:
    """Roots of an exact square-free polynomial; Gaussian-rational roots returned exactly."""
    roots: list = []
    g = g.monic()
    while g.degree >= 1:
        if g.degree == 1:
            roots.append(-exact(g.coeffs[0]))
            return roots
        cf = [complex(c) for c in g.coeffs]
        approx = [_polish(cf, z) for z in _aberth(cf)]
        found = None
        for z in approx:
            found = _snap(z, g)
            if found is not None:
                break
        if found is None:
            roots.extend(approx)
            return roots
        roots.append(found)
        g = poly_exact_quotient(g, Poly((-found, 1)))
    return roots


def poly_roots(p: Poly, tol: float = 1e-8) -> list[tuple[object, int]]:
    """Roots with multiplicities.

    Exact polynomials are split into square-free factors first, so
    multiplicities are exact and rational roots come back as ``GaussRat``.
    Float polynomials cluster numerical roots within ``tol * (1 + |r|)``.
    """
    if p.degree < 1:
        raise ValueError("poly_roots needs degree >= 1")
    if p.is_exact():
        out = []
        for g, mult in squarefree_decomposition(p):
            out.extend((r, mult) for r in _simple_roots_exact(g))
        return out
    cf = [complex(c) for c in p.coeffs]
    approx = [_polish(cf, z) for z in _aberth(cf)]
    clusters: list[list[complex]] = []
    for z in approx:
        for cl in clusters:
            if abs(cl[0] - z) <= tol * (1 + abs(z)):
                cl.append(z)
                break
        else:
            clusters.append([z])
    return [(sum(cl) / len(cl), len(cl)) for cl in clusters]


# rational functions ------------------------------------------------------------------


class RatFn:
    """Normalized rational function ``num/den`` (monic den; gcd-free when exact)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _normalized: bool = False):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if den is None:
            den = Poly.const(1)
        elif not isinstance(den, Poly):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            num, den = _normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFn is immutable")

    @classmethod
    def var(cls) -> "RatFn":
        return cls(Poly.x(), _normalized=True)

    def normalized(self) -> "RatFn":
        return RatFn(self.num, self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_exact(self) -> bool:
        return self.num.is_exact() and self.den.is_exact()

    @property
    def total_degree(self) -> int:
        return max(self.num.degree, 0) + self.den.degree

    def __eq__(self, o):
        if isinstance(o, RatFn):
            return self.num == o.num and self.den == o.den
        if isinstance(o, (int, Fraction, GaussRat, float, complex)):
            return self.den.degree == 0 and (
                (self.num.is_zero() and o == 0) or self.num.coeffs == (o,))
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFn({self.num!r} / {self.den!r})"

    def _coerce(self, o):
        if isinstance(o, RatFn):
            return o
        if isinstance(o, Poly):
            return RatFn(o)
        if isinstance(o, (int, Fraction, GaussRat, float, complex)):
            return RatFn(Poly.const(o), _normalized=True) if not is_zero(o) else RatFn(Poly(), _normalized=True)
        return None

    def __add__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return RatFn(self.num + o.num, self.den)
        return RatFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFn(-self.num, self.den, _normalized=True)

    def __sub__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, (int, Fraction, GaussRat, float, complex)):
            if is_zero(o):
                return RatFn(Poly(), _normalized=True)
            return RatFn(self.num * o, self.den, _normalized=True)
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return RatFn(Poly(), _normalized=True)
        return RatFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def reciprocal(self) -> "RatFn":
        if self.num.is_zero():
            raise ZeroDivisionError("reciprocal of zero rational function")
        return RatFn(self.den, self.num)

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction, GaussRat, float, complex)):
            inv = (1 / exact(o)) if is_exact(o) else 1 / o
            return self * inv
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return o * self.reciprocal()

    def __call__(self, x):
        n, d = self.num(x), self.den(x)
        if is_zero(d):
            raise ZeroDivisionError("evaluation at a pole")
        if is_exact(n) and is_exact(d):
            return exact(n) / exact(d)
        return n / d


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return Poly(), Poly.const(1)
    if den.degree >= 1 and num.is_exact() and den.is_exact() and num.degree >= 0:
        g = poly_gcd(num, den)
        if g.degree >= 1:
            num = poly_exact_quotient(num, g)
            den = poly_exact_quotient(den, g)
    lc = den.lc
    if lc != 1:
        inv = (1 / exact(lc)) if is_exact(lc) else 1 / lc
        num = Poly([c * inv for c in num.coeffs])
        den = Poly([c * inv for c in den.coeffs])
    return num, den


# partial fractions ----------------------------------------------------------------


@dataclass(frozen=True)
class Pole:
    """Pole ``a`` of multiplicity ``p``; ``coeffs[j-1]`` multiplies ``1/(x-a)**j``."""

    root: object
    multiplicity: int
    coeffs: tuple


@dataclass(frozen=True)
class PoleExpansion:
    poles: tuple[Pole, ...]
    polynomial_part: Poly

    def __call__(self, x):
        acc = self.polynomial_part(x)
        for pole in self.poles:
            inv = 1 / (x - pole.root)
            term = inv
            for c in pole.coeffs:
                acc = acc + c * term
                term = term * inv
        return acc


def _series_div(num: Sequence, den: Sequence, order: int) -> list:
    """First ``order`` coefficients of the power series ``num/den`` (``den[0] != 0``)."""
    d0 = den[0]
    inv0 = (1 / exact(d0)) if is_exact(d0) else 1 / d0
    out = []
    for k in range(order):
        acc = num[k] if k < len(num) else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            acc = acc - den[j] * out[k - j]
        out.append(acc * inv0)
    return out


def _truncated_mul(a: Sequence, b: Sequence, order: int) -> list:
    out = [0] * order
    for i, x in enumerate(a[:order]):
        for j, y in enumerate(b[: order - i]):
            out[i + j] = out[i + j] + x * y
    return out


def partial_fractions(r: RatFn, tol: float = 1e-8) -> PoleExpansion:
    """Pole expansion of ``r``: polynomial part plus ``C_j/(x-a)**j`` terms."""
    quot, rem = poly_divmod(r.num, r.den)
    if r.den.degree < 1 or rem.is_zero():
        return PoleExpansion((), quot)
    roots = poly_roots(r.den, tol)
    lc = r.den.lc
    poles = []
    for k, (a, p) in enumerate(roots):
        shifted = rem.shift(a).coeffs
        q = [lc]
        for i, (b, pb) in enumerate(roots):
            if i == k:
                continue
            factor = [a - b, 1]
            for _ in range(pb):
                q = _truncated_mul(q, factor, p)
        g = _series_div(list(shifted), q, p)
        poles.append(Pole(a, p, tuple(g[p - j] for j in range(1, p + 1))))
    return PoleExpansion(tuple(poles), quot)
