"""Exact arithmetic foundation: rationals, trivariate polynomials, and
univariate rational functions.

Everything here is exact; there is no floating point anywhere in the
pipeline.  ``MultiPoly`` is a polynomial in the three commuting variables
n, i, j with rational coefficients, stored as a canonical sparse map from
exponent triples to nonzero coefficients.  ``RatFunc`` is a univariate
rational function in n, kept normalized (coprime, monic denominator).

Univariate polynomials appear in two flavours:

* tuples of ``Fraction`` coefficients (low degree first), used by
  ``RatFunc`` -- see the ``poly_*`` helpers;
* plain ``int`` coefficient lists, used by the elimination engine where
  fraction-free arithmetic matters -- see the ``ipoly_*`` helpers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

VARS = ("n", "i", "j")
_VAR_INDEX = {"n": 0, "i": 1, "j": 2}

Exponent = tuple[int, int, int]


class ZeroDenominatorError(ZeroDivisionError):
    """Raised when a rational function would have a zero denominator."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class MultiPoly:
    """A polynomial in Q[n, i, j] in canonical sparse form.

    The term map never stores a zero coefficient; the zero polynomial has
    an empty map.  Instances are immutable and hashable, so equality of
    canonical forms is plain map equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Fraction] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                c = _as_fraction(coeff)
                if c:
                    e = (int(exp[0]), int(exp[1]), int(exp[2]))
                    if any(x < 0 for x in e):
                        raise ValueError(f"negative exponent in {exp}")
                    clean[e] = c
        self._terms = clean
        self._hash: int | None = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls()

    @classmethod
    def const(cls, value) -> "MultiPoly":
        return cls({(0, 0, 0): _as_fraction(value)})

    @classmethod
    def variable(cls, name: str) -> "MultiPoly":
        if name not in _VAR_INDEX:
            raise ValueError(f"unknown variable {name!r}")
        exp = [0, 0, 0]
        exp[_VAR_INDEX[name]] = 1
        return cls({tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, exp: Exponent, coeff=1) -> "MultiPoly":
        return cls({exp: _as_fraction(coeff)})

    # -- inspection ----------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == (0, 0, 0) for e in self._terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self._terms[(0, 0, 0)]

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        k = _VAR_INDEX[var]
        return max(e[k] for e in self._terms)

    def total_degree(self) -> int:
        """Total degree in n, i, j; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- ring operations -----------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return _coerce_poly(other) + (-self)

    def __mul__(self, other) -> "MultiPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- evaluation and substitution -------------------------------------

    def eval(self, n: int, i: int, j: int) -> Fraction:
        """Exact value at an integer (or rational) point."""
        total = Fraction(0)
        for (dn, di, dj), c in self._terms.items():
            total += c * n**dn * i**di * j**dj
        return total

    def substitute_shift(self, var: str, offset: int) -> "MultiPoly":
        """Replace ``var`` by ``var + offset`` and expand to canonical form.

        This is the coefficient side of the shift commutation rule
        ``S_x p(x) = p(x + 1) S_x``.
        """
        if offset == 0:
            return self
        k = _VAR_INDEX[var]
        out: dict[Exponent, Fraction] = {}
        for exp, c in self._terms.items():
            d = exp[k]
            # (x + offset)^d expanded binomially onto powers of x
            for t in range(d + 1):
                coeff = c * math.comb(d, t) * offset ** (d - t)
                e = list(exp)
                e[k] = t
                e2 = tuple(e)
                s = out.get(e2, Fraction(0)) + coeff
                if s:
                    out[e2] = s
                else:
                    out.pop(e2, None)
        return MultiPoly(out)

    def substitute_zero(self, names: Iterable[str]) -> "MultiPoly":
        """Set the named variables to 0, dropping every term they divide."""
        ks = [_VAR_INDEX[v] for v in names]
        out: dict[Exponent, Fraction] = {}
        for exp, c in self._terms.items():
            if all(exp[k] == 0 for k in ks):
                out[exp] = c
        return MultiPoly(out)

    def coefficients_in_n(self) -> tuple[Fraction, ...]:
        """Coefficient tuple of a polynomial free of i and j, low degree first."""
        if self.degree("i") > 0 or self.degree("j") > 0:
            raise ValueError("polynomial still involves i or j")
        d = self.degree("n")
        coeffs = [Fraction(0)] * (d + 1)
        for (dn, _, _), c in self._terms.items():
            coeffs[dn] = c
        return tuple(coeffs)

    # -- normalization helpers -------------------------------------------

    def content(self) -> Fraction:
        """Positive rational content (gcd of numerators / lcm of denominators)."""
        if not self._terms:
            return Fraction(0)
        num_gcd = 0
        den_lcm = 1
        for c in self._terms.values():
            num_gcd = math.gcd(num_gcd, c.numerator)
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        return Fraction(num_gcd, den_lcm)

    def monomial_min_exponents(self) -> Exponent:
        """Componentwise minimum exponent over all terms (zero poly: (0,0,0))."""
        if not self._terms:
            return (0, 0, 0)
        exps = list(self._terms)
        return (
            min(e[0] for e in exps),
            min(e[1] for e in exps),
            min(e[2] for e in exps),
        )

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exp in sorted(self._terms, reverse=True):
            c = self._terms[exp]
            mono = "".join(
                f"{v}^{e}" if e > 1 else (v if e == 1 else "")
                for v, e in zip(VARS, exp)
            )
            if mono:
                cs = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                parts.append(f"{cs}{mono}")
            else:
                parts.append(f"{c}")
        s = " + ".join(parts).replace("+ -", "- ")
        return s


def _coerce_poly(x):
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return MultiPoly.const(x)
    return NotImplemented


# ---------------------------------------------------------------------------
# Univariate polynomials over Fraction, low degree first, as tuples.
# ---------------------------------------------------------------------------

FPoly = tuple[Fraction, ...]


def poly_from(coeffs: Iterable) -> FPoly:
    """Build a normalized (trailing-zero-trimmed) coefficient tuple."""
    cs = [_as_fraction(c) for c in coeffs]
    while cs and not cs[-1]:
        cs.pop()
    return tuple(cs)


POLY_ZERO: FPoly = ()
POLY_ONE: FPoly = (Fraction(1),)


def poly_deg(p: FPoly) -> int:
    return len(p) - 1


def poly_add(a: FPoly, b: FPoly) -> FPoly:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for k, c in enumerate(a):
        out[k] += c
    for k, c in enumerate(b):
        out[k] += c
    return poly_from(out)


def poly_neg(a: FPoly) -> FPoly:
    return tuple(-c for c in a)


def poly_sub(a: FPoly, b: FPoly) -> FPoly:
    return poly_add(a, poly_neg(b))


def poly_mul(a: FPoly, b: FPoly) -> FPoly:
    if not a or not b:
        return POLY_ZERO
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for ka, ca in enumerate(a):
        if not ca:
            continue
        for kb, cb in enumerate(b):
            out[ka + kb] += ca * cb
    return poly_from(out)


def poly_scale(a: FPoly, s) -> FPoly:
    s = _as_fraction(s)
    if not s:
        return POLY_ZERO
    return tuple(c * s for c in a)


def poly_eval(a: FPoly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_compose_affine(a: FPoly, scale: int, shift: int) -> FPoly:
    """Compose ``a(scale * x + shift)`` exactly."""
    acc: FPoly = POLY_ZERO
    lin = poly_from([shift, scale])
    for c in reversed(a):
        acc = poly_add(poly_mul(acc, lin), (Fraction(c),) if c else POLY_ZERO)
    return acc


def poly_shift_arg(a: FPoly, offset: int) -> FPoly:
    """Compose ``a(x + offset)``."""
    if offset == 0:
        return a
    return poly_compose_affine(a, 1, offset)


def poly_divmod(a: FPoly, b: FPoly) -> tuple[FPoly, FPoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    db = poly_deg(b)
    lb = b[-1]
    while len(r) - 1 >= db and r:
        while r and not r[-1]:
            r.pop()
        if len(r) - 1 < db or not r:
            break
        k = len(r) - 1 - db
        f = r[-1] / lb
        q[k] = f
        for t, c in enumerate(b):
            r[k + t] -= f * c
        r.pop()
    return poly_from(q), poly_from(r)


def poly_gcd(a: FPoly, b: FPoly) -> FPoly:
    """Monic gcd over Q."""
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return POLY_ZERO
    return poly_scale(a, 1 / a[-1])


def poly_monic(a: FPoly) -> FPoly:
    if not a:
        return a
    return poly_scale(a, 1 / a[-1])


# ---------------------------------------------------------------------------
# Integer-coefficient univariate polynomials as lists, for fraction-free work.
# ---------------------------------------------------------------------------

IPoly = list  # list[int], low degree first, trailing zeros trimmed


def ipoly_trim(p: IPoly) -> IPoly:
    while p and p[-1] == 0:
        p.pop()
    return p


def ipoly_add(a: IPoly, b: IPoly) -> IPoly:
    n = max(len(a), len(b))
    out = [0] * n
    for k, c in enumerate(a):
        out[k] += c
    for k, c in enumerate(b):
        out[k] += c
    return ipoly_trim(out)


def ipoly_sub(a: IPoly, b: IPoly) -> IPoly:
    n = max(len(a), len(b))
    out = [0] * n
    for k, c in enumerate(a):
        out[k] += c
    for k, c in enumerate(b):
        out[k] -= c
    return ipoly_trim(out)


def ipoly_mul(a: IPoly, b: IPoly) -> IPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for ka, ca in enumerate(a):
        if ca:
            for kb, cb in enumerate(b):
                out[ka + kb] += ca * cb
    return ipoly_trim(out)


def ipoly_scale(a: IPoly, s: int) -> IPoly:
    if s == 0:
        return []
    return [c * s for c in a]


def ipoly_shift_arg(a: IPoly, offset: int) -> IPoly:
    """Compose ``a(x + offset)`` with integer arithmetic."""
    if offset == 0 or not a:
        return list(a)
    acc: IPoly = []
    for c in reversed(a):
        # acc = acc*(x+offset) + c
        shifted = [0] + acc
        for k, v in enumerate(acc):
            shifted[k] += v * offset
        if c:
            if shifted:
                shifted[0] += c
            else:
                shifted = [c]
        acc = ipoly_trim(shifted)
    return acc


def ipoly_content(a: IPoly) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def ipoly_divexact(a: IPoly, d: int) -> IPoly:
    if d == 1:
        return list(a)
    out = []
    for c in a:
        q, r = divmod(c, d)
        if r:
            raise ArithmeticError("inexact integer polynomial division")
        out.append(q)
    return out


def ipoly_pseudo_rem(a: IPoly, b: IPoly) -> IPoly:
    """Pseudo-remainder of a by b (b nonzero), over Z."""
    if not b:
        raise ZeroDivisionError("pseudo-division by zero polynomial")
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lead = r[-1]
        k = len(r) - 1 - db
        r = ipoly_scale(r, lb)
        for t, c in enumerate(b):
            r[k + t] -= lead * c
        r = ipoly_trim(r)
    return r


def ipoly_gcd(a: IPoly, b: IPoly) -> IPoly:
    """Primitive gcd over Z with positive leading coefficient."""
    a, b = list(a), list(b)
    if not a:
        g = b
    elif not b:
        g = a
    else:
        ca, cb = ipoly_content(a), ipoly_content(b)
        a = ipoly_divexact(a, ca)
        b = ipoly_divexact(b, cb)
        while b:
            r = ipoly_pseudo_rem(a, b)
            cr = ipoly_content(r)
            if cr:
                r = ipoly_divexact(r, cr)
            a, b = b, r
        g = ipoly_scale(a, math.gcd(ca, cb))
    g = list(g)
    if g and g[-1] < 0:
        g = ipoly_scale(g, -1)
    return g


def ipoly_divexact_poly(a: IPoly, g: IPoly) -> IPoly:
    """Exact division of a by g over Q, asserting integer result."""
    fa = poly_from(a)
    fg = poly_from(g)
    q, r = poly_divmod(fa, fg)
    if r:
        raise ArithmeticError("inexact polynomial division")
    out = []
    for c in q:
        if c.denominator != 1:
            raise ArithmeticError("quotient not integral")
        out.append(c.numerator)
    return ipoly_trim(out)


def ipoly_eval(a: IPoly, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# Univariate rational functions in n.
# ---------------------------------------------------------------------------


class RatFunc:
    """A rational function num/den in n, normalized so that
    gcd(num, den) = 1 and den is monic (den = 1 for polynomials)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if isinstance(num, (int, Fraction)):
            num = (Fraction(num),) if num else POLY_ZERO
        if isinstance(den, (int, Fraction)):
            den = (Fraction(den),) if den else POLY_ZERO
        num = poly_from(num)
        den = poly_from(den)
        if not den:
            raise ZeroDenominatorError("zero denominator")
        if not num:
            self.num, self.den = POLY_ZERO, POLY_ONE
            return
        g = poly_gcd(num, den)
        if poly_deg(g) > 0:
            num = poly_divmod(num, g)[0]
            den = poly_divmod(den, g)[0]
        lead = den[-1]
        if lead != 1:
            num = poly_scale(num, 1 / lead)
            den = poly_scale(den, 1 / lead)
        self.num = num
        self.den = den

    @classmethod
    def from_fraction(cls, q) -> "RatFunc":
        return cls(_as_fraction(q))

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den == POLY_ONE

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == RatFunc(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other) -> "RatFunc":
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        num = poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den))
        return RatFunc(num, poly_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(poly_neg(self.num), self.den)

    def __sub__(self, other) -> "RatFunc":
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return _coerce_rat(other) + (-self)

    def __mul__(self, other) -> "RatFunc":
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDenominatorError("division by the zero rational function")
        return RatFunc(poly_mul(self.num, other.den), poly_mul(self.den, other.num))

    def shift_arg(self, offset: int) -> "RatFunc":
        """The function n |-> self(n + offset)."""
        return RatFunc(poly_shift_arg(self.num, offset), poly_shift_arg(self.den, offset))

    def eval(self, x) -> Fraction:
        d = poly_eval(self.den, x)
        if not d:
            raise ZeroDenominatorError(f"denominator vanishes at {x}")
        return poly_eval(self.num, x) / d

    def __repr__(self) -> str:
        def fmt(p: FPoly) -> str:
            if not p:
                return "0"
            parts = []
            for k in range(len(p) - 1, -1, -1):
                c = p[k]
                if not c:
                    continue
                if k == 0:
                    parts.append(f"{c}")
                elif k == 1:
                    parts.append(f"{c}*n" if c != 1 else "n")
                else:
                    parts.append(f"{c}*n^{k}" if c != 1 else f"n^{k}")
            return " + ".join(parts).replace("+ -", "- ")

        if self.den == POLY_ONE:
            return fmt(self.num)
        return f"({fmt(self.num)})/({fmt(self.den)})"


def _coerce_rat(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Fraction)):
        return RatFunc(x)
    return NotImplemented


def rat_normalize(num, den) -> RatFunc:
    """Normalize a numerator/denominator pair into a canonical RatFunc."""
    return RatFunc(num, den)
