"""The perfected Laurent-series field at characteristic p.

Elements are finite sums  sum_m a_m w^m  with exponents m in Z[1/p] and
coefficients in the residue tower (some F_{q^k}), together with an
explicit truncation order ``cap``: the element is known exactly on all
exponents below the cap and carries no claim beyond it.  The infinite-
precision field has no finite model; the cap discipline is the honest
finite substitute, and every operation propagates caps pessimistically.

The absolute value is normalized on the logarithmic scale by
log_q |w| = -q/(q-1), so log_q |sum a_m w^m| = (lowest exponent) * theta
with theta = -q/(q-1).  The q-power Frobenius multiplies exponents by q
and raises coefficients to the q; it is invertible because the field is
perfect.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable

from .base import LocalFieldSpec
from .errors import MixedSpecError, NotInvertibleError, ValidationError
from .gf import FFElement


@dataclass(frozen=True)
class Exponent:
    """A rational of the form num / p^s, normalized so p does not divide
    num unless s = 0.  Ordering is by rational value."""

    p: int
    num: int
    s: int = 0

    def __post_init__(self):
        if self.s < 0:
            raise ValidationError("denominator exponent must be >= 0")
        num, s = self.num, self.s
        while s > 0 and num % self.p == 0:
            num //= self.p
            s -= 1
        if num == 0:
            s = 0
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "s", s)

    @staticmethod
    def of(p: int, value) -> "Exponent":
        if isinstance(value, Exponent):
            return value
        fr = Fraction(value)
        den = fr.denominator
        s = 0
        while den % p == 0:
            den //= p
            s += 1
        if den != 1:
            raise ValidationError(f"denominator of {value} is not a power of {p}")
        return Exponent(p, fr.numerator, s)

    def value(self) -> Fraction:
        return Fraction(self.num, self.p ** self.s)

    def __add__(self, other: "Exponent") -> "Exponent":
        s = max(self.s, other.s)
        return Exponent(self.p,
                        self.num * self.p ** (s - self.s) + other.num * self.p ** (s - other.s),
                        s)

    def __sub__(self, other: "Exponent") -> "Exponent":
        return self + (-other)

    def __neg__(self) -> "Exponent":
        return Exponent(self.p, -self.num, self.s)

    def scale_int(self, c: int) -> "Exponent":
        return Exponent(self.p, self.num * c, self.s)

    def scale_p_power(self, j: int) -> "Exponent":
        """Multiply by p^j (j may be negative)."""
        if j >= 0:
            return Exponent(self.p, self.num * self.p ** j, self.s)
        return Exponent(self.p, self.num, self.s - j)

    def _cmp_key(self, other: "Exponent"):
        s = max(self.s, other.s)
        return (self.num * self.p ** (s - self.s),
                other.num * self.p ** (s - other.s))

    def __lt__(self, other):
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp_key(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp_key(other)
        return a >= b

    def __repr__(self):
        if self.s == 0:
            return str(self.num)
        return f"{self.num}/{self.p}^{self.s}"


@dataclass(frozen=True)
class LogNorm:
    """An exact ultrametric absolute value on the log_q scale.

    ``value`` None encodes zero (log -infinity).  Products of elements
    add LogNorms; powers scale them.
    """

    value: Fraction | None = None

    def __post_init__(self):
        if self.value is not None and not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    @staticmethod
    def zero_element() -> "LogNorm":
        return LogNorm(None)

    @staticmethod
    def one() -> "LogNorm":
        return LogNorm(Fraction(0))

    def is_zero(self) -> bool:
        return self.value is None

    def __add__(self, other: "LogNorm") -> "LogNorm":
        if self.value is None or other.value is None:
            return LogNorm(None)
        return LogNorm(self.value + other.value)

    def scale(self, r) -> "LogNorm":
        if self.value is None:
            return self
        return LogNorm(self.value * Fraction(r))

    def max(self, other: "LogNorm") -> "LogNorm":
        if self.value is None:
            return other
        if other.value is None:
            return self
        return self if self.value >= other.value else other

    def leq(self, other: "LogNorm") -> bool:
        if self.value is None:
            return True
        if other.value is None:
            return False
        return self.value <= other.value

    def __lt__(self, other):
        return self.leq(other) and self != other

    def __repr__(self):
        if self.value is None:
            return "log_q = -inf"
        approx = float(self.value)
        return f"log_q = {self.value} (~{approx:.4f})"


def theta(spec: LocalFieldSpec) -> Fraction:
    """log_q of the absolute value of the series variable."""
    return Fraction(-spec.q, spec.q - 1)


@dataclass(frozen=True)
class TiltAbs:
    """Result of an absolute-value query: exact unless the element is
    indistinguishable from zero below a finite cap, in which case only
    the upper bound derived from the cap is known."""

    value: LogNorm
    exact: bool
    upper: LogNorm | None = None


class TiltElement:
    """A truncated element of the perfected Laurent-series field."""

    __slots__ = ("spec", "terms", "cap")

    def __init__(self, spec: LocalFieldSpec, terms: Iterable, cap: Exponent | None = None):
        cleaned = {}
        for m, c in (terms.items() if isinstance(terms, dict) else terms):
            if c.is_zero():
                continue
            if c.p != spec.p:
                raise MixedSpecError("coefficient characteristic mismatch")
            if cap is not None and m >= cap:
                continue
            c = _to_tower(c, spec.f)
            if m in cleaned:
                c = cleaned[m] + c
                if c.is_zero():
                    del cleaned[m]
                    continue
            cleaned[m] = c
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "terms", tuple(sorted(cleaned.items(), key=lambda t: t[0].value())))
        object.__setattr__(self, "cap", cap)

    def __setattr__(self, *a):
        raise AttributeError("TiltElement is immutable")

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def zero(spec, cap: Exponent | None = None) -> "TiltElement":
        return TiltElement(spec, (), cap)

    @staticmethod
    def one(spec, cap: Exponent | None = None) -> "TiltElement":
        return TiltElement.constant(spec, FFElement.one(spec.p, spec.f), cap)

    @staticmethod
    def constant(spec, c: FFElement, cap: Exponent | None = None) -> "TiltElement":
        return TiltElement(spec, [(Exponent(spec.p, 0), c)], cap)

    @staticmethod
    def monomial(spec, m, c: FFElement | None = None, cap: Exponent | None = None) -> "TiltElement":
        c = FFElement.one(spec.p, spec.f) if c is None else c
        return TiltElement(spec, [(Exponent.of(spec.p, m), c)], cap)

    @staticmethod
    def variable(spec, cap: Exponent | None = None) -> "TiltElement":
        return TiltElement.monomial(spec, 1, None, cap)

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, TiltElement):
            return NotImplemented
        return (self.spec == other.spec and self.terms == other.terms
                and self.cap == other.cap)

    def __hash__(self):
        return hash((self.spec, self.terms, self.cap))

    def __repr__(self):
        if not self.terms:
            body = "0"
        else:
            body = " + ".join(f"{list(c.coeffs)}*w^{m!r}" for m, c in self.terms)
        tail = f" + O(w^{self.cap!r})" if self.cap is not None else ""
        return f"Tilt({body}{tail})"

    def lowdeg(self) -> Exponent | None:
        """Lowest exponent of the support; None when no term is visible."""
        return self.terms[0][0] if self.terms else None

    def highdeg(self) -> Exponent | None:
        return self.terms[-1][0] if self.terms else None

    def coefficient(self, m: Exponent) -> FFElement:
        for mm, c in self.terms:
            if mm == m:
                return c
        return FFElement.zero(self.spec.p, self.spec.f)

    def agrees_below(self, other: "TiltElement", bound: Exponent) -> bool:
        """Equality of all terms with exponent < bound."""
        mine = {m: c for m, c in self.terms if m < bound}
        theirs = {m: c for m, c in other.terms if m < bound}
        return mine == theirs

    def truncate(self, cap: Exponent | None) -> "TiltElement":
        new_cap = _min_cap(self.cap, cap)
        return TiltElement(self.spec, self.terms, new_cap)

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: "TiltElement"):
        if self.spec != other.spec:
            raise MixedSpecError("mixed specs")

    def __add__(self, other):
        self._check(other)
        cap = _min_cap(self.cap, other.cap)
        return TiltElement(self.spec, list(self.terms) + list(other.terms), cap)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TiltElement(self.spec, [(m, -c) for m, c in self.terms], self.cap)

    def __mul__(self, other):
        self._check(other)
        cap = _mul_cap(self, other)
        acc: dict[Exponent, FFElement] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = m1 + m2
                if cap is not None and m >= cap:
                    continue
                prod = c1 * c2
                if m in acc:
                    s = acc[m] + prod
                    if s.is_zero():
                        del acc[m]
                    else:
                        acc[m] = s
                elif not prod.is_zero():
                    acc[m] = prod
        return TiltElement(self.spec, acc, cap)

    def __pow__(self, n: int):
        if n < 0:
            raise ValidationError("use inverse() with an explicit cap for negative powers")
        result = TiltElement.one(self.spec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self, target_cap: Exponent) -> "TiltElement":
        """Inverse computed by leading-monomial division then a geometric
        series, exact on exponents below the returned cap."""
        if self.is_zero():
            raise NotInvertibleError("zero divisor at precision")
        (a, c0), rest = self.terms[0], self.terms[1:]
        lead_inv = TiltElement.monomial(self.spec, -a, c0.inverse())
        if not rest:
            out_cap = target_cap if self.cap is None else _min_cap(
                target_cap, self.cap - a - a)
            return lead_inv.truncate(out_cap)
        # z = x / (c0 w^a) - 1 has positive lowest exponent
        out_cap = target_cap if self.cap is None else _min_cap(target_cap, self.cap - a - a)
        z = (self * lead_inv - TiltElement.one(self.spec)).truncate(
            None if self.cap is None else self.cap - a)
        if z.is_zero():
            return lead_inv.truncate(out_cap)
        gap = z.lowdeg()
        window = out_cap + a  # needed cap for the unit-part inverse
        acc = TiltElement.one(self.spec)
        power = TiltElement.one(self.spec)
        i = 1
        while gap.scale_int(i) < window:
            power = (power * z).truncate(window)
            if power.is_zero():
                break
            acc = acc + (power if i % 2 == 0 else -power)
            i += 1
        return (acc * lead_inv).truncate(out_cap)

    def frobenius_p(self, j: int) -> "TiltElement":
        """The p-power Frobenius applied j times (j may be negative);
        exponents scale by p^j, coefficients by the matching field map."""
        if j == 0:
            return self
        terms = [(m.scale_p_power(j), c.frobenius_p(j)) for m, c in self.terms]
        cap = None if self.cap is None else self.cap.scale_p_power(j)
        return TiltElement(self.spec, terms, cap)

    def frobenius_q(self, j: int = 1) -> "TiltElement":
        return self.frobenius_p(self.spec.f * j)

    def power_rational(self, num: int, s: int = 0, target_cap: Exponent | None = None) -> "TiltElement":
        """The exact num/p^s-th power (p-th roots are unique: take the
        inverse Frobenius first, then an integer power)."""
        base = self.frobenius_p(-s) if s else self
        if num >= 0:
            return base ** num
        if target_cap is None:
            raise ValidationError("negative powers need a target cap")
        return base.inverse(target_cap) ** (-num) if num != -1 else base.inverse(target_cap)

    # -- metric ----------------------------------------------------------------

    def abs_log(self) -> TiltAbs:
        if self.terms:
            return TiltAbs(LogNorm(self.terms[0][0].value() * theta(self.spec)), True)
        if self.cap is None:
            return TiltAbs(LogNorm(None), True)
        return TiltAbs(LogNorm(None), False,
                       upper=LogNorm(self.cap.value() * theta(self.spec)))

    def in_small_ideal(self, M) -> bool:
        """Membership in the ideal of elements with log_q|x| <= M * theta."""
        bound = Fraction(M) * theta(self.spec)
        a = self.abs_log()
        if a.value.value is None:
            return True
        return a.value.value <= bound


def _to_tower(c: FFElement, f: int) -> FFElement:
    """Canonicalize a coefficient into the smallest residue-tower field
    F_{q^k} (absolute degree a multiple of f) containing it."""
    cm = c.reduce_minimal()
    target = cm.n * f // gcd(cm.n, f)
    return cm.embed(target) if target != cm.n else cm


def _min_cap(a: Exponent | None, b: Exponent | None) -> Exponent | None:
    if a is None:
        return b
    if b is None:
        return a
    return a if a <= b else b


def _mul_cap(x: TiltElement, y: TiltElement) -> Exponent | None:
    """cap(xy) = min(cap_x + lowdeg(y), cap_y + lowdeg(x)), with the cap
    standing in for the low degree of an all-unknown factor."""
    def bound(cx, other):
        if cx is None:
            return None
        ld = other.lowdeg()
        if ld is None:
            ld = other.cap
        if ld is None:
            return None  # other is exactly zero: product exact
        return cx + ld
    if x.cap is None and x.is_zero():
        return None
    if y.cap is None and y.is_zero():
        return None
    b1 = bound(x.cap, y)
    b2 = bound(y.cap, x)
    return _min_cap(b1, b2)


def tilt_arith(x: TiltElement, y: TiltElement, op: str) -> TiltElement:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    raise ValidationError(f"unknown op {op!r}")


def tilt_inv(x: TiltElement, target_cap) -> TiltElement:
    return x.inverse(Exponent.of(x.spec.p, target_cap) if not isinstance(target_cap, Exponent) else target_cap)


def tilt_frobenius(x: TiltElement, k: int) -> TiltElement:
    return x.frobenius_q(k)


def tilt_abs(x: TiltElement) -> TiltAbs:
    return x.abs_log()
