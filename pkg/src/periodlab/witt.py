"""The coefficient period ring in its power-series model.

Elements are finite sums  sum_m a_m X^m  with exponents m in Z[1/p] and
coefficients a_m in the base ring (extended by unramified parts), kept
modulo pi^N.  Ring operations are plain series operations; the monomial
X^m reduces to w^m in the residue series field.  The Witt-style digit
decomposition x = sum_n pi^n tau(xi_n) is available through
:func:`teichmuller` and :func:`digit_decompose`; multiplication never
touches addition polynomials.

Precision is the lattice (N, cap): N pi-adic digits and exactness on all
exponents below the cap.  The norm family

    log_q |x|_r = max_m ( -v(a_m) + r * m * theta ),    theta = -q/(q-1),

is computed from the coefficients and agrees with the digit-wise
supremum at matching truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf
from typing import Iterable

from .base import LocalFieldSpec, OElement
from .errors import (
    MixedSpecError,
    NotInvertibleError,
    PrecisionError,
    ValidationError,
)
from .gf import FFElement
from .tilt import Exponent, LogNorm, TiltElement, theta, _min_cap


class WittElement:
    """A truncated element of the power-series period ring."""

    __slots__ = ("spec", "N", "terms", "cap")

    def __init__(self, spec: LocalFieldSpec, terms: Iterable, N: int,
                 cap: Exponent | None = None):
        if N < 1:
            raise ValidationError("need at least one pi-adic digit")
        cleaned: dict[Exponent, OElement] = {}
        for m, c in (terms.items() if isinstance(terms, dict) else terms):
            if c.spec != spec:
                raise MixedSpecError("coefficient spec mismatch")
            if cap is not None and m >= cap:
                continue
            c = c.reduce_precision(min(c.prec, N))
            if c.prec != N:
                raise PrecisionError(f"coefficient carries {c.prec} digits, need {N}")
            if c.is_zero():
                continue
            if m in cleaned:
                s = cleaned[m] + c
                if s.is_zero():
                    del cleaned[m]
                else:
                    cleaned[m] = s
            else:
                cleaned[m] = c
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "terms",
                           tuple(sorted(cleaned.items(), key=lambda t: t[0].value())))
        object.__setattr__(self, "cap", cap)

    def __setattr__(self, *a):
        raise AttributeError("WittElement is immutable")

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def zero(spec, N: int | None = None, cap: Exponent | None = None) -> "WittElement":
        return WittElement(spec, (), N or spec.N, cap)

    @staticmethod
    def one(spec, N: int | None = None, cap: Exponent | None = None) -> "WittElement":
        N = N or spec.N
        return WittElement(spec, [(Exponent(spec.p, 0), OElement.one(spec, prec=N))], N, cap)

    @staticmethod
    def from_o(a: OElement, cap: Exponent | None = None) -> "WittElement":
        return WittElement(a.spec, [(Exponent(a.spec.p, 0), a)], a.prec, cap)

    @staticmethod
    def from_int(spec, v: int, N: int | None = None) -> "WittElement":
        N = N or spec.N
        return WittElement.from_o(OElement.from_int(spec, v, prec=N))

    @staticmethod
    def variable(spec, N: int | None = None, cap: Exponent | None = None) -> "WittElement":
        return WittElement.monomial(spec, 1, None, N, cap)

    @staticmethod
    def monomial(spec, m, coeff: OElement | None = None, N: int | None = None,
                 cap: Exponent | None = None) -> "WittElement":
        N = N or spec.N
        coeff = OElement.one(spec, prec=N) if coeff is None else coeff
        return WittElement(spec, [(Exponent.of(spec.p, m), coeff)], N, cap)

    @staticmethod
    def pi_element(spec, N: int | None = None) -> "WittElement":
        N = N or spec.N
        return WittElement.from_o(OElement.pi(spec, N))

    # -- structure ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, WittElement):
            return NotImplemented
        return (self.spec == other.spec and self.N == other.N
                and self.terms == other.terms and self.cap == other.cap)

    def __hash__(self):
        return hash((self.spec, self.N, self.terms, self.cap))

    def __repr__(self):
        if not self.terms:
            body = "0"
        else:
            body = " + ".join(f"{c!r}*X^{m!r}" for m, c in self.terms)
        tail = f" + O(X^{self.cap!r})" if self.cap is not None else ""
        return f"Witt[N={self.N}]({body}{tail})"

    def lowdeg(self) -> Exponent | None:
        return self.terms[0][0] if self.terms else None

    def highdeg(self) -> Exponent | None:
        return self.terms[-1][0] if self.terms else None

    def coefficient(self, m) -> OElement:
        m = Exponent.of(self.spec.p, m)
        for mm, c in self.terms:
            if mm == m:
                return c
        return OElement.zero(self.spec, prec=self.N)

    def support_size(self) -> int:
        return len(self.terms)

    def agrees_below(self, other: "WittElement", bound: Exponent) -> bool:
        mine = {m: c for m, c in self.terms if m < bound}
        theirs = {m: c for m, c in other.terms if m < bound}
        return mine == theirs

    def truncate(self, cap: Exponent | None) -> "WittElement":
        return WittElement(self.spec, self.terms, self.N, _min_cap(self.cap, cap))

    def strip_cap(self) -> "WittElement":
        """Reinterpret the truncation as an exact element (caller asserts
        responsibility for the discarded tail)."""
        if self.cap is None:
            return self
        return WittElement(self.spec, self.terms, self.N, None)

    def reduce_N(self, N2: int) -> "WittElement":
        if N2 > self.N:
            raise PrecisionError("cannot raise pi-adic precision", achievable=self.N)
        if N2 == self.N:
            return self
        return WittElement(self.spec, [(m, c.reduce_precision(N2)) for m, c in self.terms],
                           N2, self.cap)

    # -- arithmetic ---------------------------------------------------------------

    def _check(self, other):
        if self.spec != other.spec:
            raise MixedSpecError("mixed specs")
        if self.N != other.N:
            raise MixedSpecError("mixed pi-adic precisions; reduce_N first")

    def __add__(self, other):
        self._check(other)
        cap = _min_cap(self.cap, other.cap)
        return WittElement(self.spec, list(self.terms) + list(other.terms), self.N, cap)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return WittElement(self.spec, [(m, -c) for m, c in self.terms], self.N, self.cap)

    def __mul__(self, other):
        self._check(other)
        cap = _mul_cap_w(self, other)
        acc: dict[Exponent, OElement] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = m1 + m2
                if cap is not None and m >= cap:
                    continue
                prod = c1 * c2
                if prod.is_zero():
                    continue
                if m in acc:
                    s = acc[m] + prod
                    if s.is_zero():
                        del acc[m]
                    else:
                        acc[m] = s
                else:
                    acc[m] = prod
        return WittElement(self.spec, acc, self.N, cap)

    def __pow__(self, n: int):
        if n < 0:
            raise ValidationError("use inverse() with an explicit cap for negative powers")
        result = WittElement.one(self.spec, self.N)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale_o(self, a: OElement) -> "WittElement":
        return self * WittElement.from_o(a.reduce_precision(min(a.prec, self.N)),
                                         None)

    def reduce_mod_pi(self) -> TiltElement:
        """Reduction to the residue series field; X^m goes to w^m."""
        terms = []
        for m, c in self.terms:
            r = c.residue()
            if not r.is_zero():
                terms.append((m, r))
        return TiltElement(self.spec, terms, self.cap)

    def content_valuation(self) -> int | None:
        """min over coefficients of the pi-adic valuation; None if the
        element vanishes mod pi^N."""
        best = None
        for _, c in self.terms:
            v = c.valuation()
            if v is not None and (best is None or v < best):
                best = v
        return best

    def divide_pi(self, j: int = 1) -> "WittElement":
        """Exact division by pi^j; pi-adic precision drops by j."""
        if j == 0:
            return self
        if self.N - j < 1:
            raise PrecisionError("no pi-adic precision left", achievable=self.N)
        return WittElement(self.spec, [(m, c.divide_pi(j)) for m, c in self.terms],
                           self.N - j, self.cap)

    def inverse(self, target_cap: Exponent | None = None) -> "WittElement":
        """Inverse by inverting the reduction in the residue series field
        and then pi-adic Newton doubling u <- u(2 - xu)."""
        red = self.reduce_mod_pi()
        if red.is_zero():
            if self.content_valuation() is not None:
                raise NotInvertibleError("divide by pi first")
            raise NotInvertibleError("zero divisor at precision")
        if target_cap is None:
            if self.cap is None and len(self.terms) == 1:
                m, c = self.terms[0]
                return WittElement(self.spec, [(-m, c.inverse())], self.N, None)
            raise ValidationError("an explicit target cap is required here")
        target_cap = Exponent.of(self.spec.p, target_cap)
        # working window padded against downward drift from negative exponents
        ld = red.lowdeg()
        drift = -ld if ld < Exponent(self.spec.p, 0) else Exponent(self.spec.p, 0)
        steps = max(1, (self.N - 1).bit_length() + 1)
        wc = target_cap + drift.scale_int(2 * (steps + 1))
        seed = teichmuller(red.inverse(wc), self.N)
        x = self.truncate(None)  # caps handled at the end
        u = seed
        two = WittElement.from_int(self.spec, 2, self.N)
        for _ in range(steps):
            u = (u * (two - x * u)).truncate(wc)
        out_cap = target_cap
        if self.cap is not None:
            ud = u.lowdeg()
            if ud is not None:
                out_cap = _min_cap(out_cap, self.cap + ud + ud)
        result = u.truncate(out_cap)
        if result.is_zero() and result.cap is not None:
            raise NotInvertibleError("zero divisor at precision")
        return result

    def frobenius_q(self, j: int = 1) -> "WittElement":
        """Exponents scale by q^j; coefficients move by the base Frobenius."""
        if j == 0:
            return self
        f = self.spec.f
        terms = [(m.scale_p_power(f * j), c.frobenius(j)) for m, c in self.terms]
        cap = None if self.cap is None else self.cap.scale_p_power(f * j)
        return WittElement(self.spec, terms, self.N, cap)

    def scale_exponents_p(self, j: int) -> "WittElement":
        """Substitution X -> X^(p^j): exponents scale, coefficients fixed."""
        if j == 0:
            return self
        terms = [(m.scale_p_power(j), c) for m, c in self.terms]
        cap = None if self.cap is None else self.cap.scale_p_power(j)
        return WittElement(self.spec, terms, self.N, cap)


def _mul_cap_w(x: WittElement, y: WittElement) -> Exponent | None:
    def bound(cx, other):
        if cx is None:
            return None
        ld = other.lowdeg()
        if ld is None:
            ld = other.cap
        if ld is None:
            return None
        return cx + ld
    if x.cap is None and x.is_zero():
        return None
    if y.cap is None and y.is_zero():
        return None
    return _min_cap(bound(x.cap, y), bound(y.cap, x))


def witt_arith(x: WittElement, y: WittElement, op: str) -> WittElement:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    raise ValidationError(f"unknown op {op!r}")


def witt_inv(x: WittElement, target_cap=None) -> WittElement:
    if target_cap is not None and not isinstance(target_cap, Exponent):
        target_cap = Exponent.of(x.spec.p, target_cap)
    return x.inverse(target_cap)


def witt_frobenius(x: WittElement, k: int = 1) -> WittElement:
    return x.frobenius_q(k)


# ---------------------------------------------------------------------------
# Teichmueller lifts and digit decomposition

def naive_lift(xi: TiltElement, N: int) -> WittElement:
    """Monomial-wise digit lift of a residue series element (no
    multiplicativity claim)."""
    spec = xi.spec
    terms = [(m, OElement.naive_lift(spec, c, N)) for m, c in xi.terms]
    return WittElement(spec, terms, N, xi.cap)


def teichmuller(xi: TiltElement, N: int) -> WittElement:
    """The multiplicative lift mod pi^N: lift the p^(N-1)-th root naively
    and raise it back, gaining at least one pi-digit per p-power."""
    spec = xi.spec
    t = N - 1
    if xi.is_zero():
        return WittElement.zero(spec, N, _tau_cap(xi, t))
    root = xi.frobenius_p(-t)
    w = naive_lift(root.truncate(None), N)
    for _ in range(t):
        w = w ** spec.p
    return w.truncate(_tau_cap(xi, t))


def _tau_cap(xi: TiltElement, t: int) -> Exponent | None:
    """Honest exactness window for the multiplicative lift of a truncated
    element: a tail O(w^c) can move digits at exponents down to
    (c + (p^t - 1) * lowdeg) / p^t."""
    if xi.cap is None:
        return None
    ld = xi.lowdeg()
    if ld is None:
        ld = xi.cap
    return (xi.cap + ld.scale_int(xi.spec.p ** t - 1)).scale_p_power(-t)


@dataclass(frozen=True)
class DigitVector:
    """Teichmueller digits of an element: x = sum_n pi^n tau(digits[n])."""

    spec: LocalFieldSpec
    digits: tuple[TiltElement, ...]

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def reconstruct(self, N: int | None = None) -> WittElement:
        N = N if N is not None else len(self.digits)
        spec = self.spec
        acc = WittElement.zero(spec, N)
        pi = WittElement.pi_element(spec, N)
        pw = WittElement.one(spec, N)
        for n, xi in enumerate(self.digits[:N]):
            acc = acc + pw * teichmuller(xi, N)
            if n + 1 < N:
                pw = pw * pi
        return acc


def digit_decompose(x: WittElement) -> DigitVector:
    """Peel Teichmueller digits: xi_0 = x mod pi, then subtract its lift
    and divide by pi.  Later digits may carry smaller caps; that is the
    honest per-digit precision report."""
    digits = []
    rest = x
    for n in range(x.N):
        xi = rest.reduce_mod_pi()
        digits.append(xi)
        if n + 1 == x.N:
            break
        rest = (rest - teichmuller(xi, rest.N)).divide_pi()
    return DigitVector(x.spec, tuple(digits))


# ---------------------------------------------------------------------------
# the norm family

@dataclass(frozen=True)
class NormReport:
    """An r-norm value on the log_q scale.

    When the element has a finite exponent cap the unseen tail can still
    contribute up to ``upper``; ``exact`` marks reports where the visible
    support already dominates that bound.
    """

    r: object
    value: LogNorm
    upper: LogNorm
    exact: bool

    def __repr__(self):
        mark = "" if self.exact else f" (upper bound {self.upper!r})"
        return f"|x|_{self.r}: {self.value!r}{mark}"


def norm_r(x: WittElement, r) -> NormReport:
    """The r-indexed norm, computed from the power-series coefficients.

    r = 0 gives the discrete-valuation norm ([xi != 0] convention), and
    r = inf the supremum of the digit norms (computed from the digits).
    """
    if r == inf:
        return _norm_inf(x)
    r = Fraction(r)
    if r < 0:
        raise ValidationError("r must be >= 0")
    th = theta(x.spec)
    best: LogNorm = LogNorm(None)
    for m, c in x.terms:
        v = c.valuation()
        if v is None:
            continue
        best = best.max(LogNorm(-v + r * m.value() * th))
    if x.cap is None:
        return NormReport(r, best, best, True)
    tail = LogNorm(r * x.cap.value() * th)  # unseen terms: v >= 0, m >= cap
    exact = tail.leq(best)
    return NormReport(r, best, best.max(tail), exact)


def _norm_inf(x: WittElement) -> NormReport:
    best: LogNorm = LogNorm(None)
    exact = True
    for xi in digit_decompose(x):
        a = xi.abs_log()
        best = best.max(a.value)
        if not a.exact:
            exact = False
    upper = best
    if not exact and x.cap is not None:
        upper = best.max(LogNorm(x.cap.value() * theta(x.spec)))
    return NormReport(inf, best, upper, exact and x.cap is None or exact)


def norm_r_via_digits(x: WittElement, r) -> NormReport:
    """The digit-wise supremum sup_n q^(-n) |xi_n|^r; agrees with
    :func:`norm_r` at matching truncation."""
    if r == inf:
        return _norm_inf(x)
    r = Fraction(r)
    if r < 0:
        raise ValidationError("r must be >= 0")
    best: LogNorm = LogNorm(None)
    exact = True
    for n, xi in enumerate(digit_decompose(x)):
        a = xi.abs_log()
        if not a.exact:
            exact = False
        if a.value.value is None:
            continue
        if r == 0:
            best = best.max(LogNorm(Fraction(-n)))
        else:
            best = best.max(LogNorm(-n + r * a.value.value))
    return NormReport(r, best, best, exact)


def inner_radius_log(spec: LocalFieldSpec, r) -> Fraction:
    """log_q of the inner radius of the annulus attached to r."""
    return Fraction(r) * theta(spec)


# ---------------------------------------------------------------------------
# overconvergence evidence at finite precision

@dataclass(frozen=True)
class OverconvergenceProfile:
    """Per-digit norms with the largest r certified by the retained data.

    A finite-precision profile is necessary-but-not-sufficient evidence:
    it constrains only the digits seen, never the infinite object.
    """

    digit_norms: tuple[tuple[int, LogNorm], ...]
    r_star: Fraction | None  # None encodes "any r" (no constraint)
    uniform_bound: LogNorm
    decreasing_thresholds: bool
    caveat: str = ("finite-precision profile: necessary-but-not-sufficient "
                   "evidence about the untruncated element")

    @property
    def flagged_non_overconvergent(self) -> bool:
        return self.decreasing_thresholds


def overconvergence_profile(x: WittElement) -> OverconvergenceProfile:
    digits = digit_decompose(x)
    norms = []
    thresholds = []
    for n, xi in enumerate(digits):
        a = xi.abs_log().value
        norms.append((n, a))
        if n >= 1 and a.value is not None and a.value > 0:
            thresholds.append((n, Fraction(n, 1) / a.value))
    if not thresholds:
        r_star = None
        bound = LogNorm(Fraction(0))
        decreasing = False
    else:
        r_star = min(t for _, t in thresholds)
        vals = [t for _, t in thresholds]
        decreasing = len(vals) >= 2 and all(b < a for a, b in zip(vals, vals[1:]))
        a0 = norms[0][1]
        bound = LogNorm(Fraction(0))
        if a0.value is not None and a0.value > 0:
            bound = LogNorm(a0.value * r_star)
    return OverconvergenceProfile(tuple(norms), r_star, bound, decreasing)
