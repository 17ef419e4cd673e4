"""Exact arithmetic in the integers of a p-adic base field at finite precision.

A base field is described by a :class:`LocalFieldSpec`: a prime p, a
residue degree f, and a ramification index e realized by an Eisenstein
polynomial E over the unramified subfield.  Writing t for the chosen
uniformizer (a root of E), the ring of integers extended by the degree-k
unramified part is

    O_k = Z_{q^k}[t] / (E(t)),        q = p^f,

a free module with basis 1, t, ..., t^(e-1) over the exact unramified
lift Z_{q^k} of gf.py.  An :class:`OElement` stores that coordinate
vector at a fixed uniformizer-adic precision: coordinate j is kept
modulo p^ceil((prec - j)/e), which is exactly the canonical form of
O_k / t^prec.  The uniformizer-adic valuation of sum_j a_j t^j is
min_j (e * vp(a_j) + j), with no cancellation between distinct j.

Canonical forms always use the smallest unramified level containing the
element, so equality of values equals equality of representations.  All
values are immutable and all operations are pure.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import gcd

from .errors import (
    MixedSpecError,
    NotInvertibleError,
    PrecisionError,
    ValidationError,
)
from .gf import (
    FFElement,
    ZqElement,
    is_prime,
    solve_fp,
    zq_minimal_degree,
    zq_project_down,
)


@dataclass(frozen=True)
class LocalFieldSpec:
    """A p-adic base field at finite uniformizer-adic working precision.

    ``eisenstein`` lists the integer coefficients (ascending, monic) of
    the defining polynomial of the uniformizer over the unramified
    subfield.  ``N`` is the number of uniformizer digits carried.
    """

    p: int
    e: int
    f: int
    eisenstein: tuple[int, ...]
    N: int

    def __post_init__(self):
        object.__setattr__(self, "eisenstein", tuple(self.eisenstein))
        if not is_prime(self.p):
            raise ValidationError(f"{self.p} is not prime")
        if self.e < 1 or self.f < 1 or self.N < 1:
            raise ValidationError("e, f, N must all be >= 1")
        E = self.eisenstein
        if len(E) != self.e + 1 or E[-1] != 1:
            raise ValidationError("eisenstein polynomial must be monic of degree e")
        if _vp_int(E[0], self.p) != 1:
            raise ValidationError("constant term must have p-valuation exactly 1")
        for c in E[1:-1]:
            if _vp_int(c, self.p) < 1:
                raise ValidationError("middle coefficients must be divisible by p")

    @property
    def q(self) -> int:
        return self.p ** self.f

    @staticmethod
    def unramified(p: int, f: int = 1, N: int = 8) -> "LocalFieldSpec":
        return LocalFieldSpec(p=p, e=1, f=f, eisenstein=(-p, 1), N=N)

    def guard_digits(self, prec: int | None = None) -> int:
        """Base-p digits carried internally for ``prec`` uniformizer digits."""
        prec = self.N if prec is None else prec
        return -(-prec // self.e) + 2

    def coeff_precision(self, j: int, prec: int | None = None) -> int:
        """Canonical p-digit count of coordinate j at uniformizer precision."""
        prec = self.N if prec is None else prec
        return max(0, -(-(prec - j) // self.e))

    def __repr__(self):
        return (f"LocalFieldSpec(p={self.p}, e={self.e}, f={self.f}, "
                f"E={list(self.eisenstein)}, N={self.N})")


def _vp_int(n: int, p: int) -> int:
    if n == 0:
        return 1 << 30
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _tower_level(d: int, f: int) -> int:
    """Smallest k with d | f*k."""
    return d // gcd(d, f)


class OElement:
    """An element of the base ring extended by a degree-k unramified part,
    carried at ``prec`` uniformizer digits.

    ``parts`` has length e; part j is a ZqElement of degree f*k reduced
    to its canonical precision ceil((prec - j)/e).  Construction
    canonicalizes both the per-coordinate precision and the unramified
    level, so equal values have equal representations.
    """

    __slots__ = ("spec", "k", "prec", "parts")

    def __init__(self, spec: LocalFieldSpec, k: int, prec: int, parts):
        parts = tuple(parts)
        if len(parts) != spec.e:
            raise ValidationError("need one coordinate per uniformizer power")
        if prec < 1:
            raise ValidationError("precision must be >= 1")
        n = spec.f * k
        canon = []
        for j, a in enumerate(parts):
            mj = spec.coeff_precision(j, prec)
            if mj == 0 or a.is_zero():
                canon.append(ZqElement.zero(spec.p, n, max(1, mj)))
                continue
            if a.n != n:
                raise ValidationError("coordinate has the wrong unramified degree")
            if a.M < mj:
                raise ValidationError("coordinate carries too little precision")
            canon.append(a.reduce_precision(mj))
        # minimal unramified level
        if k > 1:
            d = 1
            for a in canon:
                if not a.is_zero():
                    d = d * (dd := zq_minimal_degree(a)) // gcd(d, dd)
            k_min = _tower_level(d, spec.f)
            if k_min < k:
                n_min = spec.f * k_min
                canon = [zq_project_down(a, n_min) if not a.is_zero()
                         else ZqElement.zero(spec.p, n_min, a.M)
                         for a in canon]
                k = k_min
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "parts", tuple(canon))

    def __setattr__(self, *a):
        raise AttributeError("OElement is immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(spec, k: int = 1, prec: int | None = None) -> "OElement":
        prec = spec.N if prec is None else prec
        n = spec.f * k
        return OElement(spec, k, prec,
                        [ZqElement.zero(spec.p, n, max(1, spec.coeff_precision(j, prec)))
                         for j in range(spec.e)])

    @staticmethod
    def one(spec, k: int = 1, prec: int | None = None) -> "OElement":
        return OElement.from_int(spec, 1, prec=prec)

    @staticmethod
    def from_int(spec, value: int, prec: int | None = None) -> "OElement":
        prec = spec.N if prec is None else prec
        parts = [ZqElement.from_int(spec.p, spec.f, max(1, spec.coeff_precision(j, prec)),
                                    value if j == 0 else 0)
                 for j in range(spec.e)]
        return OElement(spec, 1, prec, parts)

    @staticmethod
    def pi(spec, prec: int | None = None) -> "OElement":
        """The uniformizer."""
        prec = spec.N if prec is None else prec
        if spec.e == 1:
            return OElement.from_int(spec, -spec.eisenstein[0], prec=prec)
        parts = [ZqElement.from_int(spec.p, spec.f, max(1, spec.coeff_precision(j, prec)),
                                    1 if j == 1 else 0)
                 for j in range(spec.e)]
        return OElement(spec, 1, prec, parts)

    @staticmethod
    def unramified_gen(spec, k: int, prec: int | None = None) -> "OElement":
        """The Teichmueller generator of the degree-k unramified part."""
        prec = spec.N if prec is None else prec
        n = spec.f * k
        parts = [ZqElement.gen(spec.p, n, max(1, spec.coeff_precision(j, prec)))
                 if j == 0 else
                 ZqElement.zero(spec.p, n, max(1, spec.coeff_precision(j, prec)))
                 for j in range(spec.e)]
        return OElement(spec, k, prec, parts)

    @staticmethod
    def naive_lift(spec, x: FFElement, prec: int | None = None) -> "OElement":
        """Digit-wise lift of a residue-tower element (no Teichmueller claim)."""
        prec = spec.N if prec is None else prec
        if x.p != spec.p:
            raise MixedSpecError("characteristic mismatch")
        xm = x.reduce_minimal()
        k = _tower_level(xm.n, spec.f)
        n = spec.f * k
        parts = [ZqElement.naive_lift(xm, max(1, spec.coeff_precision(j, prec)), n)
                 if j == 0 else
                 ZqElement.zero(spec.p, n, max(1, spec.coeff_precision(j, prec)))
                 for j in range(spec.e)]
        return OElement(spec, k, prec, parts)

    @staticmethod
    def teichmuller_ff(spec, x: FFElement, prec: int | None = None) -> "OElement":
        """The exact multiplicative lift of a residue-tower element."""
        a = OElement.naive_lift(spec, x, prec)
        if a.is_zero():
            return a
        Q = spec.q ** a.k
        t = a
        for _ in range(spec.guard_digits(a.prec) + a.prec + 2):
            t2 = t ** Q
            if t2 == t:
                return t
            t = t2
        raise ValidationError("multiplicative lift did not stabilize")

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.parts)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, OElement):
            return NotImplemented
        return (self.spec == other.spec and self.k == other.k
                and self.prec == other.prec and self.parts == other.parts)

    def __hash__(self):
        return hash((self.spec, self.k, self.prec, self.parts))

    def __repr__(self):
        return (f"O(p={self.spec.p},e={self.spec.e},f={self.spec.f}; "
                f"k={self.k}, prec={self.prec}: {[list(a.coeffs) for a in self.parts]})")

    # -- alignment -----------------------------------------------------------

    def extend_k(self, k2: int) -> "OElement":
        """Representation at a larger tower level (canonicalized back down
        on construction; used for aligned raw access)."""
        if k2 % self.k != 0:
            raise ValidationError("tower levels must divide")
        return self

    def raw_parts_at(self, k2: int):
        if k2 == self.k:
            return self.parts
        if k2 % self.k != 0:
            raise ValidationError("tower levels must divide")
        return tuple(a.embed(self.spec.f * k2) for a in self.parts)

    def reduce_precision(self, prec2: int) -> "OElement":
        if prec2 > self.prec:
            raise PrecisionError("cannot raise precision", achievable=self.prec)
        if prec2 == self.prec:
            return self
        return OElement(self.spec, self.k, prec2, self.parts)

    # -- arithmetic ------------------------------------------------------------

    def _common(self, other):
        if not isinstance(other, OElement):
            raise TypeError("expected OElement")
        if self.spec != other.spec:
            raise MixedSpecError("mixed base-field specs")
        k = self.k * other.k // gcd(self.k, other.k)
        prec = min(self.prec, other.prec)
        return k, prec

    def __add__(self, other):
        k, prec = self._common(other)
        xs, ys = self.raw_parts_at(k), other.raw_parts_at(k)
        parts = []
        for x, y in zip(xs, ys):
            m = min(x.M, y.M)
            parts.append(x.reduce_precision(m) + y.reduce_precision(m))
        return OElement(self.spec, k, prec, parts)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return OElement(self.spec, self.k, self.prec, [-x for x in self.parts])

    def __mul__(self, other):
        k, prec = self._common(other)
        spec = self.spec
        e = spec.e
        M = spec.guard_digits(prec)
        n = spec.f * k
        xs = [x.lift_precision_unsafe(M) for x in self.raw_parts_at(k)]
        ys = [y.lift_precision_unsafe(M) for y in other.raw_parts_at(k)]
        prod = [ZqElement.zero(spec.p, n, M) for _ in range(2 * e - 1)]
        for i, x in enumerate(xs):
            if x.is_zero():
                continue
            for j, y in enumerate(ys):
                if y.is_zero():
                    continue
                prod[i + j] = prod[i + j] + x * y
        E = spec.eisenstein
        for i in range(2 * e - 2, e - 1, -1):
            c = prod[i]
            if c.is_zero():
                continue
            for j in range(e):
                prod[i - e + j] = prod[i - e + j] - c.scale(E[j])
        return OElement(spec, k, prec, prod[:e])

    def __pow__(self, exp: int):
        if exp < 0:
            return self.inverse() ** (-exp)
        result = OElement.one(self.spec, prec=self.prec)
        base = self
        while exp:
            if exp & 1:
                result = result * base
            base = base * base
            exp >>= 1
        return result

    def valuation(self) -> int | None:
        """Uniformizer-adic valuation in 0..prec-1, or None meaning >= prec."""
        best = None
        for j, a in enumerate(self.parts):
            v = a.vp()
            if v is None:
                continue
            w = self.spec.e * v + j
            if w < self.prec and (best is None or w < best):
                best = w
        return best

    def residue(self) -> FFElement:
        """Image in the residue tower field F_{q^k}."""
        return self.parts[0].residue()

    def inverse(self) -> "OElement":
        if self.valuation() != 0:
            raise NotInvertibleError("not invertible at this precision")
        r = self.residue().inverse()
        u = OElement.naive_lift(self.spec, r, self.prec)
        two = OElement.from_int(self.spec, 2, prec=self.prec)
        steps = max(1, self.prec.bit_length() + 1)
        for _ in range(steps):
            u = u * (two - self * u)
        return u

    def divide_pi(self, j: int = 1) -> "OElement":
        """Exact division by the j-th power of the uniformizer.

        Precision drops by j.
        """
        if j == 0:
            return self
        if j > 1:
            return self.divide_pi(1).divide_pi(j - 1)
        if self.prec - 1 < 1:
            raise PrecisionError("no precision left after division", achievable=0)
        spec = self.spec
        e = spec.e
        M = spec.guard_digits(self.prec)
        n = spec.f * self.k
        xs = [x.lift_precision_unsafe(M) for x in self.parts]
        E = spec.eisenstein
        a0 = xs[0]
        if a0.vp() == 0:
            raise ValidationError("element not divisible by the uniformizer")
        if e == 1:
            unit = -E[0] // spec.p
            inv_unit = ZqElement.from_int(spec.p, n, M - 1, unit).inverse()
            out0 = a0.divide_p(1) * inv_unit
            return OElement(spec, self.k, self.prec - 1, [out0])
        inv_c0p = ZqElement.from_int(spec.p, n, M - 1, E[0] // spec.p).inverse()
        lead = a0.divide_p(1) * inv_c0p
        out = [xs[j2].reduce_precision(M - 1) for j2 in range(1, e)]
        out.append(ZqElement.zero(spec.p, n, M - 1))
        for j2 in range(1, e):
            out[j2 - 1] = out[j2 - 1] - lead.scale(E[j2])
        out[e - 1] = out[e - 1] - lead
        return OElement(spec, self.k, self.prec - 1, out)

    def frobenius(self, j: int = 1) -> "OElement":
        """The base-field-linear Frobenius: y -> y^(q^j) on the unramified
        generator of the residue tower, base coefficients fixed."""
        shift = (self.spec.f * j) % (self.spec.f * self.k)
        if shift == 0:
            return self
        return OElement(self.spec, self.k, self.prec,
                        [a.frobenius_p(shift) for a in self.parts])


def olocal_arith(x: OElement, y: OElement | None, op: str):
    """Operation-style surface over the element methods."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "val":
        return x.valuation()
    raise ValidationError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# the abelianized Galois bookkeeping

@dataclass(frozen=True)
class GammaElement:
    """A group element recorded through its character value u * pi^a.

    ``u`` is a unit of the base ring at working precision and ``a`` the
    Frobenius exponent; a = 1, u = 1 is the geometric Frobenius class.
    Composition is componentwise: units multiply, exponents add.
    """

    u: OElement
    a: int

    def __post_init__(self):
        if self.u.valuation() != 0:
            raise ValidationError("unit part must have valuation 0")

    @staticmethod
    def identity(spec: LocalFieldSpec) -> "GammaElement":
        return GammaElement(OElement.one(spec), 0)

    @staticmethod
    def frobenius(spec: LocalFieldSpec, a: int = 1) -> "GammaElement":
        return GammaElement(OElement.one(spec), a)

    def compose(self, other: "GammaElement") -> "GammaElement":
        return GammaElement(self.u * other.u, self.a + other.a)

    def __mul__(self, other):
        return self.compose(other)

    def inverse(self) -> "GammaElement":
        return GammaElement(self.u.inverse(), -self.a)

    def has_trivial_unit(self) -> bool:
        one = OElement.one(self.u.spec, prec=self.u.prec)
        return (self.u - one).is_zero()

    def chi(self) -> tuple[OElement, int]:
        """The character value as (unit, exponent)."""
        return (self.u, self.a)


def gamma_compose(g: GammaElement, h: GammaElement) -> GammaElement:
    return g.compose(h)


# ---------------------------------------------------------------------------
# pairs of base fields and the norm map

@dataclass(frozen=True)
class LocalFieldPair:
    """An extension of base fields with the uniformizer image as data.

    ``pi1_image`` realizes the smaller field's uniformizer inside the
    larger ring; the unramified parts are glued through the canonical
    compatible tower.
    """

    spec1: LocalFieldSpec
    spec2: LocalFieldSpec
    pi1_image: OElement

    def __post_init__(self):
        s1, s2 = self.spec1, self.spec2
        if s1.p != s2.p:
            raise ValidationError("mixed residue characteristics")
        if s2.f % s1.f or s2.e % s1.e:
            raise ValidationError("not an extension of local fields")
        if self.pi1_image.spec != s2 or self.pi1_image.k != 1:
            raise ValidationError("uniformizer image must live in the larger base ring")
        if self.pi1_image.valuation() != self.e12:
            raise ValidationError("uniformizer image has the wrong valuation")
        acc = OElement.zero(s2, prec=self.pi1_image.prec)
        for c in reversed(s1.eisenstein):
            acc = acc * self.pi1_image + OElement.from_int(s2, c, prec=self.pi1_image.prec)
        if acc.valuation() is not None:
            raise ValidationError("uniformizer image does not satisfy the defining polynomial")

    @property
    def d(self) -> int:
        return self.spec2.f // self.spec1.f

    @property
    def e12(self) -> int:
        return self.spec2.e // self.spec1.e

    @property
    def n(self) -> int:
        return self.d * self.e12

    def is_identity(self) -> bool:
        return (self.spec1 == self.spec2
                and self.pi1_image == OElement.pi(self.spec2, self.pi1_image.prec))

    @staticmethod
    def identity(spec: LocalFieldSpec) -> "LocalFieldPair":
        return LocalFieldPair(spec, spec, OElement.pi(spec))


def embed_o(pair: LocalFieldPair, x: OElement) -> OElement:
    """Apply the base-ring embedding determined by the pair."""
    s1, s2 = pair.spec1, pair.spec2
    if x.spec != s1:
        raise MixedSpecError("element does not live over the smaller field")
    if pair.is_identity():
        return x
    n1 = s1.f * x.k
    k2 = _tower_level(n1, s2.f)
    n2 = s2.f * k2
    prec2 = min(s2.N, pair.e12 * x.prec)
    pw = (s1.p ** n2 - 1) // (s1.p ** n1 - 1)
    y_img = OElement.unramified_gen(s2, k2, prec2) ** pw
    pi_img = pair.pi1_image.reduce_precision(min(prec2, pair.pi1_image.prec))
    acc = OElement.zero(s2, k2, prec2)
    for j in reversed(range(s1.e)):
        digit = _zq_to_o(s2, x.parts[j], y_img, k2, prec2)
        acc = acc * pi_img + digit
    return acc


def _zq_to_o(s2, a: ZqElement, y_img: OElement, k2: int, prec2: int) -> OElement:
    acc = OElement.zero(s2, k2, prec2)
    for c in reversed(a.coeffs):
        acc = acc * y_img + OElement.from_int(s2, c, prec=prec2)
    return acc


@functools.lru_cache(maxsize=None)
def _residue_coordinates(p, f1, f2):
    """Rows of the F_p-linear map (c_i)_{i<d} x kappa1-coords -> F_{p^f2},
    sending unit i, coord l to y2^i * (image of y1)^l."""
    d = f2 // f1
    cols = []
    y2 = FFElement.gen(p, f2)
    y1img = y2 ** ((p ** f2 - 1) // (p ** f1 - 1)) if f2 > f1 else y2
    if f1 == 1:
        y1img = FFElement.one(p, f2)
    for i in range(d):
        for l in range(f1):
            v = (y2 ** i) * (y1img ** l)
            coeffs = list(v.coeffs) + [0] * (f2 - len(v.coeffs))
            cols.append(coeffs)
    return [[cols[c][r] for c in range(len(cols))] for r in range(f2)]


def _decompose_over_smaller(pair: LocalFieldPair, z: OElement):
    """Write z (over spec2, k = 1) as sum_{i<d, j<e12} c_ij y2^i pi2^j with
    coefficients from the embedded smaller ring.  Returns ((i,j) -> OElement
    over spec1, achieved spec1 precision)."""
    s1, s2 = pair.spec1, pair.spec2
    d, e12 = pair.d, pair.e12
    if z.k != 1:
        raise ValidationError("decomposition implemented for residue level 1")
    P = z.prec
    achievable = -(-(P - (e12 - 1)) // e12)
    coeffs: dict[tuple[int, int], OElement] = {}
    pi2 = OElement.pi(s2, P)
    y2 = OElement.unramified_gen(s2, 1, P) if s2.f > 1 else OElement.one(s2, prec=P)
    matrix = _residue_coordinates(s1.p, s1.f, s2.f)
    # pi1_image = pi2^e12 * w with w a unit; the leading digit of a
    # subtracted term picks up w̄^m, so the solve target is corrected
    w_res = pair.pi1_image.reduce_precision(P).divide_pi(e12).residue()
    rest = z
    for _ in range(4 * (P + 1)):
        t = rest.valuation()
        if t is None:
            break
        j = t % e12
        m = t // e12
        shifted = rest.divide_pi(t) if t else rest
        delta = shifted.residue() * (w_res.inverse() ** m if m else w_res ** 0)
        dd = list(delta.embed(s2.f).coeffs)
        target = dd + [0] * (s2.f - len(dd))
        sol = solve_fp(matrix, target, s1.p)
        if sol is None:
            raise ValidationError("residue decomposition failed")
        step = OElement.zero(s2, prec=P)
        for i in range(d):
            ff1 = FFElement(s1.p, s1.f, sol[i * s1.f:(i + 1) * s1.f])
            if ff1.is_zero():
                continue
            c1 = OElement.naive_lift(s1, ff1, s1.N)
            piece = OElement.pi(s1, s1.N) ** m * c1
            key = (i, j)
            coeffs[key] = coeffs.get(key, OElement.zero(s1)) + piece
            sub = embed_o(pair, c1).reduce_precision(P)
            sub = sub * (y2 ** i) * (pi2 ** j) * (embed_o(pair, OElement.pi(s1, s1.N)).reduce_precision(P) ** m)
            step = step + sub
        rest = rest - step
        if rest.valuation() is not None and rest.valuation() <= t:
            raise ValidationError("decomposition did not make progress")
    return coeffs, achievable


def norm_map(pair: LocalFieldPair, u: OElement) -> OElement:
    """Determinant of multiplication by u on the larger ring viewed as a
    free module over the smaller one, reduced to the smaller precision."""
    s1, s2 = pair.spec1, pair.spec2
    if u.spec != s2:
        raise MixedSpecError("element does not live over the larger field")
    if u.k != 1:
        raise ValidationError("norm is implemented for residue level 1")
    if pair.is_identity():
        return u.reduce_precision(min(u.prec, s1.N))
    d, e12, n = pair.d, pair.e12, pair.n
    P = u.prec
    achievable = -(-(P - (e12 - 1)) // e12)
    if achievable < s1.N:
        raise PrecisionError(
            f"norm determined only to {achievable} digits at input precision",
            achievable=achievable)
    y2 = OElement.unramified_gen(s2, 1, P) if s2.f > 1 else OElement.one(s2, prec=P)
    pi2 = OElement.pi(s2, P)
    basis = [(i, j) for j in range(e12) for i in range(d)]
    cols = []
    for (i, j) in basis:
        img = u * (y2 ** i) * (pi2 ** j)
        cdict, _ = _decompose_over_smaller(pair, img)
        cols.append([cdict.get(key, OElement.zero(s1)) for key in basis])
    det = _det_o([[cols[c][r] for c in range(n)] for r in range(n)])
    return det.reduce_precision(s1.N)


def _det_o(m: list[list[OElement]]) -> OElement:
    n = len(m)
    if n == 1:
        return m[0][0]
    spec = m[0][0].spec
    total = OElement.zero(spec, prec=m[0][0].prec)
    for c in range(n):
        sub = [row[:c] + row[c + 1:] for row in m[1:]]
        term = m[0][c] * _det_o(sub)
        total = total + term if c % 2 == 0 else total - term
    return total


def chi_norm_transfer(pair: LocalFieldPair, g2: GammaElement) -> GammaElement:
    """Transfer a group element of the larger field to the smaller one by
    applying the norm to its character value."""
    if pair.is_identity():
        return g2
    nu = norm_map(pair, g2.u)
    npi = norm_map(pair, OElement.pi(pair.spec2))
    w = npi.divide_pi(pair.d)  # N(pi2) = w * pi1^d with w a unit
    if g2.a >= 0:
        unit = nu.reduce_precision(w.prec) * w ** g2.a
    else:
        unit = nu.reduce_precision(w.prec) * w.inverse() ** (-g2.a)
    return GammaElement(unit, pair.d * g2.a)
