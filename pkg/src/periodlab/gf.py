"""Compatible towers of finite fields and their unramified p-adic lifts.

The algebraic closure of F_p is presented as the directed union of the
fields F_{p^n}.  For each degree n we fix a monic primitive polynomial
g_n over F_p such that the canonical generators x_n (the class of Y mod
g_n) are norm-compatible: whenever m | n,

    x_n ** ((p**n - 1) // (p**m - 1))   is a root of g_m.

Embeddings F_{p^m} -> F_{p^n} send x_m to that power of x_n, so all
embeddings in the tower commute.  The polynomials are found by a
deterministic search: the first (in a fixed enumeration) monic primitive
polynomial compatible with every previously fixed level below it.

Each level carries an exact unramified p-adic lift.  The ring Z_{p^n}
truncated at p^M is presented as (Z/p^M)[y]/(h_n) where h_n is the
minimal polynomial of the multiplicative (Teichmueller) lift of x_n; in
this model y satisfies y**(p**n - 1) == 1 exactly, the Frobenius
automorphism is y -> y**p, and tower embeddings send y_m to
y_n ** ((p**n - 1)//(p**m - 1)), all exact at every precision.

Polynomials over F_p and over Z/p^M are coefficient tuples in degree-
ascending order.
"""

from __future__ import annotations

import functools
from typing import Iterable, Sequence

from .errors import NotInvertibleError, ValidationError

_MAX_TOWER_DEGREE = 64


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs stay desk-sized)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


# ---------------------------------------------------------------------------
# dense polynomial arithmetic modulo an integer (used mod p and mod p^M)

def _ptrim(a: Sequence[int]) -> tuple[int, ...]:
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def _padd(a, b, mod):
    n = max(len(a), len(b))
    return _ptrim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % mod
                   for i in range(n)])


def _psub(a, b, mod):
    n = max(len(a), len(b))
    return _ptrim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % mod
                   for i in range(n)])


def _pmul(a, b, mod):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % mod
    return _ptrim(out)


def _pmod(a, m, mod):
    """Reduce a modulo the monic polynomial m (coefficients mod ``mod``)."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % mod
        if c:
            a[i] = 0
            for j in range(dm):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % mod
    return _ptrim(a)


def _ppowmod(a, e, m, mod):
    result = (1,)
    base = _pmod(a, m, mod)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, mod), m, mod)
        base = _pmod(_pmul(base, base, mod), m, mod)
        e >>= 1
    return result


def _pgcd(a, b, p):
    """gcd over F_p, monic or zero."""
    a, b = _ptrim(a), _ptrim(b)
    while b:
        inv_lead = pow(b[-1], -1, p)
        bb = tuple((c * inv_lead) % p for c in b)
        a = _pmod(a, bb, p)
        a, b = b, a
    if a:
        inv_lead = pow(a[-1], -1, p)
        a = tuple((c * inv_lead) % p for c in a)
    return a


def _is_irreducible(g, p, n):
    x = _pmod((0, 1), g, p)
    xq = _ppowmod(x, p ** n, g, p)
    if _psub(xq, x, p):
        return False
    for ell in factorize(n):
        xe = _ppowmod(x, p ** (n // ell), g, p)
        if len(_pgcd(_psub(xe, x, p), g, p)) > 1:
            return False
    return True


def _is_primitive_root(g, p, n):
    order = p ** n - 1
    x = (0, 1)
    for ell in factorize(order):
        if _ppowmod(x, order // ell, g, p) == (1,):
            return False
    return True


@functools.lru_cache(maxsize=None)
def tower_polynomial(p: int, n: int) -> tuple[int, ...]:
    """Deterministic compatible primitive polynomial of degree n over F_p.

    Monic, degree-ascending coefficient tuple of length n+1.
    """
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    if n < 1 or n > _MAX_TOWER_DEGREE:
        raise ValidationError(f"tower degree {n} out of supported range")
    lower = {m: tower_polynomial(p, m) for m in range(1, n) if n % m == 0}
    for code in range(1, p ** n):
        coeffs = []
        c = code
        for _ in range(n):
            coeffs.append(c % p)
            c //= p
        if coeffs[0] == 0:
            continue
        g = tuple(coeffs) + (1,)
        if not _is_irreducible(g, p, n):
            continue
        if not _is_primitive_root(g, p, n):
            continue
        ok = True
        for m, gm in lower.items():
            z = _ppowmod((0, 1), (p ** n - 1) // (p ** m - 1), g, p)
            if _pmod(_peval_poly(gm, z, g, p), g, p):
                ok = False
                break
        if ok:
            return g
    raise ValidationError(f"no compatible primitive polynomial found for p={p}, n={n}")


def _peval_poly(f, z, m, mod):
    """Evaluate f (coefficients in the prime field) at the residue class z."""
    acc: tuple[int, ...] = ()
    for c in reversed(f):
        acc = _pmod(_pmul(acc, z, mod), m, mod)
        if c:
            acc = _padd(acc, (c,), mod)
    return acc


# ---------------------------------------------------------------------------
# elements of F_{p^n}

class FFElement:
    """An element of F_{p^n} in the fixed compatible tower.

    Immutable.  ``coeffs`` is the degree-ascending coordinate tuple with
    respect to powers of the canonical generator, trimmed of leading
    zeros (so the zero element has an empty tuple).
    """

    __slots__ = ("p", "n", "coeffs")

    def __init__(self, p: int, n: int, coeffs: Iterable[int]):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", _pmod(tuple(c % p for c in coeffs),
                                                 tower_polynomial(p, n), p))

    def __setattr__(self, *a):
        raise AttributeError("FFElement is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(p: int, n: int = 1) -> "FFElement":
        return FFElement(p, n, ())

    @staticmethod
    def one(p: int, n: int = 1) -> "FFElement":
        return FFElement(p, n, (1,))

    @staticmethod
    def gen(p: int, n: int) -> "FFElement":
        """The canonical generator of F_{p^n}."""
        return FFElement(p, n, (0, 1))

    @staticmethod
    def from_int(p: int, value: int, n: int = 1) -> "FFElement":
        return FFElement(p, n, (value % p,))

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, FFElement):
            return NotImplemented
        if self.p != other.p:
            return False
        if self.n == other.n:
            return self.coeffs == other.coeffs
        m = _lcm(self.n, other.n)
        return self.embed(m).coeffs == other.embed(m).coeffs

    def __hash__(self):
        # hash via the minimal-field representation so equal elements in
        # different presentation degrees collide correctly
        red = self.reduce_minimal()
        return hash((red.p, red.n, red.coeffs))

    def __repr__(self):
        if self.is_zero():
            return f"FF({self.p}^{self.n}: 0)"
        return f"FF({self.p}^{self.n}: {list(self.coeffs)})"

    # -- arithmetic --------------------------------------------------------

    def _pair(self, other: "FFElement"):
        if self.p != other.p:
            raise ValidationError("mixed characteristics")
        if self.n == other.n:
            return self, other
        m = _lcm(self.n, other.n)
        return self.embed(m), other.embed(m)

    def __add__(self, other):
        a, b = self._pair(other)
        return FFElement(a.p, a.n, _padd(a.coeffs, b.coeffs, a.p))

    def __sub__(self, other):
        a, b = self._pair(other)
        return FFElement(a.p, a.n, _psub(a.coeffs, b.coeffs, a.p))

    def __neg__(self):
        return FFElement(self.p, self.n, tuple((-c) % self.p for c in self.coeffs))

    def __mul__(self, other):
        a, b = self._pair(other)
        return FFElement(a.p, a.n, _pmul(a.coeffs, b.coeffs, a.p))

    def __pow__(self, e: int):
        if self.is_zero():
            if e < 0:
                raise NotInvertibleError("zero is not invertible")
            return self if e else FFElement.one(self.p, self.n)
        order = self.p ** self.n - 1
        e %= order
        g = tower_polynomial(self.p, self.n)
        return FFElement(self.p, self.n, _ppowmod(self.coeffs, e, g, self.p))

    def inverse(self) -> "FFElement":
        if self.is_zero():
            raise NotInvertibleError("zero is not invertible")
        return self ** (self.p ** self.n - 2)

    def frobenius_p(self, j: int) -> "FFElement":
        """Apply the p-power Frobenius j times (j may be negative)."""
        j %= self.n
        return self ** (self.p ** j)

    # -- tower plumbing ------------------------------------------------------

    def embed(self, n2: int) -> "FFElement":
        if n2 == self.n:
            return self
        if n2 % self.n != 0:
            raise ValidationError(f"no embedding F_{self.p}^{self.n} -> F_{self.p}^{n2}")
        img = _embedding_image(self.p, self.n, n2)
        g2 = tower_polynomial(self.p, n2)
        return FFElement(self.p, n2, _peval_poly(self.coeffs, img, g2, self.p))

    def minimal_degree(self) -> int:
        """The degree of the smallest tower field containing this element."""
        if self.is_zero():
            return 1
        for d in sorted(_divisors(self.n)):
            if self.frobenius_p(d) == self:
                return d
        return self.n

    def reduce_minimal(self) -> "FFElement":
        """Re-express in the smallest tower field containing the element."""
        d = self.minimal_degree()
        if d == self.n:
            return self
        return _project_down(self, d)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a * b // gcd(a, b)


@functools.lru_cache(maxsize=None)
def _embedding_image(p: int, m: int, n: int) -> tuple[int, ...]:
    """Coordinates in F_{p^n} of the image of the canonical generator of F_{p^m}."""
    g = tower_polynomial(p, n)
    return _ppowmod((0, 1), (p ** n - 1) // (p ** m - 1), g, p)


@functools.lru_cache(maxsize=None)
def _down_basis_matrix(p: int, d: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Rows: F_p-coordinates in F_{p^n} of the images of x_d^i, i < d."""
    img = _embedding_image(p, d, n)
    g = tower_polynomial(p, n)
    rows = []
    acc: tuple[int, ...] = (1,)
    for _ in range(d):
        rows.append(tuple(acc) + (0,) * (n - len(acc)))
        acc = _pmod(_pmul(acc, img, p), g, p)
    return tuple(rows)


def _project_down(x: FFElement, d: int) -> FFElement:
    rows = _down_basis_matrix(x.p, d, x.n)
    target = list(x.coeffs) + [0] * (x.n - len(x.coeffs))
    sol = solve_fp([[rows[j][i] for j in range(d)] for i in range(x.n)],
                   target, x.p)
    if sol is None:
        raise ValidationError("element does not lie in the claimed subfield")
    return FFElement(x.p, d, sol)


# ---------------------------------------------------------------------------
# small exact linear algebra over F_p

def solve_fp(matrix: Sequence[Sequence[int]], rhs: Sequence[int], p: int):
    """Solve M x = rhs over F_p.  Returns one solution or None."""
    rows = [list(r) + [b % p] for r, b in zip(matrix, rhs)]
    nrows, ncols = len(rows), len(matrix[0]) if matrix else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if rows[i][c] % p), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if rows[i][ncols] % p:
            return None
    sol = [0] * ncols
    for i, c in enumerate(pivots):
        sol[c] = rows[i][ncols]
    return sol


def nullspace_fp(matrix: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of the right nullspace of M over F_p."""
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if rows[i][c] % p), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, c in enumerate(pivots):
            v[c] = (-rows[i][fc]) % p
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# unramified p-adic lifts Z_{p^n} / p^M

@functools.lru_cache(maxsize=None)
def zq_modulus(p: int, n: int, M: int) -> tuple[int, ...]:
    """Minimal polynomial mod p^M of the Teichmueller lift of the canonical
    generator of F_{p^n}.  Monic of degree n; divides Y^(p^n - 1) - 1."""
    if M < 1:
        raise ValidationError("precision must be >= 1")
    mod = p ** M
    g = tuple(int(c) for c in tower_polynomial(p, n))
    # Teichmueller lift of y inside (Z/p^M)[Y]/(naive lift of g):
    # iterate the (p^n)-th power map until it stabilizes.
    t = (0, 1)
    for _ in range(M + 1):
        t2 = _ppowmod(t, p ** n, g, mod)
        if t2 == t:
            break
        t = t2
    # h = prod_j (Y - t^(p^j)); compute in (R)[Y], R = (Z/p^M)[y]/(g).
    conj = t
    hpoly = [(1,)]  # coefficients (elements of R) of a monic poly, ascending
    for _ in range(n):
        new = [()] * (len(hpoly) + 1)
        for i, c in enumerate(hpoly):
            new[i + 1] = _padd(new[i + 1], c, mod)
            new[i] = _psub(new[i], _pmod(_pmul(c, conj, mod), g, mod), mod)
        hpoly = new
        conj = _ppowmod(conj, p, g, mod)
    out = []
    for c in hpoly:
        if len(c) > 1:
            raise ValidationError("Teichmueller minimal polynomial not rational")
        out.append(c[0] if c else 0)
    return tuple(out)


class ZqElement:
    """An element of Z_{p^n} known modulo p^M.

    ``coeffs`` is the degree-ascending coordinate tuple (length <= n) on
    powers of the Teichmueller generator y, entries reduced mod p^M.
    The generator satisfies y^(p^n - 1) == 1 exactly, so the Frobenius
    automorphism is y -> y^p and is exact at every precision.
    """

    __slots__ = ("p", "n", "M", "coeffs")

    def __init__(self, p, n, M, coeffs):
        mod = p ** M
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "coeffs",
                           _pmod(tuple(c % mod for c in coeffs), zq_modulus(p, n, M), mod))

    def __setattr__(self, *a):
        raise AttributeError("ZqElement is immutable")

    @staticmethod
    def zero(p, n, M):
        return ZqElement(p, n, M, ())

    @staticmethod
    def one(p, n, M):
        return ZqElement(p, n, M, (1,))

    @staticmethod
    def from_int(p, n, M, value):
        return ZqElement(p, n, M, (value,))

    @staticmethod
    def gen(p, n, M):
        return ZqElement(p, n, M, (0, 1))

    @staticmethod
    def naive_lift(x: FFElement, M: int, n: int | None = None) -> "ZqElement":
        """Digit-wise lift of an F_{p^n} element (coordinates read as integers)."""
        n = n or x.n
        xx = x.embed(n) if n != x.n else x
        return ZqElement(x.p, n, M, xx.coeffs)

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, ZqElement):
            return NotImplemented
        return (self.p, self.n, self.M, self.coeffs) == (other.p, other.n, other.M, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.n, self.M, self.coeffs))

    def __repr__(self):
        return f"Zq({self.p}^{self.n} mod p^{self.M}: {list(self.coeffs)})"

    def _check(self, other):
        if (self.p, self.n, self.M) != (other.p, other.n, other.M):
            raise ValidationError("mixed Zq parents")

    def __add__(self, other):
        self._check(other)
        return ZqElement(self.p, self.n, self.M, _padd(self.coeffs, other.coeffs, self.p ** self.M))

    def __sub__(self, other):
        self._check(other)
        return ZqElement(self.p, self.n, self.M, _psub(self.coeffs, other.coeffs, self.p ** self.M))

    def __neg__(self):
        mod = self.p ** self.M
        return ZqElement(self.p, self.n, self.M, tuple((-c) % mod for c in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        return ZqElement(self.p, self.n, self.M, _pmul(self.coeffs, other.coeffs, self.p ** self.M))

    def scale(self, c: int) -> "ZqElement":
        mod = self.p ** self.M
        return ZqElement(self.p, self.n, self.M, tuple((a * c) % mod for a in self.coeffs))

    def vp(self) -> int | None:
        """p-adic valuation; None means >= M (indistinguishable from 0)."""
        if not self.coeffs:
            return None
        v = self.M
        for c in self.coeffs:
            if c:
                w = 0
                while c % self.p == 0:
                    c //= self.p
                    w += 1
                v = min(v, w)
        return v if v < self.M else None

    def residue(self) -> FFElement:
        return FFElement(self.p, self.n, tuple(c % self.p for c in self.coeffs))

    def reduce_precision(self, M2: int) -> "ZqElement":
        if M2 > self.M:
            raise ValidationError("cannot raise precision")
        if M2 == self.M:
            return self
        return ZqElement(self.p, self.n, M2, self.coeffs)

    def lift_precision_unsafe(self, M2: int) -> "ZqElement":
        """Reinterpret at higher precision (padding unknown digits with 0)."""
        if M2 < self.M:
            return self.reduce_precision(M2)
        return ZqElement(self.p, self.n, M2, self.coeffs)

    def divide_p(self, k: int = 1) -> "ZqElement":
        """Exact division by p^k; precision drops by k."""
        if self.M - k < 1:
            raise ValidationError("no precision left after division")
        pk = self.p ** k
        out = []
        for c in self.coeffs:
            if c % pk:
                raise ValidationError("element not divisible by p^k")
            out.append(c // pk)
        return ZqElement(self.p, self.n, self.M - k, out)

    def inverse(self) -> "ZqElement":
        r = self.residue()
        if r.is_zero():
            raise NotInvertibleError("not invertible at this precision")
        u = ZqElement.naive_lift(r.inverse(), self.M, self.n)
        two = ZqElement.from_int(self.p, self.n, self.M, 2)
        # Newton doubling: u <- u(2 - xu)
        steps = max(1, (self.M - 1).bit_length() + 1)
        for _ in range(steps):
            u = u * (two - self * u)
        return u

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = ZqElement.one(self.p, self.n, self.M)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius_p(self, j: int) -> "ZqElement":
        """The unique automorphism lifting the p-power Frobenius, applied j
        times.  Exact: acts by y -> y^(p^(j mod n))."""
        j %= self.n
        if j == 0:
            return self
        img = _zq_frobenius_image(self.p, self.n, self.M, j)
        return self._evaluate_at(img)

    def embed(self, n2: int) -> "ZqElement":
        if n2 == self.n:
            return self
        if n2 % self.n != 0:
            raise ValidationError("no such unramified embedding")
        img = _zq_embedding_image(self.p, self.n, n2, self.M)
        coeffs = self.coeffs
        acc = ZqElement.zero(self.p, n2, self.M)
        for c in reversed(coeffs):
            acc = acc * img + ZqElement.from_int(self.p, n2, self.M, c)
        return acc

    def _evaluate_at(self, img: "ZqElement") -> "ZqElement":
        acc = ZqElement.zero(self.p, self.n, self.M)
        for c in reversed(self.coeffs):
            acc = acc * img + ZqElement.from_int(self.p, self.n, self.M, c)
        return acc

    def teichmuller_part(self) -> "ZqElement":
        """The multiplicative lift of the residue of this element."""
        t = self
        for _ in range(self.M + 1):
            t2 = t ** (self.p ** self.n)
            if t2 == t:
                break
            t = t2
        return t


@functools.lru_cache(maxsize=None)
def _zq_frobenius_image(p, n, M, j):
    return ZqElement.gen(p, n, M) ** (p ** j)


@functools.lru_cache(maxsize=None)
def _zq_embedding_image(p, m, n, M):
    return ZqElement.gen(p, n, M) ** ((p ** n - 1) // (p ** m - 1))


# ---------------------------------------------------------------------------
# descent to subrings of the unramified tower

def _matrix_inverse_mod_pM(rows: Sequence[Sequence[int]], p: int, M: int):
    """Inverse of a square matrix over Z/p^M whose reduction mod p is
    invertible; Newton lifting from the mod-p inverse."""
    d = len(rows)
    mod = p ** M
    red = [[v % p for v in r] for r in rows]
    inv_p = []
    for i in range(d):
        rhs = [1 if j == i else 0 for j in range(d)]
        col = solve_fp(red, rhs, p)
        if col is None:
            return None
        inv_p.append(col)
    # columns -> matrix
    X = [[inv_p[j][i] % mod for j in range(d)] for i in range(d)]
    steps = max(1, (M - 1).bit_length() + 1)
    for _ in range(steps):
        AX = _mat_mul_int(rows, X, mod)
        E = [[(2 if i == j else 0) - AX[i][j] for j in range(d)] for i in range(d)]
        X = _mat_mul_int(X, E, mod)
    return X


def _mat_mul_int(A, B, mod):
    d = len(A)
    e = len(B[0])
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) % mod for j in range(e)]
            for i in range(d)]


@functools.lru_cache(maxsize=None)
def _zq_down_solver(p: int, d: int, n: int, M: int):
    """Pivot rows and inverted pivot block for projecting elements of
    Z_{p^n}/p^M onto the embedded basis 1, y_d, ..., y_d^(d-1)."""
    img = _zq_embedding_image(p, d, n, M)
    cols = []
    acc = ZqElement.one(p, n, M)
    for _ in range(d):
        cols.append(list(acc.coeffs) + [0] * (n - len(acc.coeffs)))
        acc = acc * img
    # full n x d matrix; choose d rows independent mod p
    full = [[cols[j][i] for j in range(d)] for i in range(n)]
    pivot_rows = []
    work = []
    for i in range(n):
        trial = work + [[v % p for v in full[i]]]
        if _fp_rank(trial, p) > len(work):
            work = trial
            pivot_rows.append(i)
        if len(pivot_rows) == d:
            break
    block = [full[i] for i in pivot_rows]
    inv = _matrix_inverse_mod_pM(block, p, M)
    return tuple(pivot_rows), tuple(tuple(r) for r in inv), tuple(tuple(r) for r in full)


def _fp_rank(rows, p):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def zq_minimal_degree(x: ZqElement, multiple_of: int = 1) -> int:
    """Smallest d (a multiple of ``multiple_of`` dividing n) with x in Z_{p^d}."""
    for d in sorted(_divisors(x.n)):
        if d % multiple_of:
            continue
        if x.frobenius_p(d) == x:
            return d
    return x.n


def zq_project_down(x: ZqElement, d: int) -> ZqElement:
    """Re-express x in Z_{p^d}/p^M; requires x to lie in that subring."""
    if d == x.n:
        return x
    pivot_rows, inv, full = _zq_down_solver(x.p, d, x.n, x.M)
    mod = x.p ** x.M
    target = list(x.coeffs) + [0] * (x.n - len(x.coeffs))
    rhs = [target[i] for i in pivot_rows]
    sol = [sum(inv[i][j] * rhs[j] for j in range(d)) % mod for i in range(d)]
    # consistency on the remaining rows
    for i in range(x.n):
        if sum(full[i][j] * sol[j] for j in range(d)) % mod != target[i] % mod:
            raise ValidationError("element does not lie in the claimed unramified subring")
    return ZqElement(x.p, d, x.M, sol)
