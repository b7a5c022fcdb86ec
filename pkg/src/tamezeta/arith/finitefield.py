"""Finite fields F_{p^a}, extension towers F_{q^n} and multiplicative characters.

Everything here is exact and deterministic: moduli are the lexicographically
smallest monic irreducibles (coefficients compared low-degree-first), generators
are the smallest elements of full multiplicative order, so two runs of the same
build always produce identical objects.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


MACHINE_BOUND = 2 ** 20  # largest supported field cardinality q = p^a


class ArithError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# dense polynomials over F_p, as int tuples in ascending degree order
# ---------------------------------------------------------------------------

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b, p):
    n = max(len(a), len(b))
    return _trim(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p
                 for i in range(n))


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv_lb = pow(lb, -1, p)
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and any(a):
        da = len(a) - 1
        if a[-1] == 0:
            a.pop()
            continue
        coef = (a[-1] * inv_lb) % p
        q[da - db] = coef
        for i in range(db + 1):
            a[da - db + i] = (a[da - db + i] - coef * b[i]) % p
        a.pop()
    return _trim(q), _trim(a)


def _pmulmod(a, b, mod, p):
    return _pdivmod(_pmul(a, b, p), mod, p)[1]


def _ppowmod(a, e, mod, p):
    r = (1,)
    a = _pdivmod(a, mod, p)[1]
    while e:
        if e & 1:
            r = _pmulmod(r, a, mod, p)
        a = _pmulmod(a, a, mod, p)
        e >>= 1
    return r


def _monic_polys(p, d):
    """All monic degree-d polynomials over F_p, low-degree-first lex order."""
    for low in itertools.product(range(p), repeat=d):
        yield low + (1,)


def _is_irreducible(f, p):
    # trial factorization by every monic polynomial of degree <= deg(f)/2
    d = len(f) - 1
    if d <= 0:
        return False
    for k in range(1, d // 2 + 1):
        for g in _monic_polys(p, k):
            if not _pdivmod(f, g, p)[1]:
                return False
    return True


@lru_cache(maxsize=None)
def _smallest_irreducible(p, a):
    if a == 1:
        return (0, 1)  # x - 0
    for f in _monic_polys(p, a):
        if _is_irreducible(f, p):
            return f
    raise ArithError(f"no irreducible of degree {a} over F_{p}")  # unreachable


# ---------------------------------------------------------------------------
# FieldSpec / FieldElement
# ---------------------------------------------------------------------------

class FieldSpec:
    """The finite field F_{p^a} = F_p[x]/(modulus)."""

    def __init__(self, p, a, modulus=None):
        if not is_prime(p):
            raise ArithError(f"p = {p} is not prime")
        if a < 1:
            raise ArithError(f"extension degree a = {a} must be >= 1")
        if p ** a > MACHINE_BOUND:
            raise ArithError(f"q = {p}^{a} exceeds the machine bound {MACHINE_BOUND}")
        if modulus is None:
            modulus = _smallest_irreducible(p, a)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != a + 1 or modulus[-1] != 1:
            raise ArithError("modulus must be monic of degree a")
        if a > 1 and not _is_irreducible(modulus, p):
            raise ArithError("modulus is reducible")
        self.p = p
        self.a = a
        self.q = p ** a
        self.modulus = modulus
        self._dlog = None
        self._mult_gen = None

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.a, self.modulus) == (other.p, other.a, other.modulus))

    def __hash__(self):
        return hash((self.p, self.a, self.modulus))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, a={self.a})"

    # -- constructors ------------------------------------------------------

    def element(self, coeffs) -> "FieldElement":
        if isinstance(coeffs, FieldElement):
            if coeffs.parent != self:
                raise ArithError("element from a different field")
            return coeffs
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        c = [x % self.p for x in coeffs]
        if len(c) > self.a:
            c = list(_pdivmod(tuple(c), self.modulus, self.p)[1])
        c += [0] * (self.a - len(c))
        return FieldElement(self, tuple(c))

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def gen(self):
        """The class of x (equals 0 for a = 1 with the trivial modulus x)."""
        return self.element((0, 1))

    def from_index(self, i: int) -> "FieldElement":
        coeffs = []
        for _ in range(self.a):
            i, r = divmod(i, self.p)
            coeffs.append(r)
        return FieldElement(self, tuple(coeffs))

    def elements(self):
        for i in range(self.q):
            yield self.from_index(i)

    # -- multiplicative structure -------------------------------------------

    def multiplicative_generator(self) -> "FieldElement":
        """Smallest-index element of order q - 1 (deterministic)."""
        if self._mult_gen is None:
            n = self.q - 1
            prime_divs = []
            m = n
            d = 2
            while d * d <= m:
                if m % d == 0:
                    prime_divs.append(d)
                    while m % d == 0:
                        m //= d
                d += 1
            if m > 1:
                prime_divs.append(m)
            for i in range(1, self.q):
                g = self.from_index(i)
                if g.is_zero():
                    continue
                if all((g ** (n // ell)) != self.one() for ell in prime_divs) or n == 1:
                    self._mult_gen = g
                    break
        return self._mult_gen

    def dlog(self, u: "FieldElement") -> int:
        """Discrete log base multiplicative_generator(); table-based."""
        if self._dlog is None:
            g = self.multiplicative_generator()
            table = {}
            acc = self.one()
            for k in range(self.q - 1):
                table[acc.index()] = k
                acc = acc * g
            self._dlog = table
        if u.is_zero():
            raise ArithError("dlog of zero")
        return self._dlog[u.index()]


class FieldElement:
    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: FieldSpec, coeffs: tuple):
        self.parent = parent
        self.coeffs = coeffs

    def index(self) -> int:
        i = 0
        for c in reversed(self.coeffs):
            i = i * self.parent.p + c
        return i

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.parent.element(other)
        return isinstance(other, FieldElement) and self.parent == other.parent \
            and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.parent.p, self.parent.a, self.coeffs))

    def __repr__(self):
        return f"F({self.parent.p}^{self.parent.a}):{list(self.coeffs)}"

    def _coerce(self, other):
        if isinstance(other, int):
            return self.parent.element(other)
        if other.parent != self.parent:
            raise ArithError("mixing elements of different fields")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        p = self.parent.p
        return FieldElement(self.parent,
                            tuple((x + y) % p for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.parent.p
        return FieldElement(self.parent, tuple((-x) % p for x in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.parent
        prod = _pmulmod(_trim(self.coeffs), _trim(other.coeffs), F.modulus, F.p)
        return F.element(prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        F = self.parent
        if e < 0:
            return self.inverse() ** (-e)
        r = _ppowmod(_trim(self.coeffs), e, F.modulus, F.p)
        return F.element(r)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        return self ** (self.parent.q - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def frobenius(self):
        return self ** self.parent.p


def build_field(p: int, a: int) -> FieldSpec:
    """F_{p^a} with the lexicographically smallest monic irreducible modulus."""
    return FieldSpec(p, a)


# ---------------------------------------------------------------------------
# relative extensions F_{q^n} over a FieldSpec (tower arithmetic)
# ---------------------------------------------------------------------------

class ExtField:
    """F_{q^n} presented as F_q[Y]/(modulus), modulus monic irreducible over F_q."""

    def __init__(self, base: FieldSpec, n: int, modulus=None):
        if n < 1:
            raise ArithError("relative degree must be >= 1")
        self.base = base
        self.n = n
        self.cardinality = base.q ** n
        if modulus is None:
            modulus = self._smallest_modulus(base, n)
        self.modulus = tuple(modulus)

    @staticmethod
    def _smallest_modulus(base, n):
        if n == 1:
            return (base.zero(), base.one())
        one = base.one()
        for low_idx in itertools.product(range(base.q), repeat=n):
            cand = tuple(base.from_index(i) for i in low_idx) + (one,)
            if ExtField._irreducible_over_base(cand, base):
                return cand
        raise ArithError("no irreducible found")  # unreachable

    @staticmethod
    def _irreducible_over_base(f, base):
        d = len(f) - 1
        for k in range(1, d // 2 + 1):
            for low_idx in itertools.product(range(base.q), repeat=k):
                g = tuple(base.from_index(i) for i in low_idx) + (base.one(),)
                if not ExtField._divmod_base(f, g, base)[1]:
                    return False
        return True

    @staticmethod
    def _divmod_base(a, b, base):
        a = list(a)
        db = len(b) - 1
        inv_lb = b[-1].inverse()
        q = [base.zero()] * max(0, len(a) - db)
        while len(a) - 1 >= db and any(x for x in a):
            if a[-1].is_zero():
                a.pop()
                continue
            da = len(a) - 1
            coef = a[-1] * inv_lb
            q[da - db] = coef
            for i in range(db + 1):
                a[da - db + i] = a[da - db + i] - coef * b[i]
            a.pop()
        while a and a[-1].is_zero():
            a.pop()
        return q, a

    def __eq__(self, other):
        return (isinstance(other, ExtField) and self.base == other.base
                and self.n == other.n and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.base, self.n))

    def __repr__(self):
        return f"ExtField({self.base!r}, n={self.n})"

    def element(self, coeffs) -> "ExtElement":
        c = [self.base.element(x) if not isinstance(x, FieldElement) else x
             for x in coeffs]
        if len(c) > self.n:
            c = self._divmod_base(c, self.modulus, self.base)[1]
            c = list(c)
        c += [self.base.zero()] * (self.n - len(c))
        return ExtElement(self, tuple(c[:self.n]))

    def zero(self):
        return self.element([0])

    def one(self):
        return self.element([1])

    def embed(self, c: FieldElement) -> "ExtElement":
        return self.element([c])

    def from_index(self, i: int) -> "ExtElement":
        coeffs = []
        for _ in range(self.n):
            i, r = divmod(i, self.base.q)
            coeffs.append(self.base.from_index(r))
        return ExtElement(self, tuple(coeffs))

    def elements(self):
        for i in range(self.cardinality):
            yield self.from_index(i)

    def norm(self, w: "ExtElement") -> FieldElement:
        """Norm to the base field: product of the n conjugates w^(q^i)."""
        acc = w
        prod = w
        for _ in range(self.n - 1):
            acc = acc ** self.base.q
            prod = prod * acc
        for c in prod.coeffs[1:]:
            if not c.is_zero():
                raise ArithError("norm did not land in the base field")
        return prod.coeffs[0]


class ExtElement:
    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: ExtField, coeffs):
        self.parent = parent
        self.coeffs = coeffs

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, ExtElement) and self.parent == other.parent
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.parent.n, tuple(c.coeffs for c in self.coeffs)))

    def index(self):
        i = 0
        for c in reversed(self.coeffs):
            i = i * self.parent.base.q + c.index()
        return i

    def __add__(self, other):
        return ExtElement(self.parent,
                          tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return ExtElement(self.parent, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        E = self.parent
        a, b = list(self.coeffs), list(other.coeffs)
        out = [E.base.zero()] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        rem = ExtField._divmod_base(out, E.modulus, E.base)[1]
        return E.element(list(rem))

    def __pow__(self, e: int):
        E = self.parent
        if e < 0:
            return self.inverse() ** (-e)
        r = E.one()
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.parent.cardinality - 2)

    def __repr__(self):
        return f"Ext:{[c.index() for c in self.coeffs]}"


# ---------------------------------------------------------------------------
# multiplicative characters of exact order t, via the Teichmueller character
# ---------------------------------------------------------------------------

class Character:
    """chi of exact order t on F_q^x: chi(u) = omega(u)^((q-1)/t).

    Values are abstract t-th roots of unity, represented by their integer index
    k in [0, t): chi(u) = zeta_t^k with zeta_t = omega(g)^((q-1)/t) for the
    field's canonical generator g.  Equality tests and sums use the index;
    the p-adic value is available through `padic_value`.
    """

    def __init__(self, field: FieldSpec, t: int):
        if t < 1 or (field.q - 1) % t != 0:
            raise ArithError(f"t = {t} does not divide q - 1 = {field.q - 1}")
        self.field = field
        self.t = t

    def index(self, u: FieldElement) -> int:
        """k such that chi(u) = zeta_t^k."""
        return self.field.dlog(u) % self.t

    def index_ext(self, w: ExtElement) -> int:
        """Index of chi_n(w) = chi(Norm(w)) on the extension level of w."""
        return self.index(w.parent.norm(w))

    def padic_value(self, u: FieldElement, ctx):
        from .padic import teichmuller
        g = self.field.multiplicative_generator()
        k = self.index(u)
        return teichmuller(g, ctx) ** (((self.field.q - 1) // self.t) * k)

    def zeta_power(self, k: int, ctx):
        """The p-adic value zeta_t^k in Z_q mod p^N."""
        from .padic import teichmuller
        g = self.field.multiplicative_generator()
        return teichmuller(g, ctx) ** (((self.field.q - 1) // self.t) * (k % self.t))


def char_of_order(field: FieldSpec, t: int) -> Character:
    return Character(field, t)
