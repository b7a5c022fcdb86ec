"""Truncated unramified p-adic integers Z_q mod p^N.

Z_q = W(F_q) is represented on the theta-power basis of the Teichmueller-lifted
field modulus: an element is a length-a vector of integers mod p^N.  The
Frobenius lift sigma sends theta to the Hensel lift of theta^p and is applied
as a precomputed a x a matrix.

Precision discipline: every operation here is exact mod p^N except where a
division occurs; binom_padic pre-boosts the working precision by v_p(nu!) so
its result is exact at the requested N.
"""

from __future__ import annotations

from .finitefield import ArithError, FieldElement, FieldSpec


def _val_int(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _teich_int(c: int, p: int, pN: int) -> int:
    """Teichmueller lift of c in F_p to Z/p^N: the fixed point of x -> x^p."""
    x = c % pN
    while True:
        y = pow(x, p, pN)
        if y == x:
            return x
        x = y


class PadicContext:
    """Z_q mod p^N for q = p^a, with the lifted Frobenius sigma."""

    def __init__(self, field: FieldSpec, precision: int):
        if precision < 1:
            raise ArithError("precision must be >= 1")
        self.field = field
        self.p = field.p
        self.a = field.a
        self.N = precision
        self.pN = field.p ** precision
        # modulus lifted coefficient-wise by Teichmueller
        self.modulus = tuple(_teich_int(c, self.p, self.pN) for c in field.modulus)
        self._red = self._reduction_rows()
        self._sigma_pows = self._sigma_matrix()

    def _reduction_rows(self):
        # theta^(a+k) as vectors on 1..theta^(a-1), for k = 0..a-2
        a, pN = self.a, self.pN
        rows = []
        cur = [(-self.modulus[i]) % pN for i in range(a)]  # theta^a
        rows.append(tuple(cur))
        for _ in range(a - 2):
            nxt = [0] * a
            carry = cur[a - 1]
            for i in range(a - 1, 0, -1):
                nxt[i] = cur[i - 1]
            # theta * cur  ==  shift + carry * theta^a
            for i in range(a):
                nxt[i] = (nxt[i] + carry * rows[0][i]) % pN
            rows.append(tuple(nxt))
            cur = nxt
        return rows

    def _sigma_matrix(self):
        a = self.a
        if a == 1:
            return [(1,)]
        theta = self.element([0, 1])
        # Hensel-lift the root theta^p of the modulus
        x = theta ** self.p
        for _ in range(self.N.bit_length() + 2):
            fx = self._eval_modulus(x)
            dfx = self._eval_modulus_deriv(x)
            x = x - fx * dfx.inverse()
        assert self._eval_modulus(x).is_zero(), "sigma lift failed to converge"
        pows = []
        acc = self.one()
        for _ in range(a):
            pows.append(acc.digits)
            acc = acc * x
        return pows

    def _eval_modulus(self, x):
        r = self.zero()
        for c in reversed(self.modulus):
            r = r * x + self.element([c])
        return r

    def _eval_modulus_deriv(self, x):
        r = self.zero()
        for k in range(self.a, 0, -1):
            r = r * x + self.element([(k * self.modulus[k]) % self.pN])
        return r

    def __eq__(self, other):
        return (isinstance(other, PadicContext) and self.field == other.field
                and self.N == other.N)

    def __hash__(self):
        return hash((self.field, self.N))

    def __repr__(self):
        return f"PadicContext(q={self.field.q}, N={self.N})"

    # -- constructors -------------------------------------------------------

    def element(self, digits) -> "PadicElement":
        if isinstance(digits, PadicElement):
            if digits.ctx != self:
                raise ArithError("element from a different context")
            return digits
        if isinstance(digits, int):
            digits = (digits,)
        d = [x % self.pN for x in digits]
        if len(d) > self.a:
            raise ArithError("too many digits")
        d += [0] * (self.a - len(d))
        return PadicElement(self, tuple(d))

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def lift_naive(self, u: FieldElement) -> "PadicElement":
        """Digit-wise integer lift of a field element (no Teichmueller)."""
        if u.parent != self.field:
            raise ArithError("field element from another field")
        return self.element(u.coeffs)

    def sigma(self, x: "PadicElement") -> "PadicElement":
        out = [0] * self.a
        for i, d in enumerate(x.digits):
            if d:
                row = self._sigma_pows[i]
                for k in range(self.a):
                    out[k] = (out[k] + d * row[k]) % self.pN
        return PadicElement(self, tuple(out))

    def reduce_modp(self, x: "PadicElement") -> FieldElement:
        return self.field.element(tuple(d % self.p for d in x.digits))


class PadicElement:
    __slots__ = ("ctx", "digits")

    def __init__(self, ctx: PadicContext, digits: tuple):
        self.ctx = ctx
        self.digits = digits

    def is_zero(self):
        return all(d == 0 for d in self.digits)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.element(other)
        return (isinstance(other, PadicElement) and self.ctx == other.ctx
                and self.digits == other.digits)

    def __hash__(self):
        return hash((self.ctx.N, self.digits))

    def __repr__(self):
        return f"Zq[{self.ctx.p}^{self.ctx.N}]{list(self.digits)}"

    def _coerce(self, other):
        if isinstance(other, int):
            return self.ctx.element(other)
        if other.ctx != self.ctx:
            raise ArithError("mixing p-adic contexts")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        pN = self.ctx.pN
        return PadicElement(self.ctx,
                            tuple((x + y) % pN for x, y in zip(self.digits, other.digits)))

    __radd__ = __add__

    def __neg__(self):
        pN = self.ctx.pN
        return PadicElement(self.ctx, tuple((-x) % pN for x in self.digits))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        ctx = self.ctx
        a, pN = ctx.a, ctx.pN
        conv = [0] * (2 * a - 1)
        for i, x in enumerate(self.digits):
            if x:
                for j, y in enumerate(other.digits):
                    conv[i + j] = (conv[i + j] + x * y) % pN
        out = conv[:a]
        for k in range(a - 1):
            c = conv[a + k]
            if c:
                row = ctx._red[k]
                for i in range(a):
                    out[i] = (out[i] + c * row[i]) % pN
        return PadicElement(ctx, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.ctx.one()
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def valuation(self) -> int:
        """min over digits of v_p; N for the zero element."""
        return min(_val_int(d, self.ctx.p, self.ctx.N) for d in self.digits)

    def is_unit(self):
        return self.valuation() == 0

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError("inverse of a non-unit in Z_q")
        ctx = self.ctx
        u0 = ctx.reduce_modp(self).inverse()
        z = ctx.element(u0.coeffs)
        # Newton: z <- z(2 - xz), doubles correct digits each round
        for _ in range(ctx.N.bit_length() + 1):
            z = z * (ctx.element(2) - self * z)
        return z

    def reduce_modp(self) -> FieldElement:
        return self.ctx.reduce_modp(self)


# ---------------------------------------------------------------------------
# Teichmueller lifts, p-adic binomials, 1-unit exponentiation
# ---------------------------------------------------------------------------

def teichmuller(u: FieldElement, ctx: PadicContext) -> PadicElement:
    """The unique x = u mod p with x^q = x, by iterating x -> x^q."""
    if u.parent != ctx.field:
        raise ArithError("field element from another field")
    x = ctx.lift_naive(u)
    for _ in range(ctx.N + 1):
        y = x ** ctx.field.q
        if y == x:
            break
        x = y
    assert (x ** ctx.field.q) == x
    return x


def binom_int(j: int, t: int, nu: int, p: int, N: int) -> int:
    """C(j/t, nu) in Z_p mod p^N, as an integer.

    Computed at precision N + v_p(nu!) before the exact division by nu!.
    """
    if t % p == 0:
        raise ArithError(f"p = {p} divides t = {t}")
    if nu == 0:
        return 1 % p ** N
    vf = 0
    pk = p
    while pk <= nu:
        vf += nu // pk
        pk *= p
    big = p ** (N + vf)
    alpha = (j * pow(t, -1, big)) % big
    num = 1
    for i in range(nu):
        num = (num * (alpha - i)) % big
    fact = 1
    for i in range(2, nu + 1):
        fact *= i
    unit = fact // p ** vf
    res = (num // p ** vf if num % p ** vf == 0 else None)
    if res is None:
        # v_p(num) >= v_p(nu!) always holds for j/t in Z_p; guard regardless
        raise ArithError("binomial numerator valuation shortfall")
    return (res * pow(unit, -1, p ** N)) % p ** N


def binom_padic(j: int, t: int, nu: int, ctx: PadicContext) -> PadicElement:
    """The generalized binomial coefficient C(j/t, nu) as an element of Z_q."""
    return ctx.element(binom_int(j, t, nu, ctx.p, ctx.N))


def one_unit_pow(u: PadicElement, j: int, t: int, ctx: PadicContext = None) -> PadicElement:
    """u^(j/t) for a 1-unit u, by the binomial series truncated at N terms.

    Exact at precision N because v_p((u-1)^nu) >= nu.
    """
    ctx = ctx or u.ctx
    if u.ctx != ctx:
        raise ArithError("context mismatch")
    w = u - ctx.one()
    if w.is_zero():
        pass
    elif w.valuation() < 1:
        raise ArithError("not a 1-unit")
    acc = ctx.one()
    power = ctx.one()
    for nu in range(1, ctx.N):
        power = power * w
        if power.is_zero():
            break
        c = binom_int(j, t, nu, ctx.p, ctx.N)
        acc = acc + ctx.element(c) * power
    return acc
