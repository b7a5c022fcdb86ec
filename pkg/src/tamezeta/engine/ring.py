"""The working ring W[x, 1/R~] mod p^N for a cover, and its Frobenius data.

R~ is the fixed monic lift of the radical of Pi (product of the Teichmueller
lifts of the distinct irreducible factors).  An element is num(x)/R~^s stored
as (num, s) with common R~ factors stripped, so every function the engine
meets -- lifts of Pi, their inverses, dlog(Pi~), the 1-unit Frobenius series
-- is a finite, exact object mod p^N.

Lift modes for Pi itself:
  * "teichmuller" (default): tau(lead) * prod tau(f_i)^{e_i} over the monic
    irreducible factors; dlog(Pi~) then has pole order exactly 1.
  * "coeffwise": coefficient-wise Teichmueller lift of Pi; for non-squarefree
    Pi its dlog carries p-divisible tails at higher pole orders, which the
    reduction tolerates (at a cost).
  * "naive": digit-wise integer lift.

Division by the monic R~ (and its 2^k-th powers) uses reversal + cached
power-series inverses, so cascading a deep element into its pole levels is a
handful of numpy convolutions instead of a quadratic long division.
"""

from __future__ import annotations

import numpy as np

from ..arith import PadicContext, binom_int, teichmuller
from ..arith import polyfq
from .zqnum import ZqNum


class RElt:
    """num(x) / R~^s, num an int64 (L, a) digit array."""

    __slots__ = ("ring", "num", "s")

    def __init__(self, ring, num, s):
        self.ring = ring
        self.num = num
        self.s = s

    def strip(self):
        z = self.ring.z
        num, s = self.num, self.s
        while s > 0:
            q, r = self.ring.divmod_rad(num)
            if z.deg(r) >= 0:
                break
            num, s = q, s - 1
        if z.deg(num) < 0:
            s = 0
        return RElt(self.ring, num, s)

    def is_zero(self):
        return self.ring.z.deg(self.num) < 0

    def __add__(self, other):
        ring, z = self.ring, self.ring.z
        s = max(self.s, other.s)
        n1 = z.mul(self.num, ring.rad_pow(s - self.s)) if s > self.s else self.num
        n2 = z.mul(other.num, ring.rad_pow(s - other.s)) if s > other.s else other.num
        return RElt(ring, z.add(n1, n2), s).strip()

    def __neg__(self):
        return RElt(self.ring, self.ring.z.neg(self.num), self.s)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        z = self.ring.z
        if isinstance(other, (int, np.integer)):
            return RElt(self.ring, z.scal(self.num, other), self.s)
        if isinstance(other, np.ndarray) and other.ndim == 1:
            return RElt(self.ring, z.scal(self.num, other), self.s)
        return RElt(self.ring, z.mul(self.num, other.num), self.s + other.s).strip()

    __rmul__ = __mul__

    def pow(self, e: int):
        r = self.ring.one()
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def deriv(self):
        """d/dx: (num' R~ - s num R~') / R~^(s+1)."""
        ring, z = self.ring, self.ring.z
        if self.s == 0:
            return RElt(ring, z.deriv(self.num), 0)
        top = z.sub(z.mul(z.deriv(self.num), ring.rad),
                    z.scal(z.mul(self.num, ring.rad_prime), self.s))
        return RElt(ring, top, self.s + 1).strip()

    def phi(self):
        """Phi*: sigma on digits, x -> x^p, 1/R~ -> inv(Phi* R~)."""
        ring = self.ring
        out = RElt(ring, ring.z.phi_poly(self.num), 0)
        if self.s:
            out = out * ring.inv_phi_rad_pow(self.s)
        return out

    def levels(self):
        """Canonical cascade: (poly_part or None, {level >= 1: poly of deg < m_r})."""
        ring, z = self.ring, self.ring.z
        digits = ring.rad_digits(self.num)
        out = {}
        poly = None
        high = []
        for i, d in enumerate(digits):
            if z.deg(d) < 0:
                continue
            lvl = self.s - i
            if lvl >= 1:
                out[lvl] = d
            else:
                high.append((i - self.s, d))
        if high:
            poly = z.zero_poly()
            for e, d in high:
                poly = z.add(poly, z.mul(d, ring.rad_pow(e)))
        return poly, out

    def pole_order(self):
        return self.s


class CoverRing:
    def __init__(self, ctx: PadicContext, pi_field_poly, lift: str):
        self.ctx = ctx
        self.z = ZqNum(ctx)
        self.p = ctx.p
        field = ctx.field
        lead, facs = polyfq.factor(pi_field_poly)
        self.factor_data = sorted(
            ((polyfq.poly_key(list(k)), len(k) - 1, mult) for k, mult in facs.items()))
        self.e_max = max(m for _, _, m in self.factor_data)
        self.m_rad = sum(deg for _, deg, _ in self.factor_data)
        self.deg_pi = polyfq.degree(pi_field_poly)
        # the radical lift: product of Teichmueller lifts of the factors (monic)
        rad = self.z.poly_from_scalars([1])
        factor_lifts = []
        for key, _, _ in self.factor_data:
            fpoly = [field.from_index(i) for i in key]
            flift = self.z.lift_field_poly(fpoly, teich=True)
            factor_lifts.append(flift)
            rad = self.z.mul(rad, flift)
        self.rad = rad
        self.rad_prime = self.z.deriv(rad)
        self._rad_pows = {0: self.z.poly_from_scalars([1]), 1: rad}
        # the lift of Pi itself
        if lift == "teichmuller":
            pl = self.z.poly_from_scalars([teichmuller(lead, ctx).digits])
            for flift, (_, _, mult) in zip(factor_lifts, self.factor_data):
                for _ in range(mult):
                    pl = self.z.mul(pl, flift)
            self.pi_lift = pl
        else:
            self.pi_lift = self.z.lift_field_poly(pi_field_poly,
                                                  teich=(lift == "coeffwise"))
        self._pi_inv = None
        self._dlog = None
        self._phi_rad_inv = None
        self._phi_rad_inv_pows = None
        self._pi_field = pi_field_poly
        self._rad_pow2 = {0: rad}
        self._revinv = {}

    # -- constructors ---------------------------------------------------------

    def one(self):
        return RElt(self, self.z.poly_from_scalars([1]), 0)

    def zero(self):
        return RElt(self, self.z.zero_poly(), 0)

    def from_poly(self, num):
        return RElt(self, num, 0)

    def monomial(self, i, s):
        """x^i / R~^s."""
        return RElt(self, self.z.shift(self.z.poly_from_scalars([1]), i), s)

    def rad_pow(self, e):
        if e not in self._rad_pows:
            self._rad_pows[e] = self.z.mul(self.rad_pow(e - 1), self.rad)
        return self._rad_pows[e]

    # -- fast division by powers of the monic radical ---------------------------

    def _rad_power2(self, k):
        if k not in self._rad_pow2:
            prev = self._rad_power2(k - 1)
            self._rad_pow2[k] = self.z.mul(prev, prev)
        return self._rad_pow2[k]

    def _revinv_series(self, k, L):
        """Inverse of reversed(rad^(2^k)) mod x^L (constant term 1)."""
        cur = self._revinv.get(k)
        if cur is not None and cur.shape[0] >= L:
            return cur[:L]
        z = self.z
        D = self._rad_power2(k)
        Drev = D[::-1].copy()
        v = z.poly_from_scalars([1])
        length = 1
        while length < L:
            length = min(2 * length, L)
            prod = z.mul(Drev[:min(length, Drev.shape[0])], z.mul(v, v))
            two_v = z.scal(v, 2)
            v = z.sub(two_v, prod)[:length]
            if v.shape[0] < length:
                v = np.vstack([v, np.zeros((length - v.shape[0], z.a), dtype=np.int64)])
        self._revinv[k] = v
        return v[:L]

    def _fast_divmod_pow2(self, A, k):
        """(Q, R) with A = Q * rad^(2^k) + R, deg R < m_rad * 2^k."""
        z = self.z
        D = self._rad_power2(k)
        A = z.trim(A)
        dA, dD = A.shape[0] - 1, D.shape[0] - 1
        if dA < dD or z.deg(A) < 0:
            return z.zero_poly(), A
        Lq = dA - dD + 1
        inv = self._revinv_series(k, Lq)
        Qrev = z.mul(A[::-1].copy()[:Lq] if A.shape[0] >= Lq else
                     np.vstack([A[::-1], np.zeros((Lq - A.shape[0], z.a), np.int64)]),
                     inv)[:Lq]
        if Qrev.shape[0] < Lq:
            Qrev = np.vstack([Qrev, np.zeros((Lq - Qrev.shape[0], z.a), np.int64)])
        Q = z.trim(Qrev[::-1].copy())
        R = z.sub(A, z.mul(Q, D))
        assert R.shape[0] <= dD, "fast division residual too large"
        return Q, R

    def divmod_rad(self, A):
        return self._fast_divmod_pow2(A, 0)

    def rad_digits(self, num):
        """Base-R~ digits [d_0, d_1, ...] of num, each of degree < m_rad."""
        z = self.z
        num = z.trim(num)

        def rec(A):
            if A.shape[0] - 1 < self.m_rad:
                return [A]
            k = 0
            while self.m_rad * (2 << k) <= A.shape[0] - 1:
                k += 1
            Q, R = self._fast_divmod_pow2(A, k)
            low = rec(R)
            low += [z.zero_poly()] * ((1 << k) - len(low))
            return low + rec(Q)

        return rec(num)

    # -- inverses by Newton iteration ------------------------------------------

    def _newton_inverse(self, f: RElt, z0: RElt) -> RElt:
        two = self.one() * 2
        zc = z0
        for _ in range(self.ctx.N.bit_length() + 1):
            zc = zc * (two - f * zc)
        check = f * zc - self.one()
        assert check.is_zero(), "Newton inversion failed"
        return zc

    def pi_inv(self) -> RElt:
        """1/Pi~ in the ring (exists: Pi is a unit in F_q[x, 1/rad])."""
        if self._pi_inv is None:
            field = self.ctx.field
            # initial inverse mod p: rad^e_max / Pi is a polynomial over F_q
            num0 = polyfq.constant(field, 1)
            lead = self._pi_field[-1]
            for key, _, mult in self.factor_data:
                fpoly = [field.from_index(i) for i in key]
                num0 = polyfq.mul(num0, polyfq.pow_poly(fpoly, self.e_max - mult))
            num0 = polyfq.scale(num0, lead.inverse())
            z0 = RElt(self, self.z.lift_field_poly(num0, teich=False), self.e_max)
            self._pi_inv = self._newton_inverse(RElt(self, self.pi_lift, 0), z0)
        return self._pi_inv

    def inv_phi_rad_pow(self, s):
        """(1 / Phi*(R~))^s, cached."""
        if self._phi_rad_inv is None:
            phi_rad = RElt(self, self.z.phi_poly(self.rad), 0)
            z0 = RElt(self, self.z.poly_from_scalars([1]), self.p)  # 1/R^p mod p
            self._phi_rad_inv = self._newton_inverse(phi_rad, z0)
            self._phi_rad_inv_pows = {0: self.one(), 1: self._phi_rad_inv}
        pows = self._phi_rad_inv_pows
        if s not in pows:
            pows[s] = self.inv_phi_rad_pow(s - 1) * self._phi_rad_inv
        return pows[s]

    def dlog_pi(self) -> RElt:
        """dlog(Pi~) = Pi~' / Pi~ as a ring element (a proper fraction)."""
        if self._dlog is None:
            self._dlog = RElt(self, self.z.deriv(self.pi_lift), 0) * self.pi_inv()
        return self._dlog

    def frobenius_unit(self) -> RElt:
        """The 1-unit u = Pi~^p / Phi*(Pi~)."""
        pi = RElt(self, self.pi_lift, 0)
        inv_phi_pi = self.pi_inv().phi()
        u = pi.pow(self.p) * inv_phi_pi
        diff = u - self.one()
        assert diff.is_zero() or all(
            int(d) % self.p == 0 for d in diff.num.reshape(-1)), "u is not a 1-unit"
        return u

    def one_unit_powers(self, u: RElt, exponents):
        """u^(j/t) for each (j, t) in exponents, sharing the (u-1)^nu powers."""
        w = u - self.one()
        acc = {key: self.one() for key in exponents}
        power = self.one()
        for nu in range(1, self.ctx.N):
            power = power * w
            if power.is_zero():
                break
            for (j, t) in exponents:
                c = binom_int(j, t, nu, self.p, self.ctx.N)
                acc[(j, t)] = acc[(j, t)] + power * c
        return acc
