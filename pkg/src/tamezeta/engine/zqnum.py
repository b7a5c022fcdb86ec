"""numpy kernels for polynomials over Z_q mod p^N.

A polynomial is an int64 array of shape (L, a): row l holds the theta-basis
digits of the coefficient of x^l.  The working modulus p^N must stay below
2^31 so products of residues fit in int64; convolutions additionally split
each residue into 16-bit limbs so the accumulated sums stay exact.

Scalars are length-a int64 arrays (or plain ints for Z_p values).
"""

from __future__ import annotations

import numpy as np

from ..arith import PadicContext


class PrecisionError(ArithmeticError):
    pass


class _NeedScale(Exception):
    """Internal: a division needs the working form scaled by p before retry."""


def _val_int(x, p, cap):
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class ZqNum:
    def __init__(self, ctx: PadicContext):
        self.ctx = ctx
        self.p = ctx.p
        self.a = ctx.a
        self.N = ctx.N
        self.mod = ctx.pN
        if self.mod >= 2 ** 31:
            raise PrecisionError(
                f"working modulus {self.p}^{self.N} exceeds the int64-exact bound 2^31")
        a = self.a
        self.red = (np.array(ctx._red, dtype=np.int64).reshape(max(a - 1, 0), a)
                    if a > 1 else np.zeros((0, 1), dtype=np.int64))
        self.sig = np.array(ctx._sigma_pows, dtype=np.int64).reshape(a, a)
        self._lo16 = (1 << 16) - 1

    # -- constructors --------------------------------------------------------

    def zero_poly(self, length=1):
        return np.zeros((length, self.a), dtype=np.int64)

    def scalar(self, digits):
        if isinstance(digits, (int, np.integer)):
            digits = (int(digits),)
        out = np.zeros(self.a, dtype=np.int64)
        for i, d in enumerate(digits):
            out[i] = int(d) % self.mod
        return out

    def one_scalar(self):
        return self.scalar(1)

    def poly_from_scalars(self, scalars):
        out = np.zeros((max(len(scalars), 1), self.a), dtype=np.int64)
        for i, s in enumerate(scalars):
            out[i] = self.scalar(s)
        return out

    def lift_field_poly(self, coeffs, teich: bool):
        """Lift F_q[x] coefficients digit-wise (naive) or by Teichmueller."""
        from ..arith import teichmuller
        rows = []
        for c in coeffs:
            if teich:
                rows.append(teichmuller(c, self.ctx).digits)
            else:
                rows.append(self.ctx.lift_naive(c).digits)
        return self.poly_from_scalars(rows)

    # -- basic poly ops -------------------------------------------------------

    @staticmethod
    def trim(A):
        L = A.shape[0]
        while L > 1 and not A[L - 1].any():
            L -= 1
        return A[:L]

    def deg(self, A):
        A = self.trim(A)
        return -1 if (A.shape[0] == 1 and not A[0].any()) else A.shape[0] - 1

    def add(self, A, B):
        L = max(A.shape[0], B.shape[0])
        out = np.zeros((L, self.a), dtype=np.int64)
        out[:A.shape[0]] += A
        out[:B.shape[0]] += B
        return self.trim(out % self.mod)

    def neg(self, A):
        return (-A) % self.mod

    def sub(self, A, B):
        return self.add(A, self.neg(B))

    def _conv(self, x, y):
        """Exact convolution of residue vectors via 16-bit limb splitting."""
        xl, xh = x & self._lo16, x >> 16
        yl, yh = y & self._lo16, y >> 16
        c0 = np.convolve(xl, yl)
        c1 = np.convolve(xl, yh) + np.convolve(xh, yl)
        c2 = np.convolve(xh, yh)
        m = self.mod
        return (c0 % m + (c1 % m) * ((1 << 16) % m) % m + (c2 % m) * ((1 << 32) % m) % m) % m

    def mul(self, A, B):
        A, B = self.trim(A), self.trim(B)
        a, m = self.a, self.mod
        L = A.shape[0] + B.shape[0] - 1
        wide = np.zeros((L, 2 * a - 1), dtype=np.int64)
        for i in range(a):
            if not A[:, i].any():
                continue
            for j in range(a):
                if not B[:, j].any():
                    continue
                wide[:, i + j] = (wide[:, i + j] + self._conv(A[:, i], B[:, j])) % m
        out = wide[:, :a].copy()
        for k in range(a - 1):
            col = wide[:, a + k]
            if col.any():
                out = (out + col[:, None] % m * self.red[k][None, :] % m) % m
        return self.trim(out)

    def scal(self, A, s):
        """Multiply a poly by a Z_q scalar (length-a vector) or a plain int."""
        if isinstance(s, (int, np.integer)):
            return self.trim(A * (int(s) % self.mod) % self.mod)
        return self.mul(A, s.reshape(1, self.a))

    def deriv(self, A):
        A = self.trim(A)
        if A.shape[0] == 1:
            return self.zero_poly()
        ks = np.arange(1, A.shape[0], dtype=np.int64)[:, None]
        return self.trim(A[1:] * ks % self.mod)

    def sigma_poly(self, A):
        out = np.zeros_like(A)
        for i in range(self.a):
            col = A[:, i]
            if col.any():
                out = (out + col[:, None] % self.mod * self.sig[i][None, :] % self.mod) % self.mod
        return out

    def phi_poly(self, A):
        """Frobenius on coefficients and x -> x^p."""
        A = self.sigma_poly(self.trim(A))
        out = np.zeros(((A.shape[0] - 1) * self.p + 1, self.a), dtype=np.int64)
        out[::self.p] = A
        return out

    def shift(self, A, k):
        """Multiply by x^k."""
        out = np.zeros((A.shape[0] + k, self.a), dtype=np.int64)
        out[k:] = A
        return out

    def divmod_monic(self, A, D):
        """Quotient/remainder by a monic divisor (leading coefficient 1)."""
        D = self.trim(D)
        dd = D.shape[0] - 1
        assert dd >= 1 and (D[dd] == self.one_scalar()).all(), "divisor must be monic"
        R = self.trim(A).copy() % self.mod
        if R.shape[0] - 1 < dd:
            return self.zero_poly(), R
        Q = np.zeros((R.shape[0] - dd, self.a), dtype=np.int64)
        for top in range(R.shape[0] - 1, dd - 1, -1):
            c = R[top]
            if c.any():
                Q[top - dd] = c
                R[top - dd: top + 1] = (R[top - dd: top + 1]
                                        - self.mul(c.reshape(1, self.a), D)[: dd + 1]) % self.mod
                R[top] = 0
        return self.trim(Q), self.trim(R[:dd] if dd >= 1 else R)

    def pow_monic(self, D, e):
        r = self.poly_from_scalars([1])
        for _ in range(e):
            r = self.mul(r, D)
        return r

    # -- scalar helpers -------------------------------------------------------

    def s_mul(self, x, y):
        return self.mul(x.reshape(1, self.a), y.reshape(1, self.a))[0]

    def s_val(self, x):
        return min(_val_int(int(d), self.p, self.N) for d in x)

    def s_sigma(self, x):
        return self.sigma_poly(x.reshape(1, self.a))[0]

    def s_inv_unit(self, x):
        """Inverse of a unit scalar."""
        el = self.ctx.element(tuple(int(d) for d in x))
        return self.scalar(el.inverse().digits)

    def s_div_exact(self, x, y):
        """x / y where v(y) <= v(x); raises _NeedScale if divisibility fails."""
        v = self.s_val(y)
        if v >= self.N:
            raise ZeroDivisionError("division by zero scalar in Z_q")
        pv = self.p ** v
        if any(int(d) % pv for d in x):
            raise _NeedScale(v)
        xs = self.scalar([int(d) // pv for d in x])
        ys = self.scalar([int(d) // pv for d in y])
        return self.s_mul(xs, self.s_inv_unit(ys)), v

    def solve(self, M, rhs):
        """Solve M beta = rhs over Z_q mod p^N with full valuation pivoting.

        M is (n, n, a), rhs (n, a).  Forward elimination is always exact
        because the global minimum-valuation pivot divides every remaining
        entry; back substitution may require the caller to rescale (raises
        _NeedScale).  Returns (beta, total pivot valuation).
        """
        n = M.shape[0]
        A = M.copy() % self.mod
        b = rhs.copy() % self.mod
        col_perm = list(range(n))
        piv_vals = []
        zero_block_at = n
        for k in range(n):
            best, bv = None, self.N + 1
            for i in range(k, n):
                for j in range(k, n):
                    v = self.s_val(A[i, j])
                    if v < bv:
                        bv, best = v, (i, j)
            if best is None or bv >= self.N:
                # the remaining block vanishes at working precision: those
                # directions are undetermined; they may be dropped only if the
                # right-hand side vanishes there too, else the caller rescales
                for i in range(k, n):
                    if b[i].any():
                        raise _NeedScale(1)
                zero_block_at = k
                break
            i0, j0 = best
            A[[k, i0]] = A[[i0, k]]
            b[[k, i0]] = b[[i0, k]]
            A[:, [k, j0]] = A[:, [j0, k]]
            col_perm[k], col_perm[j0] = col_perm[j0], col_perm[k]
            piv_vals.append(bv)
            pv = self.p ** bv
            unit_inv = self.s_inv_unit(self.scalar([int(d) // pv for d in A[k, k]]))
            for i in range(k + 1, n):
                v = A[i, k]
                if not v.any():
                    continue
                factor = self.s_mul(self.scalar([int(d) // pv for d in v]), unit_inv)
                A[i] = (A[i] - np.array([self.s_mul(factor, A[k, j]) for j in range(n)])) % self.mod
                b[i] = (b[i] - self.s_mul(factor, b[k])) % self.mod
        x = np.zeros((n, self.a), dtype=np.int64)
        for k in range(zero_block_at - 1, -1, -1):
            acc = b[k].copy()
            for j in range(k + 1, zero_block_at):
                acc = (acc - self.s_mul(A[k, j], x[j])) % self.mod
            x[k], _ = self.s_div_exact(acc, A[k, k])
        out = np.zeros((n, self.a), dtype=np.int64)
        for k in range(n):
            out[col_perm[k]] = x[k]
        return out, sum(piv_vals)
