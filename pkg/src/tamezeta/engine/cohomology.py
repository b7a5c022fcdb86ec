"""The p-adic cohomology engine.

For a cover 1 = Xi^t Pi over F_q, each eigenspace j carries the rank-one
log connection  nabla_j(f) = df - (j/t) f dlog(Pi~)  on the lifted punctured
line.  H^1 of nabla_j is computed by explicit cohomological reduction:

  * pole levels >= 2 are peeled with relations nabla_j(beta / R~^s), solving
    an m_r x m_r system per level (valuation-pivoted, exact mod p^N);
  * the polynomial part is killed top-down with relations nabla_j(x^b);
  * the m_r residual monomial classes x^i dx / R~ satisfy one relation rho
    (the reduction of nabla_j(1)); the basis drops the monomial where rho
    has a unit coefficient (highest degree among minimal valuation), which
    keeps the basis a lattice basis.

Every subtraction is an exact element of the image of nabla_j, so the class
is never perturbed; divisions that would leave Z_q scale the whole working
form by p instead (the scale is the documented precision loss, reported as
precision_used = N - loss).

Frobenius is the paper-exact semilinear map
  g dx  |->  p x^(p-1) Phi*(g) Pi~^(-mu(j)) (Pi~^p / Phi* Pi~)^(j/t) dx,
with the 1-unit power expanded by the binomial series (nu-th term carries
p^nu, truncation at N terms is exact).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..arith import PadicContext
from ..arith import polyfq
from ..cover import CoverError, CoverSpec
from ..crystal import CrystalProfile, max_shift_order, nu_mu, profile
from .fqlinalg import rank_nullity
from .ring import CoverRing, RElt
from .zqnum import PrecisionError, _NeedScale


class EngineError(ValueError):
    pass


class NonRationalError(EngineError):
    """A per-eigenspace quantity is a genuine cyclotomic (not rational) integer."""


@dataclass(frozen=True)
class Eigenspace:
    index: int
    dimension: int
    basis: tuple              # (monomial degree i, pole order along radical, pole order at infinity)
    resolved_to: object       # None, or the orbit representative for singular j
    precision: int

    def to_json(self):
        return {
            "j": self.index,
            "dim": self.dimension,
            "basis": [{"x_degree": i, "pole_radical": pr, "pole_infinity": pi}
                      for (i, pr, pi) in self.basis],
            "resolved_to": self.resolved_to,
            "precision": self.precision,
        }


@dataclass(frozen=True)
class FrobeniusMatrix:
    source: int
    target: int
    entries: tuple            # rows of columns of Z_q digit tuples
    semilinear: bool
    precision_used: int

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)

    def to_json(self):
        return {
            "source": self.source,
            "target": self.target,
            "semilinear": self.semilinear,
            "entries": [[list(e) for e in row] for row in self.entries],
            "precision_used": self.precision_used,
        }


def precision_guard(cover: CoverSpec, prof: CrystalProfile):
    """(n_weil, guard): Weil-window digits and the reduction-loss guard.

    B caps the degree of any rounded integer polynomial (per-eigenspace char
    poly, or a full nu-orbit product of dimension a * (m_rad - 1)); n_weil is
    the least N with p^N > 2 * binom(B, B/2) * q^(B/2).  The guard is
    ceil(log_p(t * S * B)) + 3 with S = p * (n_weil + 4) * e_max the
    documented pole-growth constant; it absorbs the soft valuation losses of
    cohomological reduction, and the N+2 stability test re-verifies it.
    """
    p, q, t = cover.p, cover.q, cover.t
    m_rad = sum(v.degree for v in prof.finite_places())
    B = max(1, m_rad, cover.a * max(1, m_rad - 1))
    binom = math.comb(B, B // 2)
    n_weil = 1
    while (p ** n_weil) ** 2 <= 4 * binom * binom * q ** B:
        n_weil += 1
    e_max = max(v.mu for v in prof.finite_places())
    s_est = p * (n_weil + 4) * max(1, e_max)
    guard = 3
    while p ** guard <= t * s_est * B:
        guard += 1
    return n_weil, guard


def auto_precision(cover: CoverSpec, prof: CrystalProfile) -> int:
    n_weil, guard = precision_guard(cover, prof)
    return n_weil + guard


class Engine:
    """All per-cover state: ring, lifts, eigenspace bases, Frobenius data."""

    def __init__(self, cover: CoverSpec):
        self.cover = cover
        self.prof = profile(cover)
        self.t = cover.t
        self.p = cover.p
        self.q = cover.q
        self.a = cover.a
        n_weil, guard = precision_guard(cover, self.prof)
        if cover.precision != "auto":
            N = cover.precision
        else:
            N = n_weil + guard
            if cover.lift != "teichmuller":
                # non-concentrated dlog lifts pay extra hard losses at the
                # levels where p | (s t + j mu_V); give them headroom up to
                # the int64-exact modulus cap
                cap = 1
                while cover.p ** (cap + 1) < 2 ** 31:
                    cap += 1
                N = min(N + guard + 3, cap)
        self.N = N
        self.guard = guard
        self.ctx = PadicContext(cover.field, N)
        self.ring = CoverRing(self.ctx, cover.pi_poly(), cover.lift)
        self.m_rad = self.ring.m_rad
        self.deg_pi = self.ring.deg_pi
        self._jt = {}
        self._rho_cache = {}
        self._eigen_cache = {}
        self._pstep_cache = {}
        self._fq_cache = {}
        self._inf_rel = {}
        self._level_ops = {}
        self._fmul = None
        self.loss = 0          # engine-wide max reduction scale seen so far

    # -- small helpers ---------------------------------------------------------

    def jt_int(self, j: int) -> int:
        """j/t in Z_p as an integer mod p^N."""
        if j not in self._jt:
            self._jt[j] = (j * pow(self.t, -1, self.ctx.pN)) % self.ctx.pN
        return self._jt[j]

    def nabla(self, j: int, f: RElt) -> RElt:
        return f.deriv() - (f * self.ring.dlog_pi()) * self.jt_int(j)

    def general_position(self, j: int) -> bool:
        return self.prof.general_position[j]

    def _note_loss(self, s):
        if s > self.loss:
            self.loss = s

    @property
    def avail(self):
        return self.N - self.loss

    @property
    def certified(self):
        """Digits guaranteed after reduction losses.

        The guard budgets the total valuation loss (hard scalings plus the
        representative ambiguity of divisions); tracked hard losses only eat
        into it when they exceed the budget.  Re-verified a posteriori by the
        N+2 stability criterion.
        """
        return max(1, self.N - max(self.guard, self.loss + 2))

    # -- reduction --------------------------------------------------------------

    def _dlog_levels(self):
        """(W1, junk): pole-1 part of dlog(Pi~) and its higher-level tails."""
        if not hasattr(self, "_dlog_lv"):
            z = self.ring.z
            _, lv = self.ring.dlog_pi().levels()
            w1 = lv.get(1, z.zero_poly())
            junk = {l: v for l, v in lv.items() if l >= 2 and z.deg(v) >= 0}
            self._dlog_lv = (w1, junk)
        return self._dlog_lv

    def _level_ops_j(self, j):
        """(A, B): matrices of mult-by-R~' and mult-by-(j/t)W1 modulo R~."""
        if j not in self._level_ops:
            z = self.ring.z
            w1, _ = self._dlog_levels()
            m = self.m_rad

            def op_matrix(op):
                M = np.zeros((m, m, z.a), dtype=np.int64)
                if z.deg(op) >= 0:
                    for i in range(m):
                        col = self.ring.divmod_rad(z.shift(op, i))[1]
                        M[: col.shape[0], i] = col
                return M

            A = op_matrix(self.ring.rad_prime)
            B = op_matrix(z.scal(w1, self.jt_int(j)))
            self._level_ops[j] = (A, B)
        return self._level_ops[j]

    def _infinity_relation(self, j, b):
        """Canonical levels of nabla_j(x^b), cached."""
        key = (j, b)
        if key not in self._inf_rel:
            rel = self.nabla(j, self.ring.monomial(b, 0))
            self._inf_rel[key] = rel.levels()
        return self._inf_rel[key]

    @staticmethod
    def _sub_into(P, levels, relP, relLv, z, factor=None):
        """work -= factor * relation (factor a Z_q scalar or None for 1)."""
        def scaled(x):
            return x if factor is None else z.scal(x, factor)
        if relP is not None:
            P = z.sub(P, scaled(relP))
        for l, v in relLv.items():
            levels[l] = z.sub(levels.get(l, z.zero_poly()), scaled(v))
        return P

    def _scale_all(self, P, levels, v=1):
        z = self.ring.z
        f = pow(self.p, v, z.mod)
        P = z.scal(P, f)
        for l in list(levels):
            levels[l] = z.scal(levels[l], f)
        return P

    def _subtract_peel_relation(self, j, s, beta, levels):
        """levels -= levels of nabla_j(beta y^s), assembled componentwise.

        Derivative and W1 parts land at levels s, s+1; the dlog junk tails
        (p-divisible, only for non-concentrated lifts) at s+l-1, s+l.
        """
        ring, z = self.ring, self.ring.z
        jt = self.jt_int(j)
        w1, junk = self._dlog_levels()
        beta = z.trim(beta)

        def sub_at(l, v):
            if l >= 1 and z.deg(v) >= 0:
                levels[l] = z.sub(levels.get(l, z.zero_poly()), v)

        op = z.add(z.scal(ring.rad_prime, s), z.scal(w1, jt))
        G = z.neg(z.mul(beta, op))
        qg, rg = ring.divmod_rad(G)
        sub_at(s + 1, rg)
        sub_at(s, z.add(z.deriv(beta), qg))
        for l, wl in junk.items():
            H = z.neg(z.scal(z.mul(beta, wl), jt))
            ql, rl = ring.divmod_rad(H)
            sub_at(s + l, rl)
            sub_at(s + l - 1, ql)

    def _reduce_levels(self, j, P, levels, terminal=True):
        """Reduce (P, levels) to basis coordinates; returns (A1, scale).

        One sweep peels pole levels top-down; lifts with dlog junk respawn
        p-divisible terms above the current level, so sweeps repeat until the
        junk valuation saturates (at most N extra sweeps).
        """
        z = self.ring.z
        m = self.m_rad
        scale = 0
        max_sweeps = 40 * (self.N + 2) + 200
        sweeps = 0
        while True:
            sweeps += 1
            if sweeps > max_sweeps:
                raise EngineError("reduction failed to terminate (internal guard)")
            if scale >= self.N:
                raise PrecisionError(
                    "reduction exhausted the working precision; raise N")
            tops = sorted((l for l in levels if l >= 2 and z.deg(levels[l]) >= 0),
                          reverse=True)
            if tops:
                rescale = None
                for L in range(tops[0], 1, -1):
                    B = levels.get(L)
                    if B is None or z.deg(B) < 0:
                        continue
                    rhs = np.zeros((m, z.a), dtype=np.int64)
                    rhs[: B.shape[0]] = z.neg(B)
                    A, Bop = self._level_ops_j(j)
                    M = (((L - 1) % z.mod) * A + Bop) % z.mod
                    try:
                        beta, _ = z.solve(M, rhs)
                    except _NeedScale as e:
                        rescale = e.args[0] if e.args else 1
                        break
                    self._subtract_peel_relation(j, L - 1, beta, levels)
                if rescale is not None:
                    P = self._scale_all(P, levels, rescale)
                    scale += rescale
                continue
            n = z.deg(P)
            if n >= 0:
                relP, relLv = self._infinity_relation(j, n + 1)
                if relP is None or z.deg(relP) != n:
                    raise PrecisionError("degenerate infinity relation; raise precision")
                try:
                    kappa, v = z.s_div_exact(P[n], relP[n])
                except _NeedScale as e:
                    P = self._scale_all(P, levels, e.args[0] if e.args else 1)
                    scale += e.args[0] if e.args else 1
                    continue
                P = self._sub_into(P, levels, relP, relLv, z, factor=kappa)
                assert z.deg(P) < n or not P[n].any()
                continue
            break
        A1 = np.zeros((m, z.a), dtype=np.int64)
        lv1 = levels.get(1)
        if lv1 is not None:
            A1[: lv1.shape[0]] = z.trim(lv1)
        if terminal and j != 0:
            rho, pivot = self._rho(j)
            if A1[pivot].any():
                while True:
                    try:
                        kappa, _ = z.s_div_exact(A1[pivot], rho[pivot])
                        break
                    except _NeedScale as e:
                        v = e.args[0] if e.args else 1
                        A1 = A1 * pow(self.p, v, z.mod) % z.mod
                        scale += v
                A1 = (A1 - np.array([z.s_mul(kappa, rho[i]) for i in range(m)])) % z.mod
            assert not A1[pivot].any()
        self._note_loss(scale)
        return A1, scale

    def _rho(self, j):
        """The single relation among the m_r monomial classes, and its pivot."""
        if j not in self._rho_cache:
            z = self.ring.z
            rel = self.nabla(j, self.ring.one())
            relP, relLv = rel.levels()
            P = relP if relP is not None else z.zero_poly()
            A1, _ = self._reduce_levels(j, P, dict(relLv), terminal=False)
            vals = [z.s_val(A1[i]) for i in range(self.m_rad)]
            vmin = min(vals)
            if vmin >= self.N:
                raise EngineError(
                    "degenerate eigenspace relation (Pi is a perfect p-th power?)")
            pv = self.p ** vmin
            A1 = np.array([[int(d) // pv for d in row] for row in A1], dtype=np.int64)
            pivot = max(i for i, v in enumerate(vals) if v == vmin)
            self._rho_cache[j] = (A1, pivot)
        return self._rho_cache[j]

    # -- public per-eigenspace objects -------------------------------------------

    def eigenspace(self, j: int) -> Eigenspace:
        if j in self._eigen_cache:
            return self._eigen_cache[j]
        if not 0 <= j < self.t:
            raise EngineError(f"j = {j} out of range")
        m = self.m_rad
        resolved = None
        if j != 0 and not self.general_position(j):
            rep = self._singular_rep(j)
            if rep is None:
                raise EngineError(f"unsupported singular eigenspace j = {j}")
            base = self.eigenspace(rep)
            es = Eigenspace(j, base.dimension, base.basis, rep, base.precision)
            self._eigen_cache[j] = es
            return es
        if j == 0:
            idxs = list(range(m))
        else:
            _, pivot = self._rho(j)
            idxs = [i for i in range(m) if i != pivot]
        expected = self.prof.expected_h1_dim[j]
        if expected is not None and expected != len(idxs):
            raise EngineError(f"dimension mismatch at j = {j}: {len(idxs)} vs {expected}")
        basis = tuple((i, 1, max(0, i + 2 - m)) for i in idxs)
        es = Eigenspace(j, len(idxs), basis, resolved, self.avail)
        self._eigen_cache[j] = es
        return es

    def _singular_rep(self, j):
        m = max_shift_order(self.cover)
        if m > 1 and j % (self.t // m) == 0:
            return 0
        return None

    def basis_indices(self, j):
        return [i for (i, _, _) in self.eigenspace(j).basis]

    def reduce_form(self, j: int, form: RElt, terminal=True):
        """Coordinates of [form dx] on the basis of H^1_j, plus the scale used.

        The returned vector equals p^scale * (true coordinates) mod p^N.
        """
        es = self.eigenspace(j)
        if es.resolved_to is not None:
            raise EngineError("reduce_form needs a directly-computed eigenspace")
        relP, relLv = form.levels()
        P = relP if relP is not None else self.ring.z.zero_poly()
        A1, scale = self._reduce_levels(j, P, dict(relLv), terminal=terminal)
        coords = A1[self.basis_indices(j)] if es.dimension else \
            np.zeros((0, self.ring.z.a), dtype=np.int64)
        return coords, scale

    def reduce_form_exact(self, j, form):
        """Integral coordinates (descaled); raises on an integrality violation."""
        z = self.ring.z
        coords, scale = self.reduce_form(j, form)
        if scale == 0:
            return coords, 0
        pv = self.p ** scale
        if any(int(d) % pv for d in coords.reshape(-1)):
            raise EngineError("integrality violation: reduced class leaves the lattice")
        out = np.array([[int(d) // pv for d in row] for row in coords], dtype=np.int64) \
            if coords.size else coords
        return out, scale

    # -- Frobenius ----------------------------------------------------------------

    def _frobenius_multipliers(self):
        """p x^(p-1) Pi~^(-mu(j)) (Pi~^p/Phi* Pi~)^(j/t) for every needed j."""
        if self._fmul is None:
            ring = self.ring
            u = ring.frobenius_unit()
            keys = [(j, self.t) for j in range(self.t)
                    if j == 0 or self.general_position(j)]
            upows = ring.one_unit_powers(u, keys)
            base = ring.monomial(self.p - 1, 0) * self.p
            self._fmul = {}
            for (j, _) in keys:
                mu = nu_mu(self.p, self.t, j).mu_frob
                self._fmul[j] = base * ring.pi_inv().pow(mu) * upows[(j, self.t)]
        return self._fmul

    def frobenius_p_step(self, j: int) -> FrobeniusMatrix:
        """Matrix of the sigma-semilinear p-power step H^1_j -> H^1_nu(j)."""
        if j in self._pstep_cache:
            return self._pstep_cache[j]
        es = self.eigenspace(j)
        if es.resolved_to is not None:
            raise EngineError("Frobenius steps live on directly-computed eigenspaces")
        nu = nu_mu(self.p, self.t, j).nu
        target = self.eigenspace(nu)
        fmul = self._frobenius_multipliers()[j]
        cols = []
        worst = 0
        for i in self.basis_indices(j):
            img = fmul * self.ring.monomial(i, 1).phi()
            coords, scale = self.reduce_form_exact(nu, img)
            worst = max(worst, scale)
            cols.append(coords)
        dim_t, dim_s = target.dimension, es.dimension
        entries = tuple(
            tuple(tuple(int(d) for d in cols[c][r]) for c in range(dim_s))
            for r in range(dim_t))
        mat = FrobeniusMatrix(j, nu, entries, semilinear=True,
                              precision_used=self.N - worst)
        self._pstep_cache[j] = mat
        return mat

    def _mat_np(self, fm: FrobeniusMatrix):
        r, c = fm.shape
        out = np.zeros((r, c, self.a), dtype=np.int64)
        for i in range(r):
            for k in range(c):
                out[i, k] = np.array(fm.entries[i][k], dtype=np.int64)
        return out

    def _matmul(self, A, B):
        z = self.ring.z
        n, m = A.shape[0], A.shape[1]
        m2, k = B.shape[0], B.shape[1]
        assert m == m2
        out = np.zeros((n, k, self.a), dtype=np.int64)
        for i in range(n):
            for jj in range(k):
                acc = np.zeros(self.a, dtype=np.int64)
                for l in range(m):
                    acc = (acc + z.s_mul(A[i, l], B[l, jj])) % z.mod
                out[i, jj] = acc
        return out

    def _mat_sigma(self, A):
        z = self.ring.z
        out = np.zeros_like(A)
        for i in range(A.shape[0]):
            for jj in range(A.shape[1]):
                out[i, jj] = z.s_sigma(A[i, jj])
        return out

    def frobenius_q(self, j: int) -> FrobeniusMatrix:
        """The linear q-power Frobenius on H^1_j (a-fold twisted composition)."""
        if j in self._fq_cache:
            return self._fq_cache[j]
        es = self.eigenspace(j)
        if es.resolved_to is not None:
            raise EngineError("frobenius_q lives on directly-computed eigenspaces")
        orbit_j = j
        R = None
        worst_prec = self.N
        cur = j
        for _ in range(self.a):
            step = self.frobenius_p_step(cur)
            worst_prec = min(worst_prec, step.precision_used)
            Ms = self._mat_np(step)
            R = Ms if R is None else self._matmul(Ms, self._mat_sigma(R))
            cur = step.target
        if cur != orbit_j:
            raise EngineError("nu-orbit did not close after a steps")
        dim = es.dimension
        entries = tuple(tuple(tuple(int(d) for d in R[r, c]) for c in range(dim))
                        for r in range(dim))
        mat = FrobeniusMatrix(j, j, entries, semilinear=False, precision_used=worst_prec)
        self._fq_cache[j] = mat
        return mat

    # -- characteristic polynomials and traces --------------------------------------

    def _poly_mul_T(self, f, g):
        z = self.ring.z
        out = [np.zeros(self.a, dtype=np.int64) for _ in range(len(f) + len(g) - 1)]
        for i, fi in enumerate(f):
            for k, gk in enumerate(g):
                out[i + k] = (out[i + k] + z.s_mul(fi, gk)) % z.mod
        return out

    def char_poly_zq(self, j: int):
        """det(T - M_q) as a list of Z_q scalars, constant first."""
        import itertools
        z = self.ring.z
        fm = self.frobenius_q(j)
        dim = fm.shape[0]
        if dim == 0:
            return [z.one_scalar()], fm.precision_used
        M = self._mat_np(fm)
        one = z.one_scalar()
        acc = [np.zeros(self.a, dtype=np.int64) for _ in range(dim + 1)]
        for perm in itertools.permutations(range(dim)):
            sign = 1
            seen = list(perm)
            for i in range(dim):          # parity by counting inversions
                for k in range(i + 1, dim):
                    if seen[i] > seen[k]:
                        sign = -sign
            term = [one.copy()]
            for r in range(dim):
                c = perm[r]
                lin = [(-M[r, c]) % z.mod] + ([one] if r == c else [])
                term = self._poly_mul_T(term, lin)
            for d, coef in enumerate(term):
                v = coef if sign == 1 else (-coef) % z.mod
                acc[d] = (acc[d] + v) % z.mod
        return acc, fm.precision_used

    def round_bounded(self, s, bound_sq, avail, what=""):
        """Integer c with c^2 <= bound_sq from a Z_q scalar known mod p^avail.

        Rounds in the smallest symmetric window the bound permits and checks
        two extra digits of consistency, so soft reduction losses (covered by
        the AUTO guard and re-verified by the N+2 stability test) surface as
        clean PrecisionErrors instead of corrupting output integers.
        """
        window = 1
        while (self.p ** window) ** 2 <= 4 * bound_sq:
            window += 1
        margin = min(2, max(avail - window, 0))
        if window > avail:
            raise PrecisionError(
                f"insufficient precision{what}: need {window + self.loss} digits, "
                f"have {avail}")
        pw = self.p ** window
        pm = self.p ** (window + margin)
        d = [int(x) % pm for x in s]
        c = d[0] % pw
        val = c - pw if c > pw // 2 else c
        if (d[0] - val) % pm:
            raise PrecisionError(
                f"rounding margin check failed{what}; raise the precision")
        for x in d[1:]:
            if x % pm:
                raise NonRationalError(
                    f"value does not lie in Z_p at working precision{what}")
        if val * val > bound_sq:
            raise EngineError(f"Weil bound violated{what}: |{val}|^2 > {bound_sq}")
        return val

    def char_poly_int(self, j: int):
        """P_j(T) in Z[T] (ascending coefficients), by symmetric rounding."""
        coeffs, prec = self.char_poly_zq(j)
        dim = len(coeffs) - 1
        avail = self.certified
        out = []
        for i, c in enumerate(coeffs):
            k = dim - i       # coefficient of T^i pairs with binom(dim, dim-i) q^((dim-i)/2)
            bound_sq = math.comb(dim, k) ** 2 * self.q ** k
            out.append(self.round_bounded(c, bound_sq, avail, what=f" at j={j}"))
        assert out[-1] == 1
        return out

    def trace_power_zq(self, j: int, n: int):
        fm = self.frobenius_q(j)
        dim = fm.shape[0]
        z = self.ring.z
        if dim == 0:
            return np.zeros(self.a, dtype=np.int64), fm.precision_used
        M = self._mat_np(fm)
        R = M
        for _ in range(n - 1):
            R = self._matmul(R, M)
        tr = np.zeros(self.a, dtype=np.int64)
        for i in range(dim):
            tr = (tr + R[i, i]) % z.mod
        return tr, fm.precision_used

    # -- mod p de Rham Euler characteristic ------------------------------------------

    def modp_euler(self, j: int):
        """(h0, h1, chi) of the two-term complex L(D(j)) -> L(D(j)) (x) Omega(log D).

        Global sections and H^1 of line bundles on P^1 are realized as Laurent
        monomial windows; hypercohomology comes from the two-column spectral
        sequence, which is exact here.
        """
        field = self.cover.field
        prof = self.prof
        places = prof.finite_places()
        m_r = self.m_rad
        b = prof.b[j]
        b_inf = b[-1]
        d0 = sum(places[i].degree * b[i] for i in range(len(places))) + b_inf
        d1 = d0 + m_r - 1
        jt_modp = (j * pow(self.t, -1, self.p)) % self.p

        rad = [field.one()]
        fac_polys = []
        for v in places:
            fp = [field.from_index(i) for i in v.poly]
            fac_polys.append(fp)
            rad = polyfq.mul(rad, fp)
        S = []
        for i, v in enumerate(places):
            co = (b[i] + jt_modp * v.mu) % self.p
            if co:
                quot = polyfq.divmod_poly(rad, fac_polys[i])[0]
                S = polyfq.add(S, polyfq.scale(
                    polyfq.mul(polyfq.derivative(fac_polys[i]), quot),
                    field.element(co)))

        def num_map(e):
            """Numerator of nabla(x^e / F0) over F1, as {exponent: element}."""
            out = {}
            ce = field.element(e % self.p)
            for k, c in enumerate(rad):
                if not c.is_zero() and not ce.is_zero():
                    out[e - 1 + k] = out.get(e - 1 + k, field.zero()) + ce * c
            for k, c in enumerate(S):
                if not c.is_zero():
                    ee = e + k
                    out[ee] = out.get(ee, field.zero()) - c
            return {k: v for k, v in out.items() if not v.is_zero()}

        def build(dom_exps, tgt_exps, project):
            tgt_index = {e: i for i, e in enumerate(tgt_exps)}
            M = np.zeros((len(tgt_exps), len(dom_exps)), dtype=np.int32)
            for c, e in enumerate(dom_exps):
                for ee, val in num_map(e).items():
                    if ee in tgt_index:
                        M[tgt_index[ee], c] = val.index()
                    elif not project:
                        raise EngineError("modp section map left its target window")
            return M

        h0_dom = list(range(0, d0 + 1))
        h0_tgt = list(range(0, d1 + 1))
        h1_dom = list(range(d0 + 1, 0))
        h1_tgt = list(range(d1 + 1, 0))
        M0 = build(h0_dom, h0_tgt, project=False)
        M1 = build(h1_dom, h1_tgt, project=True)
        r0, n0 = rank_nullity(M0, field) if M0.size else (0, len(h0_dom))
        r1, n1 = rank_nullity(M1, field) if M1.size else (0, len(h1_dom))
        h0 = n0
        h1 = (len(h0_tgt) - r0) + n1
        h2 = len(h1_tgt) - r1
        return h0, h1, h0 - h1 + h2

    def h0_slice_nullity(self, j: int):
        """dim over F_q of horizontal functions on a small slice (H^0 check)."""
        field = self.cover.field
        z = self.ring.z
        s_cap = self.ring.e_max + 1
        a_cap = self.deg_pi + self.m_rad + 2
        monos = [(a, s) for s in range(s_cap + 1)
                 for a in range(a_cap if s == 0 else self.m_rad)]
        imgs, img_index, cols = [], {}, []
        for (a_, s_) in monos:
            img = self.nabla(j, self.ring.monomial(a_, s_))
            relP, relLv = img.levels()
            entries = {}
            if relP is not None:
                for k in range(relP.shape[0]):
                    e = field.element(tuple(int(d) % self.p for d in relP[k]))
                    if not e.is_zero():
                        entries[(0, k)] = e
            for l, v in relLv.items():
                for k in range(v.shape[0]):
                    e = field.element(tuple(int(d) % self.p for d in v[k]))
                    if not e.is_zero():
                        entries[(l, k)] = e
            cols.append(entries)
            for key in entries:
                if key not in img_index:
                    img_index[key] = len(img_index)
                    imgs.append(key)
        M = np.zeros((len(img_index), len(monos)), dtype=np.int32)
        for c, entries in enumerate(cols):
            for key, e in entries.items():
                M[img_index[key], c] = e.index()
        _, nullity = rank_nullity(M, field)
        return nullity


_ENGINES = {}


def get_engine(cover: CoverSpec) -> Engine:
    if cover not in _ENGINES:
        _ENGINES[cover] = Engine(cover)
    return _ENGINES[cover]


# -- functional API matching the module contract ------------------------------------

def h1_basis(cover: CoverSpec, j: int) -> Eigenspace:
    return get_engine(cover).eigenspace(j)


def reduce_form(cover: CoverSpec, j: int, num_coeffs, pole_order: int):
    """Coordinates of (num(x) / R~^pole_order) dx in the basis of H^1_j.

    num_coeffs: ascending coefficient list of integers (Z_p) or digit tuples.
    Returns (coords as digit tuples, precision of the answer).
    """
    eng = get_engine(cover)
    rows = [eng.ring.z.scalar(c) for c in num_coeffs]
    form = RElt(eng.ring, eng.ring.z.poly_from_scalars(rows), pole_order)
    coords, scale = eng.reduce_form_exact(j, form)
    return [tuple(int(d) for d in row) for row in coords], eng.N - scale


def frobenius_p_step(cover: CoverSpec, j: int) -> FrobeniusMatrix:
    return get_engine(cover).frobenius_p_step(j)


def frobenius_q(cover: CoverSpec, j: int) -> FrobeniusMatrix:
    return get_engine(cover).frobenius_q(j)


def char_poly_int(cover: CoverSpec, j: int):
    return get_engine(cover).char_poly_int(j)


def modp_euler(cover: CoverSpec, j: int):
    return get_engine(cover).modp_euler(j)
