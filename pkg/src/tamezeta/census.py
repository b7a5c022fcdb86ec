"""Brute-force oracles: exhaustive point counts and character sums.

The census exists to be dumb and trustworthy; it never touches the p-adic
engine.  Character sums are accumulated as exact root-of-unity histograms
(length-t integer vectors indexed by character index) and converted to
rational integers only when the cyclotomic reduction is constant.

ORIENTATION: fiber sizes decompose as sum_j chi_n^j(Pi(x)^epsilon) with
epsilon = -1 (the deck group acts by h.Xi = h Xi, so the theta_j-isotypic
fixed-point mass pairs with chi^j(Pi^{-1})); pinned by the Lefschetz tests.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .arith import ArithError, ExtField, build_field, char_of_order
from .arith import polyfq
from .cover import CoverSpec
from .cyclotomic import zeta_sum_as_int

ORIENTATION = -1
DEFAULT_BUDGET = 2 ** 26


class BudgetError(ValueError):
    pass


@lru_cache(maxsize=None)
def _ext_field(field, n):
    return ExtField(field, n)


@dataclass
class CountReport:
    spec_hash: str
    n: int
    t: int
    total: int
    histogram: tuple           # c_k = #{x : chi_n index of Pi(x)^epsilon is k}
    s_values: tuple            # S_j(n) as int, or None when irrational
    timing_s: float = dc_field(default=0.0, compare=False)

    def s_histogram(self, j: int):
        """Exponent histogram of S_j(n): vec[m] = sum of c_k over jk = m mod t."""
        vec = [0] * self.t
        for k, c in enumerate(self.histogram):
            vec[(j * k) % self.t] += c
        return vec

    def to_json(self):
        return {
            "schema": 1,
            "spec_hash": self.spec_hash,
            "n": self.n,
            "total": self.total,
            "histogram": list(self.histogram),
            "s_values": list(self.s_values),
        }


def _spec_hash(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


def count_cover(cover: CoverSpec, n: int, budget: int = DEFAULT_BUDGET,
                threads: int = 1, generator=None) -> CountReport:
    """Exhaustive count of {(x, xi): xi^t Pi(x) = 1} over F_{q^n}.

    Returns the total together with the per-eigenspace character sums; the
    optional generator overrides the canonical one (the S_j must not change,
    which the property suite checks).
    """
    field = cover.field
    Q = field.q ** n
    if Q > budget:
        raise BudgetError(f"enumeration budget exceeded: q^n = {Q} > {budget}")
    t = cover.t
    start = time.monotonic()
    ext = _ext_field(field, n)
    chi = char_of_order(field, t)
    pi = cover.pi_poly()
    coeffs = [ext.embed(c) for c in pi]

    if generator is None:
        dlog = field.dlog
    else:
        table = {}
        acc = field.one()
        for k in range(field.q - 1):
            table[acc.index()] = k
            acc = acc * generator
        if len(table) != field.q - 1:
            raise ArithError("generator does not have full order")
        dlog = lambda u: table[u.index()]

    def chunk_hist(bounds):
        lo, hi = bounds
        hist = [0] * t
        for i in range(lo, hi):
            x = ext.from_index(i)
            val = coeffs[-1]
            for c in reversed(coeffs[:-1]):
                val = val * x + c
            if val.is_zero():
                continue
            k = dlog(ext.norm(val)) % t
            hist[(ORIENTATION * k) % t] += 1
        return hist

    nchunks = max(1, min(threads, 8))
    step = (Q + nchunks - 1) // nchunks
    bounds = [(i, min(i + step, Q)) for i in range(0, Q, step)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hists = list(pool.map(chunk_hist, bounds))
    else:
        hists = [chunk_hist(b) for b in bounds]
    hist = [sum(h[k] for h in hists) for k in range(t)]

    total = t * hist[0]
    s_values = []
    for j in range(t):
        vec = [0] * t
        for k, c in enumerate(hist):
            vec[(j * k) % t] += c
        s_values.append(zeta_sum_as_int(vec, t))
    assert s_values[0] == sum(hist)
    rep = CountReport(_spec_hash({"cover": cover.key(), "n": n}), n, t, total,
                      tuple(hist), tuple(s_values))
    rep.timing_s = time.monotonic() - start
    return rep


def fiber_sizes_direct(cover: CoverSpec, n: int, budget: int = 2 ** 18):
    """Direct (x, xi) enumeration of fiber sizes; the oracle for the oracle."""
    field = cover.field
    Q = field.q ** n
    if Q * Q > budget:
        raise BudgetError("direct fiber enumeration budget exceeded")
    ext = _ext_field(field, n)
    pi = cover.pi_poly()
    coeffs = [ext.embed(c) for c in pi]
    out = {}
    elements = list(ext.elements())
    for x in elements:
        val = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            val = val * x + c
        if val.is_zero():
            continue
        count = sum(1 for xi in elements if (xi ** cover.t) * val == ext.one())
        out[x.index()] = count
    return out


def prime_power(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            s = 0
            m = q
            while m % p == 0:
                m //= p
                s += 1
            if m != 1:
                raise ArithError(f"q = {q} is not a prime power")
            return p, s
    raise ArithError("q must be >= 2")


def count_dl_affine(d: int, q: int, n: int, budget: int = DEFAULT_BUDGET) -> int:
    """#{(Xi_0..Xi_d) in F_{q^n}^{d+1} : det((Xi_i^{q^j}))^{q-1} = (-1)^d}."""
    p, s = prime_power(q)
    field = build_field(p, s)
    ext = _ext_field(field, n)
    Q = q ** n
    if Q ** (d + 1) > budget:
        raise BudgetError(f"enumeration budget exceeded: {Q}^{d + 1} > {budget}")
    target = ext.embed(field.element(-1) ** d)
    elements = list(ext.elements())
    pows = [[e ** (q ** jj) for jj in range(d + 1)] for e in elements]

    import itertools
    count = 0
    for tup in itertools.product(range(Q), repeat=d + 1):
        # det of the (d+1)x(d+1) Moore-style matrix (Xi_i^(q^j))
        det = ext.zero()
        for perm in itertools.permutations(range(d + 1)):
            sign = 1
            for i in range(d + 1):
                for k in range(i + 1, d + 1):
                    if perm[i] > perm[k]:
                        sign = -sign
            term = ext.one()
            for i in range(d + 1):
                term = term * pows[tup[i]][perm[i]]
            det = det + term if sign == 1 else det - term
        if det ** (q - 1) == target:
            count += 1
    return count


def lefschetz_compare(cover: CoverSpec, n_max: int, corrupt=None,
                      budget: int = DEFAULT_BUDGET) -> dict:
    """Compare -Tr(F_q^n | H^1_j) with the census S_j(n) for every
    general-position j and n <= n_max.

    A rational S_j is compared as an exact integer (trace from the rounded
    char poly via Newton's identities); an irrational one exactly p-adically
    through the Teichmueller embedding of its histogram, on the engine's
    certified digits.  Any mismatch is reported and turns ok to False;
    `corrupt` maps (j, n) to an integer delta injected into the engine side
    (the harness self-test).
    """
    from .engine.cohomology import NonRationalError, get_engine
    from .engine.zeta import eigen_trace_int
    import numpy as np

    engine = get_engine(cover)
    chi = char_of_order(cover.field, cover.t)
    z = engine.ring.z
    rows = []
    ok = True
    genpos = [j for j in range(cover.t) if engine.general_position(j)]
    for n in range(1, n_max + 1):
        report = count_cover(cover, n, budget=budget)
        for j in genpos:
            delta = corrupt.get((j, n), 0) if corrupt else 0
            s_int = report.s_values[j]
            engine_int = None
            if s_int is not None:
                try:
                    engine_int = -eigen_trace_int(engine, j, n) + delta
                except NonRationalError:
                    engine_int = None
            if s_int is not None and engine_int is not None:
                match = engine_int == s_int
                rows.append({"j": j, "n": n, "mode": "integer",
                             "census": s_int, "engine": engine_int,
                             "match": bool(match)})
            else:
                avail = engine.certified
                pa = engine.p ** avail
                vec = report.s_histogram(j)
                acc = np.zeros(engine.a, dtype=np.int64)
                for m, c in enumerate(vec):
                    if c:
                        zeta_m = np.array(chi.zeta_power(m, engine.ctx).digits,
                                          dtype=np.int64)
                        acc = (acc + (c % z.mod) * zeta_m) % z.mod
                tr, _ = engine.trace_power_zq(j, n)
                lhs = tuple(int(v) % pa for v in acc)
                rhs = tuple(int(-v + (delta if k == 0 else 0)) % pa
                            for k, v in enumerate(np.asarray(tr)))
                match = lhs == rhs
                rows.append({"j": j, "n": n, "mode": "padic",
                             "census": list(lhs), "engine": list(rhs),
                             "match": bool(match)})
            ok = ok and rows[-1]["match"]
    return {"schema": 1, "ok": ok, "comparisons": rows}
