"""Point counts and the zeta function of a cover, assembled from the engine.

The fixed-point count over F_{q^n} splits across eigenspaces:

  N_n = sum_j S_j(n),     S_j(n) = sum_{Pi(x) != 0} chi_n^j(Pi(x)^{-1}),

with S_0(n) = |Y^0(F_{q^n})| in closed form and S_j(n) = -Tr(F_q^n | H^1_j)
for general-position j (middle-degree concentration + ordinary = compactly
supported there).  Singular j != 0 delegate to eigenspace 0 through the shift
isomorphism.

Rounding to Z happens exactly once, on nu-orbit products of the reciprocal
characteristic polynomials (Galois-stable, hence integral even when a single
S_j is an irrational cyclotomic integer); every count and trace is then
integer arithmetic via Newton's identities on those polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..cover import CoverSpec
from ..crystal import max_shift_order, nu_mu
from .cohomology import Engine, EngineError, NonRationalError, get_engine


@dataclass(frozen=True)
class ZetaResult:
    t: int
    q: int
    counts: tuple               # N_n for n = 1..n_max
    char_polys: tuple           # per j: ("poly", coeffs) | ("orbit", rep) | ("boundary", 0)
    orbit_factors: tuple        # ((orbit js), integer rev-charpoly product)
    numerator: tuple            # integer coefficients, ascending
    denominator: tuple
    component_count: int
    k0: int                     # number of eigenspaces delegating to j = 0
    precision_used: int

    def to_json(self):
        per_j = []
        for j, entry in enumerate(self.char_polys):
            kind, val = entry
            if kind == "poly":
                per_j.append({"j": j, "char_poly": list(val)})
            elif kind == "orbit":
                per_j.append({"j": j, "char_poly": None, "orbit_rep": val})
            else:
                per_j.append({"j": j, "char_poly": None, "reduced_to": 0})
        return {
            "schema": 1,
            "counts": list(self.counts),
            "eigenspaces": per_j,
            "orbit_factors": [{"orbit": list(o), "factor": list(f)}
                              for (o, f) in self.orbit_factors],
            "numerator": list(self.numerator),
            "denominator": list(self.denominator),
            "component_count": self.component_count,
            "precision_used": self.precision_used,
        }


def s0_count(engine: Engine, n: int) -> int:
    """|Y^0(F_{q^n})| = q^n - #{x : Pi(x) = 0 over F_{q^n}}."""
    return engine.q ** n - sum(v.degree for v in engine.prof.finite_places()
                               if n % v.degree == 0)


def eigenspace_plan(engine: Engine):
    """Classify each j: 'genpos', 'zero', or 'shift' (to 0); error otherwise."""
    plan = {}
    t = engine.t
    m = max_shift_order(engine.cover)
    step = t // m if m > 1 else None
    for j in range(t):
        if j == 0:
            plan[j] = "zero"
        elif engine.general_position(j):
            plan[j] = "genpos"
        elif step is not None and j % step == 0:
            plan[j] = "shift"
        else:
            raise EngineError(f"unsupported singular eigenspace j = {j}")
    return plan


def nu_orbits(engine: Engine, js):
    """Partition general-position indices into orbits of j -> p*j mod t."""
    left = set(js)
    orbits = []
    while left:
        j = min(left)
        orb = [j]
        cur = nu_mu(engine.p, engine.t, j).nu
        while cur != j:
            orb.append(cur)
            cur = nu_mu(engine.p, engine.t, cur).nu
        orbits.append(tuple(orb))
        left -= set(orb)
    return orbits


def _poly_mul_int(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for k, b in enumerate(g):
            out[i + k] += a * b
    return out


def orbit_factor_int(engine: Engine, orbit):
    """prod_{j in orbit} det(1 - T M_q(j)) with integer coefficients.

    The product is stable under sigma (the orbit is a Galois orbit), so the
    coefficients are rational; Weil purity bounds coefficient k of the
    degree-D product by binom(D, k) q^(k/2), giving the rounding windows.
    """
    z = engine.ring.z
    prod = [np.array(z.one_scalar())]
    prec = engine.N
    for j in orbit:
        coeffs, pr = engine.char_poly_zq(j)
        prec = min(prec, pr)
        rev = list(reversed(coeffs))
        out = [np.zeros(engine.a, dtype=np.int64) for _ in range(len(prod) + len(rev) - 1)]
        for i, a in enumerate(prod):
            for k, b in enumerate(rev):
                out[i + k] = (out[i + k] + z.s_mul(a, b)) % z.mod
        prod = out
    avail = engine.certified
    D = len(prod) - 1
    out_int = []
    for k, c in enumerate(prod):
        bound_sq = math.comb(D, k) ** 2 * engine.q ** k
        out_int.append(engine.round_bounded(c, bound_sq, avail,
                                            what=f" in orbit factor {orbit}"))
    assert out_int[0] == 1
    return out_int, avail


def power_sums(rev_poly, n_max):
    """p_n = sum alpha^n for f(T) = prod(1 - alpha T), by Newton's identity.

    rev_poly is f's ascending coefficient list (constant 1); exact integers.
    """
    D = len(rev_poly) - 1
    c = list(rev_poly) + [0] * max(0, n_max - D)
    p = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        acc = -n * c[n] if n <= D else 0
        for i in range(1, min(n, D) + 1):
            acc -= c[i] * p[n - i]
        p[n] = acc
    return p[1:]


def component_count(engine: Engine) -> int:
    g = 0
    for v in engine.prof.finite_places():
        g = math.gcd(g, v.mu)
    return math.gcd(engine.t, g)


def zeta(cover: CoverSpec, n_max: int) -> ZetaResult:
    engine = get_engine(cover)
    plan = eigenspace_plan(engine)
    genpos = [j for j, kind in plan.items() if kind == "genpos"]
    k0 = sum(1 for kind in plan.values() if kind in ("zero", "shift"))
    orbits = nu_orbits(engine, genpos)

    precision = engine.certified
    factors = []
    for orb in orbits:
        fac, avail = orbit_factor_int(engine, orb)
        precision = min(precision, avail)
        factors.append((orb, tuple(fac)))

    counts = []
    for n in range(1, n_max + 1):
        total = k0 * s0_count(engine, n)
        for _, fac in factors:
            total -= power_sums(list(fac), n)[n - 1]
        counts.append(total)

    char_polys = []
    for j in range(engine.t):
        if plan[j] == "genpos":
            try:
                char_polys.append(("poly", tuple(engine.char_poly_int(j))))
            except NonRationalError:
                rep = min(orb for orb in orbits if j in orb)
                char_polys.append(("orbit", rep[0]))
        else:
            char_polys.append(("boundary", 0))

    # boundary factor: prod_V (1 - T^deg V) / (1 - q T), once per delegating j
    boundary_num = [1]
    for v in engine.prof.finite_places():
        one_minus = [1] + [0] * (v.degree - 1) + [-1]
        boundary_num = _poly_mul_int(boundary_num, one_minus)
    numerator = [1]
    for _ in range(k0):
        numerator = _poly_mul_int(numerator, boundary_num)
    for _, fac in factors:
        numerator = _poly_mul_int(numerator, list(fac))
    denominator = [1]
    for _ in range(k0):
        denominator = _poly_mul_int(denominator, [1, -engine.q])

    return ZetaResult(engine.t, engine.q, tuple(counts), tuple(char_polys),
                      tuple(factors), tuple(numerator), tuple(denominator),
                      component_count(engine), k0, precision)


def eigen_trace_int(engine: Engine, j: int, n: int):
    """-S_j(n) = Tr(F_q^n | H^1_j) as an integer, via the rounded char poly.

    Raises NonRationalError when P_j is not rational; callers fall back to
    the exact p-adic comparison.
    """
    P = engine.char_poly_int(j)
    rev = list(reversed(P))
    return power_sums(rev, n)[n - 1]


def counts_from_zeta(result: ZetaResult, n_max: int):
    """Recompute N_n from the assembled rational function (series expansion)."""
    num_sums = power_sums(_normalize_unit(result.numerator), n_max)
    den_sums = power_sums(_normalize_unit(result.denominator), n_max)
    return [den_sums[n - 1] - num_sums[n - 1] for n in range(1, n_max + 1)]


def _normalize_unit(poly):
    assert poly[0] == 1, "zeta factors are normalized with constant term 1"
    return list(poly)
