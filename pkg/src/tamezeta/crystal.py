"""Divisor and eigenspace combinatorics of the rank-one log crystals.

Everything in this module is exact integer / rational arithmetic: the places
of div(Pi) on P^1, the twisting coefficients b_{V,j} = floor(j*mu_V/t), the
Frobenius index decomposition p*j = nu(j) + mu(j)*t, connection residues,
general-position flags, and the shift reduction for covers whose Pi is a
perfect m-th power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import polyfq
from .cover import CoverError, CoverSpec

INFINITY = "INFINITY"


class CrystalError(ValueError):
    pass


@dataclass(frozen=True)
class PlaceData:
    label: str            # polynomial rendering, or INFINITY
    poly: tuple           # coefficient indices of the monic irreducible; () at infinity
    degree: int
    mu: int               # multiplicity of the place in div(Pi)


@dataclass(frozen=True)
class EigenIndex:
    j: int
    nu: int
    mu_frob: int


def nu_mu(p: int, t: int, j: int) -> EigenIndex:
    """The unique (nu, mu) with p*j = nu + mu*t, 0 <= nu < t, mu >= 0."""
    if math.gcd(p, t) != 1:
        raise CrystalError(f"p = {p} divides t = {t}")
    if not 0 <= j < t:
        raise CrystalError(f"j = {j} out of range [0, {t})")
    nu = (p * j) % t
    mu = (p * j - nu) // t
    assert p * j == nu + mu * t and mu >= 0
    return EigenIndex(j, nu, mu)


def _poly_label(field, key) -> str:
    terms = []
    for e in range(len(key) - 1, -1, -1):
        c = key[e]
        if c == 0:
            continue
        if e == 0:
            terms.append(str(c))
        else:
            xs = "x" if e == 1 else f"x^{e}"
            terms.append(xs if c == 1 else f"{c}*{xs}")
    return "+".join(terms) if terms else "0"


@dataclass(frozen=True)
class CrystalProfile:
    p: int
    q: int
    t: int
    places: tuple                # PlaceData, finite places first, infinity last
    b: tuple                     # b[j][v] = floor(j*mu_v/t)
    residues: tuple              # residues[j][v] as Fraction in [0, 1)
    general_position: tuple      # bool per j
    expected_h1_dim: tuple       # int for general-position j and j = 0, else None
    eigen: tuple                 # EigenIndex per j

    def finite_places(self):
        return self.places[:-1]

    @property
    def sum_deg(self):
        return sum(v.degree for v in self.places)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "p": self.p,
            "q": self.q,
            "t": self.t,
            "places": [
                {"label": v.label, "degree": v.degree, "mu": v.mu}
                for v in self.places
            ],
            "eigenspaces": [
                {
                    "j": j,
                    "nu": self.eigen[j].nu,
                    "mu_frob": self.eigen[j].mu_frob,
                    "b": list(self.b[j]),
                    "residues": [f"{r.numerator}/{r.denominator}" for r in self.residues[j]],
                    "general_position": self.general_position[j],
                    "expected_h1_dim": self.expected_h1_dim[j],
                }
                for j in range(self.t)
            ],
        }


def profile(cover: CoverSpec) -> CrystalProfile:
    """Factor Pi into places and fill all per-eigenspace crystal data.

    The infinite place is always appended with mu = -deg(Pi), so div(Pi) has
    degree 0 and the Fuchs identity holds on the nose.
    """
    field = cover.field
    pi = cover.pi_poly()
    if polyfq.degree(pi) < 1:
        raise CoverError("trivial cover: empty divisor unsupported")
    _, facs = polyfq.factor(pi)
    finite = []
    for key, mult in sorted(facs.items(), key=lambda kv: polyfq.poly_key(list(kv[0]))):
        idx_key = polyfq.poly_key(list(key))
        finite.append(PlaceData(_poly_label(field, idx_key), idx_key,
                                len(idx_key) - 1, mult))
    deg = polyfq.degree(pi)
    places = tuple(finite) + (PlaceData(INFINITY, (), 1, -deg),)
    assert sum(v.degree * v.mu for v in places) == 0, "div(Pi) must have degree 0"

    t = cover.t
    b, residues, genpos, expdim, eigen = [], [], [], [], []
    sum_deg = sum(v.degree for v in places)
    for j in range(t):
        bj = tuple((j * v.mu) // t for v in places)
        rj = tuple(Fraction(j * v.mu, t) - (j * v.mu) // t for v in places)
        gp = all(r != 0 for r in rj)
        b.append(bj)
        residues.append(rj)
        genpos.append(gp)
        if gp:
            expdim.append(sum_deg - 2)
        elif j == 0:
            expdim.append(sum(v.degree for v in finite))
        else:
            expdim.append(None)
        eigen.append(nu_mu(cover.p, t, j))
        # Fuchs identity: deg-weighted residues + deg-weighted b sum to zero
        assert sum(v.degree * r for v, r in zip(places, rj)) \
            + sum(v.degree * c for v, c in zip(places, bj)) == 0
    return CrystalProfile(cover.p, cover.q, t, places, tuple(b), tuple(residues),
                          tuple(genpos), tuple(expdim), tuple(eigen))


def check_divisor_inequality(prof: CrystalProfile, j: int) -> bool:
    """p*b_{V,j} - mu(j)*mu_V <= b_{V,nu(j)} at every place (always true)."""
    e = prof.eigen[j]
    return all(prof.p * prof.b[j][v] - e.mu_frob * place.mu <= prof.b[e.nu][v]
               for v, place in enumerate(prof.places))


@dataclass(frozen=True)
class ShiftReduction:
    m: int
    step: int                 # the shift is j -> j + step mod t
    lam: tuple                # coefficient indices of the witness Lambda

    def apply(self, j: int, t: int) -> int:
        return (j + self.step) % t

    def orbit_representative(self, j: int, t: int):
        """0 if the shift orbit of j contains 0, else None."""
        return 0 if j % self.step == 0 else None


def shift_reduction(cover: CoverSpec, m: int) -> ShiftReduction:
    """The index shift j -> j + t/m, valid when Pi = Lambda^m exactly."""
    if m < 1 or cover.t % m != 0:
        raise CrystalError(f"m = {m} does not divide t = {cover.t}")
    field = cover.field
    pi = cover.pi_poly()
    lead, facs = polyfq.factor(pi)
    if any(mult % m for mult in facs.values()):
        raise CrystalError(f"Pi is not an m-th power: some factor multiplicity not divisible by {m}")
    # leading coefficient must be an m-th power in F_q^x
    k = field.dlog(lead)
    g = field.multiplicative_generator()
    n = field.q - 1
    d = math.gcd(m, n)
    if k % d != 0:
        raise CrystalError(f"Pi is not an m-th power: leading coefficient fails the test")
    # smallest exponent s with m*s = k mod n
    s = ((k // d) * pow(m // d, -1, n // d)) % (n // d)
    lam = [g ** s]
    for key, mult in sorted(facs.items(), key=lambda kv: polyfq.poly_key(list(kv[0]))):
        lam = polyfq.mul(lam, polyfq.pow_poly(list(key), mult // m))
    check = polyfq.pow_poly(lam, m)
    assert polyfq.sub(check, pi) == [], "witness verification failed"
    return ShiftReduction(m, cover.t // m, tuple(c.index() for c in lam))


def max_shift_order(cover: CoverSpec) -> int:
    """Largest m | t for which shift_reduction applies (1 if none)."""
    _, facs = polyfq.factor(cover.pi_poly())
    g = 0
    for mult in facs.values():
        g = math.gcd(g, mult)
    g = math.gcd(g, cover.t)
    for m in sorted((d for d in range(1, g + 1) if g % d == 0), reverse=True):
        if cover.t % m:
            continue
        try:
            shift_reduction(cover, m)
            return m
        except CrystalError:
            continue
    return 1


def singular_resolution(cover: CoverSpec, j: int):
    """Representative eigenspace for singular j: 0 via the shift orbit, or None."""
    prof = profile(cover)
    if prof.general_position[j] or j == 0:
        return j
    m = max_shift_order(cover)
    if m > 1:
        step = cover.t // m
        if j % step == 0:
            return 0
    return None
