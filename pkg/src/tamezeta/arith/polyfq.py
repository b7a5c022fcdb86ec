"""Dense univariate polynomial arithmetic and factorization over F_q.

Polynomials are lists/tuples of FieldElement in ascending degree order.
Factorization is fully deterministic: squarefree decomposition (with the
char-p pth-power descent), distinct-degree splitting, and equal-degree
splitting by lexicographic enumeration of candidate divisors -- adequate and
reproducible at desk scale.
"""

from __future__ import annotations

import itertools

from .finitefield import ArithError, FieldElement, FieldSpec


def trim(c):
    c = list(c)
    while c and c[-1].is_zero():
        c.pop()
    return c


def degree(f):
    f = trim(f)
    return len(f) - 1 if f else -1


def from_ints(field: FieldSpec, coeffs):
    return trim([field.element(c) for c in coeffs])


def constant(field, c):
    return trim([field.element(c)])


def x_poly(field):
    return [field.zero(), field.one()]


def add(f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else None
        b = g[i] if i < len(g) else None
        if a is None:
            out.append(b)
        elif b is None:
            out.append(a)
        else:
            out.append(a + b)
    return trim(out)


def neg(f):
    return [-c for c in f]


def sub(f, g):
    return add(f, neg(g))


def scale(f, c: FieldElement):
    return trim([c * x for x in f])


def mul(f, g, field=None):
    f, g = trim(f), trim(g)
    if not f or not g:
        return []
    zero = f[0].parent.zero()
    out = [zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a.is_zero():
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def divmod_poly(f, g):
    f, g = list(trim(f)), trim(g)
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    zero = g[0].parent.zero()
    dg = len(g) - 1
    inv_lead = g[-1].inverse()
    q = [zero] * max(0, len(f) - dg)
    while len(f) - 1 >= dg and f:
        if f[-1].is_zero():
            f.pop()
            continue
        df = len(f) - 1
        c = f[-1] * inv_lead
        q[df - dg] = c
        for i in range(dg + 1):
            f[df - dg + i] = f[df - dg + i] - c * g[i]
        f.pop()
    return trim(q), trim(f)


def mod_poly(f, g):
    return divmod_poly(f, g)[1]


def gcd(f, g):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, mod_poly(f, g)
    if f:
        f = scale(f, f[-1].inverse())
    return f


def derivative(f):
    if len(f) <= 1:
        return []
    field = f[0].parent
    return trim([field.element(k) * f[k] for k in range(1, len(f))])


def powmod(f, e, m):
    field = m[0].parent
    r = [field.one()]
    f = mod_poly(f, m)
    while e:
        if e & 1:
            r = mod_poly(mul(r, f), m)
        f = mod_poly(mul(f, f), m)
        e >>= 1
    return r


def evaluate(f, x):
    """Horner evaluation; x may be a FieldElement or an ExtElement."""
    if not f:
        try:
            return x.parent.zero()
        except AttributeError:
            return x * 0
    if isinstance(x, FieldElement):
        acc = x.parent.zero()
        for c in reversed(f):
            acc = acc * x + c
        return acc
    acc = x.parent.zero()
    for c in reversed(f):
        acc = acc * x + x.parent.embed(c)
    return acc


def monic(f):
    f = trim(f)
    if not f:
        return [], None
    lead = f[-1]
    return scale(f, lead.inverse()), lead


def _pth_root_coeff(c: FieldElement) -> FieldElement:
    # In F_q, c^(1/p) = c^(q/p)
    return c ** (c.parent.q // c.parent.p)


def squarefree_decomposition(f):
    """List of (g, k): f = prod g^k with the g squarefree, pairwise coprime."""
    field = f[0].parent
    p = field.p
    f, _ = monic(f)
    out = []

    def recurse(h, mult):
        if degree(h) <= 0:
            return
        dh = derivative(h)
        if not dh:
            # h = w(x^p); take the p-th root and recurse with multiplicity * p
            w = [_pth_root_coeff(h[i]) for i in range(0, len(h), p)]
            recurse(trim(w), mult * p)
            return
        c = gcd(h, dh)
        w = divmod_poly(h, c)[0]  # product of distinct factors of multiplicity
        k = 1
        while degree(w) > 0:
            y = gcd(w, c)
            piece = divmod_poly(w, y)[0]
            if degree(piece) > 0:
                out.append((piece, mult * k))
            w = y
            c = divmod_poly(c, y)[0]
            k += 1
        if degree(c) > 0:
            recurse(c, mult)

    recurse(f, 1)
    return out


def _distinct_degree(f):
    """Split squarefree monic f into [(product, k)] by irreducible-factor degree."""
    field = f[0].parent
    out = []
    h = x_poly(field)
    rem = list(f)
    k = 0
    while degree(rem) > 0:
        k += 1
        if 2 * k > degree(rem):
            out.append((rem, degree(rem)))
            break
        h = powmod(h, field.q, rem)
        g = gcd(sub(h, x_poly(field)), rem)
        if degree(g) > 0:
            out.append((g, k))
            rem = divmod_poly(rem, g)[0]
            h = mod_poly(h, rem)
    return out


def _equal_degree_split(f, k):
    """All monic irreducible degree-k factors of f (f a product of those)."""
    field = f[0].parent
    factors = []
    rem = list(f)
    while degree(rem) > k:
        found = None
        for low_idx in itertools.product(range(field.q), repeat=k):
            cand = [field.from_index(i) for i in low_idx] + [field.one()]
            if degree(cand) == k and not mod_poly(rem, cand):
                found = cand
                break
        if found is None:
            raise ArithError("equal-degree split failed")
        factors.append(trim(found))
        rem = divmod_poly(rem, found)[0]
    if degree(rem) == k:
        factors.append(trim(rem))
    return factors


def factor(f):
    """(lead, {tuple-key poly: multiplicity}) with monic irreducible factors."""
    f = trim(f)
    if degree(f) < 1:
        raise ArithError("cannot factor a constant polynomial")
    lead = f[-1]
    out = {}
    for g, mult in squarefree_decomposition(f):
        for part, k in _distinct_degree(g):
            for irr in _equal_degree_split(part, k):
                key = tuple(irr)
                out[key] = out.get(key, 0) + mult
    return lead, out


def poly_key(f):
    """Hashable canonical key (tuple of coefficient index ints)."""
    return tuple(c.index() for c in trim(f))


def nth_root_poly(f, m):
    """Monic m-th root of a monic polynomial, or None."""
    f = trim(f)
    if degree(f) % m != 0:
        return None
    _, facs = factor(f)
    root = [f[0].parent.one()]
    for key, e in sorted(facs.items(), key=lambda kv: tuple(c.index() for c in kv[0])):
        if e % m != 0:
            return None
        root = mul(root, pow_poly(list(key), e // m))
    return root


def pow_poly(f, e):
    field = f[0].parent
    r = [field.one()]
    for _ in range(e):
        r = mul(r, f)
    return r
