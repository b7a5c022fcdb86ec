"""Exact cyclotomic-integer reduction for root-of-unity sums."""

from __future__ import annotations

from functools import lru_cache


def _poly_divmod_z(a, b):
    a = list(a)
    db = len(b) - 1
    assert b[-1] == 1
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db:
        c = a[-1]
        if c:
            q[len(a) - 1 - db] = c
            for i in range(db + 1):
                a[len(a) - 1 - db + i] -= c * b[i]
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return q, a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(t: int):
    """Phi_t as an ascending integer coefficient tuple (monic)."""
    if t == 1:
        return (-1, 1)
    num = [0] * t + [1]
    num[0] = -1  # x^t - 1
    for d in range(1, t):
        if t % d == 0:
            q, r = _poly_divmod_z(num, list(cyclotomic_polynomial(d)))
            assert not r
            num = q
    return tuple(num)


def zeta_sum_as_int(vec, t: int):
    """sum_k vec[k] * zeta_t^k as a rational integer, or None if irrational.

    Reduces the exponent vector modulo Phi_t; the sum is rational exactly when
    the remainder is constant.
    """
    phi = list(cyclotomic_polynomial(t))
    _, rem = _poly_divmod_z(list(vec), phi)
    if len(rem) > 1:
        return None
    return rem[0] if rem else 0
