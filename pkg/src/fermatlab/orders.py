"""Multiplicative orders modulo F_n.

Whenever base^(F_n - 1) = 1 the order of the base divides 2^(2^n) and
is therefore itself a power of two, 2^alpha.  order_alpha finds alpha
by squaring upward: one squaring per candidate alpha, and the first hit
is minimal by construction.  If 2^n squarings never reach 1 the order
has an odd part and the marker result NotTotallyEven is returned.

On a composite F_n whose congruence holds, alpha is provably at most
2^n - 2; order_alpha records whether that bound held in bound_satisfied
so sweeps can assert it across a whole range.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .arith import check_index, mod_mul
from .oracle import is_probable_prime
from .primality import fermat_is_prime, require_coprime

ORDER_BOUND_SLACK = 2  # composite + congruence: alpha <= 2^n - 2


@dataclass(frozen=True, slots=True)
class OrderResult:
    """Order of `base` mod F_n expressed through its exponent alpha.

    alpha = k means ord(base) = 2^k exactly.  alpha = None is the
    NotTotallyEven marker: no power-of-two exponent up to 2^(2^n)
    reaches 1, so the order does not divide F_n - 1 at all (the base
    therefore also fails the Fermat congruence).  bound_satisfied is
    only set when F_n is composite and alpha is numeric.
    """

    n: int
    base: int
    alpha: Optional[int]
    bound_satisfied: Optional[bool] = None
    squarings_used: int = 0

    @property
    def not_totally_even(self) -> bool:
        return self.alpha is None

    @property
    def order(self) -> Optional[int]:
        if self.alpha is None:
            return None
        return 1 << self.alpha


def order_alpha(n: int, base: int) -> OrderResult:
    """Least alpha with base^(2^alpha) = 1 mod F_n, or NotTotallyEven.

    At most 2^n squarings.  Minimality needs no extra check: the scan
    goes upward and keeps the previous residue, which by loop exit is
    never 1 when a hit occurs at alpha > 0.
    """
    check_index(n)
    v = require_coprime(n, base)
    if v.is_one:
        return OrderResult(n=n, base=base, alpha=0, squarings_used=0,
                           bound_satisfied=_bound(n, 0))
    limit = 1 << n
    prev = v
    for alpha in range(1, limit + 1):
        v = mod_mul(prev, prev)
        if v.is_one:
            assert not prev.is_one
            return OrderResult(n=n, base=base, alpha=alpha,
                               squarings_used=alpha,
                               bound_satisfied=_bound(n, alpha))
        prev = v
    return OrderResult(n=n, base=base, alpha=None, squarings_used=limit)


def _bound(n: int, alpha: int) -> Optional[bool]:
    if fermat_is_prime(n):
        return None
    return alpha <= (1 << n) - ORDER_BOUND_SLACK


def euler_phi_prime_power(p: int, e: int) -> int:
    """phi(p^e) = p^(e-1) * (p - 1) for an odd prime p.

    Primality of p is actually verified below 2^64 (the check is exact
    there); larger p is the caller's assertion to make.
    """
    if e < 1:
        raise ValueError(f"exponent must be >= 1, got {e}")
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")
    if p < (1 << 64) and not is_probable_prime(p):
        raise ValueError(f"p must be prime, got composite {p}")
    return p ** (e - 1) * (p - 1)


def order_in_prime_power(base: int, p: int, e: int) -> int:
    """ord(base) modulo p^e by factoring it out of phi(p^e) = 2^s * odd.

    Only meaningful when a factorization of F_n is in hand; the
    modulus-level alpha from order_alpha is the default observable.
    """
    phi = euler_phi_prime_power(p, e)
    m = p ** e
    if base % p == 0:
        raise ValueError(f"base {base} is not a unit mod {p}^{e}")
    order = phi
    for q in _prime_factors(phi):
        while order % q == 0 and pow(base, order // q, m) == 1:
            order //= q
    return order


def _prime_factors(x: int):
    seen = set()
    d = 2
    while d * d <= x:
        while x % d == 0:
            if d not in seen:
                seen.add(d)
                yield d
            x //= d
        d += 1 if d == 2 else 2
    if x > 1 and x not in seen:
        yield x
