"""Root counting for monic quadratics x^2 + bx + c modulo n.

Two independent routes: a direct scan over all residues, and the
multiplicative formula prod(1 + (D/p)) over the primes of n, which is valid
exactly when n is odd, squarefree and coprime to the discriminant D.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arith import _check_magnitude, kronecker
from .sieve import FactoredInteger

BRUTE_FORCE_LIMIT = 10**6


@dataclass(frozen=True)
class QuadraticForm:
    b: int
    c: int

    def __post_init__(self):
        _check_magnitude(self.b, self.c)

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.c


def count_roots_bruteforce(form: QuadraticForm, n: int) -> int:
    """Number of x in 0..n-1 with x^2 + bx + c = 0 (mod n), by full scan."""
    if not 1 <= n <= BRUTE_FORCE_LIMIT:
        raise ValueError(f"n must be in 1..{BRUTE_FORCE_LIMIT}")
    x = np.arange(n, dtype=np.int64)
    vals = (x * x + (form.b % n) * x + form.c % n) % n
    return int(np.count_nonzero(vals == 0))


def _require_formula_domain(form: QuadraticForm, n: FactoredInteger) -> None:
    d = form.discriminant
    for p, e in n.factors:
        if p == 2:
            raise ValueError("formula requires odd n")
        if e > 1:
            raise ValueError("formula requires squarefree n")
        if d % p == 0:
            raise ValueError("formula requires gcd(n, discriminant) = 1")


def count_roots_formula(form: QuadraticForm, n: FactoredInteger) -> int:
    """Root count as prod(1 + (D/p)) over the primes p of n.

    Requires n odd, squarefree, coprime to D = b^2 - 4c; rejects anything
    else rather than guessing (no lifting to prime powers, no special
    handling of shared factors).
    """
    _require_formula_domain(form, n)
    d = form.discriminant
    count = 1
    for p, _ in n.factors:
        count *= 1 + kronecker(d, p)
        if count == 0:
            return 0
    return count


def has_max_root_count(form: QuadraticForm, n: FactoredInteger) -> bool:
    """True iff the congruence has the full 2^k roots (k = number of primes).

    Equivalent to (D/p) = +1 for every prime p of n; vacuously true for n = 1.
    """
    _require_formula_domain(form, n)
    d = form.discriminant
    return all(kronecker(d, p) == 1 for p, _ in n.factors)
