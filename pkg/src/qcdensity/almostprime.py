"""Counting k-almost-primes under residue constraints, and the ordered
tuple sums behind the density estimates.

Counts enumerate sorted prime tuples p1 <= ... <= pk with product <= x by
recursive descent, pruning with p^(remaining depth) <= remaining budget; the
final position collapses to a range query against the sieve's per-class
prime index. Ordered-tuple quantities weight each sorted tuple by its number
of distinct orderings (k! over the factorials of its prime multiplicities).

A residue constraint is a multiset: an integer is counted when the residues
of its prime tuple mod N match the constraint as multisets. The positional
variant (i-th smallest prime lies in the i-th class) is separate.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import euler_phi
from .characters import build_character_group
from .sieve import SpfTable, prime_count


class CountMode(enum.Enum):
    SQUAREFREE = "squarefree"
    WITH_MULTIPLICITY = "with_multiplicity"


@dataclass(frozen=True)
class ResidueConstraint:
    """Multiset of unit residue classes mod N, one per prime factor."""

    modulus: int
    residues: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if not self.residues:
            raise ValueError("constraint needs at least one residue")
        normalized = tuple(r % self.modulus for r in self.residues)
        for r in normalized:
            if math.gcd(r, self.modulus) != 1:
                raise ValueError(f"residue {r} is not a unit mod {self.modulus}")
        object.__setattr__(self, "residues", normalized)

    @property
    def k(self) -> int:
        return len(self.residues)

    def multiset(self) -> tuple[int, ...]:
        return tuple(sorted(self.residues))


def distinct_permutation_count(constraint: ResidueConstraint) -> int:
    """M: number of distinct arrangements of the constraint multiset."""
    m = math.factorial(constraint.k)
    for r in set(constraint.residues):
        m //= math.factorial(constraint.residues.count(r))
    return m


def _require_coverage(table: SpfTable, x: int, k: int) -> None:
    need = x if k == 1 else x // 2 ** (k - 1)
    if need > table.limit:
        raise ValueError(
            f"table limit {table.limit} too small for x = {x}, k = {k} (need {need})"
        )


def _remove_one(values: tuple[int, ...], v: int) -> tuple[int, ...]:
    i = values.index(v)
    return values[:i] + values[i + 1 :]


@lru_cache(maxsize=None)
def _sorted_count(
    table: SpfTable,
    x: int,
    k: int,
    modulus: int,
    residues: tuple[int, ...] | None,
    strict: bool,
) -> int:
    """Sorted prime tuples with product <= x; strict means distinct primes."""
    primes = table.primes_list
    cidx = table.class_index(modulus) if residues is not None else None
    prime_arr = table.primes

    def last_count(lo: int, hi: int, remaining) -> int:
        if hi < 2:
            return 0
        if remaining is None:
            j1 = int(np.searchsorted(prime_arr, hi, side="right"))
            j0 = int(np.searchsorted(prime_arr, lo, side="right"))
            return j1 - j0
        return cidx.count(remaining[0], lo, hi)

    def rec(budget: int, depth: int, lo_idx: int, lo_val: int, remaining) -> int:
        if depth == 1:
            return last_count(lo_val, budget, remaining)
        total = 0
        i = lo_idx
        while i < len(primes):
            p = primes[i]
            if p**depth > budget:
                break
            child = remaining
            ok = True
            if remaining is not None:
                r = p % modulus
                if r in remaining:
                    child = _remove_one(remaining, r)
                else:
                    ok = False
            if ok:
                total += rec(
                    budget // p,
                    depth - 1,
                    i + 1 if strict else i,
                    p if strict else p - 1,
                    child,
                )
            i += 1
        return total

    return rec(x, k, 0, 1, residues)


def count_almost_primes(
    table: SpfTable,
    x: int,
    k: int,
    constraint: ResidueConstraint | None = None,
    mode: CountMode = CountMode.SQUAREFREE,
) -> int:
    """Number of n <= x with exactly k prime factors (distinct in SQUAREFREE
    mode, with multiplicity otherwise), optionally with the multiset of
    prime residues mod N equal to the constraint."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if x < 1:
        raise ValueError("x must be >= 1")
    _require_coverage(table, x, k)
    if constraint is None:
        return _sorted_count(table, x, k, 1, None, mode is CountMode.SQUAREFREE)
    if constraint.k != k:
        raise ValueError("constraint length must equal k")
    return _sorted_count(
        table,
        x,
        k,
        constraint.modulus,
        constraint.multiset(),
        mode is CountMode.SQUAREFREE,
    )


def count_almost_primes_positional(
    table: SpfTable,
    x: int,
    k: int,
    residues: tuple[int, ...],
    modulus: int,
    mode: CountMode = CountMode.SQUAREFREE,
) -> int:
    """Positional variant: the i-th smallest prime of n must lie in class
    residues[i] mod modulus (sorted with multiplicity in that mode)."""
    if k < 1 or len(residues) != k:
        raise ValueError("need one residue per position")
    if x < 1:
        raise ValueError("x must be >= 1")
    _require_coverage(table, x, k)
    res = tuple(r % modulus for r in residues)
    primes = table.primes_list
    cidx = table.class_index(modulus)
    strict = mode is CountMode.SQUAREFREE

    def rec(budget: int, depth: int, lo_idx: int, lo_val: int) -> int:
        pos = k - depth
        if depth == 1:
            if budget < 2:
                return 0
            return cidx.count(res[pos], lo_val, budget)
        want = res[pos]
        total = 0
        i = lo_idx
        while i < len(primes):
            p = primes[i]
            if p**depth > budget:
                break
            if p % modulus == want:
                total += rec(
                    budget // p,
                    depth - 1,
                    i + 1 if strict else i,
                    p if strict else p - 1,
                )
            i += 1
        return total

    return rec(x, k, 0, 1)


@lru_cache(maxsize=None)
def _ordered_stats(
    table: SpfTable,
    x: int,
    k: int,
    modulus: int,
    residues: tuple[int, ...],
) -> tuple[int, float, float]:
    """(ordered count, sum of log n, sum of 1/n) over ordered prime tuples
    with product <= x whose residue multiset matches `residues`."""
    primes = table.primes_list
    cidx = table.class_index(modulus)
    k_fact = math.factorial(k)
    fact = math.factorial

    count = 0
    log_sum = 0.0
    recip_sum = 0.0

    def rec(budget, depth, lo_idx, last_p, run_len, run_denom, prod, remaining):
        nonlocal count, log_sum, recip_sum
        if depth == 1:
            v = remaining[0]
            # repeating the previous prime extends its run
            if last_p is not None and last_p <= budget and last_p % modulus == v:
                w = k_fact // (run_denom * fact(run_len + 1))
                n_val = prod * last_p
                count += w
                log_sum += w * math.log(n_val)
                recip_sum += w / n_val
            lo = last_p if last_p is not None else 1
            weight = k_fact // (run_denom * fact(run_len))
            cnt, logs, recips = cidx.stats(v, lo, budget)
            if cnt:
                count += weight * cnt
                log_sum += weight * (cnt * math.log(prod) + logs)
                recip_sum += weight * (recips / prod)
            return
        i = lo_idx
        while i < len(primes):
            p = primes[i]
            if p**depth > budget:
                break
            r = p % modulus
            if r in remaining:
                if p == last_p:
                    nd, nr = run_denom, run_len + 1
                else:
                    nd, nr = run_denom * fact(run_len), 1
                rec(
                    budget // p,
                    depth - 1,
                    i,
                    p,
                    nr,
                    nd,
                    prod * p,
                    _remove_one(remaining, r),
                )
            i += 1

    if x >= 2:
        rec(x, k, 0, None, 0, 1, 1, residues)
    return count, log_sum, recip_sum


def ordered_tuple_count(
    table: SpfTable, x: int, k: int, constraint: ResidueConstraint
) -> int:
    """Ordered prime tuples (p1, ..., pk), product <= x, whose residue
    multiset equals the constraint multiset."""
    if k < 1 or constraint.k != k:
        raise ValueError("constraint length must equal k >= 1")
    if x < 1:
        raise ValueError("x must be >= 1")
    _require_coverage(table, x, k)
    return _ordered_stats(table, x, k, constraint.modulus, constraint.multiset())[0]


@dataclass(frozen=True)
class OrderedTupleSums:
    """Sums over the matched ordered tuples at a given x.

    error_term is phi(N)^k * log_sum - x * k * phi(N)^(k-1) * (sum of the
    level-(k-1) reciprocal sums over the distinct one-residue reductions of
    the constraint, the empty reduction contributing 1); its smallness
    against x * (loglog x)^(k-1) is what the identity checks control.
    """

    ordered_count: int
    log_sum: float
    reciprocal_sum: float
    error_term: float
    arrangement_count: int


def _distinct_reductions(multiset: tuple[int, ...]) -> list[tuple[int, ...]]:
    return [_remove_one(multiset, v) for v in sorted(set(multiset))]


def tuple_sums(
    table: SpfTable, x: float, k: int, constraint: ResidueConstraint
) -> OrderedTupleSums:
    """Ordered-tuple sums at real x >= 0 (enumeration thresholds use floor(x),
    the error term keeps the exact x)."""
    if k < 1 or constraint.k != k:
        raise ValueError("constraint length must equal k >= 1")
    if x < 0:
        raise ValueError("x must be >= 0")
    xf = math.floor(x)
    _require_coverage(table, max(xf, 1), k)
    n_mod = constraint.modulus
    ms = constraint.multiset()
    cnt, logs, recips = _ordered_stats(table, xf, k, n_mod, ms)
    phi = euler_phi(n_mod)
    if k == 1:
        reduced_recips = 1.0
    else:
        reduced_recips = 0.0
        for reduced in _distinct_reductions(ms):
            reduced_recips += _ordered_stats(table, xf, k - 1, n_mod, reduced)[2]
    error = phi**k * logs - x * k * phi ** (k - 1) * reduced_recips
    return OrderedTupleSums(
        ordered_count=cnt,
        log_sum=logs,
        reciprocal_sum=recips,
        error_term=error,
        arrangement_count=distinct_permutation_count(constraint),
    )


CHARACTER_SUM_X_LIMIT = 2000
CHARACTER_SUM_K_LIMIT = 3
IDENTITY_X_LIMIT = 10**4
IDENTITY_K_LIMIT = 3


def _iter_sorted_tuples(primes: list[int], x: int, k: int):
    """Yield nondecreasing prime tuples with product <= x."""
    stack: list[int] = []

    def rec(budget: int, depth: int, lo_idx: int):
        if depth == 0:
            yield tuple(stack)
            return
        i = lo_idx
        while i < len(primes):
            p = primes[i]
            if p**depth > budget:
                break
            stack.append(p)
            yield from rec(budget // p, depth - 1, i)
            stack.pop()
            i += 1

    yield from rec(x, k, 0)


def ordered_tuple_count_via_characters(
    table: SpfTable, x: int, k: int, constraint: ResidueConstraint
) -> float:
    """The ordered tuple count recomputed as the literal character sum
    (1/phi(N)^k) * sum over ordered tuples of sum over distinct constraint
    arrangements of prod_i sum_chi conj(chi(m_i)) chi(p_i).

    Kept at small scale; the identity with ordered_tuple_count is the point.
    """
    if not 1 <= x <= CHARACTER_SUM_X_LIMIT:
        raise ValueError(f"x must be in 1..{CHARACTER_SUM_X_LIMIT}")
    if not 1 <= k <= CHARACTER_SUM_K_LIMIT:
        raise ValueError(f"k must be in 1..{CHARACTER_SUM_K_LIMIT}")
    if constraint.k != k:
        raise ValueError("constraint length must equal k")
    _require_coverage(table, x, k)
    n_mod = constraint.modulus
    group = build_character_group(n_mod)
    arrangements = sorted(set(itertools.permutations(constraint.residues)))

    # literal inner sums over all characters, memoized per (m, p mod N)
    inner: dict[tuple[int, int], complex] = {}

    def inner_sum(m: int, r: int) -> complex:
        key = (m, r)
        val = inner.get(key)
        if val is None:
            val = 0j
            for idx in range(group.num_characters):
                val += group.value(idx, m).conjugate() * group.value(idx, r)
            inner[key] = val
        return val

    total = 0j
    for sorted_tuple in _iter_sorted_tuples(table.primes_list, x, k):
        for ordered in set(itertools.permutations(sorted_tuple)):
            residues = [p % n_mod for p in ordered]
            for arr in arrangements:
                prod = 1 + 0j
                for pos in range(k):
                    prod *= inner_sum(arr[pos], residues[pos])
                    if prod == 0:
                        break
                total += prod
    total /= euler_phi(n_mod) ** k
    if abs(total.imag) > 1e-6:
        raise ArithmeticError(f"character sum came out non-real: {total}")
    return total.real


def recursion_residual(
    table: SpfTable,
    identity: str,
    x: float,
    k: int,
    constraint: ResidueConstraint,
) -> float:
    """Relative residual |lhs - rhs| / max(1, |lhs|) of one of the three
    exact recursions, both sides evaluated independently.

    identity: "log_sum" (k * theta_{k+1}(x) = (k+1) * sum over p <= x of the
    collapsed-indicator theta_k(x/p) terms), "reciprocal_sum" (the analogous
    L recursion with a 1/p factor, L_0 = 1), or "error_term" (the f
    recursion, which carries a phi(N) factor instead of the indicator's
    normalization). The constraint has k+1 entries for log_sum/error_term
    and k entries for reciprocal_sum.
    """
    if identity not in ("log_sum", "reciprocal_sum", "error_term"):
        raise ValueError(f"unknown identity {identity!r}")
    if not 2 <= x <= IDENTITY_X_LIMIT:
        raise ValueError(f"x must be in 2..{IDENTITY_X_LIMIT}")
    if not 1 <= k <= IDENTITY_K_LIMIT:
        raise ValueError(f"k must be in 1..{IDENTITY_K_LIMIT}")
    size = k if identity == "reciprocal_sum" else k + 1
    if constraint.k != size:
        raise ValueError(f"identity {identity} needs a constraint of length {size}")
    n_mod = constraint.modulus
    phi = euler_phi(n_mod)
    ms = constraint.multiset()
    xf = math.floor(x)
    reductions = {v: _remove_one(ms, v) for v in set(ms)}

    if identity == "log_sum":
        lhs = k * tuple_sums(table, x, k + 1, constraint).log_sum
    elif identity == "reciprocal_sum":
        lhs = tuple_sums(table, x, k, constraint).reciprocal_sum
    else:
        lhs = k * tuple_sums(table, x, k + 1, constraint).error_term

    rhs = 0.0
    upto = int(prime_count(table, xf))
    for p in table.primes_list[:upto]:
        reduced = reductions.get(p % n_mod)
        if reduced is None:
            continue
        child = ResidueConstraint(n_mod, reduced) if reduced else None
        if identity == "log_sum":
            rhs += tuple_sums(table, x / p, k, child).log_sum
        elif identity == "reciprocal_sum":
            if k == 1:
                inner = 1.0
            else:
                inner = tuple_sums(table, x / p, k - 1, child).reciprocal_sum
            rhs += inner / p
        else:
            rhs += tuple_sums(table, x / p, k, child).error_term
    if identity == "log_sum":
        rhs *= k + 1
    elif identity == "error_term":
        rhs *= (k + 1) * phi

    return abs(lhs - rhs) / max(1.0, abs(lhs))


def trend_ratios(
    table: SpfTable, x: int, k: int, constraint: ResidueConstraint
) -> tuple[float, float]:
    """(log_sum ratio, reciprocal_sum ratio) against their leading-order
    sizes M/phi^k * k * x * (loglog x)^(k-1) and M/phi^k * (loglog x)^k.
    Reported, not asserted; drift toward 1 is slow."""
    if x < 16:
        raise ValueError("x must be >= 16 for the normalizations")
    sums = tuple_sums(table, x, k, constraint)
    phi = euler_phi(constraint.modulus)
    m_count = sums.arrangement_count
    llx = math.log(math.log(x))
    theta_main = (m_count / phi**k) * k * x * llx ** (k - 1)
    ell_main = (m_count / phi**k) * llx**k
    return sums.log_sum / theta_main, sums.reciprocal_sum / ell_main
