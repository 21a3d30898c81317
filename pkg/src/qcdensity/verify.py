"""Self-check suites behind the CLI verify subcommand.

Each suite re-derives a family of identities by two independent routes and
compares exactly (or within the stated float tolerance). One CheckResult is
emitted per family; when a family fails, the detail line carries the first
counterexample found.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .almostprime import (
    CountMode,
    ResidueConstraint,
    count_almost_primes,
    ordered_tuple_count,
    recursion_residual,
)
from .arith import kronecker
from .characters import build_character_group, orthogonality_sum
from .quadratic import (
    QuadraticForm,
    count_roots_bruteforce,
    count_roots_formula,
    has_max_root_count,
)
from .residues import class_count, residue_classes_constructive, residue_classes_direct
from .sieve import SpfTable, factorize, prime_count

ORTHOGONALITY_TOLERANCE = 1e-9
RESIDUAL_TOLERANCE = 1e-9

SUITES = ("orthogonality", "recursions", "residues", "quadratic", "sandwich")

RESIDUE_DISCRIMINANTS = (2, -2, 3, -3, 5, -5, 6, -7, 10, 13, 15, -20, 21)

# one form per discriminant in the oracle set {5, -3, 13, -20, 21, -7}
QUADRATIC_FORMS = (
    QuadraticForm(1, -1),
    QuadraticForm(1, 1),
    QuadraticForm(1, -3),
    QuadraticForm(0, 5),
    QuadraticForm(1, -5),
    QuadraticForm(1, 2),
)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def _units(modulus: int) -> list[int]:
    if modulus == 1:
        return [0]
    return [u for u in range(1, modulus) if math.gcd(u, modulus) == 1]


def check_orthogonality(max_modulus: int = 60) -> list[CheckResult]:
    """Sum over characters of conj(chi(m)) chi(n) against phi(N) [m == n],
    for every modulus up to max_modulus and every unit pair."""
    results = []
    for n_mod in range(1, max_modulus + 1):
        group = build_character_group(n_mod)
        phi = group.group_order
        units = _units(n_mod)
        worst = 0.0
        bad = None
        for m in units:
            for n in units:
                expected = phi if m == n else 0
                err = abs(orthogonality_sum(group, m, n) - expected)
                if err > worst:
                    worst, bad = err, (m, n)
            if n_mod > 1:
                # non-unit second argument must give exactly 0
                err = abs(orthogonality_sum(group, m, 0))
                if err > worst:
                    worst, bad = err, (m, 0)
        passed = worst < ORTHOGONALITY_TOLERANCE
        detail = f"phi={phi} max error {worst:.2e}"
        if not passed:
            detail += f" at pair {bad}"
        results.append(CheckResult("orthogonality", f"N={n_mod}", passed, detail))
    return results


def check_recursions(table: SpfTable, x_max: int = 10**4) -> list[CheckResult]:
    """Both sides of the three tuple-sum recursions evaluated independently;
    the identities are exact, so residuals must sit at float-noise level."""
    xs = [x for x in (100, 1000, 10**4) if x <= x_max]
    if not xs:
        raise ValueError("x_max must be at least 100 for the recursion grid")
    results = []
    for n_mod in (4, 5):
        units = _units(n_mod)
        for identity in ("log_sum", "reciprocal_sum", "error_term"):
            for k in (1, 2):
                size = k if identity == "reciprocal_sum" else k + 1
                worst = 0.0
                bad = None
                tuples = 0
                for ms in itertools.combinations_with_replacement(units, size):
                    constraint = ResidueConstraint(n_mod, ms)
                    for x in xs:
                        r = recursion_residual(table, identity, x, k, constraint)
                        tuples += 1
                        if r > worst:
                            worst, bad = r, (x, ms)
                passed = worst < RESIDUAL_TOLERANCE
                detail = f"max residual {worst:.2e} over {tuples} cases"
                if not passed:
                    detail += f" at x={bad[0]} m={bad[1]}"
                results.append(
                    CheckResult(
                        "recursions",
                        f"{identity} N={n_mod} k={k}",
                        passed,
                        detail,
                    )
                )
    return results


def check_residues(table: SpfTable) -> list[CheckResult]:
    """Direct and constructive class sets must agree exactly, have size
    phi(Q)/2 each, partition the units mod Q, and predict kronecker(D, p)
    for every prime p up to 10^5 not dividing 2D."""
    results = []
    p_max = min(10**5, table.limit)
    upto = prime_count(table, p_max)
    primes = table.primes_list[:upto]
    for d in RESIDUE_DISCRIMINANTS:
        problems = []
        plus = residue_classes_direct(d, 1)
        minus = residue_classes_direct(d, -1)
        if plus.classes != residue_classes_constructive(d, 1).classes:
            problems.append("constructive mismatch at eps=+1")
        if minus.classes != residue_classes_constructive(d, -1).classes:
            problems.append("constructive mismatch at eps=-1")
        expected = class_count(d)
        if len(plus.classes) != expected or len(minus.classes) != expected:
            problems.append(
                f"sizes {len(plus.classes)}/{len(minus.classes)} != {expected}"
            )
        q = plus.modulus
        plus_set, minus_set = set(plus.classes), set(minus.classes)
        if plus_set & minus_set:
            problems.append("sign sets overlap")
        if plus_set | minus_set != set(_units(q)):
            problems.append("sign sets do not cover the units")
        checked = 0
        for p in primes:
            if p == 2 or d % p == 0:
                continue
            checked += 1
            member = p % q
            expected_set = plus_set if kronecker(d, p) == 1 else minus_set
            if member not in expected_set:
                problems.append(f"periodicity fails at p={p}")
                break
        passed = not problems
        detail = (
            f"Q={q} size={expected}, {checked} primes checked"
            if passed
            else "; ".join(problems)
        )
        results.append(CheckResult("residues", f"D={d}", passed, detail))
    return results


def check_quadratic(table: SpfTable, n_max: int = 5000) -> list[CheckResult]:
    """Discriminant formula against the full scan on every odd squarefree
    modulus coprime to the discriminant, plus the full-root-count flag."""
    results = []
    n_max = min(n_max, table.limit)
    for form in QUADRATIC_FORMS:
        d = form.discriminant
        problems = []
        checked = 0
        for n in range(1, n_max + 1, 2):
            fi = factorize(table, n)
            if not fi.is_squarefree():
                continue
            if any(d % p == 0 for p, _ in fi.factors):
                continue
            checked += 1
            brute = count_roots_bruteforce(form, n)
            formula = count_roots_formula(form, fi)
            if formula != brute:
                problems.append(f"count mismatch at n={n}: {formula} != {brute}")
                break
            if has_max_root_count(form, fi) != (brute == 2 ** len(fi.factors)):
                problems.append(f"full-root flag wrong at n={n}")
                break
        passed = not problems
        detail = (
            f"{checked} moduli <= {n_max} compared"
            if passed
            else "; ".join(problems)
        )
        results.append(CheckResult("quadratic", f"D={d}", passed, detail))
    return results


def _coprime_almost_counts(
    table: SpfTable, x: int, modulus: int, k_max: int
) -> tuple[list[int], list[int]]:
    """(squarefree, with-multiplicity) k-almost-prime counts over n <= x
    coprime to the modulus, by direct factorization."""
    squarefree = [0] * (k_max + 1)
    multiplicity = [0] * (k_max + 1)
    for n in range(2, x + 1):
        if math.gcd(n, modulus) != 1:
            continue
        fi = factorize(table, n)
        big_omega = sum(e for _, e in fi.factors)
        if big_omega <= k_max:
            multiplicity[big_omega] += 1
            if big_omega == len(fi.factors):
                squarefree[big_omega] += 1
    return squarefree, multiplicity


def check_sandwich(table: SpfTable, x_max: int = 2000) -> list[CheckResult]:
    """For every constraint multiset: k! (squarefree count) <= ordered count
    <= k! (with-multiplicity count), with equality throughout when the
    residues are pairwise distinct; and the multiset counts partition the
    k-almost-primes coprime to N."""
    xs = [x for x in (100, 500, 2000) if x <= x_max]
    if not xs:
        raise ValueError("x_max must be at least 100 for the sandwich grid")
    results = []
    for n_mod in (1, 3, 4, 5, 8, 12):
        units = _units(n_mod)
        reference = {x: _coprime_almost_counts(table, x, n_mod, 3) for x in xs}
        for k in (1, 2, 3):
            kf = math.factorial(k)
            problems = []
            cases = 0
            for x in xs:
                total_sf = 0
                total_wm = 0
                for ms in itertools.combinations_with_replacement(units, k):
                    constraint = ResidueConstraint(n_mod, ms)
                    sf = count_almost_primes(
                        table, x, k, constraint, CountMode.SQUAREFREE
                    )
                    wm = count_almost_primes(
                        table, x, k, constraint, CountMode.WITH_MULTIPLICITY
                    )
                    ordered = ordered_tuple_count(table, x, k, constraint)
                    cases += 1
                    total_sf += sf
                    total_wm += wm
                    if not kf * sf <= ordered <= kf * wm:
                        problems.append(f"sandwich fails at x={x} m={ms}")
                        break
                    if len(set(ms)) == k and not kf * sf == ordered == kf * wm:
                        problems.append(f"distinct-case equality fails at x={x} m={ms}")
                        break
                else:
                    sf_ref, wm_ref = reference[x]
                    if total_sf != sf_ref[k] or total_wm != wm_ref[k]:
                        problems.append(
                            f"partition fails at x={x}: "
                            f"{total_sf}/{sf_ref[k]} sf, {total_wm}/{wm_ref[k]} wm"
                        )
                if problems:
                    break
            passed = not problems
            detail = (
                f"{cases} multiset cases over x in {xs}"
                if passed
                else "; ".join(problems)
            )
            results.append(CheckResult("sandwich", f"N={n_mod} k={k}", passed, detail))
    return results


def run_suite(table: SpfTable, suite: str, x_max: int = 2000) -> list[CheckResult]:
    """Run one named suite (or all of them) against the given table."""
    if suite == "all":
        results = []
        for name in SUITES:
            results.extend(run_suite(table, name, x_max))
        return results
    if suite == "orthogonality":
        return check_orthogonality()
    if suite == "recursions":
        return check_recursions(table, min(x_max, 10**4))
    if suite == "residues":
        return check_residues(table)
    if suite == "quadratic":
        return check_quadratic(table)
    if suite == "sandwich":
        return check_sandwich(table, min(x_max, 2000))
    raise ValueError(f"unknown suite {suite!r}")


def format_report(results: list[CheckResult]) -> str:
    lines = [
        f"{'PASS' if r.passed else 'FAIL'} [{r.suite}] {r.name}: {r.detail}"
        for r in results
    ]
    failed = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
