"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (visible even without -s) and then
asserts. Run directly with `python tests/test_acceptance.py` for just the summary.
"""

import random
import sys
import time
from fractions import Fraction

import pytest

from orbihh.builtins import STANDARD_BUILTINS
from orbihh.arith import POSITIVITY_TOL, SqrtPosReal
from orbihh.linalg import Mat, det, pfaffian
from orbihh.symplectic import appendix_c_suite
from helpers import context
from oracles import (
    PairingOracle,
    class_codim_counts,
    diagonal_invariant_monomials,
    graded_group_algebra,
    invariant_dims_by_averaging,
)

SYMPLECTIC_BUILTINS = [n for n in STANDARD_BUILTINS if context(n).symp is not None]


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, elapsed, detail=""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  ({elapsed:.1f}s)"
        if detail:
            line += f"  {detail}"
        with capsys.disabled():
            print("\n" + line)
        return ok

    return emit


def test_criterion_01_cocycle_values(verdict):
    start = time.perf_counter()
    s3 = context("sym_n:3")
    g, h = s3.by_label("(12)"), s3.by_label("(23)")
    both = (s3.symp.cocycle(g, h), s3.symp.cocycle(h, g))
    s3_ok = any(v == Fraction(3, 2) for v in both)

    s4 = context("sym_n:4")
    a1 = s4.symp.cocycle(s4.by_label("(12)"), s4.by_label("(234)"))
    a2 = s4.symp.cocycle(s4.by_label("(123)"), s4.by_label("(34)"))
    s4_ok = a1 == 1 and a2 == Fraction(4, 3)
    elapsed = time.perf_counter() - start
    ok = s3_ok and s4_ok and elapsed < 10
    detail = f"S3 a((12),(23)), a((23),(12)) = {both[0]}, {both[1]} (want 3/2); S4 = {a1}, {a2} (want 1, 4/3)"
    verdict(1, ok, elapsed, detail)
    assert s3_ok, detail
    assert s4_ok, detail
    assert elapsed < 10


def test_criterion_02_abelian_triviality(verdict):
    start = time.perf_counter()
    bad = []
    count = 0
    for n in (2, 3, 4, 6):
        ctx = context(f"cyclic:{n}")
        for key, a in ctx.symp.cocycle_table().items():
            count += 1
            if a != 1:
                bad.append((n, key, str(a)))
    elapsed = time.perf_counter() - start
    ok = not bad and count > 0 and elapsed < 5
    verdict(2, ok, elapsed, f"{count} cocycle values, {len(bad)} differ from 1")
    assert not bad
    assert elapsed < 5


def test_criterion_03_coboundary(verdict):
    start = time.perf_counter()
    failures = []
    pairs = 0
    k4_time = 0.0
    for name in ("sym_n:2", "sym_n:3", "sym_n:4", "weyl_b2"):
        t0 = time.perf_counter()
        symp = context(name).symp
        grp = symp.group
        for (g, h), a in symp.cocycle_table().items():
            pairs += 1
            gh = grp.mult[g][h]
            if a * a * symp.lambda_square(g) * symp.lambda_square(h) != symp.lambda_square(gh):
                failures.append((name, g, h, "square"))
            if not a.is_real() or a.embed().real <= POSITIVITY_TOL:
                failures.append((name, g, h, "positivity"))
        if name == "sym_n:4":
            k4_time = time.perf_counter() - t0
    elapsed = time.perf_counter() - start
    ok = not failures and k4_time < 60
    verdict(3, ok, elapsed, f"{pairs} transverse pairs, {len(failures)} failures, k=4 in {k4_time:.1f}s")
    assert not failures
    assert k4_time < 60


def test_criterion_04_pair_conditions(verdict):
    start = time.perf_counter()
    split = {}
    total = 0
    for name in STANDARD_BUILTINS:
        ctx = context(name)
        n = len(ctx.group)
        bad = 0
        for g in range(n):
            for h in range(n):
                total += 1
                if not ctx.loci.dualrels_battery(g, h).all_equal:
                    bad += 1
        if bad:
            split[name] = f"{bad}/{n * n}"
    elapsed = time.perf_counter() - start
    ok = not split and elapsed < 30
    detail = f"{total} pairs; groups with disagreeing conditions: {split or 'none'}"
    verdict(4, ok, elapsed, detail)
    assert not split, detail
    assert elapsed < 30


def _fiber_associativity_failures(fiber) -> int:
    basis = list(fiber.basis())
    table = {}
    for x in basis:
        for y in basis:
            gh, prod = fiber.multiply_basis(*x, *y)
            table[(x, y)] = {(gh, m): c for m, c in prod.items()}

    def times(coeffs, z=None, x=None):
        out = {}
        for b, c in coeffs.items():
            for k, v in table[(b, z) if z is not None else (x, b)].items():
                out[k] = out[k] + c * v if k in out else c * v
        return {k: v for k, v in out.items() if v}

    bad = 0
    for x in basis:
        for y in basis:
            xy = table[(x, y)]
            for z in basis:
                if times(xy, z=z) != times(table[(y, z)], x=x):
                    bad += 1
    return bad


def test_criterion_05_associativity(verdict):
    start = time.perf_counter()
    results = {}
    for name in ("minus_one:2", "cyclic:4", "sym_n:3", "reflection"):
        ctx = context(name)
        results[name] = (len(ctx.sa.associativity_failures()), _fiber_associativity_failures(ctx.fiber))
    elapsed = time.perf_counter() - start
    clean = all(r == (0, 0) for r in results.values())
    ok = clean and elapsed < 120
    verdict(5, ok, elapsed, "failures (SA, fiber): " + ", ".join(f"{k} {v}" for k, v in results.items()))
    assert clean, results
    assert elapsed < 120


def test_criterion_06_product_equivalence(verdict):
    start = time.perf_counter()
    mismatches = {}
    pairs = 0
    for name in STANDARD_BUILTINS:
        fiber = context(name).fiber
        basis = list(fiber.basis())
        bad = 0
        for x in basis:
            for y in basis:
                pairs += 1
                if fiber.multiply_basis(*x, *y) != fiber.alternate_multiply_basis(*x, *y):
                    bad += 1
        if bad:
            mismatches[name] = bad
    elapsed = time.perf_counter() - start
    verdict(6, not mismatches, elapsed, f"{pairs} basis pairs, mismatches: {mismatches or 'none'}")
    assert not mismatches


def test_criterion_07_subspace_suite(verdict):
    start = time.perf_counter()
    trials = appendix_c_suite(0, 50)
    failed = [t.seed for t in trials if not t.passed]
    rng = random.Random(7)
    pf_bad = 0
    for _ in range(50):
        n = 2 * rng.randint(1, 3)
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = rng.randint(-5, 5)
                rows[j][i] = -rows[i][j]
        m = Mat(rows)
        if pfaffian(m) ** 2 != det(m):
            pf_bad += 1
    elapsed = time.perf_counter() - start
    ok = not failed and not pf_bad and elapsed < 60
    verdict(7, ok, elapsed, f"{len(trials)} trials, {len(failed)} failed; Pf^2=det failures {pf_bad}")
    assert not failed
    assert not pf_bad
    assert elapsed < 60


def test_criterion_08_transparent(verdict):
    start = time.perf_counter()
    problems = []
    one = SqrtPosReal.of(1)
    for name in ("sym_n:3", "minus_one:2"):
        ctx = context(name)
        rep = ctx.symp.transparent_check()
        if not rep.passed:
            problems.append((name, rep.failures[:3]))
        gr = graded_group_algebra(ctx.group)
        for key, val in ctx.symp.rescaled_constants().items():
            mine = 0 if val == 0 else (1 if val == one else None)
            if mine != gr[key]:
                problems.append((name, key))
    elapsed = time.perf_counter() - start
    verdict(8, not problems, elapsed, f"{len(problems)} mismatches against gr C[G]")
    assert not problems


def test_criterion_09_dimensions(verdict):
    start = time.perf_counter()
    problems = []
    m2 = context("minus_one:2")
    if m2.fiber.invariant_dims().as_list() != [1, 0, 2]:
        problems.append("invariant_dims(minus_one:2)")
    if invariant_dims_by_averaging(m2) != {0: 1, 2: 2}:
        problems.append("averaging oracle on minus_one:2")
    series = m2.fiber.molien_bigraded(6).series[0]
    diagonals = [[m2.group.matrix(g)[i, i] for i in range(2)] for g in range(2)]
    if series[:5] != [1, 0, 3, 0, 5] or series != [diagonal_invariant_monomials(diagonals, n) for n in range(7)]:
        problems.append("molien series of minus_one:2")
    for name in STANDARD_BUILTINS:
        fiber = context(name).fiber
        slice0 = {d: v[0] for d, v in fiber.molien_bigraded(2).series.items() if v[0]}
        if slice0 != fiber.invariant_dims().dims:
            problems.append(f"molien slice {name}")
    for name in SYMPLECTIC_BUILTINS:
        ctx = context(name)
        orb = ctx.fiber.orbifold_dims(ctx.symp.form.J)
        if orb != ctx.fiber.invariant_dims(empty_monomial_only=True) or orb.dims != class_codim_counts(ctx.group):
            problems.append(f"orbifold {name}")
    elapsed = time.perf_counter() - start
    verdict(9, not problems, elapsed, f"problems: {problems or 'none'}")
    assert not problems


def test_criterion_10_oracle_equivalence(verdict):
    start = time.perf_counter()
    mismatches = {}
    pairs = 0
    for name in STANDARD_BUILTINS:
        ctx = context(name)
        if ctx.group.dim > 8:
            continue
        oracle = PairingOracle(ctx)
        n = len(ctx.group)
        bad = 0
        for g in range(n):
            for h in range(n):
                gh, prod = oracle.product(g, 0, h, 0)
                c = ctx.sa.sa_constant(g, h)
                if prod != ({0: c} if c else {}):
                    bad += 1
        basis = list(ctx.fiber.basis())
        for x in basis:
            for y in basis:
                pairs += 1
                if oracle.product(*x, *y) != ctx.fiber.multiply_basis(*x, *y):
                    bad += 1
        if bad:
            mismatches[name] = bad
    elapsed = time.perf_counter() - start
    verdict(10, not mismatches, elapsed, f"{pairs} basis pairs, mismatches: {mismatches or 'none'}")
    assert not mismatches


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
