"""Acceptance criteria, one test per criterion, each printing a verdict line.

Slow optional paths (the n=5 covering radius, the n=15 coset-sign search)
are gated behind FLATWALSH_SLOW=1 / FLATWALSH_STRETCH=1.
"""

import json
import math
import time

import numpy as np
import pytest

from flatwalsh import (boolfun, charsums, cli, construct, discrepancy, gf2n)
from tests.conftest import RUN_SLOW, RUN_STRETCH
from tests.test_boolfun import oracle_field_spectrum, oracle_min_affine_distance

ROOT7 = math.sqrt(7.0)


def verdict(name, detail):
    print(f"ACCEPTANCE {name} PASS: {detail}")


# ---------------------------------------------------------------------------

def test_c1_exact_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    # Parseval on 1008 random sign tables across n = 1..12, exact integers
    for n in range(1, 13):
        batch = 1 - 2 * rng.integers(0, 2, (84, 1 << n)).astype(np.int64)
        coeffs = boolfun.fwht(batch)
        assert np.all((coeffs * coeffs).sum(axis=1) == 4 ** n)
    # spectral/Hamming equivalence on 100 random truth tables, n = 1..10
    for n in range(1, 11):
        ctx = gf2n.make_field(n)
        for _ in range(10):
            table = rng.integers(0, 2, 1 << n).astype(np.uint8)
            dist, _ = boolfun.affine_distance_profile(ctx, table)
            assert dist == oracle_min_affine_distance(ctx, table)
    # butterfly equals the quadratic schoolbook oracle for n <= 6
    for n in range(1, 7):
        ctx = gf2n.make_field(n)
        vals = (1 - 2 * rng.integers(0, 2, 1 << n)).astype(np.int8)
        assert np.array_equal(boolfun.field_transform(ctx, vals),
                              oracle_field_spectrum(n, ctx.modulus, vals))
    dt = time.perf_counter() - t0
    assert dt < 60
    verdict("C1", f"Parseval x1008, Hamming equivalence x100, direct oracle "
                  f"n<=6, all exact in {dt:.1f}s")


def test_c2_covering_radii():
    t0 = time.perf_counter()
    values = {n: boolfun.rho_exhaustive(n) for n in (1, 3, 4)}
    dt = time.perf_counter() - t0
    assert values == {1: 0, 3: 2, 4: 6}
    assert dt < 10
    note = f"rho(1)=0, rho(3)=2, rho(4)=6 in {dt:.1f}s"
    if RUN_SLOW:
        t0 = time.perf_counter()
        assert boolfun.rho_exhaustive(5) == 12
        note += f"; rho(5)=12 in {time.perf_counter() - t0:.0f}s"
    else:
        note += "; rho(5) skipped (set FLATWALSH_SLOW=1)"
    verdict("C2", note)


def test_c3_gauss_sums(field3, field9, field15):
    cpv8 = charsums.coset_psi_vector(field3, 7)
    for j in range(1, 7):
        val = charsums.gauss_sum(cpv8, j)
        assert min(abs(val - complex(-1, ROOT7)),
                   abs(val - complex(-1, -ROOT7))) < 1e-9
    assert charsums.QuadInt7(-2, 2).norm_sq() == 8
    assert charsums.QuadInt7(-2, -2).norm_sq() == 8

    cpv512 = charsums.coset_psi_vector(field9, 7)
    worst_cf = max(charsums.closed_form_match(cpv512, j, e=1, d=1, s=3)[1]
                   for j in range(1, 7))
    assert worst_cf < 1e-6

    r33 = charsums.davenport_hasse_check(field3, field9, 7)
    r35 = charsums.davenport_hasse_check(field3, field15, 7)
    assert len(r33.residuals) == 6 and r33.max_residual < 1e-6
    assert len(r35.residuals) == 6 and r35.max_residual < 1e-6
    verdict("C3", f"GF(8) sums = -1+-sqrt(-7), |G|^2=8 exact; closed form at "
                  f"n=9 worst rel {worst_cf:.1e}; lifting residuals "
                  f"{r33.max_residual:.1e} (s=3), {r35.max_residual:.1e} (s=5)")


def test_c4_decomposition_sweep():
    t0 = time.perf_counter()
    details = []
    for n in (9, 15):
        ctx = gf2n.make_field(n)
        cs = construct.make_coset_system(ctx, 7)
        cpv = charsums.coset_psi_vector(ctx, 7)
        rng = np.random.default_rng(n)
        h = (1 - 2 * rng.integers(0, 2, cs.h_size)).astype(np.int8)
        for g in (construct.default_g(7), construct.random_g(7, seed=n)):
            f = construct.assemble(cs, h, g)
            f1, f2 = construct.split(cs, h, g)
            c = boolfun.field_transform(ctx, f.values)
            c1 = boolfun.field_transform(ctx, f1.values)
            c2 = boolfun.field_transform(ctx, f2.values)
            assert np.array_equal(c, 1 + c1 + c2)
            rep = construct.me_sweep(cs, g, cpv)
            assert rep.ok
            details.append(f"n={n}: |E|max {rep.max_abs_error:.3f} <= "
                           f"eps*v {rep.error_bound:.3f}")
    dt = time.perf_counter() - t0
    assert dt < 30
    verdict("C4", "; ".join(dict.fromkeys(details)) + f"; total {dt:.1f}s")


def test_c5_sign_selection():
    details = []
    for n in (9, 15):
        ctx = gf2n.make_field(n)
        p = discrepancy.make_sign_problem(ctx, 7)
        sol = discrepancy.solve_localsearch(p, restarts=8, budget=2000, seed=2024)
        assert sol.seed == 2024
        assert discrepancy.certify(sol, p)
        assert discrepancy.achieved_value(p, sol.u) == sol.achieved
        details.append(f"(n={n}) achieved {sol.achieved} <= {sol.bound:.1f}")
    verdict("C5", "seed 2024, 8 restarts: " + ", ".join(details))


def test_c6_balanced_pipeline(tmp_path):
    details = []
    for n in (9, 15):
        table = tmp_path / f"bal{n}.tt"
        report = tmp_path / f"bal{n}.json"
        code = cli.main(["construct", "--n", str(n), "--v", "7", "--seed", "6",
                         "--restarts", "4", "--budget", "500", "--balanced",
                         "--out-table", str(table), "--out-report", str(report)])
        assert code == 0
        f = boolfun.read_table(table)
        assert int(f.values.astype(np.int64).sum()) == 0
        rep = json.loads(report.read_text())
        cons = rep["construction"]
        assert cons["h_sum"] == -1
        before = cons["h_sum_before"]
        assert cons["balance_flips"] <= math.ceil(abs(before + 1) / 2)
        details.append(f"n={n}: sum(f)=0, {cons['balance_flips']} flips "
                       f"from sum(h)={before}")
    verdict("C6", "; ".join(details))


def test_c7_lift_chain():
    f = boolfun.sign_function([1, 1, 1, -1])
    for _ in range(3):
        f = boolfun.lift_two(f)
    assert f.n == 8
    assert int(np.abs(boolfun.fwht(f.values)).max()) == 2 ** 4

    f = boolfun.sign_function([1, -1])
    tops = []
    for _ in range(3):
        f = boolfun.lift_two(f)
        top = int(np.abs(boolfun.fwht(f.values)).max())
        assert top * top == 2 ** (f.n + 1)
        tops.append(top)
    verdict("C7", f"bent lift reaches n=8 with max coefficient 16 = 2^4; "
                  f"sqrt(2) chain keeps top^2 = 2^(n+1) at n=3,5,7 ({tops})")


def test_c8_s_search():
    s, worst = charsums.find_good_s(1, 0.2, 10 ** 5)
    assert s == 13
    theta = math.atan2(ROOT7, -1.0)
    for t in range(1, 13, 2):
        assert abs(math.remainder(t * theta, 2 * math.pi)) > 0.2
    grid = [3.2, 1.6, 0.8, 0.4, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005]
    found = [charsums.find_good_s(1, eps, 10 ** 5)[0] for eps in grid]
    assert found == sorted(found)
    verdict("C8", f"s=13 optimal for eps=0.2 (worst angle {worst:.4f}); "
                  f"monotone over the 10-point grid {found}")


def test_c9_measured_survey():
    # The asymptotic target 1 + 12*sqrt(log(2v)/v) is vacuous at these v
    # (8.37 at v=7); only exact identities are asserted and the measured
    # maxima are reported.
    rows = []
    for n, v, trials in ((9, 7, 64), (15, 7, 64), (21, 7, 4), (21, 49, 4)):
        ctx = gf2n.make_field(n)
        cs = construct.make_coset_system(ctx, v)
        p = discrepancy.make_sign_problem(ctx, v)
        if n <= 15:
            sol = discrepancy.solve_localsearch(p, restarts=4, budget=500, seed=9)
        else:
            sol = discrepancy.solve_random(p, trials=trials, seed=9)
        g = construct.default_g(v)
        rep = construct.measure_construction(cs, sol.u, g)
        f = construct.assemble(cs, sol.u, g)
        f1, f2 = construct.split(cs, sol.u, g)
        c = boolfun.field_transform(ctx, f.values)
        c1 = boolfun.field_transform(ctx, f1.values)
        c2 = boolfun.field_transform(ctx, f2.values)
        assert np.array_equal(c, 1 + c1 + c2)
        assert math.isfinite(rep.max_f_hat)
        assert rep.max_f_hat <= 2 ** (-n / 2) + rep.max_f1_hat + rep.max_f2_hat + 1e-12
        rows.append(f"(n={n}, v={v}): max|f^|={rep.max_f_hat:.3f} "
                    f"[target {rep.proposition_bound:.2f}]")
    verdict("C9", "measured, not asserted: " + "; ".join(rows))


@pytest.mark.skipif(not RUN_STRETCH, reason="set FLATWALSH_STRETCH=1 to run")
def test_c9_stretch_coset_sign_search():
    # Index-217 coset functions at n=15: published constructions reach a
    # maximum unnormalized coefficient of 216, beating the 256 = sqrt(2)
    # level; plain restarts report whatever they find, no hard target.
    ctx = gf2n.make_field(15)
    res = discrepancy.coset_sign_search(ctx, 217, restarts=4, budget=4000, seed=15)
    f = discrepancy.coset_table(ctx, 217, res.signs)
    spectrum = boolfun.field_transform(ctx, f.values)
    assert int(np.abs(spectrum).max()) == res.achieved
    verdict("C9-stretch", f"best max coefficient {res.achieved} "
                          f"(known best 216, sqrt(2) level 256)")
