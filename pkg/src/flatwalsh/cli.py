"""Command-line surface for the construction and verification pipeline.

Subcommands:
    construct   build a coset-structured function, write table + JSON report
    verify      run the identity suites (fast/full), optionally check a table
    gauss       list the order-v Gauss sums over GF(2^n)
    search-s    find the smallest odd lift degree with small Gauss angles
    rho         exhaustive covering radius for tiny n
    spectrum    integer Walsh spectrum of a stored truth table

Every JSON report embeds the manifest that produced it. Exit codes:
0 success, 2 invalid parameters or unreadable input, 3 failed identity
check. Output files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__, boolfun, charsums, construct, discrepancy, gf2n

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IDENTITY = 3


def _manifest(command: str, parameters: dict, inputs: list[str],
              outputs: list[str]) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "inputs": inputs,
        "outputs": outputs,
        "version": __version__,
    }


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".flatwalsh-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if out:
        _write_atomic(out, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

def _validate_construct_params(n: int, v: int) -> int:
    m = charsums.ord_check(v)
    if n % 2 == 0:
        raise ValueError(f"n={n} is even; the construction targets odd n "
                         f"(even degrees already reach the optimum)")
    if n % m != 0 or (n // m) % 2 == 0:
        raise ValueError(f"n={n} must be an odd multiple of ord_{v}(2) = {m} "
                         f"so that order-{v} characters exist with the "
                         f"closed-form Gauss sums")
    if n > gf2n.MAX_DEGREE:
        raise ValueError(f"n={n} exceeds the table cap {gf2n.MAX_DEGREE}")
    return m


def cmd_construct(args) -> int:
    t0 = time.perf_counter()
    _validate_construct_params(args.n, args.v)
    out_table = args.out_table or f"construct_n{args.n}_v{args.v}_seed{args.seed}.tt"
    out_report = args.out_report or f"construct_n{args.n}_v{args.v}_seed{args.seed}.json"
    timings = {}

    t = time.perf_counter()
    ctx = gf2n.make_field(args.n)
    timings["field_s"] = time.perf_counter() - t

    cs = construct.make_coset_system(ctx, args.v)
    if args.g_mode == "random":
        g = construct.random_g(args.v, seed=args.seed)
    else:
        g = construct.default_g(args.v)

    t = time.perf_counter()
    problem = discrepancy.make_sign_problem(ctx, args.v)
    if args.solver == "random":
        sol = discrepancy.solve_random(problem, trials=args.trials, seed=args.seed)
    else:
        sol = discrepancy.solve_localsearch(problem, restarts=args.restarts,
                                            budget=args.budget, seed=args.seed)
    timings["solve_s"] = time.perf_counter() - t

    h = sol.u
    h_sum_before = int(np.asarray(h, dtype=np.int64).sum())
    flips = 0
    if args.balanced:
        h_balanced = construct.balance_h(h)
        flips = int(np.count_nonzero(h_balanced != h))
        h = h_balanced

    f = construct.assemble(cs, h, g)
    report = construct.measure_construction(cs, h, g)
    if args.balanced:
        assert boolfun.is_balanced(f), "balanced construction failed to balance"

    _write_atomic(out_table, boolfun.format_table(f))
    timings["total_s"] = time.perf_counter() - t0

    payload = {
        "manifest": _manifest("construct", {
            "n": args.n, "v": args.v, "seed": args.seed,
            "solver": args.solver, "restarts": args.restarts,
            "budget": args.budget, "trials": args.trials,
            "g_mode": args.g_mode, "balanced": args.balanced,
        }, [], [out_table, out_report]),
        "construction": {
            "n": args.n,
            "v": args.v,
            "modulus": ctx.modulus,
            "generator": ctx.generator,
            "g": [int(x) for x in g.values],
            "h_hex": boolfun.pack_signs_hex(h),
            "h_sum": int(np.asarray(h, dtype=np.int64).sum()),
            "h_sum_before": h_sum_before,
            "balance_flips": flips,
        },
        "spectrum_summary": {
            "max_f_hat": report.max_f_hat,
            "max_f1_hat": report.max_f1_hat,
            "max_f2_hat": report.max_f2_hat,
            "epsilon_measured": report.epsilon_measured,
            "spencer_bound": report.spencer_bound,
            "proposition_bound": report.proposition_bound,
        },
        "solver": {
            "name": args.solver,
            "achieved": sol.achieved,
            "bound": sol.bound,
            "certified": discrepancy.certify(sol, problem),
            "seed": sol.seed,
        },
        "timings": timings,
    }
    _emit(payload, out_report)
    print(f"wrote {out_table} and {out_report}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _check_field_tables():
    ctx = gf2n.make_field(9)
    counts = np.bincount(ctx.dlog[1:], minlength=ctx.group_order)
    if not np.all(counts == 1):
        return False, "dlog is not a bijection"
    rng = np.random.default_rng(0)
    for _ in range(200):
        a, b = (int(x) for x in rng.integers(1, ctx.order, 2))
        lhs = int(ctx.dlog[gf2n.mul(ctx, a, b)])
        rhs = (int(ctx.dlog[a]) + int(ctx.dlog[b])) % ctx.group_order
        if lhs != rhs:
            return False, f"dlog homomorphism fails at ({a}, {b})"
    ones = int(ctx.trace_bit.sum())
    if ones != ctx.order // 2:
        return False, f"trace takes value 1 on {ones} elements, expected {ctx.order // 2}"
    return True, "dlog bijective and multiplicative, trace balanced"


def _check_parseval():
    rng = np.random.default_rng(1)
    for n in (4, 8, 10):
        batch = 1 - 2 * rng.integers(0, 2, (200, 1 << n)).astype(np.int64)
        coeffs = boolfun.fwht(batch)
        if not np.all((coeffs * coeffs).sum(axis=1) == 4 ** n):
            return False, f"Parseval sum != 4^{n} for a +-1 table"
    return True, "sum of squared coefficients is 4^n on 600 random tables"


def _check_fwht_direct():
    ctx = gf2n.make_field(4)
    rng = np.random.default_rng(2)
    for _ in range(5):
        vals = 1 - 2 * rng.integers(0, 2, ctx.order).astype(np.int64)
        if not np.array_equal(boolfun.field_transform(ctx, vals),
                              boolfun.field_transform_direct(ctx, vals)):
            return False, "butterfly and direct transforms disagree"
    return True, "butterfly equals the quadratic direct sum at n=4"


def _check_involution():
    ctx = gf2n.make_field(6)
    rng = np.random.default_rng(3)
    vals = 1 - 2 * rng.integers(0, 2, ctx.order).astype(np.int64)
    twice = boolfun.field_transform(ctx, boolfun.field_transform(ctx, vals))
    if not np.array_equal(twice, vals * ctx.order):
        return False, "applying the transform twice did not return 2^n * f"
    return True, "transform is a 2^n-scaled involution at n=6"


def _check_gauss_gf8():
    ctx = gf2n.make_field(3)
    cpv = charsums.coset_psi_vector(ctx, 7)
    if charsums.gauss_sum(cpv, 0) != -1:
        return False, "trivial-character sum is not -1"
    root7 = math.sqrt(7.0)
    for j in range(1, 7):
        val = charsums.gauss_sum(cpv, j)
        if min(abs(val - complex(-1, root7)), abs(val - complex(-1, -root7))) > 1e-9:
            return False, f"G(chi^{j}) is not -1 +- sqrt(-7)"
    if (charsums.QuadInt7(-2, 2).norm_sq() != 8
            or charsums.QuadInt7(-2, -2).norm_sq() != 8):
        return False, "quadratic-integer magnitude of -1 +- sqrt(-7) is not 8"
    return True, "all six sums equal -1 +- sqrt(-7); |G|^2 = 8 exactly"


def _check_gauss_gf512():
    ctx = gf2n.make_field(9)
    cpv = charsums.coset_psi_vector(ctx, 7)
    worst = 0.0
    for j in range(1, 7):
        _, rel = charsums.closed_form_match(cpv, j, e=1, d=1, s=3)
        worst = max(worst, rel)
    if worst > 1e-6:
        return False, f"closed form misses brute force by {worst:.2e}"
    return True, f"closed form matches brute force, worst rel {worst:.2e}"


def _check_davenport_hasse(n_big: int):
    small = gf2n.make_field(3)
    big = gf2n.make_field(n_big)
    rep = charsums.davenport_hasse_check(small, big, 7)
    if rep.max_residual > 1e-6:
        return False, f"lifting residual {rep.max_residual:.2e} at s={rep.s}"
    return True, (f"s={rep.s}: all {rep.v - 1} characters lift, "
                  f"worst rel {rep.max_residual:.2e}, twist {rep.twist}")


def _check_orders():
    for v, m in ((7, 3), (49, 21), (343, 147)):
        if charsums.ord_check(v) != m:
            return False, f"ord_{v}(2) != {m}"
    return True, "ord_(7^e)(2) = 3*7^(e-1) for e = 1, 2, 3"


def _check_indicator():
    ctx = gf2n.make_field(9)
    v = 7
    dev = 0.0
    chars = [charsums.MultChar(v, j) for j in range(v)]
    for y in range(1, ctx.order):
        avg = sum(ch(ctx, y) for ch in chars) / v
        want = 1.0 if gf2n.coset_label(ctx, v, y) == 0 else 0.0
        dev = max(dev, abs(avg - want))
    if dev > 1e-9:
        return False, f"character average misses the indicator by {dev:.2e}"
    return True, f"indicator identity holds, max deviation {dev:.2e}"


def _check_split_identity():
    ctx = gf2n.make_field(9)
    cs = construct.make_coset_system(ctx, 7)
    rng = np.random.default_rng(4)
    h = (1 - 2 * rng.integers(0, 2, cs.h_size)).astype(np.int8)
    g = construct.random_g(7, seed=4)
    f = construct.assemble(cs, h, g)
    f1, f2 = construct.split(cs, h, g)
    c = boolfun.field_transform(ctx, f.values)
    c1 = boolfun.field_transform(ctx, f1.values)
    c2 = boolfun.field_transform(ctx, f2.values)
    if not np.array_equal(c, 1 + c1 + c2):
        return False, "coeffs_f != 1 + coeffs_f1 + coeffs_f2"
    if c2[0] != 0:
        return False, "balanced g did not kill the zero coefficient of f2"
    return True, "integer splitting identity exact at n=9"


def _check_me_sweep(n: int):
    ctx = gf2n.make_field(n)
    cs = construct.make_coset_system(ctx, 7)
    cpv = charsums.coset_psi_vector(ctx, 7)
    for g in (construct.default_g(7), construct.random_g(7, seed=5)):
        rep = construct.me_sweep(cs, g, cpv)
        if not rep.ok:
            return False, (f"|E| = {rep.max_abs_error:.4f} exceeds "
                           f"eps*v = {rep.error_bound:.4f}")
    return True, f"error term within eps*v for all nonzero a at n={n}"


def _check_balance_pipeline():
    ctx = gf2n.make_field(9)
    cs = construct.make_coset_system(ctx, 7)
    h = np.ones(cs.h_size, dtype=np.int8)
    hb = construct.balance_h(h)
    flips = int(np.count_nonzero(hb != h))
    if int(hb.sum()) != -1 or flips != (cs.h_size + 1) // 2:
        return False, f"balancing all-ones made {flips} flips, sum {int(hb.sum())}"
    f = construct.assemble(cs, hb, construct.default_g(7))
    if not boolfun.is_balanced(f):
        return False, "assembled function is not balanced"
    return True, f"{flips} flips reach sum(h) = -1 and a balanced function"


def _check_spencer(n: int):
    ctx = gf2n.make_field(n)
    p = discrepancy.make_sign_problem(ctx, 7)
    sol = discrepancy.solve_localsearch(p, restarts=2, budget=200, seed=9)
    if not discrepancy.certify(sol, p):
        return False, f"achieved {sol.achieved} above bound {sol.bound:.2f}"
    if discrepancy.achieved_value(p, sol.u) != sol.achieved:
        return False, "incremental objective diverged from recomputation"
    return True, f"achieved {sol.achieved} <= bound {sol.bound:.2f} at n={n}"


def _check_roundtrip():
    rng = np.random.default_rng(6)
    f = boolfun.sign_function(1 - 2 * rng.integers(0, 2, 64).astype(np.int8))
    back = boolfun.parse_table(boolfun.format_table(f))
    if back.n != f.n or not np.array_equal(back.values, f.values):
        return False, "format/parse round trip changed the table"
    return True, "format/parse round trip is the identity"


def _check_good_s():
    res = charsums.find_good_s(1, 0.2, 10000)
    if res is None:
        return False, "no odd s found below 10000"
    s, worst = res
    theta = math.atan2(math.sqrt(7.0), -1.0)
    scan = next(t for t in range(1, 10000, 2)
                if abs(math.remainder(t * theta, 2 * math.pi)) <= 0.2)
    if s != scan:
        return False, f"search returned s={s}, direct scan says {scan}"
    return True, f"smallest odd s is {s}, worst angle {worst:.4f}"


def _check_rho_small():
    got = [boolfun.rho_exhaustive(n) for n in (1, 2, 3, 4)]
    if got != [0, 1, 2, 6]:
        return False, f"covering radii {got} != [0, 1, 2, 6]"
    return True, "covering radii 0, 1, 2, 6 for n = 1..4"


def _check_gauss_n21():
    ctx = gf2n.make_field(21)
    for v, e in ((7, 1), (49, 2)):
        cpv = charsums.coset_psi_vector(ctx, v)
        scale = 2.0 ** ctx.n
        for j in range(1, v):
            if abs(abs(charsums.gauss_sum(cpv, j)) ** 2 - scale) / scale > 1e-6:
                return False, f"|G|^2 != 2^21 at v={v}, j={j}"
    cpv = charsums.coset_psi_vector(ctx, 49)
    _, rel = charsums.closed_form_match(cpv, 1, e=2, d=2, s=1)
    if rel > 1e-6:
        return False, f"order-49 closed form misses by {rel:.2e}"
    return True, "order-7 and order-49 magnitudes and closed form hold at n=21"


def _check_table_file(path: str):
    f = boolfun.read_table(path)
    ctx = gf2n.make_field(f.n)
    coeffs = boolfun.field_transform(ctx, f.values)
    if int((coeffs.astype(object) ** 2).sum()) != 4 ** f.n:
        return False, f"Parseval failure: sum of squares != 4^{f.n}"
    twice = boolfun.field_transform(ctx, coeffs)
    if not np.array_equal(twice, f.values.astype(np.int64) * ctx.order):
        return False, "involution failure on stored table"
    if boolfun.format_table(boolfun.parse_table(boolfun.format_table(f))) \
            != boolfun.format_table(f):
        return False, "round trip failure on stored table"
    return True, f"n={f.n} table: Parseval, involution, round trip all hold"


def cmd_verify(args) -> int:
    checks = [
        ("field-tables", _check_field_tables),
        ("parseval-random", _check_parseval),
        ("fwht-vs-direct", _check_fwht_direct),
        ("involution", _check_involution),
        ("gauss-gf8", _check_gauss_gf8),
        ("gauss-gf512-closed-form", _check_gauss_gf512),
        ("davenport-hasse-3x3", lambda: _check_davenport_hasse(9)),
        ("multiplicative-orders", _check_orders),
        ("indicator-identity", _check_indicator),
        ("split-identity", _check_split_identity),
        ("me-sweep-n9", lambda: _check_me_sweep(9)),
        ("balance-pipeline", _check_balance_pipeline),
        ("spencer-certify-n9", lambda: _check_spencer(9)),
        ("table-roundtrip", _check_roundtrip),
        ("good-s-search", _check_good_s),
        ("rho-small", _check_rho_small),
    ]
    if args.level == "full":
        checks += [
            ("davenport-hasse-3x5", lambda: _check_davenport_hasse(15)),
            ("me-sweep-n15", lambda: _check_me_sweep(15)),
            ("spencer-certify-n15", lambda: _check_spencer(15)),
        ]
        if args.n21:
            checks.append(("gauss-n21", _check_gauss_n21))
    if args.table:
        checks.append(("table-file", lambda: _check_table_file(args.table)))

    results = []
    all_ok = True
    for name, fn in checks:
        t0 = time.perf_counter()
        ok, detail = fn()
        dt = time.perf_counter() - t0
        results.append({"name": name, "ok": ok, "detail": detail,
                        "seconds": round(dt, 3)})
        all_ok &= ok
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {detail}")
    if args.report:
        payload = {
            "manifest": _manifest("verify", {
                "level": args.level, "table": args.table, "n21": args.n21,
            }, [args.table] if args.table else [], [args.report]),
            "checks": results,
            "ok": all_ok,
        }
        _emit(payload, args.report)
    return EXIT_OK if all_ok else EXIT_IDENTITY


# ---------------------------------------------------------------------------
# thin wrappers
# ---------------------------------------------------------------------------

def cmd_gauss(args) -> int:
    ctx = gf2n.make_field(args.n)
    cpv = charsums.coset_psi_vector(ctx, args.v)
    sums = []
    for j in range(args.v):
        val = charsums.gauss_sum(cpv, j)
        sums.append({"j": j, "re": val.real, "im": val.imag,
                     "abs2": abs(val) ** 2})
    payload = {
        "manifest": _manifest("gauss", {"n": args.n, "v": args.v}, [],
                              [args.out] if args.out else []),
        "n": args.n,
        "v": args.v,
        "coset_psi": [int(x) for x in cpv.c],
        "sums": sums,
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_search_s(args) -> int:
    res = charsums.find_good_s(args.e, args.epsilon, args.s_max)
    payload = {
        "manifest": _manifest("search-s", {
            "e": args.e, "epsilon": args.epsilon, "s_max": args.s_max,
        }, [], [args.out] if args.out else []),
        "found": res is not None,
        "s": None if res is None else res[0],
        "worst_angle": None if res is None else res[1],
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_rho(args) -> int:
    value = boolfun.rho_exhaustive(args.n)
    payload = {
        "manifest": _manifest("rho", {"n": args.n}, [],
                              [args.out] if args.out else []),
        "n": args.n,
        "rho": value,
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    f = boolfun.read_table(args.table)
    ctx = gf2n.make_field(f.n)
    spec = boolfun.walsh_transform(ctx, f)
    coeffs = spec.coeffs
    payload = {
        "manifest": _manifest("spectrum", {"table": args.table,
                                           "full": args.full}, [args.table],
                              [args.out] if args.out else []),
        "n": f.n,
        "max_abs_coeff": spec.max_abs,
        "argmax": int(np.argmax(np.abs(coeffs))),
        "mu_value": boolfun.mu_value(spec),
        "nonzero": int(np.count_nonzero(coeffs)),
    }
    if args.full or f.n <= 12:
        payload["coeffs"] = [int(x) for x in coeffs]
    _emit(payload, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="flatwalsh",
        description="Boolean functions with nearly flat Walsh spectra via "
                    "multiplicative coset constructions.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a function and report its spectrum")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--v", type=int, required=True, help="subgroup index, a power of 7")
    c.add_argument("--seed", type=int, default=1)
    c.add_argument("--solver", choices=("localsearch", "random"), default="localsearch")
    c.add_argument("--restarts", type=int, default=8)
    c.add_argument("--budget", type=int, default=2000)
    c.add_argument("--trials", type=int, default=64)
    c.add_argument("--g-mode", choices=("default", "random"), default="default")
    c.add_argument("--balanced", action="store_true",
                   help="apply the balancing modification to h")
    c.add_argument("--out-table")
    c.add_argument("--out-report")
    c.set_defaults(fn=cmd_construct)

    vcmd = sub.add_parser("verify", help="run the identity suites")
    vcmd.add_argument("--level", choices=("fast", "full"), default="fast")
    vcmd.add_argument("--table", help="also check a stored truth table file")
    vcmd.add_argument("--n21", action="store_true",
                      help="include the slow n=21 Gauss sum checks (full level)")
    vcmd.add_argument("--report", help="write a JSON report here")
    vcmd.set_defaults(fn=cmd_verify)

    gcmd = sub.add_parser("gauss", help="order-v Gauss sums over GF(2^n)")
    gcmd.add_argument("--n", type=int, required=True)
    gcmd.add_argument("--v", type=int, required=True)
    gcmd.add_argument("--out")
    gcmd.set_defaults(fn=cmd_gauss)

    scmd = sub.add_parser("search-s", help="smallest odd lift degree with "
                                           "Gauss angles below epsilon")
    scmd.add_argument("--e", type=int, required=True)
    scmd.add_argument("--epsilon", type=float, required=True)
    scmd.add_argument("--s-max", type=int, default=10 ** 6)
    scmd.add_argument("--out")
    scmd.set_defaults(fn=cmd_search_s)

    rcmd = sub.add_parser("rho", help="exhaustive covering radius (n <= 5)")
    rcmd.add_argument("--n", type=int, required=True)
    rcmd.add_argument("--out")
    rcmd.set_defaults(fn=cmd_rho)

    pcmd = sub.add_parser("spectrum", help="Walsh spectrum of a stored table")
    pcmd.add_argument("table")
    pcmd.add_argument("--full", action="store_true",
                      help="include all coefficients even for large n")
    pcmd.add_argument("--out")
    pcmd.set_defaults(fn=cmd_spectrum)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
