"""Assembly of coset-structured sign functions and their spectral anatomy.

A function is built from three ingredients: a multiplicative subgroup H
of index v, free signs h on H, and a balanced three-valued assignment g
on the coset representatives that vanishes exactly on H. The assembled
function is constant on every coset except H itself. Splitting it into
the part supported on H and the part supported elsewhere decomposes the
spectrum exactly in integers, and the non-H part further splits into a
main term (a g value read off the opposite coset) plus an error term
controlled by how far the relevant Gauss sums sit from 2^(n/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import boolfun, charsums, discrepancy, gf2n
from .boolfun import SignFunction
from .charsums import CosetPsiVector
from .gf2n import FieldContext


@dataclass(frozen=True)
class CosetSystem:
    """Subgroup index v with representatives g^0, ..., g^(v-1).

    Representative i lies in the coset of label i, and reps[0] = 1 is in
    H itself. The subgroup has (2^n - 1)/v elements, listed by increasing
    discrete log as dlog = 0, v, 2v, ...
    """
    ctx: FieldContext
    v: int
    reps: np.ndarray

    @property
    def h_size(self) -> int:
        return self.ctx.group_order // self.v


@dataclass(frozen=True)
class GAssignment:
    """Signs on the coset representatives: 0 exactly on H, balanced elsewhere."""
    values: np.ndarray


def make_coset_system(ctx: FieldContext, v: int) -> CosetSystem:
    if v < 1 or ctx.group_order % v != 0:
        raise ValueError(f"index v={v} does not divide 2^{ctx.n} - 1 "
                         f"= {ctx.group_order}")
    reps = ctx.exp[:v].astype(np.int64)
    reps.flags.writeable = False
    return CosetSystem(ctx, v, reps)


def g_assignment(values) -> GAssignment:
    vals = np.asarray(values, dtype=np.int8).copy()
    v = vals.size
    if v % 2 == 0:
        raise ValueError(f"index v={v} must be odd so the nonzero part "
                         f"of g can balance")
    if vals[0] != 0:
        raise ValueError("g must vanish on H (position 0)")
    if v > 1 and not np.all(np.abs(vals[1:]) == 1):
        raise ValueError("g must be +-1 off H")
    if int(vals.astype(np.int64).sum()) != 0:
        raise ValueError("g must be balanced: equally many +1 and -1")
    vals.flags.writeable = False
    return GAssignment(vals)


def default_g(v: int) -> GAssignment:
    """Deterministic assignment: +1 on labels 1..(v-1)/2, -1 above."""
    vals = np.zeros(v, dtype=np.int8)
    vals[1:(v + 1) // 2] = 1
    vals[(v + 1) // 2:] = -1
    return g_assignment(vals)


def random_g(v: int, seed: int = 0) -> GAssignment:
    """Balanced assignment with the nonzero signs shuffled by seed."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    vals = np.zeros(v, dtype=np.int8)
    vals[1:] = rng.permutation(default_g(v).values[1:])
    return g_assignment(vals)


def _check_h(cs: CosetSystem, h) -> np.ndarray:
    arr = np.asarray(h, dtype=np.int8)
    if arr.shape != (cs.h_size,):
        raise ValueError(f"h must assign one sign to each of the "
                         f"{cs.h_size} subgroup elements, got shape {arr.shape}")
    if not np.all(np.abs(arr) == 1):
        raise ValueError("h entries must be +-1")
    return arr


def _check_g(cs: CosetSystem, g: GAssignment) -> np.ndarray:
    if g.values.size != cs.v:
        raise ValueError(f"g has {g.values.size} entries, expected {cs.v}")
    return g.values


def assemble(cs: CosetSystem, h, g: GAssignment) -> SignFunction:
    """Total sign function: f(0)=1, f=h on H, f=g(coset) elsewhere.

    h is indexed by position within H in increasing dlog order, so
    h[k] is the value at generator^(v*k).
    """
    h = _check_h(cs, h)
    gv = _check_g(cs, g)
    ctx, v = cs.ctx, cs.v
    labels = ctx.dlog[1:] % v
    table = np.empty(ctx.order, dtype=np.int8)
    table[0] = 1
    table[1:] = np.where(labels == 0, h[ctx.dlog[1:] // v], gv[labels])
    return boolfun.sign_function(table)


def split(cs: CosetSystem, h, g: GAssignment) -> tuple[SignFunction, SignFunction]:
    """Partial functions (on H, off H) whose spectra add up exactly.

    With f = assemble(cs, h, g) the unnormalized identity
    coeffs_f(a) = 1 + coeffs_f1(a) + coeffs_f2(a) holds for every a; the
    lone 1 is the contribution of f(0).
    """
    h = _check_h(cs, h)
    gv = _check_g(cs, g)
    ctx, v = cs.ctx, cs.v
    labels = ctx.dlog[1:] % v
    f1 = np.zeros(ctx.order, dtype=np.int8)
    f2 = np.zeros(ctx.order, dtype=np.int8)
    on_h = labels == 0
    f1[1:][on_h] = h[(ctx.dlog[1:] // v)[on_h]]
    f2[1:][~on_h] = gv[labels[~on_h]]
    return boolfun.sign_function(f1), boolfun.sign_function(f2)


# ---------------------------------------------------------------------------
# Main-term / error-term decomposition of the off-H spectrum
# ---------------------------------------------------------------------------

def _f2_spectrum(cs: CosetSystem, g: GAssignment) -> np.ndarray:
    gv = _check_g(cs, g)
    ctx, v = cs.ctx, cs.v
    f2 = np.zeros(ctx.order, dtype=np.int8)
    labels = ctx.dlog[1:] % v
    f2[1:] = gv[labels]
    return boolfun.field_transform(ctx, f2)


def main_term(cs: CosetSystem, g: GAssignment, a: int) -> int:
    """g evaluated at the representative b with a*b in H; 0 when a is in H."""
    if a == 0:
        raise ValueError("the decomposition is defined for nonzero a")
    lab = gf2n.coset_label(cs.ctx, cs.v, a)
    return int(g.values[(cs.v - lab) % cs.v])


def me_decomposition(cs: CosetSystem, g: GAssignment, a: int,
                     cpv: CosetPsiVector) -> tuple[int, float]:
    """Split the normalized off-H coefficient at a into (M, E).

    M depends only on the coset of a; E is the exact residual
    f2_hat(a) - M(a) and satisfies |E| <= eps * v for
    eps = measured_epsilon(cpv).
    """
    m_val = main_term(cs, g, a)
    coeffs = _f2_spectrum(cs, g)
    e_val = float(coeffs[a]) / 2 ** (cs.ctx.n / 2) - m_val
    return m_val, e_val


@dataclass(frozen=True)
class MESweepReport:
    n: int
    v: int
    epsilon: float
    error_bound: float
    max_abs_error: float
    ok: bool


def me_sweep(cs: CosetSystem, g: GAssignment, cpv: CosetPsiVector) -> MESweepReport:
    """Decompose every nonzero a at once and check the error bound."""
    ctx, v = cs.ctx, cs.v
    coeffs = _f2_spectrum(cs, g)
    labels = ctx.dlog[1:] % v
    m_vec = g.values[(v - labels) % v].astype(np.float64)
    e_vec = coeffs[1:].astype(np.float64) / 2 ** (ctx.n / 2) - m_vec
    eps = charsums.measured_epsilon(cpv)
    bound = eps * v
    worst = float(np.abs(e_vec).max())
    return MESweepReport(ctx.n, v, eps, bound, worst,
                         worst <= bound + 1e-9)


# ---------------------------------------------------------------------------
# Balancing modification
# ---------------------------------------------------------------------------

def balance_h(h) -> np.ndarray:
    """Flip the fewest signs to reach sum(h) = -1.

    The subgroup size is odd, so sum(h) is odd and the target is always
    reachable with (|sum(h) + 1|)/2 flips. Flips take entries of the
    majority sign at the lowest discrete logs first (h is indexed in
    increasing dlog order).
    """
    arr = np.asarray(h, dtype=np.int8).copy()
    if arr.size % 2 == 0:
        raise ValueError("balance requires an odd subgroup size")
    if not np.all(np.abs(arr) == 1):
        raise ValueError("h entries must be +-1")
    total = int(arr.astype(np.int64).sum())
    if total > -1:
        flips = (total + 1) // 2
        positions = np.flatnonzero(arr == 1)[:flips]
        arr[positions] = -1
    elif total < -1:
        flips = (-1 - total) // 2
        positions = np.flatnonzero(arr == -1)[:flips]
        arr[positions] = 1
    if int(arr.astype(np.int64).sum()) != -1:
        raise AssertionError("balancing failed to reach sum -1")
    return arr


# ---------------------------------------------------------------------------
# Measurement report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstructionReport:
    n: int
    v: int
    max_f_hat: float
    max_f1_hat: float
    max_f2_hat: float
    epsilon_measured: float
    spencer_bound: float
    proposition_bound: float
    max_coeff_f: int
    max_coeff_f1: int
    max_coeff_f2: int
    balanced: bool


def measure_construction(cs: CosetSystem, h, g: GAssignment) -> ConstructionReport:
    """Measured spectral maxima alongside the reference bounds.

    The asymptotic target 1 + 12*sqrt(log(2v)/v) is reported, never
    asserted: it only bites as v grows, and is vacuous at desk sizes.
    """
    ctx, v = cs.ctx, cs.v
    f = assemble(cs, h, g)
    f1, f2 = split(cs, h, g)
    c = boolfun.field_transform(ctx, f.values)
    c1 = boolfun.field_transform(ctx, f1.values)
    c2 = boolfun.field_transform(ctx, f2.values)
    scale = 2 ** (ctx.n / 2)
    eps = charsums.measured_epsilon(charsums.coset_psi_vector(ctx, v))
    return ConstructionReport(
        n=ctx.n,
        v=v,
        max_f_hat=float(np.abs(c).max() / scale),
        max_f1_hat=float(np.abs(c1).max() / scale),
        max_f2_hat=float(np.abs(c2).max() / scale),
        epsilon_measured=eps,
        spencer_bound=discrepancy.spencer_bound(ctx.order, cs.h_size),
        proposition_bound=1.0 + 12.0 * math.sqrt(math.log(2.0 * v) / v),
        max_coeff_f=int(np.abs(c).max()),
        max_coeff_f1=int(np.abs(c1).max()),
        max_coeff_f2=int(np.abs(c2).max()),
        balanced=bool(c[0] == 0),
    )
