"""Truth tables, integer Walsh spectra, nonlinearity, and covering radii.

Sign functions are length-2^n arrays over {-1, +1} (partial functions may
also contain 0), indexed by the field-element bit encoding, so the same
index addresses both the truth table and the field. All spectra are kept
as unnormalized integers; division by 2^(n/2) happens only in reporting,
which keeps every identity in this module exact.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import gf2n
from .gf2n import FieldContext


@dataclass(frozen=True)
class SignFunction:
    """A function 2^n -> {-1, 0, +1}; total when no zeros are present."""
    n: int
    values: np.ndarray

    @property
    def is_total(self) -> bool:
        return bool(np.all(self.values != 0))


@dataclass(frozen=True)
class WalshSpectrum:
    """Unnormalized integer Walsh coefficients against field characters.

    coeffs[a] = sum_y f(y) * psi(a*y); the normalized coefficient is
    coeffs[a] / 2^(n/2).
    """
    n: int
    coeffs: np.ndarray

    @property
    def max_abs(self) -> int:
        return int(np.abs(self.coeffs).max())


def sign_function(values) -> SignFunction:
    """Validate and wrap a sign table; length must be a power of two."""
    vals = np.asarray(values, dtype=np.int8).copy()
    if vals.ndim != 1 or vals.size == 0 or vals.size & (vals.size - 1):
        raise ValueError(f"sign table length {vals.size} is not a power of 2")
    if not np.all(np.isin(vals, (-1, 0, 1))):
        raise ValueError("sign table entries must lie in {-1, 0, +1}")
    vals.flags.writeable = False
    return SignFunction(vals.size.bit_length() - 1, vals)


def from_truth_table(bits) -> SignFunction:
    """Sign form (-1)^F of a 0/1 truth table F."""
    b = np.asarray(bits)
    if not np.all(np.isin(b, (0, 1))):
        raise ValueError("truth table entries must be 0 or 1")
    return sign_function(1 - 2 * b.astype(np.int8))


def to_truth_table(f: SignFunction) -> np.ndarray:
    if not f.is_total:
        raise ValueError("partial sign function has no 0/1 truth table")
    return ((1 - f.values) // 2).astype(np.uint8)


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def fwht(values) -> np.ndarray:
    """In-place style fast transform against plain dot-product characters.

    Accepts any integer array whose last axis has power-of-two length and
    returns W with W[..., u] = sum_y values[..., y] * (-1)^(u.y), exactly
    in int64.
    """
    w = np.array(values, dtype=np.int64)
    m = w.shape[-1]
    if m & (m - 1):
        raise ValueError(f"transform length {m} is not a power of 2")
    h = 1
    while h < m:
        v = w.reshape(w.shape[:-1] + (m // (2 * h), 2, h))
        a = v[..., 0, :].copy()
        v[..., 0, :] += v[..., 1, :]
        np.negative(v[..., 1, :], out=v[..., 1, :])
        v[..., 1, :] += a
        h *= 2
    return w


def field_transform(ctx: FieldContext, values) -> np.ndarray:
    """Integer spectrum against the field characters psi(a*y).

    Computed as the standard butterfly followed by the linear re-indexing
    from ctx.walsh_permutation(); equal to the quadratic direct sum.
    """
    vals = np.asarray(values)
    if vals.shape != (ctx.order,):
        raise ValueError(f"table length {vals.shape} does not match 2^{ctx.n}")
    return fwht(vals)[ctx.walsh_permutation()]


def field_transform_direct(ctx: FieldContext, values) -> np.ndarray:
    """Quadratic-time reference transform; use only for cross-checks."""
    vals = np.asarray(values, dtype=np.int64)
    if vals.shape != (ctx.order,):
        raise ValueError(f"table length {vals.shape} does not match 2^{ctx.n}")
    out = np.empty(ctx.order, dtype=np.int64)
    for a in range(ctx.order):
        out[a] = int(np.dot(gf2n.psi_products(ctx, a).astype(np.int64), vals))
    return out


def walsh_transform(ctx: FieldContext, f: SignFunction) -> WalshSpectrum:
    if f.n != ctx.n:
        raise ValueError(f"function on {f.n} variables does not match "
                         f"field of degree {ctx.n}")
    return WalshSpectrum(f.n, field_transform(ctx, f.values))


def mu_value(spec: WalshSpectrum) -> float:
    """max_a |coeffs(a)| / 2^(n/2); at least 1 for total sign functions."""
    return spec.max_abs / 2 ** (spec.n / 2)


# ---------------------------------------------------------------------------
# Distance to affine functions
# ---------------------------------------------------------------------------

def affine_truth_table(ctx: FieldContext, a: int, c: int) -> np.ndarray:
    """Truth table of y -> Tr(a*y) xor c."""
    signs = gf2n.psi_products(ctx, a)
    return (((1 - signs) // 2) ^ c).astype(np.uint8)


def affine_distance_profile(ctx: FieldContext, truth_table) -> tuple[int, tuple[int, int]]:
    """Minimum Hamming distance to the 2^(n+1) affine functions, plus a witness.

    Uses the spectral identity d(F, Tr(a*y) xor c) = (2^n - (-1)^c W(a)) / 2
    for the sign spectrum W of (-1)^F. Returns (distance, (a, c)) with the
    first maximizing coefficient as witness.
    """
    f = from_truth_table(truth_table)
    if f.n != ctx.n:
        raise ValueError(f"table on {f.n} variables does not match degree {ctx.n}")
    coeffs = field_transform(ctx, f.values)
    a = int(np.argmax(np.abs(coeffs)))
    top = int(coeffs[a])
    distance = ((1 << ctx.n) - abs(top)) // 2
    return distance, (a, 0 if top > 0 else 1)


# ---------------------------------------------------------------------------
# Exhaustive covering radius for tiny n
# ---------------------------------------------------------------------------

def _sign_matrix(m: int) -> np.ndarray:
    u = np.arange(m)
    parity = (np.bitwise_count(u[:, None] & u[None, :]).astype(np.int64)) & 1
    return 1 - 2 * parity


def _rho_scan_numpy(n: int) -> int:
    m = 1 << n
    S = _sign_matrix(m)
    W = np.zeros(m, dtype=np.int64)
    W[0] = m
    f = np.ones(m, dtype=np.int64)
    minmax = m
    for k in range(1, 1 << (m - 1)):
        t = (k & -k).bit_length() - 1
        W -= (2 * f[t]) * S[t]
        f[t] = -f[t]
        mm = int(np.abs(W).max())
        if mm < minmax:
            minmax = mm
    return (m - minmax) // 2


_RHO_KERNEL = None


def _get_rho_kernel():
    global _RHO_KERNEL
    if _RHO_KERNEL is None:
        import numba

        @numba.njit(parallel=True, cache=True)
        def kernel(S, total, blocks):  # pragma: no cover - jitted
            m = S.shape[0]
            best = np.empty(blocks, np.int64)
            for b in numba.prange(blocks):
                lo = 1 + (total - 1) * b // blocks
                hi = 1 + (total - 1) * (b + 1) // blocks
                g0 = (lo - 1) ^ ((lo - 1) >> 1)
                f = np.ones(m, np.int64)
                W = np.zeros(m, np.int64)
                for t in range(m):
                    if (g0 >> t) & 1:
                        f[t] = -1
                local = 0
                for a in range(m):
                    s = 0
                    for t in range(m):
                        s += f[t] * S[t, a]
                    W[a] = s
                    if abs(s) > local:
                        local = abs(s)
                for k in range(lo, hi):
                    kk = k
                    t = 0
                    while not kk & 1:
                        kk >>= 1
                        t += 1
                    c = -2 * f[t]
                    f[t] = -f[t]
                    mx = 0
                    for a in range(m):
                        W[a] += c * S[t, a]
                        x = abs(W[a])
                        if x > mx:
                            mx = x
                    if mx < local:
                        local = mx
                best[b] = local
            return best.min()

        _RHO_KERNEL = kernel
    return _RHO_KERNEL


def rho_exhaustive(n: int) -> int:
    """Exact covering radius of the first-order length-2^n code.

    Scans all truth tables in Gray-code order, updating the full coefficient
    vector incrementally (one entry flip moves every coefficient by +-2) and
    tracking the minimum over tables of the maximum coefficient magnitude.
    Complementation symmetry halves the scan. n = 5 runs a compiled kernel
    over independent Gray-range blocks and takes minutes; larger n is
    rejected as a cost guard. Thread count for the n = 5 path honors the
    FLATWALSH_THREADS environment variable.
    """
    if not 1 <= n <= 5:
        raise ValueError(f"exhaustive scan supports 1 <= n <= 5, got {n} "
                         f"(2^(2^n) tables is past the cost guard)")
    if n <= 4:
        return _rho_scan_numpy(n)
    kernel = _get_rho_kernel()
    threads = os.environ.get("FLATWALSH_THREADS")
    if threads:
        import numba
        numba.set_num_threads(max(1, int(threads)))
    m = 1 << n
    minmax = int(kernel(_sign_matrix(m), 1 << (m - 1), 256))
    return (m - minmax) // 2


# ---------------------------------------------------------------------------
# Recursive lift and balance
# ---------------------------------------------------------------------------

def lift_two(f: SignFunction) -> SignFunction:
    """Two-variable lift f'(y, u, v) = f(y) * (-1)^(u*v) on n+2 variables.

    The new variables occupy the top two index bits. Every coefficient
    magnitude doubles while 2^(n/2) doubles too, so the normalized maximum
    is preserved exactly.
    """
    if not f.is_total:
        raise ValueError("lift requires a total sign function")
    vals = f.values
    new = np.concatenate([vals, vals, vals, -vals])
    new.flags.writeable = False
    return SignFunction(f.n + 2, new)


def is_balanced(f: SignFunction) -> bool:
    """True when +1 and -1 each occur 2^(n-1) times."""
    if not f.is_total:
        raise ValueError("balance is defined for total sign functions")
    return int(f.values.astype(np.int64).sum()) == 0


# ---------------------------------------------------------------------------
# Truth-table file format
# ---------------------------------------------------------------------------
# Line 1: "n=<int>". Line 2: the 2^n sign values packed 4 per hex digit,
# table bit i at hex digit i//4 with weight 2^(i mod 4); +1 -> bit 0,
# -1 -> bit 1. Unused high bits of the last digit must be zero.

_HEX = "0123456789abcdef"


def pack_signs_hex(values) -> str:
    vals = np.asarray(values, dtype=np.int64)
    if not np.all(np.abs(vals) == 1):
        raise ValueError("hex packing is defined for +-1 values only")
    bits = (1 - vals) // 2
    pad = (-bits.size) % 4
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.int64)])
    digits = bits.reshape(-1, 4) @ np.array([1, 2, 4, 8], dtype=np.int64)
    return "".join(_HEX[d] for d in digits)


def unpack_signs_hex(hexstr: str, count: int) -> np.ndarray:
    expected = (count + 3) // 4
    if len(hexstr) != expected:
        raise ValueError(f"expected {expected} hex digits for {count} values, "
                         f"got {len(hexstr)}")
    try:
        digits = np.array([int(ch, 16) for ch in hexstr], dtype=np.int64)
    except ValueError:
        raise ValueError(f"invalid hex digit in table line: {hexstr!r}") from None
    bits = (digits[:, None] >> np.arange(4)) & 1
    bits = bits.reshape(-1)
    if np.any(bits[count:]):
        raise ValueError("nonzero padding bits in final hex digit")
    return (1 - 2 * bits[:count]).astype(np.int8)


def format_table(f: SignFunction) -> str:
    if not f.is_total:
        raise ValueError("only total sign functions can be serialized")
    return f"n={f.n}\n{pack_signs_hex(f.values)}\n"


def parse_table(text: str) -> SignFunction:
    lines = text.strip().splitlines()
    if len(lines) != 2:
        raise ValueError(f"expected 2 lines (n= and hex table), got {len(lines)}")
    if not lines[0].startswith("n="):
        raise ValueError(f"first line must be 'n=<int>', got {lines[0]!r}")
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise ValueError(f"bad degree in header line {lines[0]!r}") from None
    if not 1 <= n <= gf2n.MAX_DEGREE:
        raise ValueError(f"degree n={n} out of range 1..{gf2n.MAX_DEGREE}")
    return sign_function(unpack_signs_hex(lines[1].strip(), 1 << n))


def write_table(path, f: SignFunction) -> None:
    with open(path, "w") as fh:
        fh.write(format_table(f))


def read_table(path) -> SignFunction:
    with open(path) as fh:
        return parse_table(fh.read())
