"""Exact arithmetic and multiplicative structure of GF(2^n).

Field elements are plain Python ints: bit i of an element is the
coefficient of x^i in the polynomial basis, so an element's integer
encoding doubles as its truth-table index. A FieldContext bundles the
modulus, a fixed generator of the multiplicative group, and full
lookup tables (exponentials, discrete logs, absolute trace bits) for
fields up to degree 26. All operations on a built context are pure
table lookups and safe to share across threads.
"""

from __future__ import annotations

import numpy as np

MAX_DEGREE = 26


# ---------------------------------------------------------------------------
# Polynomial arithmetic over GF(2) on plain ints (bit i = coefficient of x^i)
# ---------------------------------------------------------------------------

def poly_mod(a: int, b: int) -> int:
    """Reduce polynomial a modulo nonzero polynomial b."""
    db = b.bit_length() - 1
    while a and a.bit_length() - 1 >= db:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def poly_mul(a: int, b: int) -> int:
    """Carry-less product of two polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _reduced_mul(a: int, b: int, modulus: int, n: int) -> int:
    # a, b already reduced below 2^n; modulus has degree exactly n
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> n) & 1:
            a ^= modulus
    return r


def _reduced_pow(a: int, e: int, modulus: int, n: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = _reduced_mul(r, a, modulus, n)
        a = _reduced_mul(a, a, modulus, n)
        e >>= 1
    return r


def irreducibility_failure(poly: int) -> str | None:
    """Explain why poly is reducible, or return None if it is irreducible.

    Runs the Rabin test: x^(2^n) must equal x modulo poly, and
    gcd(x^(2^d) - x, poly) must be trivial at every proper divisor d
    of n. The returned message names the first failing check.
    """
    n = poly.bit_length() - 1
    if n < 1:
        return f"{poly:#b} has degree {n}, expected at least 1"
    x = poly_mod(0b10, poly)
    t = x
    for d in range(1, n + 1):
        t = poly_mod(poly_mul(t, t), poly)
        if d < n and n % d == 0:
            g = poly_gcd(t ^ x, poly)
            if g != 1:
                return (f"{poly:#b} is reducible: gcd(x^(2^{d}) - x, modulus) "
                        f"= {g:#b} at divisor d={d}")
    if t != x:
        return f"{poly:#b} is reducible: x^(2^{n}) != x (mod modulus)"
    return None


def is_irreducible(poly: int) -> bool:
    return irreducibility_failure(poly) is None


def smallest_irreducible(n: int) -> int:
    """Smallest degree-n irreducible polynomial by integer encoding."""
    for f in range(1 << n, 1 << (n + 1)):
        if is_irreducible(f):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {n}")


def _prime_factors(x: int) -> list[int]:
    ps = []
    d = 2
    while d * d <= x:
        if x % d == 0:
            ps.append(d)
            while x % d == 0:
                x //= d
        d += 1
    if x > 1:
        ps.append(x)
    return ps


# ---------------------------------------------------------------------------
# Field context
# ---------------------------------------------------------------------------

class FieldContext:
    """Immutable description of GF(2^n) with full lookup tables.

    Attributes:
        n: extension degree.
        modulus: irreducible degree-n polynomial as an (n+1)-bit int.
        generator: multiplicative generator, smallest by integer encoding.
        order: 2^n.
        group_order: 2^n - 1.
        exp: exp[i] = generator^i for 0 <= i < group_order.
        dlog: dlog[y] = discrete log of nonzero y; dlog[0] = -1 (unused).
        trace_bit: trace_bit[y] = absolute trace Tr(y) in {0, 1}.
    """

    def __init__(self, n: int, modulus: int, generator: int,
                 exp: np.ndarray, dlog: np.ndarray, trace_bit: np.ndarray):
        self.n = n
        self.modulus = modulus
        self.generator = generator
        self.order = 1 << n
        self.group_order = (1 << n) - 1
        self.exp = exp
        self.dlog = dlog
        self.trace_bit = trace_bit
        self._walsh_perm: np.ndarray | None = None
        for arr in (exp, dlog, trace_bit):
            arr.flags.writeable = False

    def __repr__(self) -> str:
        return (f"FieldContext(n={self.n}, modulus={self.modulus:#b}, "
                f"generator={self.generator:#b})")

    def walsh_permutation(self) -> np.ndarray:
        """Index map turning dot-product spectra into field-character spectra.

        Tr(a*y) is a nondegenerate symmetric bilinear form, so there is an
        invertible GF(2)-linear map L with Tr(a*y) = <L(a), y> for the plain
        bit dot product. The returned array is perm[a] = L(a); the transform
        against psi(a*y) is the standard butterfly output indexed by perm.
        Built lazily and cached; rows of L come from Tr(x^(k+j)).
        """
        if self._walsh_perm is None:
            n, f = self.n, self.modulus
            x_reduced = poly_mod(0b10, f)
            power_trace = []
            w = 1
            for _ in range(2 * n - 1):
                power_trace.append(int(self.trace_bit[w]))
                w = _reduced_mul(w, x_reduced, f, n)
            row_masks = [sum(power_trace[k + j] << j for j in range(n))
                         for k in range(n)]
            a = np.arange(self.order, dtype=np.int64)
            perm = np.zeros(self.order, dtype=np.int64)
            for k, mask in enumerate(row_masks):
                t = a & mask
                t ^= t >> 16
                t ^= t >> 8
                t ^= t >> 4
                t ^= t >> 2
                t ^= t >> 1
                perm |= (t & 1) << k
            perm.flags.writeable = False
            self._walsh_perm = perm
        return self._walsh_perm


def _build_exp_table(n: int, modulus: int, g: int) -> np.ndarray:
    q = (1 << n) - 1
    exp = np.zeros(q, dtype=np.int64)
    exp[0] = 1
    filled = 1
    power = g  # generator^filled
    while filled < q:
        m = min(filled, q - filled)
        exp[filled:filled + m] = _mul_const_vec(exp[:m], power, modulus, n)
        if filled + m < q:
            gm = power if m == filled else int(exp[m])
            power = _reduced_mul(power, gm, modulus, n)
        filled += m
    return exp


def _mul_const_vec(arr: np.ndarray, c: int, modulus: int, n: int) -> np.ndarray:
    """Multiply a vector of reduced elements by the constant c, mod modulus."""
    acc = np.zeros(arr.shape, dtype=np.int64)
    shift = 0
    cc = c
    while cc:
        if cc & 1:
            acc ^= arr << shift
        cc >>= 1
        shift += 1
    for k in range(n + c.bit_length() - 2, n - 1, -1):
        acc ^= ((acc >> k) & 1) * (modulus << (k - n))
    return acc


def _trace_scalar(y: int, modulus: int, n: int) -> int:
    t = y
    z = y
    for _ in range(n - 1):
        z = _reduced_mul(z, z, modulus, n)
        t ^= z
    if t not in (0, 1):
        raise AssertionError(f"trace of {y:#b} left GF(2): {t:#b}")
    return t


def _build_trace_table(n: int, modulus: int) -> np.ndarray:
    # Tr is GF(2)-linear, so Tr(y) is the parity of y & mask with
    # mask collecting the traces of the basis monomials x^i.
    mask = 0
    for i in range(n):
        mask |= _trace_scalar(1 << i, modulus, n) << i
    size = 1 << n
    tb = np.empty(size, dtype=np.uint8)
    block = 1 << 20
    for lo in range(0, size, block):
        hi = min(lo + block, size)
        t = np.arange(lo, hi, dtype=np.int64) & mask
        t ^= t >> 16
        t ^= t >> 8
        t ^= t >> 4
        t ^= t >> 2
        t ^= t >> 1
        tb[lo:hi] = (t & 1).astype(np.uint8)
    return tb


def make_field(n: int, modulus: int | None = None) -> FieldContext:
    """Build a FieldContext for GF(2^n).

    When no modulus is given the smallest irreducible degree-n polynomial
    by integer encoding is used, and the generator is always the smallest
    element (by encoding) generating the full multiplicative group. The
    degree is capped at MAX_DEGREE to bound the lookup tables.
    """
    if not 1 <= n <= MAX_DEGREE:
        raise ValueError(f"degree n={n} out of supported range 1..{MAX_DEGREE}")
    if modulus is None:
        modulus = smallest_irreducible(n)
    else:
        if modulus.bit_length() - 1 != n:
            raise ValueError(f"modulus {modulus:#b} has degree "
                             f"{modulus.bit_length() - 1}, expected {n}")
        failure = irreducibility_failure(modulus)
        if failure is not None:
            raise ValueError(failure)

    q = (1 << n) - 1
    primes = _prime_factors(q)
    generator = None
    for cand in range(1, 1 << n):
        if cand == 1 and q > 1:
            continue
        if all(_reduced_pow(cand, q // p, modulus, n) != 1 for p in primes):
            generator = cand
            break
    if generator is None:
        raise AssertionError("no generator found; modulus is not irreducible?")

    exp = _build_exp_table(n, modulus, generator)
    counts = np.bincount(exp, minlength=1 << n)
    if counts[0] != 0 or not np.all(counts[1:] == 1):
        raise AssertionError("exponential table is not a bijection onto "
                             "the nonzero elements")
    dlog = np.full(1 << n, -1, dtype=np.int64)
    dlog[exp] = np.arange(q, dtype=np.int64)
    trace_bit = _build_trace_table(n, modulus)
    return FieldContext(n, modulus, generator, exp, dlog, trace_bit)


# ---------------------------------------------------------------------------
# Element operations
# ---------------------------------------------------------------------------

def mul(ctx: FieldContext, a: int, b: int) -> int:
    """Field product via the dlog/exp tables."""
    if a == 0 or b == 0:
        return 0
    return int(ctx.exp[(int(ctx.dlog[a]) + int(ctx.dlog[b])) % ctx.group_order])


def element_pow(ctx: FieldContext, a: int, k: int) -> int:
    """a raised to the integer power k >= 0."""
    if a == 0:
        return 1 if k == 0 else 0
    return int(ctx.exp[(int(ctx.dlog[a]) * k) % ctx.group_order])


def trace(ctx: FieldContext, y: int) -> int:
    """Absolute trace Tr(y) = y + y^2 + ... + y^(2^(n-1)), projected to GF(2)."""
    return int(ctx.trace_bit[y])


def psi(ctx: FieldContext, y: int) -> int:
    """Canonical additive character value (-1)^Tr(y), in {-1, +1}."""
    return 1 - 2 * int(ctx.trace_bit[y])


def psi_products(ctx: FieldContext, y: int) -> np.ndarray:
    """Vector of psi(a*y) over all field elements a, as int8 signs.

    Row a of the implicit character matrix; psi(0*y) = 1.
    """
    out = np.ones(ctx.order, dtype=np.int8)
    if y == 0:
        return out
    t = (ctx.dlog[1:] + int(ctx.dlog[y])) % ctx.group_order
    out[1:] = 1 - 2 * ctx.trace_bit[ctx.exp[t]].astype(np.int8)
    return out


def norm_to_subfield(ctx_big: FieldContext, ctx_small: FieldContext, y: int) -> int:
    """Field norm from GF(2^big.n) onto GF(2^small.n), re-encoded.

    The norm is y^((2^bn - 1)/(2^sn - 1)); its image is the order-(2^sn - 1)
    subgroup, which is re-encoded into the small context by matching
    discrete logs: g_big^k maps to g_small^(k mod 2^sn - 1). This fixes the
    multiplicative correspondence without choosing an embedding polynomial;
    it does not preserve addition across contexts.
    """
    if ctx_big.n % ctx_small.n != 0:
        raise ValueError(f"degree {ctx_small.n} does not divide {ctx_big.n}")
    if y == 0:
        return 0
    return int(ctx_small.exp[int(ctx_big.dlog[y]) % ctx_small.group_order])


def coset_label(ctx: FieldContext, v: int, y: int) -> int:
    """Coset label dlog(y) mod v for the index-v multiplicative subgroup."""
    if ctx.group_order % v != 0:
        raise ValueError(f"index v={v} does not divide 2^{ctx.n} - 1 "
                         f"= {ctx.group_order}")
    if y == 0:
        raise ValueError("0 has no coset label")
    return int(ctx.dlog[y]) % v
