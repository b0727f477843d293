"""Exact integer cyclic convolution.

Short sequences use the schoolbook product.  Longer ones go through a
radix-2 number-theoretic transform modulo one or two NTT-friendly primes,
recombined by CRT.  Before transforming, the largest coefficient the result
can possibly contain is bounded and compared against the working modulus, so
a result is either exact or an error is raised; there is no rounding anywhere.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ConvolutionOverflow

SCHOOLBOOK_MAX = 512

# (modulus, primitive root); both are c * 2^k + 1 with k >= 23
NTT_PRIMES = ((998244353, 3), (2013265921, 31))
MAX_NTT_LENGTH = 1 << 23


def _as_counts(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("expected a 1-d sequence")
    if arr.size and arr.min() < 0:
        raise ValueError("convolution inputs must be nonnegative counts")
    return arr


def coefficient_bound(x: np.ndarray, y: np.ndarray) -> int:
    """Upper bound on every coefficient of x * y for nonnegative x, y."""
    if x.size == 0 or y.size == 0:
        return 0
    sx, sy = int(x.sum()), int(y.sum())
    return min(sx * int(y.max()), sy * int(x.max()))


@lru_cache(maxsize=64)
def _bitrev(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def _twiddles(w: int, half: int, mod: int) -> np.ndarray:
    tw = np.ones(1, dtype=np.int64)
    while tw.size < half:
        tw = np.concatenate([tw, tw * pow(w, tw.size, mod) % mod])
    return tw[:half]


def ntt(a: np.ndarray, mod: int, root: int, invert: bool = False) -> np.ndarray:
    """In-order iterative NTT of length len(a) (a power of two) modulo ``mod``."""
    n = a.size
    if n & (n - 1) or (mod - 1) % n:
        raise ValueError(f"length {n} unsupported modulo {mod}")
    a = a[_bitrev(n)] % mod
    length = 2
    while length <= n:
        w = pow(root, (mod - 1) // length, mod)
        if invert:
            w = pow(w, mod - 2, mod)
        half = length // 2
        tw = _twiddles(w, half, mod)
        blocks = a.reshape(-1, length)
        u = blocks[:, :half]
        v = blocks[:, half:] * tw % mod
        a = np.concatenate(((u + v) % mod, (u - v) % mod), axis=1).ravel()
        length *= 2
    if invert:
        a = a * pow(n, mod - 2, mod) % mod
    return a


def _linear_ntt(x: np.ndarray, y: np.ndarray, mod: int, root: int, n: int) -> np.ndarray:
    fx = np.zeros(n, dtype=np.int64)
    fy = np.zeros(n, dtype=np.int64)
    fx[: x.size] = x % mod
    fy[: y.size] = y % mod
    prod = ntt(fx, mod, root) * ntt(fy, mod, root) % mod
    return ntt(prod, mod, root, invert=True)


def linear_convolve_ntt(x, y) -> np.ndarray:
    """Exact linear convolution via NTT (+CRT when one prime is not enough)."""
    x, y = _as_counts(x), _as_counts(y)
    if x.size == 0 or y.size == 0:
        return np.zeros(0, dtype=np.int64)
    out_len = x.size + y.size - 1
    n = 1 << max(0, (out_len - 1).bit_length())
    if n > MAX_NTT_LENGTH:
        raise ConvolutionOverflow(f"transform length {n} exceeds {MAX_NTT_LENGTH}")
    bound = coefficient_bound(x, y)
    (m1, g1), (m2, g2) = NTT_PRIMES
    if bound < m1:
        return _linear_ntt(x, y, m1, g1, n)[:out_len]
    if bound >= m1 * m2:
        raise ConvolutionOverflow(f"coefficient bound {bound} exceeds CRT modulus")
    r1 = _linear_ntt(x, y, m1, g1, n)[:out_len]
    r2 = _linear_ntt(x, y, m2, g2, n)[:out_len]
    # Garner: value = r1 + m1 * ((r2 - r1) * m1^-1 mod m2), all steps < 2^62
    inv = pow(m1, -1, m2)
    t = (r2 - r1) % m2 * inv % m2
    return r1 + m1 * t


def cyclic_schoolbook(x, y) -> np.ndarray:
    """Cyclic convolution by direct accumulation of rotated copies."""
    x, y = _as_counts(x), _as_counts(y)
    if x.size != y.size:
        raise ValueError("cyclic convolution needs equal lengths")
    out = np.zeros(x.size, dtype=np.int64)
    for i in np.flatnonzero(x):
        out += int(x[i]) * np.roll(y, int(i))
    return out


def cyclic_convolve(x, y, method: str = "auto") -> np.ndarray:
    """Exact cyclic convolution of two equal-length nonnegative integer sequences.

    ``method`` is "auto", "schoolbook" or "ntt"; auto picks schoolbook up to
    length SCHOOLBOOK_MAX.
    """
    x, y = _as_counts(x), _as_counts(y)
    n = x.size
    if y.size != n:
        raise ValueError("cyclic convolution needs equal lengths")
    if coefficient_bound(x, y) >= 1 << 62:
        raise ConvolutionOverflow("coefficients would not fit in int64")
    if method == "auto":
        method = "schoolbook" if n <= SCHOOLBOOK_MAX else "ntt"
    if method == "schoolbook":
        return cyclic_schoolbook(x, y)
    if method != "ntt":
        raise ValueError(f"unknown convolution method {method!r}")
    lin = linear_convolve_ntt(x, y)
    out = lin[:n].copy()
    out[: lin.size - n] += lin[n:]
    return out
