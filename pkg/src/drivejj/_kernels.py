"""Numerical kernels: Bessel functions, series sums, closed-form branch sums.

Two implementations are provided for each hot kernel: a numba ``@njit`` build
and a vectorized numpy fallback. Selection happens once at import time; set
``DRIVEJJ_NO_NUMBA=1`` to force the numpy path (or if numba is unavailable).
"""

from __future__ import annotations

import math
import os

import numpy as np

USE_NUMBA = False
if os.environ.get("DRIVEJJ_NO_NUMBA", "") != "1":
    try:
        from numba import njit

        USE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised via the env flag
        pass

if not USE_NUMBA:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


# Factorials as float64; exact through 22!, which covers every index the
# engines are allowed to request (guarded in the callers).
FACT = np.array([float(math.factorial(i)) for i in range(41)])

_MILLER_PAD = 44
_RESCALE = 1e250


@njit(cache=True)
def bessel_jn(p, x):
    """Bessel function J_p(x) by Miller's backward recurrence.

    Accurate to ~1e-15 absolute for p <= 16, |x| <= 20 (the engine range);
    degrades gracefully beyond. Handles negative order and argument through
    the reflection parities.
    """
    sign = 1.0
    if p < 0:
        p = -p
        if p % 2 == 1:
            sign = -sign
    if x < 0.0:
        x = -x
        if p % 2 == 1:
            sign = -sign
    if x == 0.0:
        return sign if p == 0 else 0.0
    if x < 1e-8:
        # two-term ascending series; truncation < x^2/4 ~ 2.5e-17 relative
        lead = 1.0
        for i in range(1, p + 1):
            lead *= x / (2.0 * i)
        return sign * lead * (1.0 - 0.25 * x * x / (p + 1.0))

    start = p if p > x else int(x) + 1
    start += _MILLER_PAD
    if start % 2 == 1:
        start += 1

    jp = 0.0
    jhi = 0.0  # J_{k+1} (seed)
    jlo = 1e-30  # J_k
    norm = 0.0
    for k in range(start, 0, -1):
        jprev = 2.0 * k / x * jlo - jhi  # J_{k-1}
        jhi = jlo
        jlo = jprev
        if k - 1 == p:
            jp = jlo
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * jlo
        if abs(jlo) > _RESCALE:
            jlo *= 1e-250
            jhi *= 1e-250
            jp *= 1e-250
            norm *= 1e-250
    norm += jlo  # adds J_0
    return sign * jp / norm


@njit(cache=True)
def _cosder(psi, order):
    r = order % 4
    if r == 0:
        return math.cos(psi)
    if r == 1:
        return -math.sin(psi)
    if r == 2:
        return -math.cos(psi)
    return math.sin(psi)


@njit(cache=True)
def branch_rows(energies, freqs, psis, s_max):
    """Taylor rows d[t, s] = E_t f_t^s (d/dψ)^s cos(ψ_t)."""
    n_t = energies.shape[0]
    rows = np.empty((n_t, s_max + 1))
    for t in range(n_t):
        fpow = 1.0
        for s in range(s_max + 1):
            rows[t, s] = energies[t] * fpow * _cosder(psis[t], s)
            fpow *= freqs[t]
    return rows


def _series_start(q0, s_min):
    """Smallest admissible Taylor order >= max(q0, s_min) with q0's parity."""
    s0 = q0 if q0 >= s_min else q0 + 2 * ((s_min - q0 + 1) // 2)
    return s0


@njit(cache=True)
def _series_sum_jit(rows, xs, y, q0, p, s_min, s_max):
    total = 0.0
    s0 = q0 if q0 >= s_min else q0 + 2 * ((s_min - q0 + 1) // 2)
    for t in range(rows.shape[0]):
        x = xs[t]
        acc = 0.0
        for s in range(s0, s_max + 1, 2):
            shells = (s - q0) // 2
            inner = 0.0
            for k in range(shells + 1):
                m = shells - k
                inner += y**m / FACT[m] * x ** (2 * k + p) / (FACT[k] * FACT[k + p])
            acc += rows[t, s] * inner
        total += acc
    return total


def _series_sum_np(rows, xs, y, q0, p, s_min, s_max):
    s0 = _series_start(q0, s_min)
    if s0 > s_max:
        return 0.0
    s_vals = np.arange(s0, s_max + 1, 2)
    # enumerate (s, k) pairs; m = (s - q0)/2 - k
    s_list = []
    k_list = []
    for s in s_vals:
        shells = (s - q0) // 2
        ks = np.arange(shells + 1)
        s_list.append(np.full(shells + 1, s))
        k_list.append(ks)
    s_all = np.concatenate(s_list)
    k_all = np.concatenate(k_list)
    m_all = (s_all - q0) // 2 - k_all
    gauss = y**m_all / FACT[m_all] / (FACT[k_all] * FACT[k_all + p])
    drive = np.power.outer(np.asarray(xs), 2 * k_all + p)  # (T, terms)
    return float(np.sum(rows[:, s_all] * gauss * drive))


@njit(cache=True)
def _closed_branch_jit(energies, freqs, psis, pis, gauss2, pow_nl, p, odd):
    total = 0.0
    for t in range(energies.shape[0]):
        f = freqs[t]
        trig = -math.sin(psis[t]) if odd else math.cos(psis[t])
        total += (
            energies[t]
            * f**pow_nl
            * bessel_jn(p, f * pis[t])
            * math.exp(-gauss2 * f * f)
            * trig
        )
    return total


def _closed_branch_np(energies, freqs, psis, pis, gauss2, pow_nl, p, odd):
    f = np.asarray(freqs)
    bes = np.array([bessel_jn(p, fi * xi) for fi, xi in zip(f, np.asarray(pis))])
    trig = -np.sin(psis) if odd else np.cos(psis)
    return float(np.sum(np.asarray(energies) * f**pow_nl * bes * np.exp(-gauss2 * f * f) * trig))


@njit(cache=True)
def _series_sum2_jit(rows, xs1, xs2, y, q0, p1, p2, s_min, s_max):
    total = 0.0
    s0 = q0 if q0 >= s_min else q0 + 2 * ((s_min - q0 + 1) // 2)
    for t in range(rows.shape[0]):
        x1 = xs1[t]
        x2 = xs2[t]
        acc = 0.0
        for s in range(s0, s_max + 1, 2):
            shells = (s - q0) // 2
            inner = 0.0
            for k1 in range(shells + 1):
                d1 = x1 ** (2 * k1 + p1) / (FACT[k1] * FACT[k1 + p1])
                for k2 in range(shells - k1 + 1):
                    m = shells - k1 - k2
                    inner += (
                        d1
                        * x2 ** (2 * k2 + p2)
                        / (FACT[k2] * FACT[k2 + p2])
                        * y**m
                        / FACT[m]
                    )
            acc += rows[t, s] * inner
        total += acc
    return total


def _series_sum2_np(rows, xs1, xs2, y, q0, p1, p2, s_min, s_max):
    s0 = _series_start(q0, s_min)
    if s0 > s_max:
        return 0.0
    total = 0.0
    for s in range(s0, s_max + 1, 2):
        shells = (s - q0) // 2
        k1, k2 = np.meshgrid(np.arange(shells + 1), np.arange(shells + 1), indexing="ij")
        keep = k1 + k2 <= shells
        k1, k2 = k1[keep], k2[keep]
        m = shells - k1 - k2
        gauss = y**m / FACT[m] / (FACT[k1] * FACT[k1 + p1] * FACT[k2] * FACT[k2 + p2])
        drive = np.power.outer(np.asarray(xs1), 2 * k1 + p1) * np.power.outer(
            np.asarray(xs2), 2 * k2 + p2
        )
        total += float(np.sum(rows[:, s] * np.sum(gauss * drive, axis=1)))
    return total


def series_sum_multi(rows, xs_lists, y, q0, ps, s_min, s_max):
    """Series sum for an arbitrary number of drives (pure python).

    ``xs_lists[i][t]`` is the halved amplitude of drive i through branch t;
    ``ps[i]`` its harmonic index. Used when more than two drives are present.
    """
    from itertools import product

    s0 = _series_start(q0, s_min)
    total = 0.0
    n_drives = len(ps)
    for t in range(rows.shape[0]):
        acc = 0.0
        for s in range(s0, s_max + 1, 2):
            shells = (s - q0) // 2
            inner = 0.0
            for ks in product(range(shells + 1), repeat=n_drives):
                if sum(ks) > shells:
                    continue
                m = shells - sum(ks)
                term = y**m / FACT[m]
                for i in range(n_drives):
                    term *= xs_lists[i][t] ** (2 * ks[i] + ps[i]) / (
                        FACT[ks[i]] * FACT[ks[i] + ps[i]]
                    )
                inner += term
            acc += rows[t, s] * inner
        total += acc
    return total


if USE_NUMBA:
    series_sum = _series_sum_jit
    series_sum2 = _series_sum2_jit
    closed_branch = _closed_branch_jit
else:
    series_sum = _series_sum_np
    series_sum2 = _series_sum2_np
    closed_branch = _closed_branch_np


def warmup():
    """Trigger JIT compilation of every dispatched kernel (no-op without numba)."""
    rows = np.ones((1, 6))
    xs = np.ones(1)
    series_sum(rows, xs, 0.1, 1, 1, 3, 5)
    series_sum2(rows, xs, xs, 0.1, 2, 1, 1, 3, 5)
    closed_branch(np.ones(1), np.ones(1), np.ones(1), np.ones(1), 0.1, 2, 1, False)
    bessel_jn(2, 1.3)
