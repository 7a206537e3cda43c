"""Slow, independent reference implementations used only by the tests."""

import math

import numpy as np


def naive_dct2(x):
    """Direct quadruple-loop evaluation of the orthonormal 2D DCT-II."""
    m, n = x.shape
    out = np.zeros((m, n))
    for u in range(m):
        cu = 1 / math.sqrt(2) if u == 0 else 1.0
        for v in range(n):
            cv = 1 / math.sqrt(2) if v == 0 else 1.0
            total = 0.0
            for i in range(m):
                ci = math.cos((2 * i + 1) * u * math.pi / (2 * m))
                for j in range(n):
                    total += x[i, j] * ci * math.cos((2 * j + 1) * v * math.pi / (2 * n))
            out[u, v] = 2 * cu * cv / math.sqrt(m * n) * total
    return out


def _analysis_1d(signal, filt):
    # out[k] = sum_n filt[n - 2k] * signal[n]
    out = []
    for k in range(len(signal) // 2):
        total = 0.0
        for n, value in enumerate(signal):
            idx = n - 2 * k
            if 0 <= idx < len(filt):
                total += filt[idx] * value
        out.append(total)
    return out


def naive_dwt2(x):
    """Filter-and-downsample Haar analysis, rows first then columns.

    Returns a dict keyed ``ll, lh, hl, hh`` where the first letter is the
    filter applied along rows.
    """
    h = [1 / math.sqrt(2), 1 / math.sqrt(2)]
    g = [1 / math.sqrt(2), -1 / math.sqrt(2)]
    rows_lo = np.array([_analysis_1d(list(r), h) for r in x])
    rows_hi = np.array([_analysis_1d(list(r), g) for r in x])

    def cols(a, filt):
        return np.array([_analysis_1d(list(c), filt) for c in a.T]).T

    return {
        "ll": cols(rows_lo, h),
        "lh": cols(rows_lo, g),
        "hl": cols(rows_hi, h),
        "hh": cols(rows_hi, g),
    }


def naive_mse(a, b):
    total = 0.0
    count = 0
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            d = float(a[i, j]) - float(b[i, j])
            total += d * d
            count += 1
    return total / count


def jacobi_eigenvalues(sym, tol=1e-15, max_sweeps=100):
    """Eigenvalues of a symmetric matrix by classical two-sided cyclic Jacobi."""
    a = np.array(sym, dtype=float)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= tol * math.sqrt(np.sum(a * a)):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                with np.errstate(over="ignore"):
                    theta = float((a[q, q] - a[p, p]) / (2 * apq))
                if abs(theta) > 1e150:
                    # Asymptotic form; also covers an overflowing theta.
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
    return np.sort(np.diag(a))[::-1]


def power_eigenvalues(sym, iters=200000, tol=1e-15, seed=0):
    """Eigenvalues of a symmetric PSD matrix by power iteration with deflation."""
    a = np.array(sym, dtype=float)
    n = a.shape[0]
    rng = np.random.default_rng(seed)
    values = []
    for _ in range(n):
        x = rng.normal(size=n)
        x /= np.linalg.norm(x)
        lam = 0.0
        for _ in range(iters):
            y = a @ x
            norm = np.linalg.norm(y)
            if norm == 0.0:
                lam = 0.0
                break
            y /= norm
            new = float(y @ a @ y)
            converged = abs(new - lam) <= tol * max(abs(new), 1.0) and np.linalg.norm(y - x) < 1e-12
            x, lam = y, new
            if converged:
                break
        values.append(lam)
        a = a - lam * np.outer(x, x)
    return np.sort(np.array(values))[::-1]


def singular_values_oracle(a, method=jacobi_eigenvalues):
    """Singular values of ``a`` as square roots of the eigenvalues of its Gram matrix."""
    a = np.asarray(a, dtype=float)
    gram = a.T @ a if a.shape[0] >= a.shape[1] else a @ a.T
    return np.sqrt(np.clip(method(gram), 0.0, None))
