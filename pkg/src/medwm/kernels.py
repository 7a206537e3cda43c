"""Dense numerical kernels: SVD, orthonormal 2D DCT and single-level Haar DWT.

Matrices are plain 2D ``numpy.float64`` arrays. Every function here is pure
and deterministic: the same input gives bit-identical output.
"""

from dataclasses import dataclass
from functools import lru_cache

import numba
import numpy as np

from .errors import ConvergenceError, InvalidInputError

# Orthonormal Haar analysis pair (low-pass, high-pass).
HAAR_LOW = np.array([1.0, 1.0]) / np.sqrt(2.0)
HAAR_HIGH = np.array([1.0, -1.0]) / np.sqrt(2.0)

SVD_TOL = 1e-12
SVD_MAX_SWEEPS = 200


def as_matrix(a, name="matrix"):
    """Validate ``a`` as a finite, non-empty 2D float64 array."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise InvalidInputError(f"{name} must be 2D, got shape {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise InvalidInputError(f"{name} must be non-empty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return m


@dataclass(frozen=True)
class SvdFactors:
    """``a = u @ diag(s) @ v.T`` with ``u`` m x m, ``v`` n x n, ``s`` descending."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray

    @property
    def shape(self):
        return self.u.shape[0], self.v.shape[0]


@dataclass(frozen=True)
class SubbandSet:
    """One level of 2D Haar analysis.

    The first letter names the filter applied along each row (horizontal
    direction), the second the filter applied along each column.
    """

    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray

    def replace(self, **bands):
        fields = {"ll": self.ll, "lh": self.lh, "hl": self.hl, "hh": self.hh}
        fields.update(bands)
        return SubbandSet(**fields)


# ---------------------------------------------------------------- SVD


@lru_cache(maxsize=32)
def _round_robin(n):
    """Pair schedule covering every column pair once per sweep.

    Returns a tuple of ``(p, q)`` index arrays, one per round, with disjoint
    pairs inside a round so they can be rotated together.
    """
    players = list(range(n)) + ([-1] if n % 2 else [])
    k = len(players)
    rounds = []
    for _ in range(k - 1):
        pairs = [(players[i], players[k - 1 - i]) for i in range(k // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a >= 0 and b >= 0]
        p = np.array([a for a, _ in pairs], dtype=np.intp)
        q = np.array([b for _, b in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


@lru_cache(maxsize=32)
def _schedule_arrays(n):
    rounds = _round_robin(n)
    width = max(len(p) for p, _ in rounds)
    ps = np.full((len(rounds), width), -1, dtype=np.int64)
    qs = np.full((len(rounds), width), -1, dtype=np.int64)
    for r, (p, q) in enumerate(rounds):
        ps[r, : len(p)] = p
        qs[r, : len(q)] = q
    return ps, qs


@numba.njit(cache=True, nogil=True)
def _jacobi_sweeps(w, v, ps, qs, tol, floor2, max_sweeps):
    # Rows of w are the columns being orthogonalized; rows of v accumulate
    # the same rotations. Pairs involving a column with squared norm below
    # floor2 are left alone (that column is rounding noise). Returns sweeps
    # used, or -1 on hitting the cap.
    n, m = w.shape
    for sweep in range(max_sweeps):
        rotated = False
        for r in range(ps.shape[0]):
            for k in range(ps.shape[1]):
                p = ps[r, k]
                q = qs[r, k]
                if p < 0:
                    continue
                npp = 0.0
                nqq = 0.0
                npq = 0.0
                for i in range(m):
                    x = w[p, i]
                    y = w[q, i]
                    npp += x * x
                    nqq += y * y
                    npq += x * y
                if npp < floor2 or nqq < floor2:
                    continue
                if abs(npq) <= tol * np.sqrt(npp * nqq):
                    continue
                rotated = True
                zeta = (nqq - npp) / (2.0 * npq)
                sign = 1.0 if zeta >= 0.0 else -1.0
                t = sign / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                for i in range(m):
                    x = w[p, i]
                    y = w[q, i]
                    w[p, i] = c * x - s * y
                    w[q, i] = s * x + c * y
                for i in range(n):
                    x = v[p, i]
                    y = v[q, i]
                    v[p, i] = c * x - s * y
                    v[q, i] = s * x + c * y
        if not rotated:
            return sweep + 1
    return -1


def _negligible(norm, m, n):
    # Column norms at or below this are indistinguishable from rounding noise.
    return norm * max(m, n) * np.finfo(float).eps


def _jacobi_tall(a, tol, max_sweeps):
    """One-sided (Hestenes) Jacobi on a tall matrix; returns (work, v)."""
    m, n = a.shape
    w = np.array(a.T, order="C", copy=True)
    vt = np.eye(n)
    if n > 1:
        ps, qs = _schedule_arrays(n)
        floor2 = (_negligible(np.linalg.norm(a), m, n)) ** 2
        if _jacobi_sweeps(w, vt, ps, qs, tol, floor2, max_sweeps) < 0:
            raise ConvergenceError(
                f"one-sided Jacobi did not converge in {max_sweeps} sweeps"
            )
    return w.T, vt.T


def _complete_basis(q, keep):
    """Fill columns of ``q`` not flagged in ``keep`` with an orthonormal complement.

    Each new vector is the standard basis vector with the largest residual
    after projecting out everything accepted so far (first index on ties).
    """
    m = q.shape[0]
    q = q.copy()
    missing = [j for j in range(q.shape[1]) if not keep[j]]
    if not missing:
        return q
    kept = q[:, keep]
    resid = np.eye(m) - kept @ kept.T
    for j in missing:
        i = int(np.argmax(np.einsum("ij,ij->j", resid, resid)))
        cand = resid[:, i].copy()
        cand -= kept @ (kept.T @ cand)
        cand /= np.linalg.norm(cand)
        q[:, j] = cand
        kept = np.column_stack([kept, cand])
        resid -= np.outer(cand, cand @ resid)
    return q


def _fix_signs(u, v, k):
    """Make the largest-magnitude entry of each of the first ``k`` u-columns non-negative."""
    for j in range(u.shape[1]):
        i = int(np.argmax(np.abs(u[:, j])))
        if u[i, j] < 0:
            u[:, j] = -u[:, j]
            if j < k:
                v[:, j] = -v[:, j]


def _svd_tall(a, tol, max_sweeps):
    m, n = a.shape
    work, v = _jacobi_tall(a, tol, max_sweeps)
    s = np.sqrt(np.einsum("ij,ij->j", work, work))
    order = np.argsort(-s, kind="stable")
    s = s[order]
    work = work[:, order]
    v = v[:, order]
    keep = s > _negligible(np.linalg.norm(a), m, n)
    u = np.zeros((m, m))
    u[:, :n][:, keep] = work[:, keep] / s[keep]
    u = _complete_basis(u, np.concatenate([keep, np.zeros(m - n, dtype=bool)]))
    _fix_signs(u, v, n)
    return u, s, v


def svd_decompose(a, tol=SVD_TOL, max_sweeps=SVD_MAX_SWEEPS):
    """Full singular value decomposition by one-sided Jacobi rotations.

    Columns are rotated in a fixed round-robin order until every pair is
    orthogonal to within ``tol`` relative to their norms. Raises
    :class:`ConvergenceError` if that takes more than ``max_sweeps`` sweeps.

    Singular vectors follow a deterministic sign convention: within each
    column of ``u`` the entry of largest magnitude (first one on ties) is
    non-negative, and the matching column of ``v`` carries the sign.
    """
    a = as_matrix(a)
    m, n = a.shape
    if m >= n:
        u, s, v = _svd_tall(a, tol, max_sweeps)
    else:
        vt, s, ut = _svd_tall(a.T, tol, max_sweeps)
        u, v = ut, vt
        _fix_signs(u, v, m)
    return SvdFactors(u=u, s=s, v=v)


def svd_reconstruct(f):
    """Return ``u @ diag(s) @ v.T``."""
    u = np.asarray(f.u, dtype=np.float64)
    v = np.asarray(f.v, dtype=np.float64)
    s = np.asarray(f.s, dtype=np.float64)
    if u.ndim != 2 or v.ndim != 2 or s.ndim != 1:
        raise InvalidInputError("svd factors must be 2D, 1D, 2D arrays")
    m, n = u.shape[0], v.shape[0]
    if u.shape != (m, m) or v.shape != (n, n) or s.shape[0] != min(m, n):
        raise InvalidInputError(
            f"inconsistent svd factors: u {u.shape}, s {s.shape}, v {v.shape}"
        )
    k = s.shape[0]
    return (u[:, :k] * s) @ v[:, :k].T


# ---------------------------------------------------------------- DCT


@lru_cache(maxsize=32)
def dct_matrix(n):
    """Orthonormal DCT-II basis: ``y = C @ x`` for a length-``n`` signal."""
    k = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    c = np.cos((2 * i + 1) * k * np.pi / (2 * n)) * np.sqrt(2.0 / n)
    c[0, :] = np.sqrt(1.0 / n)
    c.setflags(write=False)
    return c


def dct2_forward(x):
    """Full-frame orthonormal 2D DCT-II."""
    x = as_matrix(x)
    m, n = x.shape
    return dct_matrix(m) @ x @ dct_matrix(n).T


def dct2_inverse(y):
    """Inverse of :func:`dct2_forward`."""
    y = as_matrix(y)
    m, n = y.shape
    return dct_matrix(m).T @ y @ dct_matrix(n)


# ---------------------------------------------------------------- DWT


def _analyze_rows(x):
    even, odd = x[:, 0::2], x[:, 1::2]
    lo = HAAR_LOW[0] * even + HAAR_LOW[1] * odd
    hi = HAAR_HIGH[0] * even + HAAR_HIGH[1] * odd
    return lo, hi


def _synthesize_rows(lo, hi):
    out = np.empty((lo.shape[0], 2 * lo.shape[1]))
    out[:, 0::2] = HAAR_LOW[0] * lo + HAAR_HIGH[0] * hi
    out[:, 1::2] = HAAR_LOW[1] * lo + HAAR_HIGH[1] * hi
    return out


def dwt2_forward(x):
    """Single-level separable 2D Haar analysis.

    Both dimensions must be even; pad beforehand (see
    :func:`medwm.image_io.pad_to_even`).
    """
    x = as_matrix(x)
    if x.shape[0] % 2 or x.shape[1] % 2:
        raise InvalidInputError(f"DWT needs even dimensions, got {x.shape}")
    lo, hi = _analyze_rows(x)
    ll, lh = (b.T for b in _analyze_rows(lo.T))
    hl, hh = (b.T for b in _analyze_rows(hi.T))
    return SubbandSet(ll=ll, lh=lh, hl=hl, hh=hh)


def dwt2_inverse(bands):
    """Single-level 2D Haar synthesis; exact inverse of :func:`dwt2_forward`."""
    ll, lh, hl, hh = (as_matrix(b, "subband") for b in (bands.ll, bands.lh, bands.hl, bands.hh))
    if not (ll.shape == lh.shape == hl.shape == hh.shape):
        raise InvalidInputError(
            f"subband shapes differ: {ll.shape}, {lh.shape}, {hl.shape}, {hh.shape}"
        )
    lo = _synthesize_rows(ll.T, lh.T).T
    hi = _synthesize_rows(hl.T, hh.T).T
    return _synthesize_rows(lo, hi)
