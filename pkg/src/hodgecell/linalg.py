"""Dense complex subspace utilities.

Subspaces are passed around as matrices whose columns span them.  Every rank
decision goes through a relative singular-value threshold ``tol * sigma_max``.
"""

import numpy as np
import scipy.linalg

__all__ = [
    "as_matrix",
    "singular_values",
    "numerical_rank",
    "is_nonsingular",
    "orth",
    "canonical_span",
    "intersect",
    "subspace_distance",
    "projection_residual",
    "same_span",
]

# rows of an orthonormal basis whose residual falls below this are not pivots
_PIVOT_THRESHOLD = 1e-6


def as_matrix(a, rows=None):
    """Coerce ``a`` to a 2-D complex array, optionally checking the row count."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {a.shape}")
    if rows is not None and a.shape[0] != rows:
        if a.size == 0:
            return np.zeros((rows, 0), dtype=complex)
        raise ValueError(f"expected {rows} rows, got {a.shape[0]}")
    return a


def singular_values(a):
    a = np.asarray(a)
    if a.size == 0:
        return np.zeros(0)
    return scipy.linalg.svdvals(a)


def numerical_rank(a, tol):
    s = singular_values(a)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def is_nonsingular(a, tol):
    """Square ``a`` is nonsingular when ``sigma_min > tol * sigma_max``.

    The empty matrix counts as nonsingular.
    """
    a = np.asarray(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("is_nonsingular expects a square matrix")
    if a.size == 0:
        return True
    s = singular_values(a)
    return bool(s[0] > 0.0 and s[-1] > tol * s[0])


def orth(a, tol):
    """Orthonormal basis of the column span of ``a``."""
    a = as_matrix(a)
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    u, s, _ = scipy.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    r = int(np.sum(s > tol * s[0]))
    return u[:, :r]


def canonical_span(a, tol):
    """Reduced column-echelon representative of the span of ``a``.

    Pivot rows are chosen greedily from the top: a row becomes a pivot when it
    is independent of the pivot rows above it.  The returned matrix is the
    unique basis of the span that equals the identity on those rows, so two
    bases of one subspace canonicalize to the same matrix.
    """
    u = orth(a, tol)
    m, r = u.shape
    if r == 0:
        return u
    pivots = []
    basis = np.zeros((0, r), dtype=complex)
    for i in range(m):
        row = u[i]
        resid = row - (row @ basis.conj().T) @ basis if len(pivots) else row
        nrm = np.linalg.norm(resid)
        if nrm > _PIVOT_THRESHOLD:
            pivots.append(i)
            basis = np.vstack([basis, resid / nrm])
            if len(pivots) == r:
                break
    c = scipy.linalg.solve(u[pivots].T, u.T).T
    c[pivots] = np.eye(r)
    return c


def intersect(a, b, tol):
    """Basis of ``span(a) & span(b)``.

    Null vectors of ``[orth(a) | -orth(b)]`` give the intersection; singular
    values at or below ``tol`` (the matrix has sigma_max <= sqrt(2)) count as
    null.
    """
    ua = orth(a, tol)
    ub = orth(b, tol)
    m = ua.shape[0]
    if ua.shape[1] == 0 or ub.shape[1] == 0:
        return np.zeros((m, 0), dtype=complex)
    w = np.hstack([ua, -ub])
    _, s, vh = scipy.linalg.svd(w, full_matrices=True)
    ncols = w.shape[1]
    svals = np.zeros(ncols)
    svals[: s.size] = s
    null = svals <= tol * max(svals[0], 1.0)
    if not null.any():
        return np.zeros((m, 0), dtype=complex)
    x = vh.conj().T[:, null]
    return orth(ua @ x[: ua.shape[1]], tol)


def subspace_distance(a, b, tol=1e-12):
    """Largest principal angle between two spans, in ``[0, pi/2]``.

    Spans of different dimension are at distance ``pi/2``; two zero spaces are
    at distance 0.
    """
    ua = orth(a, tol)
    ub = orth(b, tol)
    if ua.shape[1] != ub.shape[1]:
        return float(np.pi / 2)
    if ua.shape[1] == 0:
        return 0.0
    return float(np.max(scipy.linalg.subspace_angles(ua, ub)))


def same_span(a, b, tol):
    return subspace_distance(a, b) <= tol


def projection_residual(vectors, span, tol):
    """Column-wise norms of ``vectors`` after removing their component in ``span``."""
    v = as_matrix(vectors)
    u = orth(span, tol)
    if v.shape[1] == 0:
        return np.zeros(0)
    r = v - u @ (u.conj().T @ v)
    return np.linalg.norm(r, axis=0)
