"""Built-in period families.

``hk_weight2_*``: weight 2, Hodge numbers ``(1, N, 1)``, coordinates
``(Omega_p, eta_1, ..., eta_N, conj Omega_p)``.  The polarization pairs
``Q(e_0, e_{N+1}) = -1`` and ``Q(e_i, e_j) = delta_ij`` on the middle block; the
real structure swaps ``e_0`` and ``e_{N+1}`` and fixes the ``eta_i``.

``weight1_*``: the upper half-plane, ``F^1 = span(e_0 + tau e_1)``.
"""

import numpy as np

from .core import AdaptedBasis, DEFAULT_TOL, Filtration, HodgeFrame, build_polarization
from .errors import DimensionMismatch

__all__ = [
    "HK_DEFAULT_N",
    "hk_weight2_frame",
    "hk_weight2_point",
    "hk_weight2_base",
    "hk_omega",
    "hk_nonhorizontal_point",
    "weight1_frame",
    "weight1_point",
    "weight1_base",
]

HK_DEFAULT_N = 19


def hk_intersection_form(n=HK_DEFAULT_N):
    """Intersection matrix whose weight-2 polarization is the family's ``Q``."""
    m = n + 2
    s = np.zeros((m, m))
    s[0, m - 1] = s[m - 1, 0] = 1.0
    s[1 : m - 1, 1 : m - 1] = -np.eye(n)
    return s


def hk_weight2_frame(n=HK_DEFAULT_N, tol=DEFAULT_TOL):
    m = n + 2
    q = build_polarization(2, hk_intersection_form(n), tol)
    r = np.eye(m)
    r[[0, m - 1]] = r[[m - 1, 0]]
    return HodgeFrame(2, (1, n, 1), q, tol, r)


def _frame_for(frame, n, builder):
    if frame is None:
        return builder(n)
    if frame.dim != n + 2 or frame.weight != 2:
        raise DimensionMismatch(f"tau has length {n}, frame has dimension {frame.dim}")
    return frame


def hk_omega(tau):
    """``Omega_p + sum tau_i eta_i + (1/2 sum tau_i^2) conj(Omega_p)``."""
    tau = np.asarray(tau, dtype=complex).ravel()
    v = np.empty(tau.size + 2, dtype=complex)
    v[0] = 1.0
    v[1:-1] = tau
    v[-1] = 0.5 * np.sum(tau**2)
    return v


def hk_weight2_point(tau, frame=None):
    """``F^2 = span(Omega(tau))``, ``F^1 = F^2 + span(eta_i + tau_i conj Omega_p)``."""
    tau = np.asarray(tau, dtype=complex).ravel()
    n = tau.size
    if n < 1:
        raise DimensionMismatch("tau must have at least one entry")
    fr = _frame_for(frame, n, hk_weight2_frame)
    m = n + 2
    basis = np.zeros((m, m), dtype=complex)
    basis[:, 0] = hk_omega(tau)
    basis[1:-1, 1:-1] = np.eye(n)
    basis[-1, 1:-1] = tau
    basis[-1, -1] = 1.0
    return Filtration.from_basis(fr, basis)


def hk_weight2_base(frame=None, n=HK_DEFAULT_N):
    fr = frame if frame is not None else hk_weight2_frame(n)
    return AdaptedBasis.standard(fr)


def hk_nonhorizontal_point(t, n=HK_DEFAULT_N, frame=None):
    """``F^2 = span(e_0 + t e_{N+1})``, ``F^1 = F^2 + span(eta_i)``; not horizontal."""
    fr = _frame_for(frame, n, hk_weight2_frame)
    m = n + 2
    basis = np.eye(m, dtype=complex)
    basis[-1, 0] = t
    return Filtration.from_basis(fr, basis)


def weight1_frame(tol=DEFAULT_TOL):
    q = build_polarization(1, np.array([[0.0, 1.0], [-1.0, 0.0]]), tol)
    return HodgeFrame(1, (1, 1), q, tol)


def weight1_point(tau, frame=None):
    fr = frame if frame is not None else weight1_frame()
    return Filtration.from_basis(fr, np.array([[1.0, 0.0], [complex(tau), 1.0]]))


def weight1_base(frame=None, tau0=1j):
    """Adapted basis of the Hodge decomposition at ``tau0`` (in the domain).

    Affine coordinates relative to this base are the Cayley transform
    ``(tau - tau0) / (tau - conj(tau0))`` up to scale.
    """
    fr = frame if frame is not None else weight1_frame()
    return AdaptedBasis.from_filtration(weight1_point(tau0, fr))
