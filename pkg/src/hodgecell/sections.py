"""Projection isomorphisms, trivializing sections of the Hodge bundles,
splitting checks and the conjugate-deformation obstruction."""

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import linalg
from .cell import BlockScheme, nplus_representative
from .errors import (
    BaseMismatch,
    IndexOutOfRange,
    LevelOutOfRange,
    UnsupportedFrame,
)

__all__ = [
    "ProjectionMap",
    "SectionValue",
    "ExpansionReport",
    "SplittingReport",
    "ConjugacyVerdict",
    "ConjugacyReport",
    "projection",
    "project_to_base",
    "section_value",
    "section_matrix",
    "expansion_check",
    "splitting_check",
    "conjugate_obstruction",
    "period_component",
]


@dataclass(frozen=True, eq=False)
class ProjectionMap:
    """``P^k_q : F^k_q -> F^k_p`` in the bases ``base @ A~`` and ``eta``.

    ``matrix`` is the leading ``f^k x f^k`` block of the unipotent
    representative ``A~(q)``.
    """

    k: int
    base: object
    source: object
    matrix: np.ndarray
    representative: object

    @property
    def source_basis(self):
        """Columns of ``F^k_q`` the matrix is written against."""
        f = self.matrix.shape[0]
        return self.base.matrix @ self.representative.matrix[:, :f]


@dataclass(frozen=True, eq=False)
class SectionValue:
    k: int
    i: int
    vector: np.ndarray


def _level(frame, k, low=0):
    if not (low <= k <= frame.weight):
        raise LevelOutOfRange(f"level {k} outside [{low}, {frame.weight}]")


def projection(filtration, base, k):
    fr = filtration.frame
    _level(fr, k)
    rep = nplus_representative(filtration, base)
    f = fr.f(k)
    mat = rep.matrix[:f, :f].copy()
    return ProjectionMap(k, base, filtration, mat, rep)


def project_to_base(vectors, base, k):
    """Component of ``vectors`` in ``F^k_p`` along the base Hodge decomposition."""
    f = base.frame.f(k)
    coords = scipy.linalg.solve(base.matrix, linalg.as_matrix(vectors, rows=base.frame.dim))
    return base.matrix[:, :f] @ coords[:f]


def section_matrix(filtration, base, k, proj=None):
    """Columns ``s_0(q), ..., s_{f^k-1}(q)`` with ``P^k_q(s_i) = eta_i``."""
    proj = proj if proj is not None else projection(filtration, base, k)
    f = proj.matrix.shape[0]
    if f == 0:
        return np.zeros((base.frame.dim, 0), dtype=complex)
    coeffs = scipy.linalg.solve(proj.matrix, np.eye(f))
    return proj.source_basis @ coeffs


def section_value(filtration, base, k, i):
    fr = filtration.frame
    _level(fr, k)
    if not (0 <= i < fr.f(k)):
        raise IndexOutOfRange(f"section index {i} outside [0, {fr.f(k)})")
    proj = projection(filtration, base, k)
    e = np.zeros(fr.f(k), dtype=complex)
    e[i] = 1.0
    vec = proj.source_basis @ scipy.linalg.solve(proj.matrix, e)
    return SectionValue(k, i, vec)


@dataclass
class ExpansionReport:
    derivatives: np.ndarray
    tangent_components: np.ndarray
    tangent_min_singular: float
    tangent_rank: int
    spurious: float
    remainder_leak: float
    remainder_radius: float
    step: float
    tolerance: float
    passes: bool

    def to_dict(self):
        return {
            "passes": self.passes,
            "remainder_leak": self.remainder_leak,
            "remainder_radius": self.remainder_radius,
            "spurious": self.spurious,
            "step": self.step,
            "tangent_min_singular": self.tangent_min_singular,
            "tangent_rank": self.tangent_rank,
            "tolerance": self.tolerance,
        }


def expansion_check(family, base, n_params=None, step=1e-4, tol=1e-6, radius=1e-2, samples=4, seed=0):
    """First-order expansion of ``s_0`` around the base point.

    ``family`` maps a complex parameter vector to a Filtration with
    ``family(0)`` equal to the base filtration.  Central differences give
    ``ds_0/dtau_i``; their base coordinates are split into the ``H^{n-1,1}``
    block (must be jointly full rank) and everything else (``spurious``, must
    vanish).  The remainder ``s_0(tau) - eta_0 - sum tau_i ds_0/dtau_i`` at
    ``|tau| = radius`` must have no ``H^{n,0}`` or ``H^{n-1,1}`` component;
    ``remainder_leak`` is that component's norm divided by ``radius**2``.
    """
    fr = base.frame
    if fr.weight < 1:
        raise UnsupportedFrame("expansion needs weight >= 1")
    scheme = BlockScheme.from_frame(fr)
    if n_params is None:
        n_params = fr.h(fr.weight - 1) * fr.h(fr.weight)
    origin = family(np.zeros(n_params, dtype=complex))
    origin.frame.require_same(fr)
    if origin.distance(base.filtration()) > 10 * fr.tolerance:
        raise BaseMismatch("family(0) is not the base filtration")
    n = fr.weight

    def s0(tau):
        return section_value(family(tau), base, n, 0).vector

    derivs = np.zeros((fr.dim, n_params), dtype=complex)
    for j in range(n_params):
        e = np.zeros(n_params, dtype=complex)
        e[j] = step
        derivs[:, j] = (s0(e) - s0(-e)) / (2 * step)
    coords = scipy.linalg.solve(base.matrix, derivs)
    tangent_rows = scheme.slice(1)
    tangent = coords[tangent_rows]
    other = np.delete(coords, np.arange(tangent_rows.start, tangent_rows.stop), axis=0)
    spurious = float(np.max(np.abs(other))) if other.size else 0.0
    sv = linalg.singular_values(tangent)
    tangent_min = float(sv[-1]) if sv.size and tangent.shape[0] >= n_params else 0.0
    rank = int(np.sum(sv > tol)) if sv.size else 0

    rng = np.random.default_rng(seed)
    eta0 = base.matrix[:, 0]
    leak = 0.0
    low_rows = scheme.offsets[2] if n >= 1 else 0
    for _ in range(samples):
        d = rng.normal(size=n_params) + 1j * rng.normal(size=n_params)
        tau = radius * d / np.linalg.norm(d)
        rem = s0(tau) - eta0 - derivs @ tau
        rc = scipy.linalg.solve(base.matrix, rem)
        leak = max(leak, float(np.linalg.norm(rc[:low_rows])) / radius**2)
    passes = rank == n_params and tangent_min > tol and spurious <= tol and leak <= tol
    return ExpansionReport(
        derivs, tangent, tangent_min, rank, spurious, leak, radius, step, tol, bool(passes)
    )


@dataclass
class SplittingReport:
    k: int
    dims_ok: bool
    min_singular: float
    threshold: float
    passes: bool

    def to_dict(self):
        return {
            "dims_ok": self.dims_ok,
            "k": self.k,
            "min_singular": self.min_singular,
            "passes": self.passes,
            "threshold": self.threshold,
        }


def splitting_check(fa, fb, k):
    """Is ``H = F^k_a (+) conj(F^{n-k+1}_b)`` a direct sum?"""
    fr = fa.frame
    fr.require_same(fb.frame)
    _level(fr, k, low=1)
    tol = fr.tolerance
    a = linalg.orth(fa[k], tol)
    b = linalg.orth(fr.conj(fb[fr.weight - k + 1]), tol)
    dims_ok = a.shape[1] + b.shape[1] == fr.dim
    if not dims_ok:
        return SplittingReport(k, False, 0.0, tol, False)
    sv = linalg.singular_values(np.hstack([a, b]))
    smin = float(sv[-1] / sv[0]) if sv.size else 1.0
    return SplittingReport(k, True, smin, tol, bool(smin > tol))


class ConjugacyVerdict(str, enum.Enum):
    DISTINCT = "Distinct"
    CONJUGATE_CANDIDATE = "ConjugateCandidate"


@dataclass
class ConjugacyReport:
    verdict: ConjugacyVerdict
    distance: float
    splitting: SplittingReport
    tolerance: float

    def to_dict(self):
        return {
            "distance": self.distance,
            "splitting": self.splitting.to_dict(),
            "tolerance": self.tolerance,
            "verdict": self.verdict.value,
        }


def conjugate_obstruction(fq, fq2):
    """Could ``fq2`` be the complex conjugate of ``fq``?

    Only Calabi-Yau frames (``h^{n,0} = 1``) are supported: the test compares
    the lines ``F^n_q`` and ``conj(F^n_{q2})``.
    """
    fr = fq.frame
    fr.require_same(fq2.frame)
    if fr.h(fr.weight) != 1:
        raise UnsupportedFrame("conjugate_obstruction needs h^{n,0} = 1")
    n = fr.weight
    dist = linalg.subspace_distance(fq[n], fr.conj(fq2[n]))
    split = splitting_check(fq, fq2, n)
    candidate = dist <= 10 * fr.tolerance
    verdict = ConjugacyVerdict.CONJUGATE_CANDIDATE if candidate else ConjugacyVerdict.DISTINCT
    return ConjugacyReport(verdict, dist, split, 10 * fr.tolerance)


def period_component(filtration, base):
    """Connected component of a weight-2, ``h^{2,0}=1`` period domain.

    Writing the ``F^2`` generator as ``a*eta_0 + (middle) + b*eta_{m-1}`` in
    the base decomposition, the oriented negative 2-plane it spans projects
    onto the base one with determinant ``|a|^2 - |b|^2``; its sign is +1 on the
    base's component and -1 on the conjugate component.
    """
    fr = filtration.frame
    fr.require_same(base.frame)
    if fr.weight != 2 or fr.h(2) != 1:
        raise UnsupportedFrame("period_component needs weight 2 with h^{2,0} = 1")
    c = scipy.linalg.solve(base.matrix, filtration[2][:, 0])
    det = abs(c[0]) ** 2 - abs(c[-1]) ** 2
    return 1 if det > 0 else -1
