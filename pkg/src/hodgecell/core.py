"""Polarized Hodge data: frames, filtrations, decompositions and the
Hodge-Riemann membership tests for the period domain and its compact dual.

Coordinates are taken in a fixed basis of ``H = C^m``.  Complex conjugation
of vectors is ``x -> R @ conj(x)`` where ``R`` is the frame's real structure
(the identity when the basis is a real lattice basis).
"""

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import linalg
from .errors import (
    DegenerateDecomposition,
    DimensionMismatch,
    FrameMismatch,
    InvalidFiltration,
    InvalidFrame,
    LevelOutOfRange,
    NotAHodgeStructure,
    ParityViolation,
    SingularBase,
    SingularForm,
)

DEFAULT_TOL = 1e-9

__all__ = [
    "DEFAULT_TOL",
    "HodgeFrame",
    "Filtration",
    "Decomposition",
    "AdaptedBasis",
    "PointClass",
    "FirstRiemannReport",
    "SecondRiemannReport",
    "polarization_sign",
    "build_polarization",
    "decomposition_from_filtration",
    "weil_operator",
    "check_first_riemann",
    "check_second_riemann",
    "classify_point",
    "conjugate_structure",
]


def polarization_sign(weight):
    return -1 if (weight * (weight - 1) // 2) % 2 else 1


def _check_form(weight, form, tol):
    form = np.asarray(form, dtype=complex)
    if form.ndim != 2 or form.shape[0] != form.shape[1]:
        raise DimensionMismatch(f"form must be square, got shape {form.shape}")
    if not np.all(np.isfinite(form)):
        raise InvalidFrame("form has non-finite entries")
    m = form.shape[0]
    scale = np.max(np.abs(form)) if form.size else 0.0
    if scale == 0.0 or not linalg.is_nonsingular(form, tol):
        raise SingularForm("form is singular within tolerance")
    parity = (-1) ** weight
    if np.max(np.abs(form.T - parity * form)) > tol * scale * max(m, 1):
        kind = "symmetric" if parity == 1 else "skew-symmetric"
        raise ParityViolation(f"weight {weight} form must be {kind}")
    return form


def build_polarization(weight, intersection, tol=DEFAULT_TOL):
    """Polarization ``(-1)**(n(n-1)/2) * intersection``.

    This is the only place the sign convention is applied; everything else
    takes ``Q`` as given.
    """
    form = _check_form(weight, intersection, tol)
    return polarization_sign(weight) * form


@dataclass(frozen=True, eq=False)
class HodgeFrame:
    """Ambient data of a period domain.

    ``hodge_numbers`` lists ``h^{n,0}, ..., h^{0,n}``.  ``polarization`` is the
    form ``Q`` (already carrying its sign).  ``real_structure`` is the matrix
    ``R`` with ``conj(x) = R @ x.conj()``; it defaults to the identity.
    """

    weight: int
    hodge_numbers: tuple
    polarization: np.ndarray
    tolerance: float = DEFAULT_TOL
    real_structure: np.ndarray = field(default=None)

    def __post_init__(self):
        n = int(self.weight)
        if n < 1:
            raise InvalidFrame("weight must be >= 1")
        h = tuple(int(x) for x in self.hodge_numbers)
        if len(h) != n + 1 or any(x < 0 for x in h):
            raise InvalidFrame(f"need {n + 1} nonnegative Hodge numbers, got {self.hodge_numbers}")
        if sum(h) == 0:
            raise InvalidFrame("all Hodge numbers are zero")
        if not (self.tolerance >= 0 and np.isfinite(self.tolerance)):
            raise InvalidFrame("tolerance must be a nonnegative finite number")
        q = _check_form(n, self.polarization, self.tolerance)
        m = sum(h)
        if q.shape != (m, m):
            raise DimensionMismatch(f"polarization must be {m}x{m}, got {q.shape}")
        if self.real_structure is None:
            r = np.eye(m, dtype=complex)
        else:
            r = np.asarray(self.real_structure, dtype=complex)
            if r.shape != (m, m) or not np.all(np.isfinite(r)):
                raise DimensionMismatch("real_structure must be a finite m x m matrix")
            if np.max(np.abs(r @ r.conj() - np.eye(m))) > 1e3 * self.tolerance:
                raise InvalidFrame("real_structure is not an involution (R conj(R) != I)")
            scale = np.max(np.abs(q))
            if np.max(np.abs(r.T @ q @ r - q.conj())) > 1e3 * self.tolerance * scale:
                raise InvalidFrame("polarization is not real for the given real structure")
        q = q.copy()
        r = r.copy()
        q.flags.writeable = False
        r.flags.writeable = False
        object.__setattr__(self, "weight", n)
        object.__setattr__(self, "hodge_numbers", h)
        object.__setattr__(self, "polarization", q)
        object.__setattr__(self, "real_structure", r)

    @property
    def dim(self):
        return sum(self.hodge_numbers)

    @property
    def dims_f(self):
        """``[f^0, ..., f^n, f^{n+1}=0]`` with ``f^k = sum_{i>=k} h^{i,n-i}``."""
        n = self.weight
        out = [0] * (n + 2)
        for k in range(n, -1, -1):
            out[k] = out[k + 1] + self.h(k)
        return out

    def f(self, k):
        if k > self.weight:
            return 0
        return self.dims_f[max(k, 0)]

    def h(self, p):
        """``h^{p, n-p}``."""
        return self.hodge_numbers[self.weight - p]

    def conj(self, x):
        """Complex conjugate of vectors (columns) under the real structure."""
        x = np.asarray(x, dtype=complex)
        return self.real_structure @ x.conj()

    def pair(self, u, v):
        """Bilinear pairing matrix ``u^T Q v`` of column sets."""
        return linalg.as_matrix(u).T @ self.polarization @ linalg.as_matrix(v)

    def check_level(self, k, low=0):
        if not (low <= k <= self.weight):
            raise LevelOutOfRange(f"level {k} outside [{low}, {self.weight}]")

    def same_as(self, other):
        if self is other:
            return True
        return (
            self.weight == other.weight
            and self.hodge_numbers == other.hodge_numbers
            and np.allclose(self.polarization, other.polarization, rtol=0, atol=1e-12)
            and np.allclose(self.real_structure, other.real_structure, rtol=0, atol=1e-12)
        )

    def require_same(self, other):
        if not self.same_as(other):
            raise FrameMismatch("objects belong to different frames")


@dataclass(frozen=True, eq=False)
class Filtration:
    """A point of the compact dual candidate: a flag ``F^n < ... < F^0 = H``.

    ``spans[k]`` is the canonical column-echelon basis of ``F^k``.
    """

    frame: HodgeFrame
    spans: tuple

    def __post_init__(self):
        fr = self.frame
        n, m, tol = fr.weight, fr.dim, fr.tolerance
        spans = list(self.spans)
        if len(spans) == n:  # F^0 omitted
            spans = [np.eye(m, dtype=complex)] + spans
        if len(spans) != n + 1:
            raise InvalidFiltration(f"need spans for levels 0..{n}")
        canon = []
        for k, s in enumerate(spans):
            try:
                s = linalg.as_matrix(s, rows=m)
            except ValueError as exc:
                raise InvalidFiltration(f"F^{k}: {exc}") from None
            if not np.all(np.isfinite(s)):
                raise InvalidFiltration(f"F^{k} has non-finite entries")
            r = linalg.numerical_rank(s, tol)
            if r != fr.f(k):
                raise InvalidFiltration(f"dim F^{k} = {r}, expected {fr.f(k)}")
            canon.append(linalg.canonical_span(s, tol))
        for k in range(1, n + 1):
            res = linalg.projection_residual(canon[k], canon[k - 1], tol)
            if res.size and np.max(res / np.linalg.norm(canon[k], axis=0)) > 10 * tol:
                raise InvalidFiltration(f"F^{k} is not contained in F^{k - 1}")
        for c in canon:
            c.flags.writeable = False
        object.__setattr__(self, "spans", tuple(canon))

    @classmethod
    def from_spans(cls, frame, spans):
        """Build from a ``{k: matrix}`` mapping or a list indexed by ``k``."""
        if isinstance(spans, dict):
            n = frame.weight
            lst = [spans.get(k, np.eye(frame.dim) if k == 0 else None) for k in range(n + 1)]
            if any(s is None for s in lst):
                missing = [k for k, s in enumerate(lst) if s is None]
                raise InvalidFiltration(f"missing spans for levels {missing}")
            spans = lst
        return cls(frame, tuple(spans))

    @classmethod
    def from_basis(cls, frame, basis):
        """Filtration whose ``F^k`` is spanned by the leading ``f^k`` columns."""
        basis = linalg.as_matrix(basis, rows=frame.dim)
        return cls(frame, tuple(basis[:, : frame.f(k)] for k in range(frame.weight + 1)))

    def __getitem__(self, k):
        if k > self.frame.weight:
            return np.zeros((self.frame.dim, 0), dtype=complex)
        return self.spans[k]

    def adapted_matrix(self):
        """An adapted basis of the flag (orthonormal steps, top level first)."""
        fr = self.frame
        cols = np.zeros((fr.dim, 0), dtype=complex)
        for k in range(fr.weight, -1, -1):
            u = linalg.orth(self.spans[k], fr.tolerance)
            if cols.shape[1]:
                u = u - cols @ (cols.conj().T @ u)
            u = linalg.orth(u, fr.tolerance)[:, : fr.h(k)]
            cols = np.hstack([cols, u])
        return cols

    def distance(self, other):
        """Largest principal angle over all levels."""
        self.frame.require_same(other.frame)
        return max(
            linalg.subspace_distance(a, b) for a, b in zip(self.spans, other.spans)
        )


@dataclass(frozen=True, eq=False)
class Decomposition:
    """``pieces[p]`` spans ``H^{p, n-p}``."""

    frame: HodgeFrame
    pieces: tuple

    def __post_init__(self):
        fr = self.frame
        if len(self.pieces) != fr.weight + 1:
            raise DimensionMismatch(f"need {fr.weight + 1} pieces")
        ps = []
        for p, piece in enumerate(self.pieces):
            piece = linalg.as_matrix(piece, rows=fr.dim)
            if piece.shape[1] != fr.h(p):
                raise DimensionMismatch(f"H^{p},{fr.weight - p} needs {fr.h(p)} columns")
            ps.append(piece)
        full = np.hstack(ps[::-1])
        if not linalg.is_nonsingular(full, fr.tolerance):
            raise DegenerateDecomposition("pieces are not jointly independent")
        for piece in ps:
            piece.flags.writeable = False
        object.__setattr__(self, "pieces", tuple(ps))

    def __getitem__(self, p):
        return self.pieces[p]

    def basis_matrix(self):
        """Concatenation ``H^{n,0} | ... | H^{0,n}`` (an adapted basis)."""
        return np.hstack(self.pieces[::-1])

    def filtration(self):
        return Filtration.from_basis(self.frame, self.basis_matrix())

    def conjugation_defect(self):
        """Largest angle between ``H^{n-p,p}`` and ``conj(H^{p,n-p})``."""
        fr = self.frame
        return max(
            linalg.subspace_distance(self.pieces[fr.weight - p], fr.conj(self.pieces[p]))
            for p in range(fr.weight + 1)
        )


@dataclass(frozen=True, eq=False)
class AdaptedBasis:
    """Ordered basis whose column blocks follow ``H^{n,0}, ..., H^{0,n}``.

    For a base point this plays the role of ``eta_0, ..., eta_{m-1}``.
    """

    frame: HodgeFrame
    matrix: np.ndarray

    def __post_init__(self):
        fr = self.frame
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (fr.dim, fr.dim):
            raise DimensionMismatch(f"adapted basis must be {fr.dim}x{fr.dim}")
        if not np.all(np.isfinite(mat)):
            raise DimensionMismatch("adapted basis has non-finite entries")
        if not linalg.is_nonsingular(mat, fr.tolerance):
            raise SingularBase("adapted basis is singular")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_decomposition(cls, decomposition):
        return cls(decomposition.frame, decomposition.basis_matrix())

    @classmethod
    def from_filtration(cls, filtration):
        """Adapted basis of the Hodge decomposition of a point in the domain."""
        return cls.from_decomposition(decomposition_from_filtration(filtration))

    @classmethod
    def standard(cls, frame):
        return cls(frame, np.eye(frame.dim, dtype=complex))

    def filtration(self):
        return Filtration.from_basis(self.frame, self.matrix)

    def piece(self, p):
        """Columns spanning the base piece ``H^{p, n-p}``."""
        fr = self.frame
        return self.matrix[:, fr.f(p + 1) : fr.f(p)]


class PointClass(str, enum.Enum):
    IN_D = "InD"
    IN_CHECK_D_ONLY = "InCheckDOnly"
    NOT_IN_CHECK_D = "NotInCheckD"


@dataclass
class FirstRiemannReport:
    residuals: dict
    tolerance: float
    passes: bool

    def to_dict(self):
        return {
            "passes": self.passes,
            "residuals": {str(k): v for k, v in self.residuals.items()},
            "tolerance": self.tolerance,
        }


@dataclass
class SecondRiemannReport:
    min_eigenvalues: dict
    threshold: float
    passes: bool

    def to_dict(self):
        return {
            "min_eigenvalues": {str(k): v for k, v in self.min_eigenvalues.items()},
            "passes": self.passes,
            "threshold": self.threshold,
        }


def decomposition_from_filtration(filtration):
    """``H^{k,n-k} = F^k & conj(F^{n-k})``.

    Raises NotAHodgeStructure unless ``H = F^k + conj(F^{n-k+1})`` is direct
    for every ``k`` and each intersection has the expected dimension.
    """
    F = filtration
    fr = F.frame
    n, m, tol = fr.weight, fr.dim, fr.tolerance
    for k in range(1, n + 1):
        a = linalg.orth(F[k], tol)
        b = linalg.orth(fr.conj(F[n - k + 1]), tol)
        if a.shape[1] + b.shape[1] != m:
            raise NotAHodgeStructure(
                f"dim F^{k} + dim F^{n - k + 1} = {a.shape[1] + b.shape[1]} != {m}"
            )
        if not linalg.is_nonsingular(np.hstack([a, b]), tol):
            raise NotAHodgeStructure(f"F^{k} meets conj(F^{n - k + 1})")
    pieces = []
    for p in range(n + 1):
        inter = linalg.intersect(F[p], fr.conj(F[n - p]), tol)
        if inter.shape[1] != fr.h(p):
            raise NotAHodgeStructure(
                f"dim F^{p} & conj F^{n - p} = {inter.shape[1]}, expected {fr.h(p)}"
            )
        pieces.append(linalg.canonical_span(inter, tol))
    try:
        return Decomposition(fr, tuple(pieces))
    except DegenerateDecomposition as exc:
        raise NotAHodgeStructure(str(exc)) from None


def weil_operator(decomposition):
    """Matrix acting as ``i**(2p-n)`` on ``H^{p,n-p}``."""
    D = decomposition
    fr = D.frame
    n = fr.weight
    basis = D.basis_matrix()
    if not linalg.is_nonsingular(basis, fr.tolerance):
        raise DegenerateDecomposition("pieces are not jointly independent")
    scal = np.concatenate(
        [np.full(fr.h(p), 1j ** ((2 * p - n) % 4)) for p in range(n, -1, -1)]
    )
    return basis @ np.diag(scal) @ scipy.linalg.inv(basis)


def check_first_riemann(filtration):
    """``Q(F^k, F^{n-k+1}) = 0`` for each ``k``.

    The residual at ``k`` is the spectral norm of ``U^T Q V`` with ``U, V``
    orthonormal bases of ``F^k`` and ``F^{n-k+1}``, relative to ``||Q||``.
    """
    F = filtration
    fr = F.frame
    n, tol = fr.weight, fr.tolerance
    qnorm = np.linalg.norm(fr.polarization, 2)
    residuals = {}
    for k in range(1, n + 1):
        u = linalg.orth(F[k], tol)
        v = linalg.orth(F[n - k + 1], tol)
        block = u.T @ fr.polarization @ v
        residuals[k] = float(np.linalg.norm(block, 2) / qnorm) if block.size else 0.0
    passes = all(r <= tol for r in residuals.values())
    return FirstRiemannReport(residuals, tol, passes)


def hermitian_forms(decomposition):
    """``H(u, v) = Q(Cu, conj v)`` restricted to each piece, on orthonormal bases."""
    D = decomposition
    fr = D.frame
    n = fr.weight
    out = {}
    for p in range(n + 1):
        b = linalg.orth(D[p], fr.tolerance)
        if b.shape[1] == 0:
            continue
        phase = 1j ** ((2 * p - n) % 4)
        h = phase * (b.T @ fr.polarization @ fr.conj(b))
        out[p] = (h + h.conj().T) / 2
    return out


def check_second_riemann(filtration, decomposition=None):
    """``Q(Cv, conj v) > 0`` on every nonzero piece vector."""
    fr = filtration.frame
    D = decomposition if decomposition is not None else decomposition_from_filtration(filtration)
    threshold = fr.tolerance * float(np.linalg.norm(fr.polarization, 2))
    mins = {p: float(np.linalg.eigvalsh(h)[0]) for p, h in hermitian_forms(D).items()}
    passes = all(v > threshold for v in mins.values())
    return SecondRiemannReport(mins, threshold, passes)


def classify_point(filtration):
    if not check_first_riemann(filtration).passes:
        return PointClass.NOT_IN_CHECK_D
    try:
        second = check_second_riemann(filtration)
    except NotAHodgeStructure:
        return PointClass.IN_CHECK_D_ONLY
    return PointClass.IN_D if second.passes else PointClass.IN_CHECK_D_ONLY


def conjugate_structure(filtration):
    """Filtration with ``F'^k = conj(F^k)``."""
    fr = filtration.frame
    return Filtration(fr, tuple(fr.conj(s) for s in filtration.spans))
