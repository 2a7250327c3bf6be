"""Block conventions, block-LU factorization and unipotent-cell coordinates.

Block ``(a, b)`` of an ``m x m`` matrix has rows ``f^{n-a+1} .. f^{n-a}-1``
and columns ``f^{n-b+1} .. f^{n-b}-1``: block index 0 is ``H^{n,0}``, block
index ``n`` is ``H^{0,n}``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import linalg
from .core import DEFAULT_TOL, AdaptedBasis, Filtration
from .errors import DimensionMismatch, InvalidFrame, NotInCell, SingularBase

__all__ = [
    "BlockScheme",
    "UnipotentMatrix",
    "AffineCoordinates",
    "block_partition",
    "assemble_blocks",
    "transition_matrix",
    "block_lu",
    "leading_block_minors_ok",
    "nplus_representative",
    "affine_coordinates",
    "filtration_from_unipotent",
]


@dataclass(frozen=True)
class BlockScheme:
    """Block widths ``h^{n,0}, ..., h^{0,n}`` in block order."""

    widths: tuple

    def __post_init__(self):
        w = tuple(int(x) for x in self.widths)
        if not w or any(x < 0 for x in w):
            raise InvalidFrame(f"invalid block widths {self.widths}")
        object.__setattr__(self, "widths", w)

    @classmethod
    def from_frame(cls, frame):
        return cls(frame.hodge_numbers)

    @property
    def weight(self):
        return len(self.widths) - 1

    @property
    def dim(self):
        return sum(self.widths)

    @property
    def offsets(self):
        """``offsets[a]`` is the first index of block ``a`` (``f^{n-a+1}``)."""
        return tuple(np.concatenate([[0], np.cumsum(self.widths)]).astype(int).tolist())

    def slice(self, a):
        o = self.offsets
        return slice(o[a], o[a + 1])

    def lead(self, a):
        """Size of the leading principal block submatrix through block ``a``."""
        return self.offsets[a + 1]


@dataclass(frozen=True, eq=False)
class UnipotentMatrix:
    """Block lower-triangular matrix with identity diagonal blocks (an element of N+)."""

    scheme: BlockScheme
    matrix: np.ndarray
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        s = self.scheme
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (s.dim, s.dim):
            raise DimensionMismatch(f"expected {s.dim}x{s.dim}, got {mat.shape}")
        scale = max(1.0, float(np.max(np.abs(mat)))) if mat.size else 1.0
        for a in range(s.weight + 1):
            sa = s.slice(a)
            diag = mat[sa, sa]
            if diag.size and np.max(np.abs(diag - np.eye(diag.shape[0]))) > self.tolerance * scale:
                raise DimensionMismatch(f"diagonal block {a} is not the identity")
            upper = mat[sa, s.offsets[a + 1]:]
            if upper.size and np.max(np.abs(upper)) > self.tolerance * scale:
                raise DimensionMismatch(f"block row {a} has nonzero entries above the diagonal")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    def block(self, a, b):
        return self.matrix[self.scheme.slice(a), self.scheme.slice(b)]

    def __matmul__(self, other):
        if not isinstance(other, UnipotentMatrix):
            return NotImplemented
        if other.scheme != self.scheme:
            raise DimensionMismatch("block schemes differ")
        return UnipotentMatrix(self.scheme, self.matrix @ other.matrix, self.tolerance)


@dataclass(frozen=True, eq=False)
class AffineCoordinates:
    """The (1,0)-block flattened column-major."""

    values: np.ndarray
    shape: tuple

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).ravel()
        if v.size != self.shape[0] * self.shape[1]:
            raise DimensionMismatch("coordinate length does not match block shape")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    def as_block(self):
        return self.values.reshape(self.shape, order="F")


def block_partition(matrix, scheme):
    """All blocks ``T^{a,b}`` as a dict keyed by ``(a, b)``."""
    t = np.asarray(matrix)
    if t.shape != (scheme.dim, scheme.dim):
        raise DimensionMismatch(f"expected {scheme.dim}x{scheme.dim}, got {t.shape}")
    nb = scheme.weight + 1
    return {(a, b): t[scheme.slice(a), scheme.slice(b)] for a in range(nb) for b in range(nb)}


def assemble_blocks(blocks, scheme):
    nb = scheme.weight + 1
    dtype = np.result_type(*[np.asarray(b).dtype for b in blocks.values()])
    out = np.zeros((scheme.dim, scheme.dim), dtype=dtype)
    for a in range(nb):
        for b in range(nb):
            out[scheme.slice(a), scheme.slice(b)] = blocks[(a, b)]
    return out


def transition_matrix(base, target):
    """``A`` with ``target.matrix = base.matrix @ A``."""
    base.frame.require_same(target.frame)
    tol = base.frame.tolerance
    if not linalg.is_nonsingular(base.matrix, tol):
        raise SingularBase("base adapted basis is singular")
    tgt = target.matrix if isinstance(target, AdaptedBasis) else np.asarray(target)
    return scipy.linalg.solve(base.matrix, tgt)


def leading_block_minors_ok(a, scheme, tol):
    """First level ``k`` whose leading block submatrix is singular, or None."""
    n = scheme.weight
    for blk in range(n + 1):
        size = scheme.lead(blk)
        if size == 0 or (blk > 0 and scheme.widths[blk] == 0):
            continue
        if not linalg.is_nonsingular(a[:size, :size], tol):
            return n - blk
    return None


def block_lu(a, scheme, tol=DEFAULT_TOL):
    """Factor ``A = L @ U`` with ``L`` block unipotent lower, ``U`` block upper.

    Block Gaussian elimination without pivoting across block boundaries.
    Raises ``NotInCell(k)`` for the first (largest) ``k`` whose leading
    principal block submatrix ``[A^{i,j}]_{0<=i,j<=n-k}`` is singular.
    """
    a = np.asarray(a, dtype=complex)
    m = scheme.dim
    if a.shape != (m, m):
        raise DimensionMismatch(f"expected {m}x{m}, got {a.shape}")
    bad = leading_block_minors_ok(a, scheme, tol)
    if bad is not None:
        raise NotInCell(bad)
    low = np.eye(m, dtype=complex)
    up = np.zeros((m, m), dtype=complex)
    o = scheme.offsets
    for blk in range(scheme.weight + 1):
        s = scheme.slice(blk)
        if s.start == s.stop:
            continue
        head = o[blk]
        up[s, head:] = a[s, head:] - low[s, :head] @ up[:head, head:]
        rest = slice(o[blk + 1], m)
        rhs = a[rest, s] - low[rest, :head] @ up[:head, s]
        if rhs.size:
            low[rest, s] = scipy.linalg.solve(up[s, s].T, rhs.T).T
    for blk in range(scheme.weight + 1):
        sb = scheme.slice(blk)
        low[sb, sb] = np.eye(sb.stop - sb.start)
    return UnipotentMatrix(scheme, low, tol), up


def nplus_representative(filtration, base):
    """Unique unipotent ``A~`` with ``base.matrix @ A~`` adapted to the filtration."""
    fr = filtration.frame
    fr.require_same(base.frame)
    a = transition_matrix(base, AdaptedBasis(fr, filtration.adapted_matrix()))
    low, _ = block_lu(a, BlockScheme.from_frame(fr), fr.tolerance)
    return low


def affine_coordinates(unipotent):
    """(1,0)-block of ``A~`` flattened column-major."""
    s = unipotent.scheme
    if s.weight < 1:
        return AffineCoordinates(np.zeros(0), (0, 0))
    blk = unipotent.block(1, 0)
    return AffineCoordinates(blk.ravel(order="F"), blk.shape)


def filtration_from_unipotent(unipotent, base):
    """Flag spanned by the leading columns of ``base.matrix @ A~``."""
    return Filtration.from_basis(base.frame, base.matrix @ unipotent.matrix)
