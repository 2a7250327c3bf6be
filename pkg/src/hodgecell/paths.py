"""Sampled period maps and checks of holomorphicity and Griffiths
transversality."""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .cell import affine_coordinates, nplus_representative
from .errors import DimensionMismatch, StepTooLarge

__all__ = [
    "DEFAULT_PATH_TOL",
    "DEFAULT_MAX_STEP",
    "PeriodPath",
    "SampleGrid",
    "TransversalityReport",
    "HolomorphicityReport",
    "sample_path",
    "sample_grid",
    "transversality_check",
    "holomorphicity_check",
]

DEFAULT_PATH_TOL = 1e-5
DEFAULT_MAX_STEP = 0.25


@dataclass(frozen=True, eq=False)
class PeriodPath:
    parameters: tuple
    filtrations: tuple
    frame: object

    def __post_init__(self):
        params = tuple(complex(t) for t in self.parameters)
        filts = tuple(self.filtrations)
        if len(params) != len(filts):
            raise DimensionMismatch("parameters and filtrations differ in length")
        if len(params) < 3:
            raise DimensionMismatch("a path needs at least 3 samples")
        if any(a == b for a, b in zip(params, params[1:])):
            raise DimensionMismatch("consecutive parameters must be distinct")
        for f in filts:
            self.frame.require_same(f.frame)
        object.__setattr__(self, "parameters", params)
        object.__setattr__(self, "filtrations", filts)


@dataclass(frozen=True, eq=False)
class SampleGrid:
    """``filtrations[a][b]`` is the family at ``origin + a*step + 1j*b*step``."""

    origin: complex
    step: float
    filtrations: tuple
    frame: object

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.filtrations)
        if len(rows) < 3 or any(len(r) != len(rows[0]) for r in rows) or len(rows[0]) < 3:
            raise DimensionMismatch("grid must be rectangular and at least 3x3")
        if not self.step > 0:
            raise DimensionMismatch("grid step must be positive")
        for r in rows:
            for f in r:
                self.frame.require_same(f.frame)
        object.__setattr__(self, "filtrations", rows)
        object.__setattr__(self, "origin", complex(self.origin))
        object.__setattr__(self, "step", float(self.step))

    @property
    def shape(self):
        return len(self.filtrations), len(self.filtrations[0])


def sample_path(family, parameters):
    params = list(parameters)
    filts = [family(t) for t in params]
    return PeriodPath(tuple(params), tuple(filts), filts[0].frame)


def sample_grid(family, origin, step, radius=1):
    """Samples on the ``(2r+1) x (2r+1)`` grid centered at ``origin``."""
    origin = complex(origin)
    idx = range(-radius, radius + 1)
    rows = [[family(origin + a * step + 1j * b * step) for b in idx] for a in idx]
    corner = origin - radius * step * (1 + 1j)
    return SampleGrid(corner, step, tuple(tuple(r) for r in rows), rows[0][0].frame)


def _section_frames(rep, base):
    """Section matrices ``S^i`` (columns ``s_j`` at level ``i``) for every level."""
    fr = base.frame
    full = base.matrix @ rep.matrix
    out = []
    for i in range(fr.weight + 1):
        f = fr.f(i)
        lead = rep.matrix[:f, :f]
        out.append(full[:, :f] @ np.linalg.solve(lead, np.eye(f)) if f else full[:, :0])
    return out


def _representatives(filtrations, base, max_step):
    reps = [nplus_representative(f, base) for f in filtrations]
    coords = [affine_coordinates(r).values for r in reps]
    for j in range(len(coords) - 1):
        jump = float(np.linalg.norm(coords[j + 1] - coords[j]))
        if jump > max_step:
            raise StepTooLarge(f"affine coordinates jump by {jump:.3g} between samples {j} and {j + 1}")
    return reps


@dataclass
class TransversalityReport:
    residuals: np.ndarray
    max_residual: float
    worst: tuple
    tolerance: float
    passes: bool

    def to_dict(self):
        return {
            "max_residual": self.max_residual,
            "passes": self.passes,
            "residuals": [[float(x) for x in row] for row in self.residuals],
            "tolerance": self.tolerance,
            "worst_step": self.worst[0],
            "worst_level": self.worst[1],
        }


def transversality_check(path, base, tol=DEFAULT_PATH_TOL, max_step=DEFAULT_MAX_STEP):
    """Check ``dF^i/dt`` lies in ``F^{i-1}`` along the sampled path.

    Between samples ``j`` and ``j+1`` the derivative of the level-``i``
    section frame is the forward difference quotient, compared against
    ``F^{i-1}`` at sample ``j``.  The scheme is first order: on a horizontal
    path the residual is ``O(step)`` and halves with the step.
    ``residuals[j, i-1]`` is the largest column residual after projection.
    """
    fr = path.frame
    fr.require_same(base.frame)
    reps = _representatives(path.filtrations, base, max_step)
    frames = [_section_frames(r, base) for r in reps]
    n = fr.weight
    res = np.zeros((len(reps) - 1, n))
    for j in range(len(reps) - 1):
        dt = path.parameters[j + 1] - path.parameters[j]
        for i in range(1, n + 1):
            d = (frames[j + 1][i] - frames[j][i]) / dt
            if i - 1 == 0 or d.shape[1] == 0:
                continue
            r = linalg.projection_residual(d, frames[j][i - 1], fr.tolerance)
            res[j, i - 1] = float(np.max(r))
    flat = int(np.argmax(res)) if res.size else 0
    worst = (int(flat // n), int(flat % n) + 1) if res.size else (0, 1)
    mx = float(res.max()) if res.size else 0.0
    return TransversalityReport(res, mx, worst, tol, mx <= tol)


@dataclass
class HolomorphicityReport:
    dbar_norms: np.ndarray
    max_dbar: float
    step: float
    tolerance: float
    passes: bool

    def to_dict(self):
        return {
            "dbar_norms": [[float(x) for x in row] for row in self.dbar_norms],
            "max_dbar": self.max_dbar,
            "passes": self.passes,
            "step": self.step,
            "tolerance": self.tolerance,
        }


def holomorphicity_check(grid, base, tol=DEFAULT_PATH_TOL, max_step=DEFAULT_MAX_STEP):
    """``d/dzbar`` of the unipotent representative entries at interior grid points.

    Uses ``(d/dx + i d/dy) / 2`` with central differences in x and y.
    """
    fr = grid.frame
    fr.require_same(base.frame)
    nx, ny = grid.shape
    reps = [[nplus_representative(f, base) for f in row] for row in grid.filtrations]
    coords = [[affine_coordinates(r).values for r in row] for row in reps]
    for a in range(nx):
        for b in range(ny):
            for da, db in ((1, 0), (0, 1)):
                if a + da < nx and b + db < ny:
                    jump = float(np.linalg.norm(coords[a + da][b + db] - coords[a][b]))
                    if jump > max_step:
                        raise StepTooLarge(f"affine coordinates jump by {jump:.3g} near sample ({a}, {b})")
    reps = [[r.matrix for r in row] for row in reps]
    h = grid.step
    out = np.zeros((nx - 2, ny - 2))
    for a in range(1, nx - 1):
        for b in range(1, ny - 1):
            dx = (reps[a + 1][b] - reps[a - 1][b]) / (2 * h)
            dy = (reps[a][b + 1] - reps[a][b - 1]) / (2 * h)
            out[a - 1, b - 1] = float(np.max(np.abs(0.5 * (dx + 1j * dy))))
    mx = float(out.max())
    return HolomorphicityReport(out, mx, h, tol, mx <= tol)
