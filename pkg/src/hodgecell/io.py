"""JSON formats for frames, filtrations, adapted bases, paths and grids.

Complex numbers are ``[re, im]`` pairs; matrices of vectors are lists of
columns, except the frame's forms which are lists of rows.
"""

import json
import math
from pathlib import Path

import numpy as np

from .core import DEFAULT_TOL, AdaptedBasis, Filtration, HodgeFrame, build_polarization, polarization_sign
from .errors import HodgeError
from .paths import PeriodPath, SampleGrid

__all__ = [
    "InputError",
    "dumps",
    "load_json",
    "frame_from_dict",
    "frame_to_dict",
    "filtration_from_dict",
    "filtration_to_dict",
    "basis_from_dict",
    "basis_to_dict",
    "base_from_dict",
    "path_from_dict",
    "path_to_dict",
    "grid_from_dict",
    "grid_to_dict",
    "complex_to_json",
    "matrix_to_columns",
    "matrix_to_rows",
]


class InputError(Exception):
    """Malformed input; ``where`` names the file/field."""

    def __init__(self, where, message):
        self.where = where
        super().__init__(f"{where}: {message}")


def _fmt_float(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        return "0.0"
    text = format(x, ".17g")
    return text if any(c in text for c in ".en") else text + ".0"


def _encode(obj, out):
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj, key=str)):
            if i:
                out.append(", ")
            out.append(json.dumps(str(key)))
            out.append(": ")
            _encode(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _encode(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj):
    """Deterministic JSON: sorted keys, floats with 17 significant digits."""
    out = []
    _encode(obj, out)
    return "".join(out) + "\n"


def load_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(str(path), f"cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(str(path), f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def _complex(value, where):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        z = complex(value[0], value[1])
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise InputError(where, "non-finite number")
        return z
    raise InputError(where, "expected a complex number as [re, im]")


def _vector(value, where):
    if not isinstance(value, list):
        raise InputError(where, "expected a list of [re, im] entries")
    return np.array([_complex(v, f"{where}[{i}]") for i, v in enumerate(value)], dtype=complex)


def _columns(value, rows, where):
    if not isinstance(value, list):
        raise InputError(where, "expected a list of columns")
    if not value:
        return np.zeros((rows, 0), dtype=complex)
    cols = [_vector(c, f"{where}[{j}]") for j, c in enumerate(value)]
    for j, c in enumerate(cols):
        if c.size != rows:
            raise InputError(f"{where}[{j}]", f"column has {c.size} entries, expected {rows}")
    return np.column_stack(cols)


def _rows(value, where):
    if not isinstance(value, list) or not value:
        raise InputError(where, "expected a non-empty list of rows")
    rows = [_vector(r, f"{where}[{i}]") for i, r in enumerate(value)]
    if any(r.size != rows[0].size for r in rows):
        raise InputError(where, "rows have different lengths")
    return np.vstack(rows)


def matrix_to_columns(mat):
    mat = np.asarray(mat, dtype=complex)
    return [[complex_to_json(z) for z in mat[:, j]] for j in range(mat.shape[1])]


def matrix_to_rows(mat):
    mat = np.asarray(mat, dtype=complex)
    return [[complex_to_json(z) for z in row] for row in mat]


def _field(data, key, where, kind=None):
    if not isinstance(data, dict):
        raise InputError(where, "expected a JSON object")
    if key not in data:
        raise InputError(where, f"missing field '{key}'")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise InputError(f"{where}.{key}", f"expected {kind.__name__}")
    return value


def frame_from_dict(data, where="frame"):
    weight = _field(data, "weight", where, int)
    hodge = _field(data, "hodge_numbers", where, list)
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in hodge):
        raise InputError(f"{where}.hodge_numbers", "expected integers")
    form = _rows(_field(data, "intersection_form", where), f"{where}.intersection_form")
    tol = data.get("tolerance", DEFAULT_TOL)
    if not isinstance(tol, (int, float)) or isinstance(tol, bool):
        raise InputError(f"{where}.tolerance", "expected a number")
    real = data.get("real_structure")
    if real is not None:
        real = _rows(real, f"{where}.real_structure")
    try:
        q = build_polarization(weight, form, float(tol))
        return HodgeFrame(weight, tuple(hodge), q, float(tol), real)
    except (HodgeError, ValueError) as exc:
        raise InputError(where, f"{type(exc).__name__}: {exc}") from None


def frame_to_dict(frame):
    out = {
        "hodge_numbers": list(frame.hodge_numbers),
        "intersection_form": matrix_to_rows(polarization_sign(frame.weight) * frame.polarization),
        "tolerance": frame.tolerance,
        "weight": frame.weight,
    }
    if not np.array_equal(frame.real_structure, np.eye(frame.dim)):
        out["real_structure"] = matrix_to_rows(frame.real_structure)
    return out


def resolve_frame(data, where, frame=None, relative_to=None):
    """Frame given inline, as a path, or by the caller (``frame`` wins)."""
    if frame is not None:
        return frame
    ref = data.get("frame") if isinstance(data, dict) else None
    if ref is None:
        raise InputError(where, "no frame given (inline 'frame' field or --frame)")
    if isinstance(ref, str):
        p = Path(ref)
        if relative_to is not None and not p.is_absolute():
            p = Path(relative_to).parent / p
        return frame_from_dict(load_json(p), str(p))
    return frame_from_dict(ref, f"{where}.frame")


def _spans(data, frame, where):
    spans = _field(data, "spans", where, dict)
    out = {}
    for key, cols in spans.items():
        try:
            k = int(key)
        except ValueError:
            raise InputError(f"{where}.spans", f"level key '{key}' is not an integer") from None
        if not (0 <= k <= frame.weight):
            raise InputError(f"{where}.spans", f"level {k} outside [0, {frame.weight}]")
        out[k] = _columns(cols, frame.dim, f"{where}.spans.{key}")
    try:
        return Filtration.from_spans(frame, out)
    except (HodgeError, ValueError) as exc:
        raise InputError(where, f"{type(exc).__name__}: {exc}") from None


def filtration_from_dict(data, where="filtration", frame=None, relative_to=None):
    frame = resolve_frame(data, where, frame, relative_to)
    return _spans(data, frame, where)


def filtration_to_dict(filtration, include_frame=True):
    out = {
        "spans": {str(k): matrix_to_columns(s) for k, s in enumerate(filtration.spans)},
    }
    if include_frame:
        out["frame"] = frame_to_dict(filtration.frame)
    return out


def basis_from_dict(data, where="basis", frame=None, relative_to=None):
    frame = resolve_frame(data, where, frame, relative_to)
    mat = _columns(_field(data, "basis", where), frame.dim, f"{where}.basis")
    try:
        return AdaptedBasis(frame, mat)
    except (HodgeError, ValueError) as exc:
        raise InputError(where, f"{type(exc).__name__}: {exc}") from None


def basis_to_dict(basis, include_frame=True):
    out = {"basis": matrix_to_columns(basis.matrix)}
    if include_frame:
        out["frame"] = frame_to_dict(basis.frame)
    return out


def base_from_dict(data, where="base", frame=None, relative_to=None):
    """A base point given either as an adapted basis or as a filtration in D."""
    if isinstance(data, dict) and "basis" in data:
        return basis_from_dict(data, where, frame, relative_to)
    filt = filtration_from_dict(data, where, frame, relative_to)
    try:
        return AdaptedBasis.from_filtration(filt)
    except HodgeError as exc:
        raise InputError(where, f"base filtration has no Hodge decomposition: {exc}") from None


def path_from_dict(data, where="path", frame=None, relative_to=None):
    frame = resolve_frame(data, where, frame, relative_to)
    params = _field(data, "parameters", where, list)
    filts = _field(data, "filtrations", where, list)
    ts = [_complex(t, f"{where}.parameters[{i}]") for i, t in enumerate(params)]
    fs = [_spans(f, frame, f"{where}.filtrations[{i}]") for i, f in enumerate(filts)]
    try:
        path = PeriodPath(tuple(ts), tuple(fs), frame)
    except (HodgeError, ValueError) as exc:
        raise InputError(where, f"{type(exc).__name__}: {exc}") from None
    base = data.get("base")
    if base is not None:
        base = base_from_dict(base, f"{where}.base", frame, relative_to)
    return path, base


def path_to_dict(path, base=None):
    out = {
        "filtrations": [filtration_to_dict(f, include_frame=False) for f in path.filtrations],
        "frame": frame_to_dict(path.frame),
        "parameters": [complex_to_json(t) for t in path.parameters],
    }
    if base is not None:
        out["base"] = basis_to_dict(base, include_frame=False)
    return out


def grid_from_dict(data, where="grid", frame=None, relative_to=None):
    frame = resolve_frame(data, where, frame, relative_to)
    origin = _complex(_field(data, "origin", where), f"{where}.origin")
    step = _field(data, "step", where)
    if not isinstance(step, (int, float)) or isinstance(step, bool):
        raise InputError(f"{where}.step", "expected a number")
    rows = _field(data, "filtrations", where, list)
    grid_rows = []
    for a, row in enumerate(rows):
        if not isinstance(row, list):
            raise InputError(f"{where}.filtrations[{a}]", "expected a list")
        grid_rows.append(tuple(_spans(f, frame, f"{where}.filtrations[{a}][{b}]") for b, f in enumerate(row)))
    try:
        grid = SampleGrid(origin, float(step), tuple(grid_rows), frame)
    except (HodgeError, ValueError) as exc:
        raise InputError(where, f"{type(exc).__name__}: {exc}") from None
    base = data.get("base")
    if base is not None:
        base = base_from_dict(base, f"{where}.base", frame, relative_to)
    return grid, base


def grid_to_dict(grid, base=None):
    out = {
        "filtrations": [[filtration_to_dict(f, include_frame=False) for f in row] for row in grid.filtrations],
        "frame": frame_to_dict(grid.frame),
        "origin": complex_to_json(grid.origin),
        "step": grid.step,
    }
    if base is not None:
        out["base"] = basis_to_dict(base, include_frame=False)
    return out
