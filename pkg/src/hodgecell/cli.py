"""Command-line front end.

Exit codes: 0 pass, 1 checked-and-failed, 2 input error.
"""

import argparse
import sys

import numpy as np

from . import io, linalg
from .cell import affine_coordinates, nplus_representative
from .core import (
    HodgeFrame,
    PointClass,
    check_first_riemann,
    check_second_riemann,
    classify_point,
)
from .errors import (
    FrameMismatch,
    HodgeError,
    IndexOutOfRange,
    LevelOutOfRange,
    NotAHodgeStructure,
    NotInCell,
    UnsupportedFrame,
)
from .families import (
    HK_DEFAULT_N,
    hk_weight2_base,
    hk_weight2_frame,
    hk_weight2_point,
    weight1_base,
    weight1_frame,
    weight1_point,
)
from .paths import (
    DEFAULT_MAX_STEP,
    DEFAULT_PATH_TOL,
    holomorphicity_check,
    sample_grid,
    sample_path,
    transversality_check,
)
from .sections import (
    ConjugacyVerdict,
    conjugate_obstruction,
    projection,
    section_matrix,
    splitting_check,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _frame_override(args):
    frame = None
    if getattr(args, "frame", None):
        frame = io.frame_from_dict(io.load_json(args.frame), args.frame)
    return frame


def _with_tol(frame, tol):
    if tol is None or frame is None:
        return frame
    return HodgeFrame(frame.weight, frame.hodge_numbers, frame.polarization, tol, frame.real_structure)


def _load(reader, path, args, frame=None):
    data = io.load_json(path)
    frame = frame or _frame_override(args)
    if frame is None:
        frame = io.resolve_frame(data, path, relative_to=path)
    frame = _with_tol(frame, getattr(args, "tol", None))
    return reader(data, path, frame=frame, relative_to=path)


def _complex_list(z):
    return [io.complex_to_json(v) for v in np.ravel(z)]


def _emit(report, out=None):
    text = io.dumps(report)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args):
    filt = _load(io.filtration_from_dict, args.input, args)
    first = check_first_riemann(filt)
    report = {"first_riemann": first.to_dict(), "tolerance": filt.frame.tolerance}
    try:
        second = check_second_riemann(filt)
        report["second_riemann"] = second.to_dict()
        report["decomposition_error"] = None
    except NotAHodgeStructure as exc:
        report["second_riemann"] = None
        report["decomposition_error"] = str(exc)
    cls = classify_point(filt)
    report["classification"] = cls.value
    return report, EXIT_PASS if cls is PointClass.IN_D else EXIT_FAIL


def _base(args, frame):
    if not args.base:
        raise io.InputError("--base", "a base point is required")
    return _load(io.base_from_dict, args.base, args, frame=frame)


def _not_in_cell(exc, frame):
    return {"error": "NotInCell", "level": exc.level, "tolerance": frame.tolerance}, EXIT_FAIL


def cmd_coords(args):
    filt = _load(io.filtration_from_dict, args.input, args)
    base = _base(args, filt.frame)
    try:
        rep = nplus_representative(filt, base)
    except NotInCell as exc:
        return _not_in_cell(exc, filt.frame)
    coords = affine_coordinates(rep)
    report = {
        "affine_coordinates": _complex_list(coords.values),
        "tolerance": filt.frame.tolerance,
        "unipotent_matrix": io.matrix_to_rows(rep.matrix),
    }
    return report, EXIT_PASS


def cmd_sections(args):
    filt = _load(io.filtration_from_dict, args.input, args)
    base = _base(args, filt.frame)
    try:
        proj = projection(filt, base, args.level)
    except NotInCell as exc:
        return _not_in_cell(exc, filt.frame)
    secs = section_matrix(filt, base, args.level, proj)
    sv = linalg.singular_values(secs)
    report = {
        "level": args.level,
        "min_singular": float(sv[-1]) if sv.size else 0.0,
        "projection_matrix": io.matrix_to_rows(proj.matrix),
        "sections": io.matrix_to_columns(secs),
        "tolerance": filt.frame.tolerance,
    }
    return report, EXIT_PASS


def cmd_split(args):
    fa = _load(io.filtration_from_dict, args.a, args)
    fb = _load(io.filtration_from_dict, args.b, args, frame=fa.frame)
    levels = [args.level] if args.level is not None else list(range(1, fa.frame.weight + 1))
    reps = [splitting_check(fa, fb, k) for k in levels]
    ok = all(r.passes for r in reps)
    report = {"checks": [r.to_dict() for r in reps], "passes": ok, "tolerance": fa.frame.tolerance}
    return report, EXIT_PASS if ok else EXIT_FAIL


def cmd_conjugate(args):
    fa = _load(io.filtration_from_dict, args.a, args)
    fb = _load(io.filtration_from_dict, args.b, args, frame=fa.frame)
    rep = conjugate_obstruction(fa, fb)
    code = EXIT_PASS if rep.verdict is ConjugacyVerdict.DISTINCT else EXIT_FAIL
    return rep.to_dict(), code


def _path_base(args, embedded, frame):
    if args.base:
        return _base(args, frame)
    if embedded is None:
        raise io.InputError("--base", "no base given and the input has no 'base' field")
    return embedded


def cmd_transversality(args):
    path, embedded = _load(io.path_from_dict, args.input, args)
    base = _path_base(args, embedded, path.frame)
    tol = args.path_tol if args.path_tol is not None else DEFAULT_PATH_TOL
    try:
        rep = transversality_check(path, base, tol=tol, max_step=args.max_step)
    except NotInCell as exc:
        return _not_in_cell(exc, path.frame)
    out = rep.to_dict()
    steps = [abs(b - a) for a, b in zip(path.parameters, path.parameters[1:])]
    out["max_step"] = float(max(steps))
    return out, EXIT_PASS if rep.passes else EXIT_FAIL


def cmd_holomorphy(args):
    grid, embedded = _load(io.grid_from_dict, args.input, args)
    base = _path_base(args, embedded, grid.frame)
    tol = args.path_tol if args.path_tol is not None else DEFAULT_PATH_TOL
    try:
        rep = holomorphicity_check(grid, base, tol=tol, max_step=args.max_step)
    except NotInCell as exc:
        return _not_in_cell(exc, grid.frame)
    return rep.to_dict(), EXIT_PASS if rep.passes else EXIT_FAIL


def _parse_tau(text):
    try:
        return np.array([complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()])
    except ValueError:
        raise io.InputError("--tau", f"cannot parse '{text}' as comma-separated complex numbers") from None


def cmd_example(args):
    if not args.out:
        raise io.InputError("--out", "an output path is required")
    tol = args.tol if args.tol is not None else None
    if args.name == "hk-weight2":
        n = args.n
        frame = hk_weight2_frame(n, tol) if tol is not None else hk_weight2_frame(n)
        tau = _parse_tau(args.tau) if args.tau else np.zeros(n, dtype=complex)
        if tau.size != n:
            raise io.InputError("--tau", f"expected {n} entries, got {tau.size}")

        def point(t):
            return hk_weight2_point(t * tau if args.kind == "path" else tau, frame)

        base = hk_weight2_base(frame)
    else:
        frame = weight1_frame(tol) if tol is not None else weight1_frame()
        tau = _parse_tau(args.tau) if args.tau else np.array([1j])
        if tau.size != 1:
            raise io.InputError("--tau", "weight1 takes one complex parameter")
        t0 = complex(tau[0])

        def point(t):
            return weight1_point(t0 + t if args.kind in ("path", "grid") else t0, frame)

        base = weight1_base(frame, t0 if args.kind == "base" else 1j)
    step = args.step if args.step is not None else 1e-3
    if args.kind == "point":
        data = io.filtration_to_dict(point(0.0))
    elif args.kind == "base":
        data = io.basis_to_dict(base)
    elif args.kind == "path":
        ts = np.arange(0.0, args.path_end + step / 2, step)
        data = io.path_to_dict(sample_path(point, ts), base)
    else:
        data = io.grid_to_dict(sample_grid(point, 0.0, step), base)
    _emit(data, args.out)
    return {"kind": args.kind, "name": args.name, "out": args.out, "step": step}, EXIT_PASS


def build_parser():
    p = _Parser(prog="hodgecell", description="Polarized Hodge structures and unipotent-cell coordinates.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--frame", help="frame file (overrides any inline frame)")
        sp.add_argument("--tol", type=float, help="rank/nonsingularity tolerance")

    sp = sub.add_parser("validate", help="classify a filtration")
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("coords", help="unipotent representative and affine coordinates")
    sp.add_argument("input")
    sp.add_argument("--base")
    common(sp)
    sp.set_defaults(func=cmd_coords)

    sp = sub.add_parser("sections", help="trivializing sections at one level")
    sp.add_argument("input")
    sp.add_argument("--base")
    sp.add_argument("--level", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_sections)

    sp = sub.add_parser("split", help="splitting H = F^k_a + conj F^{n-k+1}_b")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--level", type=int)
    common(sp)
    sp.set_defaults(func=cmd_split)

    sp = sub.add_parser("conjugate", help="conjugate-deformation obstruction")
    sp.add_argument("a")
    sp.add_argument("b")
    common(sp)
    sp.set_defaults(func=cmd_conjugate)

    for name, func in (("transversality", cmd_transversality), ("holomorphy", cmd_holomorphy)):
        sp = sub.add_parser(name, help=f"{name} check on sampled data")
        sp.add_argument("input")
        sp.add_argument("--base")
        sp.add_argument("--path-tol", type=float, help=f"residual tolerance (default {DEFAULT_PATH_TOL})")
        sp.add_argument("--max-step", type=float, default=DEFAULT_MAX_STEP)
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("example", help="write a built-in family sample")
    sp.add_argument("name", choices=["hk-weight2", "weight1"])
    sp.add_argument("--kind", choices=["point", "base", "path", "grid"], default="point")
    sp.add_argument("--n", type=int, default=HK_DEFAULT_N)
    sp.add_argument("--tau", help="comma-separated complex parameters (path: direction)")
    sp.add_argument("--step", type=float)
    sp.add_argument("--path-end", type=float, default=0.5)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_example)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
    except io.InputError as exc:
        sys.stderr.write(f"hodgecell: input error: {exc}\n")
        return EXIT_INPUT
    except (LevelOutOfRange, IndexOutOfRange, FrameMismatch, UnsupportedFrame) as exc:
        sys.stderr.write(f"hodgecell: input error: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    except HodgeError as exc:
        sys.stderr.write(f"hodgecell: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    except Exception as exc:  # malformed input must not produce a traceback
        sys.stderr.write(f"hodgecell: input error: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    if args.command != "example":
        _emit(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
