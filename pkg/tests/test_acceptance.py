"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import sys
import time
from pathlib import Path

import numpy as np
import pytest

import hodgecell as hc
from hodgecell.cli import main as cli_main

sys.path.insert(0, str(Path(__file__).parent))
from conftest import exact_det, random_tau  # noqa: E402

FIX = Path(__file__).parent / "fixtures"
SEED = 20261015


def report(num, title, ok, detail, elapsed, limit):
    ok = ok and elapsed < limit
    status = "PASS" if ok else "FAIL"
    line = f"[{status}] criterion {num:2d} {title}: {detail} ({elapsed:.2f} s, limit {limit} s)"
    print(line)
    return ok, line


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def hk_samples(rng, count=100):
    out = []
    for n in (3, 19):
        fr = hc.hk_weight2_frame(n)
        out += [(fr, random_tau(rng, n)) for _ in range(count)]
    return out


# -- criteria ----------------------------------------------------------------

def criterion_1():
    rng = np.random.default_rng(SEED)

    def run():
        iso = sec = 0.0
        bases = {}
        for fr, tau in hk_samples(rng):
            base = bases.setdefault(fr.dim, hc.hk_weight2_base(fr))
            f = hc.hk_weight2_point(tau, fr)
            om = f[2][:, 0] / f[2][0, 0]
            iso = max(iso, float(np.max(np.abs(fr.pair(om, om)))))
            s = hc.section_value(f, base, 2, 0).vector
            sec = max(sec, float(np.max(np.abs(s - hc.hk_omega(tau)))))
        return iso, sec

    (iso, sec), dt = timed(run)
    return report(1, "closed-form family", iso <= 1e-12 and sec <= 1e-10,
                  f"max |Q(Omega,Omega)| = {iso:.2e}, max section error = {sec:.2e}", dt, 5)


def criterion_2():
    rng = np.random.default_rng(SEED)

    def run():
        err = 0.0
        bases = {}
        for fr, tau in hk_samples(rng):
            base = bases.setdefault(fr.dim, hc.hk_weight2_base(fr))
            rep = hc.nplus_representative(hc.hk_weight2_point(tau, fr), base)
            err = max(err, float(np.max(np.abs(hc.affine_coordinates(rep).values - tau))))
        return err

    err, dt = timed(run)
    return report(2, "affine-coordinate round trip", err <= 1e-10, f"max error = {err:.2e}", dt, 5)


def _random_scheme(rng):
    while True:
        widths = tuple(int(w) for w in rng.integers(0, 4, size=int(rng.integers(2, 6))))
        if 1 <= sum(widths) <= 8:
            return hc.BlockScheme(widths)


def _random_cell_matrix(rng, scheme):
    m = scheme.dim
    a = rng.integers(-4, 5, size=(m, m))
    if rng.uniform() < 0.4:
        # make one leading block minor singular
        b = int(rng.integers(scheme.weight + 1))
        s = scheme.lead(b)
        if s:
            coef = rng.integers(-2, 3, size=s - 1) if s > 1 else np.zeros(0, dtype=int)
            a[:s, s - 1] = a[:s, : s - 1] @ coef if s > 1 else 0
    return a


def criterion_3():
    rng = np.random.default_rng(SEED)

    def run():
        agree = 0
        failures = 0
        worst = 0.0
        for _ in range(1000):
            scheme = _random_scheme(rng)
            a = _random_cell_matrix(rng, scheme)
            expected = None
            for b in range(scheme.weight + 1):
                s = scheme.lead(b)
                if exact_det(a[:s, :s].tolist()) == 0:
                    expected = scheme.weight - b
                    break
            try:
                low, up = hc.block_lu(a.astype(complex), scheme)
                got = None
                worst = max(worst, np.linalg.norm(low.matrix @ up - a, 2) / np.linalg.norm(a, 2))
            except hc.NotInCell as exc:
                got = exc.level
                failures += 1
            agree += got == expected
        return agree, failures, worst

    (agree, failures, worst), dt = timed(run)
    return report(3, "block-LU oracle equivalence", agree == 1000 and worst <= 1e-10,
                  f"{agree}/1000 agree with exact determinants ({failures} outside the cell), "
                  f"max relative residual = {worst:.2e}", dt, 10)


def criterion_4():
    rng = np.random.default_rng(SEED)
    fr = hc.weight1_frame()
    re = rng.uniform(-5, 5, 1000)
    im = np.exp(rng.uniform(np.log(1e-6), np.log(10.0), 1000)) * rng.choice([-1, 1], 1000)

    def run():
        wrong = 0
        for x, y in zip(re, im):
            cls = hc.classify_point(hc.weight1_point(complex(x, y), fr))
            wrong += (cls is hc.PointClass.IN_D) != (y > 0)
        return wrong

    wrong, dt = timed(run)
    return report(4, "weight-1 period domain", wrong == 0, f"{wrong}/1000 misclassified", dt, 2)


def _cell_points(rng):
    """(filtration, base) pairs: 100 per built-in family."""
    hk = hc.hk_weight2_frame()
    hk_base = hc.hk_weight2_base(hk)
    w1 = hc.weight1_frame()
    w1_base = hc.AdaptedBasis.standard(w1)
    out = [(hc.hk_weight2_point(random_tau(rng, hk.dim - 2), hk), hk_base) for _ in range(100)]
    out += [(hc.weight1_point(complex(*rng.normal(size=2) * 2), w1), w1_base) for _ in range(100)]
    return out


def criterion_5():
    rng = np.random.default_rng(SEED)

    def run():
        smin, perr = np.inf, 0.0
        for filt, base in _cell_points(rng):
            for k in range(filt.frame.weight + 1):
                secs = hc.section_matrix(filt, base, k)
                smin = min(smin, float(hc.linalg.singular_values(secs)[-1]))
                f = filt.frame.f(k)
                diff = hc.project_to_base(secs, base, k) - base.matrix[:, :f]
                perr = max(perr, float(np.max(np.abs(diff))))
        return smin, perr

    (smin, perr), dt = timed(run)
    return report(5, "trivialization", smin > 1e-8 and perr <= 1e-10,
                  f"min singular value = {smin:.3g}, max |P(s_i) - eta_i| = {perr:.2e}", dt, 10)


def _in_d_pairs(rng):
    hk = hc.hk_weight2_frame()
    w1 = hc.weight1_frame()
    pairs = []
    for _ in range(100):
        pairs.append(tuple(hc.hk_weight2_point(random_tau(rng, hk.dim - 2), hk) for _ in range(2)))
    for _ in range(100):
        taus = rng.uniform(-2, 2, 2) + 1j * rng.uniform(0.1, 3, 2)
        pairs.append(tuple(hc.weight1_point(t, w1) for t in taus))
    return pairs


def criterion_6():
    rng = np.random.default_rng(SEED)
    pairs = _in_d_pairs(rng)

    def run():
        bad_pairs = bad_conj = 0
        for a, b in pairs:
            n = a.frame.weight
            bad_pairs += not all(hc.splitting_check(a, b, k).passes for k in range(1, n + 1))
            for q in (a, b):
                bad_conj += hc.splitting_check(q, hc.conjugate_structure(q), n).passes
        return bad_pairs, bad_conj

    (bad_pairs, bad_conj), dt = timed(run)
    in_d = all(hc.classify_point(f) is hc.PointClass.IN_D for p in pairs for f in p)
    return report(6, "splitting", in_d and bad_pairs == 0 and bad_conj == 0,
                  f"{bad_pairs}/200 pairs fail to split, {bad_conj}/400 conjugate pairs split", dt, 5)


def criterion_7():
    rng = np.random.default_rng(SEED)
    pairs = _in_d_pairs(rng)

    def run():
        wrong_distinct = wrong_conj = 0
        for a, b in pairs:
            wrong_distinct += hc.conjugate_obstruction(a, b).verdict is not hc.ConjugacyVerdict.DISTINCT
            for q in (a, b):
                v = hc.conjugate_obstruction(q, hc.conjugate_structure(q)).verdict
                wrong_conj += v is not hc.ConjugacyVerdict.CONJUGATE_CANDIDATE
        return wrong_distinct, wrong_conj

    (wd, wc), dt = timed(run)
    return report(7, "conjugate obstruction", wd == 0 and wc == 0,
                  f"{wd}/200 distinct pairs flagged, {wc}/400 conjugate pairs missed", dt, 2)


def criterion_8():
    rng = np.random.default_rng(SEED)
    fr = hc.hk_weight2_frame()
    base = hc.hk_weight2_base(fr)
    d = random_tau(rng, fr.dim - 2)
    d = 0.2 * d / np.linalg.norm(d)

    def path(step):
        ts = np.arange(0.0, 0.25 + step / 2, step)
        return hc.sample_path(lambda t: hc.hk_weight2_point(t * d, fr), ts)

    def run():
        coarse = hc.transversality_check(path(1e-3), base)
        fine = hc.transversality_check(path(5e-4), base)
        ts = np.arange(0.0, 0.1, 1e-3)
        bad = hc.transversality_check(hc.sample_path(lambda t: hc.hk_nonhorizontal_point(t, fr.dim - 2, fr), ts), base)
        return coarse, fine, bad

    (coarse, fine, bad), dt = timed(run)
    ratio = fine.max_residual / coarse.max_residual if coarse.max_residual > 0 else float("nan")
    passes = coarse.passes and coarse.max_residual < 1e-5
    fails = (not bad.passes) and bad.max_residual > 1e-1
    halves = 0.4 <= ratio <= 0.6
    detail = (f"horizontal max residual = {coarse.max_residual:.2e} (pass: {passes}), "
              f"non-horizontal = {bad.max_residual:.3f} (fail: {fails}), "
              f"residual ratio on halving the step = {ratio:.2f} (expected 0.5 +- 20%: {halves})")
    return report(8, "transversality discrimination", passes and fails and halves, detail, dt, 5)


def criterion_9():
    fr = hc.hk_weight2_frame()
    base = hc.hk_weight2_base(fr)
    n = fr.dim - 2

    def run():
        return hc.expansion_check(lambda tau: hc.hk_weight2_point(tau, fr), base, step=1e-4, tol=1e-6)

    rep, dt = timed(run)
    derr = float(np.max(np.abs(rep.derivatives - base.matrix[:, 1 : n + 1])))
    ok = derr <= 1e-6 and rep.remainder_leak <= 1e-6 and rep.spurious <= 1e-6
    return report(9, "expansion", ok,
                  f"max derivative error = {derr:.2e}, remainder outside H^(0,2) = {rep.remainder_leak:.2e}", dt, 2)


CLI_RUNS = [
    (["validate", "w1_i.json"], 0),
    (["validate", "w1_minus_i.json"], 1),
    (["validate", "malformed.json"], 2),
    (["coords", "hk3_point.json", "--base", "hk3_base.json"], 0),
    (["coords", "w1_swap.json", "--base", "w1_std_base.json"], 1),
    (["split", "w1_i.json", "w1_b.json"], 0),
    (["conjugate", "w1_i.json", "w1_minus_i.json"], 1),
    (["transversality", "hk3_path.json"], 0),
    (["transversality", "hk3_nonhorizontal_path.json"], 1),
    (["holomorphy", "w1_grid.json"], 0),
    (["sections", "hk3_point.json", "--base", "hk3_base.json", "--level", "5"], 2),
]


def _cli(argv):
    import contextlib
    import io as _io

    out, err = _io.StringIO(), _io.StringIO()
    args = [str(FIX / a) if a.endswith(".json") else a for a in argv]
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli_main(args)
    return code, out.getvalue(), err.getvalue()


def criterion_10():
    def run():
        wrong_code = nondeterministic = 0
        for argv, expected in CLI_RUNS:
            first, second = _cli(argv), _cli(argv)
            nondeterministic += first != second
            wrong_code += first[0] != expected
        return wrong_code, nondeterministic

    (wrong, nondet), dt = timed(run)
    codes = sorted({c for _, c in CLI_RUNS})
    return report(10, "CLI determinism and exit codes", wrong == 0 and nondet == 0 and codes == [0, 1, 2],
                  f"{len(CLI_RUNS)} fixture runs, {wrong} wrong exit codes, {nondet} differing reruns", dt, 2)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_acceptance(criterion, capsys):
    with capsys.disabled():
        print()
        ok, line = criterion()
    assert ok, line


if __name__ == "__main__":
    results = [c()[0] for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
