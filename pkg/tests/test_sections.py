import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hodgecell as hc

from conftest import random_tau

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def hk_family(frame):
    return lambda tau: hc.hk_weight2_point(tau, frame)


# -- projection and sections -------------------------------------------------

def test_projection_at_base_is_identity(hk3):
    base = hc.hk_weight2_base(hk3)
    for k in range(3):
        proj = hc.projection(base.filtration(), base, k)
        assert np.allclose(proj.matrix, np.eye(hk3.f(k)))


def test_hk_section_is_closed_form(hk19, rng):
    base = hc.hk_weight2_base(hk19)
    tau = random_tau(rng, 19)
    s = hc.section_value(hc.hk_weight2_point(tau, hk19), base, 2, 0)
    assert np.max(np.abs(s.vector - hc.hk_omega(tau))) <= 1e-12


def test_hk_section_small_case():
    fr = hc.hk_weight2_frame(1)
    base = hc.hk_weight2_base(fr)
    s = hc.section_value(hc.hk_weight2_point([0.2j], fr), base, 2, 0).vector
    assert np.allclose(s, [1, 0.2j, -0.02])


def test_weight1_sections(w1, w1_std):
    tau = 0.5 + 2j
    secs = hc.section_matrix(hc.weight1_point(tau, w1), w1_std, 1)
    assert np.allclose(secs[:, 0], [1, tau])
    # F^0 = H, so level-0 sections are the base vectors themselves
    assert np.allclose(hc.section_matrix(hc.weight1_point(tau, w1), w1_std, 0), np.eye(2))


def test_section_level_zero_has_full_rank(hk3, rng):
    base = hc.hk_weight2_base(hk3)
    secs = hc.section_matrix(hc.hk_weight2_point(random_tau(rng, 3), hk3), base, 0)
    assert secs.shape == (5, 5)
    assert hc.linalg.singular_values(secs)[-1] > 1e-8


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_property_sections_project_to_eta(seed):
    rng = np.random.default_rng(seed)
    fr = hc.hk_weight2_frame(3)
    base = hc.AdaptedBasis(fr, np.eye(5) + 0.1 * rng.normal(size=(5, 5)))
    a = np.eye(5, dtype=complex)
    a[1:, 0] = 0.4 * (rng.normal(size=4) + 1j * rng.normal(size=4))
    a[4, 1:4] = 0.4 * rng.normal(size=3)
    filt = hc.Filtration.from_basis(fr, base.matrix @ a)
    for k in range(3):
        secs = hc.section_matrix(filt, base, k)
        f = fr.f(k)
        assert np.max(np.abs(hc.project_to_base(secs, base, k) - base.matrix[:, :f])) <= 1e-10
        # sections lie in F^k_q
        assert np.max(hc.linalg.projection_residual(secs, filt[k], 1e-9)) <= 1e-10


def test_sections_errors(w1, w1_std):
    filt = hc.weight1_point(1j, w1)
    with pytest.raises(hc.LevelOutOfRange):
        hc.section_value(filt, w1_std, 2, 0)
    with pytest.raises(hc.LevelOutOfRange):
        hc.projection(filt, w1_std, -1)
    with pytest.raises(hc.IndexOutOfRange):
        hc.section_value(filt, w1_std, 1, 1)


def test_sections_outside_cell(w1, w1_std):
    f = hc.Filtration(w1, (np.eye(2), np.array([[0.0], [1.0]])))
    with pytest.raises(hc.NotInCell):
        hc.section_value(f, w1_std, 1, 0)


# -- expansion ---------------------------------------------------------------

def test_expansion_hk19(hk19):
    base = hc.hk_weight2_base(hk19)
    rep = hc.expansion_check(hk_family(hk19), base)
    assert rep.passes
    assert rep.tangent_rank == 19
    assert np.max(np.abs(rep.derivatives - base.matrix[:, 1:20])) <= 1e-6
    assert rep.remainder_leak <= 1e-6


def test_expansion_constant_family_fails(hk3):
    base = hc.hk_weight2_base(hk3)
    rep = hc.expansion_check(lambda tau: base.filtration(), base)
    assert not rep.passes
    assert rep.tangent_rank == 0


def test_expansion_weight1(w1, w1_std):
    rep = hc.expansion_check(lambda t: hc.weight1_point(t[0], w1), w1_std, n_params=1)
    assert rep.passes
    assert rep.derivatives[:, 0] == pytest.approx([0, 1], abs=1e-8)


def test_expansion_nonhorizontal_direction_is_spurious(hk3):
    # moving F^2 towards conj(Omega_p) has no H^{1,1} component
    base = hc.hk_weight2_base(hk3)
    rep = hc.expansion_check(lambda t: hc.hk_nonhorizontal_point(t[0], 3, hk3), base, n_params=1)
    assert not rep.passes
    assert rep.spurious > 0.5


def test_expansion_base_mismatch(hk3):
    base = hc.hk_weight2_base(hk3)
    tau0 = np.array([0.1, 0, 0])
    with pytest.raises(hc.BaseMismatch):
        hc.expansion_check(lambda t: hc.hk_weight2_point(t + tau0, hk3), base)


# -- splitting and conjugates ------------------------------------------------

def test_splitting_weight1(w1):
    a, b = hc.weight1_point(1j, w1), hc.weight1_point(0.3 + 2j, w1)
    assert hc.splitting_check(a, b, 1).passes
    c = hc.weight1_point(-1j, w1)  # conj of the point at i
    rep = hc.splitting_check(a, hc.conjugate_structure(a), 1)
    assert not rep.passes and rep.min_singular < 1e-12
    assert hc.conjugate_structure(a).distance(c) <= 1e-12


def test_splitting_hk_levels(hk3, rng):
    a = hc.hk_weight2_point(random_tau(rng, 3), hk3)
    b = hc.hk_weight2_point(random_tau(rng, 3), hk3)
    for k in (1, 2):
        assert hc.splitting_check(a, b, k).passes
    assert not hc.splitting_check(a, hc.conjugate_structure(a), 2).passes


def test_splitting_level_range(w1):
    a = hc.weight1_point(1j, w1)
    with pytest.raises(hc.LevelOutOfRange):
        hc.splitting_check(a, a, 0)


def test_splitting_frame_mismatch(w1, hk3):
    with pytest.raises(hc.FrameMismatch):
        hc.splitting_check(hc.weight1_point(1j, w1), hc.hk_weight2_point([0, 0, 0], hk3), 1)


def test_conjugate_obstruction(w1):
    q = hc.weight1_point(0.2 + 1.3j, w1)
    assert hc.conjugate_obstruction(q, hc.weight1_point(-0.5 + 1j, w1)).verdict == "Distinct"
    rep = hc.conjugate_obstruction(q, hc.conjugate_structure(q))
    assert rep.verdict is hc.ConjugacyVerdict.CONJUGATE_CANDIDATE
    assert rep.distance <= 1e-12
    assert not rep.splitting.passes


def test_conjugate_lies_in_other_component(hk3, rng):
    q = hc.hk_weight2_point(random_tau(rng, 3), hk3)
    qbar = hc.conjugate_structure(q)
    base = hc.hk_weight2_base(hk3)
    assert hc.classify_point(q) is hc.PointClass.IN_D
    assert hc.classify_point(qbar) is hc.PointClass.IN_D
    assert hc.period_component(qbar, base) == -hc.period_component(q, base)
    assert hc.conjugate_obstruction(q, qbar).verdict == "ConjugateCandidate"


def test_conjugate_obstruction_unsupported():
    fr = hc.HodgeFrame(1, (2, 2), hc.build_polarization(1, np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])))
    f = hc.Filtration.from_basis(fr, np.eye(4))
    with pytest.raises(hc.UnsupportedFrame):
        hc.conjugate_obstruction(f, f)


def test_period_component(hk3, rng):
    base = hc.hk_weight2_base(hk3)
    q = hc.hk_weight2_point(random_tau(rng, 3), hk3)
    assert hc.period_component(base.filtration(), base) == 1
    assert hc.period_component(q, base) == 1
    assert hc.period_component(hc.conjugate_structure(q), base) == -1
    with pytest.raises(hc.UnsupportedFrame):
        hc.period_component(hc.weight1_point(1j), hc.AdaptedBasis.standard(hc.weight1_frame()))
