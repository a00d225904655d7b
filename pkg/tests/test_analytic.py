import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from irsassoc.analytic import (
    CorrelationBlocks,
    CorrelationMatrix,
    SinrEvaluator,
    avg_sinr,
    correlation_matrix,
    correlation_stack,
    cross_irs_term,
    cross_term,
    fourth_moment,
    mean_sq_gain,
    phase_only,
    sigma_v,
    sinr_bounds,
)
from irsassoc.assoc import AssociationMatrix
from irsassoc.beamform import equal_power
from irsassoc.channel import LosChannel, los_channels, ula_steering, upa_steering
from irsassoc.montecarlo import McConfig, mc_correlation
from irsassoc.scenario import ArcLayout, ArrayGeometry, SystemDims, build_arc_scenario

from conftest import random_psd

HALF = ArrayGeometry.half_wavelength()


def los_fixture(N_x=3, N_z=2, M=5, beta_1=2e-7):
    return LosChannel(beta_1=beta_1, a=ula_steering(M, 1.1, HALF), b=upa_steering(N_x, N_z, math.pi / 2, 2.4, HALF))


# ---------------------------------------------------------------- sigma_v


def test_sigma_v_single_element():
    S = sigma_v(3e-9, los_fixture(1, 1))
    assert S.shape == (1, 1) and S[0, 0] == 3e-9


def test_sigma_v_flat_steering_is_real():
    los = LosChannel(beta_1=1.0, a=np.ones(2), b=np.ones(4))
    S = sigma_v(2.0, los)
    off = S[~np.eye(4, dtype=bool)]
    assert np.allclose(off, math.pi * 2.0 / 4, rtol=1e-15, atol=0)
    assert np.allclose(np.diag(S), 2.0)


def test_sigma_v_structure():
    S = sigma_v(5.0, los_fixture())
    assert np.allclose(S, S.conj().T, atol=1e-12)
    assert np.allclose(np.diag(S), 5.0)
    off = S[~np.eye(6, dtype=bool)]
    assert np.allclose(np.abs(off), math.pi * 5.0 / 4, rtol=1e-12)


def test_sigma_v_rejects_nonpositive_beta():
    with pytest.raises(ValueError):
        sigma_v(0.0, los_fixture())


def _sample_vtilde(los, beta_2, beta_d, T, rng):
    """Per-draw ``diag(|h2|) exp(j angle(H1^H h_d))`` with fresh Gaussian inputs."""
    N, M = los.b.size, los.a.size
    h2 = math.sqrt(beta_2 / 2) * (rng.standard_normal((T, N)) + 1j * rng.standard_normal((T, N)))
    h_d = math.sqrt(beta_d / 2) * (rng.standard_normal((T, M)) + 1j * rng.standard_normal((T, M)))
    proj = h_d @ los.H1.conj()  # rows are (H1^H h_d)^T
    return np.abs(h2) * np.exp(1j * np.angle(proj))


def test_sigma_v_sampling_oracle():
    los, beta_2 = los_fixture(), 4e-8
    V = _sample_vtilde(los, beta_2, 1e-12, 100_000, np.random.default_rng(0))
    emp = V.T @ V.conj() / V.shape[0]
    S = sigma_v(beta_2, los)
    assert np.all(np.abs(emp - S) <= 0.02 * np.abs(S))


def test_vtilde_is_zero_mean():
    los = los_fixture()
    V = _sample_vtilde(los, 1.0, 1.0, 100_000, np.random.default_rng(1))
    # E|h2| = sqrt(pi)/2; the sample mean of a zero-mean entry has SE ~ 1/sqrt(T).
    assert np.max(np.abs(V.mean(axis=0))) < 5 / math.sqrt(V.shape[0])


def test_dad_identity_oracle():
    """E[D A D] for i.i.d. diagonal D: off-diagonals E[d]^2 A_ij, diagonals E[d^2] A_ii."""
    rng = np.random.default_rng(2)
    n, T = 4, 200_000
    A = rng.standard_normal((n, n))
    A = A + A.T
    d = np.abs(rng.standard_normal((T, n)) + 1j * rng.standard_normal((T, n))) / math.sqrt(2)
    emp = np.einsum("ti,ij,tj->ij", d, A, d) / T
    Ed, Ed2 = math.sqrt(math.pi) / 2, 1.0
    pred = Ed**2 * A
    np.fill_diagonal(pred, Ed2 * np.diag(A))
    assert np.allclose(emp, pred, atol=0.02 * np.abs(A).max())


def test_sigma_v_follows_from_dad_identity():
    los, beta_2 = los_fixture(), 3.0
    P = phase_only(los.gram_irs())
    Ed, Ed2 = math.sqrt(math.pi * beta_2) / 2, beta_2
    pred = Ed**2 * P
    np.fill_diagonal(pred, Ed2 * np.diag(P))
    assert np.allclose(pred, sigma_v(beta_2, los), rtol=1e-12)


def test_phase_only_of_zero_is_one():
    assert phase_only(np.array([0.0, -2.0, 3j]))[0] == 1.0


# ---------------------------------------------------------------- R_k


def test_no_irs_limit(default_scn):
    scn = default_scn.replace(beta_2=default_scn.beta_2 * 1e-15)
    R = correlation_matrix(scn, 2, np.zeros(8)).R
    assert np.allclose(R, scn.beta_d[2] * np.eye(16), rtol=0, atol=1e-9 * scn.beta_d[2])


def test_non_associated_trace_floor(default_scn):
    scn, d = default_scn, default_scn.dims
    for k in range(d.K):
        tr = correlation_matrix(scn, k, np.zeros(d.L)).trace
        expected = d.M * scn.beta_d[k] + np.sum(scn.beta_2[:, k] * scn.beta_1 * d.M * d.N)
        assert tr == pytest.approx(expected, rel=1e-12)


def test_los_gram_trace(default_scn):
    d = default_scn.dims
    for l, H1 in enumerate(los_channels(default_scn)):
        assert np.trace(H1.gram_irs()).real == pytest.approx(default_scn.beta_1[l] * d.M * d.N, rel=1e-12)


@given(users=st.lists(st.integers(0, 3), min_size=8, max_size=8))
def test_correlation_hermitian_psd(default_scn, users):
    lam = AssociationMatrix(users, 4).lam
    for k in range(4):
        R = correlation_matrix(default_scn, k, lam[k])
        assert R.is_hermitian(1e-10)
        assert R.is_psd(1e-8)


@given(
    M=st.integers(1, 6),
    N_x=st.integers(1, 3),
    N_z=st.integers(1, 3),
    L=st.integers(1, 4),
    K=st.integers(1, 3),
    start=st.floats(0, 80),
    data=st.data(),
)
def test_trace_consistency(M, N_x, N_z, L, K, start, data):
    scn = build_arc_scenario(
        SystemDims(M, N_x, N_z, L, K),
        layout=ArcLayout(irs_sector_deg=(start, start + 97.0), user_sector_deg=(start + 3.0, start + 91.0)),
    )
    row = np.array(data.draw(st.lists(st.integers(0, 1), min_size=L, max_size=L)))
    k = data.draw(st.integers(0, K - 1))
    tr = correlation_matrix(scn, k, row).trace
    assert mean_sq_gain(scn, k, row) == pytest.approx(tr, rel=1e-10)


def test_association_row_validation(default_scn):
    with pytest.raises(ValueError):
        correlation_matrix(default_scn, 0, np.zeros(7))
    with pytest.raises(ValueError):
        correlation_matrix(default_scn, 0, np.full(8, 0.5))


def test_blocks_match_direct_construction(default_scn, sr_default):
    lam = sr_default.assoc.lam
    blocks = CorrelationBlocks.build(default_scn)
    assert np.allclose(blocks.stack(lam), correlation_stack(default_scn, lam), rtol=1e-13, atol=0)


def test_single_irs_matches_sampled_covariance():
    scn = build_arc_scenario(SystemDims(M=4, N_x=2, N_z=2, L=1, K=2))
    lam = np.array([[0], [1]])
    R_mc, se = mc_correlation(scn, lam, None, McConfig(trials=10_000, seed=21), return_stderr=True)
    for k in range(2):
        R = correlation_matrix(scn, k, lam[k]).R
        assert np.all(np.abs(R_mc[k] - R) <= 3 * se[k])


def test_cross_irs_term_vanishes_without_pairs(default_scn):
    lam = AssociationMatrix([0, 1, 2, 3, 0, 1, 2, 3], 4).lam
    lam[:, 4:] = 0
    lam[3, 4:] = 1  # user 3 now has IRSs 3..7; others one each
    for k in range(3):
        assert not np.any(cross_irs_term(default_scn, lam, k))
    C = cross_irs_term(default_scn, lam, 3)
    assert np.allclose(C, C.conj().T, rtol=1e-12, atol=0)
    assert np.abs(C).max() > 0


# ---------------------------------------------------------------- moments


def test_fourth_moment_examples():
    assert fourth_moment(np.eye(2)) == 6.0
    assert fourth_moment(np.diag([1.0, 0.0])) == 2.0
    assert fourth_moment(CorrelationMatrix.from_matrix(np.eye(3))) == 12.0


def test_cross_term_examples():
    assert cross_term(np.eye(2), np.eye(2)) == 2.0
    assert cross_term(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == 0.0
    with pytest.raises(ValueError):
        cross_term(np.eye(2), np.eye(3))


@given(seed=st.integers(0, 1000), M=st.integers(1, 6))
def test_cross_term_nonnegative_for_psd(seed, M):
    rng = np.random.default_rng(seed)
    assert cross_term(random_psd(rng, M), random_psd(rng, M, rank=1)) >= -1e-12


# ---------------------------------------------------------------- average SINR / bounds


class _Pow:
    def __init__(self, p):
        self.p = np.asarray(p, dtype=float)


def test_single_user_sinr():
    rng = np.random.default_rng(3)
    R = random_psd(rng, 4)
    rep = avg_sinr([R], _Pow([0.8]), 1e-3)
    c = 0.8 / np.trace(R).real
    expected = c * (np.trace(R @ R).real + np.trace(R).real ** 2) / 1e-3
    assert rep.gamma_bar[0] == pytest.approx(expected, rel=1e-12)
    assert rep.gamma_low[0] == pytest.approx(expected, rel=1e-12)
    assert rep.gamma_up[0] == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("K, M", [(2, 4), (4, 16), (3, 1)])
def test_identical_scaled_identity_closed_form(K, M):
    beta_d, P, sigma2 = 2.6e-12, 1.0, 1e-9
    R = [beta_d * np.eye(M)] * K
    pw = equal_power(P, K, [M * beta_d] * K)
    rep = avg_sinr(R, pw, sigma2)
    p = P / K
    expected = p * beta_d * (M + 1) / ((K - 1) * p * beta_d + sigma2)
    assert np.allclose(rep.gamma_bar, expected, rtol=1e-12)
    assert rep.min_user == 0  # ties resolve to the lowest index


def test_avg_sinr_min_fields(default_scn, sr_default):
    R = correlation_stack(default_scn, sr_default.assoc.lam)
    pw = equal_power(1.0, 4, np.real(np.trace(R, axis1=1, axis2=2)))
    rep = avg_sinr(R, pw, default_scn.sigma2)
    assert rep.min_sinr == rep.gamma_bar.min()
    assert rep.min_user == int(np.argmin(rep.gamma_bar))
    assert np.all(rep.gamma_bar > 0)


def test_avg_sinr_requires_positive_noise():
    with pytest.raises(ValueError):
        avg_sinr([np.eye(2)], _Pow([1.0]), 0.0)


@given(seed=st.integers(0, 10_000), K=st.integers(1, 5), M=st.integers(1, 5), log_s=st.floats(-6, 2))
def test_upper_bound_dominates(seed, K, M, log_s):
    rng = np.random.default_rng(seed)
    R = [random_psd(rng, M, rank=int(rng.integers(1, M + 1))) for _ in range(K)]
    p = rng.uniform(0.1, 1.0, K)
    rep = avg_sinr(R, _Pow(p), 10.0**log_s)
    assert np.all(rep.gamma_up >= rep.gamma_bar * (1 - 1e-12))


def test_bounds_formula():
    R = np.diag([2.0, 1.0])
    low, up = sinr_bounds(R, 0.5, 0.1, 3)
    tr, tr2 = 3.0, 5.0
    assert up == pytest.approx(0.5 * (tr2 + tr**2) / 0.1)
    assert low == pytest.approx((1 + tr**2 / tr2) / (2 + 0.1 / (0.5 * tr2)))


def test_lower_bound_exact_for_identical_users():
    rng = np.random.default_rng(4)
    R = random_psd(rng, 3)
    rep = avg_sinr([R] * 3, _Pow([0.2] * 3), 0.05)
    assert np.allclose(rep.gamma_low, rep.gamma_bar, rtol=1e-12)


# ---------------------------------------------------------------- evaluator


def test_evaluator_batch_matches_avg_sinr(default_scn):
    ev = SinrEvaluator(default_scn)
    rng = np.random.default_rng(5)
    users = rng.integers(0, 4, (37, 8))
    batch = ev.batch(users, chunk=10)
    assert ev.evaluations == 37
    for i in (0, 13, 36):
        lam = AssociationMatrix(users[i], 4).lam
        R = correlation_stack(default_scn, lam)
        pw = equal_power(1.0, 4, np.real(np.trace(R, axis1=1, axis2=2)))
        assert np.allclose(batch[i], avg_sinr(R, pw, default_scn.sigma2).gamma_bar, rtol=1e-10)
    assert np.array_equal(ev(users[3]), batch[3])
