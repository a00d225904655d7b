import math

import numpy as np
import pytest

from irsassoc.analytic import correlation_stack
from irsassoc.assoc import AssociationMatrix
from irsassoc.beamform import equal_power
from irsassoc.channel import draw_channels
from irsassoc.montecarlo import (
    McConfig,
    McEstimate,
    _fsum_mean,
    effective_channels,
    instantaneous_sinr,
    mc_average_sinr,
    mc_correlation,
    reflect_vectors,
    sample_effective_channels,
)
from irsassoc.scenario import SystemDims, build_arc_scenario


def _power(scn, lam):
    R = correlation_stack(scn, lam)
    return equal_power(scn.P_max, scn.dims.K, np.real(np.trace(R, axis1=1, axis2=2)))


@pytest.fixture(scope="module")
def tiny():
    """M=2, N=2, L=1, K=2."""
    return build_arc_scenario(SystemDims(M=2, N_x=1, N_z=2, L=1, K=2))


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(trials=0)
    with pytest.raises(ValueError):
        McConfig(confidence=1.0)


def test_interval_brackets_mean():
    est = McEstimate(mean=np.array([1.0]), stderr=np.array([0.1]), trials_used=10, ratio_of_means=np.array([1.0]))
    lo, hi = est.interval()
    assert lo[0] == pytest.approx(1 - 1.959964 * 0.1, rel=1e-6) and hi[0] == pytest.approx(1 + 1.959964 * 0.1, rel=1e-6)


def test_single_user_sinr_algebra():
    scn = build_arc_scenario(SystemDims(M=3, N_x=2, N_z=1, L=2, K=1))
    lam = np.ones((1, 2), dtype=int)
    pw = _power(scn, lam)
    ch = draw_channels(scn, 0, 0)
    h = effective_channels(ch, reflect_vectors(ch, [0, 0]))[0]
    norm = pw.p[0] / pw.c[0]
    expected = pw.p[0] * np.linalg.norm(h) ** 4 / (norm * scn.sigma2)
    assert instantaneous_sinr(ch, lam, pw, scn.sigma2)[0] == pytest.approx(expected, rel=1e-12)


def test_sinr_decreases_with_noise(small_scn):
    lam = AssociationMatrix([0, 1, 1], 2).lam
    pw = _power(small_scn, lam)
    ch = draw_channels(small_scn, 1, 0)
    g = np.array([instantaneous_sinr(ch, lam, pw, s) for s in 10.0 ** np.arange(-14, 2)])
    assert np.all(np.diff(g, axis=0) < 0)
    assert np.all(g[-1] < 1e-6)


def _straight_line_sinr(scn, ch, tuned, p, norm, sigma2):
    """Independent evaluation using only explicit loops over scalars."""
    M, N, K = scn.dims.M, scn.dims.N, scn.dims.K
    kd = scn.geometry.wavenumber * scn.geometry.d_BS
    ki = scn.geometry.wavenumber * scn.geometry.d_IRS
    th, ph, vt = scn.theta[0], scn.phi[0], scn.vartheta[0]
    a = [complex(math.cos(kd * m * math.cos(th)), -math.sin(kd * m * math.cos(th))) for m in range(M)]
    b = []
    for nx in range(scn.dims.N_x):
        for nz in range(scn.dims.N_z):
            ang = ki * (nx * math.sin(ph) * math.cos(vt) + nz * math.cos(ph))
            b.append(complex(math.cos(ang), -math.sin(ang)))
    g1 = math.sqrt(scn.beta_1[0])
    hd = ch.h_d
    h2 = ch.h_2[0]
    ref = sum(a[m].conjugate() * hd[tuned][m] for m in range(M))
    v = []
    for n in range(N):
        z = h2[tuned][n].conjugate() * b[n]
        v.append(complex(math.cos(math.atan2(z.imag, z.real) + math.atan2(ref.imag, ref.real)),
                         math.sin(math.atan2(z.imag, z.real) + math.atan2(ref.imag, ref.real))))
    h = []
    for k in range(K):
        s = sum(b[n].conjugate() * h2[k][n] * v[n] for n in range(N))
        h.append([hd[k][m] + g1 * a[m] * s for m in range(M)])
    out = []
    for k in range(K):
        terms = []
        for t in range(K):
            inner = sum(h[k][m].conjugate() * h[t][m] for m in range(M)) / math.sqrt(norm[t])
            terms.append(p[t] * abs(inner) ** 2)
        out.append(terms[k] / (sum(terms) - terms[k] + sigma2))
    return out


@pytest.mark.parametrize("tuned", [0, 1])
def test_dual_implementation(tiny, tuned):
    lam = np.zeros((2, 1), dtype=int)
    lam[tuned, 0] = 1
    pw = _power(tiny, lam)
    for trial in range(3):
        ch = draw_channels(tiny, 17, trial)
        ref = _straight_line_sinr(tiny, ch, tuned, pw.p, pw.p / pw.c, tiny.sigma2)
        got = instantaneous_sinr(ch, lam, pw, tiny.sigma2)
        assert np.allclose(got, ref, rtol=1e-12, atol=0)


def test_one_trial_equals_realization(default_scn, sr_default):
    lam = sr_default.assoc.lam
    pw = _power(default_scn, lam)
    est = mc_average_sinr(default_scn, lam, pw, McConfig(trials=1, seed=9))
    single = instantaneous_sinr(draw_channels(default_scn, 9, 0), lam, pw, default_scn.sigma2)
    assert np.array_equal(est.mean, single)
    assert np.all(est.stderr == 0) and est.trials_used == 1


def test_stderr_scales_with_trials(default_scn, nearest_default):
    lam = nearest_default.lam
    a = mc_average_sinr(default_scn, lam, cfg=McConfig(trials=400, seed=3))
    b = mc_average_sinr(default_scn, lam, cfg=McConfig(trials=800, seed=3))
    ratio = b.stderr / a.stderr
    assert np.all(np.abs(ratio - 1 / math.sqrt(2)) < 0.2 / math.sqrt(2))


def test_thread_count_does_not_change_result(default_scn, sr_default):
    lam = sr_default.assoc.lam
    one = mc_average_sinr(default_scn, lam, cfg=McConfig(trials=64, seed=5, workers=1))
    many = mc_average_sinr(default_scn, lam, cfg=McConfig(trials=64, seed=5, workers=4))
    for field in ("mean", "stderr", "ratio_of_means"):
        assert getattr(one, field).tobytes() == getattr(many, field).tobytes()


def test_thread_env_var(default_scn, sr_default, monkeypatch):
    lam = sr_default.assoc.lam
    base = mc_average_sinr(default_scn, lam, cfg=McConfig(trials=16, seed=2))
    monkeypatch.setenv("IRSASSOC_THREADS", "3")
    threaded = mc_average_sinr(default_scn, lam, cfg=McConfig(trials=16, seed=2))
    assert base.mean.tobytes() == threaded.mean.tobytes()


def test_fsum_reduction_is_order_insensitive():
    rng = np.random.default_rng(0)
    x = rng.lognormal(0, 8, (1000, 3))
    perm = rng.permutation(1000)
    assert _fsum_mean(x).tobytes() == _fsum_mean(x[perm]).tobytes()


def test_keep_samples(small_scn):
    lam = AssociationMatrix([1, 0, 1], 2).lam
    est = mc_average_sinr(small_scn, lam, cfg=McConfig(trials=5, seed=0), keep_samples=True)
    assert est.samples.shape == (5, 2)
    assert np.allclose(est.samples.mean(axis=0), est.mean, rtol=1e-14)


def test_mc_correlation_hermitian(default_scn, sr_default):
    R = mc_correlation(default_scn, sr_default.assoc.lam, 1, McConfig(trials=200, seed=0))
    assert np.abs(R - R.conj().T).max() <= 1e-14 * np.abs(R).max()


def test_mc_correlation_without_irs(default_scn):
    scn = default_scn.replace(beta_2=default_scn.beta_2 * 1e-20)
    lam = AssociationMatrix([0] * 8, 4).lam
    R, se = mc_correlation(scn, lam, 2, McConfig(trials=5000, seed=1), return_stderr=True)
    target = scn.beta_d[2] * np.eye(16)
    assert np.all(np.abs(R - target) <= 5 * se)


def test_direct_only_simulation(default_scn):
    est = mc_average_sinr(default_scn, None, cfg=McConfig(trials=20, seed=4))
    pw = equal_power(1.0, 4, 16 * default_scn.beta_d)
    manual = []
    for t in range(20):
        h = draw_channels(default_scn, 4, t).h_d
        f = h / np.sqrt(pw.p / pw.c)[:, None]
        G = np.abs(h.conj() @ f.T) ** 2 * pw.p[None, :]
        manual.append(np.diag(G) / (G.sum(axis=1) - np.diag(G) + default_scn.sigma2))
    assert np.allclose(est.mean, np.mean(manual, axis=0), rtol=1e-12)


def test_tuning_never_lowers_gain(default_scn):
    """Paired check: tuned phases beat random phases on every realization."""
    rng = np.random.default_rng(0)
    for trial in range(50):
        ch = draw_channels(default_scn, 6, trial)
        tuned = effective_channels(ch, reflect_vectors(ch, [2] * 8))[2]
        rand = effective_channels(ch, np.exp(1j * rng.uniform(0, 2 * np.pi, (8, 16))))[2]
        assert np.linalg.norm(tuned) >= np.linalg.norm(rand)


def test_sample_effective_channels_shape(small_scn):
    h = sample_effective_channels(small_scn, AssociationMatrix([0, 0, 1], 2).lam, McConfig(trials=3))
    assert h.shape == (3, 2, 4)


def test_association_validation(small_scn):
    with pytest.raises(ValueError):
        mc_average_sinr(small_scn, np.ones((2, 3)), cfg=McConfig(trials=1))
