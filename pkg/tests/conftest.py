import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from irsassoc import SystemDims, build_arc_scenario, nearest_rule, successive_refinement

settings.register_profile("default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def default_scn():
    """Reference deployment: M=16, 4x4 IRSs, L=8, K=4, -60 dBm noise."""
    return build_arc_scenario(SystemDims(M=16, N_x=4, N_z=4, L=8, K=4))


@pytest.fixture(scope="session")
def small_scn():
    return build_arc_scenario(SystemDims(M=4, N_x=2, N_z=2, L=3, K=2))


@pytest.fixture(scope="session")
def sr_default(default_scn):
    return successive_refinement(default_scn)


@pytest.fixture(scope="session")
def nearest_default(default_scn):
    return nearest_rule(default_scn)


def random_psd(rng, M, rank=None):
    rank = rank or M
    A = rng.standard_normal((M, rank)) + 1j * rng.standard_normal((M, rank))
    return A @ A.conj().T / rank


def cn_samples(rng, R, T):
    """``T`` draws of ``CN(0, R)`` as rows, via a Cholesky-free eigen factor."""
    w, U = np.linalg.eigh(R)
    F = U * np.sqrt(np.clip(w, 0, None))
    z = (rng.standard_normal((T, R.shape[0])) + 1j * rng.standard_normal((T, R.shape[0]))) / np.sqrt(2)
    return z @ F.T


_GATE = pytest.StashKey[list]()


@pytest.fixture
def gate(request, capsys):
    """Record one acceptance line; shown live and again in the terminal summary."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.stash.setdefault(_GATE, []).append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_GATE, [])
    if lines:
        terminalreporter.section("acceptance gate")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
