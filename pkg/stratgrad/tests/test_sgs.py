import numpy as np
import pytest

from stratgrad.errors import ConfigError, MaxRounds, OracleContractError
from stratgrad.models import Barcode, SgsConfig
from stratgrad.objectives.persistence_losses import RegistrationObjective, TotalPersistenceObjective
from stratgrad.objectives.toy import CreaseObjective
from stratgrad.optim.sgs import (
    _RadiusRestart,
    approx_gradient,
    make_differentiable,
    sgs_run,
    simple_update_step,
    update_step,
)
from stratgrad.topology.strata import StratumSample


class ShiftingOracle(CreaseObjective):
    """Reports a different stratum label at every radius."""

    def sample_strata(self, x, eps):
        return [StratumSample(key=eps, point=np.asarray(x, dtype=float), dist_estimate=0.0,
                              gradient=self.gradient(x))]


def test_approx_gradient_interior_is_plain_gradient():
    obj = CreaseObjective()
    g, count = approx_gradient(obj, [1.0, 0.5], 0.1)
    assert count == 0
    assert g == pytest.approx(obj.gradient(np.array([1.0, 0.5])))


def test_approx_gradient_near_crease_is_shorter():
    obj = CreaseObjective()
    x = np.array([0.05, 0.0])
    g, count = approx_gradient(obj, x, 0.1)
    assert count == 1
    assert np.linalg.norm(g) < np.linalg.norm(obj.gradient(x))


def test_update_step_stationary_point():
    step = update_step(CreaseObjective(), [0.001, 0.0], eps=0.01, eta=0.1, C_k=1.0, beta=0.5, gamma=0.5)
    assert step.t == 0.0
    assert np.linalg.norm(step.g) <= 0.1


def test_update_step_smooth_region_accepts_first_candidate():
    step = update_step(CreaseObjective(0.0), [5.0, 1.0], eps=0.1, eta=0.01, C_k=1.0, beta=0.5, gamma=0.5)
    assert step.inner_iterations == 0
    assert step.eps == 0.1
    assert step.t == pytest.approx(0.05)
    assert step.g == pytest.approx([0.0, 2.0])


def test_update_step_near_crease_satisfies_both_tests():
    obj = CreaseObjective()
    x = np.array([0.018, 0.035])
    beta = 0.5
    step = update_step(obj, x, eps=0.1, eta=0.01, C_k=1000.0, beta=beta, gamma=0.5)
    g_norm = np.linalg.norm(step.g)
    assert step.t > 0
    assert step.t == pytest.approx(step.eps / g_norm)
    assert obj.value(x - step.t * step.g) < obj.value(x) - beta * step.t * g_norm ** 2
    assert step.eps < step.C * g_norm
    assert step.C <= 1000.0


def test_radius_restart_rejects_new_strata():
    oracle = _RadiusRestart(ShiftingOracle(), np.array([0.5, 0.5]))
    oracle(0.1)
    with pytest.raises(OracleContractError):
        oracle(0.05)


def test_simple_step_geometric_count():
    """With L huge the radius halves until it meets (1 - beta) ||g|| / (2L)."""
    step = simple_update_step(CreaseObjective(0.0), [5.0, 1.0], eps=0.1, eta=0.01, beta=0.5, gamma=0.5,
                              lipschitz=1e6)
    bound = 0.5 * 2.0 / 2e6
    assert step.inner_iterations == 18
    assert step.eps <= bound < 2 * step.eps
    assert step.t == pytest.approx(step.eps / 2.0)


def test_quick_step_jumps_to_bound():
    step = simple_update_step(CreaseObjective(0.0), [5.0, 1.0], eps=0.1, eta=0.01, beta=0.5, gamma=0.5,
                              lipschitz=1e6, quick=True)
    assert step.eps == pytest.approx(0.5 * 2.0 / 2e6)
    assert step.inner_iterations == 1


def test_simple_step_total_persistence_keeps_radius(path5, x_path5):
    obj = TotalPersistenceObjective(path5)
    step = simple_update_step(obj, x_path5, eps=0.01, eta=0.01, beta=0.5, gamma=0.5)
    assert step.eps == 0.01
    assert step.inner_iterations == 0
    assert step.t == pytest.approx(0.01 / (2.0 * np.linalg.norm(step.g)))


def test_simple_step_without_bound(path5, x_path5):
    obj = RegistrationObjective(path5, Barcode())
    with pytest.raises(ConfigError):
        simple_update_step(obj, x_path5, eps=0.01, eta=0.01, beta=0.5, gamma=0.5)


def test_make_differentiable_keeps_good_candidate(rng):
    obj = CreaseObjective()
    x_k = np.array([1.0, 1.0])
    g = obj.gradient(x_k)
    candidate = x_k - 0.01 * g
    out = make_differentiable(obj, candidate, x_k, 0.01, g, rng)
    assert np.array_equal(out, candidate)


def test_make_differentiable_leaves_the_crease(rng):
    obj = CreaseObjective()
    x_k = np.array([0.01, 0.5])
    g = obj.gradient(x_k)
    t = 0.01 / np.linalg.norm(g)
    out = make_differentiable(obj, np.array([0.0, 0.5]), x_k, t, g, rng)
    assert obj.is_differentiable(out)
    assert obj.value(out) < obj.value(x_k) - 0.5 * t * float(g @ g)


def test_make_differentiable_gives_up(rng):
    obj = CreaseObjective()
    x_k = np.array([1.0, 1.0])
    uphill = -obj.gradient(x_k)
    with pytest.raises(MaxRounds):
        make_differentiable(obj, x_k - 0.1 * uphill, x_k, 0.1, uphill, rng, max_rounds=5)


def _assert_descent(trace, beta):
    assert trace.check_descent(beta) == []
    fs = [r.f for r in trace.records]
    assert all(b < a for a, b in zip(fs, fs[1:]))


def test_crease_run_converges():
    trace = sgs_run(CreaseObjective(), [0.8, 0.8], SgsConfig(eps=0.1, eta=0.01))
    assert trace.reason == "GradientBelowEta"
    assert 12 <= trace.iterations <= 25
    assert trace.records[-1].g_norm <= 0.01
    _assert_descent(trace, 0.5)


def test_total_persistence_run(path5, x_path5):
    trace = sgs_run(TotalPersistenceObjective(path5), x_path5, SgsConfig(eps=0.01, eta=0.01))
    assert trace.reason == "GradientBelowEta"
    assert 80 <= trace.iterations <= 250
    final = np.array(trace.final_x)
    assert final.max() - final.min() <= 0.05
    _assert_descent(trace, 0.5)


def test_zero_eta_runs_out_of_iterations():
    trace = sgs_run(CreaseObjective(), [0.8, 0.8], SgsConfig(eps=0.1, eta=0.0, max_iters=5))
    assert trace.reason == "MaxIters"
    assert [r.k for r in trace.records] == list(range(6))
    assert trace.records[-1].t_k == 0.0
    _assert_descent(trace, 0.5)


def test_runs_are_deterministic(path5, x_path5):
    config = SgsConfig(eps=0.01, eta=0.01, seed=7)
    first = sgs_run(TotalPersistenceObjective(path5), x_path5, config, record_timing=False)
    second = sgs_run(TotalPersistenceObjective(path5), x_path5, config, record_timing=False)
    assert first.model_dump() == second.model_dump()


def test_simple_variant_run(path5, x_path5):
    trace = sgs_run(TotalPersistenceObjective(path5), x_path5, SgsConfig(eps=0.01, eta=0.01, variant="simple"))
    assert trace.reason == "GradientBelowEta"
    assert all(r.C_k is None for r in trace.records)
    _assert_descent(trace, 0.5)


def test_regularization_changes_the_objective():
    plain = sgs_run(CreaseObjective(), [0.8, 0.8], SgsConfig(eps=0.1, eta=0.01))
    reg = sgs_run(CreaseObjective(), [0.8, 0.8], SgsConfig(eps=0.1, eta=0.01, regularization=0.5))
    assert reg.records[0].f == pytest.approx(plain.records[0].f + 0.5 * 1.28)
    assert reg.reason == "GradientBelowEta"


def _crease_floor(obj, eps, beta, gamma):
    # gradient Lipschitz constant of either half-plane extension over |z1| <= 2 eps
    L = max(obj.scale / (1.0 - 2.0 * eps) ** 2, 2.0)
    return gamma * (1.0 - beta) / (2.0 * L)


@pytest.mark.parametrize("c0", [1.0, 1000.0])
@pytest.mark.parametrize("x0", [[0.8, 0.8], [0.018, 0.035], [-0.05, 0.9], [0.003, -0.4]])
def test_controlling_constant_stays_above_floor(x0, c0):
    """C shrinks only by factors of gamma and never below gamma (1 - beta) / (2L)."""
    obj = CreaseObjective()
    config = SgsConfig(eps=0.1, eta=0.01, c0=c0)
    trace = sgs_run(obj, x0, config)
    floor = _crease_floor(obj, config.eps, config.beta, config.gamma)
    cs = [r.C_k for r in trace.records]
    assert cs[0] == c0
    assert min(cs) >= floor, f"C dropped to {min(cs)} below {floor}"
    assert all(b <= a for a, b in zip(cs, cs[1:])), "C is never enlarged between steps"
    assert trace.reason == "GradientBelowEta"


def test_update_step_starting_at_floor_keeps_gamma_margin(rng):
    obj = CreaseObjective()
    beta, gamma, eps = 0.5, 0.5, 0.1
    target = (1.0 - beta) / (2.0 * max(obj.scale / (1.0 - 2.0 * eps) ** 2, 2.0))
    for _ in range(20):
        x = np.array([rng.uniform(-0.1, 0.1), rng.uniform(-1.0, 1.0)])
        step = update_step(obj, x, eps=eps, eta=0.01, C_k=target, beta=beta, gamma=gamma)
        assert step.C >= gamma * target
        if step.t > 0:
            assert step.eps < step.C * np.linalg.norm(step.g)
