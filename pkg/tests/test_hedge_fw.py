from types import SimpleNamespace

import numpy as np
import pytest

from hedgelasso.core import CandidateGrid, FwConfig, HedgeConfig, validate_instance
from hedgelasso.datagen import SyntheticSpec, gen_instance
from hedgelasso.fw import fw_init, fw_step, l1_lmo, predict, stats_init, stats_update
from hedgelasso.hedge import hedge_init, hedge_update
from hedgelasso.hedge_fw import (
    aggregate_estimator,
    default_grid,
    run_hedge_fw,
    select_estimator,
)


def reference_run(instance, radii, eta, k_step):
    """Per-expert recursion composed from the single-step operations.

    Independent of the driver's columnwise evaluation; also records the
    l1 norm of every iterate after every step.
    """
    n, p = instance.n, instance.p
    G = len(radii)
    iterates = [fw_init(p, r) for r in radii]
    state = hedge_init(G)
    stats = stats_init(p)
    errors = np.zeros((n, G))
    weights = np.zeros((n, G))
    feasible = True
    for i in range(n):
        x, yi = instance.x[i], instance.y[i]
        errs = np.array([(yi - predict(it.b, x)) ** 2 for it in iterates])
        errors[i] = errs
        stats = stats_update(stats, x, yi)
        for g in range(G):
            grad = stats.alpha_bar @ iterates[g].b - stats.beta_bar
            d = l1_lmo(grad, radii[g])
            iterates[g] = fw_step(iterates[g], d, k_step)
            feasible &= np.abs(iterates[g].b).sum() <= radii[g] + 1e-9
        state = hedge_update(state, errs, eta)
        weights[i] = state.weights
    B = np.array([it.b for it in iterates])
    return SimpleNamespace(weights=state.weights, iterates=B, errors=errors,
                           weight_trace=weights, feasible=feasible)


def small_instance(seed=0, n=25, p=12, s0=3, sigma=0.1):
    inst, _ = gen_instance(SyntheticSpec(n=n, p=p, s0=s0, sigma=sigma, seed=seed))
    return inst


def test_single_expert_weight_is_one():
    inst = small_instance()
    out = run_hedge_fw(inst, CandidateGrid([2.0]), HedgeConfig(eta=0.5), FwConfig())
    assert np.array_equal(out.weights, [1.0])


def test_one_observation_hand_trace():
    # x = [1, 2], y = 1, r = 1, K = 2: prediction 0, squared error 1,
    # beta_bar = [1, 2], gradient = [-1, -2], vertex at j=2, gamma = 1
    inst = validate_instance([[1.0, 2.0]], [1.0])
    out = run_hedge_fw(inst, CandidateGrid([1.0]), HedgeConfig(eta=0.7), FwConfig(k_step=2.0),
                       record_trace=True)
    assert np.array_equal(out.iterates, [[0.0, 1.0]])
    assert out.per_expert_cumulative_loss == pytest.approx([1.0])
    assert np.array_equal(out.trace.squared_errors, [[1.0]])


def test_duplicate_radii_stay_symmetric():
    # identical experts see identical data, so weights stay at 1/2 and the
    # iterates coincide; built on a stub grid because the public grid type
    # requires strictly increasing radii
    inst = small_instance(seed=3)
    grid = SimpleNamespace(radii=np.array([1.5, 1.5]), size=2)
    out = run_hedge_fw(inst, grid, HedgeConfig(eta=0.4), FwConfig())
    assert np.allclose(out.weights, [0.5, 0.5], atol=1e-15)
    assert np.array_equal(out.iterates[0], out.iterates[1])


def test_driver_matches_composed_single_step_operations():
    inst = small_instance(seed=11)
    radii = np.array([0.5, 1.7, 4.0])
    eta = 0.45
    out = run_hedge_fw(inst, CandidateGrid(radii), HedgeConfig(eta=eta),
                       FwConfig(k_step=2.0), record_trace=True)
    ref = reference_run(inst, radii, eta, 2.0)
    assert np.abs(out.iterates - ref.iterates).max() <= 1e-10
    assert np.abs(out.weights - ref.weights).max() <= 1e-12
    assert np.abs(out.trace.squared_errors - ref.errors).max() <= 1e-10
    assert np.abs(out.trace.weights - ref.weight_trace).max() <= 1e-10
    assert ref.feasible


def test_prequential_errors_ignore_current_observation():
    # the error charged at step i is computable from the first i-1
    # observations alone: truncating the stream after i-1 and predicting
    # observation i reproduces it
    inst = small_instance(seed=5, n=12, p=6)
    radii = np.array([0.8, 2.0])
    out = run_hedge_fw(inst, CandidateGrid(radii), HedgeConfig(eta=0.3), FwConfig(),
                       record_trace=True)
    for i in [1, 4, 9]:
        prefix = validate_instance(inst.x[:i], inst.y[:i])
        pre = run_hedge_fw(prefix, CandidateGrid(radii), HedgeConfig(eta=0.3), FwConfig())
        preds = pre.iterates @ inst.x[i]
        errs = (inst.y[i] - preds) ** 2
        assert np.abs(errs - out.trace.squared_errors[i]).max() <= 1e-12


def test_weight_loss_consistency():
    inst = small_instance(seed=9)
    eta = 0.25
    out = run_hedge_fw(inst, CandidateGrid([0.5, 1.0, 2.0, 4.0]), HedgeConfig(eta=eta),
                       FwConfig())
    L = out.per_expert_cumulative_loss
    expected = np.exp(-eta * (L - L.min()))
    expected /= expected.sum()
    mask = expected > 1e-250
    assert np.abs(out.weights[mask] / expected[mask] - 1.0).max() <= 1e-9
    # strictly lower cumulative loss implies strictly larger weight
    for a in range(len(L)):
        for b in range(len(L)):
            if L[a] < L[b] and expected[b] > 1e-250:
                assert out.weights[a] > out.weights[b]


def test_determinism_bit_identical():
    inst = small_instance(seed=21)
    grid = default_grid(inst, 6)
    outs = [
        run_hedge_fw(inst, grid, HedgeConfig(eta=0.5), FwConfig())
        for _ in range(2)
    ]
    assert np.array_equal(outs[0].iterates, outs[1].iterates)
    assert np.array_equal(outs[0].weights, outs[1].weights)
    assert np.array_equal(outs[0].per_expert_cumulative_loss,
                          outs[1].per_expert_cumulative_loss)


def test_permutation_equivariance_over_experts():
    inst = small_instance(seed=13)
    radii = np.array([0.4, 1.1, 2.6, 7.0])
    perm = np.array([2, 0, 3, 1])
    out = run_hedge_fw(inst, CandidateGrid(radii), HedgeConfig(eta=0.35), FwConfig())
    stub = SimpleNamespace(radii=radii[perm], size=4)
    out_p = run_hedge_fw(inst, stub, HedgeConfig(eta=0.35), FwConfig())
    assert np.array_equal(out_p.weights, out.weights[perm])
    assert np.array_equal(out_p.iterates, out.iterates[perm])


def test_iterate_feasibility_in_output():
    inst = small_instance(seed=17)
    grid = default_grid(inst, 8)
    out = run_hedge_fw(inst, grid, HedgeConfig(eta=0.5), FwConfig())
    assert np.all(np.abs(out.iterates).sum(axis=1) <= grid.radii + 1e-9)


def test_aggregate_estimator():
    stub = SimpleNamespace(
        weights=np.array([0.25, 0.75]),
        iterates=np.array([[4.0, 0.0], [0.0, 4.0]]),
    )
    assert np.allclose(aggregate_estimator(stub), [1.0, 3.0])
    mid = SimpleNamespace(weights=np.array([0.5, 0.5]),
                          iterates=np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert np.allclose(aggregate_estimator(mid), [0.5, 0.5])


def test_aggregate_degenerates_to_dirac_pick():
    inst = small_instance(seed=29)
    out = run_hedge_fw(inst, default_grid(inst, 5), HedgeConfig(eta=2.0), FwConfig())
    sel = select_estimator(out, 0.01)
    if sel.is_dirac:
        agg = aggregate_estimator(out)
        assert np.abs(agg - sel.coefficients).max() <= 1e-6 * max(1.0, np.abs(agg).max())


def test_select_estimator_rules():
    base = np.array([[1.0, 0.0], [0.0, 1.0]])
    near = SimpleNamespace(weights=np.array([0.999, 0.001]), iterates=base)
    s = select_estimator(near, 0.01)
    assert (s.index, s.is_dirac) == (0, True)
    assert np.array_equal(s.coefficients, base[0])
    spread = SimpleNamespace(weights=np.array([0.6, 0.4]), iterates=base)
    s = select_estimator(spread, 0.01)
    assert (s.index, s.is_dirac) == (0, False)
    tie = SimpleNamespace(weights=np.array([0.5, 0.5]), iterates=base)
    s = select_estimator(tie, 0.01)
    assert (s.index, s.is_dirac) == (0, False)


def test_default_grid_endpoints_and_spacing():
    inst = small_instance(seed=1)
    col_sq = (inst.x ** 2).sum(axis=0)
    r_max = np.abs(inst.x.T @ inst.y).max() / (col_sq.min() / inst.n)
    g2 = default_grid(inst, 2)
    assert np.allclose(g2.radii, [r_max * 1e-3, r_max], rtol=1e-12)
    g4 = default_grid(inst, 4)
    ratios = g4.radii[1:] / g4.radii[:-1]
    assert np.abs(ratios - 10.0).max() <= 1e-9


def test_default_grid_rejects_degenerate_design():
    inst = validate_instance(np.zeros((3, 2)), np.zeros(3))
    with pytest.raises(ValueError, match="degenerate"):
        default_grid(inst, 4)
    with pytest.raises(ValueError, match="size"):
        default_grid(small_instance(), 1)
