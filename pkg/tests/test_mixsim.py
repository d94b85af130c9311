import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kppdr import chain, mixsim, optimal
from kppdr.topology import make_spec

SMALL = mixsim.TrialConfig(trials=20, iterations=30, seed=3)


def optimal_chain(family, k, n):
    spec = make_spec(family, k, n)
    return chain.assemble(spec, optimal.optimal_probabilities(spec).probs)


def test_uniform_matrix_mixes_in_one_step():
    n = 6
    trace = mixsim.simulate(np.full((n, n), 1 / n), SMALL)
    assert trace.distances[0] == 1.0
    assert np.abs(trace.distances[1:]).max() < 1e-15


def test_identity_never_mixes():
    trace = mixsim.simulate(np.eye(5), SMALL)
    assert np.allclose(trace.distances, 1.0, atol=1e-15)


def test_symmetric_k6_tail_rate():
    p = optimal_chain("symmetric", 6, 3)
    trace = mixsim.simulate(p, mixsim.TrialConfig(trials=50, iterations=200))
    assert mixsim.asymptotic_rate(trace, 50) == pytest.approx(math.cos(math.pi / 6), rel=0.02)


def test_geometric_rate_exact():
    assert mixsim.asymptotic_rate([0.5**t for t in range(30)], 10) == pytest.approx(0.5, abs=1e-12)


def test_rate_floor_error():
    with pytest.raises(mixsim.NumericalFloorError):
        mixsim.asymptotic_rate([1.0] + [0.0] * 20, 10)


def test_rate_window_validation():
    with pytest.raises(ValueError):
        mixsim.asymptotic_rate([1.0, 0.5, 0.25], 3)


def test_config_validation():
    with pytest.raises(ValueError):
        mixsim.TrialConfig(trials=0)
    with pytest.raises(ValueError):
        mixsim.TrialConfig(init="gaussian")


def test_seeded_reproducibility():
    p = optimal_chain("cycle", 5, 2)
    a = mixsim.simulate(p, SMALL)
    b = mixsim.simulate(p, SMALL)
    assert np.array_equal(a.distances, b.distances)
    c = mixsim.simulate(p, mixsim.TrialConfig(trials=20, iterations=30, seed=4))
    assert not np.array_equal(a.distances, c.distances)


def test_trial_substreams_stable_under_count_change():
    few, _ = mixsim.initial_vectors(10, mixsim.TrialConfig(trials=3, seed=9))
    many, _ = mixsim.initial_vectors(10, mixsim.TrialConfig(trials=8, seed=9))
    assert np.array_equal(few, many[:, :3])


def test_point_mass_init():
    x, redraws = mixsim.initial_vectors(7, mixsim.TrialConfig(trials=5, init="point-mass"))
    assert redraws == 0
    assert np.array_equal(x.sum(axis=0), np.ones(5))


def test_initial_vectors_never_constant():
    x, redraws = mixsim.initial_vectors(2, mixsim.TrialConfig(trials=40, init="point-mass"))
    assert redraws == 0
    assert np.ptp(x, axis=0).min() > 0
    with pytest.raises(ValueError):
        mixsim.initial_vectors(1, mixsim.TrialConfig(trials=2))


def test_geometric_aggregate():
    p = optimal_chain("symmetric", 4, 2)
    arith = mixsim.simulate(p, SMALL).distances
    geo = mixsim.simulate(p, mixsim.TrialConfig(trials=20, iterations=30, seed=3, aggregate="geometric")).distances
    assert np.all(geo <= arith + 1e-15)


def test_trace_csv():
    trace = mixsim.MixingTrace(np.array([1.0, 0.5]))
    assert trace.to_csv() == "iteration,distance\n0,1.0\n1,0.5\n"
    assert trace.iterations == 1


@settings(max_examples=25)
@given(
    family=st.sampled_from(["symmetric", "cycle", "semi-symmetric"]),
    k=st.integers(4, 7),
    n=st.integers(1, 3),
    scale=st.floats(0.1, 1.0),
    seed=st.integers(0, 2**16),
)
def test_bounded_and_mean_preserving(family, k, n, scale, seed):
    spec = make_spec(family, k, n)
    probs = [scale * v for v in optimal.optimal_probabilities(spec).probs]
    m = chain.assemble(spec, probs).matrix
    trace = mixsim.simulate(m, mixsim.TrialConfig(trials=5, iterations=15, seed=seed))
    assert trace.distances.max() <= 1 + 1e-12
    x, _ = mixsim.initial_vectors(spec.node_count, mixsim.TrialConfig(trials=3, seed=seed))
    mean = x.mean(axis=0)
    for _ in range(15):
        x = m @ x
        assert np.abs(x.mean(axis=0) - mean).max() < 1e-12


def test_compare_self_has_no_crossover():
    trace = mixsim.simulate(optimal_chain("symmetric", 5, 2), mixsim.TrialConfig(trials=10, iterations=80))
    report = mixsim.compare([trace, trace], ["a", "b"])
    assert report.first_crossover is None
    assert report.rates[0] == report.rates[1]
    assert report.same_tail_rate is True
    assert all(row == ["a", "b"] for row in report.ordering)


def test_compare_detects_crossover():
    fast_then_slow = mixsim.MixingTrace(np.array([1.0, 0.1, 0.09, 0.08, 0.07]))
    steady = mixsim.MixingTrace(np.array([1.0, 0.5, 0.25, 0.05, 0.01]))
    report = mixsim.compare([fast_then_slow, steady], ["x", "y"], window=3)
    assert report.ordering[1] == ["x", "y"]
    assert report.first_crossover == 3
    assert report.same_tail_rate is False


def test_compare_length_mismatch():
    with pytest.raises(ValueError):
        mixsim.compare([mixsim.MixingTrace(np.ones(3)), mixsim.MixingTrace(np.ones(4))])


def test_compare_symmetric_beats_semi_early():
    cfg = mixsim.TrialConfig(trials=100, iterations=200)
    sym = mixsim.simulate(optimal_chain("symmetric", 6, 3), cfg)
    semi = mixsim.simulate(optimal_chain("semi-symmetric", 6, 3), cfg)
    report = mixsim.compare([sym, semi], ["symmetric", "semi-symmetric"])
    assert all(report.ordering[t][0] == "symmetric" for t in range(1, 6))
    assert report.same_tail_rate


def test_long_format_csv():
    traces = [mixsim.MixingTrace(np.array([1.0, 0.5])), mixsim.MixingTrace(np.array([1.0, 0.25]))]
    lines = mixsim.long_format_csv(traces, ["a", "b"]).splitlines()
    assert lines == ["label,iteration,distance", "a,0,1.0", "a,1,0.5", "b,0,1.0", "b,1,0.25"]


@pytest.mark.slow
@pytest.mark.parametrize(
    "family, k, n", [("symmetric", 6, 3), ("semi-symmetric", 6, 3), ("cycle", 8, 2), ("semi-cycle", 8, 2)]
)
def test_tail_rate_matches_slem(family, k, n):
    p = optimal_chain(family, k, n)
    trace = mixsim.simulate(p, mixsim.TrialConfig(trials=200, iterations=200))
    assert mixsim.asymptotic_rate(trace, 50) == pytest.approx(chain.slem(p), rel=0.02)
