from __future__ import annotations

import numpy as np
import pytest

from cdlp.benchmarks.gn import GnConfig, generate_gn
from cdlp.benchmarks.lfr import (
    LfrConfig,
    _balance_parity,
    degree_sequence,
    generate_lfr,
    generate_lfr_with_stats,
    pair_stubs,
    solve_min_degree,
    truncated_power_law_mean,
)
from cdlp.benchmarks.mixing import external_degrees, realized_mixing
from cdlp.errors import ConfigError

SMALL_LFR = dict(n=200, k_avg=10.0, k_max=20)


def test_gn_probabilities():
    cfg = GnConfig(z_out=4.0)
    assert cfg.z_in == 12.0
    assert cfg.p_in == pytest.approx(12.0 / 31.0)
    assert cfg.p_out == pytest.approx(4.0 / 96.0)


def test_gn_shape_and_truth():
    g, truth = generate_gn(GnConfig(z_out=4.0), seed=1)
    assert g.node_count == 128
    assert truth.community_sizes == (32, 32, 32, 32)
    assert list(truth.assignment) != sorted(truth.assignment)


def test_gn_determinism():
    a = generate_gn(GnConfig(z_out=3.0), seed=9)
    b = generate_gn(GnConfig(z_out=3.0), seed=9)
    c = generate_gn(GnConfig(z_out=3.0), seed=10)
    assert a == b
    assert a[0] != c[0]


def test_gn_without_cross_edges():
    g, truth = generate_gn(GnConfig(z_out=0.0), seed=2)
    assert external_degrees(g, truth).sum() == 0


@pytest.mark.parametrize("z_out", [-1.0, 17.0])
def test_gn_rejects_bad_z_out(z_out):
    with pytest.raises(ConfigError):
        GnConfig(z_out=z_out)


def test_gn_rejects_inconsistent_groups():
    with pytest.raises(ConfigError):
        GnConfig(z_out=2.0, n=100)


def test_gn_degree_and_mixing_averages():
    degrees, mixing = [], []
    for seed in range(30):
        g, truth = generate_gn(GnConfig(z_out=4.0), seed)
        degrees.append(g.degrees.mean())
        mixing.append(external_degrees(g, truth).mean())
    assert np.mean(degrees) == pytest.approx(16.0, abs=0.5)
    assert np.mean(mixing) == pytest.approx(4.0, abs=0.3)


def test_gn_heavy_mixing_external_degree():
    ext = [external_degrees(*generate_gn(GnConfig(z_out=12.0), seed)).mean() for seed in range(10)]
    assert np.mean(ext) == pytest.approx(12.0, abs=0.8)


def test_realized_mixing(two_triangles, bridged_triangles):
    g, p = two_triangles
    assert realized_mixing(g, p) == 0.0
    g, p = bridged_triangles
    assert realized_mixing(g, p) == pytest.approx(2 / 14)


def test_truncated_power_law_solver():
    cfg = LfrConfig(mu=0.3)
    x_min = solve_min_degree(cfg)
    assert truncated_power_law_mean(cfg.gamma, x_min, cfg.k_max) == pytest.approx(cfg.k_avg, abs=1e-6)
    assert 9.0 < x_min < 10.5


def test_lfr_config_validation():
    with pytest.raises(ConfigError):
        LfrConfig(mu=1.0)
    with pytest.raises(ConfigError):
        LfrConfig(mu=0.2, k_avg=60.0)
    with pytest.raises(ConfigError):
        LfrConfig(mu=0.2, gamma=1.0)


def test_pair_stubs_respects_forbidden_pairs():
    rng = np.random.default_rng(0)
    stubs = np.repeat(np.arange(20), 3)
    side = np.arange(20) % 2
    edges, dropped = pair_stubs(stubs, rng, lambda u, v: side[u] == side[v])
    assert all(side[a] != side[b] for a, b in edges)
    assert all(a < b for a, b in edges)
    assert 2 * len(edges) + dropped == stubs.size


def test_small_lfr_is_simple_and_deterministic():
    cfg = LfrConfig(mu=0.3, **SMALL_LFR)
    g, truth, stats = generate_lfr_with_stats(cfg, seed=4)
    assert g.node_count == 200
    assert truth.node_count == 200
    assert max(g.degrees) <= cfg.k_max
    assert stats.communities == truth.community_count
    assert min(truth.community_sizes) >= stats.min_community
    assert generate_lfr(cfg, seed=4) == (g, truth)
    assert realized_mixing(g, truth) == pytest.approx(0.3, abs=0.05)


def test_lfr_zero_mixing_has_no_cross_edges():
    cfg = LfrConfig(mu=0.0)
    for seed in range(5):
        g, truth = generate_lfr(cfg, seed)
        assert realized_mixing(g, truth) == 0.0
        assert external_degrees(g, truth).sum() == 0


def test_lfr_odd_internal_stubs_stay_inside():
    # 3 + 2 + 2 internal stubs in one community of four: parity must not leak outward
    internal = np.array([3, 2, 2, 0])
    external = np.zeros(4, dtype=np.int64)
    degrees = internal.copy()
    _balance_parity(np.arange(4), internal, external, degrees, size=4, k_max=5)
    assert internal.sum() % 2 == 0
    assert external.sum() == 0
    assert (internal == degrees).all()
    assert (internal <= 3).all()


@pytest.mark.parametrize("overrides", [{}, SMALL_LFR])
def test_lfr_sampled_degrees_stay_in_range(overrides):
    cfg = LfrConfig(mu=0.3, **overrides)
    for seed in range(5):
        degrees, _, k_min = degree_sequence(cfg, np.random.default_rng(seed))
        assert degrees.size == cfg.n
        assert degrees.min() >= k_min
        assert degrees.max() <= cfg.k_max
        assert degrees.sum() % 2 == 0


@pytest.mark.slow
@pytest.mark.parametrize("mu", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
def test_lfr_default_audit(mu):
    cfg = LfrConfig(mu=mu)
    for seed in range(10):
        g, truth = generate_lfr(cfg, seed)
        assert g.degrees.mean() == pytest.approx(cfg.k_avg, abs=2.0)
        assert g.degrees.max() <= cfg.k_max
        assert realized_mixing(g, truth) == pytest.approx(mu, abs=0.05)
        # every community can host its members' internal degree
        internal = g.degrees - external_degrees(g, truth)
        sizes = np.asarray(truth.community_sizes)
        assert (internal <= sizes[truth.labels] - 1).all()
