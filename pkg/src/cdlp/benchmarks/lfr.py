from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from cdlp.config import defaults
from cdlp.errors import ConfigError, GenerationError
from cdlp.graph.core import Graph, Partition, build_graph, canonical

log = logging.getLogger(__name__)

ASSIGNMENT_ATTEMPTS = 20


@dataclass(frozen=True)
class LfrConfig:
    mu: float
    n: int = defaults.LFR_NODES
    k_avg: float = defaults.LFR_AVG_DEGREE
    k_max: int = defaults.LFR_MAX_DEGREE
    gamma: float = defaults.LFR_GAMMA
    beta: float = defaults.LFR_BETA
    tolerance: float = defaults.LFR_MIXING_TOLERANCE
    max_sweeps: int = defaults.LFR_MAX_SWEEPS

    def __post_init__(self):
        if not 0.0 <= self.mu < 1.0:
            raise ConfigError(f"mu must lie in [0, 1), got {self.mu}")
        if not (1 <= self.k_avg <= self.k_max < self.n):
            raise ConfigError(
                f"need 1 <= k_avg <= k_max < n, got k_avg={self.k_avg} k_max={self.k_max} n={self.n}"
            )
        if self.gamma <= 1.0:
            raise ConfigError(f"gamma must be > 1, got {self.gamma}")
        if self.beta < 1.0:
            raise ConfigError(f"beta must be >= 1, got {self.beta}")
        if self.tolerance < 0 or self.max_sweeps < 0:
            raise ConfigError("tolerance and max_sweeps must be non-negative")


@dataclass(frozen=True)
class LfrStats:
    x_min: float              # continuous lower cutoff solved for the target mean
    k_min: int
    min_community: int
    max_community: int
    communities: int
    dropped_stubs: int
    rewire_sweeps: int
    mixing_offenders: int     # nodes still outside the per-node tolerance

    def as_dict(self) -> dict:
        return asdict(self)


def _half_up(x):
    return np.floor(np.asarray(x, dtype=float) + 0.5).astype(np.int64)


def _power_integral(e: float, a: float, b: float) -> float:
    """Integral of x**e over [a, b]."""
    if abs(e + 1.0) < 1e-12:
        return math.log(b / a)
    return (b ** (e + 1.0) - a ** (e + 1.0)) / (e + 1.0)


def truncated_power_law_mean(exponent: float, lo: float, hi: float) -> float:
    if hi <= lo:
        return float(lo)
    return _power_integral(1.0 - exponent, lo, hi) / _power_integral(-exponent, lo, hi)


def sample_power_law(rng: np.random.Generator, size: int, exponent: float, lo: float, hi: float) -> np.ndarray:
    """Inverse-CDF draws from p(x) ~ x**-exponent on [lo, hi]."""
    u = rng.random(size)
    if hi <= lo:
        return np.full(size, float(lo))
    if abs(exponent - 1.0) < 1e-12:
        return lo * (hi / lo) ** u
    e = 1.0 - exponent
    return (lo ** e + u * (hi ** e - lo ** e)) ** (1.0 / e)


def solve_min_degree(cfg: LfrConfig) -> float:
    """Continuous lower cutoff whose truncated power-law mean equals k_avg."""
    if cfg.k_avg >= cfg.k_max:
        return float(cfg.k_max)

    def gap(x: float) -> float:
        return truncated_power_law_mean(cfg.gamma, x, cfg.k_max) - cfg.k_avg

    if gap(1.0) > 0:
        raise GenerationError(
            "degree sequence",
            f"no minimum degree >= 1 gives mean {cfg.k_avg} with k_max={cfg.k_max}, gamma={cfg.gamma}",
        )
    return float(brentq(gap, 1.0, cfg.k_avg, xtol=1e-10))


def degree_sequence(cfg: LfrConfig, rng: np.random.Generator) -> tuple[np.ndarray, float, int]:
    x_min = solve_min_degree(cfg)
    k_min = max(1, int(_half_up(x_min)))
    degrees = np.clip(_half_up(sample_power_law(rng, cfg.n, cfg.gamma, x_min, cfg.k_max)), k_min, cfg.k_max)
    if degrees.sum() % 2 == 1:
        bump = np.flatnonzero(degrees < cfg.k_max)
        if bump.size:
            degrees[bump[0]] += 1
        else:
            degrees[np.flatnonzero(degrees > k_min)[0]] -= 1
    return degrees, x_min, k_min


def _community_sizes(cfg: LfrConfig, rng: np.random.Generator, s_min: int, s_max: int, demand: int) -> list[int]:
    sizes: list[int] = []
    total = 0
    while total < cfg.n:
        s = int(np.floor(sample_power_law(rng, 1, cfg.beta, s_min, s_max + 1)[0]))
        s = min(max(s, s_min), s_max)
        sizes.append(s)
        total += s

    # trim the overshoot from the tail, then hand out what is left
    while total > cfg.n and sizes:
        total -= sizes.pop()
    deficit = cfg.n - total
    if deficit >= s_min:
        sizes.append(deficit)
        deficit = 0
    while deficit > 0:
        growable = [i for i, s in enumerate(sizes) if s < s_max]
        if not growable:
            raise GenerationError("community sizes", f"cannot place {deficit} leftover nodes")
        for i in growable[:deficit]:
            sizes[i] += 1
        deficit = cfg.n - sum(sizes)

    # the largest community must host the largest internal degree
    if max(sizes) <= demand:
        big = int(np.argmax(sizes))
        need = demand + 1 - sizes[big]
        sizes[big] = demand + 1
        for i in sorted(range(len(sizes)), key=lambda j: -sizes[j]):
            if i == big:
                continue
            take = min(need, sizes[i] - s_min)
            sizes[i] -= take
            need -= take
            if need == 0:
                break
        if need > 0:
            raise GenerationError("community sizes", f"no room for a community of size {demand + 1}")
    return sizes


def _assign(
    internal: np.ndarray, sizes: list[int], rng: np.random.Generator
) -> Optional[np.ndarray]:
    """Place nodes (largest internal degree first) into communities large enough to host them."""
    sizes_arr = np.asarray(sizes)
    free = sizes_arr.copy()
    labels = np.full(internal.size, -1, dtype=np.int64)
    order = np.lexsort((rng.random(internal.size), -internal))
    for v in order:
        eligible = np.flatnonzero((free > 0) & (sizes_arr > internal[v]))
        if eligible.size == 0:
            return None
        weights = free[eligible] / free[eligible].sum()
        c = int(rng.choice(eligible, p=weights))
        labels[v] = c
        free[c] -= 1
    return labels


def _balance_parity(
    members: np.ndarray, internal: np.ndarray, external: np.ndarray, degrees: np.ndarray, size: int, k_max: int
) -> None:
    """Even out a community's internal stub count; never adds an external stub."""
    if internal[members].sum() % 2 == 0:
        return
    for v in members:
        if external[v] > 0 and internal[v] < size - 1:
            internal[v] += 1
            external[v] -= 1
            return
    for v in members:
        if internal[v] < size - 1 and degrees[v] < k_max:
            internal[v] += 1
            degrees[v] += 1
            return
    for v in members[np.argsort(-internal[members], kind="stable")]:
        if internal[v] > 0:
            internal[v] -= 1
            degrees[v] -= 1
            return


def _balance_external(external: np.ndarray, degrees: np.ndarray, k_max: int) -> None:
    """Even out the global external stub count by growing or shrinking one node."""
    if external.sum() % 2 == 0:
        return
    for v in np.flatnonzero(external > 0):
        if degrees[v] < k_max:
            external[v] += 1
            degrees[v] += 1
            return
    v = int(np.flatnonzero(external > 0)[0])
    external[v] -= 1
    degrees[v] -= 1


def pair_stubs(
    stubs: np.ndarray,
    rng: np.random.Generator,
    forbidden: Callable[[int, int], bool] | None = None,
    max_sweeps: int = defaults.LFR_MAX_SWEEPS,
) -> tuple[set[tuple[int, int]], int]:
    """
    Configuration-model matching of `stubs`, then random endpoint swaps until
    no self-loop, multi-edge or forbidden pair remains or the sweep cap is hit.
    Returns (edges, dropped stub count).
    """
    if stubs.size % 2:
        raise GenerationError("wiring", "odd number of stubs")
    pairs = [list(p) for p in rng.permutation(stubs).reshape(-1, 2).tolist()]
    counts = Counter(canonical(u, v) for u, v in pairs)

    def bad(u: int, v: int) -> bool:
        return u == v or counts[canonical(u, v)] > 1 or (forbidden is not None and forbidden(u, v))

    def acceptable(u: int, v: int) -> bool:
        return u != v and counts[canonical(u, v)] == 0 and not (forbidden is not None and forbidden(u, v))

    for _ in range(max_sweeps):
        todo = [i for i, (u, v) in enumerate(pairs) if bad(u, v)]
        if not todo or len(pairs) < 2:
            break
        for i in todo:
            u, v = pairs[i]
            if not bad(u, v):
                continue
            j = int(rng.integers(len(pairs)))
            if j == i:
                continue
            x, y = pairs[j]
            counts[canonical(u, v)] -= 1
            counts[canonical(x, y)] -= 1
            if acceptable(u, y) and acceptable(x, v) and canonical(u, y) != canonical(x, v):
                pairs[i], pairs[j] = [u, y], [x, v]
            counts[canonical(*pairs[i])] += 1
            counts[canonical(*pairs[j])] += 1

    edges: set[tuple[int, int]] = set()
    dropped = 0
    for u, v in pairs:
        e = canonical(u, v)
        if u == v or e in edges or (forbidden is not None and forbidden(u, v)):
            dropped += 2
            continue
        edges.add(e)
    return edges, dropped


def _fix_mixing(
    adj: list[set[int]], labels: np.ndarray, cfg: LfrConfig, rng: np.random.Generator
) -> tuple[int, int]:
    """
    Degree-preserving swaps that move external endpoints between members of a
    community until every node's external fraction is within tolerance of mu.
    Returns (sweeps used, offenders left).
    """
    n = len(adj)
    deg = np.array([len(s) for s in adj])

    def ext(v: int) -> int:
        return sum(1 for u in adj[v] if labels[u] != labels[v])

    def deviation(v: int, extra: int = 0) -> float:
        return (ext(v) + extra) / deg[v] - cfg.mu if deg[v] else 0.0

    members = [np.flatnonzero(labels == c) for c in range(int(labels.max()) + 1)]

    def offenders() -> list[int]:
        return [v for v in range(n) if abs(deviation(v)) > cfg.tolerance]

    def swap(old1, old2, new1, new2) -> None:
        for a, b in (old1, old2):
            adj[a].discard(b)
            adj[b].discard(a)
        for a, b in (new1, new2):
            adj[a].add(b)
            adj[b].add(a)

    sweeps = 0
    for sweeps in range(1, cfg.max_sweeps + 1):
        todo = offenders()
        if not todo:
            return sweeps - 1, 0
        progress = False
        for v in todo:
            dev = deviation(v)
            if abs(dev) <= cfg.tolerance:
                continue
            # one swap shifts v by 1/deg; skip rounding-bound nodes it cannot improve
            if abs(dev - math.copysign(1.0, dev) / deg[v]) >= abs(dev):
                continue
            mates = members[labels[v]]
            for _ in range(20):
                b = int(rng.choice(mates))
                if b == v:
                    continue
                if dev > 0:
                    # (v, d) external + (a, b) internal -> (v, a) internal + (b, d) external
                    outs = sorted(u for u in adj[v] if labels[u] != labels[v])
                    ins = sorted(u for u in adj[b] if labels[u] == labels[v] and u != v)
                    if not outs or not ins or deviation(b, +1) > cfg.tolerance:
                        continue
                    d, a = int(rng.choice(outs)), int(rng.choice(ins))
                    if a in adj[v] or d in adj[b]:
                        continue
                    swap((v, d), (a, b), (v, a), (b, d))
                else:
                    # (v, a) internal + (b, d) external -> (v, d) external + (a, b) internal
                    ins = sorted(u for u in adj[v] if labels[u] == labels[v] and u != b)
                    outs = sorted(u for u in adj[b] if labels[u] != labels[v])
                    if not ins or not outs or deviation(b, -1) < -cfg.tolerance:
                        continue
                    a, d = int(rng.choice(ins)), int(rng.choice(outs))
                    if d in adj[v] or a in adj[b] or a == b:
                        continue
                    swap((v, a), (b, d), (v, d), (a, b))
                progress = True
                break
        if not progress:
            break
    return sweeps, len(offenders())


def generate_lfr_with_stats(cfg: LfrConfig, seed: int) -> tuple[Graph, Partition, LfrStats]:
    rng = np.random.default_rng(seed)

    degrees, x_min, k_min = degree_sequence(cfg, rng)
    internal = _half_up((1.0 - cfg.mu) * degrees)
    demand = int(internal.max())
    s_min = int(math.ceil(k_min * (1.0 - cfg.mu))) + 1
    s_max = min(cfg.n, max(cfg.k_max, demand + 1))
    if demand + 1 > cfg.n or s_min > s_max:
        raise GenerationError("community sizes", f"s_min={s_min} s_max={s_max} cannot host demand {demand}")

    labels = None
    sizes: list[int] = []
    for attempt in range(ASSIGNMENT_ATTEMPTS):
        sizes = _community_sizes(cfg, rng, s_min, s_max, demand)
        labels = _assign(internal, sizes, rng)
        if labels is not None:
            break
        log.debug("LFR assignment attempt %d failed, resampling sizes", attempt + 1)
    if labels is None:
        raise GenerationError("community assignment", f"no feasible placement after {ASSIGNMENT_ATTEMPTS} attempts")

    external = degrees - internal
    for c, size in enumerate(sizes):
        _balance_parity(np.flatnonzero(labels == c), internal, external, degrees, size, cfg.k_max)
    _balance_external(external, degrees, cfg.k_max)

    dropped = 0
    adj: list[set[int]] = [set() for _ in range(cfg.n)]
    for c in range(len(sizes)):
        members = np.flatnonzero(labels == c)
        stubs = np.repeat(members, internal[members])
        edges, lost = pair_stubs(stubs, rng, max_sweeps=cfg.max_sweeps)
        dropped += lost
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)

    ext_stubs = np.repeat(np.arange(cfg.n), external)
    edges, lost = pair_stubs(ext_stubs, rng, lambda u, v: labels[u] == labels[v], max_sweeps=cfg.max_sweeps)
    dropped += lost
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    if dropped:
        log.info("LFR seed=%d: dropped %d stubs that could not be wired", seed, dropped)

    sweeps, left = _fix_mixing(adj, labels, cfg, rng)
    if left:
        log.warning("LFR seed=%d: %d nodes outside mixing tolerance after %d sweeps", seed, left, sweeps)

    g = build_graph(cfg.n, ((a, b) for a, nbrs in enumerate(adj) for b in nbrs if a < b))
    partition = Partition.from_labels(labels.tolist())
    stats = LfrStats(
        x_min=x_min, k_min=k_min, min_community=min(sizes), max_community=max(sizes),
        communities=len(sizes), dropped_stubs=dropped, rewire_sweeps=sweeps, mixing_offenders=left,
    )
    return g, partition, stats


def generate_lfr(cfg: LfrConfig, seed: int) -> tuple[Graph, Partition]:
    g, partition, _ = generate_lfr_with_stats(cfg, seed)
    return g, partition
