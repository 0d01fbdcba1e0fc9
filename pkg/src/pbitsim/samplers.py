"""Serial, graph-colored and event-driven asynchronous Gibbs samplers.

All samplers draw the ``k``-th random number of p-bit ``i`` from substream
``i`` at index ``k``, so a colored sweep and a serial sweep that visits
p-bits in class order produce the same trajectory bit for bit.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter

import numpy as np
from numba import njit

from .core import (
    ENUMERATION_LIMIT,
    PBitNetwork,
    _local_field,
    _pbit_sample,
    _update_site,
    random_state,
    state_to_index,
    validate_state,
)
from .rng import RandomStream, draw_symmetric, draw_unit, stream_key, stream_keys

CLOCK_STREAM_BASE = 1 << 40
SAMPLERS = ("serial", "colored", "async", "directed")


@dataclass
class ColoringPlan:
    colors: np.ndarray
    class_lists: list[np.ndarray]

    @property
    def num_colors(self) -> int:
        return len(self.class_lists)

    @property
    def order(self) -> np.ndarray:
        """Class lists concatenated: the serial order equivalent to one colored sweep."""
        if not self.class_lists:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(self.class_lists).astype(np.int64)

    def class_bounds(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum([len(c) for c in self.class_lists])]).astype(np.int64)

    def validate(self, net: PBitNetwork) -> None:
        if len(self.colors) != net.n:
            raise ValueError("coloring does not match network size")
        seen = np.zeros(net.n, dtype=np.int64)
        for c, members in enumerate(self.class_lists):
            if np.any(self.colors[members] != c):
                raise ValueError("class lists disagree with color vector")
            seen[members] += 1
        if np.any(seen != 1):
            raise ValueError("every p-bit must appear in exactly one color class")
        if net.num_edges and np.any(self.colors[net.rows] == self.colors[net.cols]):
            bad = np.flatnonzero(self.colors[net.rows] == self.colors[net.cols])[0]
            raise ValueError(
                f"improper coloring: edge ({net.rows[bad]}, {net.cols[bad]}) lies inside color class "
                f"{self.colors[net.rows[bad]]}"
            )

    @classmethod
    def from_colors(cls, colors) -> "ColoringPlan":
        colors = np.asarray(colors, dtype=np.int64)
        k = int(colors.max()) + 1 if len(colors) else 0
        return cls(colors, [np.flatnonzero(colors == c) for c in range(k)])


@dataclass
class AsyncConfig:
    mean_flip_interval: float = 1.0
    synapse_latency: float = 0.0
    horizon: float = 1000.0
    sample_interval: float | None = None
    burn_in_fraction: float = 0.1
    history: int = 16

    def __post_init__(self):
        if not self.mean_flip_interval > 0:
            raise ValueError("mean_flip_interval must be positive")
        if self.synapse_latency < 0:
            raise ValueError("synapse_latency must be non-negative")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if not 0 <= self.burn_in_fraction < 1:
            raise ValueError("burn_in_fraction must lie in [0, 1)")


@dataclass
class SampleRecord:
    """Statistics gathered by a sampler run."""

    sampler: str
    n: int
    sweeps: float
    attempted_flips: int
    wall_time: float
    final_state: np.ndarray
    counts: np.ndarray | None = None
    magnetization: np.ndarray | None = None
    energy: np.ndarray | None = None
    marginals: np.ndarray | None = None
    overlaps: int = 0
    intervals: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    def distribution(self) -> np.ndarray:
        if self.counts is None:
            raise ValueError("no state histogram was recorded (network too large?)")
        return self.counts / self.counts.sum()

    def summary(self) -> dict:
        out = {
            "sampler": self.sampler,
            "n": self.n,
            "sweeps": self.sweeps,
            "attempted_flips": int(self.attempted_flips),
            "wall_time": self.wall_time,
            "flips_per_second": throughput(self),
        }
        if self.sampler == "async":
            out["overlapping_updates"] = int(self.overlaps)
        if self.marginals is not None:
            out["mean_magnetization"] = float(np.mean(self.marginals))
        return out


# ---------------------------------------------------------------- coloring


def color_graph(net: PBitNetwork) -> ColoringPlan:
    """Dsatur coloring: max saturation first, ties by degree then lowest index."""
    n = net.n
    indptr, indices = net.indptr, net.indices
    degree = np.diff(indptr)
    colors = np.full(n, -1, dtype=np.int64)
    neighbor_colors: list[set[int]] = [set() for _ in range(n)]
    heap = [(0, -int(degree[v]), v) for v in range(n)]
    heapq.heapify(heap)
    while heap:
        neg_sat, _, v = heapq.heappop(heap)
        if colors[v] >= 0 or -neg_sat != len(neighbor_colors[v]):
            continue
        used = neighbor_colors[v]
        c = 0
        while c in used:
            c += 1
        colors[v] = c
        for u in indices[indptr[v] : indptr[v + 1]]:
            if colors[u] < 0 and c not in neighbor_colors[u]:
                neighbor_colors[u].add(c)
                heapq.heappush(heap, (-len(neighbor_colors[u]), -int(degree[u]), int(u)))
    return ColoringPlan.from_colors(colors)


# ---------------------------------------------------------------- kernels


@njit(cache=True)
def _serial_kernel(indptr, indices, data, bias, m, beta, keys, counters, order, sweeps,
                   burn, hist, per_update, mags, energies_out, marg):
    n = len(m)
    idx = 0
    if hist.size:
        for i in range(n):
            if m[i] > 0:
                idx |= 1 << i
    for s in range(sweeps):
        for k in range(len(order)):
            i = order[k]
            new = _update_site(indptr, indices, data, bias, m, i, beta, keys, counters)
            if new != m[i]:
                m[i] = new
                if hist.size:
                    idx ^= 1 << i
            if per_update and s >= burn and hist.size:
                hist[idx] += 1
        if s >= burn:
            if hist.size and not per_update:
                hist[idx] += 1
            if marg.size:
                for i in range(n):
                    marg[i] += m[i]
        if mags.size:
            tot = 0.0
            for i in range(n):
                tot += m[i]
            mags[s] = tot / max(n, 1)
        if energies_out.size:
            e = 0.0
            for i in range(n):
                e -= bias[i] * m[i]
                for q in range(indptr[i], indptr[i + 1]):
                    e -= 0.5 * data[q] * m[i] * m[indices[q]]
            energies_out[s] = e


@njit(cache=True)
def _colored_kernel(indptr, indices, data, bias, m, beta, keys, counters, order, bounds,
                    sweeps, burn, hist, per_update, mags, energies_out, marg):
    n = len(m)
    buf = np.empty(len(order), dtype=np.int8)
    idx = 0
    if hist.size:
        for i in range(n):
            if m[i] > 0:
                idx |= 1 << i
    for s in range(sweeps):
        for c in range(len(bounds) - 1):
            lo = bounds[c]
            hi = bounds[c + 1]
            # every member reads the pre-class snapshot, then all commit together
            for k in range(lo, hi):
                i = order[k]
                buf[k] = _update_site(indptr, indices, data, bias, m, i, beta, keys, counters)
            for k in range(lo, hi):
                i = order[k]
                if buf[k] != m[i]:
                    m[i] = buf[k]
                    if hist.size:
                        idx ^= 1 << i
            if per_update and s >= burn and hist.size:
                hist[idx] += 1
        if s >= burn:
            if hist.size and not per_update:
                hist[idx] += 1
            if marg.size:
                for i in range(n):
                    marg[i] += m[i]
        if mags.size:
            tot = 0.0
            for i in range(n):
                tot += m[i]
            mags[s] = tot / max(n, 1)
        if energies_out.size:
            e = 0.0
            for i in range(n):
                e -= bias[i] * m[i]
                for q in range(indptr[i], indptr[i + 1]):
                    e -= 0.5 * data[q] * m[i] * m[indices[q]]
            energies_out[s] = e


@njit(cache=True)
def _heap_push(ht, hi, size, t, i):
    k = size
    ht[k] = t
    hi[k] = i
    while k > 0:
        p = (k - 1) >> 1
        if ht[p] < ht[k] or (ht[p] == ht[k] and hi[p] < hi[k]):
            break
        ht[p], ht[k] = ht[k], ht[p]
        hi[p], hi[k] = hi[k], hi[p]
        k = p
    return size + 1


@njit(cache=True)
def _heap_pop(ht, hi, size):
    t = ht[0]
    i = hi[0]
    size -= 1
    ht[0] = ht[size]
    hi[0] = hi[size]
    k = 0
    while True:
        a = 2 * k + 1
        b = a + 1
        best = k
        if a < size and (ht[a] < ht[best] or (ht[a] == ht[best] and hi[a] < hi[best])):
            best = a
        if b < size and (ht[b] < ht[best] or (ht[b] == ht[best] and hi[b] < hi[best])):
            best = b
        if best == k:
            break
        ht[best], ht[k] = ht[k], ht[best]
        hi[best], hi[k] = hi[k], hi[best]
        k = best
    return t, i, size


@njit(cache=True)
def _stale_value(m, i, t_read, log_t, log_v, log_len, log_head):
    """Value of p-bit ``i`` at time ``t_read`` from its ring of recent changes."""
    v = m[i]
    H = log_t.shape[1]
    k = log_len[i]
    pos = log_head[i]
    while k > 0:
        pos = (pos - 1) % H
        if log_t[i, pos] <= t_read:
            break
        v = log_v[i, pos]
        k -= 1
    return v


@njit(cache=True)
def _async_kernel(indptr, indices, data, bias, m, beta, keys, counters, clock_keys,
                  clock_counters, mean, latency, horizon, t_burn, interval, hist, marg,
                  log_t, log_v, log_len, log_head, last_update, trace_node, intervals):
    n = len(m)
    H = log_t.shape[1]
    ht = np.empty(n, dtype=np.float64)
    hi = np.empty(n, dtype=np.int64)
    size = 0
    for i in range(n):
        u = draw_unit(clock_keys[i], clock_counters[i])
        clock_counters[i] += 1
        size = _heap_push(ht, hi, size, -mean * math.log1p(-u), i)
    idx = 0
    if hist.size:
        for i in range(n):
            if m[i] > 0:
                idx |= 1 << i
    events = 0
    overlaps = 0
    samples = 0
    next_sample = t_burn
    n_int = 0
    prev_trace = 0.0
    while size > 0:
        t = ht[0]
        if t > horizon:
            break
        # snapshots at regular times between events
        while next_sample <= t and next_sample <= horizon:
            if hist.size:
                hist[idx] += 1
            if marg.size:
                for q in range(n):
                    marg[q] += m[q]
            samples += 1
            next_sample += interval
        t, i, size = _heap_pop(ht, hi, size)
        if latency > 0.0:
            acc = bias[i]
            t_read = t - latency
            for q in range(indptr[i], indptr[i + 1]):
                j = indices[q]
                acc += data[q] * _stale_value(m, j, t_read, log_t, log_v, log_len, log_head)
                if last_update[j] > t_read:
                    overlaps += 1
        else:
            acc = _local_field(indptr, indices, data, bias, m, i)
        r = draw_symmetric(keys[i], counters[i])
        counters[i] += 1
        new = _pbit_sample(beta * acc, r)
        if new != m[i]:
            p = log_head[i]
            log_t[i, p] = t
            log_v[i, p] = m[i]
            log_head[i] = (p + 1) % H
            if log_len[i] < H:
                log_len[i] += 1
            m[i] = new
            if hist.size:
                idx ^= 1 << i
        last_update[i] = t
        events += 1
        if i == trace_node and n_int < intervals.size:
            intervals[n_int] = t - prev_trace
            prev_trace = t
            n_int += 1
        u = draw_unit(clock_keys[i], clock_counters[i])
        clock_counters[i] += 1
        size = _heap_push(ht, hi, size, t - mean * math.log1p(-u), i)
    while next_sample <= horizon:
        if hist.size:
            hist[idx] += 1
        if marg.size:
            for q in range(n):
                marg[q] += m[q]
        samples += 1
        next_sample += interval
    return events, overlaps, samples, n_int


# ---------------------------------------------------------------- helpers


def _keys_and_counters(rng: RandomStream, n: int):
    rng.ensure(n)
    return stream_keys(rng.seed, 0, n), rng.counters


def _initial_state(net: PBitNetwork, state, rng: RandomStream) -> np.ndarray:
    if state is None:
        return random_state(net.n, rng.numpy(0x1417))
    return validate_state(state, net.n).copy()


def _burn_sweeps(sweeps: int, burn_in) -> int:
    if burn_in is None:
        return int(0.1 * sweeps)
    if isinstance(burn_in, float) and burn_in < 1:
        return int(burn_in * sweeps)
    return int(burn_in)


def _buffers(n, sweeps, histogram, traces, marginals):
    if histogram is None:
        histogram = n <= 20
    if histogram and n > ENUMERATION_LIMIT:
        raise ValueError("state histograms are limited to small networks")
    hist = np.zeros(1 << n if histogram else 0, dtype=np.int64)
    mags = np.zeros(sweeps if traces else 0)
    ens = np.zeros(sweeps if traces else 0)
    marg = np.zeros(n if marginals else 0)
    return hist, mags, ens, marg


def _check_symmetric(net: PBitNetwork):
    if not net.symmetric:
        raise ValueError("this sampler requires a symmetric network; use directed_sweep")


def _check_beta(beta):
    if beta < 0 or not math.isfinite(beta):
        raise ValueError("beta must be finite and non-negative")


def _check_order(order, n) -> np.ndarray:
    order = np.asarray(order, dtype=np.int64)
    if len(order) != n or not np.array_equal(np.sort(order), np.arange(n)):
        raise ValueError("order must be a permutation of 0..n-1")
    return order


# ---------------------------------------------------------------- public API


def serial_sweep(net: PBitNetwork, state, beta: float, rng: RandomStream, order=None) -> np.ndarray:
    """One sequential Gibbs sweep; each p-bit sees the latest values of its neighbors."""
    _check_beta(beta)
    m = validate_state(state, net.n).copy()
    order = np.arange(net.n, dtype=np.int64) if order is None else _check_order(order, net.n)
    keys, counters = _keys_and_counters(rng, net.n)
    hist, mags, ens, marg = _buffers(net.n, 1, False, False, False)
    _serial_kernel(net.indptr, net.indices, net.data, net.bias, m, float(beta), keys, counters,
                   order, 1, 0, hist, False, mags, ens, marg)
    return m


def colored_sweep(net: PBitNetwork, state, beta: float, plan: ColoringPlan, rng: RandomStream) -> np.ndarray:
    """One pass over color classes; each class updates concurrently from the pre-class snapshot."""
    _check_beta(beta)
    plan.validate(net)
    m = validate_state(state, net.n).copy()
    keys, counters = _keys_and_counters(rng, net.n)
    hist, mags, ens, marg = _buffers(net.n, 1, False, False, False)
    _colored_kernel(net.indptr, net.indices, net.data, net.bias, m, float(beta), keys, counters,
                    plan.order, plan.class_bounds(), 1, 0, hist, False, mags, ens, marg)
    return m


def random_scan_order(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(n).astype(np.int64)


def sample(
    net: PBitNetwork,
    beta: float,
    sweeps: int,
    rng: RandomStream,
    sampler: str = "serial",
    state=None,
    burn_in=None,
    plan: ColoringPlan | None = None,
    order=None,
    histogram: bool | None = None,
    per_update: bool = False,
    traces: bool = False,
    marginals: bool = True,
) -> SampleRecord:
    """Run ``sweeps`` sweeps of the serial or colored sampler and collect statistics.

    ``burn_in`` is a sweep count or a fraction below 1 (default 10%).  With
    ``per_update`` the histogram is incremented after every p-bit update
    (serial) or class commit (colored) instead of once per sweep; every
    intermediate state of a Gibbs scan is itself stationary, so both are
    valid estimators.
    """
    _check_beta(beta)
    _check_symmetric(net)
    if sampler not in ("serial", "colored"):
        raise ValueError(f"sample() drives 'serial' or 'colored', not {sampler!r}")
    m = _initial_state(net, state, rng)
    burn = _burn_sweeps(sweeps, burn_in)
    total = sweeps + burn if isinstance(burn_in, int) and burn_in >= 1 else sweeps
    hist, mags, ens, marg = _buffers(net.n, total, histogram, traces, marginals)
    keys, counters = _keys_and_counters(rng, net.n)
    t0 = time.perf_counter()
    if sampler == "serial":
        order = np.arange(net.n, dtype=np.int64) if order is None else _check_order(order, net.n)
        _serial_kernel(net.indptr, net.indices, net.data, net.bias, m, float(beta), keys, counters,
                       order, total, burn, hist, per_update, mags, ens, marg)
        extra = {}
    else:
        plan = plan or color_graph(net)
        plan.validate(net)
        _colored_kernel(net.indptr, net.indices, net.data, net.bias, m, float(beta), keys, counters,
                        plan.order, plan.class_bounds(), total, burn, hist, per_update, mags, ens, marg)
        extra = {"colors": plan.num_colors}
    wall = time.perf_counter() - t0
    kept = total - burn
    return SampleRecord(
        sampler=sampler,
        n=net.n,
        sweeps=total,
        attempted_flips=net.n * total,
        wall_time=wall,
        final_state=m,
        counts=hist if hist.size else None,
        magnetization=mags if traces else None,
        energy=ens + net.offset if traces else None,
        marginals=marg / kept if marginals and kept > 0 else None,
        extra=extra,
    )


def async_run(
    net: PBitNetwork,
    state,
    beta: float,
    cfg: AsyncConfig,
    rng: RandomStream,
    histogram: bool | None = None,
    trace_node: int = -1,
) -> SampleRecord:
    """Event-driven Gibbs with independent Poisson clocks and stale synapse reads.

    Each p-bit attempts an update at exponential inter-arrival times of mean
    ``cfg.mean_flip_interval``.  Its input is computed from neighbor values as
    they were ``cfg.synapse_latency`` earlier.  Updates of connected p-bits
    that fall within one latency window are counted as overlaps, never
    prevented.  The state is snapshotted every ``sample_interval`` (default:
    one mean flip interval) after the burn-in fraction of the horizon.
    """
    _check_beta(beta)
    _check_symmetric(net)
    m = _initial_state(net, state, rng)
    n = net.n
    if histogram is None:
        histogram = n <= 20
    hist = np.zeros(1 << n if histogram else 0, dtype=np.int64)
    marg = np.zeros(n)
    keys, counters = _keys_and_counters(rng, n)
    clock_keys = stream_keys(rng.seed, CLOCK_STREAM_BASE, n)
    clock_counters = np.zeros(n, dtype=np.int64)
    H = max(int(cfg.history), 1)
    log_t = np.zeros((n, H))
    log_v = np.zeros((n, H), dtype=np.int8)
    log_len = np.zeros(n, dtype=np.int64)
    log_head = np.zeros(n, dtype=np.int64)
    last_update = np.full(n, -np.inf)
    interval = cfg.sample_interval or cfg.mean_flip_interval
    intervals = np.zeros(int(2 * cfg.horizon / cfg.mean_flip_interval) + 64 if trace_node >= 0 else 0)
    t0 = time.perf_counter()
    events, overlaps, samples, n_int = _async_kernel(
        net.indptr, net.indices, net.data, net.bias, m, float(beta), keys, counters, clock_keys,
        clock_counters, float(cfg.mean_flip_interval), float(cfg.synapse_latency), float(cfg.horizon),
        float(cfg.burn_in_fraction * cfg.horizon), float(interval), hist, marg, log_t, log_v,
        log_len, log_head, last_update, trace_node, intervals,
    )
    wall = time.perf_counter() - t0
    return SampleRecord(
        sampler="async",
        n=n,
        sweeps=cfg.horizon / cfg.mean_flip_interval,
        attempted_flips=int(events),
        wall_time=wall,
        final_state=m,
        counts=hist if hist.size else None,
        marginals=marg / samples if samples else None,
        overlaps=int(overlaps),
        intervals=intervals[:n_int] if trace_node >= 0 else None,
        extra={"samples": int(samples)},
    )


def topological_order(net: PBitNetwork) -> np.ndarray:
    """Parents-before-children order of a directed network; raises on cycles."""
    if net.symmetric:
        raise ValueError("topological order is defined for directed networks")
    ts = TopologicalSorter({i: set() for i in range(net.n)})
    for child, parent in zip(net.rows, net.cols):
        ts.add(int(child), int(parent))
    try:
        return np.array(list(ts.static_order()), dtype=np.int64)
    except CycleError as exc:
        raise ValueError(f"directed network contains a cycle: {exc.args[1]}") from exc


def directed_sweep(net: PBitNetwork, state, beta: float, topo_order, rng: RandomStream,
                   check_order: bool = True) -> np.ndarray:
    """One parent-to-child pass through a directed (Bayesian) network.

    With ``check_order=False`` any permutation is accepted, which is how the
    order sensitivity of directed networks can be demonstrated.
    """
    if net.symmetric:
        raise ValueError("directed_sweep requires an asymmetric network")
    _check_beta(beta)
    topological_order(net)  # rejects cycles
    order = _check_order(topo_order, net.n)
    if check_order:
        pos = np.empty(net.n, dtype=np.int64)
        pos[order] = np.arange(net.n)
        if np.any(pos[net.cols] > pos[net.rows]):
            raise ValueError("order visits a child before one of its parents")
    m = validate_state(state, net.n).copy()
    keys, counters = _keys_and_counters(rng, net.n)
    hist, mags, ens, marg = _buffers(net.n, 1, False, False, False)
    _serial_kernel(net.indptr, net.indices, net.data, net.bias, m, float(beta), keys, counters,
                   order, 1, 0, hist, False, mags, ens, marg)
    return m


def directed_samples(net: PBitNetwork, beta: float, sweeps: int, rng: RandomStream,
                     topo_order=None, check_order: bool = True) -> np.ndarray:
    """State histogram over ``sweeps`` independent-looking directed passes."""
    order = topological_order(net) if topo_order is None else topo_order
    m = np.ones(net.n, dtype=np.int8)
    counts = np.zeros(1 << net.n, dtype=np.int64)
    for _ in range(sweeps):
        m = directed_sweep(net, m, beta, order, rng, check_order=check_order)
        counts[state_to_index(m)] += 1
    return counts


# ---------------------------------------------------------------- batched chains


@njit(cache=True, nogil=True)
def _chain_sweeps(indptr, indices, data, bias, M, betas, order, free, keys, counters):
    """One sweep per entry of ``betas`` on every row of ``M``; frozen units are skipped.

    ``order`` lists units class by class of a valid coloring, so in-place
    updates equal simultaneous updates within each class.
    """
    for b in range(M.shape[0]):
        m = M[b]
        for s in range(len(betas)):
            beta = betas[s]
            for k in range(len(order)):
                i = order[k]
                if free[i]:
                    x = beta * _local_field(indptr, indices, data, bias, m, i)
                    r = draw_symmetric(keys[b, i], counters[b, i])
                    counters[b, i] += 1
                    m[i] = _pbit_sample(x, r)


@njit(cache=True)
def _chain_keys(seed, n_chains, n):
    keys = np.empty((n_chains, n), dtype=np.uint64)
    for b in range(n_chains):
        for i in range(n):
            keys[b, i] = stream_key(seed, b * n + i)
    return keys


class ChainBatch:
    """Independent colored-sweep chains on one network, one row of ``M`` each.

    Chain ``b`` draws p-bit ``i``'s numbers from substream ``b * n + i`` of
    ``seed``.  Units marked not free in :meth:`run` are clamped; the run
    asserts they never change.
    """

    def __init__(self, net: PBitNetwork, plan: ColoringPlan, states, seed: int):
        _check_symmetric(net)
        self.net = net
        self.plan = plan
        self.M = np.ascontiguousarray(states, dtype=np.int8)
        if self.M.ndim != 2 or self.M.shape[1] != net.n:
            raise ValueError(f"states must have shape (chains, {net.n})")
        self.keys = _chain_keys(np.uint64(seed), self.M.shape[0], net.n)
        self.counters = np.zeros(self.M.shape, dtype=np.int64)

    def run(self, betas, free=None) -> np.ndarray:
        """One sweep per beta in ``betas``; returns the (shared) state array."""
        net = self.net
        free = np.ones(net.n, dtype=np.bool_) if free is None else np.asarray(free, dtype=np.bool_)
        before = self.M[:, ~free].copy()
        _chain_sweeps(net.indptr, net.indices, net.data, net.bias, self.M,
                      np.atleast_1d(np.asarray(betas, dtype=np.float64)), self.plan.order, free, self.keys,
                      self.counters)
        if not np.array_equal(before, self.M[:, ~free]):
            raise AssertionError("a clamped unit changed during sampling")
        return self.M


def throughput(record: SampleRecord) -> float:
    """Attempted flips per wall-clock second (0 if no time was measured)."""
    if record.wall_time <= 0:
        return 0.0
    return record.attempted_flips / record.wall_time
