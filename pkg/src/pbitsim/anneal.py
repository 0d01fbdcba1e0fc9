"""Annealing driver: beta schedules, best-state tracking, restarts and success statistics."""

from __future__ import annotations

import math
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .core import PBitNetwork, _local_field, _pbit_sample, energy, random_state
from .rng import RandomStream, derive_seed, draw_symmetric, stream_keys
from .samplers import ColoringPlan, color_graph


@dataclass(frozen=True)
class AnnealSchedule:
    betas: tuple[float, ...]
    sweeps: tuple[int, ...]

    def __post_init__(self):
        if not self.betas:
            raise ValueError("schedule must have at least one step")
        if len(self.betas) != len(self.sweeps):
            raise ValueError("betas and sweeps must pair up")
        if any(not math.isfinite(b) or b < 0 for b in self.betas):
            raise ValueError("betas must be finite and non-negative")
        if any(int(s) < 1 for s in self.sweeps):
            raise ValueError("sweeps per step must be positive")

    @property
    def steps(self) -> list[tuple[float, int]]:
        return list(zip(self.betas, self.sweeps))

    @property
    def total_sweeps(self) -> int:
        return int(sum(self.sweeps))

    def __len__(self):
        return len(self.betas)

    def to_string(self) -> str:
        return ",".join(f"{b:g}x{s}" for b, s in self.steps)


def linear_schedule(beta_start: float, beta_end: float, step_size: float, sweeps_per_step: int) -> AnnealSchedule:
    """Inclusive grid ``beta_start, beta_start + step, ...`` ending exactly at ``beta_end``."""
    if not step_size > 0:
        raise ValueError("step_size must be positive")
    direction = 1.0 if beta_end >= beta_start else -1.0
    span = abs(beta_end - beta_start)
    k = int(math.floor(span / step_size + 1e-9))
    betas = [beta_start + direction * step_size * i for i in range(k + 1)]
    betas = [round(b, 12) for b in betas]
    if abs(betas[-1] - beta_end) > 1e-9:
        betas.append(beta_end)
    return AnnealSchedule(tuple(betas), tuple([int(sweeps_per_step)] * len(betas)))


DEFAULT_SCHEDULE = "0:5:0.125x10"
_SCHEDULE_RE = re.compile(r"^\s*([-+0-9.eE]+):([-+0-9.eE]+):([-+0-9.eE]+)x(\d+)\s*$")


def parse_schedule(text: str) -> AnnealSchedule:
    """``"start:end:step x sweeps"`` (e.g. ``0:5:0.125x10``) or explicit ``"b1xs1,b2xs2,..."``."""
    m = _SCHEDULE_RE.match(text)
    if m:
        a, b, step, sweeps = m.groups()
        return linear_schedule(float(a), float(b), float(step), int(sweeps))
    betas, sweeps = [], []
    for part in text.split(","):
        try:
            b, s = part.split("x")
            betas.append(float(b))
            sweeps.append(int(s))
        except ValueError:
            raise ValueError(f"bad schedule segment {part!r}; expected 'start:end:stepxN' or 'betaxN,...'") from None
    return AnnealSchedule(tuple(betas), tuple(sweeps))


@njit(cache=True, nogil=True)
def _anneal_kernel(indptr, indices, data, bias, m, betas, sweeps, order, bounds, keys, counters,
                   e_start, best_m, trace_e, trace_best):
    n = len(m)
    e = e_start
    best = e
    for q in range(n):
        best_m[q] = m[q]
    buf = np.empty(n, dtype=np.int8)
    for step in range(len(betas)):
        beta = betas[step]
        for _ in range(sweeps[step]):
            for c in range(len(bounds) - 1):
                lo = bounds[c]
                hi = bounds[c + 1]
                for k in range(lo, hi):
                    i = order[k]
                    x = beta * _local_field(indptr, indices, data, bias, m, i)
                    r = draw_symmetric(keys[i], counters[i])
                    counters[i] += 1
                    buf[k] = _pbit_sample(x, r)
                for k in range(lo, hi):
                    i = order[k]
                    if buf[k] != m[i]:
                        e += 2.0 * m[i] * _local_field(indptr, indices, data, bias, m, i)
                        m[i] = buf[k]
                        if e < best - 1e-9:
                            best = e
                            for q in range(n):
                                best_m[q] = m[q]
        trace_e[step] = e
        trace_best[step] = best
    return best


@dataclass
class RestartResult:
    seed: int
    best_state: np.ndarray
    best_energy: float
    energy_trace: np.ndarray
    best_trace: np.ndarray
    wall_time: float
    decoded: dict | None = None
    success: bool | None = None


@dataclass
class RunResult:
    best_state: np.ndarray
    best_energy: float
    energy_trace: np.ndarray
    best_trace: np.ndarray
    seed: int
    flips_per_second: float
    restarts: list[RestartResult] = field(default_factory=list)
    decoded: dict | None = None
    schedule: AnnealSchedule | None = None
    sampler: str = "colored"

    @property
    def success_flags(self) -> list[bool]:
        return [bool(r.success) for r in self.restarts]

    def report(self) -> dict:
        out = {
            "seed": self.seed,
            "sampler": self.sampler,
            "restarts": len(self.restarts),
            "best_energy": self.best_energy,
            "flips_per_second": self.flips_per_second,
            "restart_best_energies": [r.best_energy for r in self.restarts],
        }
        if self.schedule is not None:
            out["schedule"] = {"steps": len(self.schedule), "total_sweeps": self.schedule.total_sweeps}
        if self.decoded is not None:
            out["best_objective"] = self.decoded
        if self.restarts and self.restarts[0].success is not None:
            out["success_flags"] = self.success_flags
            out["success_probability"] = success_probability(self.success_flags)
            out["success"] = any(self.success_flags)
        return out


def _threads() -> int:
    env = os.environ.get("PBITSIM_THREADS")
    return max(1, int(env)) if env else (os.cpu_count() or 1)


def anneal(
    net: PBitNetwork,
    schedule: AnnealSchedule,
    sampler: str = "colored",
    restarts: int = 1,
    rng: RandomStream | int = 0,
    encoding=None,
    plan: ColoringPlan | None = None,
    threads: int | None = None,
) -> RunResult:
    """Anneal ``restarts`` independent chains through ``schedule``; return the best.

    ``sampler`` is ``"serial"`` (ascending order) or ``"colored"``.  Each
    restart uses a seed derived from the run seed and restart index, so the
    result is a pure function of the inputs.  If an ``encoding`` is given,
    each restart's best state is decoded and checked against its optimum.
    """
    if not net.symmetric:
        raise ValueError("anneal requires a symmetric network")
    if restarts < 1:
        raise ValueError("restarts must be positive")
    seed = rng.seed if isinstance(rng, RandomStream) else int(rng)
    if sampler == "colored":
        plan = plan or color_graph(net)
        plan.validate(net)
        order, bounds = plan.order, plan.class_bounds()
    elif sampler == "serial":
        order = np.arange(net.n, dtype=np.int64)
        bounds = np.arange(net.n + 1, dtype=np.int64)
    else:
        raise ValueError(f"anneal supports 'serial' or 'colored', not {sampler!r}")
    betas = np.asarray(schedule.betas, dtype=np.float64)
    sweeps = np.asarray(schedule.sweeps, dtype=np.int64)

    def run_one(r: int) -> RestartResult:
        rseed = derive_seed(seed, r)
        stream = RandomStream(rseed, net.n)
        m = random_state(net.n, stream.numpy())
        keys = stream_keys(stream.seed, 0, net.n)
        best_m = np.empty_like(m)
        trace_e = np.empty(len(betas))
        trace_b = np.empty(len(betas))
        t0 = time.perf_counter()
        best = _anneal_kernel(net.indptr, net.indices, net.data, net.bias, m, betas, sweeps, order, bounds,
                              keys, stream.counters, energy(net, m), best_m, trace_e, trace_b)
        wall = time.perf_counter() - t0
        res = RestartResult(rseed, best_m, float(best), trace_e, trace_b, wall)
        if encoding is not None:
            res.decoded = encoding.decode(best_m)
            if encoding.meta.get("optimum") is not None:
                res.success = bool(encoding.is_optimal(best_m))
        return res

    workers = min(threads or _threads(), restarts)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run_one, range(restarts)))
    else:
        results = [run_one(r) for r in range(restarts)]
    best = min(results, key=lambda r: r.best_energy)
    wall = sum(r.wall_time for r in results)
    flips = net.n * schedule.total_sweeps * restarts
    return RunResult(
        best_state=best.best_state,
        best_energy=best.best_energy,
        energy_trace=best.energy_trace,
        best_trace=best.best_trace,
        seed=seed,
        flips_per_second=flips / wall if wall > 0 else 0.0,
        restarts=results,
        decoded=best.decoded,
        schedule=schedule,
        sampler=sampler,
    )


def success_probability(results, target=None) -> float:
    """Fraction of runs that reached ``target``.

    ``results`` may be booleans, objective values (compared with ``>= target``)
    or :class:`RestartResult` objects carrying a success flag.
    """
    results = list(results)
    if not results:
        return 0.0
    hits = 0
    for r in results:
        if isinstance(r, RestartResult):
            hits += bool(r.success)
        elif target is None:
            hits += bool(r)
        else:
            hits += r >= target
    return hits / len(results)
