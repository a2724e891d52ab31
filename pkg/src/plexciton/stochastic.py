"""Continuous-time Markov jump simulation of the four-level emission cycle.

The pumped cycle visits G -> U -> (minus or plus) -> G.  Waiting times in
each state are exponential; the branch choice at U is a Bernoulli draw with
the feeding-rate ratio, which is statistically identical to competing
exponential clocks.  A completed branch decay emits a detected photon with
probability equal to the quantum yield (Bernoulli thinning of the jump).

Reproducibility: trajectory ``i`` uses ``numpy``'s PCG64 generator seeded
with ``splitmix64(master_seed + i * 0x9E3779B97F4A7C15 mod 2**64)``.  Within
a trajectory the draws come in fixed-size cycle blocks, ordered as: ground
dwell, upper dwell, branch choice, branch dwell (unit exponential), and,
only when the quantum yield is below one, the detection draw.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InsufficientDataError, ParameterError
from .correlations import CorrelationSeries
from .model import Branch, BranchRates, SystemParams

_GOLDEN64 = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1

# Cycles sampled per vectorized block.
_CHUNK = 1 << 19

_TAG = {Branch.MINUS: 0, Branch.PLUS: 1}
_TAG_CHAR = {0: "-", 1: "+"}
_CHAR_TAG = {"-": 0, "+": 1}


def _splitmix64(x: int) -> int:
    z = (x + _GOLDEN64) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_trajectory_seed(master_seed: int, index: int) -> int:
    """Deterministic 64-bit seed for one trajectory of an ensemble."""
    return _splitmix64((master_seed + index * _GOLDEN64) & _MASK64)


@dataclass(frozen=True)
class TrajectoryConfig:
    """How long, how many, and how to seed a stochastic run."""

    duration: float
    n_trajectories: int = 1
    master_seed: int = 1
    branch_filter: Branch | None = None

    def __post_init__(self) -> None:
        if not (self.duration > 0.0):
            raise ParameterError(f"duration must be positive, got {self.duration}")
        if self.n_trajectories < 1:
            raise ParameterError(
                f"n_trajectories must be >= 1, got {self.n_trajectories}"
            )


@dataclass(frozen=True)
class PhotonStream:
    """Detected photon timestamps of one trajectory, tagged by branch.

    ``tags`` holds 0 for the minus branch and 1 for the plus branch.
    """

    times: np.ndarray
    tags: np.ndarray
    duration: float

    def __post_init__(self) -> None:
        if self.times.shape != self.tags.shape or self.times.ndim != 1:
            raise ParameterError("times and tags must be matching 1-d arrays")
        if self.times.size:
            if self.times[0] < 0.0 or self.times[-1] > self.duration:
                raise ParameterError("timestamps outside [0, duration]")
            if np.any(np.diff(self.times) <= 0.0):
                raise ParameterError("timestamps must be strictly increasing")

    @property
    def n_photons(self) -> int:
        return int(self.times.size)

    def times_for(self, branch: Branch | None) -> np.ndarray:
        if branch is None:
            return self.times
        return self.times[self.tags == _TAG[branch]]


@dataclass(frozen=True)
class EmissionRate:
    """Photon rate estimate with a Poisson-style standard error."""

    value: float
    stderr: float
    n_photons: int


def _check_reachable_exits(params: SystemParams, rates: BranchRates) -> None:
    if params.pump_r == 0.0:
        return  # only the ground state is ever visited
    if rates.gfeed_total == 0.0:
        raise ConfigError(
            "upper level is reachable (pump_r > 0) but has zero exit rate "
            "(gamma_u = 0)"
        )
    if min(rates.gpar_minus, rates.gpar_plus) == 0.0:
        raise ConfigError(
            "a dressed branch is reachable but has zero decay rate "
            "(gamma_r + gamma_nr = 0)"
        )


def simulate_stream(params: SystemParams, rates: BranchRates,
                    config: TrajectoryConfig) -> list[PhotonStream]:
    """Simulate the jump process and return one photon stream per trajectory."""
    _check_reachable_exits(params, rates)
    return [
        _simulate_one(params, rates, config, index)
        for index in range(config.n_trajectories)
    ]


def _simulate_one(params: SystemParams, rates: BranchRates,
                  config: TrajectoryConfig, index: int) -> PhotonStream:
    duration = config.duration
    if params.pump_r == 0.0:
        return PhotonStream(times=np.empty(0), tags=np.empty(0, dtype=np.int8),
                            duration=duration)
    rng = np.random.Generator(
        np.random.PCG64(derive_trajectory_seed(config.master_seed, index))
    )
    p_minus = rates.gfeed_minus / rates.gfeed_total
    yield_ = params.quantum_yield
    want = None if config.branch_filter is None else _TAG[config.branch_filter]

    times_parts: list[np.ndarray] = []
    tags_parts: list[np.ndarray] = []
    t0 = 0.0
    while t0 < duration:
        dwell_g = rng.exponential(1.0 / params.pump_r, _CHUNK)
        dwell_u = rng.exponential(1.0 / rates.gfeed_total, _CHUNK)
        is_minus = rng.random(_CHUNK) < p_minus
        branch_rate = np.where(is_minus, rates.gpar_minus, rates.gpar_plus)
        dwell_b = rng.exponential(1.0, _CHUNK) / branch_rate
        emit = t0 + np.cumsum(dwell_g + dwell_u + dwell_b)
        t0 = float(emit[-1])

        keep = emit <= duration
        if yield_ < 1.0:
            keep &= rng.random(_CHUNK) < yield_
        tags = np.where(is_minus, np.int8(0), np.int8(1))
        if want is not None:
            keep &= tags == want
        times_parts.append(emit[keep])
        tags_parts.append(tags[keep])

    return PhotonStream(
        times=np.concatenate(times_parts),
        tags=np.concatenate(tags_parts),
        duration=duration,
    )


def occupation_fractions(params: SystemParams, rates: BranchRates,
                         config: TrajectoryConfig) -> dict[str, float]:
    """Fraction of time one trajectory spends in each of the four states.

    Accumulated over completed pump cycles, so the result carries an
    end-effect bias of at most one cycle over the run length.
    """
    _check_reachable_exits(params, rates)
    if params.pump_r == 0.0:
        return {"gg": 1.0, "uu": 0.0, "mm": 0.0, "pp": 0.0}
    rng = np.random.Generator(
        np.random.PCG64(derive_trajectory_seed(config.master_seed, 0))
    )
    p_minus = rates.gfeed_minus / rates.gfeed_total
    sums = {"gg": 0.0, "uu": 0.0, "mm": 0.0, "pp": 0.0}
    t0 = 0.0
    while t0 < config.duration:
        dwell_g = rng.exponential(1.0 / params.pump_r, _CHUNK)
        dwell_u = rng.exponential(1.0 / rates.gfeed_total, _CHUNK)
        is_minus = rng.random(_CHUNK) < p_minus
        branch_rate = np.where(is_minus, rates.gpar_minus, rates.gpar_plus)
        dwell_b = rng.exponential(1.0, _CHUNK) / branch_rate
        ends = t0 + np.cumsum(dwell_g + dwell_u + dwell_b)
        keep = ends <= config.duration
        sums["gg"] += float(dwell_g[keep].sum())
        sums["uu"] += float(dwell_u[keep].sum())
        sums["mm"] += float(dwell_b[keep & is_minus].sum())
        sums["pp"] += float(dwell_b[keep & ~is_minus].sum())
        t0 = float(ends[-1])
    total = sum(sums.values())
    if total == 0.0:
        raise InsufficientDataError("no completed cycle within the duration")
    return {state: value / total for state, value in sums.items()}


def _pair_lags(times: np.ndarray, tau_max: float) -> np.ndarray:
    """Lags of every ordered photon pair separated by at most tau_max."""
    n = times.size
    hi = np.searchsorted(times, times + tau_max, side="right")
    lens = hi - np.arange(n) - 1
    total = int(lens.sum())
    if total == 0:
        return np.empty(0)
    # Flattened [i+1, hi_i) index ranges.
    starts = np.arange(1, n + 1)
    offsets = np.repeat(np.concatenate(([0], np.cumsum(lens)[:-1])), lens)
    flat_j = np.repeat(starts, lens) + np.arange(total) - offsets
    return times[flat_j] - np.repeat(times, lens)


def g2_histogram(stream: PhotonStream, branch: Branch | None,
                 tau_bins: np.ndarray) -> CorrelationSeries:
    """Coincidence histogram normalized to the uncorrelated pair density.

    Counts every ordered photon pair whose lag falls within the bins (not
    just successive pairs) and divides each bin by the expected count of a
    rate-matched uncorrelated stream, ``rate**2 * width * (T - tau_center)``.
    Per-bin standard errors assume Poisson pair counts.
    """
    edges = np.asarray(tau_bins, dtype=float)
    if edges.ndim != 1 or edges.size < 2:
        raise ParameterError("tau_bins must contain at least two edges")
    if edges[0] < 0.0 or np.any(np.diff(edges) <= 0.0):
        raise ParameterError("tau_bins must be nonnegative and increasing")
    if edges[-1] >= 0.5 * stream.duration:
        raise ParameterError(
            "largest lag bin must stay well below the stream duration"
        )
    times = stream.times_for(branch)
    if times.size < 1e4:
        raise InsufficientDataError(
            f"need at least 1e4 photons of the branch, got {times.size}"
        )
    duration = stream.duration
    rate = times.size / duration
    lags = _pair_lags(times, float(edges[-1]))
    counts, _ = np.histogram(lags, edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    widths = np.diff(edges)
    exposure = rate ** 2 * widths * (duration - centers)
    values = counts / exposure
    stderr = np.sqrt(np.maximum(counts, 1)) / exposure
    return CorrelationSeries(tau=centers, values=values, branch=branch,
                             normalized=True, stderr=stderr)


def fano_factor(stream: PhotonStream, window: float) -> float:
    """Variance-to-mean ratio of photon counts in disjoint windows."""
    if not (window > 0.0):
        raise ParameterError(f"window must be positive, got {window}")
    n_windows = int(stream.duration / window)
    if n_windows < 100:
        raise InsufficientDataError(
            f"duration covers only {n_windows} windows, need at least 100"
        )
    edges = np.arange(n_windows + 1) * window
    counts, _ = np.histogram(stream.times, edges)
    mean = counts.mean()
    if mean == 0.0:
        raise InsufficientDataError("no photons in any counting window")
    return float(counts.var(ddof=1) / mean)


def emission_rate(stream: PhotonStream, branch: Branch | None) -> EmissionRate:
    """Photon rate of one branch with a Poisson-style error bar."""
    n = int(stream.times_for(branch).size)
    if n == 0:
        raise InsufficientDataError("no photons of the requested branch")
    return EmissionRate(value=n / stream.duration,
                        stderr=np.sqrt(n) / stream.duration,
                        n_photons=n)


def write_photon_stream(stream: PhotonStream, path) -> None:
    """Serialize to the two-column text format ``timestamp<TAB>branch``.

    Written to a temporary file and renamed into place, so readers never
    observe a partial stream.
    """
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(f"# duration={stream.duration!r}\n")
            chunk = 1 << 16
            for start in range(0, stream.times.size, chunk):
                rows = (
                    f"{float(t)!r}\t{_TAG_CHAR[int(tag)]}"
                    for t, tag in zip(stream.times[start:start + chunk],
                                      stream.tags[start:start + chunk])
                )
                fh.write("\n".join(rows))
                fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_photon_stream(path) -> PhotonStream:
    """Parse the two-column text format produced by :func:`write_photon_stream`."""
    duration = None
    times: list[float] = []
    tags: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "duration=" in line:
                    duration = float(line.split("duration=", 1)[1])
                continue
            stamp, _, tag = line.partition("\t")
            times.append(float(stamp))
            tags.append(_CHAR_TAG[tag.strip()])
    if duration is None:
        raise ParameterError(f"{path}: missing '# duration=' header")
    return PhotonStream(times=np.asarray(times, dtype=float),
                        tags=np.asarray(tags, dtype=np.int8),
                        duration=duration)
