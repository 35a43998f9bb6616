"""Seeded, parallel Monte Carlo over the tree builders, plus tail bounds.

Replica i always draws from stream (master_seed, i), and histograms are merged
by commutative addition, so a run's output is a pure function of
(sequence, replicas, master_seed) no matter how work is scheduled.
"""

from __future__ import annotations

import json
import math
import multiprocessing
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, InvalidSequence
from .forward import _depths_from_parents, _rrt_parents, forward_height
from .rng import MonteCarloDriver, RngStream
from .sequences import ChoiceSequence, classify, is_valid, parse_sequence


@dataclass(frozen=True)
class ThresholdStats:
    threshold: float
    fraction_at_or_above: float


@dataclass(frozen=True)
class SimulationReport:
    sequence_text: str
    replicas: int
    master_seed: int
    histogram: dict[int, int]
    mean: float
    variance: float
    ci95_halfwidth: float
    threshold_stats: ThresholdStats | None = None

    def audit(self) -> None:
        """Check histogram/moment consistency; raises AssertionError."""
        total = sum(self.histogram.values())
        assert total == self.replicas, "histogram counts must sum to replicas"
        mean, var = _moments(self.histogram, self.replicas)
        assert math.isclose(mean, self.mean, rel_tol=1e-9, abs_tol=1e-12)
        assert math.isclose(var, self.variance, rel_tol=1e-9, abs_tol=1e-12)

    def to_json_obj(self) -> dict:
        threshold = None
        if self.threshold_stats is not None:
            threshold = {
                "threshold": self.threshold_stats.threshold,
                "fraction_at_or_above": self.threshold_stats.fraction_at_or_above,
            }
        return {
            "sequence": self.sequence_text,
            "replicas": self.replicas,
            "seed": self.master_seed,
            "histogram": {str(h): self.histogram[h] for h in sorted(self.histogram)},
            "mean": self.mean,
            "var": self.variance,
            "ci95": self.ci95_halfwidth,
            "threshold": threshold,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "SimulationReport":
        obj = json.loads(text)
        threshold = obj.get("threshold")
        stats = (
            ThresholdStats(threshold["threshold"], threshold["fraction_at_or_above"])
            if threshold is not None
            else None
        )
        return SimulationReport(
            sequence_text=obj["sequence"],
            replicas=obj["replicas"],
            master_seed=obj["seed"],
            histogram={int(h): c for h, c in obj["histogram"].items()},
            mean=obj["mean"],
            variance=obj["var"],
            ci95_halfwidth=obj["ci95"],
            threshold_stats=stats,
        )

    def to_csv(self) -> str:
        lines = ["height,count"]
        lines += [f"{h},{self.histogram[h]}" for h in sorted(self.histogram)]
        return "\n".join(lines) + "\n"


def _moments(histogram: dict[int, int], replicas: int) -> tuple[float, float]:
    total = sum(h * c for h, c in histogram.items())
    mean = total / replicas
    if replicas < 2:
        return mean, 0.0
    sq = sum(h * h * c for h, c in histogram.items())
    var = (sq - replicas * mean * mean) / (replicas - 1)
    return mean, max(var, 0.0)


def _rrt_height_replica(n: int, stream: RngStream) -> int:
    driver = MonteCarloDriver(stream)
    if n == 0:
        return 0
    return int(_depths_from_parents(_rrt_parents(n, driver)).max())


def _replica_heights(seq_text: str, master_seed: int, start: int, stop: int) -> dict[int, int]:
    seq = parse_sequence(seq_text)
    counts: dict[int, int] = {}
    if seq.freeze_count == 0:
        n = len(seq)
        for i in range(start, stop):
            h = _rrt_height_replica(n, RngStream(master_seed, i))
            counts[h] = counts.get(h, 0) + 1
    else:
        for i in range(start, stop):
            h = forward_height(seq, RngStream(master_seed, i))
            counts[h] = counts.get(h, 0) + 1
    return counts


def _worker(args: tuple[str, int, int, int]) -> dict[int, int]:
    return _replica_heights(*args)


def run_mc(
    seq: ChoiceSequence,
    replicas: int,
    master_seed: int,
    parallelism: int = 1,
    threshold: float | None = None,
) -> SimulationReport:
    """Monte Carlo height histogram of the forward construction.

    Bit-identical output for fixed (seq, replicas, master_seed) regardless of
    parallelism.  Freeze-free sequences take a vectorized path that consumes
    streams identically to the general one.
    """
    if replicas < 1:
        raise ValueError("need at least one replica")
    if parallelism < 1:
        raise ValueError("parallelism must be at least 1")
    if not is_valid(seq):
        raise InvalidSequence(f"{seq.text!r} exhausts its active vertices early")

    text = seq.text
    if len(seq) == 0:
        histogram = {0: replicas}
    elif parallelism == 1 or replicas < 2 * parallelism:
        histogram = _replica_heights(text, master_seed, 0, replicas)
    else:
        bounds = [replicas * w // parallelism for w in range(parallelism + 1)]
        tasks = [
            (text, master_seed, bounds[w], bounds[w + 1]) for w in range(parallelism)
        ]
        with multiprocessing.Pool(parallelism) as pool:
            parts = pool.map(_worker, tasks)
        histogram = {}
        for part in parts:
            for h, c in part.items():
                histogram[h] = histogram.get(h, 0) + c

    mean, var = _moments(histogram, replicas)
    ci95 = 1.96 * math.sqrt(var / replicas) if replicas > 1 else 0.0
    stats = None
    if threshold is not None:
        above = sum(c for h, c in histogram.items() if h >= threshold)
        stats = ThresholdStats(float(threshold), above / replicas)
    return SimulationReport(
        sequence_text=text,
        replicas=replicas,
        master_seed=master_seed,
        histogram=dict(sorted(histogram.items())),
        mean=mean,
        variance=var,
        ci95_halfwidth=ci95,
        threshold_stats=stats,
    )


# --------------------------------------------------------------------------
# Bennett's bound for Bernoulli sums


@dataclass(frozen=True)
class BennettQuery:
    mean_sum: float  # sum of the Bernoulli success probabilities
    t: float


def bennett_bound(query: BennettQuery) -> float:
    """Upper bound for both tail probabilities P(S > mean + t), P(S < mean - t)
    of a sum S of independent Bernoulli variables with parameter sum mean_sum:
    exp(-mean_sum * g(t / mean_sum)) with g(u) = (1+u) ln(1+u) - u."""
    if query.mean_sum <= 0:
        raise DomainError("mean_sum must be positive")
    if query.t <= 0:
        raise DomainError("t must be positive")
    u = query.t / query.mean_sum
    g = (1 + u) * math.log1p(u) - u
    return math.exp(-query.mean_sum * g)


# --------------------------------------------------------------------------
# Height floor check at the classical growth rate


def height_threshold(n: int) -> float:
    """e ln(n) - 5 ln(ln(n)); natural logarithms, no rounding."""
    if n < 16:
        raise DomainError("threshold needs n >= 16")
    return math.e * math.log(n) - 5.0 * math.log(math.log(n))


def check_theorem_main(
    seq: ChoiceSequence,
    n: int,
    replicas: int,
    master_seed: int,
    parallelism: int = 1,
) -> float:
    """Fraction of replicas whose height reaches e ln(n) - 5 ln ln(n).

    The sequence must have exactly n attachments and a surviving walk.
    """
    verdict = classify(seq, n)
    if not verdict.in_x_n:
        raise InvalidSequence(
            f"{seq.text!r} is not a valid sequence with {n} attachments"
        )
    report = run_mc(
        seq, replicas, master_seed, parallelism, threshold=height_threshold(n)
    )
    assert report.threshold_stats is not None
    return report.threshold_stats.fraction_at_or_above


# --------------------------------------------------------------------------
# Empirical dominance between reports


class DominanceVerdict(Enum):
    DOMINATES = "dominates"
    DOMINATED = "dominated"
    INCOMPARABLE = "incomparable"
    INCONCLUSIVE = "inconclusive"


def empirical_dominance(
    r1: SimulationReport, r2: SimulationReport, slack: float
) -> DominanceVerdict:
    """Compare two empirical height CDFs with a tolerance band.

    DOMINATES means r1's law stochastically dominates r2's beyond noise:
    r1's CDF never exceeds r2's by more than slack, and somewhere sits below
    it by more than slack (or the two CDFs are exactly equal).  Significant
    crossings in both directions give INCOMPARABLE; differences that never
    clear the band give INCONCLUSIVE.
    """
    support = sorted(set(r1.histogram) | set(r2.histogram))
    c1 = c2 = 0
    above = below = False
    identical = True
    for h in support:
        c1 += r1.histogram.get(h, 0)
        c2 += r2.histogram.get(h, 0)
        f1 = c1 / r1.replicas
        f2 = c2 / r2.replicas
        if f1 > f2 + slack:
            above = True  # evidence against r1 dominating
        if f2 > f1 + slack:
            below = True  # evidence against r2 dominating
        if f1 != f2:
            identical = False
    if above and below:
        return DominanceVerdict.INCOMPARABLE
    if above:
        return DominanceVerdict.DOMINATED
    if below:
        return DominanceVerdict.DOMINATES
    return (
        DominanceVerdict.DOMINATES if identical else DominanceVerdict.INCONCLUSIVE
    )


# --------------------------------------------------------------------------
# Depth gap between two marked vertices of a growing recursive tree


def walk_gap_growth(
    m_values: list[int], replicas: int, master_seed: int
) -> list[tuple[int, float]]:
    """Mean absolute depth difference of two distinct uniform vertices of an
    m-edge recursive tree, for each m.

    Stream derivation: sample r of size index j uses stream
    (master_seed, j * replicas + r).
    """
    if any(b <= a for a, b in zip(m_values, m_values[1:])):
        raise ValueError("m_values must be strictly increasing")
    out: list[tuple[int, float]] = []
    for j, m in enumerate(m_values):
        if m < 1:
            raise ValueError("tree sizes must be at least 1")
        total = 0
        for r in range(replicas):
            driver = MonteCarloDriver(RngStream(master_seed, j * replicas + r))
            depths = _depths_from_parents(_rrt_parents(m, driver))
            u, v = driver.distinct_pair(m + 1)
            total += abs(int(depths[u]) - int(depths[v]))
        out.append((m, total / replicas))
    return out
