"""Coupled constructions: joint samples of tree heights for paired sequences.

Three families of couplings are provided.

* :func:`couple_reduce` runs the reversed construction jointly for a sequence
  and its once-reduced version (drop the last leading attach and the first
  freeze).  The reduced tree's height never exceeds the original's on any
  sample path, which realizes the stochastic-dominance statement as an
  almost-sure inequality.

* :func:`couple_prop_i` and :func:`couple_prop_ii` couple the pair of trees
  obtained by inserting a freeze+attach (resp. attach+freeze) after an
  attach-run-then-freeze prefix.  Both heights decompose over a shared
  recursive tree with two marked vertices plus two independently grown
  subtrees whose edge split is uniform.

* :func:`couple_prop_iii` couples the attach-insertion pair at the very start
  of the sequence with a plain recursive tree, by cutting the first edge of a
  recursive tree and grafting the two parts onto the surviving actives.

Every operation accepts either an RngStream (Monte Carlo) or a choice driver,
so exhaustive enumeration certifies the exact identities on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

from .errors import InvalidSequence, NotReducible, TargetUnreachable
from .forward import Driver, _as_driver
from .rng import RngStream
from .sequences import ChoiceSequence, Step, is_valid

__all__ = [
    "FreezeCase",
    "CouplingTraceEntry",
    "CoupledSample",
    "ReducedSequence",
    "reduce_once",
    "reduce_to_prefix",
    "couple_reduce",
    "couple_prop_i",
    "couple_prop_ii",
    "couple_prop_iii",
    "samples_to_csv",
]


class FreezeCase(Enum):
    """Which of the three candidate actives froze in the attach+freeze coupling."""

    FROZEN_CHILD = "frozen_child"
    FROZEN_PARENT = "frozen_parent"
    FROZEN_OTHER = "frozen_other"


class CouplingTraceEntry(NamedTuple):
    spare_absorbed: bool
    pair: tuple[int, int]


@dataclass(frozen=True)
class CoupledSample:
    height_x: int
    height_xhat: int
    case_tag: FreezeCase | None = None
    i_split: int | None = None
    trace: tuple[CouplingTraceEntry, ...] | None = None


@dataclass(frozen=True)
class ReducedSequence:
    original: ChoiceSequence
    reduced: ChoiceSequence
    removed_at: int  # 1-based position k: steps k and k+1 were dropped


def _leading_attach_run(seq: ChoiceSequence) -> int:
    k = 0
    for step in seq.steps:
        if step is not Step.ATTACH:
            break
        k += 1
    return k


def reduce_once(seq: ChoiceSequence) -> ReducedSequence:
    """Drop the last step of the leading attach run and the freeze after it."""
    if not is_valid(seq):
        raise InvalidSequence(f"{seq.text!r} exhausts its active vertices early")
    k = _leading_attach_run(seq)
    if k == 0:
        raise NotReducible("sequence starts with a freeze")
    if k == len(seq):
        raise NotReducible("sequence has no freeze step")
    reduced = ChoiceSequence(seq.steps[: k - 1] + seq.steps[k + 1 :])
    return ReducedSequence(original=seq, reduced=reduced, removed_at=k)


def reduce_to_prefix(seq: ChoiceSequence, r: int) -> ChoiceSequence:
    """Reduce repeatedly until the leading attach run has length at least r.

    Raises TargetUnreachable when reduction runs out before the target run is
    reached.  A walk maximum of at least r does NOT guarantee reachability:
    a leading run of r forces walk value r + 1, and reduction never raises the
    walk maximum, so r above (max - 1) always fails.  ``(+-)^2`` has walk
    maximum 2 but its chain ``(+-)^2 -> +- -> (empty)`` shows leading runs
    1, 1, 0 only.  Empirically r <= max - 1 is always reachable, although the
    leading run is not monotone along the chain (it can grow, shrink, stall).
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    current = seq
    while _leading_attach_run(current) < r:
        try:
            current = reduce_once(current).reduced
        except NotReducible as exc:
            raise TargetUnreachable(
                f"cannot reach a leading attach run of {r} from {seq.text!r}"
            ) from exc
    return current


# --------------------------------------------------------------------------
# Reduction coupling over the reversed construction


def _graft_heights(forest: list[int], target: int, donor: int) -> None:
    """Height bookkeeping of a positional graft: donor slot removed, target
    slot replaced by the merge (surviving indices shift past the donor)."""
    donor_height = forest.pop(donor)
    t = target if target < donor else target - 1
    if donor_height + 1 > forest[t]:
        forest[t] = donor_height + 1


def couple_reduce(
    seq: ChoiceSequence,
    rng: RngStream | Driver,
    trace: bool = False,
    check: bool = False,
) -> CoupledSample:
    """Jointly sample the heights of a reducible sequence and its reduction.

    Both marginals follow the reversed construction of their own sequence; the
    shared randomness guarantees ``height_xhat <= height_x`` on every path.

    The joint run processes the shared suffix once, then inserts a spare
    frozen singleton in front of the original's forest; it stands for the
    removed freeze step.  Until the spare gets absorbed by a graft, the
    reduced forest replays the original's graft pairs with a one-step delay;
    afterwards both forests consume identical pairs.  ``check=True`` asserts
    the slot-by-slot height domination that makes the final inequality hold.
    """
    driver = _as_driver(rng)
    steps = seq.steps
    m = len(steps)
    k = _leading_attach_run(seq)
    if k == 0:
        raise NotReducible("sequence starts with a freeze")
    if k == m:
        raise NotReducible("sequence has no freeze step")
    if not is_valid(seq):
        raise InvalidSequence(f"{seq.text!r} exhausts its active vertices early")

    final_actives = 1 + 2 * steps.count(Step.ATTACH) - m
    forest = [0] * final_actives
    for i in range(m, k + 1, -1):
        if steps[i - 1] is Step.FREEZE:
            forest.append(0)
        else:
            a, b = driver.distinct_pair(len(forest))
            _graft_heights(forest, a, b)

    reduced_forest = forest.copy()
    forest.insert(0, 0)  # the spare frozen singleton occupies slot 0

    records: list[CouplingTraceEntry] = []

    def absorb(a: int, b: int) -> None:
        # one of a, b is the spare's slot 0; the merge lands at max(a, b)
        t = max(a, b)
        forest[t] = forest[b] + 1 if a == 0 else max(forest[a], 1)
        forest.pop(0)

    def check_absorption(a: int, b: int) -> None:
        # right after absorption the forests agree slot for slot, except where
        # the spare was grafted: there the original sits one level higher (the
        # spare became the root) or at max(height, 1) (the spare hangs under)
        assert len(forest) == len(reduced_forest)
        t = max(a, b) - 1
        for i, (h, hr) in enumerate(zip(forest, reduced_forest)):
            if i != t:
                assert h == hr, "forests differ away from the graft slot"
        expected = reduced_forest[t] + 1 if a == 0 else max(reduced_forest[t], 1)
        assert forest[t] == expected, "graft slot height off"

    a, b = driver.distinct_pair(len(forest))
    spare_absorbed = not (a > 0 and b > 0)
    if spare_absorbed:
        absorb(a, b)
        if check:
            check_absorption(a, b)
    else:
        _graft_heights(forest, a, b)
    pending = (a, b)
    if trace:
        records.append(CouplingTraceEntry(spare_absorbed, pending))

    for _ in range(k - 1, 0, -1):
        if spare_absorbed:
            a, b = driver.distinct_pair(len(forest))
            _graft_heights(forest, a, b)
            _graft_heights(reduced_forest, a, b)
        else:
            _graft_heights(reduced_forest, pending[0] - 1, pending[1] - 1)
            a, b = driver.distinct_pair(len(forest))
            if a > 0 and b > 0:
                _graft_heights(forest, a, b)
            else:
                absorb(a, b)
                spare_absorbed = True
                if check:
                    check_absorption(a, b)
            pending = (a, b)
        if trace:
            records.append(CouplingTraceEntry(spare_absorbed, pending))
        if check and spare_absorbed:
            assert len(forest) == len(reduced_forest) and all(
                h >= hr for h, hr in zip(forest, reduced_forest)
            ), "slot-wise height domination broken"

    return CoupledSample(
        height_x=forest[0],
        height_xhat=reduced_forest[0],
        trace=tuple(records) if trace else None,
    )


# --------------------------------------------------------------------------
# Shared helpers for the insertion couplings


def _rrt_depths(m: int, driver: Driver) -> tuple[list[int], int]:
    """Depths of a recursive tree grown vertex by vertex; returns (depths, height)."""
    depths = [0]
    height = 0
    for j in range(1, m + 1):
        d = depths[driver.index(j)] + 1
        depths.append(d)
        if d > height:
            height = d
    return depths, height


def _rrt_height(n: int, driver: Driver) -> int:
    return _rrt_depths(n, driver)[1]


def _split_heights(n: int, driver: Driver) -> tuple[int, int]:
    """Heights of the two parts of an n-edge recursive tree cut at its first
    edge: (part keeping the root, part rooted at the first child)."""
    component = [0, 1]
    depth = [0, 0]
    heights = [0, 0]
    for j in range(2, n + 1):
        i = driver.index(j)
        c = component[i]
        d = depth[i] + 1
        component.append(c)
        depth.append(d)
        if d > heights[c]:
            heights[c] = d
    return heights[0], heights[1]


def couple_prop_i(m: int, n: int, rng: RngStream | Driver) -> CoupledSample:
    """Coupling for inserting an extra freeze+attach pair.

    Shared pieces: an m-edge recursive tree with two marked distinct uniform
    vertices (the survivors of freezing all but two), a uniform split of n
    extra edges, and the two independently grown subtrees of that split.  The
    first marked vertex hosts both grafts for the longer sequence (one through
    its new child); the two marked vertices share them for the shorter one.
    """
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    driver = _as_driver(rng)
    depths, base_height = _rrt_depths(m, driver)
    u, v = driver.distinct_pair(m + 1)
    hu, hv = depths[u], depths[v]
    i_n = driver.index(n + 1)
    h1 = _rrt_height(i_n, driver)
    h2 = _rrt_height(n - i_n, driver)
    return CoupledSample(
        height_x=max(base_height, hu + 1 + h1, hu + h2),
        height_xhat=max(base_height, hu + h1, hv + h2),
        i_split=i_n,
    )


def couple_prop_ii(m: int, n: int, rng: RngStream | Driver) -> CoupledSample:
    """Coupling for inserting an extra attach+freeze pair.

    Same shared pieces as :func:`couple_prop_i`, plus a uniform choice of
    which of the three actives (the fresh child, its parent, or the other
    marked vertex) gets frozen; the case decides where the two subtrees land.
    """
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    driver = _as_driver(rng)
    depths, base_height = _rrt_depths(m, driver)
    u, v = driver.distinct_pair(m + 1)
    hu, hv = depths[u], depths[v]
    case = driver.index(3)
    i_n = driver.index(n + 1)
    h1 = _rrt_height(i_n, driver)
    h2 = _rrt_height(n - i_n, driver)
    height_xhat = max(base_height, hu + h1, hv + h2)
    if case == 0:
        tag = FreezeCase.FROZEN_CHILD
        height_x = max(base_height, hu + 1, hu + h1, hv + h2)
    elif case == 1:
        tag = FreezeCase.FROZEN_PARENT
        height_x = max(base_height, hu + 1 + h1, hv + h2)
    else:
        tag = FreezeCase.FROZEN_OTHER
        height_x = max(base_height, hu + 1 + h1, hu + h2)
    return CoupledSample(
        height_x=height_x, height_xhat=height_xhat, case_tag=tag, i_split=i_n
    )


def _prop_iii_x_height(n: int, driver: Driver) -> int:
    """Height of the tree for attach,attach,freeze followed by n attachments."""
    h1, h2 = _split_heights(n + 1, driver)
    cfg = driver.index(6)
    attach_to_child, frozen = divmod(cfg, 3)
    # base tree: root 0, child 1, then vertex 2 under 1 (path) or 0 (star);
    # frozen picks which of 0, 1, 2 is retired before the split parts attach
    if attach_to_child:
        if frozen == 0:
            return max(1 + h1, 2 + h2)
        if frozen == 1:
            return max(h1, 2 + h2)
        return max(2, h1, 1 + h2)
    # three-vertex star
    if frozen == 0:
        return max(1 + h1, 1 + h2)
    return max(h1, 1 + h2)


def _prop_iii_xhat_heights(n: int, driver: Driver) -> tuple[int, int]:
    """(height of the attach,freeze,attach... tree, height of the plain
    recursive tree rebuilt from the same split)."""
    h1, h2 = _split_heights(n, driver)
    rrt_height = max(h1, 1 + h2)
    if driver.index(2) == 0:
        return max(1 + h1, 2 + h2), rrt_height
    return max(h1, 1 + h2), rrt_height


def couple_prop_iii(n: int, rng: RngStream | Driver) -> tuple[int, int, int]:
    """Coupling for removing the second attach of an attach,attach,freeze start.

    Returns ``(height_x, height_xhat, height_rrt)`` where the last two are
    built from the same edge-cut of an n-edge recursive tree, so that the
    recursive tree's height is their deterministic combination.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    driver = _as_driver(rng)
    height_x = _prop_iii_x_height(n, driver)
    height_xhat, height_rrt = _prop_iii_xhat_heights(n, driver)
    return height_x, height_xhat, height_rrt


def samples_to_csv(samples: Iterable[CoupledSample]) -> str:
    """Serialize a batch as ``replica,height_x,height_xhat,case`` rows."""
    lines = ["replica,height_x,height_xhat,case"]
    for i, s in enumerate(samples):
        case = s.case_tag.value if s.case_tag is not None else ""
        lines.append(f"{i},{s.height_x},{s.height_xhat},{case}")
    return "\n".join(lines) + "\n"
