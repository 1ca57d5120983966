"""Deterministic strategies of the two locality classes and exact classical bounds.

Two vertex families are enumerated:

* bilocal vertices: one bipartition of the parties; the grouped pair answers
  jointly (arbitrary two-way dependence on both settings inside the group),
  the solo party answers from its own setting;
* time-ordered vertices: as above, but inside the group one party (the
  "past") answers from its own setting only while the other (the "future")
  may also depend on the past party's setting.

Vertices may signal across settings inside the group, so the pair marginals
referenced by the probability-form statistic are not always setting-free.
Enumeration shows (see tests) that evaluating each pair marginal at the
larger of its two dummy-setting values is the unique reading among
{dummy 0, dummy 1, mean, min, max} under which the time-ordered maximum is
exactly 0, matching the statistic's classical bound; the fixed and mean
readings admit deterministic strategies with strictly positive values.
`classical_max` therefore uses that pessimistic reading.  The pair whose
dummy party is the solo party is always setting-free for vertices; this is
asserted during evaluation rather than assumed.

All vertex evaluations are exact integer arithmetic on 0/1 tensors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .qcore import BehaviorTensor

PARTITIONS = ("AB|C", "AC|B", "BC|A")

# party indices of (first grouped, second grouped, solo) per partition
_GROUPING = {
    "AB|C": (0, 1, 2),
    "AC|B": (0, 2, 1),
    "BC|A": (1, 2, 0),
}

# correlator sign table, +1 at (0,1,0) and (1,0,1)
_SIGNS = {
    (x, y, z): 1 if (x, y, z) in ((0, 1, 0), (1, 0, 1)) else -1
    for x, y, z in itertools.product(range(2), repeat=3)
}


@dataclass(frozen=True)
class BilocalVertex:
    """Deterministic bilocal strategy.

    ``pair_outputs[s1][s2]`` is the outcome pair of the grouped parties at
    their joint settings; ``solo_outputs[s]`` the solo party's outcome.
    """

    partition: str
    pair_outputs: tuple[tuple[tuple[int, int], tuple[int, int]],
                        tuple[tuple[int, int], tuple[int, int]]]
    solo_outputs: tuple[int, int]

    def __post_init__(self):
        if self.partition not in PARTITIONS:
            raise ValueError(f"unknown partition {self.partition!r}")


@dataclass(frozen=True)
class T2Vertex:
    """Deterministic one-way-signaling strategy.

    The past party's output depends only on its own setting:
    ``past_outputs[s]``.  The future party sees the past party's setting as
    well: ``future_outputs[s_own][s_past]``.  ``past_is_first`` says which
    grouped party is in the causal past.
    """

    partition: str
    past_is_first: bool
    past_outputs: tuple[int, int]
    future_outputs: tuple[tuple[int, int], tuple[int, int]]
    solo_outputs: tuple[int, int]

    def __post_init__(self):
        if self.partition not in PARTITIONS:
            raise ValueError(f"unknown partition {self.partition!r}")


def enumerate_svetlichny_vertices() -> list[BilocalVertex]:
    """All 3 * 2^4 * 2^4 * 2^2 = 3072 bilocal strategies.

    Duplicates across partitions are retained: only the maximum matters.
    """
    out = []
    joint_settings = tuple(itertools.product(range(2), repeat=2))
    for partition in PARTITIONS:
        for outputs in itertools.product(itertools.product(range(2), repeat=2), repeat=4):
            table = {st: outputs[i] for i, st in enumerate(joint_settings)}
            pair = tuple(tuple(table[(s1, s2)] for s2 in range(2)) for s1 in range(2))
            for solo in itertools.product(range(2), repeat=2):
                out.append(BilocalVertex(partition, pair, solo))
    return out


def enumerate_t2_vertices(include_both_orders: bool = False) -> list[T2Vertex]:
    """All 3 * 2^2 * 2^4 * 2^2 = 768 time-ordered strategies.

    The default enumerates one causal order per partition (first grouped
    party in the past).  Both certified statistics are invariant under
    exchanging the grouped parties, so the reversed order adds no new
    maxima; ``include_both_orders=True`` enumerates them anyway (1536),
    which the test suite uses to confirm the maxima agree.
    """
    out = []
    orders = (True, False) if include_both_orders else (True,)
    for partition in PARTITIONS:
        for past_is_first in orders:
            for past in itertools.product(range(2), repeat=2):
                for fut in itertools.product(range(2), repeat=4):
                    future = ((fut[0], fut[1]), (fut[2], fut[3]))
                    for solo in itertools.product(range(2), repeat=2):
                        out.append(T2Vertex(partition, past_is_first, past, future, solo))
    return out


def _outcome_table(v: BilocalVertex | T2Vertex) -> np.ndarray:
    """Outcomes (a, b, c) per setting triple, shape (2, 2, 2, 3)."""
    first, second, solo = _GROUPING[v.partition]
    table = np.empty((2, 2, 2, 3), dtype=np.int64)
    for settings in itertools.product(range(2), repeat=3):
        s1, s2, ss = settings[first], settings[second], settings[solo]
        if isinstance(v, BilocalVertex):
            o1, o2 = v.pair_outputs[s1][s2]
        else:
            if v.past_is_first:
                o1 = v.past_outputs[s1]
                o2 = v.future_outputs[s2][s1]
            else:
                o2 = v.past_outputs[s2]
                o1 = v.future_outputs[s1][s2]
        outcome = [0, 0, 0]
        outcome[first], outcome[second], outcome[solo] = o1, o2, v.solo_outputs[ss]
        table[settings] = outcome
    return table


def vertex_to_behavior(v: BilocalVertex | T2Vertex) -> BehaviorTensor:
    """Deterministic behavior tensor: one unit entry per setting triple.

    Normalization holds by construction; no-signaling may fail across the
    signaling cut, which is permitted for vertices.
    """
    table = _outcome_table(v)
    probs = np.zeros((2,) * 6)
    for x, y, z in itertools.product(range(2), repeat=3):
        a, b, c = table[x, y, z]
        probs[a, b, c, x, y, z] = 1.0
    return BehaviorTensor(probs)


def _svetlichny_int(table: np.ndarray) -> int:
    total = 0
    for xyz, sign in _SIGNS.items():
        a, b, c = table[xyz]
        total += sign * (-1) ** int(a + b + c)
    return total


def _pair00_int(table: np.ndarray, pair: tuple[int, int], dummy: int, d: int) -> int:
    """Indicator that both pair parties output 0, dummy party at setting d."""
    settings = [0, 0, 0]
    settings[pair[0]] = 1
    settings[pair[1]] = 1
    settings[dummy] = d
    out = table[tuple(settings)]
    return int(out[pair[0]] == 0 and out[pair[1]] == 0)


def _t2_int(table: np.ndarray, solo: int) -> int:
    """Probability-form statistic, pessimistic pair reading, exact integer."""
    pair_sum = 0
    for pair, dummy in (((0, 1), 2), ((1, 2), 0), ((0, 2), 1)):
        v0 = _pair00_int(table, pair, dummy, 0)
        v1 = _pair00_int(table, pair, dummy, 1)
        if dummy == solo:
            # the solo party cannot influence the grouped pair
            assert v0 == v1, "in-group pair marginal depends on the solo setting"
        pair_sum += max(v0, v1)
    m = {xyz: int((table[xyz] == 0).all()) for xyz in _SIGNS}
    return (
        -2 * pair_sum
        - m[(0, 0, 1)] - m[(0, 1, 0)] - m[(1, 0, 0)]
        + 2 * (m[(1, 1, 0)] + m[(1, 0, 1)] + m[(0, 1, 1)] + m[(1, 1, 1)])
    )


def classical_max(expression: str, vertices) -> int:
    """Exact maximum of an inequality statistic over deterministic strategies.

    ``expression`` is ``"svetlichny_corr"`` (classical bound 4) or ``"t2"``
    (classical bound 0, pessimistic pair reading).  The result is an exact
    integer; no tolerances are involved.
    """
    if expression not in ("svetlichny_corr", "t2"):
        raise ValueError(f"unknown expression {expression!r}")
    vertices = list(vertices)
    if not vertices:
        raise ValueError("vertex list is empty")
    best = None
    for v in vertices:
        table = _outcome_table(v)
        if expression == "svetlichny_corr":
            val = _svetlichny_int(table)
        else:
            val = _t2_int(table, _GROUPING[v.partition][2])
        if best is None or val > best:
            best = val
    return int(best)
