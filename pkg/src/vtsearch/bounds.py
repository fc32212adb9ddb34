"""Search cost-bound expressions over concrete stopping-time profiles.

Evaluates the raw radical/ratio forms of the search upper bounds (log
factors and unspecified constants dropped) so that different composition
strategies can be compared numerically on the same cost profile.
"""

from __future__ import annotations

import io
import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .grover import CostProfile

BOUND_KINDS = ("naive", "l2", "l1", "l0", "straight_line",
               "regime_i_a", "regime_i_b", "regime_ii_a", "regime_ii_b",
               "regime_ii_c")


@dataclass(frozen=True)
class PromiseDescriptor:
    """Description of the allowed marked sets.

    Either an explicit list of candidate marked sets, or the
    unique-marked promise with a checking-time cap t_max (the degrees of
    freedom the tabulated special-case forms need).
    """

    marked_sets: tuple[frozenset[int], ...] | None = None
    t_max: float | None = None
    unique_marked: bool = False

    def __post_init__(self):
        if self.marked_sets is not None and any(len(s) == 0 for s in self.marked_sets):
            raise ValueError("candidate marked sets must be nonempty")
        if self.marked_sets is None and not self.unique_marked:
            raise ValueError("need explicit marked sets or the unique-marked promise")

    def mu(self) -> float:
        if self.marked_sets is not None:
            return float(min(len(s) for s in self.marked_sets))
        return 1.0

    def epsilon(self, pi: np.ndarray) -> float:
        """Smallest sampling mass any allowed marked set can carry."""
        if self.marked_sets is not None:
            return min(float(sum(pi[i] for i in s)) for s in self.marked_sets)
        return float(np.min(pi))

    def min_marked_sum(self, values: np.ndarray, pi: np.ndarray,
                       table_denominator: float | None = None) -> float:
        """min over allowed marked sets of sum_{i in set} pi_i * values_i.

        For the unique-marked-with-cap promise the minimum is attained at
        the cap, which the caller passes as table_denominator.
        """
        if self.marked_sets is not None:
            return min(float(sum(pi[i] * values[i] for i in s))
                       for s in self.marked_sets)
        if table_denominator is None:
            raise ValueError("unique-marked promise needs a t_max-based denominator")
        return table_denominator


def bound(kind: str, profile: CostProfile, promise: PromiseDescriptor) -> float:
    """One cost-bound value on a profile; raw expression, no hidden factors."""
    if kind not in BOUND_KINDS:
        raise ValueError(f"unknown bound kind {kind!r}")
    pi = profile.pi
    exp_t, exp_t2 = profile.exp_t, profile.exp_t2
    n = profile.size
    eps = promise.epsilon(pi)

    if kind == "naive":
        return float(np.max(exp_t)) / math.sqrt(eps)
    if kind == "l2":
        return math.sqrt(float(pi @ exp_t2) / eps)
    if kind == "l1":
        if promise.marked_sets is None and promise.t_max is None:
            raise ValueError("l1 needs t_max under the unique-marked promise")
        denom = promise.min_marked_sum(
            1.0 / exp_t, pi,
            None if promise.marked_sets is not None
            else float(np.min(pi)) / promise.t_max)
        return math.sqrt(float(pi @ exp_t) / denom)
    if kind == "l0":
        if promise.marked_sets is None and promise.t_max is None:
            raise ValueError("l0 needs t_max under the unique-marked promise")
        denom = promise.min_marked_sum(
            1.0 / exp_t2, pi,
            None if promise.marked_sets is not None
            else float(np.min(pi)) / promise.t_max ** 2)
        return 1.0 / math.sqrt(denom)
    if kind == "straight_line":
        if promise.t_max is None:
            t_cap = float(np.max(exp_t))
        else:
            t_cap = float(promise.t_max)
        return (float(pi @ exp_t) + t_cap) / math.sqrt(eps)

    # regime radicals are stated for uniform sampling
    if promise.marked_sets is None:
        raise ValueError("regime bounds need explicit candidate marked sets")
    mu = promise.mu()
    if kind == "regime_i_a":
        return math.sqrt(float(np.sum(exp_t ** 2)) / mu)
    if kind == "regime_i_b":
        k = min(float(sum(1.0 / exp_t[i] ** 2 for i in s))
                for s in promise.marked_sets)
        return math.sqrt(n / k)
    if kind == "regime_ii_a":
        return math.sqrt(float(np.sum(exp_t2)) / mu)
    if kind == "regime_ii_b":
        k = min(float(sum(1.0 / exp_t[i] for i in s))
                for s in promise.marked_sets)
        return math.sqrt(float(np.sum(exp_t)) / k)
    # regime_ii_c
    k = min(float(sum(1.0 / exp_t2[i] for i in s)) for s in promise.marked_sets)
    return math.sqrt(n / k)


@dataclass
class CostReport:
    """All bound values for one profile, with the inputs echoed."""

    values: dict[str, float]
    profile_digest: dict
    promise_digest: dict
    notes: dict = field(default_factory=dict)

    def to_jsonable(self) -> dict:
        return {"values": self.values, "profile": self.profile_digest,
                "promise": self.promise_digest, "notes": self.notes}

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(list(BOUND_KINDS))
        writer.writerow([repr(self.values[k]) for k in BOUND_KINDS])
        return out.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), sort_keys=True)


def full_report(profile: CostProfile, promise: PromiseDescriptor) -> CostReport:
    values = {}
    for kind in BOUND_KINDS:
        try:
            values[kind] = bound(kind, profile, promise)
        except ValueError:
            values[kind] = math.nan
    return CostReport(
        values=values,
        profile_digest={
            "n": profile.size,
            "exp_t": [float(x) for x in profile.exp_t],
            "exp_t2": [float(x) for x in profile.exp_t2],
            "pi": [float(x) for x in profile.pi],
        },
        promise_digest={
            "marked_sets": (None if promise.marked_sets is None
                            else [sorted(s) for s in promise.marked_sets]),
            "t_max": promise.t_max,
            "unique_marked": promise.unique_marked,
        },
    )


@dataclass(frozen=True)
class ComparisonReport:
    l2: float
    l1: float
    l0: float
    straight_line: float
    naive: float
    ordering_holds: bool
    ratios: dict[str, float]


def compare_table(profile: CostProfile, promise: PromiseDescriptor,
                  slack: float = 1e-12) -> ComparisonReport:
    """Ordered comparison for the unique-marked-with-cap promise.

    Asserts l2 <= l1 <= l0 and straight_line >= l1 (the latter is the
    arithmetic-vs-geometric mean gap), up to the given slack.
    """
    if not promise.unique_marked or promise.t_max is None:
        raise ValueError("comparison table needs the unique-marked promise with t_max")
    if float(np.max(profile.exp_t)) > promise.t_max + slack:
        raise ValueError("profile exceeds the promised checking-time cap")
    vals = {k: bound(k, profile, promise)
            for k in ("naive", "l2", "l1", "l0", "straight_line")}
    ok = (vals["l2"] <= vals["l1"] + slack
          and vals["l1"] <= vals["l0"] + slack
          and vals["straight_line"] + slack >= vals["l1"]
          and vals["naive"] + slack >= vals["l2"])
    if not ok:
        raise AssertionError(f"bound ordering violated: {vals}")
    return ComparisonReport(
        l2=vals["l2"], l1=vals["l1"], l0=vals["l0"],
        straight_line=vals["straight_line"], naive=vals["naive"],
        ordering_holds=ok,
        ratios={"l1_over_l2": vals["l1"] / vals["l2"],
                "l0_over_l1": vals["l0"] / vals["l1"],
                "straight_over_l1": vals["straight_line"] / vals["l1"]},
    )
