"""Entanglement-resource formulas and the greedy channel-compression planner.

All depth formulas are ratios of logarithms, so the base cancels; natural
logs are used throughout.  Depths come back real-valued; callers round up
when they need an integer channel count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, InfeasiblePlanError
from .regionsched import QUARTER_PI, check_q, schedule_value

__all__ = [
    "AccuracyModel", "CompressionPlan", "Section",
    "appendixA_depth", "improved1_depth", "appendixB_depth",
    "improved1_min_fidelity", "appendixB_min_success",
    "channel_ratio", "channel_index_for_ratio",
    "greedy_compress", "sweep_curve", "SWEEP_KINDS",
]

SWEEP_KINDS = ("appendixA", "improved1", "appendixB")


def _check_f_min(f_min: float, lo: float) -> float:
    if not (lo < f_min < 1.0):
        raise DomainError(f"f_min={f_min!r} must lie strictly inside ({lo}, 1)")
    return float(f_min)


@dataclass(frozen=True)
class AccuracyModel:
    """Central gap sized so that sin(pi/4 - A_N) / sin(pi/4) = 1 - 10**-m."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"accuracy exponent m={self.m!r} must be a positive integer")

    @property
    def A_N(self) -> float:
        return QUARTER_PI - math.asin((1 - 10.0**-self.m) / math.sqrt(2))

    @property
    def sin_2gap(self) -> float:
        # sin(2 A_N) = 1 - (1 - 10^-m)^2 in closed form
        return 2 * 10.0**-self.m - 10.0 ** (-2 * self.m)


def appendixA_depth(q: float, m: int) -> float:
    """Real depth N at which the schedule's gap shrinks to the accuracy model's A_N."""
    check_q(q)
    return math.log(AccuracyModel(m).sin_2gap) / math.log(2 * q - 1)


def improved1_depth(q: float, f_min: float) -> float:
    """Depth N whose gap edge keeps the maximally entangled fallback at overlap ``f_min``.

    The channel count is N + 1 (the extra maximally entangled pair).
    """
    check_q(q)
    _check_f_min(f_min, 0.0)
    return math.log(1 - f_min**2) / (2 * math.log(2 * q - 1))


def appendixB_depth(q: float, f_min: float) -> float:
    """Depth N whose worst-case POVM success probability in the gap is ``f_min``."""
    check_q(q)
    _check_f_min(f_min, 0.5)
    return math.log(1 / f_min - 1) / math.log(2 * q - 1)


def improved1_min_fidelity(q: float, depth: float) -> float:
    check_q(q)
    return math.sqrt(1 - (2 * q - 1) ** (2 * depth))


def appendixB_min_success(q: float, depth: float) -> float:
    check_q(q)
    return 1 / ((2 * q - 1) ** depth + 1)


def channel_ratio(q: float, n: float) -> float:
    """Schmidt ratio C_n = tan(pi/4 - A_n) of the n-th lower-family channel."""
    check_q(q)
    return math.tan(QUARTER_PI - 0.5 * math.asin((2 * q - 1) ** n))


def channel_index_for_ratio(q: float, c: float) -> float:
    """Real index f solving C_f = c (inverse of :func:`channel_ratio`).

    Returns ``inf`` when ``c`` is too close to 1 for the gap angle to be
    resolved in double precision.
    """
    check_q(q)
    if not (0 < c < 1):
        raise DomainError(f"ratio c={c!r} must lie in (0, 1)")
    gap = QUARTER_PI - math.atan(c)
    if gap <= 0:
        return math.inf
    return math.log(math.sin(2 * gap)) / math.log(2 * q - 1)


@dataclass(frozen=True)
class Section:
    k: int  # 1-based, ascending in channel index
    head: int
    lowest: int
    B: float

    @property
    def channels(self) -> range:
        return range(self.lowest, self.head + 1)


@dataclass(frozen=True)
class CompressionPlan:
    q: float
    P: float
    N: int
    heads: tuple[int, ...]  # descending, heads[0] == N
    lows: tuple[int, ...]  # lowest channel served by each head
    thresholds: tuple[float, ...] = field(repr=False)  # real boundary f per head
    below_floor: tuple[int, ...] = ()  # heads with P < 1/(B^2 + 1)

    @property
    def M(self) -> int:
        return len(self.heads)

    @property
    def section_bounds(self) -> tuple[int, ...]:
        """l_0 .. l_M with l_0 = 1 and l_M = N; channel l_k (k < M) belongs to section k + 1."""
        asc = self.heads[::-1]
        return (1,) + tuple(h + 1 for h in asc[:-1]) + (self.N,)

    @property
    def sections(self) -> list[Section]:
        out = []
        for k, (h, lo) in enumerate(zip(self.heads[::-1], self.lows[::-1]), start=1):
            out.append(Section(k, h, lo, channel_ratio(self.q, h)))
        return out

    def section_for_channel(self, f: int) -> Section:
        for sec in self.sections:
            if sec.lowest <= f <= sec.head:
                return sec
        raise DomainError(f"channel index {f} is served by no section (plan covers 1..{self.N})")

    def theta_intervals(self, section: Section) -> tuple[tuple[float, float], tuple[float, float]]:
        """Lower- and upper-half theta intervals whose channels come from ``section``."""
        a_lo = schedule_value(self.q, section.lowest - 1)
        a_hi = schedule_value(self.q, section.head)
        return (QUARTER_PI - a_lo, QUARTER_PI - a_hi), (QUARTER_PI + a_hi, QUARTER_PI + a_lo)

    def verify(self) -> None:
        """Re-check the plan from scratch; raise AssertionError on any violation."""
        assert self.heads and self.heads[0] == self.N
        assert all(a > b for a, b in zip(self.heads, self.heads[1:]))
        assert self.lows[-1] == 1
        covered = []
        for h, lo in zip(self.heads, self.lows):
            B = channel_ratio(self.q, h)
            floor = math.sqrt(max(self.P * B * B + self.P - 1, 0.0))
            for f in range(lo, h + 1):
                C = channel_ratio(self.q, f)
                assert floor - 1e-12 <= C <= B + 1e-12, (h, f)
            covered.extend(range(lo, h + 1))
        assert sorted(covered) == list(range(1, self.N + 1))


def greedy_compress(q: float, N: int, P: float, strict: bool = False) -> CompressionPlan:
    """Greedy sectioning of channels 1..N into heads reachable by a local POVM.

    Starting from head ``h = N``, the lowest channel the head can be converted
    into with success probability ``P`` is ``l = ceil(f)``, where ``f`` solves
    ``C_f = sqrt(P C_h^2 + P - 1)``.  Channel ``l`` stays with the current
    head, so the next head is ``l - 1``.  The walk stops once no channel is
    left below the current section.

    A head with ``P < 1/(B^2 + 1)`` has a non-positive radicand and serves
    every remaining channel.  It is recorded in ``below_floor``; with
    ``strict=True`` it raises InfeasiblePlanError instead.
    """
    check_q(q)
    if int(N) != N or N < 1:
        raise DomainError(f"N={N!r} must be a positive integer")
    if not (0 < P <= 1):
        raise DomainError(f"P={P!r} must lie in (0, 1]")
    N = int(N)
    heads, lows, thresholds, below = [], [], [], []
    h = N
    while h >= 1:
        B = channel_ratio(q, h)
        radicand = P * B * B + P - 1
        if radicand <= 0:
            if strict:
                raise InfeasiblePlanError(h, P, 1 / (B * B + 1))
            below.append(h)
            f, lo = 0.0, 1
        else:
            thr = math.sqrt(radicand)
            f = channel_index_for_ratio(q, thr)
            lo = h if math.isinf(f) else math.ceil(f - 1e-9)
            # settle rounding against the integer channel ratios
            while lo > 1 and channel_ratio(q, lo - 1) >= thr:
                lo -= 1
            while lo < h and channel_ratio(q, lo) < thr:
                lo += 1
            lo = min(max(lo, 1), h)
        heads.append(h)
        lows.append(lo)
        thresholds.append(f)
        h = lo - 1
    return CompressionPlan(float(q), float(P), N, tuple(heads), tuple(lows),
                           tuple(thresholds), tuple(below))


def sweep_curve(kind: str, q_values: Iterable[float] | None = None, *,
                q_range: Sequence[float] | None = None, samples: int = 50,
                m: int | None = None, f_min: float | None = None) -> np.ndarray:
    """Tabulate depth N against q; returns an array of rows (q, N).

    Give either explicit ``q_values`` or a ``q_range=(lo, hi)`` sampled at
    ``samples`` evenly spaced points.  ``appendixA`` needs ``m``; the other
    kinds need ``f_min``.
    """
    if kind not in SWEEP_KINDS:
        raise DomainError(f"unknown sweep kind {kind!r}; expected one of {SWEEP_KINDS}")
    if q_values is None:
        if q_range is None:
            raise DomainError("give q_values or q_range")
        if samples < 2:
            raise DomainError(f"samples={samples!r} must be >= 2")
        q_values = np.linspace(q_range[0], q_range[1], samples)
    qs = np.asarray(list(q_values), dtype=float)
    if kind == "appendixA":
        if m is None:
            raise DomainError("appendixA sweep needs m")
        Ns = [appendixA_depth(q, m) for q in qs]
    else:
        if f_min is None:
            raise DomainError(f"{kind} sweep needs f_min")
        fn = improved1_depth if kind == "improved1" else appendixB_depth
        Ns = [fn(q, f_min) for q in qs]
    return np.column_stack([qs, np.asarray(Ns)])
