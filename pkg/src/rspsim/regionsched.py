"""Angle schedule, region lookup and channel assignment for the explicit scheme.

The schedule ``A_n = arcsin((2q - 1)**n) / 2`` splits the lower half
[0, pi/4] into regions ``[pi/4 - A_n, pi/4 - A_{n+1}]`` and mirrors them
into the upper half.  Region ``n`` of either half is served by a channel
(|00> + t|11>) whose Schmidt ratio ``t`` is tied to ``A_{n+1}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import CentralGapError, DomainError
from .qcore import PureState

__all__ = [
    "LOWER", "UPPER", "Schedule", "RegionIndex", "ChannelState", "AncillaParam",
    "check_q", "schedule_value", "make_schedule", "locate_region",
    "channel_for_region", "ancilla_param", "depth_for_gap", "region_interval",
    "explicit_chi",
]

LOWER = "lower"
UPPER = "upper"
Half = Literal["lower", "upper"]

QUARTER_PI = math.pi / 4


def check_q(q: float) -> float:
    if not (0.5 < q < 1.0):
        raise DomainError(f"q={q!r} must lie strictly inside (1/2, 1)")
    return float(q)


def schedule_value(q: float, n: int) -> float:
    """``A_n``: half the arcsine of ``(2q - 1)**n``."""
    check_q(q)
    if n < 0:
        raise DomainError(f"schedule index n={n!r} must be >= 0")
    return 0.5 * math.asin((2 * q - 1) ** n)


@dataclass(frozen=True)
class Schedule:
    q: float
    depth: int
    values: tuple[float, ...]  # A_0 .. A_depth

    def __getitem__(self, n: int) -> float:
        return self.values[n]

    @property
    def gap(self) -> float:
        """Half-width ``A_depth`` of the uncovered central interval."""
        return self.values[-1]


def make_schedule(q: float, depth: int) -> Schedule:
    check_q(q)
    if depth < 1:
        raise DomainError(f"depth={depth!r} must be >= 1")
    return Schedule(q, int(depth), tuple(schedule_value(q, n) for n in range(depth + 1)))


def depth_for_gap(q: float, gap: float) -> int:
    """Smallest integer depth N with ``A_N <= gap``."""
    check_q(q)
    if not (0 < gap < QUARTER_PI):
        raise DomainError(f"gap={gap!r} must lie in (0, pi/4)")
    n = max(1, math.ceil(math.log(math.sin(2 * gap)) / math.log(2 * q - 1)))
    while schedule_value(q, n) > gap:  # guard against rounding in the ratio
        n += 1
    while n > 1 and schedule_value(q, n - 1) <= gap:
        n -= 1
    return n


@dataclass(frozen=True)
class RegionIndex:
    half: Half
    n: int

    def __post_init__(self):
        if self.half not in (LOWER, UPPER):
            raise DomainError(f"half must be 'lower' or 'upper', got {self.half!r}")
        if self.n < 0:
            raise DomainError(f"region ordinal n={self.n!r} must be >= 0")


def region_interval(region: RegionIndex, q: float) -> tuple[float, float]:
    """Closed theta interval covered by ``region``."""
    a_n, a_next = schedule_value(q, region.n), schedule_value(q, region.n + 1)
    if region.half == LOWER:
        return QUARTER_PI - a_n, QUARTER_PI - a_next
    return QUARTER_PI + a_next, QUARTER_PI + a_n


def locate_region(theta: float, q: float, depth: int) -> RegionIndex:
    """Region containing ``theta`` for a depth-``depth`` schedule.

    Shared boundaries go to the smaller ``n``.  Angles inside the open
    central gap ``(pi/4 - A_depth, pi/4 + A_depth)`` raise CentralGapError.
    """
    if not (0.0 <= theta <= math.pi / 2):
        raise DomainError(f"theta={theta!r} outside [0, pi/2]")
    sched = make_schedule(q, depth)
    a = np.array(sched.values[1:])  # A_1 .. A_depth
    if theta < QUARTER_PI:
        upper_ends = QUARTER_PI - a  # increasing
        n = int(np.searchsorted(upper_ends, theta, side="left"))
        half = LOWER
    else:
        lower_ends = QUARTER_PI + a  # decreasing
        n = int(np.searchsorted(-lower_ends, -theta, side="left"))
        half = UPPER
    if n >= depth:
        raise CentralGapError(theta, QUARTER_PI - sched.gap, QUARTER_PI + sched.gap)
    return RegionIndex(half, n)


@dataclass(frozen=True)
class ChannelState:
    """Shared channel (|00> + t|11>)/sqrt(1 + t^2).

    ``flipped`` marks an upper-half channel obtained from the lower-half
    family: the resource actually stored has ratio ``1/t`` and must be
    mapped by a local sigma_x on both qubits before use.
    """

    t: float
    flipped: bool = False

    @property
    def as_state(self) -> PureState:
        return PureState([1.0, 0.0, 0.0, self.t])

    @property
    def stored_state(self) -> PureState:
        if self.flipped:
            return PureState([1.0, 0.0, 0.0, 1.0 / self.t])
        return self.as_state


def channel_for_region(region: RegionIndex, q: float, lower_family_only: bool = False) -> ChannelState:
    a_next = schedule_value(q, region.n + 1)
    if region.half == LOWER:
        return ChannelState(math.tan(QUARTER_PI - a_next))
    return ChannelState(math.tan(QUARTER_PI + a_next), flipped=lower_family_only)


def explicit_chi(theta: float, region: RegionIndex, q: float) -> float:
    """Closed-form ratio C1/C0 of unwanted to wanted weight in Bob's state."""
    c = math.cos(2 * theta)
    s = math.sin(2 * schedule_value(q, region.n + 1))
    if region.half == LOWER:
        return (c - s) / (c + s)
    return (c + s) / (c - s)


@dataclass(frozen=True)
class AncillaParam:
    """Ancilla |0> + y|1> with ``y = a + i*sqrt(radicand)``."""

    a: float
    y: complex
    radicand: float

    @property
    def state(self) -> PureState:
        return PureState([1.0, self.y])


def ancilla_param(theta: float, region: RegionIndex, q: float) -> AncillaParam:
    """Ancilla that cancels the off-diagonal term of Bob's reduced state.

    The free constant ``a`` is set to ``|cot(2A_{n+1}) / tan(2 theta)|``,
    which maximizes the radicand to ``a**2 - 1``.  At theta in {0, pi/2}
    that expression diverges; there any purely imaginary ``y`` cancels the
    off-diagonal term and ``y = i`` is used.
    """
    lo, hi = region_interval(region, q)
    tol = 1e-12
    if not (lo - tol <= theta <= hi + tol):
        raise DomainError(f"theta={theta!r} outside region {region} = [{lo:.12g}, {hi:.12g}]")
    sin2t = math.sin(2 * theta)
    if abs(sin2t) < 1e-15:
        return AncillaParam(0.0, 1j, 1.0)
    a_next = schedule_value(q, region.n + 1)
    cot2a = 1.0 / math.tan(2 * a_next)
    ratio = cot2a * math.cos(2 * theta) / sin2t  # cot(2A)/tan(2 theta)
    sign = 1.0 if region.half == LOWER else -1.0
    a = abs(ratio)
    radicand = sign * 2 * a * ratio - a * a - 1
    if radicand < -1e-12:
        raise AssertionError(f"negative ancilla radicand {radicand} at theta={theta}, {region}")
    radicand = max(radicand, 0.0)
    return AncillaParam(a, complex(a, math.sqrt(radicand)), radicand)
