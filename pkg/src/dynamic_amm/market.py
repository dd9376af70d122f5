"""Deterministic market-price oracle over discrete time steps."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import IndexOutOfRange, NonPositivePrice

DEFAULT_P_MIN = 0.01


class ScheduleKind(str, Enum):
    CONSTANT = "constant"
    LINEAR_RAMP = "linear"
    SERIES = "series"


@dataclass(frozen=True)
class PriceSchedule:
    kind: ScheduleKind
    value: float = 1.0
    p_start: float = 0.0
    p_end: float = 0.0
    points: tuple[float, ...] = ()
    p_min: float = DEFAULT_P_MIN

    def __post_init__(self):
        if not self.p_min > 0:
            raise NonPositivePrice(f"price floor must be > 0, got {self.p_min}")

    @classmethod
    def constant(cls, value: float, p_min: float = DEFAULT_P_MIN) -> PriceSchedule:
        return cls(ScheduleKind.CONSTANT, value=value, p_min=p_min)

    @classmethod
    def linear(cls, p_start: float, p_end: float, p_min: float = DEFAULT_P_MIN) -> PriceSchedule:
        return cls(ScheduleKind.LINEAR_RAMP, p_start=p_start, p_end=p_end, p_min=p_min)

    @classmethod
    def series(cls, points, p_min: float = DEFAULT_P_MIN) -> PriceSchedule:
        return cls(ScheduleKind.SERIES, points=tuple(float(p) for p in points), p_min=p_min)

    @classmethod
    def from_file(cls, path: str | Path, p_min: float = DEFAULT_P_MIN) -> PriceSchedule:
        """Read one price per line; blank lines and ``#`` comments are skipped."""
        points = []
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                points.append(float(line))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a price: {raw!r}") from None
        return cls.series(points, p_min=p_min)

    @classmethod
    def parse(cls, text: str, p_min: float = DEFAULT_P_MIN) -> PriceSchedule:
        """Parse ``linear:<p0>:<p1>``, ``constant:<p>`` or ``file:<path>``."""
        head, _, rest = text.partition(":")
        try:
            if head == "linear":
                p0, p1 = rest.split(":")
                return cls.linear(float(p0), float(p1), p_min=p_min)
            if head == "constant":
                return cls.constant(float(rest), p_min=p_min)
        except ValueError:
            raise ValueError(f"malformed price schedule {text!r}") from None
        if head == "file" and rest:
            return cls.from_file(rest, p_min=p_min)
        raise ValueError(
            f"unknown price schedule {text!r}; expected linear:<p0>:<p1>, "
            "constant:<p> or file:<path>"
        )

    def price_at(self, t: int, total_steps: int) -> float:
        return price_at(self, t, total_steps)


def price_at(schedule: PriceSchedule, t: int, total_steps: int) -> float:
    if not 0 <= t < total_steps:
        raise IndexOutOfRange(f"step {t} outside [0, {total_steps})")
    if schedule.kind is ScheduleKind.CONSTANT:
        p = schedule.value
    elif schedule.kind is ScheduleKind.LINEAR_RAMP:
        if total_steps == 1:
            p = schedule.p_start
        else:
            # t / (total_steps - 1) so that the last step lands on p_end exactly.
            p = schedule.p_start + (schedule.p_end - schedule.p_start) * t / (total_steps - 1)
    else:
        if t >= len(schedule.points):
            raise IndexOutOfRange(
                f"price series has {len(schedule.points)} points, step {t} requested"
            )
        p = schedule.points[t]
    return max(schedule.p_min, p)
