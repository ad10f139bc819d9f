"""
Attention over time: response delay, life span, dormancy and awakenings,
calendar timelines and per-user window concentration.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Dict, List, Tuple

import pandas as pd

from config.settings import DEFAULT_DORMANCY_DAYS, DEFAULT_TIMELINE_WIDTH, TIMELINE_WIDTHS
from src.attention_data.models import AttentionDataset
from src.errors import EmptyDataset, EmptyWindow

logger = logging.getLogger(__name__)

# pandas period aliases; weeks start on Monday
_PERIOD_FREQ = {"day": "D", "week": "W-SUN", "month": "M"}

SECONDS_PER_DAY = 86400


@dataclass(frozen=True)
class LifespanReport:
    first_event: datetime
    last_event: datetime
    response_delay_days: int
    lifespan_days: int
    dormancy_intervals: Tuple[Tuple[datetime, datetime], ...] = ()
    awakening_events: Tuple[str, ...] = ()
    # "day" unless the publication date was completed from a year or month
    date_precision: str = "day"

    def to_dict(self) -> Dict:
        return {
            "first_event": self.first_event.isoformat(),
            "last_event": self.last_event.isoformat(),
            "response_delay_days": self.response_delay_days,
            "response_delay_precision": self.date_precision,
            "lifespan_days": self.lifespan_days,
            "dormancy_intervals": [
                {"start": s.isoformat(), "end": e.isoformat(), "days": (e - s).days}
                for s, e in self.dormancy_intervals
            ],
            "awakening_events": list(self.awakening_events),
        }


def lifespan_report(ds: AttentionDataset, dormancy_threshold_days: int = DEFAULT_DORMANCY_DAYS) -> LifespanReport:
    """Dormancies are gaps between consecutive events of at least the threshold"""
    if not ds.events:
        raise EmptyDataset("cannot compute a life span: dataset has no events")
    if dormancy_threshold_days <= 0:
        raise ValueError("dormancy_threshold_days must be positive")

    events = sorted(ds.events, key=lambda e: e.sort_key)
    first, last = events[0].timestamp, events[-1].timestamp
    threshold = timedelta(days=dormancy_threshold_days)

    intervals, awakenings = [], []
    for prev, nxt in zip(events, events[1:]):
        if nxt.timestamp - prev.timestamp >= threshold:
            intervals.append((prev.timestamp, nxt.timestamp))
            awakenings.append(nxt.event_id)
            logger.debug("Dormancy %s -> %s, awakened by %s",
                         prev.timestamp.date(), nxt.timestamp.date(), nxt.event_id)

    paper = ds.paper
    if paper.is_completed_date:
        logger.info("Publication date has %s precision; response delay is approximate", paper.date_precision)

    return LifespanReport(
        first_event=first,
        last_event=last,
        response_delay_days=(first.date() - paper.publication_date).days,
        lifespan_days=math.ceil((last - first).total_seconds() / SECONDS_PER_DAY),
        dormancy_intervals=tuple(intervals),
        awakening_events=tuple(awakenings),
        date_precision=paper.date_precision,
    )


# ==================== TIMELINE ====================

@dataclass(frozen=True)
class TimelineBin:
    bin_start: datetime
    bin_end: datetime
    bin_width: str
    count: int = 0

    def to_dict(self) -> Dict:
        return {"bin_start": self.bin_start.isoformat(), "bin_width": self.bin_width, "count": self.count}


def _utc(ts: pd.Timestamp) -> datetime:
    return ts.tz_localize(timezone.utc).to_pydatetime()


def timeline_bins(ds: AttentionDataset, width: str = DEFAULT_TIMELINE_WIDTH) -> List[TimelineBin]:
    """Contiguous calendar bins (UTC) from the first to the last event, empty bins included"""
    if width not in TIMELINE_WIDTHS:
        raise ValueError(f"width must be one of {TIMELINE_WIDTHS}, got {width!r}")
    if not ds.events:
        raise EmptyDataset("cannot bin a timeline: dataset has no events")

    stamps = pd.to_datetime([ev.timestamp for ev in ds.events], utc=True).tz_localize(None)
    periods = stamps.to_period(_PERIOD_FREQ[width])
    span = pd.period_range(start=periods.min(), end=periods.max(), freq=periods.freq)
    counts = pd.Series(periods).value_counts().reindex(span, fill_value=0)

    return [
        TimelineBin(
            bin_start=_utc(period.start_time),
            bin_end=_utc((period + 1).start_time),
            bin_width=width,
            count=int(count),
        )
        for period, count in counts.items()
    ]


# ==================== WINDOWS ====================

def iso_week_window(year: int, week: int) -> Tuple[datetime, datetime]:
    """[Monday 00:00, next Monday 00:00) of an ISO week, in UTC"""
    start = datetime.fromisocalendar(year, week, 1).replace(tzinfo=timezone.utc)
    return start, start + timedelta(days=7)


def window_share(ds: AttentionDataset, user_id: str, window_start: datetime, window_end: datetime) -> float:
    """Fraction of the events in [start, end) that user_id posted"""
    if window_start >= window_end:
        raise ValueError("window_start must be before window_end")
    in_window = [ev for ev in ds.events if window_start <= ev.timestamp < window_end]
    if not in_window:
        raise EmptyWindow(window_start.isoformat(), window_end.isoformat())
    return sum(1 for ev in in_window if ev.user_id == user_id) / len(in_window)


def peak_bin(ds: AttentionDataset, width: str = "week") -> TimelineBin:
    """The busiest calendar bin; the earliest one on ties"""
    bins = timeline_bins(ds, width)
    return max(bins, key=lambda b: (b.count, -b.bin_start.timestamp()))


def window_leader(ds: AttentionDataset, window_start: datetime, window_end: datetime) -> Tuple[str, float]:
    """(user_id, share) of the most active author in [start, end); lowest id on ties"""
    in_window = [ev.user_id for ev in ds.events if window_start <= ev.timestamp < window_end]
    if not in_window:
        raise EmptyWindow(window_start.isoformat(), window_end.isoformat())
    counts = Counter(in_window)
    leader = min(counts, key=lambda uid: (-counts[uid], uid))
    return leader, counts[leader] / len(in_window)
