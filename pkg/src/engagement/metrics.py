"""
Engagement Metrics
==================
How a paper was shared: the three-way tweet split, the conversational (CT)
and informative (IT) indices, and the potential audience (exposure).

    CT = (mentions + retweets) / total
    IT = regular / total

Usage:
    summary = summarize_engagement(ds)
    summary.ct_index, summary.percentages()
"""

import csv
import io
import logging
import re
from collections import Counter
from dataclasses import asdict, dataclass, fields
from enum import Enum
from typing import Dict, Iterable, List, Sequence, Tuple

from config.settings import PERCENT_DECIMALS
from src.attention_data.models import AttentionDataset, TweetEvent
from src.errors import EmptyDataset

logger = logging.getLogger(__name__)

RT_PREFIX = re.compile(r"^\s*RT @(\w+):")
AT_TOKEN = re.compile(r"(?<!\w)@(\w+)")
HASHTAG = re.compile(r"(?<!\w)#(\w+)")


class TweetKind(str, Enum):
    RETWEET = "Retweet"
    MENTION = "Mention"
    REGULAR = "Regular"


def classify_tweet(ev: TweetEvent) -> TweetKind:
    """Retweet > Mention > Regular; replies count as mentions"""
    if ev.retweet_of_user_id is not None or ev.is_retweet_flag or RT_PREFIX.match(ev.text or ""):
        return TweetKind.RETWEET
    if ev.mentioned_user_ids or AT_TOKEN.search(ev.text or ""):
        return TweetKind.MENTION
    return TweetKind.REGULAR


@dataclass(frozen=True)
class EngagementSummary:
    total_tweets: int
    regular_count: int
    mention_count: int
    retweet_count: int
    sharing_degree: float
    recommendation_level: float
    spreading_degree: float
    ct_index: float
    it_index: float
    distinct_tweeters: int
    exposure: int

    def percentages(self, decimals: int = PERCENT_DECIMALS) -> Dict[str, float]:
        """The three degrees as rounded percentages, as they are usually quoted"""
        return {
            "sharing_degree": round(100 * self.sharing_degree, decimals),
            "recommendation_level": round(100 * self.recommendation_level, decimals),
            "spreading_degree": round(100 * self.spreading_degree, decimals),
        }

    def to_dict(self) -> Dict:
        return asdict(self)


def kind_counts(ds: AttentionDataset) -> Counter:
    return Counter(classify_tweet(ev) for ev in ds.events)


def summarize_engagement(ds: AttentionDataset) -> EngagementSummary:
    total = len(ds.events)
    if total == 0:
        raise EmptyDataset("cannot summarize engagement: dataset has no events")

    counts = kind_counts(ds)
    regular = counts[TweetKind.REGULAR]
    mentions = counts[TweetKind.MENTION]
    retweets = counts[TweetKind.RETWEET]

    return EngagementSummary(
        total_tweets=total,
        regular_count=regular,
        mention_count=mentions,
        retweet_count=retweets,
        sharing_degree=regular / total,
        recommendation_level=mentions / total,
        spreading_degree=retweets / total,
        ct_index=(mentions + retweets) / total,
        it_index=regular / total,
        distinct_tweeters=len(ds.tweeter_ids),
        exposure=compute_exposure(ds),
    )


# ==================== EXPOSURE ====================

@dataclass(frozen=True)
class ExposureCoverage:
    exposure: int
    covered: Tuple[str, ...]
    uncovered: Tuple[str, ...]

    @property
    def coverage(self) -> float:
        n = len(self.covered) + len(self.uncovered)
        return len(self.covered) / n if n else 0.0


def exposure_coverage(ds: AttentionDataset) -> ExposureCoverage:
    covered, uncovered = [], []
    exposure = 0
    for uid in ds.tweeter_ids:
        profile = ds.profile(uid)
        if profile is None:
            uncovered.append(uid)
            continue
        covered.append(uid)
        exposure += profile.followers_count
    return ExposureCoverage(exposure=exposure, covered=tuple(covered), uncovered=tuple(uncovered))


def compute_exposure(ds: AttentionDataset) -> int:
    """Followers summed over distinct tweeters; users without a profile add 0"""
    cov = exposure_coverage(ds)
    if cov.uncovered:
        logger.warning("%d of %d tweeters have no profile; exposure counts them as 0",
                       len(cov.uncovered), len(cov.covered) + len(cov.uncovered))
    return cov.exposure


# ==================== PROFILES & TEXT ====================

def bio_coverage(ds: AttentionDataset, user_ids: Iterable[str]) -> float:
    """Share of the given users whose profile carries a non-empty bio"""
    ids = list(dict.fromkeys(user_ids))
    if not ids:
        return 0.0
    with_bio = sum(1 for uid in ids if (p := ds.profile(uid)) is not None and p.bio)
    return with_bio / len(ids)


def mentioned_user_ids(ds: AttentionDataset) -> Tuple[str, ...]:
    """Distinct structured mention targets, in first-mention order"""
    return tuple(dict.fromkeys(uid for ev in ds.events for uid in ev.mentioned_user_ids))


def hashtag_counts(ds: AttentionDataset) -> List[Tuple[str, int]]:
    counts = Counter(tag.lower() for ev in ds.events for tag in HASHTAG.findall(ev.text or ""))
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


# ==================== BATCH ====================

def select_conversational(summaries: Sequence[Tuple[str, EngagementSummary]]) -> List[str]:
    """Papers whose conversational index strictly beats the informative one"""
    return [paper_id for paper_id, s in summaries if s.ct_index > s.it_index]


SUMMARY_CSV_FIELDS = ["paper_id"] + [f.name for f in fields(EngagementSummary)]


def summaries_to_csv(summaries: Sequence[Tuple[str, EngagementSummary]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SUMMARY_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for paper_id, s in summaries:
        writer.writerow({"paper_id": paper_id, **s.to_dict()})
    return buf.getvalue()
