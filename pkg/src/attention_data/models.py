"""
Attention Dataset Model
=======================
Canonical records for one paper's social-sharing activity:
the paper itself, every sharing event, and the profiles of the users involved.

All records are frozen; transformations return new datasets.
"""

from dataclasses import dataclass, field
from datetime import date, datetime
from typing import Dict, Optional, Tuple


DATE_PRECISIONS = ("day", "month", "year")


@dataclass(frozen=True)
class PaperRecord:
    """The focal article"""
    paper_id: str
    title: str
    publication_date: date
    doi: Optional[str] = None
    # "year" or "month" when the input date was completed to Jan 1 / day 1
    date_precision: str = "day"

    @property
    def is_completed_date(self) -> bool:
        return self.date_precision != "day"


@dataclass(frozen=True)
class TweetEvent:
    """One sharing event"""
    event_id: str
    user_id: str
    timestamp: datetime
    text: str = ""
    mentioned_user_ids: Tuple[str, ...] = ()
    retweet_of_user_id: Optional[str] = None
    is_retweet_flag: Optional[bool] = None

    @property
    def sort_key(self) -> Tuple[datetime, str]:
        return (self.timestamp, self.event_id)


@dataclass(frozen=True)
class UserProfile:
    """A user's public profile at collection time"""
    user_id: str
    handle: str
    bio: Optional[str] = None
    followers_count: int = 0
    language_hint: Optional[str] = None


@dataclass(frozen=True)
class AttentionDataset:
    """Everything known about the attention one paper received"""
    paper: PaperRecord
    events: Tuple[TweetEvent, ...] = ()
    profiles: Dict[str, UserProfile] = field(default_factory=dict)

    @property
    def tweeter_ids(self) -> Tuple[str, ...]:
        """Distinct authors, in first-event order"""
        return tuple(dict.fromkeys(ev.user_id for ev in self.events))

    def profile(self, user_id: str) -> Optional[UserProfile]:
        return self.profiles.get(user_id)

    def handle_index(self) -> Dict[str, str]:
        """Lowercase handle -> user_id"""
        return {p.handle.lower().lstrip("@"): uid for uid, p in self.profiles.items() if p.handle}

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class Diagnostic:
    """A violated dataset invariant"""
    code: str
    record: str
    message: str
    fatal: bool = True

    def to_dict(self) -> Dict:
        return {"code": self.code, "record": self.record, "message": self.message, "fatal": self.fatal}
