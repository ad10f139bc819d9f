"""
Row schemas for the input files.

Each row of an events / profiles file and the paper document is validated
by one of these models before it becomes a domain record.
"""

import re
from datetime import date, datetime, timezone
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

from config.settings import LIST_SEPARATOR
from src.attention_data.models import PaperRecord, TweetEvent, UserProfile


_PARTIAL_DATE = re.compile(r"^(\d{4})(?:-(\d{2}))?(?:-(\d{2}))?$")


def _blank_to_none(value):
    if isinstance(value, str) and not value.strip():
        return None
    return value


def _split_list(value):
    if value is None:
        return []
    if isinstance(value, str):
        return [part.strip() for part in value.split(LIST_SEPARATOR) if part.strip()]
    return value


class EventRow(BaseModel):
    """One line of the events file"""
    model_config = ConfigDict(extra="ignore")

    event_id: str = Field(..., min_length=1)
    user_id: str = Field(..., min_length=1)
    timestamp: datetime
    text: str = ""
    mentioned_user_ids: List[str] = Field(default_factory=list)
    retweet_of_user_id: Optional[str] = None
    is_retweet: Optional[bool] = None

    @field_validator("mentioned_user_ids", mode="before")
    @classmethod
    def _parse_list(cls, value):
        return _split_list(value)

    @field_validator("retweet_of_user_id", "is_retweet", mode="before")
    @classmethod
    def _blank(cls, value):
        return _blank_to_none(value)

    @field_validator("text", mode="before")
    @classmethod
    def _text(cls, value):
        return "" if value is None else value

    @field_validator("timestamp")
    @classmethod
    def _to_utc(cls, value: datetime) -> datetime:
        if value.tzinfo is None:
            value = value.replace(tzinfo=timezone.utc)
        return value.astimezone(timezone.utc).replace(microsecond=0)

    @field_validator("is_retweet")
    @classmethod
    def _retweet_flag_consistent(cls, value, info: ValidationInfo):
        if value is False and info.data.get("retweet_of_user_id") is not None:
            raise ValueError("is_retweet is false but retweet_of_user_id is set")
        return value

    def to_record(self) -> TweetEvent:
        return TweetEvent(
            event_id=self.event_id,
            user_id=self.user_id,
            timestamp=self.timestamp,
            text=self.text,
            mentioned_user_ids=tuple(self.mentioned_user_ids),
            retweet_of_user_id=self.retweet_of_user_id,
            is_retweet_flag=self.is_retweet,
        )


class ProfileRow(BaseModel):
    """One line of the profiles file"""
    model_config = ConfigDict(extra="ignore")

    user_id: str = Field(..., min_length=1)
    handle: str = ""
    bio: Optional[str] = None
    followers_count: int = Field(0, ge=0)
    language_hint: Optional[str] = None

    @field_validator("bio", "language_hint", mode="before")
    @classmethod
    def _blank(cls, value):
        return _blank_to_none(value)

    @field_validator("handle", mode="before")
    @classmethod
    def _handle(cls, value):
        return "" if value is None else value

    def to_record(self) -> UserProfile:
        return UserProfile(
            user_id=self.user_id,
            handle=self.handle,
            bio=self.bio,
            followers_count=self.followers_count,
            language_hint=self.language_hint,
        )


class PaperRow(BaseModel):
    """The paper document"""
    model_config = ConfigDict(extra="ignore")

    paper_id: str = Field(..., min_length=1)
    title: str = ""
    publication_date: str
    doi: Optional[str] = None

    @field_validator("publication_date", mode="before")
    @classmethod
    def _date_text(cls, value):
        if isinstance(value, date):
            return value.isoformat()
        if isinstance(value, int):
            return str(value)
        return value

    @field_validator("publication_date")
    @classmethod
    def _valid_date(cls, value: str) -> str:
        parse_partial_date(value)
        return value.strip()

    @field_validator("doi", mode="before")
    @classmethod
    def _blank(cls, value):
        return _blank_to_none(value)

    def to_record(self) -> PaperRecord:
        published, precision = parse_partial_date(self.publication_date)
        return PaperRecord(
            paper_id=self.paper_id,
            title=self.title,
            publication_date=published,
            doi=self.doi,
            date_precision=precision,
        )


def parse_partial_date(text: str):
    """'2002' -> (2002-01-01, 'year'); '2002-03' -> (2002-03-01, 'month')"""
    match = _PARTIAL_DATE.match(str(text).strip())
    if not match:
        raise ValueError(f"not a date: {text!r}")
    year, month, day = match.groups()
    if day is not None:
        return date(int(year), int(month), int(day)), "day"
    if month is not None:
        return date(int(year), int(month), 1), "month"
    return date(int(year), 1, 1), "year"


def format_partial_date(value: date, precision: str) -> str:
    if precision == "year":
        return f"{value.year:04d}"
    if precision == "month":
        return f"{value.year:04d}-{value.month:02d}"
    return value.isoformat()
