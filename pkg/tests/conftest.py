from datetime import date, datetime, timedelta, timezone

import pytest

from src.attention_data.models import AttentionDataset, PaperRecord, TweetEvent, UserProfile
from src.fixtures import reference_case, write_reference_case

T0 = datetime(2017, 1, 2, 12, 0, tzinfo=timezone.utc)


@pytest.fixture(scope="session")
def reference_ds():
    return reference_case()


@pytest.fixture(scope="session")
def reference_files(tmp_path_factory):
    return write_reference_case(tmp_path_factory.mktemp("reference"))


def make_event(event_id, user_id, day=0, text="", mentions=(), retweet_of=None, flag=None):
    return TweetEvent(
        event_id=event_id,
        user_id=user_id,
        timestamp=T0 + timedelta(days=day),
        text=text,
        mentioned_user_ids=tuple(mentions),
        retweet_of_user_id=retweet_of,
        is_retweet_flag=flag,
    )


def make_dataset(events, profiles=None, published=date(2016, 12, 1)):
    paper = PaperRecord(paper_id="p1", title="A paper", publication_date=published)
    return AttentionDataset(paper=paper, events=tuple(events), profiles=dict(profiles or {}))


def make_profile(user_id, followers=100, bio=None, handle=None):
    return UserProfile(user_id=user_id, handle=handle or f"h_{user_id}", bio=bio, followers_count=followers)
