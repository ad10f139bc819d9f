"""
Dataset validation and canonicalization.
"""

from collections import Counter
from dataclasses import replace
from datetime import datetime
from typing import List

from config.settings import DEFAULT_EPOCH
from src.attention_data.models import AttentionDataset, Diagnostic, TweetEvent


def validate_dataset(ds: AttentionDataset, epoch: datetime = DEFAULT_EPOCH) -> List[Diagnostic]:
    """One diagnostic per violated invariant; empty list means the dataset is valid and canonical"""
    diagnostics: List[Diagnostic] = []

    if not ds.paper.paper_id:
        diagnostics.append(Diagnostic("EmptyPaperId", "paper", "paper_id is empty"))

    counts = Counter(ev.event_id for ev in ds.events)
    for event_id, n in counts.items():
        if n > 1:
            diagnostics.append(Diagnostic("DuplicateEventId", event_id, f"event_id occurs {n} times"))

    for ev in ds.events:
        if not ev.event_id:
            diagnostics.append(Diagnostic("EmptyEventId", repr(ev.event_id), "event_id is empty"))
        if ev.timestamp.tzinfo is None:
            diagnostics.append(Diagnostic("NaiveTimestamp", ev.event_id, "timestamp has no timezone"))
        elif ev.timestamp < epoch:
            diagnostics.append(Diagnostic("EventBeforeEpoch", ev.event_id,
                                          f"timestamp {ev.timestamp.isoformat()} is before {epoch.date()}"))
        if ev.retweet_of_user_id is not None and ev.is_retweet_flag is False:
            diagnostics.append(Diagnostic("RetweetFlagConflict", ev.event_id,
                                          "retweet_of_user_id is set but is_retweet is false"))
        if len(set(ev.mentioned_user_ids)) != len(ev.mentioned_user_ids):
            diagnostics.append(Diagnostic("DuplicateMention", ev.event_id,
                                          "mentioned_user_ids has duplicates", fatal=False))
        if ev.user_id in ev.mentioned_user_ids:
            diagnostics.append(Diagnostic("SelfMention", ev.event_id,
                                          "user mentions themself", fatal=False))

    keys = [ev.sort_key for ev in ds.events if ev.timestamp.tzinfo is not None]
    if keys != sorted(keys):
        diagnostics.append(Diagnostic("UnsortedEvents", "events",
                                      "events are not ordered by (timestamp, event_id)", fatal=False))

    for user_id, profile in ds.profiles.items():
        if profile.user_id != user_id:
            diagnostics.append(Diagnostic("ProfileKeyMismatch", user_id,
                                          f"profile is keyed as {user_id} but has user_id {profile.user_id}"))
        if profile.followers_count < 0:
            diagnostics.append(Diagnostic("NegativeFollowers", user_id,
                                          f"followers_count is {profile.followers_count}"))

    return diagnostics


def has_fatal(diagnostics: List[Diagnostic]) -> bool:
    return any(d.fatal for d in diagnostics)


def _canonical_event(ev: TweetEvent) -> TweetEvent:
    # dict.fromkeys keeps the first occurrence
    mentions = tuple(uid for uid in dict.fromkeys(ev.mentioned_user_ids) if uid != ev.user_id)
    text = ev.text or ""
    return replace(
        ev,
        text=text,
        mentioned_user_ids=mentions,
        timestamp=ev.timestamp.replace(microsecond=0),
    )


def canonicalize_dataset(ds: AttentionDataset) -> AttentionDataset:
    """Sorted events, clean mention lists, profiles keyed in user_id order; idempotent"""
    events = sorted((_canonical_event(ev) for ev in ds.events), key=lambda e: e.sort_key)
    profiles = {}
    for user_id in sorted(ds.profiles):
        p = ds.profiles[user_id]
        bio = p.bio if p.bio and p.bio.strip() else None
        lang = p.language_hint if p.language_hint and p.language_hint.strip() else None
        profiles[user_id] = replace(p, bio=bio, language_hint=lang)
    return AttentionDataset(paper=ds.paper, events=tuple(events), profiles=profiles)
