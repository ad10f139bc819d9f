"""
Dataset Loader - read and write attention datasets
Supports JSONL (canonical) and CSV with identical column names
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ValidationError

from config.settings import INPUT_FORMATS, LIST_SEPARATOR
from src.attention_data.models import AttentionDataset, Diagnostic, PaperRecord, TweetEvent, UserProfile
from src.attention_data.schemas import EventRow, PaperRow, ProfileRow, format_partial_date
from src.errors import DuplicateEventId, FileUnreadable, SchemaViolation

logger = logging.getLogger(__name__)

EVENT_FIELDS = ["event_id", "user_id", "timestamp", "text", "mentioned_user_ids",
                "retweet_of_user_id", "is_retweet"]
PROFILE_FIELDS = ["user_id", "handle", "bio", "followers_count", "language_hint"]
PAPER_FIELDS = ["paper_id", "title", "publication_date", "doi"]

TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise FileUnreadable(path, str(e)) from e


def _violation(err: ValidationError, row: int, source: str) -> SchemaViolation:
    first = err.errors()[0]
    loc = first.get("loc") or ()
    field = str(loc[0]) if loc else "<record>"
    return SchemaViolation(row=row, field=field, reason=first.get("msg", "invalid"), source=source)


class DatasetLoader:
    """Parse events, profiles and paper files into an AttentionDataset"""

    def __init__(self, fmt: str = "jsonl", strict: bool = True):
        if fmt not in INPUT_FORMATS:
            raise ValueError(f"format must be one of {INPUT_FORMATS}, got {fmt!r}")
        self.fmt = fmt
        self.strict = strict
        self.rejected: List[Diagnostic] = []

    # ==================== ROW SOURCES ====================

    def _rows(self, path) -> Iterator[Tuple[int, Dict]]:
        """Yield (row number, raw mapping); rows are numbered from 1"""
        text = _read_text(path)
        source = Path(path).name

        if self.fmt == "jsonl":
            for row, line in enumerate(text.splitlines(), 1):
                if not line.strip():
                    continue
                try:
                    data = json.loads(line)
                except json.JSONDecodeError as e:
                    self._reject(SchemaViolation(row, "<json>", e.msg, source))
                    continue
                if not isinstance(data, dict):
                    self._reject(SchemaViolation(row, "<json>", "expected an object", source))
                    continue
                yield row, data
        else:
            reader = csv.DictReader(io.StringIO(text, newline=""))
            for row, data in enumerate(reader, 1):
                yield row, data

    def _reject(self, violation: SchemaViolation):
        if self.strict:
            raise violation
        logger.warning("Skipping %s", violation)
        self.rejected.append(Diagnostic(
            code=type(violation).__name__,
            record=f"{violation.source or ''}:{violation.row}",
            message=str(violation),
        ))

    def _validated(self, schema, path) -> Iterator[Tuple[int, BaseModel]]:
        source = Path(path).name
        for row, data in self._rows(path):
            try:
                yield row, schema.model_validate(data)
            except ValidationError as e:
                self._reject(_violation(e, row, source))

    # ==================== FILES ====================

    def load_events(self, path) -> Tuple[TweetEvent, ...]:
        events: List[TweetEvent] = []
        seen = set()
        for row, parsed in self._validated(EventRow, path):
            if parsed.event_id in seen:
                if self.strict:
                    raise DuplicateEventId(parsed.event_id, row)
                logger.warning("Skipping duplicate event_id %s at row %d", parsed.event_id, row)
                self.rejected.append(Diagnostic("DuplicateEventId", parsed.event_id,
                                                f"row {row}: duplicate event_id"))
                continue
            seen.add(parsed.event_id)
            events.append(parsed.to_record())
        logger.debug("Loaded %d events from %s", len(events), path)
        return tuple(events)

    def load_profiles(self, path) -> Dict[str, UserProfile]:
        profiles: Dict[str, UserProfile] = {}
        if path is None:
            return profiles
        for row, parsed in self._validated(ProfileRow, path):
            if parsed.user_id in profiles:
                self._reject(SchemaViolation(row, "user_id", "duplicate user_id", Path(path).name))
                continue
            profiles[parsed.user_id] = parsed.to_record()
        logger.debug("Loaded %d profiles from %s", len(profiles), path)
        return profiles

    def load_paper(self, path) -> PaperRecord:
        text = _read_text(path)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaViolation(1, "<json>", e.msg, Path(path).name) from e
        try:
            return PaperRow.model_validate(data).to_record()
        except ValidationError as e:
            # A dataset without its paper is unusable, lenient or not
            raise _violation(e, 1, Path(path).name) from e

    def load(self, events_path, profiles_path, paper_path) -> AttentionDataset:
        self.rejected = []
        paper = self.load_paper(paper_path)
        events = self.load_events(events_path)
        profiles = self.load_profiles(profiles_path)
        if self.rejected:
            logger.warning("%d malformed rows were skipped", len(self.rejected))
        return AttentionDataset(paper=paper, events=events, profiles=profiles)


def parse_dataset(events_path, profiles_path: Optional[str], paper_path, fmt: str = "jsonl") -> AttentionDataset:
    """Strict load: the first malformed row raises SchemaViolation"""
    return DatasetLoader(fmt, strict=True).load(events_path, profiles_path, paper_path)


# ==================== SERIALIZATION ====================

def _event_dict(ev: TweetEvent) -> Dict:
    return {
        "event_id": ev.event_id,
        "user_id": ev.user_id,
        "timestamp": ev.timestamp.strftime(TIMESTAMP_FORMAT),
        "text": ev.text,
        "mentioned_user_ids": list(ev.mentioned_user_ids),
        "retweet_of_user_id": ev.retweet_of_user_id,
        "is_retweet": ev.is_retweet_flag,
    }


def _profile_dict(p: UserProfile) -> Dict:
    return {
        "user_id": p.user_id,
        "handle": p.handle,
        "bio": p.bio,
        "followers_count": p.followers_count,
        "language_hint": p.language_hint,
    }


def paper_dict(paper: PaperRecord) -> Dict:
    return {
        "paper_id": paper.paper_id,
        "title": paper.title,
        "publication_date": format_partial_date(paper.publication_date, paper.date_precision),
        "doi": paper.doi,
    }


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return LIST_SEPARATOR.join(value)
    return str(value)


def _jsonl(rows: List[Dict]) -> bytes:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows).encode("utf-8")


def _csv(rows: List[Dict], fields: List[str]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for r in rows:
        writer.writerow([_csv_cell(r[f]) for f in fields])
    return buf.getvalue().encode("utf-8")


def dataset_files(ds: AttentionDataset, fmt: str = "jsonl") -> Dict[str, bytes]:
    """Render a dataset as {file name: bytes}"""
    if fmt not in INPUT_FORMATS:
        raise ValueError(f"format must be one of {INPUT_FORMATS}, got {fmt!r}")
    events = [_event_dict(ev) for ev in ds.events]
    profiles = [_profile_dict(p) for p in ds.profiles.values()]
    paper = (json.dumps(paper_dict(ds.paper), ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    if fmt == "jsonl":
        return {"events.jsonl": _jsonl(events), "profiles.jsonl": _jsonl(profiles), "paper.json": paper}
    return {
        "events.csv": _csv(events, EVENT_FIELDS),
        "profiles.csv": _csv(profiles, PROFILE_FIELDS),
        "paper.json": paper,
    }


def serialize_dataset(ds: AttentionDataset, directory, fmt: str = "jsonl") -> Dict[str, Path]:
    """Write the dataset files; returns {role: path}"""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name, data in dataset_files(ds, fmt).items():
        path = out / name
        path.write_bytes(data)
        paths[name.split(".")[0]] = path
    return paths
