"""
Keyword-based user typing from profile bios.

Rules come from a JSON file (array of {label, keywords}); the first rule, in
file order, whose keywords meet the preprocessed bio wins.
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from config.settings import USER_TYPE_RULES_PATH
from src.attention_data.models import UserProfile
from src.errors import ConfigError
from src.text_engine.bio_pipeline import PipelineConfig, preprocess_bio, singularize

USER_TYPE_LABELS = ("Scientist", "Practitioner", "Communicator", "Public", "Unknown")
UNKNOWN = "Unknown"
PUBLIC = "Public"


@dataclass(frozen=True)
class UserTypeRule:
    type_label: str
    keywords: Tuple[str, ...]


def _normalize_keyword(word: str) -> str:
    return singularize(word.strip().lower())


def build_rules(raw: Iterable[Dict]) -> List[UserTypeRule]:
    """Validate rule entries; keywords are matched in their singular form"""
    rules: List[UserTypeRule] = []
    owner: Dict[str, str] = {}
    for entry in raw:
        try:
            label = entry["label"]
            keywords = entry["keywords"]
        except (KeyError, TypeError) as e:
            raise ConfigError(f"user-type rule needs 'label' and 'keywords': {entry!r}") from e
        if label not in USER_TYPE_LABELS:
            raise ConfigError(f"unknown user-type label {label!r}")
        normalized = tuple(dict.fromkeys(_normalize_keyword(k) for k in keywords if k.strip()))
        for kw in normalized:
            if owner.setdefault(kw, label) != label:
                raise ConfigError(f"keyword {kw!r} is listed under both {owner[kw]} and {label}")
        rules.append(UserTypeRule(type_label=label, keywords=normalized))
    return rules


def load_rules(path=USER_TYPE_RULES_PATH) -> List[UserTypeRule]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot load user-type rules from {path}: {e}") from e
    if not isinstance(raw, list):
        raise ConfigError(f"{path}: expected a JSON array of rules")
    return build_rules(raw)


def classify_user_type(profile: Optional[UserProfile], rules: List[UserTypeRule],
                       cfg: Optional[PipelineConfig] = None) -> str:
    """Unknown without a usable bio, Public when no professional keyword hits"""
    if profile is None or not profile.bio:
        return UNKNOWN
    tokens = set(preprocess_bio(profile.bio, cfg or PipelineConfig.default()))
    if not tokens:
        return UNKNOWN
    for rule in rules:
        if tokens.intersection(rule.keywords):
            return rule.type_label
    return PUBLIC


def user_type_distribution(profiles: Iterable[Optional[UserProfile]], rules: List[UserTypeRule],
                           cfg: Optional[PipelineConfig] = None) -> Dict[str, int]:
    cfg = cfg or PipelineConfig.default()
    counts = Counter(classify_user_type(p, rules, cfg) for p in profiles)
    return {label: counts.get(label, 0) for label in USER_TYPE_LABELS}
