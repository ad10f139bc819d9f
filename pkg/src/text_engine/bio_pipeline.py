"""
Bio Text Pipeline
=================
Six-step cleanup applied to profile bios (and tweet texts) before term mapping
and user typing:

  (a) lowercase            (d) strip punctuation and emoji
  (b) remove URLs, @mentions, #hashtags and digits
  (c) plural -> singular   (e) remove stopwords
                           (f) remove short and degenerate tokens ("kkk")

Usage:
    cfg = PipelineConfig.default()
    preprocess_bio("Amo minha VIDA! kkk", cfg)   # ['amo', 'vida']
"""

import re
import unicodedata
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Tuple

from config.settings import DEFAULT_MAX_REPEAT_RUN, DEFAULT_MIN_TOKEN_LENGTH, STOPWORDS_PATH
from src.errors import ConfigError

STEPS = ("a", "b", "c", "d", "e", "f")

_URL = re.compile(r"(?:https?://|www\.)\S+")
_MENTION = re.compile(r"@\w+")
_HASHTAG = re.compile(r"#\w+")
_LETTER_RUN = re.compile(r"[^\W\d_]+")
_EMOJI = re.compile(
    "["
    "\U0001F000-\U0001FAFF"  # pictographs, emoticons, transport, symbols
    "\U00002600-\U000027BF"  # misc symbols, dingbats
    "\U0000FE00-\U0000FE0F"  # variation selectors
    "\U0000200D"             # zero-width joiner
    "]+"
)
# "hahaha", "rsrsrs": a unit of one or two letters repeated three times or more
_STUTTER = re.compile(r"^(.{1,2})\1{2,}$")

# ==================== LEMMATIZATION ====================

_PLURAL_RULES = (
    ("ões", "ão"),
    ("ães", "ão"),
    ("ais", "al"),
    ("éis", "el"),
    ("óis", "ol"),
    ("éus", "éu"),
    ("res", "r"),
    ("zes", "z"),
)
_IRREGULAR_PLURALS = {"mães": "mãe", "meses": "mês", "gases": "gás"}
# Final s after a stressed vowel, in -us or in -ss belongs to the singular
_STRESSED_S = ("ás", "és", "ês", "ís", "ós", "ôs", "ús", "us")
_SINGULAR_S = _STRESSED_S + ("ss",)
MIN_STEM = 3


def singularize(token: str) -> str:
    """Rule-based Portuguese plural reduction: at most one rule per token, idempotent, never lengthens"""
    if not token.endswith("s"):
        return token
    if token in _IRREGULAR_PLURALS:
        return _IRREGULAR_PLURALS[token]
    for suffix, singular in _PLURAL_RULES:
        if token.endswith(suffix):
            candidate = token[: -len(suffix)] + singular
            return candidate if len(candidate) >= MIN_STEM else token
    if token.endswith(_SINGULAR_S):
        return token
    # países -> país, deuses -> deus; análises -> análise, interesses -> interesse
    if token.endswith("ses") and token[:-2].endswith(_STRESSED_S):
        candidate = token[:-2]
    else:
        candidate = token[:-1]
    return candidate if len(candidate) >= MIN_STEM else token


# ==================== CONFIG ====================

def load_stopwords(path) -> FrozenSet[str]:
    """One word per line, '#' starts a comment"""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read stopword file {path}: {e}") from e
    words = set()
    for line in lines:
        word = line.split("#", 1)[0].strip()
        if word:
            words.add(unicodedata.normalize("NFC", word))
    return frozenset(words)


@lru_cache(maxsize=None)
def _bundled_stopwords() -> FrozenSet[str]:
    return load_stopwords(STOPWORDS_PATH)


@dataclass(frozen=True)
class PipelineConfig:
    stopword_list: FrozenSet[str] = frozenset()
    min_token_length: int = DEFAULT_MIN_TOKEN_LENGTH
    max_repeat_run: int = DEFAULT_MAX_REPEAT_RUN
    enable_steps: Tuple[bool, ...] = (True,) * len(STEPS)

    def __post_init__(self):
        if self.min_token_length < 1:
            raise ConfigError("min_token_length must be >= 1")
        if self.max_repeat_run < 1:
            raise ConfigError("max_repeat_run must be >= 1")
        if len(self.enable_steps) != len(STEPS):
            raise ConfigError(f"enable_steps needs {len(STEPS)} flags")
        upper = sorted(w for w in self.stopword_list if w != w.lower())
        if upper:
            raise ConfigError(f"stopwords must be lowercase: {upper[:5]}")

    @classmethod
    def default(cls, extra_stopwords_path: Optional[str] = None, **overrides) -> "PipelineConfig":
        words = _bundled_stopwords()
        if extra_stopwords_path:
            words = words | load_stopwords(extra_stopwords_path)
        return cls(stopword_list=words, **overrides)

    def enabled(self, step: str) -> bool:
        return self.enable_steps[STEPS.index(step)]

    def without_step(self, step: str) -> "PipelineConfig":
        flags = list(self.enable_steps)
        flags[STEPS.index(step)] = False
        return replace(self, enable_steps=tuple(flags))


@dataclass(frozen=True)
class TokenizedBio:
    user_id: str
    tokens: Tuple[str, ...] = field(default_factory=tuple)


# ==================== PIPELINE ====================

def _strip_entities(text: str) -> str:
    text = _URL.sub(" ", text)
    text = _MENTION.sub(" ", text)
    text = _HASHTAG.sub(" ", text)
    return "".join(ch for ch in text if not unicodedata.category(ch).startswith("N"))


def _strip_symbols(text: str) -> str:
    text = _EMOJI.sub(" ", text)
    return "".join(ch if ch.isalpha() or ch.isspace() else " " for ch in text)


def _is_degenerate(token: str, max_run: int) -> bool:
    run = 1
    for prev, ch in zip(token, token[1:]):
        run = run + 1 if ch == prev else 1
        if run > max_run:
            return True
    return bool(_STUTTER.match(token))


def preprocess_bio(text: Optional[str], cfg: PipelineConfig) -> List[str]:
    """Run steps (a)-(f) and return the surviving tokens in order"""
    if not text:
        return []
    text = unicodedata.normalize("NFC", text)

    if cfg.enabled("a"):
        text = text.lower()
    if cfg.enabled("b"):
        text = _strip_entities(text)
    if cfg.enabled("c"):
        # Stopwords keep their own form so that step (e) matches them exactly
        keep = cfg.stopword_list if cfg.enabled("e") else frozenset()
        text = _LETTER_RUN.sub(lambda m: m.group() if m.group() in keep else singularize(m.group()), text)
    if cfg.enabled("d"):
        text = _strip_symbols(text)

    tokens = text.split()

    if cfg.enabled("e"):
        tokens = [t for t in tokens if t not in cfg.stopword_list]
    if cfg.enabled("f"):
        tokens = [t for t in tokens
                  if len(t) >= cfg.min_token_length and not _is_degenerate(t, cfg.max_repeat_run)]
    return tokens


def tokenize_bio(user_id: str, text: Optional[str], cfg: PipelineConfig) -> TokenizedBio:
    return TokenizedBio(user_id=user_id, tokens=tuple(preprocess_bio(text, cfg)))


def tokenize_bios(items: Iterable[Tuple[str, Optional[str]]], cfg: PipelineConfig) -> List[TokenizedBio]:
    return [tokenize_bio(uid, text, cfg) for uid, text in items]
