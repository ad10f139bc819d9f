"""
Run configuration.

Precedence, highest first: command-line flags, the ATTENTION_OUTPUT_DIR
environment variable (output directory only; a .env file is honoured),
a JSON config file, then the defaults in config/settings.py.

Config file example:
    {
      "events": "data/reference_case_events.jsonl",
      "paper": "data/reference_case_paper.json",
      "seed": 7,
      "timeline_width": "week",
      "layout": {"iterations": 200, "bh_theta": 1.2}
    }
"""

import json
import logging
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError

from config.settings import (
    DEFAULT_DORMANCY_DAYS,
    DEFAULT_LOG_BASE,
    DEFAULT_MIN_FREQUENCY,
    DEFAULT_NGRAM_MAX,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_RESOLUTION,
    DEFAULT_SEED,
    DEFAULT_TIMELINE_WIDTH,
    DEFAULT_TOP_K,
    EXPORT_FORMATS,
    INPUT_FORMATS,
    OUTPUT_DIR_ENV,
    REPORT_FORMATS,
    TIMELINE_WIDTHS,
)
from src.errors import ConfigError
from src.layout_engine.forceatlas2 import LayoutParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    events_path: Optional[str] = None
    profiles_path: Optional[str] = None
    paper_path: Optional[str] = None
    input_format: str = "jsonl"
    lenient: bool = False
    output_dir: str = DEFAULT_OUTPUT_DIR
    dormancy_threshold_days: int = DEFAULT_DORMANCY_DAYS
    timeline_width: str = DEFAULT_TIMELINE_WIDTH
    layout: LayoutParams = field(default_factory=LayoutParams)
    min_frequency: int = DEFAULT_MIN_FREQUENCY
    ngram_max: int = DEFAULT_NGRAM_MAX
    resolution: float = DEFAULT_RESOLUTION
    seed: int = DEFAULT_SEED
    report_formats: Tuple[str, ...] = REPORT_FORMATS
    export_formats: Tuple[str, ...] = EXPORT_FORMATS
    top_k: int = DEFAULT_TOP_K
    log_base: float = DEFAULT_LOG_BASE

    def __post_init__(self):
        checks = [
            (self.input_format in INPUT_FORMATS, f"format must be one of {INPUT_FORMATS}"),
            (self.dormancy_threshold_days > 0, "dormancy_threshold_days must be > 0"),
            (self.timeline_width in TIMELINE_WIDTHS, f"timeline_width must be one of {TIMELINE_WIDTHS}"),
            (self.min_frequency >= 1, "min_frequency must be >= 1"),
            (self.ngram_max in (1, 2), "ngram_max must be 1 or 2"),
            (self.resolution > 0, "resolution must be > 0"),
            (set(self.report_formats) <= set(REPORT_FORMATS), f"report formats must be among {REPORT_FORMATS}"),
            (set(self.export_formats) <= set(EXPORT_FORMATS), f"export formats must be among {EXPORT_FORMATS}"),
            (self.top_k >= 1, "top_k must be >= 1"),
            (self.log_base > 1, "log_base must be > 1"),
            (bool(self.output_dir), "output directory must not be empty"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    @property
    def layout_params(self) -> LayoutParams:
        """Layout parameters with the run seed"""
        return self.layout.with_overrides(seed=self.seed)

    def to_dict(self) -> Dict[str, Any]:
        """Effective configuration as embedded in reports; the output directory is left out"""
        data = {}
        for f in fields(self):
            if f.name == "output_dir":
                continue
            value = getattr(self, f.name)
            if f.name == "layout":
                value = self.layout_params.to_dict()
            elif isinstance(value, tuple):
                value = list(value)
            data[f.name] = value
        return data


class ConfigFile(BaseModel):
    """Schema of the JSON config file; keys mirror the long command-line flags"""
    model_config = ConfigDict(extra="forbid")

    events: Optional[str] = None
    profiles: Optional[str] = None
    paper: Optional[str] = None
    format: Optional[str] = None
    lenient: Optional[bool] = None
    output_dir: Optional[str] = None
    dormancy_threshold_days: Optional[int] = None
    timeline_width: Optional[str] = None
    layout: Dict[str, Any] = {}
    min_frequency: Optional[int] = None
    ngram_max: Optional[int] = None
    resolution: Optional[float] = None
    seed: Optional[int] = None
    report_formats: Optional[List[str]] = None
    export_formats: Optional[List[str]] = None
    top_k: Optional[int] = None
    log_base: Optional[float] = None


# config-file / flag key -> RunConfig field
_FIELD_NAMES = {"events": "events_path", "profiles": "profiles_path", "paper": "paper_path", "format": "input_format"}


def load_config_file(path) -> Dict[str, Any]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e.msg}") from e
    try:
        parsed = ConfigFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ())) or "<root>"
        raise ConfigError(f"config file {path}: {where}: {first.get('msg', 'invalid')}") from e
    return parsed.model_dump(exclude_none=True)


def _merge(values: Dict[str, Any], layout: Dict[str, Any], overrides: Mapping[str, Any]):
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "layout":
            layout.update({k: v for k, v in value.items() if v is not None})
            continue
        name = _FIELD_NAMES.get(key, key)
        values[name] = tuple(value) if isinstance(value, list) else value


def resolve_run_config(cli: Optional[Mapping[str, Any]] = None, config_path=None,
                       env: Optional[Mapping[str, str]] = None) -> RunConfig:
    """
    Merge the configuration sources.

    `cli` holds flag values keyed like the config file (None = not given);
    its "layout" entry is a dict of LayoutParams overrides.
    """
    env = os.environ if env is None else env
    values: Dict[str, Any] = {}
    layout: Dict[str, Any] = {}

    if config_path is not None:
        _merge(values, layout, load_config_file(config_path))
    if env.get(OUTPUT_DIR_ENV):
        values["output_dir"] = env[OUTPUT_DIR_ENV]
    _merge(values, layout, cli or {})

    try:
        layout_params = LayoutParams(**layout)
    except TypeError as e:
        raise ConfigError(f"unknown layout parameter: {e}") from e
    values["layout"] = layout_params
    try:
        cfg = RunConfig(**values)
    except TypeError as e:
        raise ConfigError(f"unknown configuration key: {e}") from e
    logger.debug("Effective configuration: %s", cfg.to_dict())
    return cfg
