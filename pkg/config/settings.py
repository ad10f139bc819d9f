"""
Attention Network Analytics - Configuration
"""

from datetime import datetime, timezone
from pathlib import Path

CONFIG_DIR = Path(__file__).resolve().parent

TOOL_NAME = "attention-network"
TOOL_VERSION = "1.0.0"

# Bundled data files
STOPWORDS_PATH = CONFIG_DIR / "stopwords_pt.txt"
USER_TYPE_RULES_PATH = CONFIG_DIR / "user_type_rules.json"

# Ingest
INPUT_FORMATS = ("jsonl", "csv")
LIST_SEPARATOR = "|"
# Events older than Twitter itself are rejected by validation
DEFAULT_EPOCH = datetime(2006, 3, 21, tzinfo=timezone.utc)

# Engagement
DEFAULT_DORMANCY_DAYS = 365
TIMELINE_WIDTHS = ("day", "week", "month")
DEFAULT_TIMELINE_WIDTH = "month"
PERCENT_DECIMALS = 2

# Network
EXPORT_FORMATS = ("graphml", "dot", "edges_csv")
DEFAULT_LOG_BASE = 10.0
DEFAULT_TOP_K = 10
DEGREE_THRESHOLDS = (1, 2)

# Text pipeline
DEFAULT_MIN_TOKEN_LENGTH = 3
DEFAULT_MAX_REPEAT_RUN = 2

# Term map
DEFAULT_MIN_FREQUENCY = 2
DEFAULT_NGRAM_MAX = 2
DEFAULT_RESOLUTION = 1.0
# Term graphs up to this size are laid out with exact repulsion
TERM_LAYOUT_EXACT_MAX_NODES = 500

# ForceAtlas2; "approximation" is the Barnes-Hut theta
LAYOUT_DEFAULTS = {
    "gravity": 1.0,
    "bh_theta": 1.2,
    "scaling": 2.0,
    "dissuade_hubs": True,
    "prevent_overlap": True,
    "linlog": False,
    "iterations": 1000,
    "speed_constant": 0.1,
    "max_displacement": 10.0,
    "jitter_tolerance": 1.0,
    "overlap_repulsion": 100.0,
    "default_radius": 1.0,
    "init_extent": 100.0,
}

# Run
DEFAULT_SEED = 42
REPORT_FORMATS = ("json", "text")
OUTPUT_DIR_ENV = "ATTENTION_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "output"
