#!/usr/bin/env python3
"""
Attention Network Analytics
===========================
Who talked about one paper on Twitter, to whom, and when.

Components:
- Attention Data: ingest, validation and canonical form
- Engagement: tweet kinds, CT/IT indices, exposure, life span
- Network: interaction graph, roles, statistics, exports
- Layout Engine: ForceAtlas2 with Barnes-Hut repulsion
- Term Map: bio terms, association strength, modularity clusters
- Report: consolidated report, manifest and CLI

Usage:
  python main.py fixture --output-dir data
  python main.py report --events data/reference_case_events.jsonl \\
      --profiles data/reference_case_profiles.jsonl --paper data/reference_case_paper.json
  python main.py --help
"""

import sys

from src.report.cli import run_command

if __name__ == "__main__":
    sys.exit(run_command(sys.argv[1:]))
