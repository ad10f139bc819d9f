# Report - run configuration, output bundle, consolidated report and CLI
from src.report.run_config import ConfigFile, RunConfig, load_config_file, resolve_run_config
from src.report.artifacts import MANIFEST_NAME, ArtifactBundle, sha256_hex, verify_manifest
from src.report.generator import NO_INTERACTIONS, Report, ReportBuilder, generate_report, render_text
from src.report.cli import build_parser, run_command
