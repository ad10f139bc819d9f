"""
Command-line entry point.

    attention-network fixture --output-dir data
    attention-network summary --events data/reference_case_events.jsonl \\
        --profiles data/reference_case_profiles.jsonl --paper data/reference_case_paper.json
    attention-network report --config run.json -v

Exit codes: 0 success, 1 input/config/analysis error, 2 usage error.
Outputs go to the output directory together with manifest.json; nothing is
written when a command fails.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler

from config.settings import EXPORT_FORMATS, INPUT_FORMATS, OUTPUT_DIR_ENV, TIMELINE_WIDTHS, TOOL_NAME, TOOL_VERSION
from src.attention_data import DatasetLoader, canonicalize_dataset, dataset_files, validate_dataset
from src.attention_data.models import AttentionDataset, Diagnostic
from src.errors import AttentionError, InvalidDataset
from src.fixtures import reference_case_files
from src.report.artifacts import ArtifactBundle, json_bytes
from src.report.generator import ReportBuilder, generate_report
from src.report.run_config import RunConfig, resolve_run_config

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2

CONFIG_HELP = f"""
configuration:
  --config takes a JSON object whose keys mirror the long flags
  (events, profiles, paper, format, output_dir, seed, timeline_width,
  dormancy_threshold_days, min_frequency, ngram_max, resolution, top_k,
  log_base, report_formats, export_formats) plus a "layout" object of
  layout parameters. Flags override the file; {OUTPUT_DIR_ENV} (also read
  from .env) overrides the file's output_dir.
"""


class UsageError(Exception):
    """Bad invocation that argparse itself cannot detect"""


def configure_logging(verbose: bool = False, quiet: bool = False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_time=False, show_path=False)],
        force=True,
    )


# ==================== PARSER ====================

def _input_args(p: argparse.ArgumentParser):
    p.add_argument("--events", help="events file (JSONL or CSV)")
    p.add_argument("--profiles", help="profiles file")
    p.add_argument("--paper", help="paper JSON document")
    p.add_argument("--format", choices=INPUT_FORMATS, help="input format (default jsonl)")
    p.add_argument("--lenient", action="store_true", default=None, help="skip malformed rows instead of failing")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--output-dir", help="output directory")
    p.add_argument("--seed", type=int, help="random seed")


def _summary_args(p: argparse.ArgumentParser):
    p.add_argument("--dormancy-days", type=int, dest="dormancy_threshold_days", help="dormancy threshold in days")
    p.add_argument("--timeline-width", choices=TIMELINE_WIDTHS)


def _graph_args(p: argparse.ArgumentParser):
    p.add_argument("--export-format", action="append", choices=EXPORT_FORMATS, dest="export_formats",
                   help="graph export format (repeatable; default all)")
    p.add_argument("--top-k", type=int)
    p.add_argument("--log-base", type=float)


def _layout_args(p: argparse.ArgumentParser):
    p.add_argument("--iterations", type=int)
    p.add_argument("--theta", type=float, dest="bh_theta", help="Barnes-Hut theta; 0 = exact repulsion")
    p.add_argument("--gravity", type=float)
    p.add_argument("--scaling", type=float)
    p.add_argument("--linlog", action="store_true", default=None)
    p.add_argument("--progress", action="store_true", help="show a progress bar")


def _terms_args(p: argparse.ArgumentParser):
    p.add_argument("--min-frequency", type=int)
    p.add_argument("--ngram-max", type=int, choices=(1, 2))
    p.add_argument("--resolution", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Community-of-attention analysis for one shared paper",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    extras = {
        "ingest": ("validate and canonicalize the input files", []),
        "summary": ("engagement, life span and timeline", [_summary_args]),
        "graph": ("interaction graph, roles, statistics and exports", [_graph_args]),
        "layout": ("ForceAtlas2 layout of the interaction graph", [_layout_args]),
        "terms": ("term maps of sharer and mentioned-user bios", [_terms_args, _layout_args]),
        "report": ("everything above plus the consolidated report",
                   [_summary_args, _graph_args, _layout_args, _terms_args]),
    }
    for name, (help_text, adders) in extras.items():
        p = sub.add_parser(name, help=help_text, epilog=CONFIG_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        _input_args(p)
        for add in adders:
            add(p)

    p = sub.add_parser("fixture", help="write the deterministic reference case")
    p.add_argument("--output-dir", help="output directory")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--format", choices=INPUT_FORMATS, help="file format (default jsonl)")
    p.add_argument("--config", help="JSON config file")
    return parser


# ==================== CONFIG & INPUT ====================

_LAYOUT_FLAGS = ("iterations", "bh_theta", "gravity", "scaling", "linlog")
_RUN_FLAGS = ("events", "profiles", "paper", "format", "lenient", "output_dir", "seed",
              "dormancy_threshold_days", "timeline_width", "export_formats", "top_k", "log_base",
              "min_frequency", "ngram_max", "resolution")


def _cli_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    values = {name: getattr(args, name, None) for name in _RUN_FLAGS}
    values["layout"] = {name: getattr(args, name, None) for name in _LAYOUT_FLAGS}
    return values


def load_input(cfg: RunConfig) -> Tuple[AttentionDataset, List[Diagnostic]]:
    """Load, validate, canonicalize; diagnostics include rows skipped in lenient mode"""
    if not cfg.events_path or not cfg.paper_path:
        raise UsageError("--events and --paper are required (on the command line or in --config)")
    loader = DatasetLoader(cfg.input_format, strict=not cfg.lenient)
    raw = loader.load(cfg.events_path, cfg.profiles_path, cfg.paper_path)
    found = validate_dataset(raw)
    fatal = [d for d in found if d.fatal]
    if fatal:
        raise InvalidDataset(fatal)
    for d in found:
        logger.warning("%s %s: %s", d.code, d.record, d.message)
    return canonicalize_dataset(raw), loader.rejected + found


# ==================== COMMANDS ====================

def _ingest(ds: AttentionDataset, diagnostics: List[Diagnostic], cfg: RunConfig, bundle: ArtifactBundle):
    bundle.add_all(dataset_files(ds, cfg.input_format))
    bundle.add("diagnostics.json", json_bytes([d.to_dict() for d in diagnostics]))


def _summary(ds, cfg, bundle, args):
    builder = ReportBuilder(ds, cfg)
    bundle.add("summary.json", json_bytes({"seed": cfg.seed, **builder.summary_section()}))
    bundle.add_all(builder.files)


def _graph(ds, cfg, bundle, args):
    builder = ReportBuilder(ds, cfg)
    bundle.add("graph.json", json_bytes({"seed": cfg.seed, "graph": builder.graph_section()}))
    bundle.add_all(builder.files)


def _layout(ds, cfg, bundle, args):
    builder = ReportBuilder(ds, cfg)
    bundle.add("layout.json", json_bytes({"seed": cfg.seed, "layout": builder.layout_section(args.progress)}))
    bundle.add_all(builder.files)


def _terms(ds, cfg, bundle, args):
    builder = ReportBuilder(ds, cfg)
    bundle.add("terms.json", json_bytes({"seed": cfg.seed, "term_maps": builder.terms_section()}))
    bundle.add_all(builder.files)


def _report(ds, cfg, bundle, args):
    report = generate_report(ds, cfg, progress=args.progress)
    if "json" in cfg.report_formats:
        bundle.add("report.json", report.to_json())
    if "text" in cfg.report_formats:
        bundle.add("report.txt", report.to_text())
        if not args.quiet:
            Console().print(report.to_text(), markup=False, highlight=False)
    bundle.add_all(report.files)


HANDLERS = {"summary": _summary, "graph": _graph, "layout": _layout,
            "terms": _terms, "report": _report}


def _fixture(cfg: RunConfig) -> ArtifactBundle:
    bundle = ArtifactBundle(cfg.seed, {"seed": cfg.seed, "format": cfg.input_format}, command="fixture")
    bundle.add_all(reference_case_files(cfg.seed, cfg.input_format))
    return bundle


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one subcommand, return the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    configure_logging(args.verbose, args.quiet)
    load_dotenv()
    stderr = Console(stderr=True)

    try:
        cfg = resolve_run_config(_cli_overrides(args), args.config)
        if args.command == "fixture":
            bundle = _fixture(cfg)
        else:
            ds, diagnostics = load_input(cfg)
            bundle = ArtifactBundle(cfg.seed, cfg.to_dict(), command=args.command)
            if args.command == "ingest":
                _ingest(ds, diagnostics, cfg, bundle)
            else:
                HANDLERS[args.command](ds, cfg, bundle, args)
        manifest = bundle.write(cfg.output_dir)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        stderr.print(f"{TOOL_NAME}: error: {e}", markup=False, highlight=False)
        return EXIT_USAGE
    except AttentionError as e:
        stderr.print(f"error: {type(e).__name__}: {e}", markup=False, highlight=False)
        if isinstance(e, InvalidDataset):
            for d in e.diagnostics:
                stderr.print(f"  {d.code} {d.record}: {d.message}", markup=False, highlight=False)
        return EXIT_ERROR
    except OSError as e:
        stderr.print(f"error: {type(e).__name__}: {e}", markup=False, highlight=False)
        return EXIT_ERROR

    logger.info("Manifest: %s", manifest)
    return EXIT_OK


def main(argv: Optional[List[str]] = None):
    sys.exit(run_command(argv))
