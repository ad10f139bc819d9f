import json
import time
from pathlib import Path

import pytest

from src.attention_data import dataset_files
from src.errors import ConfigError
from src.report import (
    MANIFEST_NAME,
    NO_INTERACTIONS,
    ArtifactBundle,
    generate_report,
    render_text,
    resolve_run_config,
    run_command,
    verify_manifest,
)
from src.report.run_config import RunConfig
from tests.conftest import make_dataset, make_event

FAST = ["--iterations", "20"]


def reference_args(files):
    return ["--events", str(files["events"]), "--profiles", str(files["profiles"]),
            "--paper", str(files["paper"])]


def write_dataset(directory, ds):
    paths = {}
    for name, data in dataset_files(ds).items():
        path = directory / name
        path.write_bytes(data)
        paths[name.split(".")[0]] = path
    return paths


# ==================== END TO END ====================

def test_fixture_then_report_is_reproducible(tmp_path):
    assert run_command(["-q", "fixture", "--output-dir", str(tmp_path / "data")]) == 0
    data = tmp_path / "data"
    files = {k: data / f"reference_case_{k}.{ext}" for k, ext in
             (("events", "jsonl"), ("profiles", "jsonl"), ("paper", "json"))}
    assert all(p.is_file() for p in files.values())

    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        code = run_command(["-q", "report", *reference_args(files), *FAST, "--output-dir", str(out)])
        assert code == 0
        assert verify_manifest(out) == []
        outputs.append(out)

    a, b = outputs
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / MANIFEST_NAME).read_bytes() == (b / MANIFEST_NAME).read_bytes()

    report = json.loads((a / "report.json").read_text(encoding="utf-8"))
    assert report["engagement"]["total_tweets"] == 736
    assert report["graph"]["node_count"] == 242
    assert report["graph"]["diameter"] == 6
    assert report["layout"]["steps"] == 20
    assert report["config"]["layout"]["iterations"] == 20
    assert "Attention report" in (a / "report.txt").read_text(encoding="utf-8")


def test_two_default_reports_within_time_budget(tmp_path, reference_files):
    started = time.perf_counter()
    for run in ("a", "b"):
        out = tmp_path / run
        assert run_command(["-q", "report", *reference_args(reference_files), "--output-dir", str(out)]) == 0
    assert time.perf_counter() - started < 30.0
    assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()
    report = json.loads((tmp_path / "a" / "report.json").read_text(encoding="utf-8"))
    assert report["layout"]["steps"] == 1000


@pytest.mark.parametrize("command, produced", [
    ("ingest", "diagnostics.json"),
    ("summary", "summary.json"),
    ("graph", "graph.json"),
])
def test_single_commands(tmp_path, reference_files, command, produced):
    out = tmp_path / "out"
    assert run_command(["-q", command, *reference_args(reference_files), "--output-dir", str(out)]) == 0
    assert (out / produced).is_file()
    manifest = json.loads((out / MANIFEST_NAME).read_text(encoding="utf-8"))
    assert manifest["command"] == command
    assert produced in [f["name"] for f in manifest["files"]]


# ==================== EXIT CODES ====================

def test_usage_errors(tmp_path):
    assert run_command(["summary", "--output-dir", str(tmp_path)]) == 2
    assert run_command(["no-such-command"]) == 2
    assert run_command([]) == 2
    assert not (tmp_path / MANIFEST_NAME).exists()


def test_missing_file_fails(tmp_path, reference_files):
    args = ["summary", "--events", str(tmp_path / "missing.jsonl"), "--paper", str(reference_files["paper"]),
            "--output-dir", str(tmp_path / "out")]
    assert run_command(args) == 1
    assert not (tmp_path / "out").exists()


def test_empty_events_fail(tmp_path, reference_files):
    events = tmp_path / "events.jsonl"
    events.write_text("", encoding="utf-8")
    args = ["summary", "--events", str(events), "--paper", str(reference_files["paper"]),
            "--output-dir", str(tmp_path / "out")]
    assert run_command(args) == 1


def test_bad_config_file_fails(tmp_path, reference_files):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"colour": "blue"}), encoding="utf-8")
    assert run_command(["summary", *reference_args(reference_files), "--config", str(cfg)]) == 1


def test_unwritable_output_dir_fails(tmp_path):
    blocker = tmp_path / "taken"
    blocker.write_text("keep", encoding="utf-8")
    assert run_command(["-q", "fixture", "--output-dir", str(blocker)]) == 1
    assert blocker.read_text(encoding="utf-8") == "keep"


# ==================== CONFIG ====================

def test_config_precedence(tmp_path):
    cfg_file = tmp_path / "run.json"
    cfg_file.write_text(json.dumps({"output_dir": "from-file", "seed": 1, "layout": {"gravity": 3.0}}),
                        encoding="utf-8")

    cfg = resolve_run_config({}, cfg_file, env={})
    assert (cfg.output_dir, cfg.seed, cfg.layout.gravity) == ("from-file", 1, 3.0)

    cfg = resolve_run_config({}, cfg_file, env={"ATTENTION_OUTPUT_DIR": "from-env"})
    assert cfg.output_dir == "from-env"

    cli = {"output_dir": "from-cli", "seed": None, "layout": {"gravity": 0.5, "iterations": None}}
    cfg = resolve_run_config(cli, cfg_file, env={"ATTENTION_OUTPUT_DIR": "from-env"})
    assert (cfg.output_dir, cfg.seed, cfg.layout.gravity) == ("from-cli", 1, 0.5)
    assert cfg.layout_params.seed == 1


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        resolve_run_config({"layout": {"warp": 9}}, env={})
    with pytest.raises(ConfigError):
        resolve_run_config({"timeline_width": "year"}, env={})
    with pytest.raises(ConfigError):
        resolve_run_config({}, tmp_path / "absent.json", env={})


# ==================== REPORT ====================

def test_no_interactions_status():
    ds = make_dataset([make_event("e1", "u1", 0, "just reading"), make_event("e2", "u2", 3, "worth a look")])
    report = generate_report(ds, RunConfig())
    assert report.data["graph"]["status"] == NO_INTERACTIONS
    assert report.data["layout"] == {"status": NO_INTERACTIONS}
    assert "graph.graphml" not in report.files
    assert NO_INTERACTIONS in report.to_text()


def test_text_shows_role_shares(reference_ds):
    cfg = RunConfig(layout=RunConfig().layout.with_overrides(iterations=5))
    text = generate_report(reference_ds, cfg).to_text()
    assert "50.4%" in text
    assert render_text({}).startswith("Attention report")


def test_report_files_written_from_dataset(tmp_path):
    ds = make_dataset([
        make_event("e1", "u1", 0, "@h_u2 look", mentions=("u2",)),
        make_event("e2", "u2", 1, "RT @h_u1: look", retweet_of="u1"),
    ])
    paths = write_dataset(tmp_path, ds)
    out = tmp_path / "out"
    assert run_command(["-q", "graph", "--events", str(paths["events"]), "--paper", str(paths["paper"]),
                        "--export-format", "dot", "--output-dir", str(out)]) == 0
    graph = json.loads((out / "graph.json").read_text(encoding="utf-8"))["graph"]
    assert graph["export_files"] == ["graph.dot"]
    assert (out / "graph.dot").is_file()
    assert not (out / "graph.graphml").exists()


def test_bundle_rejects_duplicates(tmp_path):
    bundle = ArtifactBundle(seed=1)
    bundle.add("a.txt", "x")
    with pytest.raises(ValueError):
        bundle.add("a.txt", "y")
    with pytest.raises(ValueError):
        bundle.add(MANIFEST_NAME, "{}")
    bundle.write(tmp_path)
    assert sorted(p.name for p in tmp_path.iterdir()) == ["a.txt", MANIFEST_NAME]
    (tmp_path / "a.txt").write_text("changed", encoding="utf-8")
    assert verify_manifest(tmp_path) == ["a.txt"]


def test_failed_write_leaves_nothing_behind(tmp_path, monkeypatch):
    bundle = ArtifactBundle(seed=1, command="summary")
    bundle.add("a.txt", "a")
    bundle.add("b.txt", "b")
    real_write = Path.write_bytes

    def disk_full(self, data):
        if self.name == "b.txt":
            raise OSError(28, "No space left on device")
        return real_write(self, data)

    monkeypatch.setattr(Path, "write_bytes", disk_full)
    fresh = tmp_path / "fresh"
    with pytest.raises(OSError):
        bundle.write(fresh)
    assert not fresh.exists()

    existing = tmp_path / "existing"
    existing.mkdir()
    (existing / "old.txt").write_text("old", encoding="utf-8")
    with pytest.raises(OSError):
        bundle.write(existing)
    assert sorted(p.name for p in existing.iterdir()) == ["old.txt"]
