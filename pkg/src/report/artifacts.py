"""
Output bundle: every file of a run is staged in memory and written together
with manifest.json, so a failed run leaves nothing behind.
"""

import hashlib
import json
import logging
import os
import shutil
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from config.settings import TOOL_NAME, TOOL_VERSION

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def json_bytes(data: Any) -> bytes:
    return (json.dumps(data, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


class ArtifactBundle:
    """Named output files plus the manifest that lists them"""

    def __init__(self, seed: int, config: Optional[Mapping[str, Any]] = None, command: str = ""):
        self.seed = seed
        self.config = dict(config or {})
        self.command = command
        self._files: Dict[str, bytes] = {}

    def add(self, name: str, data: Union[str, bytes]):
        if name == MANIFEST_NAME or name in self._files:
            raise ValueError(f"duplicate output file name: {name}")
        self._files[name] = data.encode("utf-8") if isinstance(data, str) else data

    def add_all(self, files: Mapping[str, Union[str, bytes]]):
        for name, data in files.items():
            self.add(name, data)

    @property
    def names(self) -> List[str]:
        return sorted(self._files)

    def __getitem__(self, name: str) -> bytes:
        return self._files[name]

    def __len__(self) -> int:
        return len(self._files)

    def manifest(self) -> Dict[str, Any]:
        return {
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
            "files": [
                {"name": name, "sha256": sha256_hex(self._files[name]), "bytes": len(self._files[name])}
                for name in self.names
            ],
        }

    def write(self, directory) -> Path:
        """
        Write every file, then the manifest; returns the manifest path.

        Files are staged in a hidden directory inside the target and moved into
        place only once all of them are on disk; on failure the staging
        directory is removed and the target is left as it was.
        """
        out = Path(directory)
        created = not out.exists()
        out.mkdir(parents=True, exist_ok=True)
        staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=out))
        names = self.names + [MANIFEST_NAME]
        try:
            for name in self.names:
                path = staging / name
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_bytes(self._files[name])
            (staging / MANIFEST_NAME).write_bytes(json_bytes(self.manifest()))
            for name in names:
                (out / name).parent.mkdir(parents=True, exist_ok=True)
                os.replace(staging / name, out / name)
        except OSError:
            shutil.rmtree(staging, ignore_errors=True)
            if created:
                shutil.rmtree(out, ignore_errors=True)
            raise
        shutil.rmtree(staging, ignore_errors=True)
        logger.info("Wrote %d files and %s to %s", len(self._files), MANIFEST_NAME, out)
        return out / MANIFEST_NAME


def verify_manifest(directory) -> List[str]:
    """Names of manifest entries whose file is missing or whose hash no longer matches"""
    out = Path(directory)
    manifest = json.loads((out / MANIFEST_NAME).read_text(encoding="utf-8"))
    bad = []
    for entry in manifest["files"]:
        path = out / entry["name"]
        if not path.is_file() or sha256_hex(path.read_bytes()) != entry["sha256"]:
            bad.append(entry["name"])
    return bad
