"""Run manifests: enough metadata to reproduce any experiment byte for byte."""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


class RunManifest:
    def __init__(self, command: str, params: dict, master_seed: int, version: str):
        self.command = command
        self.params = params
        self.master_seed = master_seed
        self.version = version
        self.started = utc_now()
        self.finished: str | None = None
        self.outputs: dict[str, str] = {}

    def add_output(self, path) -> None:
        self.outputs[str(path)] = _sha256(path)

    def finish(self) -> None:
        self.finished = utc_now()

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "master_seed": self.master_seed,
            "version": self.version,
            "started": self.started,
            "finished": self.finished,
            "outputs": self.outputs,
        }

    def write(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")


def manifest_path_for(output_path) -> Path:
    p = Path(output_path)
    return p.with_name(p.name + ".manifest.json")
