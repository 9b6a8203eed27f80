"""Run manifests: enough to replay any pipeline command bit-identically.

A manifest records the command, the fully resolved configuration (hashed for
quick comparison), the seed, and SHA-256 fingerprints of every input file.
Timestamps are deliberately omitted so manifests themselves are byte-stable.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def config_hash(config: dict[str, Any]) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True).encode("utf-8")).hexdigest()


def write_run_manifest(
    path: str | Path,
    command: str,
    config: dict[str, Any],
    seed: int | None,
    inputs: list[str | Path],
) -> Path:
    manifest = {
        "manifest_version": 1,
        "command": command,
        "config": config,
        "config_sha256": config_hash(config),
        "seed": seed,
        "inputs": [
            {"path": str(p), "sha256": _sha256_file(Path(p))} for p in inputs
        ],
    }
    out = Path(path)
    out.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return out


def manifest_path_for(output: str | Path) -> Path:
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")
