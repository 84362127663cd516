"""On-disk workspace shared by every pipeline stage.

Layout under the workspace root:

    config.txt      pipeline configuration, key=value lines
    records/        one JSON document per persisted record
    suites/         exported input-vector files
    artifacts/      native sources, signed images, generated stubs
    transcripts/    one chat transcript per session
    reports/        rendered benchmark and status reports
    builds/         native toolchain scratch space (content-addressed)

Record ids are the first 16 hex digits of the content hash plus a numeric
sequence suffix, so identical payloads written twice get distinct ids while
staying diffable. A workspace is meant for a single tool instance; readers
may be concurrent, writers serialize per record id in-process.
"""

from __future__ import annotations

import json
import hashlib
import threading
from pathlib import Path

from .config import PipelineConfig, dump_config, load_config
from .errors import ConfigConflictError, InvariantError, WorkspaceError
from .records import record_from_doc

SUBDIRS = ("records", "suites", "artifacts", "transcripts", "reports", "builds")
CONFIG_FILE = "config.txt"


def _canonical_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


class Workspace:
    def __init__(self, root: Path, config: PipelineConfig):
        self.root = Path(root)
        self.config = config
        self._write_lock = threading.Lock()

    # -- paths ------------------------------------------------------------

    @property
    def records_dir(self) -> Path:
        return self.root / "records"

    @property
    def suites_dir(self) -> Path:
        return self.root / "suites"

    @property
    def artifacts_dir(self) -> Path:
        return self.root / "artifacts"

    @property
    def transcripts_dir(self) -> Path:
        return self.root / "transcripts"

    @property
    def reports_dir(self) -> Path:
        return self.root / "reports"

    @property
    def builds_dir(self) -> Path:
        return self.root / "builds"

    # -- records ----------------------------------------------------------

    def persist(self, record) -> str:
        """Validate, serialize and store a record; returns its new id."""
        record.validate()
        doc = record.to_doc()
        text = _canonical_json(doc)
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
        with self._write_lock:
            seq = 0
            while (self.records_dir / f"{digest}-{seq}.json").exists():
                seq += 1
            record_id = f"{digest}-{seq}"
            path = self.records_dir / f"{record_id}.json"
            path.write_text(text, encoding="utf-8")
        return record_id

    def load(self, record_id: str):
        path = self.records_dir / f"{record_id}.json"
        if not path.exists():
            raise WorkspaceError(f"no record {record_id!r} in {self.root}")
        doc = json.loads(path.read_text(encoding="utf-8"))
        return record_from_doc(doc)

    def raw_bytes(self, record_id: str) -> bytes:
        return (self.records_dir / f"{record_id}.json").read_bytes()

    def list_ids(self, kind: str | None = None) -> list[str]:
        ids = []
        for path in sorted(self.records_dir.glob("*.json")):
            if kind is not None:
                doc = json.loads(path.read_text(encoding="utf-8"))
                if doc.get("kind") != kind:
                    continue
            ids.append(path.stem)
        return ids

    def load_all(self, kind: str) -> list:
        return [self.load(record_id) for record_id in self.list_ids(kind)]


def init_workspace(root_path, config: PipelineConfig | None = None) -> Workspace:
    """Create or re-open a workspace.

    Idempotent when the stored config matches; a differing config is
    reported as a conflict and never silently overwritten.
    """
    root = Path(root_path)
    config = config or PipelineConfig()
    config.validate()
    root.mkdir(parents=True, exist_ok=True)
    if not _writable(root):
        raise WorkspaceError(f"workspace root not writable: {root}")
    config_path = root / CONFIG_FILE
    if config_path.exists():
        stored = load_config(config_path.read_text(encoding="utf-8"))
        if stored != config:
            diffs = _config_diffs(stored, config)
            raise ConfigConflictError(
                f"workspace {root} already configured; differing keys: {diffs}"
            )
    else:
        config_path.write_text(dump_config(config), encoding="utf-8")
    for sub in SUBDIRS:
        (root / sub).mkdir(exist_ok=True)
    return Workspace(root, config)


def open_workspace(root_path) -> Workspace:
    """Open an existing workspace with whatever config it has stored."""
    root = Path(root_path)
    config_path = root / CONFIG_FILE
    if not config_path.exists():
        raise WorkspaceError(f"{root} is not an initialized workspace")
    config = load_config(config_path.read_text(encoding="utf-8"))
    return Workspace(root, config)


def _writable(root: Path) -> bool:
    probe = root / ".write-probe"
    try:
        probe.write_text("")
        probe.unlink()
        return True
    except OSError:
        return False


def _config_diffs(stored: PipelineConfig, wanted: PipelineConfig) -> list[str]:
    from dataclasses import asdict

    a, b = asdict(stored), asdict(wanted)
    return sorted(key for key in a if a[key] != b[key])
