"""Resumable search state: one JSON object per checkpoint file."""

from __future__ import annotations

import json
import os
import tempfile
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .search import Hit, SearchTask


class CheckpointMismatch(ValueError):
    """The checkpoint was written for a different task."""


@dataclass
class Checkpoint:
    task_hash: str
    watermark: int
    counts: dict[str, int]
    found: list[Hit]

    @classmethod
    def of_progress(cls, task: SearchTask, watermark: int, found: list[Hit]) -> Checkpoint:
        counts = dict(sorted(Counter(h.cls.label for h in found).items()))
        return cls(task.digest, watermark, counts, list(found))

    def check_task(self, task: SearchTask) -> None:
        if self.task_hash != task.digest:
            raise CheckpointMismatch(
                f"checkpoint belongs to task {self.task_hash[:12]}, not {task.digest[:12]}; "
                "refusing to resume"
            )

    def to_dict(self) -> dict:
        return {
            "task_hash": self.task_hash,
            "watermark": self.watermark,
            "counts": self.counts,
            "found": [h.to_dict() for h in self.found],
        }

    @classmethod
    def from_dict(cls, d: dict) -> Checkpoint:
        try:
            return cls(
                task_hash=str(d["task_hash"]),
                watermark=int(d["watermark"]),
                counts={str(k): int(v) for k, v in d["counts"].items()},
                found=[Hit.from_dict(h) for h in d.get("found", [])],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed checkpoint: {exc}") from exc

    def save(self, path: str | Path) -> None:
        path = Path(path)
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"
        # write-then-rename so an interrupted save never leaves half a file
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name + ".")
        try:
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(blob)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    @classmethod
    def load(cls, path: str | Path) -> Checkpoint:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))
