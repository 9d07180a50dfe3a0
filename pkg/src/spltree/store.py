"""On-disk store: a tree file plus its metadata sidecar, guarded by a lock file."""

from __future__ import annotations

import fcntl
import os
import tempfile
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path


def meta_path_for(tree_path: Path) -> Path:
    """``reg.spl.xml`` -> ``reg.spl.meta.xml``; ``reg.xml`` -> ``reg.meta.xml``."""
    name = tree_path.name
    if name.endswith(".spl.xml"):
        return tree_path.with_name(name[: -len(".xml")] + ".meta.xml")
    if tree_path.suffix:
        return tree_path.with_name(tree_path.stem + ".meta" + tree_path.suffix)
    return tree_path.with_name(name + ".meta")


@dataclass(frozen=True)
class StoreLocator:
    tree_path: Path

    @property
    def meta_path(self) -> Path:
        return meta_path_for(self.tree_path)

    @property
    def lock_path(self) -> Path:
        return self.tree_path.with_name(self.tree_path.name + ".lock")


def atomic_write(path: Path, content: str) -> None:
    """Write via a temp file in the same directory, then rename over *path*."""
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@contextmanager
def exclusive_lock(lock_path: Path) -> Iterator[None]:
    """Hold an advisory ``flock`` on *lock_path* for the duration of the block."""
    fd = os.open(lock_path, os.O_CREAT | os.O_WRONLY, 0o644)
    try:
        fcntl.flock(fd, fcntl.LOCK_EX)
        yield
    finally:
        fcntl.flock(fd, fcntl.LOCK_UN)
        os.close(fd)
