"""On-disk cache for Bell sequences and Stirling rows.

One file per (kind, n, format version)::

    bellstat-table <version> <kind> <n> <count>
    <len>:<digits>
    ...

The cache is advisory. A missing, truncated or otherwise malformed file is a
miss, and deleting the directory at any time is safe. Writes go to a temp
file in the same directory followed by ``os.replace``, so readers never see a
half-written table.
"""

from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path
from typing import Callable, Sequence

from .render import decimal_to_int, int_to_decimal

FORMAT_VERSION = 1
ENV_VAR = "BELLSTAT_CACHE_DIR"
KINDS = ("bell", "stirling-row", "associated-row")

log = logging.getLogger(__name__)


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "bellstat"


class TableCache:
    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def path(self, kind: str, n: int) -> Path:
        if kind not in KINDS:
            raise ValueError(f"unknown table kind {kind!r}")
        return self.root / f"{kind}-{n}-v{FORMAT_VERSION}.txt"

    def load(self, kind: str, n: int) -> tuple[int, ...] | None:
        path = self.path(kind, n)
        try:
            text = path.read_text(encoding="ascii")
        except (OSError, UnicodeDecodeError):
            return None
        try:
            return _parse(text, kind, n)
        except ValueError as exc:
            log.warning("ignoring malformed cache file %s: %s", path, exc)
            return None

    def store(self, kind: str, n: int, values: Sequence[int]) -> None:
        path = self.path(kind, n)
        lines = [f"bellstat-table {FORMAT_VERSION} {kind} {n} {len(values)}"]
        for v in values:
            s = int_to_decimal(v)
            lines.append(f"{len(s)}:{s}")
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=self.root)
            try:
                with os.fdopen(fd, "w", encoding="ascii") as fh:
                    fh.write("\n".join(lines) + "\n")
                os.replace(tmp, path)
            except BaseException:
                os.unlink(tmp)
                raise
        except OSError as exc:
            log.warning("could not write cache file %s: %s", path, exc)

    def get_or_compute(
        self, kind: str, n: int, compute: Callable[[], Sequence[int]]
    ) -> tuple[tuple[int, ...], bool]:
        """(values, hit). On a miss the computed values are stored."""
        cached = self.load(kind, n)
        if cached is not None:
            return cached, True
        values = tuple(compute())
        self.store(kind, n, values)
        return values, False


def _parse(text: str, kind: str, n: int) -> tuple[int, ...]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ValueError("empty file")
    header = lines[0].split(" ")
    if len(header) != 5 or header[0] != "bellstat-table":
        raise ValueError("bad header")
    if header[1:4] != [str(FORMAT_VERSION), kind, str(n)]:
        raise ValueError("header does not match key")
    count = int(header[4])
    body = lines[1:]
    if len(body) != count:
        raise ValueError(f"expected {count} values, found {len(body)}")
    values = []
    for line in body:
        length, sep, digits = line.partition(":")
        if not sep or not length.isdigit() or int(length) != len(digits):
            raise ValueError("length prefix mismatch")
        values.append(decimal_to_int(digits))
    return tuple(values)
