"""On-disk cache of quotient bases.

One JSON file per (support, degree, method, leg filter) key, named by a
hash of the key.  The first line is a format header; anything that fails
to parse or carries another version is rebuilt.  Writes go to a temporary
file that is renamed into place, under a per-key lock file.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from filelock import FileLock

FORMAT_HEADER = "jacobi-diagrams quotient cache v1"
ENV_VAR = "JACOBI_CACHE_DIR"

log = logging.getLogger(__name__)


def key_name(key: tuple) -> str:
    support, degree, method, color_legs = key
    text = json.dumps(
        [list(support.components), list(support.colors), degree, method, color_legs],
        separators=(",", ":"),
    )
    return hashlib.sha256(text.encode()).hexdigest()[:24] + f"-n{degree}"


def _dump(q) -> str:
    body = {
        "support": [list(q.support.components), list(q.support.colors)],
        "degree": q.degree,
        "method": q.method,
        "color_legs": q.color_legs,
        "basis": [b.hex() for b in q.basis],
        "reduction": {
            k.hex(): [[b.hex(), str(v)] for b, v in row.items()] for k, row in sorted(q.reduction.items())
        },
    }
    return FORMAT_HEADER + "\n" + json.dumps(body, sort_keys=True, separators=(",", ":")) + "\n"


def _load(text: str, key: tuple):
    from .quotients import QuotientSpace

    header, _, payload = text.partition("\n")
    if header != FORMAT_HEADER:
        raise ValueError("format header mismatch")
    body = json.loads(payload)
    support, degree, method, color_legs = key
    cl = tuple(tuple(x) for x in body["color_legs"]) if body["color_legs"] is not None else None
    if (
        body["support"] != [list(support.components), list(support.colors)]
        or body["degree"] != degree
        or body["method"] != method
        or cl != color_legs
    ):
        raise ValueError("cache key mismatch")
    basis = [bytes.fromhex(b) for b in body["basis"]]
    reduction = {
        bytes.fromhex(k): {bytes.fromhex(b): Fraction(v) for b, v in row}
        for k, row in body["reduction"].items()
    }
    return QuotientSpace(support, degree, method, basis, reduction, cl)


class BasisCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    def path(self, key: tuple) -> Path:
        return self.directory / (key_name(key) + ".json")

    def load(self, key: tuple):
        """The cached space, or None when missing or unreadable."""
        p = self.path(key)
        try:
            text = p.read_text()
        except FileNotFoundError:
            return None
        try:
            return _load(text, key)
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("discarding cache file %s: %s", p, exc)
            return None

    def store(self, key: tuple, q) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        p = self.path(key)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=p.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(_dump(q))
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return p

    def load_or_build(self, key: tuple, build):
        q = self.load(key)
        if q is not None:
            return q
        self.directory.mkdir(parents=True, exist_ok=True)
        with FileLock(str(self.path(key)) + ".lock"):
            q = self.load(key)
            if q is None:
                q = build()
                self.store(key, q)
        return q

    def entries(self) -> list[Path]:
        if not self.directory.exists():
            return []
        return sorted(self.directory.glob("*.json"))

    def stats(self) -> dict[str, int]:
        files = self.entries()
        return {"files": len(files), "bytes": sum(f.stat().st_size for f in files)}

    def purge(self) -> int:
        n = 0
        for f in self.entries():
            f.unlink()
            n += 1
        for f in self.directory.glob("*.lock") if self.directory.exists() else ():
            f.unlink()
        return n


_default: list = [None, False]


def set_default_cache(directory: str | os.PathLike | None) -> None:
    _default[0] = BasisCache(directory) if directory else None
    _default[1] = True


def default_cache() -> BasisCache | None:
    """The configured cache; falls back to the environment variable."""
    if not _default[1]:
        env = os.environ.get(ENV_VAR)
        _default[0] = BasisCache(env) if env else None
        _default[1] = True
    return _default[0]
