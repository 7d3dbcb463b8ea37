"""On-disk, content-addressed store for constructed polynomials.

One file per key; the file name is a short hash of the key's canonical
text.  Writes go to a temporary file in the same directory and are then
renamed into place, so readers never see a half-written entry and
concurrent writers of the same key leave one valid file behind.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .families import FamilyKey, RationalFunction, build
from .ring import Poly
from .serialize import DecodeError, from_obj, to_obj

log = logging.getLogger(__name__)

ENV_VAR = "UMEMURA_CACHE"


def default_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "umemura"


@dataclass(frozen=True)
class CacheEntry:
    key: FamilyKey
    value: Poly | RationalFunction
    build_route: str
    content_hash: str


def _hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


class PolyCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.dir = Path(directory) if directory is not None else default_dir()

    def path(self, key: FamilyKey) -> Path:
        return self.dir / f"{_hash(key.text())[:16]}.json"

    def put(self, key: FamilyKey, value, route: str | None = None) -> CacheEntry:
        if isinstance(value, RationalFunction):
            body = {"numerator": to_obj(value.numerator), "denominator": to_obj(value.denominator)}
        else:
            body = {"poly": to_obj(value)}
        payload = json.dumps(body, separators=(",", ":"), sort_keys=True)
        route = route or key.family
        record = {"key": key.text(), "route": route, "hash": _hash(payload), "value": body}
        self.dir.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(record, fh, separators=(",", ":"), sort_keys=True)
            os.replace(tmp, self.path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return CacheEntry(key, value, route, record["hash"])

    def get(self, key: FamilyKey) -> CacheEntry | None:
        """Return the stored entry, or None on a miss or a corrupt file."""
        path = self.path(key)
        try:
            record = json.loads(path.read_text())
        except FileNotFoundError:
            return None
        except (OSError, json.JSONDecodeError) as exc:
            log.warning("corrupt cache entry %s for %s: %s", path.name, key, exc)
            return None
        try:
            if record["key"] != key.text():
                raise DecodeError(f"key mismatch: {record['key']}")
            body = record["value"]
            payload = json.dumps(body, separators=(",", ":"), sort_keys=True)
            if _hash(payload) != record["hash"]:
                raise DecodeError("content hash mismatch")
            if "poly" in body:
                value = from_obj(body["poly"])
            else:
                value = RationalFunction(from_obj(body["numerator"]), from_obj(body["denominator"]))
        except (KeyError, TypeError, DecodeError) as exc:
            log.warning("corrupt cache entry %s for %s: %s", path.name, key, exc)
            return None
        return CacheEntry(key, value, record["route"], record["hash"])

    def get_or_build(self, key: FamilyKey):
        hit = self.get(key)
        if hit is not None:
            return hit.value
        value = build(key)
        self.put(key, value)
        return value

    def stats(self) -> dict[str, int]:
        files = list(self.dir.glob("*.json")) if self.dir.exists() else []
        return {"entries": len(files), "bytes": sum(f.stat().st_size for f in files)}

    def clear(self) -> int:
        n = 0
        if self.dir.exists():
            for f in self.dir.glob("*.json"):
                f.unlink()
                n += 1
        return n
