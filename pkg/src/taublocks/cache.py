"""Content-addressed result cache: JSON files named by the hash of a
canonical job key, written atomically.  Equal keys always map to
byte-identical results (all computations are deterministic given their
key, including seeds; thread counts never enter a key)."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from . import __version__

ENV_VAR = "TAUBLOCKS_CACHE"


def cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "taublocks"


def job_key(operation: str, params: Dict[str, Any]) -> Dict[str, Any]:
    return {"operation": operation, "params": params, "version": __version__}


def key_digest(key: Dict[str, Any]) -> str:
    blob = json.dumps(key, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class Cache:
    def __init__(self, root: Optional[Path] = None):
        self.root = Path(root) if root is not None else cache_dir()

    def _path(self, key: Dict[str, Any]) -> Path:
        return self.root / f"{key_digest(key)}.json"

    def get(self, key: Dict[str, Any]) -> Optional[Dict[str, Any]]:
        path = self._path(key)
        if not path.exists():
            return None
        with open(path) as fh:
            return json.load(fh)

    def put(self, key: Dict[str, Any], payload: Dict[str, Any]) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self._path(key)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(payload, fh, sort_keys=True, indent=1)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get_or_compute(self, key: Dict[str, Any],
                       compute: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
        hit = self.get(key)
        if hit is not None:
            return hit
        payload = compute()
        self.put(key, payload)
        return payload

    def stats(self) -> Dict[str, Any]:
        if not self.root.exists():
            return {"entries": 0, "bytes": 0, "dir": str(self.root)}
        files = list(self.root.glob("*.json"))
        return {"entries": len(files),
                "bytes": sum(f.stat().st_size for f in files),
                "dir": str(self.root)}

    def clear(self) -> int:
        if not self.root.exists():
            return 0
        n = 0
        for f in self.root.glob("*.json"):
            f.unlink()
            n += 1
        return n
