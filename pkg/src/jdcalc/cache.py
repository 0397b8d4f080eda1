"""On-disk cache for explicit presentations.

Enabled only when ``JD_CACHE_DIR`` is set.  Each entry is a JSON file named
after the flavor descriptor and format version, holding the generator keys,
relators and a SHA-256 checksum of that payload.  A checksum or version
mismatch is treated as a miss.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

FORMAT_VERSION = 1


def cache_dir() -> Path | None:
    d = os.environ.get("JD_CACHE_DIR")
    return Path(d) if d else None


def _to_json(obj):
    if isinstance(obj, tuple):
        return [_to_json(x) for x in obj]
    return obj


def _from_json(obj):
    if isinstance(obj, list):
        return tuple(_from_json(x) for x in obj)
    return obj


def _path(flavor) -> Path | None:
    d = cache_dir()
    if d is None:
        return None
    return d / f"v{FORMAT_VERSION}-{flavor.descriptor()}.json"


def _checksum(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()


def store_presentation(pres) -> None:
    path = _path(pres.flavor)
    if path is None:
        return
    payload = json.dumps(
        {
            "keys": [_to_json(k) for k in pres.keys],
            "relators": [sorted(r.items()) for r in pres.group.relators],
            "ngens": pres.group.ngens,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    entry = {"formatVersion": FORMAT_VERSION, "flavor": pres.flavor.descriptor(), "checksum": _checksum(payload), "payload": payload}
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(entry))
    os.replace(tmp, path)


def load_presentation(flavor):
    from .abelian import PresentedGroup
    from .spaces import SpacePresentation

    path = _path(flavor)
    if path is None or not path.exists():
        return None
    try:
        entry = json.loads(path.read_text())
        if entry.get("formatVersion") != FORMAT_VERSION or entry.get("flavor") != flavor.descriptor():
            return None
        payload = entry["payload"]
        if _checksum(payload) != entry["checksum"]:
            return None
        data = json.loads(payload)
    except (OSError, ValueError, KeyError):
        return None
    keys = [_from_json(k) for k in data["keys"]]
    rels = [{int(i): int(c) for i, c in r} for r in data["relators"]]
    group = PresentedGroup(data["ngens"], rels, names=keys)
    return SpacePresentation(flavor, keys, group, {k: i for i, k in enumerate(keys)})
