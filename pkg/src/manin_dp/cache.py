"""On-disk cache of class enumerations, one canonical JSON file per query."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from manin_dp.curves import enumerate_classes
from manin_dp.lattice import ClassVector, PicardLattice, dumps_canonical

SCHEMA_VERSION = 1


def cache_path(cache_dir: Path, lat: PicardLattice, antideg: int, selfint: int) -> Path:
    return Path(cache_dir) / f"{lat.model.value}_r{lat.r}_a{antideg}_s{selfint}.json"


def enumeration_payload(lat: PicardLattice, antideg: int, selfint: int, classes) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "model": lat.model.value,
        "r": lat.r,
        "antideg": antideg,
        "selfint": selfint,
        "classes": [list(c.coords) for c in classes],
    }


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_valid(path: Path, expect: dict) -> list[ClassVector] | None:
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    for key, val in expect.items():
        if data.get(key) != val:
            return None
    try:
        return [ClassVector(c) for c in data["classes"]]
    except (KeyError, TypeError, ValueError):
        return None


def cached_enumeration(
    lat: PicardLattice, antideg: int, selfint: int, cache_dir: Path | None
) -> tuple[list[ClassVector], bool]:
    """(classes, hit) where ``hit`` tells whether the cache answered."""
    if cache_dir is None:
        return enumerate_classes(lat, antideg, selfint), False
    path = cache_path(cache_dir, lat, antideg, selfint)
    expect = {
        "schema_version": SCHEMA_VERSION,
        "model": lat.model.value,
        "r": lat.r,
        "antideg": antideg,
        "selfint": selfint,
    }
    if path.exists():
        got = _read_valid(path, expect)
        if got is not None:
            return got, True
    classes = enumerate_classes(lat, antideg, selfint)
    _atomic_write(path, dumps_canonical(enumeration_payload(lat, antideg, selfint, classes)) + "\n")
    return classes, False
