"""Canonical JSON: byte-identical output for equal values.

Sorted keys, no whitespace, shortest round-trip float repr (json's default),
UTF-8 without escaping. Saving the same object twice must produce the same
bytes — goldens and content hashes depend on it.
"""

from __future__ import annotations

import json


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_bytes(obj) -> bytes:
    return canonical_dumps(obj).encode("utf-8")
