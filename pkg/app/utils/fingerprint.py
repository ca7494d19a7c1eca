"""
Stable content hashes for specs and training inputs
"""
import hashlib
import json
from typing import Any


def fingerprint(payload: Any, length: int = 16) -> str:
    """First ``length`` hex digits of the SHA-256 of the canonical JSON dump"""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:length]
