"""
Utility helpers
"""
from .fingerprint import fingerprint
from .timing import StageTimer

__all__ = ["fingerprint", "StageTimer"]
