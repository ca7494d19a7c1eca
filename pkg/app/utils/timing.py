"""
Wall-clock timing of pipeline stages
"""
import logging
import time
from contextlib import contextmanager
from typing import Dict

logger = logging.getLogger(__name__)


class StageTimer:
    """Accumulates seconds per named stage"""

    def __init__(self):
        self.seconds: Dict[str, float] = {}

    @contextmanager
    def stage(self, name: str):
        logger.info(f"Stage '{name}' started")
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.seconds[name] = self.seconds.get(name, 0.0) + elapsed
            logger.info(f"Stage '{name}' finished in {elapsed:.3f}s")
