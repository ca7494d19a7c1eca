"""
Logging setup shared by the CLI, the HTTP service and the tests
"""
import logging

LOG_FORMAT = "%(asctime)s |%(levelname)s: %(message)s"


def setup_logging(level: str | int = "INFO") -> None:
    """Configure the root logger once; later calls only adjust the level"""
    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(format=LOG_FORMAT, level=level)
    root.setLevel(level)
