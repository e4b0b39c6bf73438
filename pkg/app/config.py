"""
Runtime configuration for the faceted knowledge base engine
Reads environment variables (optionally from a .env file) into module constants
"""

import logging
import os
from dotenv import load_dotenv

load_dotenv()


def _flag(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


# Inheritance of typed relations also descends through Whole / Part edges
INHERIT_PARTITIVE = _flag("KOS_INHERIT_PARTITIVE", True)

# Maximum number of associative links in one inferred chain
MAX_CHAIN_LENGTH = int(os.getenv("KOS_MAX_CHAIN_LENGTH", "16"))

# SKOS import
SKOS_LANGUAGE = os.getenv("KOS_SKOS_LANGUAGE", "en")
DEFAULT_FACET_ID = os.getenv("KOS_DEFAULT_FACET", "_default")

LOG_LEVEL = os.getenv("KOS_LOG_LEVEL", "WARNING").upper()
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | None = None) -> None:
    """Send log records to stderr; stdout is reserved for command output."""
    logging.basicConfig(level=level or LOG_LEVEL, format=LOG_FORMAT)
