"""
stratgrad/utils/logger.py

Configures a standard logger for the stratgrad application.
"""

import logging

from stratgrad.settings import LOG_LEVEL

logging.basicConfig(
    level=getattr(logging, LOG_LEVEL.upper(), logging.INFO),
    format="%(asctime)s %(levelname)s %(message)s"
)
logger = logging.getLogger("stratgrad")
