"""Utility helpers shared by the command line and library entry points."""
from gradual_sensitivity.utils.logging_config import configure_logging

__all__ = ["configure_logging"]
