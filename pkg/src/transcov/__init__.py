"""Spoken-language coverage statistics for subtitle and transcript corpora."""

__version__ = "0.1.0"
