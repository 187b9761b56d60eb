"""Unsupervised information extraction for noisy conversation transcripts."""

__version__ = "0.1.0"
