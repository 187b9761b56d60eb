"""Annotation and embedding exporter for the convomine transcript toolkit."""

__version__ = "0.1.0"
