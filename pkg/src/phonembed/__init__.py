"""Phonetic word embeddings and a six-task evaluation suite."""

__version__ = "0.1.0"
SUITE_VERSION = "v1.0"
