"""Command-line interface and its file formats."""

from .main import main

__all__ = ["main"]
