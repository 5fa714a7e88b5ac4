"""One-shot sandboxed executor for generated table-solver programs.

Reads a single JSON request on stdin, runs ``solver(table)`` in a
restricted namespace, and writes a single JSON response on stdout.
"""

from .runner import execute, main

__all__ = ["execute", "main"]
