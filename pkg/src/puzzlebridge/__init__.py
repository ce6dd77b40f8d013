"""puzzlebridge: ludemic puzzle descriptions -> CSP -> solutions -> moves."""

__version__ = "0.1.0"
