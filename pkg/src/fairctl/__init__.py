"""fairctl: a toolkit for fair CTL and its rooted and binary dialects."""

__version__ = "0.1.0"
