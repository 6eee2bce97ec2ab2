"""Feed-game simulator for closure-mechanism representation development."""

__version__ = "0.1.0"
