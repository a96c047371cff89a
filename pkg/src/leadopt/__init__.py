"""leadopt: iterative many-shot lead-optimization platform."""

__version__ = "0.1.0"
