"""rot-lab: recursive multi-context reasoning data, inference, and evaluation."""

__version__ = "0.1.0"
