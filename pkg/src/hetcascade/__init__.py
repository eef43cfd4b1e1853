"""Independent-cascade spreading with per-node influence and susceptibility."""

__version__ = "0.1.0"
