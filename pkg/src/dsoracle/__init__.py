"""Distance sensitivity oracles: approximate shortest paths avoiding one failed vertex."""

__version__ = "0.1.0"
