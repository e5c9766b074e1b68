"""Closest returns of orbits and recurrence-based lower bounds on Hausdorff measure."""

__version__ = "0.1.0"
