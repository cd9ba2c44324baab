"""Coordinatization of complemented modular lattices, computed exactly."""
