"""Utility helpers shared by the bilat sub-packages (serialization, finiteness checks)."""
