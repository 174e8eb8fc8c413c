"""Solver backends shared by the managers."""
