"""This module contains various utility classes and functions."""
