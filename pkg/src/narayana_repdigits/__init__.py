"""Certified reproduction of the palindromic-repdigit classification for Narayana's cows sequence."""

__version__ = "0.1.0"
