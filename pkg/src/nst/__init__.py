"""Closed essential surfaces in knot complements via normal surface theory."""
