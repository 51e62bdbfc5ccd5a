"""Degree-law and clustering analysis of generated graphs."""
