"""Sampling primitives used by the generators: RSS, RSP and uniform index draws."""
