"""Cooperative-transmission SIR analysis."""
