"""Coupled-mode simulator for cavity magnomechanics."""
