"""Configuration, sweeps, fits and the command-line interface."""
