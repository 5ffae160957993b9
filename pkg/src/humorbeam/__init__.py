"""Incremental ambiguity resolution with retraction detection and a spin-network laughter model."""

__version__ = "0.1.0"
