"""Biased Maker-Breaker crossing games on grid graphs: engine, strategies,
verification harness, and a small play service."""

__version__ = "0.1.0"
