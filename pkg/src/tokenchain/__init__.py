"""Exclusion-process sampling of densest k-subgraphs of regular graphs."""

__version__ = "0.1.0"
