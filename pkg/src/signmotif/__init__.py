"""Motif-based Naive Bayes sign prediction for undirected signed networks."""

__version__ = "0.1.0"
