"""Tri-parallel classical-text corpora as ontology-validated knowledge graphs."""

__version__ = "0.1.0"
