"""Exact workbench for block algebras, their Yoshida-type endomorphism
algebras, and constructive transport of Morita/derived equivalence
certificates through idempotent condensation."""

__version__ = "0.1.0"
