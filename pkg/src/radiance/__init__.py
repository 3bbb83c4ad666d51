"""Retrieval-augmented latent diffusion for protein binder interface design."""

__version__ = "0.1.0"
