"""Polyvector parallelograms of Fano 3-folds from toric and homogeneous models."""

__version__ = "0.1.0"
