"""geomforge: permutation groups, GF(2)/GF(3) linear algebra and diagram
geometries of Petersen and tilde type, with coset enumeration and local
analysis utilities."""

__version__ = "0.1.0"
