"""Exact verification of the correspondences between Moufang loops, groups with
triality, Moufang-Hopf algebras and Malcev algebras."""

__version__ = "0.1.0"
