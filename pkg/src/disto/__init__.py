"""Combinatorics of surface group tilings, fragmentation lengths and distortion."""
from .presentation import Presentation, make_presentation, free_reduce, invert
from .rewriter import dehn_reduce, dehn_step, find_simplifiable, is_trivial
from .cayley import Ball, enumerate_ball, distance, diam_discrete, eloignement

__version__ = "0.1.0"
