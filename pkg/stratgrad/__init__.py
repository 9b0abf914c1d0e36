"""
stratgrad

Stratified gradient sampling for nonsmooth objectives, with a persistent
homology backend for persistence-based losses.
"""

__version__ = "0.1.0"
