"""Random group presentations in the density model.

Sampling, relator overlap analysis, van Kampen diagrams, the Dehn algorithm
and Monte Carlo experiments around the critical densities 1/5 and 1/2.
"""

from .words import (
    count_reduced_words,
    cyclic_reduce,
    format_word,
    free_reduce,
    invert,
    parse_word,
    sample_reduced_word,
)
from .presentation import Presentation, load, relator_count, sample_presentation, store

__version__ = "0.1.0"

__all__ = [
    "Presentation",
    "count_reduced_words",
    "cyclic_reduce",
    "format_word",
    "free_reduce",
    "invert",
    "load",
    "parse_word",
    "relator_count",
    "sample_presentation",
    "sample_reduced_word",
    "store",
]
