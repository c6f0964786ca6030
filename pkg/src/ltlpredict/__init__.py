"""Approximate LTL model checking by prediction with gradient boosted trees."""

import sys

# formulas of a few hundred tokens nest deeply; the AST helpers recurse
if sys.getrecursionlimit() < 10000:
    sys.setrecursionlimit(10000)

__version__ = "0.1.0"
