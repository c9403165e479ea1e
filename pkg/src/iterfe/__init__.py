"""Exact power-series tools for equations f(R(t)) = a(t) f(t) + b(t) over Q."""
from .exact import INF, Homography, Polynomial, RationalFunction, T, ratfunc_compose, rational_roots
from .kernels import BACKEND
from .series import Series, reversion, series_compose

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "INF",
    "Homography",
    "Polynomial",
    "RationalFunction",
    "Series",
    "T",
    "ratfunc_compose",
    "rational_roots",
    "reversion",
    "series_compose",
]
