"""Twisted gravitational descendants on genus-0 stable maps to P^r and the
characteristic numbers of rational curves they compute."""

__version__ = "0.1.0"

from .charnum import (
    CharnumQuery,
    ConditionSpec,
    characteristic_number,
    cubic_query,
    plane_query,
    table,
)
from .core import Correlator, Insertion, canonical_key, dimension, km_integral
from .descendants import eval_descendant
from .dsl import parse_correlator
from .gw import GwQuery, gw_invariant
from .memo import MemoCache
from .twisted import eval_twisted

__all__ = [
    "CharnumQuery",
    "ConditionSpec",
    "Correlator",
    "GwQuery",
    "Insertion",
    "MemoCache",
    "canonical_key",
    "characteristic_number",
    "cubic_query",
    "dimension",
    "eval_descendant",
    "eval_twisted",
    "gw_invariant",
    "km_integral",
    "parse_correlator",
    "plane_query",
    "table",
]
