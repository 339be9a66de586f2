"""Mergeable streaming sketches built on Hermite series estimators."""

from .bivariate import BivariateSketch
from .errors import EmptySketchError, IncompatibleSketchError, SketchError
from .hermite_basis import (
    HermiteBasisTables,
    build_basis_tables,
    hermite_function_values,
    lower_integral_values,
    upper_integral_values,
)
from .merging import merge, merge_bivariate, merge_univariate
from .moments import RunningMoments, merge_moments
from .sketch_io import deserialize, ingest_stream, load, save, serialize
from .univariate import SketchConfig, UnivariateSketch, accelerate_partial_sums

__all__ = [
    "BivariateSketch", "EmptySketchError", "HermiteBasisTables", "IncompatibleSketchError",
    "RunningMoments", "SketchConfig", "SketchError", "UnivariateSketch",
    "accelerate_partial_sums", "build_basis_tables", "deserialize", "hermite_function_values",
    "ingest_stream", "load", "lower_integral_values", "merge", "merge_bivariate",
    "merge_moments", "merge_univariate", "save", "serialize", "upper_integral_values",
]
