"""Hopf-Galois structures on explicit number fields: enumeration, descent,
associated orders and freeness checks in exact arithmetic."""

from .errors import HopfGaloisError
from .instance import InstanceSpec, load_catalog, load_instance
from .pipeline import Options, run_pipeline

__all__ = ["HopfGaloisError", "InstanceSpec", "Options", "load_catalog", "load_instance", "run_pipeline"]
__version__ = "0.1.0"
