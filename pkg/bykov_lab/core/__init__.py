from bykov_lab.core.cache import Cache, CacheStats, Record
from bykov_lab.core.state import State, as_state, norm_drift, quotient_coordinates, radius_squared
from bykov_lab.core.vector_field import VectorField

__all__ = [
    "Cache",
    "CacheStats",
    "Record",
    "State",
    "VectorField",
    "as_state",
    "norm_drift",
    "quotient_coordinates",
    "radius_squared",
]
