"""Hand-built derivations shared across test modules."""
from mdm.demos import delta_delta_derivation, delta_derivation

__all__ = ["delta_delta_derivation", "delta_derivation"]
