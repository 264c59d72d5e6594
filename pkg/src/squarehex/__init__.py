"""Square versus hexagonal lattice length counts: sieves, constants, bounds."""

from .repr_core import B1, B3, FormClass, form_class

__all__ = ["B1", "B3", "FormClass", "form_class"]
__version__ = "0.1.0"
