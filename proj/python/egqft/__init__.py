"""Python bindings for the egqft causal perturbation theory toolkit."""

from ._egqft import *  # noqa: F401,F403
from ._egqft import DomainError, ParseError  # noqa: F401

__version__ = "0.1.0"
