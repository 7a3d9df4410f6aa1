"""toriq: quotients of subtorus actions on toric varieties, computed exactly."""

__version__ = "0.1.0"
