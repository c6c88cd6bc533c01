"""Heavy-tailed multi-line renewal risk model: simulation and asymptotics."""

__version__ = "0.1.0"
