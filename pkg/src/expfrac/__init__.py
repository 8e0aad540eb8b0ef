"""expfrac - exponential-kernel fractional integrals and Hermite-Hadamard type inequality checks."""

__version__ = "1.0.0"
