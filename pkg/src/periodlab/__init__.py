"""periodlab: exact arithmetic in perfected Laurent-series fields, power-series
period rings over p-adic coefficients, and the attached semilinear calculus."""

__version__ = "0.1.0"
