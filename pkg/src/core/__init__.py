"""
Numerical core: linear algebra, spectral tools, geometry, Levin solvers, integrands and oracles.
"""
