"""
Adaptive Levin quadrature over curved triangular meshes.
"""
