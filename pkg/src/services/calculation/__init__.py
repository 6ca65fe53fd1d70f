"""Root finding and quadrature."""
