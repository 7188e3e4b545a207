"""Degree-7 cubature on Wiener space via the tensor Hopf algebra."""
