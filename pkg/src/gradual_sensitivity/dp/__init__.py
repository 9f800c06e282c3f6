"""Laplace sampling, the gradual Laplace and above-threshold mechanisms, and a DP verifier."""
