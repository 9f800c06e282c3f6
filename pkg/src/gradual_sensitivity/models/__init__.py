"""Sensitivities, types, evidence, core terms, runtime values and result containers."""
