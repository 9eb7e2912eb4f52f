"""Shared test configuration.

Hypothesis runs derandomized so the suite is reproducible on one CPU; any
failure prints a seed-free minimal example.
"""
from hypothesis import HealthCheck, settings

settings.register_profile(
    "deterministic",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("deterministic")
