"""
Shared test configuration
"""

from hypothesis import settings

# Root-finding per example has no fixed cost; disable the per-example deadline
settings.register_profile('trimetric', deadline=None, max_examples=100)
settings.load_profile('trimetric')
