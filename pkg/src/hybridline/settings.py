import os

DEFAULT_MAX_LEVEL = 64


def max_level() -> int:
    """Cap for bounded searches, overridable through ``HYBRIDLINE_MAX_LEVEL``."""
    raw = os.environ.get("HYBRIDLINE_MAX_LEVEL")
    if not raw:
        return DEFAULT_MAX_LEVEL
    value = int(raw)
    if value < 0:
        raise ValueError("HYBRIDLINE_MAX_LEVEL must be non-negative")
    return value
