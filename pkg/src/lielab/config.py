"""Size and enumeration budgets, overridable through LIELAB_BUDGET."""

import os

DEFAULT_ENUMERATION_BUDGET = 10**6
DEFAULT_SIZE_BUDGET = 200  # largest ambient dimension built by default


def _env_budget():
    raw = os.environ.get("LIELAB_BUDGET")
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"LIELAB_BUDGET must be an integer, got {raw!r}") from exc
    if value < 0:
        raise ValueError("LIELAB_BUDGET must be nonnegative")
    return value


def enumeration_budget() -> int:
    env = _env_budget()
    return DEFAULT_ENUMERATION_BUDGET if env is None else env


def size_budget() -> int:
    env = _env_budget()
    return DEFAULT_SIZE_BUDGET if env is None else env
