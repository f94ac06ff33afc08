"""Backend selection for the hot kernels.

Numba is used when importable unless ``NEEDLET_DISABLE_NUMBA`` is set to a
truthy value, in which case every kernel runs its pure-numpy twin.
``NEEDLET_THREADS`` caps the numba thread pool.
"""

from __future__ import annotations

import os

_FALSEY = {"", "0", "false", "no", "off"}


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in _FALSEY


try:
    import numba
    from numba.extending import register_jitable

    HAVE_NUMBA = True
    # the bundled TBB is too old for numba; skip it rather than warn
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

    def register_jitable(func):
        return func


USE_NUMBA = HAVE_NUMBA and not _flag("NEEDLET_DISABLE_NUMBA")


def thread_cap() -> int | None:
    """Parsed value of ``NEEDLET_THREADS`` or None when unset."""
    raw = os.environ.get("NEEDLET_THREADS", "").strip()
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"NEEDLET_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"NEEDLET_THREADS must be >= 1, got {n}")
    return n


def apply_thread_cap() -> None:
    if not USE_NUMBA:
        return
    cap = thread_cap()
    if cap is not None:
        numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
