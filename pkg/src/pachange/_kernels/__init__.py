"""Kernel backend selection.

The compiled backend (``_speed``, Cython) is preferred; the pure-Python
backend (``_pure``) is the fallback when the extension is unavailable or
when ``PACHANGE_PURE=1`` is set.  Both expose the same functions and are
bit-compatible for equal seeds (see ``benchmarks/bench_kernels.py`` for the
throughput comparison and ``tests/test_kernels.py`` for the equivalence
suite).
"""

from __future__ import annotations

import os

from . import _pure

_impl = None
if os.environ.get("PACHANGE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _speed as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = None
if _impl is None:
    _impl = _pure

BACKEND = _impl.BACKEND

grow_targets = _impl.grow_targets
continue_growth = _impl.continue_growth
min_degree_counts = _impl.min_degree_counts
late_component_labels = _impl.late_component_labels
sampled_component_sizes = _impl.sampled_component_sizes
branching_tree_sizes = _impl.branching_tree_sizes
draw_u_arrays = _impl.draw_u_arrays
decode_continuation = _impl.decode_continuation


def available_backends() -> dict:
    """Importable backend modules keyed by name."""
    found = {"pure": _pure}
    try:
        from . import _speed

        found["speed"] = _speed
    except ImportError:
        pass
    return found
