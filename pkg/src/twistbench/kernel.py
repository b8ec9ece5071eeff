"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``TWISTBENCH_PURE=1`` to force the pure-Python kernels.  The compiled
kernels handle graphs with at most 63 vertices; calls beyond that limit are
routed to the pure implementation transparently.
"""

import os

from . import _pykernel

_COMPILED = None
if not os.environ.get("TWISTBENCH_PURE"):
    try:
        from . import _speedups as _COMPILED
    except ImportError:
        _COMPILED = None

IMPL_NAME = _COMPILED.IMPL_NAME if _COMPILED is not None else _pykernel.IMPL_NAME

_MAX_COMPILED_VERTICES = 63


def normalize(adj, word):
    if _COMPILED is not None and len(adj) <= _MAX_COMPILED_VERTICES:
        return _COMPILED.normalize(adj, word)
    return _pykernel.normalize(adj, word)


def min_max_conj_displacement(adj, targets, radius, lower_bound):
    if _COMPILED is not None and len(adj) <= _MAX_COMPILED_VERTICES:
        return _COMPILED.min_max_conj_displacement(adj, targets, radius, lower_bound)
    return _pykernel.min_max_conj_displacement(adj, targets, radius, lower_bound)


def coset_enumerate(nletters, inv, relators, subgens, cap):
    if _COMPILED is not None:
        return _COMPILED.coset_enumerate(nletters, inv, relators, subgens, cap)
    return _pykernel.coset_enumerate(nletters, inv, relators, subgens, cap)
