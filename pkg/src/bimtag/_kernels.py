"""Tagging inner loops over dense transition tables.

Tagging a stream is two linear passes of table lookups plus a bitset
intersection per position, so these loops dominate runtime on long inputs.
They are written in numba-compatible style and jitted on import; setting the
environment variable ``BIMTAG_JIT=0`` selects the plain-Python/NumPy fallback
(the same code, uncompiled). ``bimtag bench`` compares the two paths.

Table layout (built in :mod:`bimtag.simult`):

* ``delta``: int32 ``[n_states, alphabet]``, -1 where undefined;
* ``tau``:   int64 ``[n_states, n_words]``, rule-index bitsets packed 63 bits
  per word (bit ``b`` of word ``w`` is rule ``w*63 + b + 1``).

Kernels signal faults in their output arrays: -1 for an undefined transition
(impossible for machines holding the universal default rule), 0 for an empty
rule intersection. Callers translate these into exceptions.
"""

from __future__ import annotations

import os
import warnings
from typing import Callable, NamedTuple

import numpy as np

MASK_BITS = 63  # bits used per int64 bitset word; keeps numba shifts signed


def _right_state_path(delta_r, start_r, word):
    """States of the right-to-left pass; entry k covers suffix word[k:]."""
    t = word.shape[0]
    path = np.empty(t + 1, np.int32)
    q = start_r
    path[t] = q
    for k in range(t - 1, -1, -1):
        if q >= 0:
            q = delta_r[q, word[k]]
        path[k] = q
    return path


def _min_rule(tau_l, ql, tau_r, qr, out, k):
    # Lowest set bit of the intersection, as a 1-based rule index.
    nw = tau_l.shape[1]
    r = 0
    for wi in range(nw):
        m = tau_l[ql, wi] & tau_r[qr, wi]
        if m != 0:
            b = 0
            while (m >> b) & 1 == 0:
                b += 1
            r = wi * MASK_BITS + b + 1
            break
    out[k] = r


def _select_rules(delta_l, tau_l, start_l, delta_r, tau_r, start_r, word, out):
    """Per position, the lowest-index rule whose left and right context
    bitsets both contain it."""
    t = word.shape[0]
    right = _right_state_path(delta_r, start_r, word)
    ql = start_l
    for k in range(t):
        qr = right[k]
        if ql < 0 or qr < 0:
            out[k] = -1
        else:
            _min_rule(tau_l, ql, tau_r, qr, out, k)
        if ql >= 0:
            ql = delta_l[ql, word[k]]


def _select_rules_pi(
    delta_l, tau_l, start_l,
    delta_p, tau_p, start_p,
    delta_r, tau_r, start_r,
    word, out,
):
    """Like _select_rules but additionally intersecting with the bitset of
    the output-history automaton, which advances on each fired rule id."""
    t = word.shape[0]
    nw = tau_l.shape[1]
    right = _right_state_path(delta_r, start_r, word)
    ql = start_l
    qp = start_p
    for k in range(t):
        qr = right[k]
        if ql < 0 or qr < 0 or qp < 0:
            out[k] = -1
        else:
            r = 0
            for wi in range(nw):
                m = tau_l[ql, wi] & tau_p[qp, wi] & tau_r[qr, wi]
                if m != 0:
                    b = 0
                    while (m >> b) & 1 == 0:
                        b += 1
                    r = wi * MASK_BITS + b + 1
                    break
            out[k] = r
            if r > 0:
                qp = delta_p[qp, r - 1]
            else:
                qp = -1
        if ql >= 0:
            ql = delta_l[ql, word[k]]


def _match_masks(delta_l, tau_l, start_l, delta_r, tau_r, start_r, word, out):
    """Per-position intersection bitsets (all matching rules, no selection).

    ``out`` is int64 [t, n_words]; a row of -1 marks an undefined transition.
    """
    t = word.shape[0]
    nw = tau_l.shape[1]
    right = _right_state_path(delta_r, start_r, word)
    ql = start_l
    for k in range(t):
        qr = right[k]
        if ql < 0 or qr < 0:
            for wi in range(nw):
                out[k, wi] = -1
        else:
            for wi in range(nw):
                out[k, wi] = tau_l[ql, wi] & tau_r[qr, wi]
        if ql >= 0:
            ql = delta_l[ql, word[k]]


class Kernels(NamedTuple):
    right_state_path: Callable
    select_rules: Callable
    select_rules_pi: Callable
    match_masks: Callable


PY_KERNELS = Kernels(_right_state_path, _select_rules, _select_rules_pi, _match_masks)

_jit_cache: Kernels | None = None


def jit_kernels() -> Kernels:
    """Numba-compiled kernel set (compiled once, cached on disk)."""
    global _jit_cache
    if _jit_cache is None:
        import numba

        jit = numba.njit(cache=True, nogil=True)
        min_rule = jit(_min_rule)
        right = jit(_right_state_path)

        # Rebind the helpers the outer kernels call so numba sees jitted ones.
        def select_rules(delta_l, tau_l, start_l, delta_r, tau_r, start_r, word, out):
            t = word.shape[0]
            rp = right(delta_r, start_r, word)
            ql = start_l
            for k in range(t):
                qr = rp[k]
                if ql < 0 or qr < 0:
                    out[k] = -1
                else:
                    min_rule(tau_l, ql, tau_r, qr, out, k)
                if ql >= 0:
                    ql = delta_l[ql, word[k]]

        def select_rules_pi(
            delta_l, tau_l, start_l,
            delta_p, tau_p, start_p,
            delta_r, tau_r, start_r,
            word, out,
        ):
            t = word.shape[0]
            nw = tau_l.shape[1]
            rp = right(delta_r, start_r, word)
            ql = start_l
            qp = start_p
            for k in range(t):
                qr = rp[k]
                if ql < 0 or qr < 0 or qp < 0:
                    out[k] = -1
                else:
                    r = 0
                    for wi in range(nw):
                        m = tau_l[ql, wi] & tau_p[qp, wi] & tau_r[qr, wi]
                        if m != 0:
                            b = 0
                            while (m >> b) & 1 == 0:
                                b += 1
                            r = wi * MASK_BITS + b + 1
                            break
                    out[k] = r
                    if r > 0:
                        qp = delta_p[qp, r - 1]
                    else:
                        qp = -1
                if ql >= 0:
                    ql = delta_l[ql, word[k]]

        def match_masks(delta_l, tau_l, start_l, delta_r, tau_r, start_r, word, out):
            t = word.shape[0]
            nw = tau_l.shape[1]
            rp = right(delta_r, start_r, word)
            ql = start_l
            for k in range(t):
                qr = rp[k]
                if ql < 0 or qr < 0:
                    for wi in range(nw):
                        out[k, wi] = -1
                else:
                    for wi in range(nw):
                        out[k, wi] = tau_l[ql, wi] & tau_r[qr, wi]
                if ql >= 0:
                    ql = delta_l[ql, word[k]]

        _jit_cache = Kernels(right, jit(select_rules), jit(select_rules_pi), jit(match_masks))
    return _jit_cache


def _jit_wanted() -> bool:
    flag = os.environ.get("BIMTAG_JIT")
    if flag is not None:
        return flag.strip().lower() not in ("0", "false", "no", "off")
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USING_NUMBA = False
ACTIVE = PY_KERNELS
if _jit_wanted():
    try:
        ACTIVE = jit_kernels()
        USING_NUMBA = True
    except Exception as exc:  # pragma: no cover - depends on install
        warnings.warn(f"numba unavailable, falling back to pure Python kernels: {exc}")
