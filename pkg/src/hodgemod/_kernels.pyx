# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-dict kernels; same contract as ``_kernels_py``."""

from cpython.dict cimport PyDict_GetItem, PyDict_SetItem
from cpython.object cimport PyObject


cdef inline tuple _merge(tuple a, tuple b):
    cdef Py_ssize_t na = len(a), nb = len(b), i = 0, j = 0, k = 0
    if na == 0:
        return b
    if nb == 0:
        return a
    cdef list out = [None] * (na + nb)
    while i < na and j < nb:
        if b[j] < a[i]:
            out[k] = b[j]
            j += 1
        else:
            out[k] = a[i]
            i += 1
        k += 1
    while i < na:
        out[k] = a[i]
        i += 1
        k += 1
    while j < nb:
        out[k] = b[j]
        j += 1
        k += 1
    return tuple(out)


cdef inline void _acc(dict out, tuple key, object c):
    cdef PyObject* prev = PyDict_GetItem(out, key)
    if prev is NULL:
        PyDict_SetItem(out, key, c)
    else:
        PyDict_SetItem(out, key, <object>prev + c)


cdef dict _strip(dict out):
    return {k: v for k, v in out.items() if v}


def add(dict a, dict b):
    cdef dict out = dict(a)
    cdef tuple mono
    for mono, c in b.items():
        v = out.get(mono, 0) + c
        if v:
            out[mono] = v
        else:
            del out[mono]
    return out


def sub(dict a, dict b):
    cdef dict out = dict(a)
    cdef tuple mono
    for mono, c in b.items():
        v = out.get(mono, 0) - c
        if v:
            out[mono] = v
        else:
            del out[mono]
    return out


def scale(dict a, k):
    if not k:
        return {}
    return {mono: c * k for mono, c in a.items()}


cdef void _mul_into(dict out, dict a, dict b):
    cdef tuple ma, mb
    cdef list bitems = list(b.items())
    for ma, ca in a.items():
        for mb, cb in bitems:
            _acc(out, _merge(ma, mb), ca * cb)


def mul(dict a, dict b):
    cdef dict out = {}
    _mul_into(out, a, b)
    return _strip(out)


def dot(xs, ys):
    cdef dict out = {}
    cdef dict a, b
    for a, b in zip(xs, ys):
        _mul_into(out, a, b)
    return _strip(out)


def evaluate(dict a, dict values):
    cdef tuple mono
    total = 0
    for mono, c in a.items():
        for uid in mono:
            c = c * values[uid]
            if not c:
                break
        total += c
    return total
