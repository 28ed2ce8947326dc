"""Pure-Python term-dict kernels.

A *term dict* maps a monomial (a sorted tuple of unknown ids, repeated ids
encoding powers; ``()`` is the constant monomial) to a nonzero ``int``
coefficient.  Every function returns a fresh dict without zero entries.
``_kernels.pyx`` implements the same functions; see ``_backend``.
"""


def _merge(a, b):
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def add(a, b):
    out = dict(a)
    for mono, c in b.items():
        v = out.get(mono, 0) + c
        if v:
            out[mono] = v
        else:
            del out[mono]
    return out


def sub(a, b):
    out = dict(a)
    for mono, c in b.items():
        v = out.get(mono, 0) - c
        if v:
            out[mono] = v
        else:
            del out[mono]
    return out


def scale(a, k):
    if not k:
        return {}
    return {mono: c * k for mono, c in a.items()}


def mul(a, b):
    out = {}
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            key = _merge(ma, mb)
            out[key] = get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def dot(xs, ys):
    """Sum of ``xs[i] * ys[i]`` accumulated into a single dict."""
    out = {}
    get = out.get
    for a, b in zip(xs, ys):
        for ma, ca in a.items():
            for mb, cb in b.items():
                key = _merge(ma, mb)
                out[key] = get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def evaluate(a, values):
    """Exact value of ``a`` with ``values[id]`` substituted for every id."""
    total = 0
    for mono, c in a.items():
        for uid in mono:
            c *= values[uid]
            if not c:
                break
        total += c
    return total
