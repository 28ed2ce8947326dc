"""Brute-force integer diamonds for the fully determined fragment.

Expressions are nested tuples::

    ("P", k)                    projective space P^k
    ("E",)                      elliptic curve
    ("point",)
    ("product", a, b)
    ("power", a, k)
    ("blowup_points", a, count)

This module shares no code with the symbolic calculus: grids are plain lists
of ints, products are explicit four-fold loops and blowups add the point
increments one diagonal cell at a time.
"""

from __future__ import annotations

from .plan import Evaluator, PlanNode

__all__ = ["OracleError", "oracle_compare", "oracle_diamond", "to_plan_node"]


class OracleError(ValueError):
    pass


def _zeros(n):
    return [[0] * (n + 1) for _ in range(n + 1)]


def _product(a, b):
    na, nb = len(a) - 1, len(b) - 1
    out = _zeros(na + nb)
    for p1 in range(na + 1):
        for q1 in range(na + 1):
            if not a[p1][q1]:
                continue
            for p2 in range(nb + 1):
                for q2 in range(nb + 1):
                    out[p1 + p2][q1 + q2] += a[p1][q1] * b[p2][q2]
    return out


def oracle_diamond(expr) -> list[list[int]]:
    """Integer diamond of ``expr``; raises :class:`OracleError` outside the fragment."""
    if not isinstance(expr, tuple) or not expr:
        raise OracleError(f"not an expression: {expr!r}")
    tag, args = expr[0], expr[1:]
    if tag == "point" and not args:
        return [[1]]
    if tag == "P" and len(args) == 1 and isinstance(args[0], int) and args[0] >= 0:
        k = args[0]
        return [[1 if p == q else 0 for q in range(k + 1)] for p in range(k + 1)]
    if tag == "E" and not args:
        return [[1, 1], [1, 1]]
    if tag == "product" and len(args) == 2:
        return _product(oracle_diamond(args[0]), oracle_diamond(args[1]))
    if tag == "power" and len(args) == 2 and isinstance(args[1], int) and args[1] >= 0:
        base = oracle_diamond(args[0])
        out = [[1]]
        for _ in range(args[1]):
            out = _product(out, base)
        return out
    if tag == "blowup_points" and len(args) == 2 and isinstance(args[1], int) and args[1] >= 0:
        out = [row[:] for row in oracle_diamond(args[0])]
        n = len(out) - 1
        if n < 2 and args[1]:
            raise OracleError("points have codimension < 2")
        # a point blowup adds one class in each degree (i, i), 0 < i < n
        for i in range(1, n):
            out[i][i] += args[1]
        return out
    raise OracleError(f"expression outside the oracle fragment: {expr!r}")


def to_plan_node(expr, _counter=None) -> PlanNode:
    """Translate an oracle expression into a plan tree for the calculus."""
    counter = _counter if _counter is not None else [0]

    def node(kind, children=(), params=None):
        counter[0] += 1
        return PlanNode(kind, f"o{counter[0]}", tuple(children), params or {})

    tag, args = expr[0], expr[1:]
    if tag == "point":
        return node("Atom", params={"atom": "point"})
    if tag == "P":
        return node("Atom", params={"atom": "projective_space", "k": args[0]})
    if tag == "E":
        return node("Atom", params={"atom": "elliptic_curve"})
    if tag == "product":
        return node("Product", [to_plan_node(args[0], counter), to_plan_node(args[1], counter)])
    if tag == "power":
        return node("Power", [to_plan_node(args[0], counter)], {"k": args[1]})
    if tag == "blowup_points":
        return node("BlowupPoints", [to_plan_node(args[0], counter)], {"count": args[1]})
    raise OracleError(f"expression outside the oracle fragment: {expr!r}")


def oracle_compare(expr) -> bool:
    """True iff the symbolic calculus and the oracle agree entrywise."""
    want = oracle_diamond(expr)
    d = Evaluator(2).diamond(to_plan_node(expr))
    n = len(want) - 1
    if d.n != n:
        return False
    for p in range(n + 1):
        for q in range(n + 1):
            v = d[p, q]
            if not v.is_constant() or v.constant != want[p][q]:
                return False
    return True
