"""Recursive construction planners.

Each solver returns a :class:`~hodgemod.plan.PlanNode` whose diamond meets
its residue targets.  Outer targets are met as polynomial certificates,
independent of every unknown.  Inner targets depend on the current Hodge
numbers of the variety being modified, which the planner reads from the
model assignment ``ctx.sigma``; the resulting plan meets them under that
assignment.

Nodes get paths from a per-context counter, so planning is deterministic in
``(targets, sigma)`` and unknown ids (named from paths) are stable.
"""

from __future__ import annotations

from .calculus import AtomSpec, chi_metadata
from .diamond import ResidueTargets, TargetsError, index_set_J
from .plan import Evaluator, Plan, PlanNode
from .poly import Assignment

__all__ = [
    "PlannerContext",
    "asymmetric_blowup",
    "outer_mid_lift",
    "solve_full",
    "solve_inner",
    "solve_outer",
    "solve_outer_low",
    "solve_second_outer",
]


class PlannerContext:
    """Modulus, model assignment, path allocator and a shared evaluator."""

    def __init__(self, m: int, sigma: Assignment | None = None):
        if m < 2:
            raise ValueError("modulus must be at least 2")
        self.m = m
        self.sigma = sigma if sigma is not None else Assignment()
        self.evaluator = Evaluator(m)
        self._next = 0

    def node(self, kind, children=(), params=None, ref="", note="") -> PlanNode:
        path = str(self._next)
        self._next += 1
        just = {"ref": ref, "note": note} if ref or note else {}
        return PlanNode(kind, path, tuple(children), dict(params or {}), just)

    def atom(self, spec: AtomSpec, ref="", note="") -> PlanNode:
        return self.node("Atom", params=spec.to_params(), ref=ref or "atom", note=note or str(spec))

    def diamond(self, node: PlanNode):
        return self.evaluator.diamond(node)

    def value(self, node: PlanNode, p: int, q: int) -> int:
        """Model value of ``h^{p,q}`` of the node's variety."""
        return self.diamond(node)[p, q].evaluate(self.sigma)

    def dim(self, node: PlanNode) -> int:
        return self.diamond(node).n

    def plan(self, root: PlanNode) -> Plan:
        return Plan(self.m, root, self.sigma)


# -- outer Hodge numbers ----------------------------------------------------------


def _power(ctx, base: PlanNode, k: int, note: str) -> PlanNode:
    return ctx.node("Power", [base], {"k": k}, ref="kuenneth-formula", note=note)


def solve_outer_low(n: int, targets: dict, ctx: PlannerContext) -> PlanNode:
    """Variety of dimension >= n-1 meeting ``targets`` on ``J_{n-1}``.

    The two corner targets ``(n-1, 0)`` and ``(0, n-1)`` need not agree;
    the asymmetry comes from powers of the Serre surface.
    """
    if n < 2:
        raise ValueError("solve_outer_low needs n >= 2")
    m = ctx.m
    missing = [pq for pq in index_set_J(n - 1) if pq not in targets]
    if missing:
        raise TargetsError(f"missing outer targets {missing}")
    a = {pq: v % m for pq, v in targets.items()}
    if n == 2:
        i = (a[(0, 1)] - a[(1, 0)]) % m
        j = a[(1, 0)] % m or m  # j >= 1
        s = ctx.atom(AtomSpec.serre_surface(), note="h10 = 0, h01 = 1")
        e = ctx.atom(AtomSpec.elliptic_curve())
        si = _power(ctx, s, i, f"S^{i}, i = a01 - a10 mod m")
        ej = _power(ctx, e, j, f"E^{j}, j = a10 mod m, j >= 1")
        return ctx.node("Product", [si, ej], ref="outer-low-surface-case", note=f"S^{i} x E^{j}")

    d = n - 1
    # Y: h^{0,q} = (-1)^q below the top, everything else on J_{d} zero
    y_targets = {(p, 0): 0 for p in range(1, d + 1)}
    y_targets.update({(0, q): (-1) ** q % m for q in range(1, d)})
    y_targets[(0, d)] = 0
    y = solve_outer(d, y_targets, ctx)
    s1 = solve_outer(2, {(1, 0): 0, (0, 1): 1 % m, (2, 0): 0, (0, 2): 0}, ctx)
    z_targets = dict(a)
    z_targets[(0, d)] = a[(d, 0)]
    z = solve_outer(d, z_targets, ctx)
    i = ((-1) ** n * (a[(0, d)] - a[(d, 0)])) % m
    sy = ctx.node("Product", [s1, y], ref="outer-low-induction", note="S' x Y")
    pw = _power(ctx, sy, i, f"(S' x Y)^{i}")
    return ctx.node(
        "Product", [z, pw], ref="outer-low-induction",
        note=f"Z x (S' x Y)^{i}, i = (-1)^n (a0{d} - a{d}0) mod m; dim = {d} + {i}*{n + 1}",
    )


def outer_mid_lift(x: PlanNode, n: int, b: int, ctx: PlannerContext) -> PlanNode:
    """Dimension-``n`` variety keeping the outer numbers of ``x`` in degree
    ``<= n-1`` and with ``h^{n,0} = h^{0,n} = b`` mod ``m``."""
    m = ctx.m
    d = ctx.dim(x)
    if d < n - 1:
        raise ValueError(f"cannot lift a dimension-{d} plan to dimension {n}")
    if d < n + 1:
        p2 = ctx.atom(AtomSpec.projective_space(2))
        x = ctx.node("Product", [x, p2], ref="kuenneth-formula",
                     note="x P^2 keeps outer numbers in degree <= n-1")
        d += 2
    while d > n + 1:
        x = ctx.node("LefschetzSection", [x], ref="weak-lefschetz",
                     note="ample smooth divisor, inherits h^{p,q} for p+q <= dim-2")
        d -= 1
    b %= m
    meta = chi_metadata(ctx.diamond(x), b, m, ctx.sigma)
    return ctx.node(
        "ChiSection", [x], meta, ref="euler-characteristic-control",
        note=(f"blow up m points, twist by r={meta['r']} exceptional divisors so chi(L^-1) = {meta['e']} mod m; "
              f"model value chi(O) = {meta['chi']}"),
    )


def solve_outer(n: int, targets: dict, ctx: PlannerContext) -> PlanNode:
    """Dimension-``n`` variety meeting ``targets`` on ``J_n`` (certified)."""
    m = ctx.m
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    if n == 0:
        return ctx.atom(AtomSpec.point())
    missing = [pq for pq in index_set_J(n) if pq not in targets]
    if missing:
        raise TargetsError(f"missing outer targets {missing}")
    if (targets[(n, 0)] - targets[(0, n)]) % m:
        raise TargetsError(f"outer targets must satisfy a{n}0 = a0{n} mod m", f"{n},0")
    if n == 1:
        return outer_mid_lift(ctx.atom(AtomSpec.point()), 1, targets[(1, 0)], ctx)
    low = {pq: v for pq, v in targets.items() if pq in set(index_set_J(n - 1))}
    return outer_mid_lift(solve_outer_low(n, low, ctx), n, targets[(n, 0)], ctx)


# -- inner Hodge numbers ----------------------------------------------------------


def asymmetric_blowup(x: PlanNode, r: int, b: int, c: int, ctx: PlannerContext, reads: str = "") -> PlanNode:
    """Blowups adding ``b`` to ``h^{r,1}`` and ``c`` to ``h^{1,r}`` mod ``m``,
    leaving ``h^{p,1}``, ``h^{1,p}`` for ``p > r`` unchanged mod ``m``."""
    m = ctx.m
    n = ctx.dim(x)
    b %= m
    c %= m
    if not 1 <= r <= n - 1:
        raise ValueError(f"level r={r} outside [1, {n - 1}]")
    if r in (1, n - 1) and b != c:
        raise ValueError(f"b and c must agree at level r={r}")
    suffix = f"; {reads}" if reads else ""
    if r == 1:
        return ctx.node("AsymmetricBlowup", [x], {"r": r, "b": b, "c": c},
                        ref="asymmetric-blowup", note=f"blow up {b} points{suffix}")
    if r == n - 1:
        return ctx.node("AsymmetricBlowup", [x], {"r": r, "b": b, "c": c}, ref="asymmetric-blowup",
                        note=f"blow up {b} points, then a degree-{n} hypersurface in each exceptional P^{n - 1}{suffix}")
    s = solve_outer(2, {(1, 0): b, (0, 1): c, (2, 0): 0, (0, 2): 0}, ctx)
    return ctx.node(
        "AsymmetricBlowup", [x, s], {"r": r, "b": b, "c": c}, ref="asymmetric-centre",
        note=(f"m-fold blowups making room for W = Bl(S x Z) of dim {r} with h{r - 1}0 = b, "
              f"h0{r - 1} = c, h{r}0 = 0 mod m; then blow up W{suffix}"),
    )


def solve_second_outer(x: PlanNode, targets: dict, ctx: PlannerContext) -> PlanNode:
    """Meet ``targets`` on ``I_n`` by asymmetric blowups in descending ``r``."""
    m = ctx.m
    n = ctx.dim(x)
    if n >= 2 and (targets.get((n - 1, 1), 0) - targets.get((1, n - 1), 0)) % m:
        raise TargetsError(f"second-outer targets must satisfy a{n - 1}1 = a1{n - 1} mod m")
    for r in range(n - 1, 0, -1):
        hr1, h1r = ctx.value(x, r, 1), ctx.value(x, 1, r)
        b = (targets.get((r, 1), 0) - hr1) % m
        c = (targets.get((1, r), 0) - h1r) % m
        if b or c:
            reads = f"model values h{r}1 = {hr1}, h1{r} = {h1r}"
            x = asymmetric_blowup(x, r, b, c, ctx, reads)
    return x


def solve_inner(x: PlanNode, targets: dict, ctx: PlannerContext) -> PlanNode:
    """Blowups of ``x`` whose inner Hodge numbers meet ``targets`` under ``ctx.sigma``."""
    m = ctx.m
    n = ctx.dim(x)
    for (p, q), v in targets.items():
        if not (1 <= p <= n - 1 and 1 <= q <= n - 1):
            raise TargetsError(f"({p},{q}) is not an inner position in dimension {n}", f"{p},{q}")
        dual = (n - p, n - q)
        if dual in targets and (targets[dual] - v) % m:
            raise TargetsError(f"inner targets violate Serre duality at {p},{q}", f"{p},{q}")
    if n <= 1:
        return x
    a = {(p, q): targets.get((p, q), targets.get((n - p, n - q), 0)) % m
         for p in range(1, n) for q in range(1, n)}
    second = {}
    for p in range(1, n):
        for pq in ((1, p), (p, 1)):
            # the final P~ blowup adds h^{p-1,q-1}(P^{n-2}) = [p == q] here
            second[pq] = (a[pq] - (pq[0] == pq[1])) % m
    x1 = solve_second_outer(x, second, ctx)
    d1 = ctx.diamond(x1)
    sub = {}
    for p in range(1, n - 2):
        for q in range(1, n - 2):
            sub[(p, q)] = (a[(p + 1, q + 1)] - d1[p + 1, q + 1].evaluate(ctx.sigma)) % m
    base = ctx.atom(AtomSpec.projective_space(n - 2), note=f"hyperplane P^{n - 2} in an exceptional divisor")
    ptilde = solve_inner(base, sub, ctx)
    return ctx.node(
        "InnerRound", [x1, ptilde], ref="birational-inner-round",
        note=("blow up m points, replay the P~ centres in each exceptional divisor, then blow up one P~; "
              "P~ targets are a[p+1][q+1] minus model values of the current h[p+1][q+1]"),
    )


def solve_full(n: int, m: int, targets: ResidueTargets | dict, ctx: PlannerContext | None = None) -> Plan:
    """Plan for a dimension-``n`` variety with ``h^{p,q} = targets`` mod ``m``.

    Omitted target entries default to 0 (``h^{0,0}`` to 1).
    """
    if not isinstance(targets, ResidueTargets):
        targets = ResidueTargets(m, n, targets)
    if (targets.m, targets.n) != (m, n):
        raise TargetsError(f"targets are for (m={targets.m}, n={targets.n}), not (m={m}, n={n})")
    ctx = ctx or PlannerContext(m)
    if ctx.m != m:
        raise ValueError("context modulus differs from m")
    x = solve_outer(n, targets.outer(), ctx)
    root = solve_inner(x, targets.inner(), ctx)
    return ctx.plan(root)
