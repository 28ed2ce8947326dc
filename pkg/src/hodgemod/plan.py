"""Construction plans: trees of atoms, products, blowups and sections.

A plan is pure data.  :class:`Evaluator` turns it into symbolic diamonds,
using the node kinds below.  Every node carries a ``path`` that is unique in
its plan; unknowns created while evaluating a node are named from it, so
evaluating the same plan twice produces the same unknown ids.

Node kinds (children, params):

``Atom``             ``()``, ``{"atom": kind, "k"|"d": ...}``
``Product``          ``(a, b)``
``Power``            ``(a,)``, ``{"k"}``
``BlowupPoints``     ``(a,)``, ``{"count"}``
``BlowupCentre``     ``(a, centre)``
``LefschetzSection`` ``(a,)``
``ChiSection``       ``(a,)``, ``{"b", "e", "chi", "r"}``
``AsymmetricBlowup`` ``(a,)`` or ``(a, S)``, ``{"r", "b", "c"}``
``InnerRound``       ``(a, ptilde)``
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .calculus import AtomSpec, _section, atom, blowup_shift, chi_section_parts, hname, kuenneth, power
from .diamond import ZERO, HodgeDiamond, Increment
from .poly import Assignment, SymPoly, unknown_id

__all__ = [
    "FORMAT_VERSION",
    "KINDS",
    "Evaluator",
    "Plan",
    "PlanError",
    "PlanNode",
    "TraceEntry",
    "blowup_trace",
    "eval_plan",
    "parse",
    "serialize",
]

FORMAT_VERSION = 1

KINDS = (
    "Atom", "Product", "Power", "BlowupPoints", "BlowupCentre",
    "LefschetzSection", "ChiSection", "AsymmetricBlowup", "InnerRound",
)

BLOWUP_KINDS = ("BlowupPoints", "BlowupCentre", "AsymmetricBlowup", "InnerRound")

_ARITY = {
    "Atom": (0,), "Product": (2,), "Power": (1,), "BlowupPoints": (1,), "BlowupCentre": (2,),
    "LefschetzSection": (1,), "ChiSection": (1,), "AsymmetricBlowup": (1, 2), "InnerRound": (2,),
}

_INT_PARAMS = {
    "Power": ("k",), "BlowupPoints": ("count",), "ChiSection": ("b", "e", "chi", "r"),
    "AsymmetricBlowup": ("r", "b", "c"),
}


class PlanError(ValueError):
    """Malformed plan; ``path`` and ``field`` locate the first violation."""

    def __init__(self, message: str, path: str | None = None, field: str | None = None):
        where = []
        if path is not None:
            where.append(f"node {path}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.path = path
        self.field = field


@dataclass(frozen=True, eq=True)
class PlanNode:
    kind: str
    path: str
    children: tuple = ()
    params: Mapping = field(default_factory=dict)
    justification: Mapping = field(default_factory=dict)

    __hash__ = None

    def walk(self):
        """Post-order traversal (children before parents)."""
        stack = [(self, False)]
        while stack:
            node, done = stack.pop()
            if done:
                yield node
                continue
            stack.append((node, True))
            for child in reversed(node.children):
                stack.append((child, False))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "children": [c.to_json() for c in self.children],
            "params": dict(self.params),
            "justification": dict(self.justification),
            "path": self.path,
        }


def node_dim(node: PlanNode, _memo=None) -> int:
    """Declared output dimension (validates arity on the way)."""
    memo = {} if _memo is None else _memo
    for nd in node.walk():
        k = nd.kind
        if k == "Atom":
            d = AtomSpec.from_params(nd.params).dim
        elif k == "Product":
            d = memo[id(nd.children[0])] + memo[id(nd.children[1])]
        elif k == "Power":
            d = memo[id(nd.children[0])] * nd.params["k"]
        elif k in ("LefschetzSection", "ChiSection"):
            d = memo[id(nd.children[0])] - 1
        else:
            d = memo[id(nd.children[0])]
        memo[id(nd)] = d
    return memo[id(node)]


@dataclass(frozen=True, eq=True)
class Plan:
    """A rooted construction plan for modulus ``m``.

    ``assignment`` optionally records the model assignment the planner read
    Hodge numbers from; ``verify`` defaults to it.
    """

    m: int
    root: PlanNode
    assignment: Assignment | None = None

    __hash__ = None

    @property
    def dim(self) -> int:
        return node_dim(self.root)

    def nodes(self):
        return list(self.root.walk())

    def validate(self) -> None:
        validate(self.root, self.m)

    def to_json(self) -> dict:
        doc = {"version": FORMAT_VERSION, "m": self.m, "root": self.root.to_json()}
        if self.assignment is not None:
            doc["assignment"] = self.assignment.to_json()
        return doc


# -- validation ------------------------------------------------------------------


def _spine_to_projective(node: PlanNode, k: int) -> bool:
    while node.kind in BLOWUP_KINDS:
        node = node.children[0]
    return node.kind == "Atom" and dict(node.params) == {"atom": "projective_space", "k": k}


def validate(root: PlanNode, m: int) -> None:
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise PlanError("modulus must be an integer >= 2", field="m")
    seen = set()
    dims = {}
    for nd in root.walk():
        path = nd.path
        if not isinstance(path, str) or not path:
            raise PlanError("path must be a non-empty string", path, "path")
        if path in seen:
            raise PlanError("duplicate path", path, "path")
        seen.add(path)
        k = nd.kind
        if k not in KINDS:
            raise PlanError(f"unknown kind {k!r}", path, "kind")
        if len(nd.children) not in _ARITY[k]:
            raise PlanError(f"{k} takes {_ARITY[k]} children, got {len(nd.children)}", path, "children")
        for name in _INT_PARAMS.get(k, ()):
            v = nd.params.get(name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise PlanError(f"missing or non-integer parameter {name!r}", path, "params")
        child_dims = [dims[id(c)] for c in nd.children]
        if k == "Atom":
            try:
                d = AtomSpec.from_params(nd.params).dim
            except (ValueError, TypeError) as exc:
                raise PlanError(str(exc), path, "params") from None
        elif k == "Product":
            d = child_dims[0] + child_dims[1]
        elif k == "Power":
            if nd.params["k"] < 0:
                raise PlanError("power must be >= 0", path, "params")
            d = child_dims[0] * nd.params["k"]
        elif k == "BlowupPoints":
            if nd.params["count"] < 0:
                raise PlanError("count must be >= 0", path, "params")
            if child_dims[0] < 2:
                raise PlanError("point blowups need dimension >= 2", path, "children")
            d = child_dims[0]
        elif k == "BlowupCentre":
            if child_dims[1] > child_dims[0] - 2:
                raise PlanError(
                    f"centre of dimension {child_dims[1]} in dimension {child_dims[0]} has codimension < 2",
                    path, "children")
            d = child_dims[0]
        elif k in ("LefschetzSection", "ChiSection"):
            if child_dims[0] < 2:
                raise PlanError("sections need an ambient of dimension >= 2", path, "children")
            if k == "ChiSection" and not 0 <= nd.params["b"] < m:
                raise PlanError(f"b must lie in [0, {m})", path, "params")
            d = child_dims[0] - 1
        elif k == "AsymmetricBlowup":
            n = child_dims[0]
            r, b, c = nd.params["r"], nd.params["b"], nd.params["c"]
            if not 1 <= r <= n - 1:
                raise PlanError(f"level r={r} outside [1, {n - 1}]", path, "params")
            if r in (1, n - 1) and (b - c) % m:
                raise PlanError(f"b and c must agree mod m at level r={r}", path, "params")
            middle = 2 <= r <= n - 2
            if middle and len(nd.children) != 2:
                raise PlanError("middle levels need the surface sub-plan", path, "children")
            if not middle and len(nd.children) != 1:
                raise PlanError("outer levels take no sub-plan", path, "children")
            if middle and child_dims[1] != 2:
                raise PlanError("surface sub-plan must have dimension 2", path, "children")
            d = n
        else:  # InnerRound
            n = child_dims[0]
            if n < 2:
                raise PlanError("inner rounds need dimension >= 2", path, "children")
            if child_dims[1] != n - 2 or not _spine_to_projective(nd.children[1], n - 2):
                raise PlanError(f"sub-plan must be a blowup of P^{n - 2}", path, "children")
            d = n
        dims[id(nd)] = d


# -- evaluation -----------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    """One blowup performed by a plan: the centre's diamond, or ``None`` for
    an opaque bookkeeping marker whose contribution is only known to be a
    multiple of ``m``."""

    dim: int | None
    diamond: HodgeDiamond | None = None

    @property
    def opaque(self) -> bool:
        return self.diamond is None


def fresh_increment(n: int, path: str, tag: str) -> Increment:
    """Unknown increment supported on ``1 <= p, q <= n-1``, paired by duality."""
    cache = {}

    def entry(p, q):
        if p == 0 or q == 0:
            return ZERO
        if (p, q) not in cache:
            cache[(p, q)] = SymPoly.var(unknown_id(path, tag, hname(p, q)))
        return cache[(p, q)]

    return Increment(n, entry)


@dataclass
class NodeParts:
    """Evaluation by-products kept for the structural audits."""

    base: HodgeDiamond | None = None
    mdelta: Increment | None = None
    final_shift: Increment | None = None
    centre: HodgeDiamond | None = None


class Evaluator:
    """Memoising evaluator for plan nodes.

    Diamonds are cached by node path, so a planner can evaluate growing
    plans without recomputing shared subtrees.
    """

    def __init__(self, m: int):
        self.m = m
        self._diamonds = {}
        self._traces = {}
        self.parts = {}

    def diamond(self, node: PlanNode) -> HodgeDiamond:
        hit = self._diamonds.get(node.path)
        if hit is not None:
            return hit
        for nd in node.walk():
            if nd.path not in self._diamonds:
                self._diamonds[nd.path] = self._eval(nd)
        return self._diamonds[node.path]

    __call__ = diamond

    def _eval(self, nd: PlanNode) -> HodgeDiamond:
        k, path, m = nd.kind, nd.path, self.m
        kids = [self._diamonds[c.path] for c in nd.children]
        if k == "Atom":
            return atom(AtomSpec.from_params(nd.params), path)
        if k == "Product":
            return kuenneth(kids[0], kids[1])
        if k == "Power":
            return power(kids[0], nd.params["k"])
        if k == "BlowupPoints":
            x = kids[0]
            shift = blowup_shift(HodgeDiamond.point(), x.n) * nd.params["count"]
            self.parts[path] = NodeParts(base=x, final_shift=shift)
            return x + shift
        if k == "BlowupCentre":
            x, z = kids
            shift = blowup_shift(z, x.n - z.n)
            self.parts[path] = NodeParts(base=x, final_shift=shift, centre=z)
            return x + shift
        if k == "LefschetzSection":
            return _section(kids[0], path, "mid")
        if k == "ChiSection":
            x = kids[0]
            y, mdelta = chi_section_parts(x, nd.params["b"], m, path)
            self.parts[path] = NodeParts(base=x, mdelta=mdelta)
            return y
        if k == "AsymmetricBlowup":
            return self._asymmetric(nd, kids)
        if k == "InnerRound":
            return self._inner_round(nd, kids)
        raise ValueError(f"unknown kind {k!r}")

    def _asymmetric(self, nd: PlanNode, kids) -> HodgeDiamond:
        x = kids[0]
        n, m, path = x.n, self.m, nd.path
        r, b = nd.params["r"], nd.params["b"]
        i = b % m
        point_shift = blowup_shift(HodgeDiamond.point(), n)
        if r == 1:
            shift = point_shift * i
            self.parts[path] = NodeParts(base=x, final_shift=shift)
            return x + shift
        if r == n - 1:
            z = self.hypersurface(path, n)
            shift = point_shift * i + blowup_shift(z, 2) * i
            self.parts[path] = NodeParts(base=x, final_shift=shift, centre=z)
            return x + shift
        w = self.centre_w(nd, kids[1], r)
        mdelta = fresh_increment(n, path, "delta") * m
        shift = blowup_shift(w, n - r)
        self.parts[path] = NodeParts(base=x, mdelta=mdelta, final_shift=shift, centre=w)
        return x + mdelta + shift

    @staticmethod
    def hypersurface(path: str, d: int) -> HodgeDiamond:
        # all i hypersurfaces of one node share a diamond: same degree, same Hodge numbers
        return atom(AtomSpec.hypersurface(d), path + "/Z")

    @staticmethod
    def centre_w(nd: PlanNode, surface: HodgeDiamond, r: int) -> HodgeDiamond:
        """Diamond of the asymmetric centre ``W`` of dimension ``r``.

        ``W`` is a blowup of ``S x Z`` with ``Z`` a dimension ``r-2`` variety
        whose two outer corners are 1 (a point when ``r == 2``), so its
        diamond is the product plus an unknown inner increment.
        """
        if r == 2:
            z = HodgeDiamond.point()
        else:
            z = atom(AtomSpec.hypersurface(r), nd.path + "/Z")
        return kuenneth(surface, z) + fresh_increment(r, nd.path, "W/delta")

    def _inner_round(self, nd: PlanNode, kids) -> HodgeDiamond:
        x, ptilde = kids
        n, m, path = x.n, self.m, nd.path
        replica = blowup_shift(HodgeDiamond.point(), n)
        for j, entry in enumerate(self.trace(nd.children[1])):
            if entry.opaque:
                replica = replica + fresh_increment(n, path, f"replica{j}/delta")
            else:
                replica = replica + blowup_shift(entry.diamond, n - entry.dim)
        mdelta = replica * m
        shift = blowup_shift(ptilde, 2)
        self.parts[path] = NodeParts(base=x, mdelta=mdelta, final_shift=shift, centre=ptilde)
        return x + mdelta + shift

    def trace(self, node: PlanNode) -> list[TraceEntry]:
        """Ordered blowups performed along the node's birational spine.

        Products, powers and atoms start a new variety and contribute
        nothing; bookkeeping regions that are only known mod ``m`` appear as
        opaque markers.
        """
        hit = self._traces.get(node.path)
        if hit is not None:
            return hit
        self.diamond(node)
        k = node.kind
        point = HodgeDiamond.point()
        if k in ("Atom", "Product", "Power", "LefschetzSection"):
            out = []
        elif k == "ChiSection":
            out = [TraceEntry(None)]
        else:
            out = list(self.trace(node.children[0]))
            n = self._diamonds[node.children[0].path].n
            if k == "BlowupPoints":
                out += [TraceEntry(0, point)] * node.params["count"]
            elif k == "BlowupCentre":
                z = self._diamonds[node.children[1].path]
                out.append(TraceEntry(z.n, z))
            elif k == "AsymmetricBlowup":
                r = node.params["r"]
                i = node.params["b"] % self.m
                if r == 1:
                    out += [TraceEntry(0, point)] * i
                elif r == n - 1:
                    z = self.parts[node.path].centre
                    out += [TraceEntry(0, point)] * i + [TraceEntry(z.n, z)] * i
                else:
                    w = self.parts[node.path].centre
                    out += [TraceEntry(None), TraceEntry(w.n, w)]
            else:  # InnerRound
                pt = self._diamonds[node.children[1].path]
                out += [TraceEntry(None), TraceEntry(pt.n, pt)]
        self._traces[node.path] = out
        return out


def eval_plan(plan: Plan, evaluator: Evaluator | None = None) -> HodgeDiamond:
    """Symbolic diamond of the plan's root."""
    plan.validate()
    ev = evaluator or Evaluator(plan.m)
    return ev.diamond(plan.root)


def blowup_trace(plan: Plan) -> list[TraceEntry]:
    plan.validate()
    return Evaluator(plan.m).trace(plan.root)


# -- serialization -------------------------------------------------------------


def serialize(plan: Plan) -> bytes:
    """Deterministic JSON bytes: equal plans give byte-equal output."""
    return (json.dumps(plan.to_json(), sort_keys=True, indent=1) + "\n").encode()


def _node_from_json(doc, where: str) -> PlanNode:
    if not isinstance(doc, dict):
        raise PlanError("node must be an object", where)
    path = doc.get("path")
    if not isinstance(path, str) or not path:
        raise PlanError("path must be a non-empty string", where, "path")
    for name, typ in (("kind", str), ("children", list), ("params", dict), ("justification", dict)):
        if name not in doc:
            raise PlanError("missing field", path, name)
        if not isinstance(doc[name], typ):
            raise PlanError(f"must be of type {typ.__name__}", path, name)
    extra = set(doc) - {"kind", "children", "params", "justification", "path"}
    if extra:
        raise PlanError(f"unknown fields {sorted(extra)}", path)
    for name, v in doc["params"].items():
        if not isinstance(v, (int, str)) or isinstance(v, bool):
            raise PlanError(f"parameter {name!r} must be an integer or string", path, "params")
    children = tuple(_node_from_json(c, f"{path}[{i}]") for i, c in enumerate(doc["children"]))
    return PlanNode(doc["kind"], path, children, dict(doc["params"]), dict(doc["justification"]))


def parse(data) -> Plan:
    """Inverse of :func:`serialize`; validates the plan."""
    if isinstance(data, (bytes, bytearray)):
        data = data.decode()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise PlanError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise PlanError("plan document must be an object")
    if "version" not in doc:
        raise PlanError("missing version", field="version")
    if doc["version"] != FORMAT_VERSION:
        raise PlanError(f"unsupported version {doc['version']!r}", field="version")
    m = doc.get("m")
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise PlanError("modulus must be an integer >= 2", field="m")
    if "root" not in doc:
        raise PlanError("missing root", field="root")
    root = _node_from_json(doc["root"], "root")
    assignment = None
    if doc.get("assignment") is not None:
        try:
            assignment = Assignment.from_json(doc["assignment"])
        except ValueError as exc:
            raise PlanError(str(exc), field="assignment") from None
    plan = Plan(m, root, assignment)
    plan.validate()
    return plan

