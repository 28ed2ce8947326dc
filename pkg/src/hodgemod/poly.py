"""Exact polynomials over named unknown Hodge numbers.

A :class:`SymPoly` is an integer polynomial whose variables are *unknown ids*:
strings derived from plan-node paths such as ``"node:3/serre_surface/h11"``.
Coefficients are Python ints, so arithmetic never overflows.

Textual form::

    >>> u = SymPoly.var("a")
    >>> str((2 + u) * 3)
    '6 + 3*u{a}'
    >>> SymPoly.parse("6 + 3*u{a}") == (2 + u) * 3
    True
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from ._backend import kernels

__all__ = [
    "Assignment",
    "SymPoly",
    "check_unknown_id",
    "const_mod",
    "evaluate",
    "poly_arith",
    "unknown_id",
]

_FORBIDDEN = set("{}") | set(" \t\n\r")


def check_unknown_id(uid: str) -> str:
    if not isinstance(uid, str) or not uid:
        raise ValueError("unknown id must be a non-empty string")
    bad = _FORBIDDEN.intersection(uid)
    if bad:
        raise ValueError(f"unknown id {uid!r} contains forbidden characters {sorted(bad)}")
    return uid


def unknown_id(path: str, *parts: str) -> str:
    """Id of an unknown owned by the plan node at ``path``."""
    return check_unknown_id("/".join(("node:" + str(path),) + parts))


def _coerce(x) -> "SymPoly":
    if isinstance(x, SymPoly):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return SymPoly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


class SymPoly:
    """Immutable integer polynomial in unknown ids.

    Stored as a dict ``monomial -> coefficient`` where a monomial is a sorted
    tuple of ids (repeats encode powers) and zero coefficients never appear,
    so equal polynomials have equal dicts.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            if isinstance(mono, str):
                mono = (mono,)
            for uid in mono:
                check_unknown_id(uid)
            if not isinstance(c, int) or isinstance(c, bool):
                raise TypeError("coefficients must be integers")
            key = tuple(sorted(mono))
            v = clean.get(key, 0) + c
            if v:
                clean[key] = v
            else:
                clean.pop(key, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict) -> "SymPoly":
        # trusted fast path: terms already canonical
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: int) -> "SymPoly":
        if c in _SMALL:
            return _SMALL[c]
        return cls._wrap({(): c} if c else {})

    @classmethod
    def var(cls, uid: str) -> "SymPoly":
        return cls._wrap({(check_unknown_id(uid),): 1})

    # -- inspection ------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in print order: lexicographic on id tuples (constant first)."""
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    @property
    def constant(self) -> int:
        return self._terms.get((), 0)

    def unknowns(self) -> frozenset:
        return frozenset(uid for mono in self._terms for uid in mono)

    def degree(self) -> int:
        return max((len(mono) for mono in self._terms), default=0)

    def __len__(self):
        return len(self._terms)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return SymPoly._wrap(kernels.add(self._terms, other._terms))

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return SymPoly._wrap(kernels.sub(self._terms, other._terms))

    def __rsub__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return other - self

    def __neg__(self):
        return SymPoly._wrap(kernels.scale(self._terms, -1))

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return SymPoly._wrap(kernels.scale(self._terms, other))
        if not isinstance(other, SymPoly):
            return NotImplemented
        return SymPoly._wrap(kernels.mul(self._terms, other._terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out, base = SymPoly.const(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    @staticmethod
    def dot(xs, ys) -> "SymPoly":
        """``sum(x * y for x, y in zip(xs, ys))`` in one kernel call."""
        return SymPoly._wrap(kernels.dot([x._terms for x in xs], [y._terms for y in ys]))

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, SymPoly):
            return self._terms == other._terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self.is_constant() and self.constant == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation ------------------------------------------------------

    def evaluate(self, sigma: "Assignment") -> int:
        if self.is_constant():
            return self.constant
        values = {uid: sigma.value(uid) for uid in self.unknowns()}
        return kernels.evaluate(self._terms, values)

    def const_mod(self, m: int) -> int | None:
        """Residue of ``self`` mod ``m`` if it is independent of every unknown.

        Returns ``None`` when some non-constant coefficient is not divisible by
        ``m``.
        """
        if m < 2:
            raise ValueError("modulus must be at least 2")
        for mono, c in self._terms.items():
            if mono and c % m:
                return None
        return self.constant % m

    # -- text ------------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.items():
            body = _format_monomial(mono)
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if not parts:
                parts.append(("-" if c < 0 else "") + text)
            else:
                parts.append(("- " if c < 0 else "+ ") + text)
        return " ".join(parts)

    def __repr__(self):
        return f"SymPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "SymPoly":
        return _Parser(text).parse()


_SMALL = {}
for _c in range(-4, 65):
    _SMALL[_c] = SymPoly._wrap({(): _c} if _c else {})
del _c


def _format_monomial(mono: tuple) -> str:
    out = []
    i = 0
    while i < len(mono):
        j = i
        while j < len(mono) and mono[j] == mono[i]:
            j += 1
        power = j - i
        out.append(f"u{{{mono[i]}}}" + (f"^{power}" if power > 1 else ""))
        i = j
    return "*".join(out)


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|u\{(?P<uid>[^{}\s]+)\}|(?P<op>[-+*^]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            mt = _TOKEN.match(stripped, pos)
            if not mt:
                raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
            kind = mt.lastgroup
            self.tokens.append((kind, mt.group(kind)))
            pos = mt.end()
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def _take(self):
        tok = self._peek()
        self.i += 1
        return tok

    def parse(self) -> SymPoly:
        if not self.tokens:
            raise ValueError("empty polynomial text")
        sign = 1
        if self._peek() == ("op", "-"):
            self._take()
            sign = -1
        total = self._term() * sign
        while self.i < len(self.tokens):
            kind, val = self._take()
            if kind != "op" or val not in "+-":
                raise ValueError(f"expected '+' or '-' in {self.text!r}")
            t = self._term()
            total = total + t if val == "+" else total - t
        return total

    def _term(self) -> SymPoly:
        out = self._factor()
        while self._peek() == ("op", "*"):
            self._take()
            out = out * self._factor()
        return out

    def _factor(self) -> SymPoly:
        kind, val = self._take()
        if kind == "int":
            return SymPoly.const(int(val))
        if kind == "uid":
            base = SymPoly.var(val)
            if self._peek() == ("op", "^"):
                self._take()
                kind, exp = self._take()
                if kind != "int":
                    raise ValueError(f"expected exponent in {self.text!r}")
                return base ** int(exp)
            return base
        raise ValueError(f"unexpected token {val!r} in {self.text!r}")


@lru_cache(maxsize=1 << 16)
def _seeded_value(seed, bound: int, uid: str) -> int:
    digest = hashlib.blake2b(f"{seed}\x00{uid}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") % (bound + 1)


@dataclass(frozen=True)
class Assignment:
    """Model values for unknown ids.

    Explicit ``values`` win; otherwise, if ``seed`` is set, an id gets a
    pseudo-random value in ``[0, bound]`` derived from ``(seed, id)`` alone,
    so ids created after the assignment still get stable values.  Without a
    seed every absent id is 0.
    """

    values: Mapping[str, int] = field(default_factory=dict)
    seed: int | None = None
    bound: int = 10

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")
        for uid, v in self.values.items():
            check_unknown_id(uid)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"value for {uid!r} must be a nonnegative integer")

    @classmethod
    def random(cls, seed: int, bound: int = 10) -> "Assignment":
        return cls(seed=seed, bound=bound)

    def value(self, uid: str) -> int:
        v = self.values.get(uid)
        if v is not None:
            return v
        if self.seed is None:
            return 0
        return _seeded_value(self.seed, self.bound, uid)

    def to_json(self) -> dict:
        return {"seed": self.seed, "bound": self.bound, "values": dict(sorted(self.values.items()))}

    @classmethod
    def from_json(cls, doc: Mapping) -> "Assignment":
        if not isinstance(doc, Mapping):
            raise ValueError("assignment must be a JSON object")
        seed = doc.get("seed")
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
            raise ValueError("assignment 'seed' must be an integer or null")
        bound = doc.get("bound", 10)
        if not isinstance(bound, int) or isinstance(bound, bool):
            raise ValueError("assignment 'bound' must be an integer")
        values = doc.get("values", {})
        if not isinstance(values, Mapping):
            raise ValueError("assignment 'values' must be an object")
        return cls(values=dict(values), seed=seed, bound=bound)


DEFAULT = Assignment()


def poly_arith(a: SymPoly, b: SymPoly, op: str) -> SymPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def evaluate(p: SymPoly, sigma: Assignment = DEFAULT) -> int:
    return _coerce(p).evaluate(sigma)


def const_mod(p: SymPoly, m: int) -> int | None:
    return _coerce(p).const_mod(m)
