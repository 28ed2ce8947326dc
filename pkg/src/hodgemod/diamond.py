"""Hodge diamonds, diamond increments and residue targets.

A diamond of dimension ``n`` is an ``(n+1) x (n+1)`` grid of
:class:`~hodgemod.poly.SymPoly` with ``h[0][0] == 1`` and Serre duality
``h[p][q] == h[n-p][n-q]`` holding as polynomial identities.  Hodge symmetry
is not imposed.

Grids are lazy: an entry is computed the first time it is read and then
cached.  Every read goes through the *representative* of its dual pair, so
duality holds by construction.  Laziness matters because products in the
planner reach dimension 30+ while only low-degree entries are ever consumed.
"""

from __future__ import annotations

import json
from typing import Callable, Mapping

from .poly import DEFAULT, Assignment, SymPoly
from .report import EntryCheck, VerificationReport

__all__ = [
    "DiamondError",
    "HodgeDiamond",
    "Increment",
    "ResidueTargets",
    "TargetsError",
    "check_targets",
    "diamond_equals_mod",
    "index_set_I",
    "index_set_J",
    "make_diamond",
    "render_rotated",
]

ZERO = SymPoly.const(0)
ONE = SymPoly.const(1)


class DiamondError(ValueError):
    pass


def representative(n: int, p: int, q: int) -> tuple[int, int]:
    """Canonical member of the dual pair ``{(p, q), (n-p, n-q)}``.

    The member with smaller ``p + q``; on the middle row the one with smaller
    ``p``.
    """
    s = p + q
    if s < n or (s == n and 2 * p <= n):
        return p, q
    return n - p, n - q


def fundamental_domain(n: int) -> list[tuple[int, int]]:
    return [(p, q) for p in range(n + 1) for q in range(n + 1) if representative(n, p, q) == (p, q)]


class _Grid:
    """Lazy dual-symmetric grid; ``fetch(p, q)`` is only called on representatives."""

    __slots__ = ("n", "_fetch", "_cache", "_raw")

    def __init__(self, n: int, fetch: Callable[[int, int], SymPoly], raw=None):
        if n < 0:
            raise DiamondError("dimension must be nonnegative")
        self.n = n
        self._fetch = fetch
        self._cache = {}
        # formula valid at any position, used by duality audits
        self._raw = raw

    def __getitem__(self, pq) -> SymPoly:
        p, q = pq
        n = self.n
        if not (0 <= p <= n and 0 <= q <= n):
            raise IndexError(f"({p},{q}) outside a diamond of dimension {n}")
        key = representative(n, p, q)
        try:
            return self._cache[key]
        except KeyError:
            pass
        v = self._fetch(*key)
        if isinstance(v, int):
            v = SymPoly.const(v)
        self._cache[key] = v
        return v

    def get(self, p: int, q: int) -> SymPoly:
        """Entry at ``(p, q)``; zero outside the grid."""
        if 0 <= p <= self.n and 0 <= q <= self.n:
            return self[p, q]
        return ZERO

    def raw(self, p: int, q: int) -> SymPoly:
        """Entry recomputed from the defining formula at ``(p, q)`` itself.

        Differs from ``self[p, q]`` only in skipping the dual-pair redirect,
        so comparing ``raw(p, q)`` with ``raw(n-p, n-q)`` tests duality as a
        consequence of the formula rather than of the storage.
        """
        if self._raw is None:
            return self[p, q]
        v = self._raw(p, q)
        return SymPoly.const(v) if isinstance(v, int) else v

    def grid(self) -> list[list[SymPoly]]:
        return [[self[p, q] for q in range(self.n + 1)] for p in range(self.n + 1)]

    def outer_positions(self):
        n = self.n
        return [(p, q) for p in range(n + 1) for q in range(n + 1) if p in (0, n) or q in (0, n)]

    def inner_positions(self):
        n = self.n
        return [(p, q) for p in range(1, n) for q in range(1, n)]

    def evaluate(self, sigma: Assignment = DEFAULT) -> list[list[int]]:
        return [[self[p, q].evaluate(sigma) for q in range(self.n + 1)] for p in range(self.n + 1)]

    def residues(self, m: int, sigma: Assignment = DEFAULT) -> list[list[int]]:
        return [[v % m for v in row] for row in self.evaluate(sigma)]

    def same_entries(self, other: "_Grid") -> bool:
        """Polynomial equality of every entry."""
        if self.n != other.n:
            return False
        return all(self[pq] == other[pq] for pq in fundamental_domain(self.n))

    def is_inner_supported(self) -> bool:
        return all(self[pq].is_zero() for pq in self.outer_positions())

    def _combine(self, other, fn):
        if not isinstance(other, _Grid):
            return NotImplemented
        if other.n != self.n:
            raise DiamondError(f"dimension mismatch: {self.n} vs {other.n}")
        a, b = self, other
        return lambda p, q: fn(a[p, q], b[p, q])

    def _combine_raw(self, other, fn):
        a, b = self, other
        if a._raw is None and b._raw is None:
            return None
        return lambda p, q: fn(a.raw(p, q), b.raw(p, q))

    def __str__(self):
        return render_rotated([[str(x) for x in row] for row in self.grid()])


class Increment(_Grid):
    """A dual-symmetric grid without the ``h[0][0] == 1`` constraint.

    Blowup shifts and differences of diamonds are increments.
    """

    __slots__ = ()

    @classmethod
    def zero(cls, n: int) -> "Increment":
        return cls(n, lambda p, q: ZERO)

    @classmethod
    def from_entries(cls, n: int, entries: Mapping) -> "Increment":
        data = _fill_dual(n, entries, require_unit=False)
        return cls(n, lambda p, q: data.get((p, q), ZERO))

    def __add__(self, other):
        f = self._combine(other, lambda x, y: x + y)
        if f is NotImplemented:
            return f
        return Increment(self.n, f, self._combine_raw(other, lambda x, y: x + y))

    def __sub__(self, other):
        f = self._combine(other, lambda x, y: x - y)
        if f is NotImplemented:
            return f
        return Increment(self.n, f, self._combine_raw(other, lambda x, y: x - y))

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        src = self
        raw = None if src._raw is None else (lambda p, q: src.raw(p, q) * k)
        return Increment(self.n, lambda p, q: src[p, q] * k, raw)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1


class HodgeDiamond(_Grid):
    """Symbolic Hodge diamond; ``h[0][0] == 1`` is checked on construction."""

    __slots__ = ()

    def __init__(self, n, fetch, raw=None):
        super().__init__(n, fetch, raw)
        if self[0, 0] != ONE:
            raise DiamondError(f"h^{{0,0}} must be 1, got {self[0, 0]}")

    @classmethod
    def point(cls) -> "HodgeDiamond":
        return cls(0, lambda p, q: ONE)

    def __add__(self, other):
        if not isinstance(other, Increment):
            return NotImplemented
        f = self._combine(other, lambda x, y: x + y)
        return HodgeDiamond(self.n, f, self._combine_raw(other, lambda x, y: x + y))

    def __sub__(self, other):
        if not isinstance(other, _Grid):
            return NotImplemented
        f = self._combine(other, lambda x, y: x - y)
        raw = self._combine_raw(other, lambda x, y: x - y)
        if isinstance(other, HodgeDiamond):
            return Increment(self.n, f, raw)
        return HodgeDiamond(self.n, f, raw)

    def __eq__(self, other):
        if not isinstance(other, HodgeDiamond):
            return NotImplemented
        return self.same_entries(other)

    __hash__ = None

    def __repr__(self):
        return f"HodgeDiamond(n={self.n})"


def _fill_dual(n: int, generator: Mapping, require_unit: bool) -> dict:
    data = {}
    for (p, q), v in generator.items():
        if not (0 <= p <= n and 0 <= q <= n):
            raise DiamondError(f"entry ({p},{q}) outside dimension {n}")
        v = SymPoly.const(v) if isinstance(v, int) else v
        if not isinstance(v, SymPoly):
            raise DiamondError(f"entry ({p},{q}) is not a polynomial")
        key = representative(n, p, q)
        if key in data and data[key] != v:
            raise DiamondError(
                f"conflicting values for dual pair ({p},{q})/({n - p},{n - q}): {data[key]} vs {v}"
            )
        data[key] = v
    if require_unit:
        missing = [pq for pq in fundamental_domain(n) if pq not in data]
        if missing:
            raise DiamondError(f"no value supplied for entries {missing}")
    return data


def make_diamond(n: int, generator: Mapping) -> HodgeDiamond:
    """Diamond from values on (at least) one member of every dual pair.

    Dual entries are filled by copying; supplying both members of a pair
    with different values is an error, as is ``h^{0,0} != 1``.
    """
    data = _fill_dual(n, generator, require_unit=True)
    if data[(0, 0)] != ONE:
        raise DiamondError(f"h^{{0,0}} must be 1, got {data[(0, 0)]}")
    return HodgeDiamond(n, lambda p, q: data[(p, q)])


def diamond_equals_mod(a: _Grid, b: _Grid, m: int) -> bool:
    """True iff every entry of ``a - b`` is certified ``0 mod m``."""
    if a.n != b.n:
        raise DiamondError(f"dimension mismatch: {a.n} vs {b.n}")
    return all((a[pq] - b[pq]).const_mod(m) == 0 for pq in fundamental_domain(a.n))


def render_rotated(cells: list[list[str]]) -> str:
    """Classical rotated layout: ``h^{n,n}`` on top, ``h^{0,0}`` at the bottom.

    Row ``k`` lists ``h^{p,k-p}`` with ``p`` decreasing from left to right.
    """
    n = len(cells) - 1
    width = max(len(c) for row in cells for c in row)
    width = max(width, 1)
    rows = []
    for k in range(2 * n, -1, -1):
        items = [cells[p][k - p] for p in range(min(k, n), max(0, k - n) - 1, -1)]
        rows.append(items)
    total = (n + 1) * (width + 1) * 2
    lines = []
    for items in rows:
        line = (" " * (width + 1)).join(c.center(width) for c in items)
        lines.append(line.center(total).rstrip())
    # strip common leading whitespace
    pad = min(len(ln) - len(ln.lstrip()) for ln in lines)
    return "\n".join(ln[pad:] for ln in lines)


def render_grid(cells: list[list[str]]) -> str:
    """Row-per-``p`` layout for diffing."""
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


# -- targets ------------------------------------------------------------------


def index_set_J(n: int) -> list[tuple[int, int]]:
    """Outer positions ``(1,0)..(n,0), (0,1)..(0,n)``."""
    return [(p, 0) for p in range(1, n + 1)] + [(0, q) for q in range(1, n + 1)]


def index_set_I(n: int) -> list[tuple[int, int]]:
    """Second-outer positions ``(1,q)`` and ``(p,1)`` for ``1 <= p, q <= n-1``."""
    out = [(1, q) for q in range(1, n)]
    out += [(p, 1) for p in range(2, n)]
    return out


class TargetsError(ValueError):
    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class ResidueTargets:
    """Partial map ``(p, q) -> residue mod m`` consistent with Serre duality."""

    __slots__ = ("m", "n", "entries")

    def __init__(self, m: int, n: int, entries: Mapping):
        if not isinstance(m, int) or isinstance(m, bool) or m < 2:
            raise TargetsError(f"modulus must be an integer >= 2, got {m!r}", "m")
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise TargetsError(f"dimension must be a nonnegative integer, got {n!r}", "n")
        clean = {}
        for (p, q), v in entries.items():
            key = f"{p},{q}"
            if not (0 <= p <= n and 0 <= q <= n):
                raise TargetsError(f"entry {key} outside dimension {n}", key)
            if not isinstance(v, int) or isinstance(v, bool):
                raise TargetsError(f"entry {key} must be an integer, got {v!r}", key)
            clean[(p, q)] = v % m
        if (0, 0) in clean and clean[(0, 0)] != 1 % m:
            raise TargetsError(f"entry 0,0 must be 1 mod {m}, got {clean[(0, 0)]}", "0,0")
        for (p, q), v in sorted(clean.items()):
            dual = (n - p, n - q)
            if dual in clean and clean[dual] != v:
                raise TargetsError(
                    f"entry {p},{q} = {v} violates Serre duality with {dual[0]},{dual[1]} = {clean[dual]}",
                    f"{p},{q}",
                )
        self.m = m
        self.n = n
        self.entries = dict(sorted(clean.items()))

    def __eq__(self, other):
        if not isinstance(other, ResidueTargets):
            return NotImplemented
        return (self.m, self.n, self.entries) == (other.m, other.n, other.entries)

    def __repr__(self):
        return f"ResidueTargets(m={self.m}, n={self.n}, entries={self.entries})"

    def value(self, p: int, q: int, default: int = 0) -> int:
        """Target at ``(p, q)``, via the dual position if needed."""
        if (p, q) in self.entries:
            return self.entries[(p, q)]
        dual = (self.n - p, self.n - q)
        if dual in self.entries:
            return self.entries[dual]
        if (p, q) == (0, 0) or dual == (0, 0):
            return 1 % self.m
        return default % self.m

    def completed(self) -> dict:
        """Every position, omitted ones defaulting to 0 (and ``h^{0,0}`` to 1)."""
        n = self.n
        return {(p, q): self.value(p, q) for p in range(n + 1) for q in range(n + 1)}

    @property
    def J(self) -> list[tuple[int, int]]:
        return index_set_J(self.n)

    @property
    def I(self) -> list[tuple[int, int]]:  # noqa: E743
        return index_set_I(self.n)

    def outer(self) -> dict:
        return {pq: self.value(*pq) for pq in index_set_J(self.n)}

    def inner(self) -> dict:
        n = self.n
        return {(p, q): self.value(p, q) for p in range(1, n) for q in range(1, n)}

    @classmethod
    def from_json(cls, doc) -> "ResidueTargets":
        if isinstance(doc, (str, bytes)):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise TargetsError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise TargetsError("targets document must be a JSON object")
        for key in ("m", "n", "entries"):
            if key not in doc:
                raise TargetsError(f"missing field {key!r}", key)
        raw = doc["entries"]
        if not isinstance(raw, dict):
            raise TargetsError("'entries' must be an object", "entries")
        entries = {}
        for key, v in raw.items():
            parts = key.split(",")
            try:
                p, q = (int(x) for x in parts)
            except ValueError:
                raise TargetsError(f"entry key {key!r} is not of the form 'p,q'", key) from None
            if (p, q) in entries:
                raise TargetsError(f"duplicate entry key {key!r}", key)
            entries[(p, q)] = v
        return cls(doc["m"], doc["n"], entries)

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n,
                "entries": {f"{p},{q}": v for (p, q), v in self.entries.items()}}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def check_targets(d: _Grid, t: ResidueTargets, sigma: Assignment = DEFAULT) -> VerificationReport:
    """Compare every targeted entry of ``d`` (evaluated under ``sigma``) with ``t``.

    Each record also says whether ``const_mod`` pins the entry independently
    of all unknowns.  Mismatches are report content, not errors.
    """
    if d.n != t.n:
        raise DiamondError(f"diamond has dimension {d.n}, targets have {t.n}")
    m = t.m
    records = []
    for (p, q), want in t.entries.items():
        entry = d[p, q]
        got = entry.evaluate(sigma) % m
        cert = entry.const_mod(m)
        records.append(EntryCheck(p, q, want, got, cert is not None))
    return VerificationReport(m, tuple(records))
