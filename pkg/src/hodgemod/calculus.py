"""Atom diamonds and the diamond combinators.

Combinators return lazy diamonds; nothing is expanded until an entry is read.

>>> P1 = atom(AtomSpec.projective_space(1), "a")
>>> str(kuenneth(P1, P1)[1, 1])
'2'
"""

from __future__ import annotations

from dataclasses import dataclass

from .diamond import ONE, ZERO, DiamondError, HodgeDiamond, Increment, make_diamond, representative
from .poly import DEFAULT, Assignment, SymPoly, unknown_id

__all__ = [
    "AtomSpec",
    "atom",
    "blowup",
    "blowup_shift",
    "chi_section",
    "kuenneth",
    "lefschetz_section",
    "power",
    "projective_space",
]

ATOM_KINDS = ("point", "projective_space", "elliptic_curve", "serre_surface", "hypersurface")


@dataclass(frozen=True)
class AtomSpec:
    """A variety with a known (or partly known) diamond.

    ``hypersurface`` with parameter ``d`` is a smooth degree-``d``
    hypersurface in ``P^{d-1}``, of dimension ``d - 2``.
    """

    kind: str
    param: int | None = None

    def __post_init__(self):
        if self.kind not in ATOM_KINDS:
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if self.kind == "projective_space":
            if not isinstance(self.param, int) or self.param < 0:
                raise ValueError("projective_space needs k >= 0")
        elif self.kind == "hypersurface":
            if not isinstance(self.param, int) or self.param < 3:
                raise ValueError("hypersurface needs degree d >= 3")
        elif self.param is not None:
            raise ValueError(f"{self.kind} takes no parameter")

    @classmethod
    def point(cls):
        return cls("point")

    @classmethod
    def projective_space(cls, k: int):
        return cls("projective_space", k)

    @classmethod
    def elliptic_curve(cls):
        return cls("elliptic_curve")

    @classmethod
    def serre_surface(cls):
        return cls("serre_surface")

    @classmethod
    def hypersurface(cls, d: int):
        return cls("hypersurface", d)

    @property
    def dim(self) -> int:
        return {
            "point": 0,
            "projective_space": self.param,
            "elliptic_curve": 1,
            "serre_surface": 2,
            "hypersurface": (self.param or 0) - 2,
        }[self.kind]

    def to_params(self) -> dict:
        out = {"atom": self.kind}
        if self.kind == "projective_space":
            out["k"] = self.param
        elif self.kind == "hypersurface":
            out["d"] = self.param
        return out

    @classmethod
    def from_params(cls, params: dict) -> "AtomSpec":
        kind = params.get("atom")
        if kind == "projective_space":
            return cls(kind, params.get("k"))
        if kind == "hypersurface":
            return cls(kind, params.get("d"))
        return cls(kind)

    def __str__(self):
        if self.kind == "projective_space":
            return f"P^{self.param}"
        if self.kind == "hypersurface":
            return f"hypersurface({self.param})"
        return self.kind


def hname(p: int, q: int) -> str:
    return f"h{p}{q}" if p < 10 and q < 10 else f"h{p},{q}"


def projective_space(k: int) -> HodgeDiamond:
    return HodgeDiamond(k, lambda p, q: ONE if p == q else ZERO)


def atom(spec: AtomSpec, path: str) -> HodgeDiamond:
    """Diamond of an atom; unpinned entries become unknowns named from ``path``."""
    kind = spec.kind
    if kind == "point":
        return HodgeDiamond.point()
    if kind == "projective_space":
        return projective_space(spec.param)
    if kind == "elliptic_curve":
        return make_diamond(1, {(0, 0): 1, (1, 0): 1, (0, 1): 1})
    if kind == "serre_surface":
        # only h^{1,0} = 0 and h^{0,1} = 1 are known
        return make_diamond(2, {
            (0, 0): 1, (1, 0): 0, (0, 1): 1,
            (0, 2): SymPoly.var(unknown_id(path, kind, "h02")),
            (1, 1): SymPoly.var(unknown_id(path, kind, "h11")),
        })
    n = spec.dim
    gen = {}
    for p in range(n + 1):
        for q in range(n + 1):
            if representative(n, p, q) != (p, q):
                continue
            if (p, q) == (0, 0) or (p, q) == (0, n):
                gen[(p, q)] = ONE
            else:
                # one unknown per transposed pair (p, q), (q, p)
                gen[(p, q)] = SymPoly.var(unknown_id(path, kind, hname(min(p, q), max(p, q))))
    return make_diamond(n, gen)


def kuenneth(x: HodgeDiamond, y: HodgeDiamond) -> HodgeDiamond:
    """Diamond of a product: the 2-d convolution of the two grids."""
    nx, ny = x.n, y.n

    def entry(p, q):
        xs, ys = [], []
        for p1 in range(max(0, p - ny), min(p, nx) + 1):
            for q1 in range(max(0, q - ny), min(q, nx) + 1):
                xs.append(x[p1, q1])
                ys.append(y[p - p1, q - q1])
        return SymPoly.dot(xs, ys)

    if nx == 0:
        return y
    if ny == 0:
        return x
    return HodgeDiamond(nx + ny, entry, raw=entry)


def power(x: HodgeDiamond, k: int) -> HodgeDiamond:
    if k < 0:
        raise ValueError("power needs k >= 0")
    out = HodgeDiamond.point()
    base = x
    while k:
        if k & 1:
            out = kuenneth(out, base)
        k >>= 1
        if k:
            base = kuenneth(base, base)
    return out


def blowup_shift(z: HodgeDiamond, r: int) -> Increment:
    """Increment from blowing up a centre with diamond ``z`` in codimension ``r``.

    ``shift[p][q] = sum_{i=1}^{r-1} z[p-i][q-i]``, out-of-range terms zero;
    the ambient dimension is ``z.n + r``.
    """
    if r < 2:
        raise DiamondError(f"blowup centre must have codimension >= 2, got {r}")
    nz = z.n

    def entry(p, q):
        total = ZERO
        for i in range(1, r):
            a, b = p - i, q - i
            if 0 <= a <= nz and 0 <= b <= nz:
                total = total + z[a, b]
        return total

    return Increment(nz + r, entry, raw=entry)


def blowup(x: HodgeDiamond, z: HodgeDiamond) -> HodgeDiamond:
    codim = x.n - z.n
    if codim < 2:
        raise DiamondError(f"centre of dimension {z.n} has codimension {codim} < 2 in dimension {x.n}")
    return x + blowup_shift(z, codim)


def _section(x: HodgeDiamond, path: str, tag: str, pinned=None) -> HodgeDiamond:
    if x.n < 2:
        raise DiamondError("a section needs an ambient of dimension >= 2")
    n = x.n - 1
    pinned = pinned or {}
    middle = {}

    def entry(p, q):
        # called on representatives only, so p + q <= n
        if p + q <= n - 1:
            return x[p, q]
        if (p, q) in pinned:
            return pinned[(p, q)]
        if (p, q) not in middle:
            middle[(p, q)] = SymPoly.var(unknown_id(path, tag, hname(p, q)))
        return middle[(p, q)]

    def raw(p, q):
        if p + q >= n + 1:
            return x[n - p, n - q]
        return entry(*representative(n, p, q))

    return HodgeDiamond(n, entry, raw=raw)


def lefschetz_section(x: HodgeDiamond, path: str) -> HodgeDiamond:
    """Sufficiently ample smooth divisor in ``x``.

    Entries with ``p + q <= n - 1`` (``n = x.n - 1``) are inherited, the
    middle row is fresh unknowns shared per dual pair, the rest is dual.
    """
    return _section(x, path, "mid")


def chi_section(x: HodgeDiamond, b: int, m: int, sigma: Assignment = DEFAULT, path: str = "chi"):
    """Section whose ``h^{0,n} = h^{n,0}`` is pinned to ``b`` mod ``m``.

    The ambient is first blown up in ``m`` points (invisible mod ``m``), which
    is what lets the Euler characteristic of the polarisation be tuned.
    Returns ``(diamond, metadata)`` where the metadata carries the tuning
    computed from the model values of ``x`` under ``sigma``: ``e``, the
    target ``chi(L^{-1}) mod m``, ``chi`` = ``chi(O_X)``, and ``r``, the
    number of exceptional divisors to twist by.
    """
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if not 0 <= b < m:
        raise ValueError(f"b must lie in [0, {m}), got {b}")
    y, _ = chi_section_parts(x, b, m, path)
    return y, chi_metadata(x, b, m, sigma)


def chi_section_parts(x: HodgeDiamond, b: int, m: int, path: str):
    """``(section, mdelta)`` where ``mdelta`` is the ``m``-point blowup increment."""
    mdelta = blowup_shift(HodgeDiamond.point(), x.n) * m
    n = x.n - 1
    pin = SymPoly.const(b) + SymPoly.var(unknown_id(path, "chi", hname(0, n))) * m
    return _section(x + mdelta, path, "mid", pinned={(0, n): pin}), mdelta


def chi_metadata(x: HodgeDiamond, b: int, m: int, sigma: Assignment = DEFAULT) -> dict:
    n = x.n - 1
    h0 = [x[0, q].evaluate(sigma) for q in range(x.n + 1)]
    sign = -1 if n % 2 else 1
    e = (sign * (h0[n] - h0[n + 1] - b)) % m
    chi = sum((-1) ** q * v for q, v in enumerate(h0))
    return {"b": b, "e": e, "chi": chi, "r": (chi - e) % m}
