import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgemod.calculus import (
    AtomSpec,
    atom,
    blowup,
    blowup_shift,
    chi_section,
    kuenneth,
    lefschetz_section,
    power,
    projective_space,
)
from hodgemod.diamond import DiamondError, HodgeDiamond, diamond_equals_mod, fundamental_domain, make_diamond
from hodgemod.oracle import _product
from hodgemod.poly import Assignment, SymPoly

from conftest import UIDS, assignments_values, polys

E = atom(AtomSpec.elliptic_curve(), "e")
S = atom(AtomSpec.serre_surface(), "s")
PT = HodgeDiamond.point()


@st.composite
def diamonds(draw, max_n=3):
    n = draw(st.integers(0, max_n))
    gen = {pq: draw(polys(max_terms=2, max_degree=2)) for pq in fundamental_domain(n)}
    gen[(0, 0)] = SymPoly.const(1)
    return make_diamond(n, gen)


def assert_dual(d):
    n = d.n
    assert d.raw(0, 0) == 1
    for p in range(n + 1):
        for q in range(n + 1):
            assert d.raw(p, q) == d.raw(n - p, n - q), (p, q)


def test_atom_projective_plane():
    assert atom(AtomSpec.projective_space(2), "x").evaluate() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_atom_serre_surface():
    a, b = SymPoly.var("node:s/serre_surface/h02"), SymPoly.var("node:s/serre_surface/h11")
    assert (S[1, 0], S[0, 1], S[2, 1], S[1, 2]) == (0, 1, 1, 0)
    assert S[2, 0] == a and S[0, 2] == a and S[1, 1] == b


def test_atom_hypersurface():
    h = atom(AtomSpec.hypersurface(4), "z")
    assert h.n == 2
    assert h[2, 0] == 1 and h[0, 2] == 1
    assert h[1, 0] == h[0, 1] == h[2, 1] and not h[1, 0].is_constant()
    assert not h[1, 1].is_constant() and h[1, 1] != h[1, 0]


@pytest.mark.parametrize("kind,param", [("point", 1), ("projective_space", -1), ("hypersurface", 2), ("torus", None)])
def test_atom_spec_validation(kind, param):
    with pytest.raises(ValueError):
        AtomSpec(kind, param)


def test_atom_spec_params_round_trip():
    for spec in (AtomSpec.point(), AtomSpec.projective_space(3), AtomSpec.hypersurface(5), AtomSpec.serre_surface()):
        assert AtomSpec.from_params(spec.to_params()) == spec


def test_kuenneth_examples():
    p1 = projective_space(1)
    pp = kuenneth(p1, p1)
    assert pp[1, 1] == 2 and pp[1, 0] == 0
    ee = kuenneth(E, E)
    assert (ee[1, 0], ee[1, 1], ee[2, 1]) == (2, 4, 2)
    se = kuenneth(S, E)
    assert se[1, 0] == 1 and se[0, 1] == 2
    assert se[0, 2] == SymPoly.var("node:s/serre_surface/h02") + 1


def test_power_examples():
    assert power(E, 0).n == 0
    assert power(E, 2) == kuenneth(E, E)
    s2 = power(S, 2)
    assert s2[0, 1] == 2 and s2[1, 0] == 0
    with pytest.raises(ValueError):
        power(E, -1)


def test_blowup_shift_examples():
    sh = blowup_shift(PT, 3)
    assert [(p, q) for p in range(4) for q in range(4) if sh[p, q] != 0] == [(1, 1), (2, 2)]
    sh = blowup_shift(projective_space(1), 2)
    assert sh[1, 1] == 1 and sh[2, 2] == 1 and sh[2, 1] == 0
    n = 5
    z = atom(AtomSpec.hypersurface(n), "z")
    sh = blowup_shift(z, 2)
    assert sh[n - 1, 1] == 1 and sh[1, n - 1] == 1
    with pytest.raises(DiamondError):
        blowup_shift(PT, 1)


def test_blowup_examples():
    b = blowup(projective_space(3), PT)
    assert b[1, 1] == 2 and b[2, 2] == 2
    x = projective_space(2)
    for m in (2, 3, 5):
        y = x
        for _ in range(m):
            y = blowup(y, PT)
        assert diamond_equals_mod(x, y, m)
    with pytest.raises(DiamondError):
        blowup(projective_space(2), E)


def test_lefschetz_section_of_p4():
    y = lefschetz_section(projective_space(4), "7")
    assert y.n == 3
    assert y[1, 1] == 1 and y[2, 2] == 1
    assert y[3, 0] == y[0, 3] and not y[0, 3].is_constant()
    assert y[2, 1] == y[1, 2] and not y[2, 1].is_constant()
    assert y[0, 3] != y[2, 1]


def test_lefschetz_twice_keeps_h11():
    y = lefschetz_section(lefschetz_section(projective_space(5), "a"), "b")
    assert y.n == 3 and y[1, 1] == 1


def test_lefschetz_copies_low_row():
    x = power(S, 2)
    y = lefschetz_section(x, "c")
    for q in range(y.n):
        assert y[0, q] == x[0, q]
    with pytest.raises(DiamondError):
        lefschetz_section(E, "c")


@pytest.mark.parametrize("m", [2, 3, 5])
@pytest.mark.parametrize("b", [0, 1])
def test_chi_section_of_p4(m, b):
    y, meta = chi_section(projective_space(4), b, m, Assignment(), "9")
    assert meta["e"] == b % m
    assert meta["r"] == (1 - b) % m
    assert y[0, 3].const_mod(m) == b
    assert y[3, 0] == y[0, 3]
    assert_dual(y)


def test_chi_section_rejects_bad_b():
    with pytest.raises(ValueError):
        chi_section(projective_space(3), 3, 3)


def test_unknown_ids_are_deterministic():
    a = lefschetz_section(kuenneth(S, E), "5")
    b = lefschetz_section(kuenneth(atom(AtomSpec.serre_surface(), "s"), E), "5")
    assert a == b


@settings(max_examples=40)
@given(diamonds(), diamonds())
def test_kuenneth_commutative_with_unit(x, y):
    assert kuenneth(x, y) == kuenneth(y, x)
    assert kuenneth(x, PT) == x and kuenneth(PT, x) == x
    assert_dual(kuenneth(x, y))


@settings(max_examples=25)
@given(diamonds(2), diamonds(2), diamonds(2))
def test_kuenneth_associative(x, y, z):
    assert kuenneth(kuenneth(x, y), z) == kuenneth(x, kuenneth(y, z))


@settings(max_examples=40)
@given(diamonds(4), diamonds(2))
def test_blowup_never_changes_outer_entries(x, z):
    if x.n - z.n < 2:
        return
    y = blowup(x, z)
    n = y.n
    for p, q in y.outer_positions():
        assert y[p, q] == x[p, q]
    assert_dual(y)
    assert n == x.n


@settings(max_examples=30)
@given(diamonds(4), st.integers(2, 6))
def test_m_fold_point_blowup_is_invisible_mod_m(x, m):
    if x.n < 2:
        return
    y = x
    for _ in range(m):
        y = blowup(y, PT)
    assert diamond_equals_mod(x, y, m)


def int_grid(d, sigma):
    return d.evaluate(sigma)


@settings(max_examples=30)
@given(diamonds(3), diamonds(3), assignments_values)
def test_eval_commutes_with_kuenneth(x, y, values):
    sigma = Assignment(values)
    assert int_grid(kuenneth(x, y), sigma) == _product(int_grid(x, sigma), int_grid(y, sigma))


@settings(max_examples=30)
@given(diamonds(4), diamonds(2), assignments_values)
def test_eval_commutes_with_blowup(x, z, values):
    if x.n - z.n < 2:
        return
    sigma = Assignment(values)
    want = int_grid(x, sigma)
    zi = int_grid(z, sigma)
    r = x.n - z.n
    for i in range(1, r):
        for a in range(z.n + 1):
            for b in range(z.n + 1):
                want[a + i][b + i] += zi[a][b]
    assert int_grid(blowup(x, z), sigma) == want


def test_pool_is_used():
    # guard: the shared strategy pool must stay non-empty
    assert UIDS
