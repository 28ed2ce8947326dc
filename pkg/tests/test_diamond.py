import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hodgemod.calculus import AtomSpec, atom, blowup, projective_space
from hodgemod.diamond import (
    DiamondError,
    HodgeDiamond,
    Increment,
    ResidueTargets,
    TargetsError,
    check_targets,
    diamond_equals_mod,
    fundamental_domain,
    index_set_I,
    index_set_J,
    make_diamond,
    render_rotated,
    representative,
)
from hodgemod.poly import Assignment, SymPoly

u = SymPoly.var("node:x/u")


def test_make_diamond_projective_plane():
    d = make_diamond(2, {(0, 0): 1, (1, 0): 0, (2, 0): 0, (1, 1): 1, (0, 1): 0, (0, 2): 0})
    assert d.evaluate() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_make_diamond_elliptic_curve():
    d = make_diamond(1, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})
    assert d.evaluate() == [[1, 1], [1, 1]]


def test_make_diamond_duality_fills_asymmetric_entries():
    d = make_diamond(2, {(0, 0): 1, (1, 0): 0, (0, 1): 1, (2, 0): u, (1, 1): u})
    assert d[1, 2] == 0 and d[2, 1] == 1
    assert d[1, 0] != d[0, 1]  # Hodge symmetry is not imposed


def test_make_diamond_errors():
    with pytest.raises(DiamondError, match="0,0"):
        make_diamond(1, {(0, 0): 2, (1, 0): 1, (0, 1): 1})
    with pytest.raises(DiamondError, match="conflicting"):
        make_diamond(1, {(0, 0): 1, (1, 0): 1, (0, 1): 2, (1, 0): 1, (0, 1): 1, (1, 1): 3})
    with pytest.raises(DiamondError, match="no value"):
        make_diamond(2, {(0, 0): 1})
    with pytest.raises(DiamondError, match="outside"):
        make_diamond(1, {(0, 0): 1, (1, 0): 0, (0, 1): 0, (2, 2): 0})


def test_diamond_rejects_bad_unit():
    with pytest.raises(DiamondError):
        HodgeDiamond(1, lambda p, q: SymPoly.const(3))


@pytest.mark.parametrize("n", range(0, 7))
def test_representatives_cover_each_dual_pair_once(n):
    seen = set()
    for p in range(n + 1):
        for q in range(n + 1):
            r = representative(n, p, q)
            assert r == representative(n, n - p, n - q)
            seen.add(r)
    assert sorted(seen) == sorted(fundamental_domain(n))


def test_diamond_equals_mod_examples():
    p2 = projective_space(2)
    pt = HodgeDiamond.point()
    once = blowup(p2, pt)
    assert not diamond_equals_mod(p2, once, 2)
    x = p2
    for _ in range(3):
        x = blowup(x, pt)
    assert diamond_equals_mod(p2, x, 3)
    delta = Increment.from_entries(2, {(1, 1): u})
    assert diamond_equals_mod(p2, p2 + delta * 5, 5)
    with pytest.raises(DiamondError):
        diamond_equals_mod(p2, projective_space(3), 2)


def test_index_sets():
    assert index_set_J(2) == [(1, 0), (2, 0), (0, 1), (0, 2)]
    assert sorted(index_set_I(3)) == [(1, 1), (1, 2), (2, 1)]
    assert index_set_I(1) == []


def test_targets_normalize_and_complete():
    t = ResidueTargets(3, 2, {(1, 0): 5, (1, 1): -1})
    assert t.entries == {(1, 0): 2, (1, 1): 2}
    assert t.value(1, 2) == 2  # via duality
    assert t.value(2, 1) == 0
    assert t.value(0, 0) == 1 and t.value(2, 2) == 1
    assert t.value(0, 1) == 0
    full = t.completed()
    assert len(full) == 9 and full[(1, 2)] == 2


def test_targets_errors_name_the_key():
    with pytest.raises(TargetsError) as exc:
        ResidueTargets(2, 2, {(1, 0): 0, (1, 2): 1})
    assert exc.value.key == "1,0"
    with pytest.raises(TargetsError) as exc:
        ResidueTargets(5, 1, {(0, 0): 2})
    assert exc.value.key == "0,0"
    with pytest.raises(TargetsError) as exc:
        ResidueTargets(5, 1, {(3, 0): 2})
    assert exc.value.key == "3,0"
    with pytest.raises(TargetsError):
        ResidueTargets(1, 1, {})


def test_targets_json_round_trip():
    t = ResidueTargets(4, 3, {(1, 0): 1, (2, 1): 3})
    assert ResidueTargets.from_json(t.dumps()) == t
    assert ResidueTargets.from_json(t.to_json()) == t


@pytest.mark.parametrize("doc,key", [
    ('{"m": 2, "n": 2}', "entries"),
    ('{"m": 2, "n": 2, "entries": {"1": 0}}', "1"),
    ('{"m": 2, "n": 2, "entries": {"1,0": "x"}}', "1,0"),
    ('{"m": 0, "n": 2, "entries": {}}', "m"),
])
def test_targets_json_errors(doc, key):
    with pytest.raises(TargetsError) as exc:
        ResidueTargets.from_json(doc)
    assert exc.value.key == key


def test_targets_json_rejects_non_object():
    with pytest.raises(TargetsError):
        ResidueTargets.from_json("[1, 2]")
    with pytest.raises(TargetsError):
        ResidueTargets.from_json("{not json")


def test_check_targets_examples():
    p2 = projective_space(2)
    rep = check_targets(p2, ResidueTargets(3, 2, {(1, 1): 1}))
    assert rep.passed and rep.all_certified

    s = atom(AtomSpec.serre_surface(), "s")
    for m in (2, 3, 7):
        rep = check_targets(s, ResidueTargets(m, 2, {(1, 0): 0, (0, 1): 1}))
        assert rep.passed and rep.all_certified

    sigma = Assignment({"node:s/serre_surface/h11": 1})
    rep = check_targets(s, ResidueTargets(2, 2, {(1, 1): 0}), sigma)
    assert not rep.passed
    assert rep.failing_entries[0].got == 1
    assert not rep.entries[0].certified


def test_check_targets_dimension_mismatch():
    with pytest.raises(DiamondError):
        check_targets(projective_space(2), ResidueTargets(2, 3, {}))


def test_report_json_schema():
    rep = check_targets(projective_space(1), ResidueTargets(2, 1, {(1, 1): 1}))
    doc = json.loads(rep.dumps())
    assert doc == {"pass": True, "m": 2, "audits": [],
                   "entries": [{"p": 1, "q": 1, "expected": 1, "got": 1, "certified": True}]}


def test_render_rotated_layout():
    cells = [["a", "b"], ["c", "d"]]
    # top h^{1,1}, then h^{1,0} h^{0,1}, then h^{0,0}
    assert render_rotated(cells).splitlines() == [" d", "c  b", " a"]


@given(st.integers(0, 5), st.data())
def test_generated_diamonds_satisfy_duality(n, data):
    gen = {pq: SymPoly.const(data.draw(st.integers(0, 9))) for pq in fundamental_domain(n)}
    gen[(0, 0)] = SymPoly.const(1)
    d = make_diamond(n, gen)
    for p in range(n + 1):
        for q in range(n + 1):
            assert d[p, q] == d[n - p, n - q]
    assert d[0, 0] == 1
