"""Acceptance gate: six criteria, each printed as one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines appear in
the "acceptance criteria" section of the terminal summary.
"""

import random
import time

import pytest

from hodgemod.calculus import AtomSpec
from hodgemod.cli import random_targets
from hodgemod.diamond import ResidueTargets, check_targets, index_set_J
from hodgemod.oracle import oracle_compare
from hodgemod.plan import BLOWUP_KINDS, Evaluator, Plan
from hodgemod.planner import PlannerContext, solve_full, solve_inner
from hodgemod.poly import Assignment
from hodgemod.verify import verify

from conftest import ACCEPTANCE_LINES

C1_SIGMAS = 100
C2_DIMS, C2_MODULI, C2_TRIALS = (3, 4, 5), (2, 3, 4, 6), 50
C3_FRESH = 20
C6_DIMS, C6_MODULI, C6_TRIALS = (3, 4), (2, 3), 25


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")


def outer_part(node):
    """The solve_outer plan under the birational blowups added for inner targets."""
    while node.kind in BLOWUP_KINDS:
        node = node.children[0]
    return node


def surface_tuples():
    for a10 in range(2):
        for a01 in range(2):
            for a20 in range(2):
                for a11 in range(2):
                    t = ResidueTargets(2, 2, {(1, 0): a10, (0, 1): a01, (2, 0): a20, (1, 1): a11})
                    yield ResidueTargets(2, 2, t.completed())


class Run:
    """One solved and verified instance."""

    __slots__ = ("targets", "sigma", "plan", "evaluator", "report")

    def __init__(self, targets, sigma):
        self.targets = targets
        self.sigma = sigma
        ctx = PlannerContext(targets.m, sigma)
        self.plan = solve_full(targets.n, targets.m, targets, ctx)
        self.evaluator = ctx.evaluator
        self.report = verify(self.plan, targets, sigma, ctx.evaluator)


@pytest.fixture(scope="module")
def c1_runs():
    t0 = time.perf_counter()
    runs = []
    for i, targets in enumerate(surface_tuples()):
        for j in range(C1_SIGMAS):
            runs.append(Run(targets, Assignment.random(1000 * i + j)))
    return runs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def c2_runs():
    rng = random.Random(20240601)
    t0 = time.perf_counter()
    runs = []
    for n in C2_DIMS:
        for m in C2_MODULI:
            for _ in range(C2_TRIALS):
                targets = random_targets(n, m, rng)
                runs.append(Run(targets, Assignment.random(rng.randrange(2 ** 32))))
    return runs, time.perf_counter() - t0


def test_criterion_1_exhaustive_surfaces(c1_runs):
    runs, elapsed = c1_runs
    tuples = {tuple(sorted(r.targets.entries.items())) for r in runs}
    failed = [r for r in runs if not r.report.passed]
    asym = [r for r in runs if r.targets.value(1, 0) == 0 and r.targets.value(0, 1) == 1]
    ok = len(tuples) == 16 and len(runs) >= 16 * 100 and not failed and elapsed < 10.0 and asym
    record(1, "n=2, m=2 exhaustive", ok,
           f"{len(tuples)} tuples x {C1_SIGMAS} assignments, {len(runs) - len(failed)}/{len(runs)} verified, "
           f"{elapsed:.2f} s (limit 10 s)")
    assert len(tuples) == 16
    assert not failed
    assert all(r.report.passed for r in asym)
    assert elapsed < 10.0


def test_criterion_2_random_full_diamonds(c2_runs):
    runs, elapsed = c2_runs
    failed = [r for r in runs if not r.report.passed]
    per = {}
    for r in runs:
        per[(r.targets.n, r.targets.m)] = per.get((r.targets.n, r.targets.m), 0) + 1
    complete = all(len(r.report.entries) == (r.targets.n + 1) ** 2 for r in runs)
    ok = not failed and complete and min(per.values()) >= 50 and len(per) == 12 and elapsed < 60.0
    record(2, "n in {3,4,5}, m in {2,3,4,6} random targets", ok,
           f"{len(runs) - len(failed)}/{len(runs)} verified exactly over {len(per)} (n, m) pairs, "
           f"{elapsed:.2f} s (limit 60 s)")
    assert complete and len(per) == 12 and min(per.values()) >= 50
    assert not failed, [(r.targets, r.report.failing_entries) for r in failed[:3]]
    assert elapsed < 60.0


def test_criterion_3_outer_certificates(c1_runs, c2_runs):
    runs = c1_runs[0] + c2_runs[0]
    uncertified, refails, checks = [], 0, 0
    for k, r in enumerate(runs):
        n, m = r.targets.n, r.targets.m
        outer = Plan(m, outer_part(r.plan.root))
        jt = ResidueTargets(m, n, {pq: r.targets.value(*pq) for pq in index_set_J(n)})
        ev = r.evaluator
        rep = check_targets(ev.diamond(outer.root), jt, r.sigma)
        if not (rep.passed and rep.all_certified):
            uncertified.append(k)
        for s in range(C3_FRESH):
            fresh = Assignment.random(10 ** 9 + 7919 * k + s)
            checks += 1
            if not verify(outer, jt, fresh, ev, audits=False).passed:
                refails += 1
    ok = not uncertified and not refails
    record(3, "outer entries certified", ok,
           f"{len(runs) - len(uncertified)}/{len(runs)} solve_outer plans certified on J_n, "
           f"{checks - refails}/{checks} re-verifications under fresh assignments passed")
    assert not uncertified
    assert not refails


def test_criterion_4_oracle_equivalence():
    exprs = [("product", ("P", a), ("P", b)) for a in range(5) for b in range(5)]
    exprs += [("power", ("E",), k) for k in range(4)]
    # points have codimension >= 2 only from P^2 on
    exprs += [("blowup_points", ("P", n), c) for n in range(2, 6) for c in range(4)]
    bad = [e for e in exprs if not oracle_compare(e)]
    record(4, "calculus vs oracle", not bad, f"{len(exprs) - len(bad)}/{len(exprs)} expressions agree exactly")
    assert not bad


def test_criterion_5_structural_audits(c1_runs, c2_runs):
    runs = c1_runs[0] + c2_runs[0]
    names = ("duality", "outer-invariance", "asymmetric-levels", "mdelta")
    failed = {name: 0 for name in names}
    checked = {name: 0 for name in names}
    for r in runs:
        for a in r.report.audits:
            checked[a.name] += a.checked
            failed[a.name] += not a.passed
    ok = not any(failed.values()) and all(checked[n] > 0 for n in names)
    record(5, "structural audits", ok,
           f"{len(runs)} plans; " + ", ".join(f"{n} {checked[n]} checks/{failed[n]} failing plans" for n in names))
    assert all(checked[n] > 0 for n in names)
    assert not any(failed.values()), failed


def test_criterion_6_birational_solver():
    rng = random.Random(77)
    t0 = time.perf_counter()
    total, failed = 0, 0
    for n in C6_DIMS:
        for m in C6_MODULI:
            for _ in range(C6_TRIALS):
                inner = random_targets(n, m, rng).inner()
                sigma = Assignment.random(rng.randrange(2 ** 32))
                ctx = PlannerContext(m, sigma)
                x = ctx.atom(AtomSpec.projective_space(n))
                root = solve_inner(x, inner, ctx)
                rep = verify(Plan(m, root, sigma), ResidueTargets(m, n, inner), sigma, ctx.evaluator)
                total += 1
                failed += not rep.passed
    elapsed = time.perf_counter() - t0
    ok = not failed and total >= 100 and elapsed < 30.0
    record(6, "birational solver from P^n", ok,
           f"{total - failed}/{total} inner-target sets verified, {elapsed:.2f} s (limit 30 s)")
    assert total == len(C6_DIMS) * len(C6_MODULI) * C6_TRIALS
    assert not failed
    assert elapsed < 30.0
