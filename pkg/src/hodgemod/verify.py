"""Plan verification: target residues plus structural audits.

The audits re-derive facts the planner relies on, on the evaluated plan:

``duality``
    ``h^{0,0} = 1`` and ``h^{p,q} = h^{n-p,n-q}`` as polynomials at every
    node, each side recomputed from its node's formula.
``outer-invariance``
    blowup nodes leave every outer entry unchanged as a polynomial.
``asymmetric-levels``
    an ``AsymmetricBlowup`` at level ``r`` moves ``h^{p,1}`` and ``h^{1,p}``
    by a certified multiple of ``m`` for ``p > r`` and by exactly ``b``
    and ``c`` at ``p = r``.
``mdelta``
    every region the evaluator booked as ``m`` times something is
    certified ``0 mod m``.
"""

from __future__ import annotations

from .diamond import DiamondError, ResidueTargets, check_targets, fundamental_domain
from .plan import BLOWUP_KINDS, Evaluator, Plan
from .poly import DEFAULT, Assignment
from .report import AuditResult, VerificationReport

__all__ = ["audit_plan", "verify"]

# duality is checked for p + q up to this far past the root dimension;
# higher entries of large intermediate products are never consumed
_DUALITY_MARGIN = 1


def verify(plan: Plan, targets: ResidueTargets, sigma: Assignment = DEFAULT,
           evaluator: Evaluator | None = None, audits: bool = True) -> VerificationReport:
    """Evaluate ``plan``, compare with ``targets`` under ``sigma`` and audit it.

    Raises :class:`~hodgemod.plan.PlanError` for a malformed plan and
    :class:`~hodgemod.diamond.DiamondError` on a dimension mismatch.
    """
    plan.validate()
    if plan.m != targets.m:
        raise DiamondError(f"plan is modulo {plan.m}, targets modulo {targets.m}")
    ev = evaluator or Evaluator(plan.m)
    d = ev.diamond(plan.root)
    report = check_targets(d, targets, sigma)
    if audits:
        report = report.with_audits(audit_plan(plan, ev))
    return report


def audit_plan(plan: Plan, evaluator: Evaluator | None = None) -> list[AuditResult]:
    ev = evaluator or Evaluator(plan.m)
    ev.diamond(plan.root)
    return [
        _audit_duality(plan, ev),
        _audit_outer(plan, ev),
        _audit_asymmetric(plan, ev),
        _audit_mdelta(plan, ev),
    ]


def _audit_duality(plan, ev) -> AuditResult:
    cap = ev.diamond(plan.root).n + _DUALITY_MARGIN
    failures, checked = [], 0
    for nd in plan.nodes():
        d = ev.diamond(nd)
        n = d.n
        checked += 1
        if d.raw(0, 0) != 1 or d.raw(n, n) != 1:
            failures.append(f"{nd.path} ({nd.kind}): h00 = {d.raw(0, 0)}, h{n}{n} = {d.raw(n, n)}")
        for p, q in fundamental_domain(n):
            if p + q > cap:
                continue
            checked += 1
            a, b = d.raw(p, q), d.raw(n - p, n - q)
            if a != b:
                failures.append(f"{nd.path} ({nd.kind}): h{p}{q} = {a} but h{n - p}{n - q} = {b}")
    return AuditResult("duality", not failures, checked, tuple(failures))


def _audit_outer(plan, ev) -> AuditResult:
    failures, checked = [], 0
    for nd in plan.nodes():
        if nd.kind not in BLOWUP_KINDS:
            continue
        before, after = ev.diamond(nd.children[0]), ev.diamond(nd)
        for pq in after.outer_positions():
            checked += 1
            if before[pq] != after[pq]:
                failures.append(f"{nd.path} ({nd.kind}): outer entry h{pq[0]}{pq[1]} changed")
    return AuditResult("outer-invariance", not failures, checked, tuple(failures))


def _audit_asymmetric(plan, ev) -> AuditResult:
    m = plan.m
    failures, checked = [], 0
    for nd in plan.nodes():
        if nd.kind != "AsymmetricBlowup":
            continue
        before, after = ev.diamond(nd.children[0]), ev.diamond(nd)
        n, r = after.n, nd.params["r"]
        want = {r: (nd.params["b"] % m, nd.params["c"] % m)}
        for p in range(r, n):
            for pq, k in (((p, 1), 0), ((1, p), 1)):
                checked += 1
                got = (after[pq] - before[pq]).const_mod(m)
                expect = want[p][k] if p in want else 0
                if got != expect:
                    failures.append(f"{nd.path}: h{pq[0]}{pq[1]} moved by {got} mod {m}, expected {expect}")
    return AuditResult("asymmetric-levels", not failures, checked, tuple(failures))


def _audit_mdelta(plan, ev) -> AuditResult:
    m = plan.m
    failures, checked = [], 0
    for nd in plan.nodes():
        parts = ev.parts.get(nd.path)
        if parts is None or parts.mdelta is None:
            continue
        if nd.kind == "ChiSection":
            region = parts.mdelta
            out = ev.diamond(nd)
            checked += 1
            if (out[0, out.n] - nd.params["b"]).const_mod(m) != 0:
                failures.append(f"{nd.path}: h0{out.n} not pinned to {nd.params['b']} mod {m}")
        else:
            # everything the node adds besides its announced final blowup
            region = ev.diamond(nd) - parts.base - parts.final_shift
        for pq in fundamental_domain(region.n):
            checked += 1
            if region[pq].const_mod(m) != 0:
                failures.append(f"{nd.path} ({nd.kind}): m-delta entry h{pq[0]}{pq[1]} = {region[pq]}")
    return AuditResult("mdelta", not failures, checked, tuple(failures))
