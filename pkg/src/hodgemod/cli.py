"""``hodgemod`` command line: solve, eval, verify, fuzz, atoms.

Exit codes: 0 success (or verified), 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .calculus import AtomSpec, atom
from .diamond import DiamondError, ResidueTargets, TargetsError, render_rotated
from .plan import Plan, PlanError, eval_plan, parse, serialize
from .planner import PlannerContext, solve_full
from .poly import Assignment
from .verify import verify

__all__ = ["CliConfig", "main", "random_targets", "run_cli"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Invalid input; the message names the file, the key and the constraint."""


@dataclass(frozen=True)
class CliConfig:
    command: str
    n: int | None = None
    m: int | None = None
    targets: str | None = None
    plan: str | None = None
    out: str | None = None
    seed: int | None = None
    bound: int = 10
    assignment: str | None = None
    format: str = "text"
    trials: int = 20
    jobs: int = 1

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "CliConfig":
        fields = cls.__dataclass_fields__
        cfg = cls(**{k: v for k, v in vars(ns).items() if k in fields and v is not None})
        cfg.check()
        return cfg

    def check(self):
        need = {"solve": ("targets", "out"), "eval": ("plan",), "verify": ("plan", "targets"),
                "fuzz": ("n", "m", "seed"), "atoms": ()}[self.command]
        for name in need:
            if getattr(self, name) is None:
                raise InputError(f"{self.command}: --{name} is required")
        if self.seed is not None and self.assignment is not None:
            raise InputError(f"{self.command}: --seed and --assignment are mutually exclusive")
        if self.bound < 0:
            raise InputError(f"{self.command}: --bound must be nonnegative")
        if self.command == "fuzz":
            if self.n < 0:
                raise InputError("fuzz: --n must be nonnegative")
            if self.m < 2:
                raise InputError("fuzz: --m must be at least 2")
            if self.trials < 1 or self.jobs < 1:
                raise InputError("fuzz: --trials and --jobs must be positive")


# -- input files -------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})") from None


def load_targets(path: str) -> ResidueTargets:
    try:
        return ResidueTargets.from_json(_read(path))
    except TargetsError as exc:
        key = f" key {exc.key!r}:" if exc.key else ""
        raise InputError(f"{path}:{key} {exc}") from None


def load_plan(path: str) -> Plan:
    try:
        return parse(_read(path))
    except PlanError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_assignment(cfg: CliConfig, plan: Plan | None = None) -> Assignment:
    if cfg.assignment is not None:
        try:
            doc = json.loads(_read(cfg.assignment))
            return Assignment.from_json(doc)
        except (json.JSONDecodeError, ValueError) as exc:
            raise InputError(f"{cfg.assignment}: {exc}") from None
    if cfg.seed is not None:
        return Assignment.random(cfg.seed, cfg.bound)
    if plan is not None and plan.assignment is not None:
        return plan.assignment
    return Assignment(bound=cfg.bound)


# -- output -------------------------------------------------------------------------


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _residue_text(d, m, sigma) -> str:
    cells = [[str(v) for v in row] for row in d.residues(m, sigma)]
    return render_rotated(cells)


# -- commands -------------------------------------------------------------------------


def cmd_solve(cfg: CliConfig) -> int:
    targets = load_targets(cfg.targets)
    for name in ("n", "m"):
        given = getattr(cfg, name)
        if given is not None and given != getattr(targets, name):
            raise InputError(f"{cfg.targets}: key {name!r}: file says {getattr(targets, name)}, --{name} says {given}")
    sigma = load_assignment(cfg)
    ctx = PlannerContext(targets.m, sigma)
    plan = solve_full(targets.n, targets.m, targets, ctx)
    try:
        Path(cfg.out).write_bytes(serialize(plan))
    except OSError as exc:
        raise InputError(f"{cfg.out}: cannot write file ({exc.strerror})") from None
    report = verify(plan, ResidueTargets(targets.m, targets.n, targets.completed()), sigma, ctx.evaluator)
    if cfg.format == "json":
        _emit(_json(report.to_json()))
    else:
        d = ctx.diamond(plan.root)
        certified = sum(e.certified for e in report.entries)
        _emit(f"plan written to {cfg.out} ({len(plan.nodes())} nodes)")
        _emit(f"diamond mod {targets.m}:")
        _emit(_residue_text(d, targets.m, sigma))
        _emit(f"{certified}/{len(report.entries)} entries certified independent of unknowns")
        _emit(report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_eval(cfg: CliConfig) -> int:
    plan = load_plan(cfg.plan)
    d = eval_plan(plan)
    symbolic = cfg.seed is None and cfg.assignment is None
    if symbolic:
        cells = [[str(x) for x in row] for row in d.grid()]
    else:
        sigma = load_assignment(cfg, plan)
        cells = [[str(v) for v in row] for row in d.evaluate(sigma)]
    if cfg.format == "json":
        entries = {f"{p},{q}": (cells[p][q] if symbolic else int(cells[p][q]))
                   for p in range(d.n + 1) for q in range(d.n + 1)}
        _emit(_json({"n": d.n, "m": plan.m, "symbolic": symbolic, "entries": entries}))
    else:
        _emit(render_rotated(cells))
    return EXIT_OK


def cmd_verify(cfg: CliConfig) -> int:
    plan = load_plan(cfg.plan)
    targets = load_targets(cfg.targets)
    if plan.dim != targets.n or plan.m != targets.m:
        raise InputError(f"{cfg.targets}: targets are (n={targets.n}, m={targets.m}), "
                         f"plan is (n={plan.dim}, m={plan.m})")
    sigma = load_assignment(cfg, plan)
    report = verify(plan, targets, sigma)
    _emit(_json(report.to_json()) if cfg.format == "json" else report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def trial_seed(seed: int, index: int) -> int:
    digest = hashlib.blake2b(f"fuzz\x00{seed}\x00{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def random_targets(n: int, m: int, rng: random.Random) -> ResidueTargets:
    """Uniform admissible full-diamond targets."""
    entries = {}
    for p in range(n + 1):
        for q in range(n + 1):
            if (n - p, n - q) not in entries:
                entries[(p, q)] = rng.randrange(m)
    entries[(0, 0)] = 1 % m
    return ResidueTargets(m, n, ResidueTargets(m, n, entries).completed())


def _fuzz_trial(args):
    n, m, seed, bound, index = args
    s = trial_seed(seed, index)
    rng = random.Random(s)
    targets = random_targets(n, m, rng)
    sigma = Assignment.random(s, bound)
    ctx = PlannerContext(m, sigma)
    plan = solve_full(n, m, targets, ctx)
    report = verify(plan, targets, sigma, ctx.evaluator)
    bad = [f"{e.p},{e.q}" for e in report.failing_entries]
    bad += [a.name for a in report.audits if not a.passed]
    return {"trial": index, "seed": s, "pass": report.passed, "nodes": len(plan.nodes()), "failures": bad}


def cmd_fuzz(cfg: CliConfig) -> int:
    work = [(cfg.n, cfg.m, cfg.seed, cfg.bound, i) for i in range(cfg.trials)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(_fuzz_trial, work))
    else:
        results = [_fuzz_trial(w) for w in work]
    passed = sum(r["pass"] for r in results)
    if cfg.format == "json":
        _emit(_json({"n": cfg.n, "m": cfg.m, "seed": cfg.seed, "trials": cfg.trials,
                     "passed": passed, "results": results}))
    else:
        for r in results:
            status = "pass" if r["pass"] else "FAIL " + " ".join(r["failures"])
            _emit(f"trial {r['trial']:4d}  seed {r['seed']:20d}  nodes {r['nodes']:4d}  {status}")
        _emit(f"passed {passed}/{cfg.trials} (n={cfg.n}, m={cfg.m}, seed={cfg.seed})")
    return EXIT_OK if passed == cfg.trials else EXIT_FAIL


def _atom_specs(n_max: int):
    yield AtomSpec.point()
    for k in range(1, n_max + 1):
        yield AtomSpec.projective_space(k)
    yield AtomSpec.elliptic_curve()
    yield AtomSpec.serre_surface()
    for d in range(3, n_max + 3):
        yield AtomSpec.hypersurface(d)


def cmd_atoms(cfg: CliConfig) -> int:
    n_max = 3 if cfg.n is None else cfg.n
    out = []
    for spec in _atom_specs(n_max):
        d = atom(spec, "atom")
        cells = [[str(x) for x in row] for row in d.grid()]
        out.append((spec, d, cells))
    if cfg.format == "json":
        _emit(_json([{"atom": str(spec), "params": spec.to_params(), "n": d.n,
                      "entries": {f"{p},{q}": cells[p][q] for p in range(d.n + 1) for q in range(d.n + 1)}}
                     for spec, d, cells in out]))
    else:
        for spec, d, cells in out:
            _emit(f"{spec} (dim {d.n})")
            _emit(render_rotated(cells))
            _emit("")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "eval": cmd_eval, "verify": cmd_verify, "fuzz": cmd_fuzz, "atoms": cmd_atoms}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hodgemod", description="Hodge diamonds modulo m: plan, evaluate, verify.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sigma=True):
        p.add_argument("--format", choices=("text", "json"), default="text")
        if sigma:
            p.add_argument("--seed", type=int, help="seed for a random model assignment")
            p.add_argument("--bound", type=int, help="random assignment values lie in [0, bound] (default 10)")
            p.add_argument("--assignment", help="JSON file with a model assignment")

    p = sub.add_parser("solve", help="plan a variety for a targets file")
    p.add_argument("--targets", help="targets JSON file")
    p.add_argument("--out", help="where to write the plan JSON")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    common(p)

    p = sub.add_parser("eval", help="print a plan's diamond")
    p.add_argument("--plan")
    common(p)

    p = sub.add_parser("verify", help="check a plan against targets")
    p.add_argument("--plan")
    p.add_argument("--targets")
    common(p)

    p = sub.add_parser("fuzz", help="solve and verify random admissible targets")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    common(p)

    p = sub.add_parser("atoms", help="print the atom diamonds")
    p.add_argument("--n", type=int, help="largest projective space / hypersurface dimension (default 3)")
    common(p, sigma=False)
    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        cfg = CliConfig.from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except (InputError, TargetsError, PlanError, DiamondError) as exc:
        print(f"hodgemod {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None):
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
