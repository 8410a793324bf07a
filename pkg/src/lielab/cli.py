"""Command line entry point: batch verification runs with JSON reports.

Exit codes: 0 when every check passes, 1 on a property violation, 2 on a
usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from itertools import combinations
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .algcore import AlgebraPresentation, center, load_algebra
from .config import size_budget
from .constructions import (
    BilinearForm,
    build_matrix_lie,
    heisenberg,
    matrix_algebra,
    matrix_unit,
    square_zero_element,
    tkk_skew,
    upper_triangular,
)
from .degeneracy import (
    all_elements,
    all_s_sequences_terminate,
    locally_degenerate_element,
    sandwich_set,
    sandwich_set_by_products,
    verify_witness,
)
from .errors import AxiomViolation, LieLabError, ProbeFailed, SizeBudget, TheoremViolation
from .exactcore import ExactMatrix, FieldSpec, GF, QQ, is_prime, is_zero, nilpotency_index
from .grading import exp_ad, grading_from_h, graded_word_bound_check, run_pipeline, vandermonde_recover
from .jordan import descend_to_jordan, kostrikin_descent, verify_identities
from .tower import (
    build_theorem3_level,
    commutator_obstruction,
    frontier_certificate,
    simplicity_certificate,
    theorem3_signature,
    trace_transport,
)

SUITES = ("identities", "descent", "vandermonde", "degeneracy", "words", "tkk")
DEFAULT_TRIALS = {"identities": 200, "vandermonde": 50}

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- reports -------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


@dataclass
class Check:
    name: str
    status: str  # "pass", "fail" or "skip"
    details: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "details": _jsonable(self.details)}


def _check(name: str, ok: bool, **details) -> Check:
    return Check(name, "pass" if ok else "fail", details)


@dataclass
class RunReport:
    command: str
    parameters: dict
    seed: int
    checks: list[Check] = dc_field(default_factory=list)
    wall_seconds: float = 0.0

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skip": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def passed(self) -> bool:
        return self.counts["fail"] == 0

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.passed else EXIT_VIOLATION

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": _jsonable(self.parameters),
            "seed": self.seed,
            "passed": self.passed,
            "summary": self.counts,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
            "timing": {"wall_seconds": round(self.wall_seconds, 3)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def without_timing(self) -> dict:
        d = self.to_dict()
        d.pop("timing")
        return d


def _vec(field: FieldSpec, v) -> list[str]:
    return [field.format(c) for c in np.asarray(v).tolist()]


# -- theorem 3 ------------------------------------------------------------------


def run_theorem3(p: int, levels: int = 2, budget: Optional[int] = None, seed: int = 0) -> RunReport:
    if not (is_prime(p) and p % 2 == 1):
        raise UsageError(f"--p must be an odd prime, got {p}")
    if levels < 1:
        raise UsageError("--levels must be at least 1")
    budget = size_budget() if budget is None else budget
    rep = RunReport("theorem3", {"p": p, "levels": levels, "budget": budget}, seed)
    built = []
    for i in range(1, levels + 1):
        try:
            built.append(build_theorem3_level(p, i, budget))
        except SizeBudget as exc:
            for j in range(i, levels + 1):
                rep.checks.append(Check(f"level{j}.build", "skip", {"reason": str(exc)}))
            break
    if not built:
        raise UsageError(f"level 1 does not fit the size budget {budget}")
    sig = theorem3_signature(p)
    for pos, lvl in enumerate(built):
        tag = f"level{lvl.index}"
        ob = commutator_obstruction(lvl)
        rep.checks.append(Check(f"{tag}.build", "pass", {"n": lvl.n, "dim_R": lvl.dim}))
        rep.checks.append(_check(f"{tag}.obstruction", ob.passed, **ob.to_dict()))
        nxt = built[pos + 1] if pos + 1 < len(built) else None
        if lvl.embedding is not None:
            rep.checks.append(_check(f"{tag}.embedding", all(lvl.checks.values()),
                                     signature=lvl.signature.as_tuple(), **lvl.checks))
            if nxt is not None:
                tt = trace_transport(lvl, nxt)
                rep.checks.append(_check(f"{tag}.trace_transport",
                                         tt.preserved and tt.image_in_K and bool(tt.obstruction_image_outside_D),
                                         **tt.__dict__))
            sc = simplicity_certificate(lvl, seed=seed, target=nxt)
            rep.checks.append(_check(f"{tag}.simplicity", sc.passed, **sc.to_dict()))
        # matrix-level certificate for the step out of this level; the only one available at the frontier
        fc = frontier_certificate(lvl, sig, seed=seed)
        rep.checks.append(_check(f"{tag}.matrix_certificate", fc.passed, **fc.to_dict()))
    return rep


# -- pipeline -------------------------------------------------------------------


PIPELINE_STAGES = ("build", "jordan_element", "L_x", "idempotent", "lift", "sl2", "grading")


def _field_from_p(p: int) -> FieldSpec:
    if p == 0:
        return QQ
    if not is_prime(p):
        raise UsageError(f"--p must be a prime (or 0 for the rationals), got {p}")
    return GF(p)


def run_pipeline_command(series: str, n: int, p: int, seed: int = 0) -> RunReport:
    field = _field_from_p(p)
    if n < 1:
        raise UsageError("--n must be positive")
    rep = RunReport("pipeline", {"series": series, "n": n, "p": p}, seed)
    pr = run_pipeline(series, n, field, seed=seed)
    for k, stage in enumerate(PIPELINE_STAGES):
        name = f"stage{k}.{stage}"
        if stage in pr.stages:
            rep.checks.append(Check(name, "pass", pr.stages[stage]))
        elif stage == pr.failed_stage:
            rep.checks.append(Check(name, "fail", {"error": pr.error}))
        else:
            rep.checks.append(Check(name, "skip", {"reason": f"earlier stage {pr.failed_stage} failed"}))
    return rep


# -- property suites ---------------------------------------------------------------


def _strictly_upper(L: AlgebraPresentation) -> list[int]:
    real = getattr(L, "realization", None)
    if not real:
        return []
    out = []
    for i, M in enumerate(real):
        d = M.data
        if np.any(d != 0) and not np.any(np.tril(d != 0)):
            out.append(i)
    return out


def _require_lie(A: AlgebraPresentation):
    if A.kind != "lie":
        raise UsageError(f"this suite needs a Lie algebra, the file holds a {A.kind} algebra")


def suite_identities(trials: int, seed: int, algebra: Optional[AlgebraPresentation] = None) -> list[Check]:
    if algebra is None:
        L = build_matrix_lie("sl", 4, GF(11))
        x = square_zero_element("sl", 4, L.field).coeffs
        name = "sl4_gf11"
    else:
        _require_lie(algebra)
        L, name = algebra, "file"
        x = next((b.coeffs for b in L.basis_elements() if (L.ad(b.coeffs) ** 3).is_zero()), None)
        if x is None:
            return [Check("identities.file", "skip", {"reason": "no basis element is a Jordan element"})]
    rep = verify_identities(L, x, trials=trials, seed=seed)
    return [
        _check(f"identities.{name}.{r.name}", r.passed, x=_vec(L.field, x), **r.to_dict())
        for r in rep.results
    ]


def _descent_checks(L: AlgebraPresentation, name: str) -> list[Check]:
    """Test set: ad-nilpotent basis elements and their pairwise sums of index >= 4."""
    f = L.field
    nil = [b.coeffs for b in L.basis_elements() if nilpotency_index(L.ad(b.coeffs)) is not None]
    cands = nil + [f.reduce(u + v) for u, v in combinations(nil, 2)]
    tests = []
    for a in cands:
        m = nilpotency_index(L.ad(a))
        if not is_zero(a) and m is not None and m >= 4:
            tests.append((a, m))
    if not tests:
        return [Check(f"descent.{name}", "skip", {"reason": "no ad-nilpotent element of index >= 4 in the test set"})]
    top = f.p - 1 if f.p else None
    count, failures = 0, []
    pairs = []
    for a, m in tests:
        hi = top if top is not None else m + 2
        for n in range(max(4, m), hi + 1):
            pairs.append((a, n))
            for i, b in enumerate(L.basis_elements()):
                count += 1
                try:
                    kostrikin_descent(L, a, b.coeffs, n)
                except TheoremViolation:
                    failures.append({"a": _vec(f, a), "b": L.basis[i], "n": n})
    out = [_check(f"descent.{name}.lemma", not failures and count > 0, test_pairs=len(pairs),
                  checks=count, failures=failures[:5])]
    start = max(tests, key=lambda t: t[1])[0]
    trace = descend_to_jordan(L, start)
    out.append(_check(
        f"descent.{name}.iterated",
        trace.reached_jordan and (L.ad(trace.final.coeffs) ** 3).is_zero() and not is_zero(trace.final.coeffs),
        start=_vec(f, start),
        start_index=nilpotency_index(L.ad(start)),
        indices=[s.result_index for s in trace.steps],
        final=_vec(f, trace.final.coeffs) if trace.final is not None else None,
    ))
    return out


def suite_descent(seed: int, algebra: Optional[AlgebraPresentation] = None) -> list[Check]:
    if algebra is not None:
        _require_lie(algebra)
        return _descent_checks(algebra, "file")
    out = []
    for series, n in (("sl", 3), ("sp", 4)):
        out.extend(_descent_checks(build_matrix_lie(series, n, GF(11)), f"{series}{n}_gf11"))
    return out


def _random_nilpotent(L: AlgebraPresentation, rng, pool: Sequence[int], max_index: int):
    f = L.field
    while True:
        x = f.zeros(L.dim)
        for i in pool:
            x[i] = f(int(rng.integers(0, f.p)))
        if is_zero(x):
            continue
        d = nilpotency_index(L.ad(x))
        if d is not None and d <= max_index:
            return x, d


def suite_vandermonde(trials: int, seed: int, algebra: Optional[AlgebraPresentation] = None) -> list[Check]:
    if algebra is None:
        L, name = build_matrix_lie("sl", 3, GF(11)), "sl3_gf11"
    else:
        _require_lie(algebra)
        L, name = algebra, "file"
    f = L.field
    if not f.p:
        raise UsageError("the vandermonde suite samples nodes from a finite field")
    pool = _strictly_upper(L) or [
        i for i, b in enumerate(L.basis_elements()) if nilpotency_index(L.ad(b.coeffs)) is not None
    ]
    if not pool:
        return [Check(f"vandermonde.{name}", "skip", {"reason": "no ad-nilpotent basis element"})]
    max_index = min(5, f.p - 1)
    rng = np.random.default_rng(seed)
    rec_fail, aut_fail = [], []
    for t in range(trials):
        x, d = _random_nilpotent(L, rng, pool, max_index)
        v = f.random_vector(rng, L.dim)
        nodes = [int(c) for c in rng.choice(np.arange(1, f.p), size=d, replace=False)]
        X = L.ad(x)
        direct, cur, fact = [], v, 1
        for k in range(d):
            fact *= max(k, 1)
            direct.append(f.reduce(cur * f.inv(f(fact))))
            cur = X @ cur
        try:
            rec = vandermonde_recover(L, x, v, nodes)
            if any(not is_zero(f.reduce(r - s)) for r, s in zip(rec, direct)):
                raise TheoremViolation("recovered chain differs")
        except TheoremViolation as exc:
            rec_fail.append({"trial": t, "x": _vec(f, x), "v": _vec(f, v), "nodes": nodes, "error": str(exc)})
        xi = int(rng.integers(1, f.p))
        try:
            exp_ad(L, x, xi)
        except TheoremViolation as exc:
            aut_fail.append({"trial": t, "x": _vec(f, x), "xi": xi, "error": str(exc)})
    return [
        _check(f"vandermonde.{name}.recovery", not rec_fail, pairs=trials, max_index=max_index,
               counterexamples=rec_fail[:5]),
        _check(f"vandermonde.{name}.exp_ad", not aut_fail, trials=trials, basis_pairs=L.dim * L.dim,
               counterexamples=aut_fail[:5]),
    ]


def _local_degeneracy_counts(L: AlgebraPresentation) -> tuple[int, int]:
    degenerate = total = 0
    for v in all_elements(L)[1:]:
        total += 1
        degenerate += locally_degenerate_element(L, v)
    return degenerate, total


def suite_degeneracy(seed: int, algebra: Optional[AlgebraPresentation] = None) -> list[Check]:
    if algebra is not None:
        _require_lie(algebra)
        f = algebra.field
        if not f.p:
            raise UsageError("the degeneracy suite enumerates a finite field")
        ex = sandwich_set(algebra, "exact")
        alt = sandwich_set_by_products(algebra)
        same = sorted(tuple(v.tolist()) for v in ex.elements) == sorted(tuple(v.tolist()) for v in alt)
        deg, total = _local_degeneracy_counts(algebra)
        return [
            _check("degeneracy.file.sandwiches", same, examined=ex.examined, count=ex.count,
                   sandwiches=[_vec(f, v) for v in ex.elements[:20]]),
            Check("degeneracy.file.local", "pass", {"nonzero_elements": total, "locally_degenerate": deg,
                                                     "all_locally_degenerate": deg == total}),
        ]
    F5 = GF(5)
    sl2 = build_matrix_lie("sl", 2, F5)
    H = heisenberg(F5)
    out = []
    ex = sandwich_set(sl2, "exact")
    alt = sandwich_set_by_products(sl2)
    out.append(_check("degeneracy.sl2_gf5.sandwiches", ex.count == 0 and len(alt) == 0,
                      examined=ex.examined, count=ex.count, count_by_products=len(alt)))
    deg, total = _local_degeneracy_counts(H)
    out.append(_check("degeneracy.heisenberg_gf5.local", deg == total, nonzero_elements=total,
                      locally_degenerate=deg))
    deg2, total2 = _local_degeneracy_counts(sl2)
    out.append(_check("degeneracy.sl2_gf5.local", deg2 == 0, nonzero_elements=total2, locally_degenerate=deg2))
    e, f_ = sl2.basis_element(0).coeffs, sl2.basis_element(2).coeffs
    res = all_s_sequences_terminate(sl2, e, [f_])
    ok = (not res.terminates) and res.witness is not None and verify_witness(sl2, res.witness)
    out.append(_check("degeneracy.sl2_gf5.witness", ok, x="e", S=["f"],
                      witness=res.witness.to_dict(F5) if res.witness is not None else None))
    return out


def suite_words(seed: int) -> list[Check]:
    F = GF(11)
    R = matrix_algebra(3, F)
    h = F.reduce(matrix_unit(F, 3, 0, 0) - matrix_unit(F, 3, 2, 2)).ravel()
    G = grading_from_h(R, h)
    gens = [matrix_unit(F, 3, i, j).ravel() for i, j in ((0, 1), (1, 2), (1, 0), (2, 1))]
    wb = graded_word_bound_check(R, G, gens)
    return [
        _check("words.m3_gf11.grading_law", not G.violations(), dims=list(G.dims)),
        _check("words.m3_gf11.bound", wb.holds, **wb.to_dict()),
    ]


def suite_tkk(seed: int) -> list[Check]:
    F = GF(11)
    out = []
    for m in range(1, 6):
        form = BilinearForm(ExactMatrix.identity(F, m))
        L = tkk_skew(form)
        expected = (m + 3) * (m + 2) // 2
        z = center(L).dim
        out.append(_check(f"tkk.m{m}", L.dim == expected and z == 0, dim=L.dim, expected=expected, center_dim=z))
    return out


def run_properties(suite: str, trials: Optional[int] = None, seed: int = 0, file: Optional[str] = None) -> RunReport:
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}")
    algebra = None
    if file is not None:
        if suite in ("words", "tkk"):
            raise UsageError(f"suite {suite} runs on fixed algebras and takes no --file")
        try:
            algebra = load_algebra(file)
        except (OSError, ValueError, KeyError, LieLabError) as exc:
            raise UsageError(f"cannot load algebra file {file}: {exc}") from exc
    if trials is None:
        trials = DEFAULT_TRIALS.get(suite, 0)
    if trials < 0:
        raise UsageError("--trials must be nonnegative")
    params = {"suite": suite, "trials": trials, "file": file}
    rep = RunReport("properties", params, seed)
    if suite == "identities":
        rep.checks = suite_identities(trials, seed, algebra)
    elif suite == "descent":
        rep.checks = suite_descent(seed, algebra)
    elif suite == "vandermonde":
        rep.checks = suite_vandermonde(trials, seed, algebra)
    elif suite == "degeneracy":
        rep.checks = suite_degeneracy(seed, algebra)
    elif suite == "words":
        rep.checks = suite_words(seed)
    else:
        rep.checks = suite_tkk(seed)
    return rep


# -- algebra files ------------------------------------------------------------------


def build_algebra(name: str, n: Optional[int], p: int) -> AlgebraPresentation:
    field = _field_from_p(p)
    if name == "heisenberg":
        return heisenberg(field)
    if n is None or n < 1:
        raise UsageError(f"--n is required for {name}")
    if name in ("sl", "sp", "o"):
        return build_matrix_lie(name, n, field)
    if name == "matrix":
        return matrix_algebra(n, field)
    if name == "upper":
        return upper_triangular(n, field)
    if name == "tkk":
        return tkk_skew(BilinearForm(ExactMatrix.identity(field, n)))
    raise UsageError(f"unknown algebra {name!r}")


# -- argument parsing ---------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lielab", description="Exact verification runs for Jordan-element machinery.")
    sub = ap.add_subparsers(dest="command", required=True)

    t3 = sub.add_parser("theorem3", help="levelwise checks of the involutive direct system")
    t3.add_argument("--p", type=int, required=True)
    t3.add_argument("--levels", type=int, default=2)
    t3.add_argument("--budget", type=int, default=None, help="largest algebra dimension to build")
    t3.add_argument("--seed", type=int, default=0)
    t3.add_argument("--out")

    pl = sub.add_parser("pipeline", help="square-zero element to 5-grading")
    pl.add_argument("--series", choices=("sl", "sp", "o"), required=True)
    pl.add_argument("--n", type=int, required=True)
    pl.add_argument("--p", type=int, required=True)
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--out")

    pr = sub.add_parser("properties", help="seeded property suites")
    pr.add_argument("--suite", choices=SUITES, required=True)
    pr.add_argument("--trials", type=int, default=None)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--file")
    pr.add_argument("--out")

    bd = sub.add_parser("build", help="write an algebra in the JSON format")
    bd.add_argument("--algebra", choices=("sl", "sp", "o", "heisenberg", "matrix", "upper", "tkk"), required=True)
    bd.add_argument("--n", type=int, default=None)
    bd.add_argument("--p", type=int, required=True)
    bd.add_argument("--out")
    return ap


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(rep: RunReport) -> str:
    c = rep.counts
    lines = [f"{rep.command}: {c['pass']} pass, {c['fail']} fail, {c['skip']} skip ({rep.wall_seconds:.1f} s)"]
    lines += [f"  FAIL {ch.name}" for ch in sorted(rep.checks, key=lambda ch: ch.name) if ch.status == "fail"]
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.command == "build":
            _emit(build_algebra(args.algebra, args.n, args.p).to_json(), args.out)
            return EXIT_OK
        if args.command == "theorem3":
            rep = run_theorem3(args.p, args.levels, args.budget, args.seed)
        elif args.command == "pipeline":
            if args.p and args.p <= 7:
                print(f"warning: p = {args.p} is small; p > 7 is recommended", file=sys.stderr)
            rep = run_pipeline_command(args.series, args.n, args.p, args.seed)
        else:
            rep = run_properties(args.suite, args.trials, args.seed, args.file)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # malformed LIELAB_BUDGET and similar input problems
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TheoremViolation, AxiomViolation, ProbeFailed) as exc:
        print(f"violation: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except LieLabError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep.wall_seconds = time.perf_counter() - t0
    _emit(rep.to_json(), args.out)
    print(_summary(rep), file=sys.stderr)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
