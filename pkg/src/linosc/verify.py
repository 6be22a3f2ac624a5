"""Seeded per-theorem verification suites.

Each suite runs a number of independent trials.  Trial ``i`` draws all of its
randomness from ``trial_seed(master, i)``, so serial and parallel runs give
byte-identical reports.  A trial ends as ``pass``, ``fail`` or
``inconclusive``; the last is reserved for trials where a genericity
precondition does not hold, and never counts towards the status.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .corpus import (CorpusEntry, corpus_variety, make_rng, pencil_normal_form, quadric_with_base_plane,
                     rand_int, random_invertible, random_poly, random_symmetric, random_variety,
                     system_with_base_plane)
from .errors import InvalidParameters, NotAPencilOnHyperplane
from .linalg import ExactMatrix, exact_rank, format_fraction, inverse, vector
from .osculation import (AT_LEAST_MAX, gauss_fiber_in_L, generic_threshold, genericity_check,
                         osculation_order, tilde_R_report)
from .polynomial import MultiPoly, mpoly_compose_affine, variables
from .quadrics import (QuadricSystem, base_locus_contains, classify_pencil_with_hyperplane_base,
                       lemma_singloc_check, prolongation, second_fundamental_system)
from .variety import (LinearSpace, adapt_to_linear_space, chart_space, contains_linear_space,
                      graph_variety, implicit_to_graph)

THEOREMS = ("thm1", "thm2", "thm3", "thm4", "thm5", "thm6_lemma")
PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def trial_seed(master: int, index: int) -> int:
    digest = hashlib.sha256(f"{master}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass
class TrialReport:
    theorem: str
    params: dict
    seed: int
    trials: int
    passed: int = 0
    failed: int = 0
    inconclusive: int = 0
    checks: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return PASS if self.failed == 0 and not any(c["status"] == FAIL for c in self.checks) else FAIL

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "params": self.params, "seed": self.seed,
                "trials": self.trials, "passed": self.passed, "failed": self.failed,
                "inconclusive": self.inconclusive, "checks": self.checks,
                "failures": self.failures, "status": self.status}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def summary(self) -> str:
        bad_checks = sum(c["status"] == FAIL for c in self.checks)
        return (f"{self.theorem}: {self.status} ({self.passed} passed, {self.failed} failed, "
                f"{self.inconclusive} inconclusive of {self.trials} trials; "
                f"{len(self.checks) - bad_checks}/{len(self.checks)} fixed checks ok)")


def _frac_list(v) -> list[str]:
    return [format_fraction(x) for x in v]


def _check(name: str, ok: bool, **detail) -> dict:
    return {"name": name, "status": PASS if ok else FAIL, "detail": detail}


# -- parameter handling -------------------------------------------------------

def _grid(params: Mapping, keys: tuple[str, ...], default: list) -> list[list[int]]:
    if "grid" in params:
        grid = [list(map(int, g)) for g in params["grid"]]
    elif all(k in params for k in keys):
        grid = [[int(params[k]) for k in keys]]
    else:
        grid = default
    if not grid:
        raise InvalidParameters("empty parameter grid")
    for g in grid:
        if len(g) != len(keys):
            raise InvalidParameters(f"grid entries must be ({', '.join(keys)})")
    return grid


def _lemma_default_grid() -> list[list[int]]:
    return [[n, k, a] for n in range(2, 9) for k in range(1, n) for a in range(1, 4) if a * (n - k) < k]


def normalize_params(theorem: str, params: Mapping | None) -> dict:
    params = dict(params or {})
    p: dict = {"pool": int(params.get("pool", 9))}
    if theorem == "thm1":
        grid = _grid(params, ("n", "k"), [[2, 1], [3, 1], [4, 1], [3, 2], [4, 2]])
        for n, k in grid:
            if not (1 <= k < n <= 8):
                raise InvalidParameters(f"thm1 needs 1 <= k < n <= 8, got n={n} k={k}")
        profile = params.get("profile", "vanish_on_L")
        if profile not in ("vanish_on_L", "ruled_L"):
            raise InvalidParameters("thm1 profile must be vanish_on_L or ruled_L")
        p.update(grid=grid, profile=profile, degree_offset=int(params.get("degree_offset", 3)))
    elif theorem == "thm2":
        grid = _grid(params, ("n", "k"), [[n, k] for n in range(2, 9) for k in range(1, n) if 2 * k >= n])
        for n, k in grid:
            if not (1 <= k < n <= 8 and 2 * k >= n):
                raise InvalidParameters(f"thm2 needs n/2 <= k < n <= 8, got n={n} k={k}")
        if int(params.get("a", 1)) != 1:
            raise InvalidParameters("thm2 suite works with a single quadric (a = 1)")
        p.update(grid=grid, a=1)
        p["pool"] = int(params.get("pool", 5))
    elif theorem == "thm3":
        grid = _grid(params, ("n",), [[2]])
        for (n,) in grid:
            if not 2 <= n <= 4:
                raise InvalidParameters("thm3 suite supports 2 <= n <= 4")
        profile = params.get("profile", "vanish_on_L")
        if profile not in ("vanish_on_L", "ruled_L"):
            raise InvalidParameters("thm3 profile must be vanish_on_L or ruled_L")
        degree = params.get("degree")
        p.update(grid=grid, profile=profile, degree=None if degree is None else int(degree))
    elif theorem == "thm4":
        grid = _grid(params, ("n",), [[3], [4], [5], [6]])
        for (n,) in grid:
            if not 3 <= n <= 8:
                raise InvalidParameters("thm4 suite needs 3 <= n <= 8")
        if int(params.get("a", 2)) != 2:
            raise InvalidParameters("thm4 concerns pencils: a must be 2")
        p.update(grid=grid, a=2, extra_degree=int(params.get("extra_degree", 3)))
        p["pool"] = int(params.get("pool", 5))
    elif theorem == "thm5":
        if "n" in params or "k" in params:
            n, k = int(params.get("n", 0)), int(params.get("k", -1))
            if n < 4 or k != n - 2:
                raise InvalidParameters("thm5 needs n >= 4 and k = n - 2")
            if 2 * k - n < 2:
                raise InvalidParameters(f"n = {n} gives dim W = {2 * k - n}: the claim is vacuous there")
            params.setdefault("grid", [[2 * k - n, d] for d in (0, 1)])
        grid = _grid(params, ("w", "deficit"), [[w, d] for w in (2, 3, 4, 5) for d in (0, 1)])
        for w, d in grid:
            if not (2 <= w <= 8 and d in (0, 1)):
                raise InvalidParameters("thm5 cells need 2 <= dim W <= 8 and deficit 0 or 1")
        p.update(grid=grid)
    elif theorem == "thm6_lemma":
        grid = _grid(params, ("n", "k", "a"), _lemma_default_grid())
        for n, k, a in grid:
            if not (1 <= k < n <= 8 and a >= 1):
                raise InvalidParameters(f"lemma needs 1 <= k < n <= 8 and a >= 1, got {n, k, a}")
            if a * (n - k) >= k:
                raise InvalidParameters(f"lemma hypothesis a < k/(n-k) fails for n={n} k={k} a={a}")
        p.update(grid=grid)
        p["pool"] = int(params.get("pool", 5))
    else:
        raise InvalidParameters(f"unknown theorem {theorem!r}; known: {', '.join(THEOREMS)}")
    return p


# -- trials -------------------------------------------------------------------

def _thm1_trial(p: dict, seed: int, index: int) -> tuple[str, dict]:
    n, k = p["grid"][index % len(p["grid"])]
    m = generic_threshold(n, k, 1)
    degree = n + p["degree_offset"]
    sv = random_variety(seed, n, 1, degree, p["profile"], k=k, order=m, pool=p["pool"])
    jet = implicit_to_graph(sv.variety, sv.point, m)
    record = {"n": n, "k": k, "m": m, "degree": degree, **sv.to_json()}
    osc = osculation_order(jet, sv.space, m)
    record["osculation"] = osc.to_json()
    if osc.order_found != AT_LEAST_MAX:
        record["reason"] = "construction does not osculate to the threshold order"
        return FAIL, record
    gen = genericity_check(adapt_to_linear_space(jet, sv.space), m)
    record["genericity"] = gen.to_json()
    if not gen.full:
        return INCONCLUSIVE, record
    contained = contains_linear_space(sv.variety, sv.space)
    record["contained"] = contained
    return (PASS if contained else FAIL), record


def _thm2_trial(p: dict, seed: int, index: int) -> tuple[str, dict]:
    n, k = p["grid"][index % len(p["grid"])]
    rng = make_rng(seed)
    r = int(rng.integers(0, min(k, n - k) + 1))
    q, plane = quadric_with_base_plane(rng, n, k, p["pool"], pairing_rank=r)
    point = tuple(Fraction(rand_int(rng, 3)) for _ in range(n + 1))
    quad = MultiPoly.from_quadric_matrix(q)
    v = graph_variety([quad], point)
    jet = implicit_to_graph(v, point, 2)
    space = LinearSpace(point, tuple(tuple(w) + (Fraction(0),) for w in plane))
    system = QuadricSystem(n, (q,))
    rank = exact_rank(q)
    fiber = gauss_fiber_in_L(jet, space, v)
    record = {"n": n, "k": k, "quadric": q.to_json(), "plane": [_frac_list(w) for w in plane],
              "point": _frac_list(point), "rank": rank, "rank_bound": 2 * (n - k),
              "base_locus_ok": base_locus_contains(system, plane), "fiber": fiber.to_json()}
    ok = (record["base_locus_ok"] and rank <= 2 * (n - k) and fiber.bound_holds and fiber.contained)
    return (PASS if ok else FAIL), record


def _thm3_degree(p: dict, n: int) -> int:
    return p["degree"] if p["degree"] is not None else max(n + 3, 2 * n + 2)


def _thm3_trial(p: dict, seed: int, index: int) -> tuple[str, dict]:
    (n,) = p["grid"][index % len(p["grid"])]
    order = n + 1
    degree = _thm3_degree(p, n)
    sv = random_variety(seed, n, 1, degree, p["profile"], k=1, order=order, pool=p["pool"])
    jet = implicit_to_graph(sv.variety, sv.point, order)
    osc = osculation_order(jet, sv.space, order)
    record = {"n": n, "order": order, "degree": degree, "osculation": osc.to_json(), **sv.to_json()}
    if osc.order_found != AT_LEAST_MAX:
        record["reason"] = "construction does not osculate to order n+1"
        return FAIL, record
    contained = contains_linear_space(sv.variety, sv.space)
    record["contained"] = contained
    return (PASS if contained else FAIL), record


def _pencil_member(rng, case: int, n: int, extra_degree: int, pool: int) -> tuple[list[MultiPoly], ExactMatrix]:
    """Normal form plus higher terms divisible by x_n, in random coordinates; returns (funcs, P)."""
    x = variables(n)
    base = pencil_normal_form(case, n)
    funcs = []
    for q in base:
        extra = random_poly(rng, n, range(2, extra_degree), pool) if extra_degree > 2 else MultiPoly.zero(n)
        funcs.append(q + x[n - 1] * extra)
    g = random_invertible(rng, 2)
    funcs = [funcs[0].scale(g[i, 0]) + funcs[1].scale(g[i, 1]) for i in range(2)]
    p = random_invertible(rng, n)
    return [mpoly_compose_affine(f, p) for f in funcs], p


def _thm4_trial(p: dict, seed: int, index: int) -> tuple[str, dict]:
    (n,) = p["grid"][index % len(p["grid"])]
    rng = make_rng(seed)
    case = (1, 3, 4)[(index // len(p["grid"])) % 3]
    funcs, pm = _pencil_member(rng, case, n, p["extra_degree"], p["pool"])
    point = tuple(Fraction(rand_int(rng, 3)) for _ in range(n + 2))
    v = graph_variety(funcs, point)
    # Hyperplane {(P x)_n = 0} in the new coordinates.
    p_inv = inverse(pm)
    hyper = [tuple(p_inv[i, j] for i in range(n)) for j in range(n - 1)]
    space = LinearSpace(point, tuple(h + (Fraction(0), Fraction(0)) for h in hyper))
    jet = implicit_to_graph(v, point, 2)
    system = second_fundamental_system(jet)
    record = {"n": n, "case": case, "variety": v.to_json(), "point": _frac_list(point),
              "space": space.to_json()}
    try:
        cls = classify_pencil_with_hyperplane_base(system, chart_space(jet, space).directions)
    except NotAPencilOnHyperplane as exc:
        record["error"] = str(exc)
        return FAIL, record
    contained = contains_linear_space(v, space)
    record.update(classified=cls.case, contained=contained)
    return (PASS if cls.case == case and contained else FAIL), record


def _random_quadric_system(rng, w: int, dim: int, pool: int) -> list[ExactMatrix]:
    """``w`` quadrics on a w-space spanning exactly ``dim`` dimensions."""
    while True:
        gens = [random_symmetric(rng, w, pool) for _ in range(dim)]
        mats = list(gens)
        for _ in range(w - dim):
            coeffs = [rand_int(rng, 3) for _ in gens]
            mats.append(ExactMatrix.from_rows(
                [[sum(c * g[i, j] for c, g in zip(coeffs, gens)) for j in range(w)] for i in range(w)], w))
        order = [int(i) for i in rng.permutation(w)]
        mats = [mats[i] for i in order]
        if QuadricSystem(w, tuple(mats)).span_dim == dim:
            return mats


def _thm5_trial(p: dict, seed: int, index: int) -> tuple[str, dict]:
    w, deficit = p["grid"][index % len(p["grid"])]
    rng = make_rng(seed)
    mats = _random_quadric_system(rng, w, w - deficit, p["pool"])
    rep = tilde_R_report(mats)
    record = {"w": w, "system_dim": w - deficit, "system": [m.to_json() for m in mats],
              "rank": rep.rank, "target_dim": rep.target_dim}
    return (PASS if rep.surjective else FAIL), record


def _thm6_trial(p: dict, seed: int, index: int) -> tuple[str, dict]:
    n, k, a = p["grid"][index % len(p["grid"])]
    rng = make_rng(seed)
    quads, plane = system_with_base_plane(rng, n, k, a, p["pool"])
    system = QuadricSystem(n, tuple(quads))
    rep = lemma_singloc_check(system, plane)
    record = {"n": n, "k": k, "a": a, "system": system.to_json(),
              "plane": [_frac_list(w) for w in plane], "lemma": rep.to_json()}
    ok = rep.holds and rep.conclusion is not False
    return (PASS if ok else FAIL), record


_TRIALS: dict[str, Callable[[dict, int, int], tuple[str, dict]]] = {
    "thm1": _thm1_trial, "thm2": _thm2_trial, "thm3": _thm3_trial,
    "thm4": _thm4_trial, "thm5": _thm5_trial, "thm6_lemma": _thm6_trial,
}


# -- fixed (non-random) checks ------------------------------------------------

def _corpus_line_check(entry: CorpusEntry, label: str, order: int, expect_contained: bool) -> dict:
    space = entry.space(label)
    jet = implicit_to_graph(entry.variety, space.base_point, order)
    osc = osculation_order(jet, space, order)
    contained = contains_linear_space(entry.variety, space)
    return _check(f"{entry.name}:{label}", contained == expect_contained,
                  osculation=osc.to_json(), contained=contained, expected_contained=expect_contained)


def thm3_fixed_checks(grid: list[list[int]]) -> list[dict]:
    checks = []
    for name, label in (("ruled_graph", "x1_axis"), ("ruled_graph", "x2_axis"),
                        ("segre_quadric", "ruling_e2"), ("segre_quadric", "ruling_e3"),
                        ("cone", "ruling")):
        entry = corpus_variety(name)
        order = entry.variety.expected_dim + 1
        c = _corpus_line_check(entry, label, order, True)
        checks.append(c)
    for (n,) in grid:
        # Sharpness: z = x1^(n+1) + x2^2 + ... + xn^2 has the x1-axis at order exactly n.
        x = variables(n)
        f = x[0] ** (n + 1)
        for i in range(1, n):
            f = f + x[i] ** 2
        v = graph_variety([f])
        line = LinearSpace(vector([0] * (n + 1)), (vector([1] + [0] * n),))
        jet = implicit_to_graph(v, line.base_point, n + 1)
        osc = osculation_order(jet, line, n + 1)
        contained = contains_linear_space(v, line)
        checks.append(_check(f"sharpness_n{n}", osc.order_found == n and not contained,
                             osculation=osc.to_json(), contained=contained,
                             expected="order exactly n, not contained"))
    entry = corpus_variety("graph_cubic")
    space = entry.space("x1_axis")
    jet = implicit_to_graph(entry.variety, space.base_point, 3)
    osc = osculation_order(jet, space, 3)
    contained = contains_linear_space(entry.variety, space)
    checks.append(_check("sharpness_graph_cubic", osc.order_found == 2 and not contained,
                         osculation=osc.to_json(), contained=contained))
    return checks


def thm4_fixed_checks(grid: list[list[int]]) -> list[dict]:
    checks = []
    for (n,) in grid:
        for case in (1, 3, 4):
            entry = corpus_variety("pencil", case=case, n=n)
            space = entry.space("hyperplane")
            jet = implicit_to_graph(entry.variety, space.base_point, 2)
            cls = classify_pencil_with_hyperplane_base(second_fundamental_system(jet),
                                                       chart_space(jet, space).directions)
            contained = contains_linear_space(entry.variety, space)
            checks.append(_check(f"normal_form_case{case}_n{n}", cls.case == case and contained,
                                 classified=cls.case, contained=contained))
    for n in range(2, 7):
        x = variables(n)
        prol = prolongation(QuadricSystem.from_polys([x[0] * x[n - 1]]))
        checks.append(_check(f"case2_prolongation_empty_n{n}", not prol,
                             prolongation_dim=len(prol),
                             report="case 2: impossible for nondegenerate X"))
    entry = corpus_variety("scroll_codim2")
    space = entry.space("x3_zero")
    jet = implicit_to_graph(entry.variety, space.base_point, 2)
    cls = classify_pencil_with_hyperplane_base(second_fundamental_system(jet),
                                               chart_space(jet, space).directions)
    contained = contains_linear_space(entry.variety, space)
    checks.append(_check("scroll_codim2", cls.case == 3 and contained,
                         classified=cls.case, contained=contained))
    return checks


def thm5_fixed_checks(grid: list[list[int]]) -> list[dict]:
    checks = []
    for w in sorted({g[0] for g in grid}):
        zero = [ExactMatrix.zeros(w, w) for _ in range(w)]
        rep = tilde_R_report(zero)
        checks.append(_check(f"zero_system_w{w}", rep.zero_map and rep.containment_follows,
                             conclusion=rep.conclusion))
    return checks


_FIXED: dict[str, Callable[[list], list[dict]]] = {
    "thm3": thm3_fixed_checks, "thm4": thm4_fixed_checks, "thm5": thm5_fixed_checks,
}


# -- driver -------------------------------------------------------------------

def _run_one(args: tuple[str, dict, int, int]) -> tuple[int, str, dict]:
    theorem, params, master, index = args
    seed = trial_seed(master, index)
    status, record = _TRIALS[theorem](params, seed, index)
    record["trial_index"] = index
    record["trial_seed"] = seed
    return index, status, record


def default_workers() -> int:
    cap = os.environ.get("LSV_THREADS")
    if cap:
        try:
            return max(1, int(cap))
        except ValueError:
            raise InvalidParameters(f"LSV_THREADS must be an integer, got {cap!r}") from None
    return 1


def verify_theorem(theorem: str, params: Mapping | None = None, trials: int = 100, seed: int = 0,
                   workers: int | None = None) -> TrialReport:
    """Run ``trials`` seeded trials of a theorem suite (plus its fixed checks).

    ``workers`` > 1 spreads trials over processes; the report does not
    depend on it.  The default comes from ``LSV_THREADS`` (else serial).
    """
    p = normalize_params(theorem, params)
    if trials < 0:
        raise InvalidParameters("trials must be non-negative")
    workers = default_workers() if workers is None else max(1, int(workers))
    report = TrialReport(theorem, p, int(seed), trials)
    if theorem in _FIXED:
        report.checks = _FIXED[theorem](p["grid"])
    jobs = [(theorem, p, int(seed), i) for i in range(trials)]
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=min(workers, trials)) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        results = [_run_one(j) for j in jobs]
    for _, status, record in sorted(results, key=lambda r: r[0]):
        if status == PASS:
            report.passed += 1
        elif status == INCONCLUSIVE:
            report.inconclusive += 1
        else:
            report.failed += 1
            report.failures.append(record)
    return report


def replay_trial(theorem: str, params: Mapping | None, seed: int, index: int) -> tuple[str, dict]:
    """Re-run a single trial from its report coordinates."""
    _, status, record = _run_one((theorem, normalize_params(theorem, params), int(seed), int(index)))
    return status, record
