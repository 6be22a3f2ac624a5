"""Command-line front end.

Exit codes: 0 for a definite answer (including "not contained"), 2 when the
answer is only known to the jet order, 1 for bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import corpus as corpus_mod
from .errors import LinoscError
from .linalg import format_fraction, intersect, span_basis, to_fraction
from .osculation import (UNDETERMINED, branch_threshold, decide, gauss_fiber_in_L, generic_threshold,
                         genericity_check, osculation_order)
from .parser import max_variable_index, parse_poly, uses_x0
from .polynomial import MultiPoly, format_poly
from .quadrics import (QuadricSystem, classify_pencil_with_hyperplane_base, fundamental_form,
                       prolongation, second_fundamental_system, singular_locus)
from .variety import (GraphJet, ImplicitVariety, LinearSpace, adapt_to_linear_space, chart_space,
                      contains_linear_space, implicit_to_graph)
from .verify import THEOREMS, verify_theorem


class InputError(LinoscError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors are input errors (exit 1), not "undetermined"
        raise InputError(f"{self.prog}: {message}")


# -- loading ------------------------------------------------------------------

def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg}, line {exc.lineno})") from None


def _poly(data, num_vars: int, allow_x0: bool = False) -> MultiPoly:
    if isinstance(data, str):
        return parse_poly(data, num_vars, allow_x0)
    return MultiPoly.from_json(data, num_vars)


def dehomogenize(polys: Sequence[MultiPoly], chart: int) -> list[MultiPoly]:
    """Set x_chart = 1 in polynomials over x0..xN; the result is over x1..xN."""
    out = []
    for p in polys:
        if not p.is_homogeneous():
            raise InputError(f"projective generator {p} is not homogeneous")
        terms: dict = {}
        for e, c in p.terms.items():
            rest = e[:chart] + e[chart + 1:]
            terms[rest] = terms.get(rest, Fraction(0)) + c
        out.append(MultiPoly(p.num_vars - 1, terms))
    return out


def load_variety(data: dict, chart: int | None = None) -> ImplicitVariety:
    if "exprs" in data:
        texts = list(data["exprs"])
        projective = any(uses_x0(t) for t in texts)
        if projective and chart is None:
            raise InputError("expressions use x0 (projective input): pass --chart i to pick an affine chart")
        if chart is not None:
            num = int(data.get("ambient_dim", _max_var(texts))) + 1
            if not 0 <= chart < num:
                raise InputError(f"chart index {chart} outside 0..{num - 1}")
            polys = dehomogenize([parse_poly(t, num, allow_x0=True) for t in texts], chart)
            num -= 1
        else:
            num = int(data.get("ambient_dim", _max_var(texts)))
            polys = [parse_poly(t, num) for t in texts]
        expected = int(data.get("expected_dim", num - len(polys)))
        return ImplicitVariety(num, expected, tuple(polys))
    try:
        n = int(data["ambient_dim"])
        if chart is None:
            gens = [_poly(g, n) for g in data["generators"]]
        else:
            if not 0 <= chart <= n:
                raise InputError(f"chart index {chart} outside 0..{n}")
            gens = dehomogenize([_poly(g, n + 1, True) for g in data["generators"]], chart)
        return ImplicitVariety(n, int(data["expected_dim"]), tuple(gens))
    except KeyError as exc:
        raise InputError(f"variety JSON is missing field {exc}") from None


def _max_var(texts: Sequence[str]) -> int:
    return max((max_variable_index(t) for t in texts), default=0)


def load_space(data: dict) -> LinearSpace:
    try:
        return LinearSpace.from_json(data)
    except KeyError as exc:
        raise InputError(f"space JSON is missing field {exc}") from None


def load_jet(data: dict) -> GraphJet:
    try:
        n = int(data["n"])
        funcs = [_poly(f, n) for f in data["funcs"]]
        return GraphJet(n, int(data.get("a", len(funcs))), int(data["order"]), tuple(funcs))
    except KeyError as exc:
        raise InputError(f"jet JSON is missing field {exc}") from None


def load_system(data: dict) -> QuadricSystem:
    n = int(data["n"])
    if "exprs" in data:
        return QuadricSystem.from_polys([parse_poly(t, n) for t in data["exprs"]], n)
    return QuadricSystem.from_json(data)


def _point(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(to_fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad point {text!r}: expected comma-separated rationals") from None


def _directions(text: str, n: int) -> list[tuple[Fraction, ...]]:
    dirs = [_point(d) for d in text.split(";") if d.strip()]
    for d in dirs:
        if len(d) != n:
            raise InputError(f"direction {d} should have {n} entries")
    return dirs


# -- context: variety/jet/space from flags ---------------------------------------

class Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.variety = load_variety(_read_json(args.variety), args.chart) if getattr(args, "variety", None) else None
        self.space = load_space(_read_json(args.space)) if getattr(args, "space", None) else None
        self._jet = load_jet(_read_json(args.jet)) if getattr(args, "jet", None) else None

    def point(self) -> tuple[Fraction, ...]:
        if getattr(self.args, "point", None):
            return _point(self.args.point)
        if self.space is not None:
            return self.space.base_point
        raise InputError("need --point or --space to locate the base point")

    def jet(self, order: int) -> GraphJet:
        if self._jet is not None:
            return self._jet
        if self.variety is None:
            raise InputError("need --variety or --jet")
        return implicit_to_graph(self.variety, self.point(), order)

    def need_space(self) -> LinearSpace:
        if self.space is None:
            raise InputError("need --space")
        return self.space

    def chart_space(self, jet: GraphJet) -> LinearSpace:
        return chart_space(jet, self.need_space())


def _vec(v) -> list[str]:
    return [format_fraction(x) for x in v]


def _vec_text(v) -> str:
    return "(" + ", ".join(format_fraction(x) for x in v) + ")"


# -- verbs -------------------------------------------------------------------------
# Each returns (json payload, text lines, exit code).

def cmd_threshold(args, _ctx):
    m = generic_threshold(args.n, args.k, args.a)
    b1 = branch_threshold(args.n, args.k, args.a, 1)
    b2 = branch_threshold(args.n, args.k, args.a, 2)
    payload = {"n": args.n, "k": args.k, "a": args.a, "m": m, "branch1": b1, "branch2": b2}
    lines = [f"m = {m}", f"  branch 1 (k-plane count): {b1}",
             f"  branch 2 (2k-n count): {b2 if b2 is not None else 'not applicable'}"]
    return payload, lines, 0


def cmd_osculation(args, ctx):
    jet = ctx.jet(args.max_order)
    rep = osculation_order(jet, ctx.chart_space(jet), min(args.max_order, jet.order))
    lines = [f"osculation order: {rep.order_found}" + (f" (checked to {rep.max_order_checked})"
                                                       if rep.order_found == "at_least_max" else "")]
    if rep.first_obstruction:
        ob = rep.first_obstruction
        lines.append(f"first obstruction: degree {ob.degree}, normal {ob.normal_index}, "
                     f"monomial {list(ob.multi_index)}, coefficient {format_fraction(ob.coeff)}")
    return rep.to_json(), lines, 0


def cmd_contains(args, ctx):
    if ctx.variety is None:
        raise InputError("contains needs --variety")
    result = contains_linear_space(ctx.variety, ctx.need_space())
    return {"contained": result}, ["contained" if result else "not contained"], 0


def cmd_forms(args, ctx):
    jet = ctx.jet(args.order)
    payload, lines = {"n": jet.n, "a": jet.a, "forms": {}}, []
    for d in range(2, jet.order + 1):
        form = fundamental_form(jet, d)
        payload["forms"][str(d)] = [f.to_json() for f in form.forms]
        for mu, f in enumerate(form.forms, start=1):
            lines.append(f"F{d}[{mu}] = {format_poly(f)}")
    return payload, lines, 0


def cmd_singloc(args, ctx):
    if args.system:
        system = load_system(_read_json(args.system))
        tl = None
    else:
        jet = ctx.jet(2)
        system = second_fundamental_system(jet)
        tl = span_basis(ctx.chart_space(jet).directions, jet.n) if ctx.space else None
    basis = singular_locus(system)
    payload = {"n": system.n, "dim": len(basis), "basis": [_vec(v) for v in basis]}
    lines = [f"singular locus: dim {len(basis)}"] + [f"  {_vec_text(v)}" for v in basis]
    if tl is not None:
        inside = intersect(basis, tl, system.n)
        payload["in_space"] = {"dim": len(inside), "basis": [_vec(v) for v in inside]}
        lines.append(f"inside the space's tangent directions: dim {len(inside)}")
    return payload, lines, 0


def cmd_prolong(args, ctx):
    if args.system:
        system = load_system(_read_json(args.system))
    else:
        system = second_fundamental_system(ctx.jet(2))
    cubics = prolongation(system)
    payload = {"n": system.n, "dim": len(cubics), "cubics": [c.to_json() for c in cubics]}
    lines = [f"prolongation: dim {len(cubics)}"] + [f"  {format_poly(c)}" for c in cubics]
    return payload, lines, 0


def cmd_classify_pencil(args, ctx):
    if args.system:
        system = load_system(_read_json(args.system))
        if not args.hyperplane:
            raise InputError("with --system, pass --hyperplane 'v1;v2;...'")
        hyper = _directions(args.hyperplane, system.n)
    else:
        jet = ctx.jet(2)
        system = second_fundamental_system(jet)
        hyper = list(ctx.chart_space(jet).directions)
    cls = classify_pencil_with_hyperplane_base(system, hyper)
    payload = cls.to_json()
    lines = [f"case {cls.case}"]
    if cls.case == 2:
        payload["note"] = "impossible for nondegenerate X: the prolongation of the system is empty"
        lines.append(payload["note"])
    return payload, lines, 0


def cmd_gauss_fiber(args, ctx):
    jet = ctx.jet(2)
    rep = gauss_fiber_in_L(jet, ctx.need_space(), ctx.variety if jet.chart is not None else None)
    lines = [f"fibre in L: dim {rep.dim} (lower bound {rep.lower_bound})"]
    lines += [f"  {_vec_text(v)}" for v in rep.basis]
    if rep.contained is not None:
        lines.append("fibre span contained" if rep.contained else "fibre span NOT contained")
    return rep.to_json(), lines, 0


def cmd_genericity(args, ctx):
    m = args.m
    jet = ctx.jet(m)
    split = adapt_to_linear_space(jet, ctx.chart_space(jet))
    rep = genericity_check(split, m)
    lines = [f"genericity: {'full' if rep.full else 'not full'} "
             f"(rank {rep.cumulative_rank} of {rep.target_dim})",
             f"  cumulative ranks by order {list(rep.orders)}: {list(rep.cumulative_ranks)}",
             f"  dim W = {rep.w_dim} (formula {rep.w_dim_formula}), dim M = {rep.m_dim}"]
    return rep.to_json(), lines, 0


def cmd_decide(args, ctx):
    space = ctx.need_space()
    if ctx.variety is not None:
        jet = implicit_to_graph(ctx.variety, space.base_point, args.max_order)
        dec = decide(space, variety=ctx.variety, jet=jet)
    else:
        jet = ctx.jet(args.max_order)
        dec = decide(space, jet=jet, max_order=min(args.max_order, jet.order))
    lines = [dec.verdict, f"osculation order: {dec.osculation.order_found}",
             f"threshold m = {dec.threshold_m}"] + list(dec.notes)
    return dec.to_json(), lines, 2 if dec.verdict == UNDETERMINED else 0


def cmd_verify(args, _ctx):
    params: dict = {}
    if args.config:
        cfg = _read_json(args.config)
        params.update(cfg.get("params", {}))
        seed = cfg.get("seed", args.seed)
        trials = cfg.get("trials", args.trials)
    else:
        seed, trials = args.seed, args.trials
    for key in ("n", "k", "a", "profile", "pool", "degree"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    rep = verify_theorem(args.theorem, params, trials=int(trials), seed=int(seed), workers=args.workers)
    lines = [rep.summary()]
    for c in rep.checks:
        if c["status"] != "pass":
            lines.append(f"  check failed: {c['name']}")
    for f in rep.failures[:5]:
        lines.append(f"  failed trial {f['trial_index']} (seed {f['trial_seed']})")
    return rep.to_json(), lines, 0


def cmd_corpus(args, _ctx):
    if args.name is None:
        return {"names": list(corpus_mod.CORPUS_NAMES)}, list(corpus_mod.CORPUS_NAMES), 0
    params = {}
    for item in args.param or []:
        key, _, value = item.partition("=")
        if not value:
            raise InputError(f"--param expects key=value, got {item!r}")
        params[key] = int(value)
    try:
        entry = corpus_mod.corpus_variety(args.name, **params)
    except (KeyError, TypeError) as exc:
        raise InputError(str(exc).strip("'\"")) from None
    lines = [f"{entry.name}: {entry.notes}"]
    lines += [f"  generator: {format_poly(g)}" for g in entry.variety.generators]
    lines += [f"  point: {_vec_text(p)}" for p in entry.points]
    lines += [f"  space {label}: point {_vec_text(s.base_point)}, directions "
              + ", ".join(_vec_text(d) for d in s.directions) for label, s in entry.spaces]
    return entry.to_json(), lines, 0


# -- argument parsing -----------------------------------------------------------------

def _common(p: argparse.ArgumentParser, *, space: bool = True, point: bool = True, system: bool = False):
    p.add_argument("--variety", help="variety JSON file")
    p.add_argument("--jet", help="graph jet JSON file (instead of a variety)")
    if space:
        p.add_argument("--space", help="linear space JSON file")
    if point:
        p.add_argument("--point", help="base point as comma-separated rationals")
    if system:
        p.add_argument("--system", help="quadric system JSON file")
    p.add_argument("--chart", type=int, help="dehomogenize projective input at x_i = 1")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linosc", description="Osculating linear spaces: exact containment tools.",
                     allow_abbrev=False)
    parser.add_argument("--json", action="store_true", help="emit JSON")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, allow_abbrev=False)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
        p.set_defaults(func=func)
        return p

    p = add("threshold", cmd_threshold, "generic osculation threshold m(n, k, a)")
    for flag in ("n", "k", "a"):
        p.add_argument(f"-{flag}", type=int, required=True)

    p = add("osculation", cmd_osculation, "osculation order of a linear space")
    _common(p)
    p.add_argument("--max-order", type=int, default=6)

    p = add("contains", cmd_contains, "exact containment oracle")
    _common(p, point=False)

    p = add("forms", cmd_forms, "fundamental forms F2..Fd at a point")
    _common(p, space=False)
    p.add_argument("--order", type=int, default=3)

    p = add("singloc", cmd_singloc, "singular locus of the second fundamental form or a system")
    _common(p, system=True)

    p = add("prolong", cmd_prolong, "prolongation of a system of quadrics")
    _common(p, space=False, system=True)

    p = add("classify-pencil", cmd_classify_pencil, "normal-form case of a pencil with a hyperplane base")
    _common(p, system=True)
    p.add_argument("--hyperplane", help="hyperplane basis 'v1;v2;...' (with --system)")

    p = add("gauss-fiber", cmd_gauss_fiber, "Gauss fibre inside a plane in the base locus")
    _common(p, point=False)

    p = add("genericity", cmd_genericity, "rank conditions of the R-maps up to order m")
    _common(p, point=False)
    p.add_argument("-m", type=int, required=True)

    p = add("decide", cmd_decide, "decide containment of a linear space")
    _common(p, point=False)
    p.add_argument("--max-order", type=int, default=6)

    p = add("verify", cmd_verify, "run a seeded verification suite")
    p.add_argument("theorem", choices=THEOREMS)
    for flag in ("n", "k", "a"):
        p.add_argument(f"-{flag}", type=int)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, help="parallel processes (default: LSV_THREADS or 1)")
    p.add_argument("--profile", choices=("vanish_on_L", "ruled_L"))
    p.add_argument("--pool", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--config", help="JSON file with seed, trials and params")

    p = add("corpus", cmd_corpus, "show a corpus variety (no name: list them)")
    p.add_argument("name", nargs="?")
    p.add_argument("--param", action="append", help="family parameter key=value")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        payload, lines, code = args.func(args, Context(args))
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (LinoscError, ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2), file=stdout)
    else:
        print("\n".join(lines), file=stdout)
    return code


def main() -> None:
    sys.exit(run())
