"""Command-line front end.

Every subcommand prints a JSON report (sorted keys, schema version 1) so that
identical inputs give byte-identical output.  Exit codes: 0 success, 2 usage or
parse error, 3 violated precondition, 4 failed internal consistency check.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__, oracle, pipeline
from .blowup import (BlowupClass, InternalError, TensorClass, as_exceptional, blowup_degree,
                     class_D1_tilde, class_Gamma_tilde, degeneracy_class, i_pullback,
                     i_pushforward, mult_B, normal_form, tensor_degree, tensor_of)
from .bundles import UnsupportedError
from .params import Coefficient, evaluate, format_param, parse_param, substitute_dv
from .schubert import ChowClass, DomainError, GrassContext, check_partition, point_degree, sigma

SCHEMA = 1
SEED_ENV = "SKEWCALC_SEED"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_INCONSISTENT = 4


class UsageError(Exception):
    """Bad arguments or unparsable input; exit code 2."""


class ConsistencyError(Exception):
    """A reproduced identity failed; exit code 4."""


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    ambient: int | None = None
    degree: int | None = None
    genus: int | None = None
    curve_file: Path | None = None
    seed: int = oracle.DEFAULT_SEED
    output: Path | None = None
    emit_intermediates: bool = False


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return oracle.DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _report(**fields: Any) -> dict:
    return {"schema": SCHEMA, **fields}


# --- count --------------------------------------------------------------------

def cmd_count(ambient: int, d: int | None, g: int | None, emit_intermediates: bool = False) -> dict:
    if ambient not in (3, 4):
        raise UsageError(f"--ambient must be 3 or 4, got {ambient}")
    if d is not None and d < 1 or g is not None and g < 0:
        raise UsageError("degree must be positive and genus nonnegative")
    if ambient == 3:
        return _count_p3(d, g)
    checks = pipeline.consistency_checks()
    if not all(checks.values()):
        failed = sorted(k for k, ok in checks.items() if not ok)
        raise ConsistencyError(f"identities failed to reproduce: {', '.join(failed)}")
    count = pipeline.nonskew_count()
    out = _report(
        ambient=4,
        count_in_dv=format_param(count),
        count_in_d_g=format_param(substitute_dv(count)),
        consistency=checks,
    )
    if d is not None and g is not None:
        out.update(degree=d, genus=g, nonskew_count=pipeline.nonskew_number(d, g))
    if emit_intermediates:
        out["intermediates"] = pipeline.pipeline_report(d, g)
    return out


def _count_p3(d: int | None, g: int | None) -> dict:
    dv = 2 * d + 2 * g - 2 if d is not None and g is not None else None
    analysis = pipeline.p3_analysis(g, dv)
    symbolic = pipeline.p3_analysis()
    out = _report(
        ambient=3,
        product_coefficients=[format_param(x) for x in symbolic.product],
        multiplicity=format_param(symbolic.multiplicity),
        residual=format_param(symbolic.residual),
        genus_zero_forced=symbolic.genus_zero_forced,
    )
    if dv is not None:
        residual = int(evaluate(analysis.residual))
        out.update(
            degree=d, genus=g, dual_degree=dv,
            evaluated_coefficients=[int(evaluate(x)) for x in analysis.product],
            evaluated_multiplicity=int(evaluate(analysis.multiplicity)),
            evaluated_residual=residual,
            conclusion=("consistent: residual vanishes" if residual == 0
                        else "inconsistent: residual is nonzero, so the curve is not skew"),
        )
    return out


# --- classify -----------------------------------------------------------------

def cmd_classify(show_candidates: bool = False) -> dict:
    result = pipeline.classify_p4()
    out = _report(final=[{"genus": g, "degree": d} for g, d in result.final])
    if show_candidates:
        out["candidates"] = [{"genus": g, "degree": d} for g, d in result.candidates]
        out["excluded"] = [{"genus": g, "degree": d, "reason": reason}
                           for (g, d), reason in result.excluded]
    return out


# --- oracle -------------------------------------------------------------------

def _load_json(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def load_curve(path: Path) -> oracle.RationalCurve:
    data = _load_json(path)
    try:
        return oracle.RationalCurve.from_json(data)
    except oracle.PreconditionError:
        raise
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def load_scroll(path: Path) -> oracle.ScrollSpec:
    data = _load_json(path)
    try:
        return oracle.ScrollSpec.from_json(data)
    except oracle.PreconditionError:
        raise
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_oracle(args: argparse.Namespace, seed: int) -> dict:
    if args.scroll is not None:
        if args.curve is not None:
            raise UsageError("give either --curve or --scroll, not both")
        spec = load_scroll(args.scroll)
        verdict = oracle.scroll_skew_test(spec, seed)
        return _report(seed=seed, scroll=spec.to_json(), **verdict.to_json())
    if args.curve is None:
        raise UsageError("oracle needs --curve FILE or --scroll FILE")
    curve = load_curve(args.curve)
    out = _report(seed=seed, curve=curve.to_json(), degree=curve.degree)
    if args.contact_test is not None:
        try:
            t0 = parse_rational(args.contact_test)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out["contact"] = oracle.contact_order_test(curve, t0).to_json()
        return out
    if curve.ambient != 4:
        raise UsageError(f"pair counting needs a curve in P^4, got P^{curve.ambient}")
    pairs = oracle.count_nonskew_pairs_p4(curve, seed)
    out.update(count=pairs.count, skew=pairs.count == 0)
    if args.count_pairs:
        out["pairs"] = pairs.to_json()
        out["formula_count"] = pipeline.nonskew_number(curve.degree, 0)
    return out


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


# --- scroll -------------------------------------------------------------------

def cmd_scroll(d1: int, d2: int, verify: bool, seed: int) -> dict:
    try:
        dv = pipeline.scroll_degree(d1, d2)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    symbolic = pipeline.p4_scroll_count()
    count = int(evaluate(symbolic, g=0, dv=dv))
    out = _report(ambient=4, bidegree=[d1, d2], scroll_degree=dv,
                  count_formula=format_param(symbolic), meeting_pairs=count, skew=count == 0)
    if verify:
        spec = oracle.random_scroll(d1, d2, ambient=4, seed=seed)
        verdict = oracle.scroll_skew_test(spec, seed)
        observed = verdict.certificate.get("meeting_pairs", {}).get("count")
        out["oracle"] = {"seed": seed, "scroll": spec.to_json(), "skew": verdict.skew,
                         "meeting_pairs": observed}
        if observed != count:
            raise ConsistencyError(f"oracle found {observed} meeting pairs, formula gives {count}")
    return out


# --- chow ---------------------------------------------------------------------

OPERATIONS: dict[str, int] = {"mul": 2, "tensor": 2, "push": 1, "pull": 1, "pi": 1, "nf": 1, "deg": 1}
NAMES = ("D1", "D1_tilde", "Gamma_tilde", "E")


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ").replace(")", " ").split()


@dataclass
class ChowEnv:
    ctx: GrassContext
    genus: Coefficient = "g"
    dual_degree: Coefficient = "dv"

    def atom(self, token: str):
        if token == "D1":
            return degeneracy_class(self.ctx, 1)
        if token == "D1_tilde":
            return class_D1_tilde(self.ctx)
        if token == "Gamma_tilde":
            return class_Gamma_tilde(self.ctx, self.genus, self.dual_degree)
        if token == "E":
            return BlowupClass.exceptional_divisor(self.ctx)
        if token.startswith("sigma[") and token.endswith("]"):
            body = token[len("sigma["):-1]
            try:
                parts = [int(x) for x in body.split(",") if x.strip()]
                return sigma(self.ctx, *check_partition(parts, self.ctx))
            except ValueError as exc:
                raise UsageError(f"bad Schubert class {token}: {exc}") from None
        raise UsageError(f"unknown identifier {token!r}; expected one of {', '.join(NAMES)} "
                         f"or sigma[a,b,...]")

    def apply(self, op: str, args: list):
        def need(kind, x, what):
            if not isinstance(x, kind):
                raise UsageError(f"{op} expects {what}, got {type(x).__name__}")
            return x

        if op == "mul":
            x, y = args
            if isinstance(x, TensorClass) and isinstance(y, BlowupClass):
                x = BlowupClass.pi(x)
            if isinstance(y, TensorClass) and isinstance(x, BlowupClass):
                y = BlowupClass.pi(y)
            if isinstance(x, BlowupClass) and isinstance(y, BlowupClass):
                return mult_B(x, y)
            if type(x) is type(y) and isinstance(x, (ChowClass, TensorClass)):
                return x * y
            raise UsageError(f"cannot multiply {type(x).__name__} by {type(y).__name__}")
        if op == "tensor":
            return tensor_of(need(ChowClass, args[0], "a Schubert class"),
                             need(ChowClass, args[1], "a Schubert class"))
        if op == "push":
            return i_pushforward(need(ChowClass, args[0], "a Schubert class"))
        if op == "pull":
            return i_pullback(need(TensorClass, args[0], "a class on G x G"))
        if op == "pi":
            return BlowupClass.pi(need(TensorClass, args[0], "a class on G x G"))
        if op == "nf":
            return normal_form(need(BlowupClass, args[0], "a class on the blowup"))
        if op == "deg":
            x = args[0]
            if isinstance(x, ChowClass):
                return point_degree(x)
            if isinstance(x, TensorClass):
                return tensor_degree(x)
            return blowup_degree(need(BlowupClass, x, "a class"))
        raise UsageError(f"unknown operation {op!r}")

    def evaluate(self, text: str):
        tokens = _tokenize(text)
        if not tokens:
            raise UsageError("empty expression")
        pos = 0

        def parse():
            nonlocal pos
            if pos >= len(tokens):
                raise UsageError(f"expression ended early: {text!r}")
            token = tokens[pos]
            pos += 1
            if token in OPERATIONS:
                return self.apply(token, [parse() for _ in range(OPERATIONS[token])])
            return self.atom(token)

        value = parse()
        if pos != len(tokens):
            raise UsageError(f"trailing tokens in {text!r}: {' '.join(tokens[pos:])}")
        return value


def _describe(value) -> dict:
    if isinstance(value, BlowupClass):
        out = {"kind": "blowup", "class": str(value), "json": value.to_json()}
        try:
            out["as_exceptional"] = "j_*(" + str(as_exceptional(value)) + ")"
        except (ValueError, InternalError):
            pass
        return out
    if isinstance(value, TensorClass):
        return {"kind": "product", "class": str(value), "json": value.to_json()}
    if isinstance(value, ChowClass):
        return {"kind": "grassmannian", "class": str(value), "json": value.to_json()}
    return {"kind": "number", "value": format_param(value)}


def cmd_chow(expressions: Sequence[str], n: int, N: int, genus: str | None, dual_degree: str | None) -> dict:
    try:
        ctx = GrassContext(n, N)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    env = ChowEnv(ctx)
    try:
        if genus is not None:
            env.genus = parse_param(genus)
        if dual_degree is not None:
            env.dual_degree = parse_param(dual_degree)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad parameter: {exc}") from None
    results = []
    for expr in expressions:
        try:
            value = env.evaluate(expr)
        except (DomainError, UnsupportedError) as exc:
            raise UsageError(f"{expr!r}: {exc}") from None
        results.append({"expression": expr, **_describe(value)})
    return _report(grassmannian=[n, N], results=results)


def _read_expressions(args: argparse.Namespace) -> list[str]:
    exprs = list(args.expr or [])
    if args.file is not None:
        try:
            lines = Path(args.file).read_text().splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc}") from None
        exprs += [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not exprs:
        raise UsageError("chow needs an expression (positional) or --file")
    return exprs


# --- argument parsing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="skewcalc", description="Meeting tangent lines of curves in P^3 and P^4.")
    parser.add_argument("--version", action="version", version=f"skewcalc {__version__}")
    parser.add_argument("--seed", type=int, default=None,
                        help=f"random seed for the oracle (default: ${SEED_ENV} or {oracle.DEFAULT_SEED})")
    parser.add_argument("--output", "-o", type=Path, default=None, help="write the JSON report here")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("count", help="number of ordered pairs of meeting tangent lines")
    p.add_argument("--ambient", type=int, default=4)
    p.add_argument("--degree", "-d", type=int)
    p.add_argument("--genus", "-g", type=int)
    p.add_argument("--emit-intermediates", action="store_true")

    p = sub.add_parser("classify", help="curves in P^4 with pairwise skew tangent lines")
    p.add_argument("--show-candidates", action="store_true")

    p = sub.add_parser("oracle", help="exact checks on an explicit rational curve or scroll")
    p.add_argument("--curve", type=Path)
    p.add_argument("--scroll", type=Path)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--count-pairs", action="store_true")
    mode.add_argument("--check-skew", action="store_true")
    mode.add_argument("--contact-test", metavar="T0")
    mode.add_argument("--scroll-test", action="store_true")

    p = sub.add_parser("chow", help="evaluate prefix expressions in the Chow rings")
    p.add_argument("expr", nargs="*", help="e.g. 'mul E D1_tilde'")
    p.add_argument("--file", type=Path)
    p.add_argument("--grassmannian", nargs=2, type=int, default=[2, 4], metavar=("n", "N"))
    p.add_argument("--genus")
    p.add_argument("--dual-degree")

    p = sub.add_parser("scroll", help="meeting rulings of a scroll in P^4")
    p.add_argument("--bidegree", nargs=2, type=int, required=True, metavar=("D1", "D2"))
    p.add_argument("--verify", action="store_true", help="also run the oracle on a random scroll")
    return parser


def config_from_args(args: argparse.Namespace, seed: int) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        ambient=getattr(args, "ambient", None),
        degree=getattr(args, "degree", None),
        genus=getattr(args, "genus", None),
        curve_file=getattr(args, "curve", None),
        seed=seed,
        output=args.output,
        emit_intermediates=getattr(args, "emit_intermediates", False),
    )


def dispatch(args: argparse.Namespace) -> dict:
    seed = args.seed if args.seed is not None else default_seed()
    config = config_from_args(args, seed)
    handlers: dict[str, Callable[[], dict]] = {
        "count": lambda: cmd_count(config.ambient, config.degree, config.genus, config.emit_intermediates),
        "classify": lambda: cmd_classify(args.show_candidates),
        "oracle": lambda: cmd_oracle(args, seed),
        "chow": lambda: cmd_chow(_read_expressions(args), *args.grassmannian, args.genus, args.dual_degree),
        "scroll": lambda: cmd_scroll(*args.bidegree, args.verify, seed),
    }
    return handlers[config.subcommand]()


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text = render(dispatch(args))
    except UsageError as exc:
        print(f"skewcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except oracle.PreconditionError as exc:
        print(f"skewcalc: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ConsistencyError, oracle.SeedDisagreementError, InternalError) as exc:
        print(f"skewcalc: consistency failure: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    if args.output is not None:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
