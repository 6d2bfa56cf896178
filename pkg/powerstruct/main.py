"""Command line for the power-structure engine: every series and self-check as a subcommand."""
import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence, TextIO

from pydantic import ValidationError

from .config import settings
from .configs import FiniteCoefficientData, cross_check, random_coefficient_data
from .exceptions import ContractError, GuardExceededError, ParseError
from .logging_config import setup_logging
from .models import default_var_names, dumps, element_from_json, element_to_json, series_from_json, series_to_json
from .motivic import (
    LocalSeriesData,
    cheah_main,
    hilb_global,
    hilb_local_curve,
    hilb_local_surface,
    incidence_series,
    kapranov_zeta,
    li_qin_series,
    local_data_for_dimension,
    nested_d1_local,
    nested_global,
)
from .orbifold import (
    OrbifoldDatum,
    euler_datum,
    orbifold_class,
    orbifold_e_function,
    orbifold_euler,
    wreath_series,
    wreath_series_euler,
    wreath_series_exponent_form,
    wreath_series_hodge,
)
from .power import power, run_axiom_suite, specialize_series
from .rings import HODGE, MOTIVIC, RINGS, get_ring, parse_class
from .series import TruncatedSeries
from .wreath import (
    SAMPLE_ACTIONS,
    FiniteGroupAction,
    count_wreath_types,
    sample_action,
    symmetric_orbit_count,
    wreath_conjugacy_classes,
    wreath_oracle_euler,
    wreath_orbit_count,
)

logger = logging.getLogger(__name__)


@dataclass
class CommandResult:
    """What a subcommand produced: JSON data, its table rendering and an overall verdict."""
    data: Any
    table: str
    ok: bool = True


# ---------------------------------------------------------------------------
# input and output helpers
# ---------------------------------------------------------------------------

def _load_json(path: str) -> Any:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _monomial(exp: Sequence[int], names: Sequence[str]) -> str:
    pieces = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, exp) if e]
    return "*".join(pieces) or "1"


def _render_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [list(map(str, headers))] + [list(map(str, r)) for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _series_table(s: TruncatedSeries, names: Optional[Sequence[str]] = None) -> str:
    names = list(names) if names else default_var_names(s.var_count)
    rows = [(_monomial(e, names), v) for e, v in s.items()]
    return _render_table(("monomial", "coefficient"), rows)


def _series_result(s: TruncatedSeries, spec: str, names: Optional[Sequence[str]] = None) -> CommandResult:
    s = _specialized(s, spec)
    return CommandResult(series_to_json(s, names), _series_table(s, names))


def _specialized(s: TruncatedSeries, spec: str) -> TruncatedSeries:
    if spec != "none" and s.ring is not MOTIVIC:
        raise ContractError(f"--spec {spec} applies to motivic series only, not {s.ring.name}")
    return specialize_series(s, spec)


def _report_table(rows: Sequence[Sequence[Any]]) -> str:
    return _render_table(("check", "status", "detail"), rows)


def _status(passed: bool) -> str:
    return "pass" if passed else "FAIL"


def _load_action(args: argparse.Namespace) -> tuple[str, FiniteGroupAction]:
    if getattr(args, "action", None):
        return args.action, FiniteGroupAction.model_validate(_load_json(args.action))
    return args.group, sample_action(args.group)


# ---------------------------------------------------------------------------
# series commands
# ---------------------------------------------------------------------------

def cmd_zeta(args: argparse.Namespace) -> CommandResult:
    return _series_result(kapranov_zeta(parse_class(args.class_literal), args.order), args.spec)


def cmd_power(args: argparse.Namespace) -> CommandResult:
    ring = get_ring(args.ring) if args.ring else None
    series = series_from_json(_load_json(args.series), ring)
    text = args.exp.strip()
    exponent = element_from_json(series.ring, json.loads(text) if text.startswith("{") else text)
    return _series_result(power(series, exponent), args.spec)


def cmd_hilb(args: argparse.Namespace) -> CommandResult:
    local = hilb_local_curve(args.order) if args.dim == 1 else hilb_local_surface(args.order)
    return _series_result(hilb_global(parse_class(args.class_literal), local, args.order), args.spec)


def cmd_nested(args: argparse.Namespace) -> CommandResult:
    bounds = tuple(args.bounds) if args.bounds else (args.order,) * args.depth
    if args.local:
        data = LocalSeriesData.model_validate(_load_json(args.local))
        if data.nested_local is None:
            raise ContractError("the local data file has no nestedLocal series")
        local = data.nested_local
    elif args.dim == 1:
        local = nested_d1_local(args.depth, bounds)
    else:
        raise ContractError(f"nested series in dimension {args.dim} need --local data")
    return _series_result(nested_global(parse_class(args.class_literal), local, bounds), args.spec)


def cmd_cheah(args: argparse.Namespace) -> CommandResult:
    if args.local:
        local = LocalSeriesData.model_validate(_load_json(args.local))
    else:
        local = local_data_for_dimension(args.dim, args.order)
    package = cheah_main(local, parse_class(args.class_literal), args.order)
    slots = {name: _specialized(s, args.spec) for name, s in package.slots().items()}
    data = {"slots": {name: series_to_json(s) for name, s in slots.items()}}
    table = "\n\n".join(f"[{name}]\n{_series_table(s)}" for name, s in slots.items())
    return CommandResult(data, table)


def cmd_incidence(args: argparse.Namespace) -> CommandResult:
    return _series_result(incidence_series(parse_class(args.class_literal), args.order), args.spec)


def cmd_liqin(args: argparse.Namespace) -> CommandResult:
    local = LocalSeriesData.model_validate(_load_json(args.local))
    m_local = series_from_json(_load_json(args.mlocal), MOTIVIC)
    series = li_qin_series(parse_class(args.s), parse_class(args.x), parse_class(args.c), local, m_local, args.order)
    return _series_result(series, args.spec)


# ---------------------------------------------------------------------------
# orbifold commands
# ---------------------------------------------------------------------------

def cmd_orbifold_series(args: argparse.Namespace) -> CommandResult:
    datum = OrbifoldDatum.model_validate(_load_json(args.datum))
    build = wreath_series if args.form == "product" else wreath_series_exponent_form
    series = build(datum, args.order)
    result = _series_result(series, args.spec)
    if args.spec == "hodge":
        direct = wreath_series_hodge(datum, args.order)
        result.ok = direct == specialize_series(series, "hodge")
        if not result.ok:
            logger.error("Hodge specialization of the wreath series disagrees with the E-function product")
    elif args.spec == "euler":
        result.ok = wreath_series_euler(orbifold_euler(datum), args.order) == specialize_series(series, "euler")
    return result


def cmd_orbifold_class(args: argparse.Namespace) -> CommandResult:
    datum = OrbifoldDatum.model_validate(_load_json(args.datum))
    x = orbifold_class(datum)
    data = {"class": element_to_json(MOTIVIC, x), "literal": str(x), "euler": str(orbifold_euler(datum))}
    return CommandResult(data, _render_table(("quantity", "value"), [("[X,G]", x), ("chi(X,G)", data["euler"])]))


def cmd_orbifold_efunc(args: argparse.Namespace) -> CommandResult:
    datum = OrbifoldDatum.model_validate(_load_json(args.datum))
    e = orbifold_e_function(datum)
    rows = [(f"h^({p},{q})", c) for (p, q), c in e.terms]
    return CommandResult({"efunction": element_to_json(HODGE, e), "literal": str(e)},
                         _render_table(("number", "value"), rows))


def cmd_orbifold_oracle(args: argparse.Namespace) -> CommandResult:
    name, action = _load_action(args)
    values = [wreath_oracle_euler(action, k) for k in range(args.n + 1)]
    data = {"group": name, "order": str(action.order), "chi": [str(v) for v in values]}
    return CommandResult(data, _render_table(("n", "chi(X^n, G_n)"), list(enumerate(values))))


def cmd_orbifold_types(args: argparse.Namespace) -> CommandResult:
    name, action = _load_action(args)
    classes = wreath_conjugacy_classes(args.n, action)
    type_count = count_wreath_types(len(action.conjugacy_classes), args.n)
    data = {
        "group": name,
        "n": str(args.n),
        "class_count": str(len(classes)),
        "type_count": str(type_count),
        "classes": [
            {"representative": c.representative.describe(action), "size": str(c.size),
             "type": c.type.describe(action)}
            for c in classes
        ],
    }
    rows = [(json.dumps(c.representative.describe(action)), c.size, json.dumps(c.type.describe(action)))
            for c in classes]
    table = _render_table(("representative", "size", "type"), rows)
    return CommandResult(data, table, ok=len(classes) == type_count)


# ---------------------------------------------------------------------------
# self-checks
# ---------------------------------------------------------------------------

def cmd_verify_axioms(args: argparse.Namespace) -> CommandResult:
    rings = list(RINGS.values()) if args.ring == "all" else [get_ring(args.ring)]
    bounds = (args.order,) * args.vars
    reports = [run_axiom_suite(ring, args.seed, args.cases, bounds) for ring in rings]
    rows = []
    for report in reports:
        for r in report.results:
            detail = "" if r.counterexample is None else f"case {r.counterexample.case} at {r.counterexample.exponent}"
            rows.append((f"{report.ring}: {r.property}) {r.name}", _status(r.passed), detail))
    passed = all(r.passed for r in reports)
    return CommandResult({"passed": passed, "reports": [r.model_dump() for r in reports]}, _report_table(rows), passed)


def cmd_verify_configs(args: argparse.Namespace) -> CommandResult:
    if args.data:
        suite = [FiniteCoefficientData.model_validate(_load_json(args.data))]
    else:
        rng = random.Random(args.seed)
        suite = [random_coefficient_data(rng, m_max=args.m_max, var_count=args.vars) for _ in range(args.cases)]
    bounds = tuple(args.bounds) if args.bounds else (args.order,) * (suite[0].var_count or args.vars)
    reports = [cross_check(data, bounds, naive=args.naive) for data in suite]
    rows = [(f"case {i}: m={r.m}", _status(r.passed), "" if r.mismatch is None else f"at {r.mismatch.exponent}")
            for i, r in enumerate(reports)]
    passed = all(r.passed for r in reports)
    return CommandResult({"passed": passed, "reports": [r.model_dump() for r in reports]}, _report_table(rows), passed)


def cmd_verify_wreath(args: argparse.Namespace) -> CommandResult:
    groups = [args.group] if args.group else list(SAMPLE_ACTIONS)
    checks = []
    for name in groups:
        action = sample_action(name)
        chi = orbifold_euler(euler_datum(action))
        formula = wreath_series_euler(chi, args.n).to_list()
        oracle = [wreath_oracle_euler(action, k) for k in range(args.n + 1)]
        checks.append({"check": f"{name}: chi(X^n, G_n) vs product formula", "passed": oracle == formula,
                       "detail": f"oracle {oracle}, formula {formula}"})
        classes = [len(wreath_conjugacy_classes(k, action)) for k in range(args.n + 1)]
        types = [count_wreath_types(len(action.conjugacy_classes), k) for k in range(args.n + 1)]
        checks.append({"check": f"{name}: conjugacy classes vs types", "passed": classes == types,
                       "detail": f"classes {classes}, types {types}"})
        quotient = action.orbit_count()
        orbits = [wreath_orbit_count(action, k) for k in range(args.n + 1)]
        symmetric = [symmetric_orbit_count(quotient, k) for k in range(args.n + 1)]
        checks.append({"check": f"{name}: |X^n/G_n| vs |(X/G)^n/S_n|", "passed": orbits == symmetric,
                       "detail": f"{orbits} vs {symmetric}"})
    passed = all(c["passed"] for c in checks)
    rows = [(c["check"], _status(c["passed"]), c["detail"]) for c in checks]
    return CommandResult({"passed": passed, "guards": settings.GUARDS, "checks": checks}, _report_table(rows), passed)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", choices=("json", "table"), default="json", help="Output format.")
    output.add_argument("--spec", choices=("none", "euler", "hodge"), default="none",
                        help="Specialize motivic coefficients (L -> 1 or L -> uv).")

    order = argparse.ArgumentParser(add_help=False)
    order.add_argument("--order", type=int, default=settings.DEFAULT_ORDER, help="Truncation order.")

    parser = argparse.ArgumentParser(prog="powerstruct", description="Power structures over pre-lambda rings.")
    parser.add_argument("--log-level", default=None, help="Logging level (default from POWERSTRUCT_LOG_LEVEL).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeta", parents=[output, order], help="Kapranov zeta function of a class.")
    p.add_argument("class_literal", metavar="class")
    p.set_defaults(handler=cmd_zeta)

    p = sub.add_parser("power", parents=[output], help="Raise a series file to a ring element.")
    p.add_argument("series", help="Series JSON file, or - for stdin.")
    p.add_argument("--exp", required=True, help="Exponent: class literal, integer or JSON element.")
    p.add_argument("--ring", choices=sorted(RINGS), default=None, help="Override the ring named in the file.")
    p.set_defaults(handler=cmd_power)

    p = sub.add_parser("hilb", parents=[output, order], help="Hilbert schemes of points.")
    p.add_argument("--dim", type=int, choices=(1, 2), required=True)
    p.add_argument("--class", dest="class_literal", required=True)
    p.set_defaults(handler=cmd_hilb)

    p = sub.add_parser("nested", parents=[output, order], help="Nested Hilbert schemes.")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--class", dest="class_literal", required=True)
    p.add_argument("--bounds", type=int, nargs="+", default=None)
    p.add_argument("--local", default=None, help="LocalSeriesData JSON with a nestedLocal series.")
    p.set_defaults(handler=cmd_nested)

    p = sub.add_parser("cheah", parents=[output, order], help="The eight-series nested package.")
    p.add_argument("--local", default=None, help="LocalSeriesData JSON; built-in surface data otherwise.")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--class", dest="class_literal", required=True)
    p.set_defaults(handler=cmd_cheah)

    p = sub.add_parser("incidence", parents=[output, order], help="Incidence varieties of a surface.")
    p.add_argument("--class", dest="class_literal", required=True)
    p.set_defaults(handler=cmd_incidence)

    p = sub.add_parser("liqin", parents=[output, order], help="Moduli series of a curve fibration.")
    for name in ("--s", "--x", "--c", "--local", "--mlocal"):
        p.add_argument(name, required=True)
    p.set_defaults(handler=cmd_liqin)

    orbifold = sub.add_parser("orbifold", help="Orbifold classes and wreath-product series.")
    osub = orbifold.add_subparsers(dest="orbifold_command", required=True)
    p = osub.add_parser("series", parents=[output, order])
    p.add_argument("--datum", required=True)
    p.add_argument("--form", choices=("product", "exponent"), default="product")
    p.set_defaults(handler=cmd_orbifold_series)
    p = osub.add_parser("class", parents=[output])
    p.add_argument("--datum", required=True)
    p.set_defaults(handler=cmd_orbifold_class)
    p = osub.add_parser("efunc", parents=[output])
    p.add_argument("--datum", required=True)
    p.set_defaults(handler=cmd_orbifold_efunc)
    for name, handler in (("oracle", cmd_orbifold_oracle), ("types", cmd_orbifold_types)):
        p = osub.add_parser(name, parents=[output])
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--group", choices=sorted(SAMPLE_ACTIONS))
        group.add_argument("--action", help="FiniteGroupAction JSON file.")
        p.add_argument("--n", type=int, default=3)
        p.set_defaults(handler=handler)

    verify = sub.add_parser("verify", help="Self-check suites.")
    vsub = verify.add_subparsers(dest="verify_command", required=True)
    p = vsub.add_parser("axioms", parents=[output])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--vars", type=int, default=1)
    p.add_argument("--ring", choices=["all"] + sorted(RINGS), default="all")
    p.set_defaults(handler=cmd_verify_axioms)
    p = vsub.add_parser("configs", parents=[output])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--m-max", type=int, default=5)
    p.add_argument("--vars", type=int, choices=(1, 2), default=1)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--bounds", type=int, nargs="+", default=None)
    p.add_argument("--data", default=None, help="FiniteCoefficientData JSON instead of random data.")
    p.add_argument("--naive", action="store_true", help="Use the direct (K, phi) enumeration.")
    p.set_defaults(handler=cmd_verify_configs)
    p = vsub.add_parser("wreath", parents=[output])
    p.add_argument("--group", choices=sorted(SAMPLE_ACTIONS), default=None)
    p.add_argument("--n", type=int, default=3)
    p.set_defaults(handler=cmd_verify_wreath)

    return parser


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Parse ``argv``, run the subcommand and write its output; returns the exit code."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    setup_logging(args.log_level or settings.LOG_LEVEL, settings.LOG_FILE)
    logger.info(f"Running {args.command}")
    handler: Callable[[argparse.Namespace], CommandResult] = args.handler
    try:
        result = handler(args)
    except (ContractError, GuardExceededError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValidationError, ParseError, ValueError, OSError) as e:
        # malformed JSON, literals and files
        logger.error(f"Invalid input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2

    stdout.write((result.table if args.format == "table" else dumps(result.data)) + "\n")
    return 0 if result.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
