"""
Command-line front end of the truth-theory workbench.

Every subcommand reads inline S-expressions or files, writes its result to stdout
(or ``--out``) and logs to stderr. Exit codes: 0 on success, 1 when a check fails,
2 on invalid input or usage.
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from services.axioms import (
    biconditional,
    cc_instance,
    code_instance,
    dc_instance,
    dtb_bundle,
    ic_instance,
    ind_sentence,
    order_axioms,
    pc_of,
    pc_phi,
    pc_u,
    q_axioms,
    tarski_0,
    tarski_instances,
    theta_disjunction,
)
from services.corpus import load_pool, load_seed_corpus
from services.diagonal import fixed_point, loeb_bundle, theta_indexed, theta_of
from services.export import obligation_tasks, to_sexpr, to_tptp
from services.goedel import decode, encode
from services.interp import SIZE_MODES, build_iota, size_profile, translate
from services.semantics import (
    CheckReport,
    check_cc,
    check_claim_star,
    check_dc,
    check_dtb_finite,
    check_ind,
    check_piecewise,
    check_triangle,
)
from services.sexpr import parse, parse_formulas, parse_term, render
from services.syntax import big_and, big_or, desugar, relativize
from utils.config import OUTPUT_FORMATS, Config, load_config
from utils.errors import WorkbenchError
from utils.logging_setup import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_ERROR = 0, 1, 2

DEFAULT_PSI = "(eq z (s z))"
DEFAULT_PC_FORMULA = "(eq (var x) (var x))"
DEFAULT_IND_FORMULAS = """
(eq (var x) (var x))
(not (eq (var x) (var x)))
(lt (var x) (s (var x)))
(eq (+ (var x) z) (var x))
"""

SUITES = ("dc", "cc", "star", "triangle", "pc", "dtb", "ind")
BUNDLES = ("dtb", "loeb", "q", "order", "tarski")
AXIOM_KINDS = (
    "tarski0",
    "tarski",
    "dc",
    "cc",
    "ind",
    "ic",
    "biconditional",
    "pc-u",
    "pc-phi",
    "pc",
    "code",
    "q",
    "order",
    "dtb",
)


# ============================================================================
# INPUT HELPERS
# ============================================================================


def _is_file(value: str) -> bool:
    try:
        return Path(value).is_file()
    except (OSError, ValueError):
        return False


def _read_text(value: str) -> str:
    """A path to an existing file is read; anything else is inline text."""
    if _is_file(value):
        return Path(value).read_text(encoding="utf-8")
    return value


def _formula(value: str):
    return parse(_read_text(value))


def _pool(value: Optional[str]) -> List:
    """Pool sentences from a file, inline S-expressions, or nothing."""
    if value is None:
        return []
    if _is_file(value):
        return load_pool(value)
    return parse_formulas(value)


def _pool_or_corpus(value: Optional[str], config: Config) -> List:
    if value is None:
        return load_seed_corpus(config.seed_corpus_path)
    return _pool(value)


def _formulas(values: Sequence[str], pool: Optional[str]) -> List:
    formulas = [_formula(value) for value in values]
    formulas.extend(_pool(pool))
    return formulas


# ============================================================================
# COMMANDS
# ============================================================================
# Each command returns (text, exit code); text is already in the output format.


def _wrap(args, result) -> str:
    if args.format == "json":
        return json.dumps({"command": args.command, "result": result}, indent=2)
    return str(result)


def cmd_parse(args, config):
    return _wrap(args, render(_formula(args.formula))), EXIT_OK


def cmd_render(args, config):
    formula = _formula(args.formula)
    if args.desugar:
        formula = desugar(formula)
    return _wrap(args, render(formula)), EXIT_OK


def cmd_encode(args, config):
    text = _read_text(args.formula)
    node = parse_term(text) if args.term else parse(text)
    return _wrap(args, str(encode(node))), EXIT_OK


def cmd_decode(args, config):
    if not args.code.isdigit():
        raise WorkbenchError(f"expected a natural number, got {args.code!r}")
    return _wrap(args, render(decode(int(args.code)))), EXIT_OK


def cmd_bigor(args, config):
    return _wrap(args, render(big_or(_formulas(args.formulas, args.pool)))), EXIT_OK


def cmd_bigand(args, config):
    return _wrap(args, render(big_and(_formulas(args.formulas, args.pool)))), EXIT_OK


def cmd_relativize(args, config):
    return _wrap(args, render(relativize(_formula(args.formula), args.index))), EXIT_OK


def _axioms_result(args):
    kind = args.kind
    pool = _pool(args.pool)
    formula = _formula(args.formula) if args.formula else None

    def need_formula():
        if formula is None:
            raise WorkbenchError(f"axioms {kind} needs --formula")
        return formula

    bundles: Dict[str, Callable] = {
        "tarski": lambda: tarski_instances(sent_pool=pool),
        "q": q_axioms,
        "order": order_axioms,
        "dtb": lambda: dtb_bundle(pool),
    }
    formulas: Dict[str, Callable] = {
        "tarski0": tarski_0,
        "dc": lambda: dc_instance(pool),
        "cc": lambda: cc_instance(pool),
        "ind": lambda: ind_sentence(need_formula()),
        "ic": lambda: ic_instance(need_formula()),
        "biconditional": lambda: biconditional(need_formula()),
        "pc-u": pc_u,
        "pc-phi": lambda: pc_phi(need_formula()),
        "pc": lambda: pc_of(need_formula()),
        "code": lambda: code_instance(need_formula(), args.c, args.u),
    }
    if kind in bundles:
        return bundles[kind]()
    return formulas[kind]()


def cmd_axioms(args, config):
    return _wrap(args, to_sexpr(_axioms_result(args))), EXIT_OK


def cmd_theta(args, config):
    if args.disjunction:
        result = theta_disjunction(_pool(args.pool))
    elif args.formula:
        result = theta_of(_formula(args.formula))
    else:
        result = theta_indexed()
    return _wrap(args, render(result)), EXIT_OK


def cmd_fixedpoint(args, config):
    return _wrap(args, to_sexpr(fixed_point(_formula(args.delta)))), EXIT_OK


def cmd_iota(args, config):
    iota = build_iota(_formula(args.psi), _pool(args.pool), args.n)
    return _wrap(args, to_sexpr(iota)), EXIT_OK


def cmd_translate(args, config):
    iota = build_iota(_formula(args.psi), _pool(args.pool), args.n)
    return _wrap(args, render(translate(iota, _formula(args.formula)))), EXIT_OK


def cmd_size_profile(args, config):
    report = size_profile(_formula(args.psi), _pool(args.pool), args.n_max, args.mode, config.node_budget)
    frame = report.to_frame()
    logger.info(f"Size profile:\n{frame.to_string(index=False)}")
    if args.format == "json":
        return frame.to_json(orient="records"), EXIT_OK
    return report.to_csv().rstrip("\n"), EXIT_OK


def _run_suite(suite: str, args, config: Config) -> CheckReport:
    fuel = config.fuel
    if suite in ("dc", "cc", "star"):
        corpus = _pool_or_corpus(args.pool, config)
        if suite == "star":
            size = args.u if args.u is not None else len(corpus)
            return check_claim_star(corpus[:size], fuel)
        size = args.s if args.s is not None else min(config.max_pool, len(corpus))
        check = check_dc if suite == "dc" else check_cc
        return check(corpus[:size], fuel, config.max_pool)
    if suite == "triangle":
        pool = _pool_or_corpus(args.pool, config)[:2]
        return check_triangle(_formula(args.psi), pool, args.n, args.sentence, fuel, config.node_budget)
    if suite == "pc":
        u = args.u if args.u is not None else 3
        return check_piecewise(_formula(args.formula or DEFAULT_PC_FORMULA), u, fuel)
    if suite == "dtb":
        return check_dtb_finite(_formula(args.psi), _pool(args.pool), args.n, fuel)
    return check_ind(parse_formulas(_read_text(args.formula or DEFAULT_IND_FORMULAS)), fuel)


def cmd_check(args, config):
    suites = SUITES if args.suite == "all" else (args.suite,)
    reports = []
    for suite in suites:
        report = _run_suite(suite, args, config)
        logger.info(f"Suite {suite}:\n{report.to_frame().to_string(index=False)}")
        reports.append(report)

    passed = all(report.passed for report in reports)
    if config.output_format == "sexpr":
        text = "\n".join(to_sexpr(report) for report in reports)
    elif len(reports) == 1:
        text = reports[0].to_json()
    else:
        text = json.dumps({"pass": passed, "reports": [report.to_dict() for report in reports]}, indent=2)
    return text, EXIT_OK if passed else EXIT_CHECK_FAILED


def _bundle(args):
    pool = _pool(args.pool)
    builders: Dict[str, Callable] = {
        "dtb": lambda: dtb_bundle(pool),
        "loeb": lambda: loeb_bundle(pool),
        "q": q_axioms,
        "order": order_axioms,
        "tarski": lambda: tarski_instances(sent_pool=pool),
    }
    return builders[args.bundle]()


def cmd_export_tptp(args, config):
    bundle = _bundle(args)
    text = to_tptp(bundle, config.tower_limit, args.opaque_codes)
    if args.obligations_dir:
        directory = Path(args.obligations_dir)
        directory.mkdir(parents=True, exist_ok=True)
        for name, problem in obligation_tasks(bundle, config.tower_limit, args.opaque_codes).items():
            (directory / f"{name}.p").write_text(problem, encoding="utf-8")
            logger.info(f"Wrote obligation task {directory / f'{name}.p'}")
    return text.rstrip("\n"), EXIT_OK


COMMANDS: Dict[str, Callable] = {
    "parse": cmd_parse,
    "render": cmd_render,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "bigor": cmd_bigor,
    "bigand": cmd_bigand,
    "relativize": cmd_relativize,
    "axioms": cmd_axioms,
    "theta": cmd_theta,
    "fixedpoint": cmd_fixedpoint,
    "iota": cmd_iota,
    "translate": cmd_translate,
    "size-profile": cmd_size_profile,
    "check": cmd_check,
    "export-tptp": cmd_export_tptp,
}


# ============================================================================
# ARGUMENT PARSING
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=int, help="evaluation fuel (default 64, env CTW_FUEL)")
    common.add_argument("--budget", type=int, help="node budget for translations (default 10^6)")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="output format")
    common.add_argument("--out", help="write the result to this file instead of stdout")
    common.add_argument("--log-level", default="WARNING", help="log level (default WARNING)")
    common.add_argument("--logs-dir", help="also write logs to a timestamped file in this directory")

    parser = argparse.ArgumentParser(prog="ctw", description="Truth-theory workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_text, parents=[common])

    p = command("parse", "parse and re-render a formula")
    p.add_argument("formula")

    p = command("render", "render a formula canonically")
    p.add_argument("formula")
    p.add_argument("--desugar", action="store_true", help="eliminate and/imp/iff/all and bounded quantifiers")

    p = command("encode", "Goedel number of a formula or term")
    p.add_argument("formula")
    p.add_argument("--term", action="store_true", help="the input is a term")

    p = command("decode", "formula or term coded by a number")
    p.add_argument("code")

    for name in ("bigor", "bigand"):
        p = command(name, f"left-grouped {name[3:]} of sentences")
        p.add_argument("formulas", nargs="*")
        p.add_argument("--pool", help="pool file or inline sentences")

    p = command("relativize", "relativize index quantifiers below an index variable")
    p.add_argument("formula")
    p.add_argument("--index", required=True)

    p = command("axioms", "generate axioms, instances and bundles")
    p.add_argument("kind", choices=AXIOM_KINDS)
    p.add_argument("--pool", help="pool file or inline sentences")
    p.add_argument("--formula", help="formula argument of the generator")
    p.add_argument("--c", type=int, default=0, help="code value for 'code'")
    p.add_argument("--u", type=int, default=0, help="length for 'code'")

    p = command("theta", "theta formulas")
    p.add_argument("--disjunction", action="store_true", help="indexed disjunction over --pool")
    p.add_argument("--pool", help="pool file or inline sentences")
    p.add_argument("--formula", help="apply theta to the quotation of this sentence")

    p = command("fixedpoint", "fixed point of a unary formula")
    p.add_argument("delta")

    p = command("iota", "interpretation at stage n")
    p.add_argument("--psi", required=True)
    p.add_argument("--pool", help="pool file or inline sentences")
    p.add_argument("--n", type=int, required=True)

    p = command("translate", "translate a formula through an interpretation")
    p.add_argument("formula")
    p.add_argument("--psi", required=True)
    p.add_argument("--pool", help="pool file or inline sentences")
    p.add_argument("--n", type=int, required=True)

    p = command("size-profile", "sizes of translated biconditionals per stage (CSV)")
    p.add_argument("--psi", required=True)
    p.add_argument("--pool", help="pool file or inline sentences")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--mode", choices=SIZE_MODES, default=SIZE_MODES[0])

    p = command("check", "run a check suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--pool", help="pool file or inline sentences (default: seed corpus)")
    p.add_argument("--s", type=int, help="pool size for dc and cc")
    p.add_argument("--u", type=int, help="prefix length for star, length for pc")
    p.add_argument("--psi", default=DEFAULT_PSI, help="index exclusion formula for triangle and dtb")
    p.add_argument("--n", type=int, default=2, help="stage for triangle, last stage for dtb")
    p.add_argument("--sentence", type=int, default=0, help="pool position for triangle")
    p.add_argument("--formula", help="formula for pc, formulas for ind")

    p = command("export-tptp", "write a bundle as a TPTP FOF problem")
    p.add_argument("--bundle", choices=BUNDLES, default="dtb")
    p.add_argument("--pool", help="pool file or inline sentences")
    p.add_argument("--opaque-codes", action="store_true", help="replace oversized numerals by constants")
    p.add_argument("--obligations-dir", help="write one problem per obligation into this directory")

    return parser


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Result written to {out}")
    else:
        sys.stdout.write(text + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR

    setup_logging(args.log_level, args.logs_dir)
    logger.info("=" * 70)
    logger.info(f"ctw {args.command}")
    logger.info("=" * 70)

    try:
        config = load_config(fuel=args.fuel, node_budget=args.budget, output_format=args.format)
        if config.output_format is None:
            config = replace(config, output_format="json" if args.command == "check" else "sexpr")
        args.format = config.output_format
        text, code = COMMANDS[args.command](args, config)
        _write(text, args.out)
    except (ValueError, OSError) as e:
        sys.stderr.write(f"ctw {args.command}: {e}\n")
        logger.debug("Command failed", exc_info=True)
        return EXIT_ERROR

    logger.info("=" * 70)
    logger.info(f"ctw {args.command} finished with exit code {code}")
    logger.info("=" * 70)
    return code


if __name__ == "__main__":
    sys.exit(main())
