import argparse
import glob
import json
import logging
import os
import sys

from src.utils.schemas import BisimResponse, ProgramResponse, RunResponse, VerdictResponse
from src import config
from src.exceptions import ShylockError
from src.services.bisimulation import lockstep_bisim
from src.services.checker import ModelChecker
from src.services.formula_parser import parse_formula
from src.services.interpreter import Interpreter
from src.services.program_parser import load_program
from src.syntax import ast_text
from src.utils.rendering import legend, render_rule, render_verdict

logger = logging.getLogger(__name__)


def setup_logging(level=config.LOG_LEVEL):
    # stdout carries results, so log records go to stderr
    logging.basicConfig(
        level=level,
        format=config.LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


class UsageError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text}")
    return value


def positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def emit(lines):
    for line in lines:
        print(line)


# --- Commands ---

def cmd_parse(args) -> int:
    prog = load_program(args.program)
    if args.format == "json":
        print(ProgramResponse.from_program(prog).model_dump_json(indent=2))
        return config.EXIT_OK
    emit([
        f"globals {', '.join(sorted(prog.globals))}",
        f"locals {', '.join(sorted(prog.locals))}",
        f"fields {', '.join(sorted(prog.fields))}",
    ])
    for name, body in sorted(prog.procs.items()):
        print(f"proc {name} = {ast_text(body)}")
    return config.EXIT_OK


def cmd_run(args) -> int:
    prog = load_program(args.program)
    result = Interpreter(prog, args.semantics, args.seed).run(args.steps, args.trace)
    response = RunResponse.from_result(result, args.semantics)
    if args.format == "json":
        print(response.model_dump_json(indent=2))
        return config.EXIT_OK
    emit(response.trace)
    print(f"{response.outcome} at {response.stuck_at}" if response.stuck_at else response.outcome)
    emit(response.heap)
    return config.EXIT_OK


def _formula_text(args) -> str:
    if args.formula_file:
        with open(args.formula_file, encoding="utf-8") as handle:
            return handle.read().strip()
    return args.formula


def cmd_check(args) -> int:
    prog = load_program(args.program)
    text = _formula_text(args)
    phi = parse_formula(text, prog)
    verdict = ModelChecker(prog, args.bound).check(phi)
    response = VerdictResponse.from_verdict(verdict, args.bound, text)
    if args.format == "json":
        print(response.model_dump_json(indent=2))
    elif args.format == "kv":
        emit(response.kv_lines())
    else:
        print(render_verdict(verdict))
    return response.exit_code


def cmd_bisim(args) -> int:
    prog = load_program(args.program)
    report = lockstep_bisim(prog, args.steps, args.trials, args.seed, args.workers)
    response = BisimResponse.from_report(report)
    if args.format == "json":
        print(response.model_dump_json(indent=2))
    else:
        print(response.summary)
        emit(response.failure or [])
    return config.EXIT_OK if report.passed else config.EXIT_BISIM_FAILED


def cmd_pds_dump(args) -> int:
    prog = load_program(args.program)
    checker = ModelChecker(prog, args.bound)
    automaton = checker.explore()
    items = []
    for head in automaton.heads:
        control, symbol = head
        for target, word in automaton.rules[head]:
            print(render_rule(control, symbol, target, word))
            items.extend([control, symbol, target, *word])
    emit(legend(items))
    return config.EXIT_OK


def cmd_corpus(args) -> int:
    paths = sorted(glob.glob(os.path.join(args.dir, f"*{config.PROGRAM_SUFFIX}")))
    if not paths:
        logger.error(f"No programs found in {args.dir}")
        return config.EXIT_USAGE

    results = {}
    for path in paths:
        prog = load_program(path)
        report = lockstep_bisim(prog, args.steps, args.trials, args.seed, args.workers)
        results[os.path.basename(path)] = BisimResponse.from_report(report)

    if args.format == "json":
        print(json.dumps({name: r.model_dump() for name, r in results.items()}, indent=2))
    else:
        for name, response in results.items():
            print(f"{name}: {response.summary}")
            emit(f"  {line}" for line in response.failure or [])
    failed = [name for name, r in results.items() if not r.passed]
    return config.EXIT_BISIM_FAILED if failed else config.EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(prog="shylock", description="Model checker for heap-manipulating recursive programs.")
    parser.add_argument("--verbose", action="store_true", help="log progress (INFO)")
    parser.add_argument("--debug", action="store_true", help="log every step (DEBUG)")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    def program_command(name, handler, help_text, formats=("text", "json")):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("program", help=f"path to a {config.PROGRAM_SUFFIX} program")
        sub.add_argument("--format", choices=formats, default="text")
        sub.set_defaults(handler=handler)
        return sub

    program_command("parse", cmd_parse, "print the validated syntax tree")

    run = program_command("run", cmd_run, "simulate the program")
    run.add_argument("--semantics", choices=("concrete", "abstract"), default="concrete")
    run.add_argument("--steps", type=positive, default=config.DEFAULT_STEPS)
    run.add_argument("--seed", type=natural, default=config.DEFAULT_SEED)
    run.add_argument("--trace", action="store_true")

    check = program_command("check", cmd_check, "check a temporal heap property", ("text", "kv", "json"))
    source = check.add_mutually_exclusive_group(required=True)
    source.add_argument("--formula")
    source.add_argument("--formula-file")
    check.add_argument("--bound", type=natural, default=config.DEFAULT_BOUND)

    def simulation_options(sub):
        sub.add_argument("--steps", type=positive, default=config.DEFAULT_STEPS)
        sub.add_argument("--trials", type=positive, default=config.DEFAULT_TRIALS)
        sub.add_argument("--seed", type=natural, default=config.DEFAULT_SEED)
        sub.add_argument("--workers", type=positive, default=config.BISIM_WORKERS)

    bisim = program_command("bisim", cmd_bisim, "run both semantics in lockstep")
    simulation_options(bisim)

    dump = program_command("pds-dump", cmd_pds_dump, "print the discovered pushdown rules", ("text",))
    dump.add_argument("--bound", type=natural, default=config.DEFAULT_BOUND)

    corpus = commands.add_parser("corpus", help="bisimulation test over every corpus program")
    corpus.add_argument("--dir", default=config.CORPUS_DIR)
    corpus.add_argument("--format", choices=("text", "json"), default="text")
    simulation_options(corpus)
    corpus.set_defaults(handler=cmd_corpus)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return config.EXIT_USAGE

    level = logging.DEBUG if args.debug else logging.INFO if args.verbose else config.LOG_LEVEL
    setup_logging(level)

    try:
        return args.handler(args)
    except OSError as e:
        logger.error(f"Cannot read input: {e}")
        return config.EXIT_USAGE
    except ShylockError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return config.EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
