"""Command line interface.

    leafnorm run <file> [--format json|text] [--out <path>]
    leafnorm check <file>

`run` executes a program and prints the report (exit 0 on successful
execution, 2 on parse/IO errors).  `check` exits 0 iff every verdict in the
report is true, 1 otherwise, 2 on parse errors.
"""

import argparse
import sys

from .dsl import parse
from .errors import DslError
from .interp import emit, execute


def _load_program(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        print("leafnorm: cannot read %s: %s" % (path, exc), file=sys.stderr)
        raise SystemExit(2)
    try:
        return parse(source)
    except DslError as exc:
        print("leafnorm: %s: %s" % (path, exc), file=sys.stderr)
        raise SystemExit(2)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="leafnorm")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute a program and print the report")
    run_p.add_argument("file")
    run_p.add_argument("--format", choices=("json", "text"), default="json")
    run_p.add_argument("--out", default=None)
    check_p = sub.add_parser("check", help="exit 0 iff all verdicts are true")
    check_p.add_argument("file")
    args = parser.parse_args(argv)

    program = _load_program(args.file)
    report = execute(program)
    if args.command == "run":
        text = emit(report, args.format)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    # check
    sys.stdout.write(emit(report, "text"))
    return 0 if report.all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
