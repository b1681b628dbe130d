""" Command-line driver: validate surfaces, build reports, run the verification battery """
import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat

from dotenv import load_dotenv
from jsonseq.encode import JSONSeqEncoder

from floerveer import __version__, errors, ingest, utils
from floerveer.census import decode_taut_signature, vbs_from_triangulation
from floerveer.domains import DEFAULT_DOMAIN_BUDGET
from floerveer.groupring import DEFAULT_MINOR_BUDGET
from floerveer.report import (DEFAULT_TRUNC_DEGREE, MODES, build_report, error_report, report_passed,
                              validate_report)
from floerveer.states import DEFAULT_STATE_BUDGET
from floerveer.vbs import validate

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

INPUT_ERRORS = (
    errors.SurfaceSyntaxError,
    errors.DuplicateId,
    errors.MissingSection,
    errors.MalformedSignature,
    errors.UnsupportedVersion,
    errors.NonVeeringInput,
    errors.InvalidSurface,
    errors.IoError,
    errors.ConfigError,
)
CHECKED_MODES = ("verify", "zeta", "batch")


@dataclass
class RunConfig:
    """ Validated run configuration.

    Raises:
        errors.ConfigError: Unknown mode, negative degree or non-positive budget. """

    inputs: list
    mode: str = "report"
    out: str = None
    trunc_degree: int = DEFAULT_TRUNC_DEGREE
    budget_domains: int = DEFAULT_DOMAIN_BUDGET
    budget_states: int = DEFAULT_STATE_BUDGET
    budget_minors: int = DEFAULT_MINOR_BUDGET
    strict: bool = False
    fibered_class: tuple = None
    census: bool = False
    timings: bool = False
    workers: int = None
    sources: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise errors.ConfigError(f"Unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if not self.inputs:
            raise errors.ConfigError("At least one input is required")
        if self.trunc_degree < 0:
            raise errors.ConfigError(f"Truncation degree must be >= 0, got {self.trunc_degree}")
        for name in ("budget_domains", "budget_states", "budget_minors"):
            if getattr(self, name) <= 0:
                raise errors.ConfigError(f"{name.replace('_', '-')} must be positive, got {getattr(self, name)}")
        if self.workers is not None and self.workers <= 0:
            raise errors.ConfigError(f"workers must be positive, got {self.workers}")


def expand_inputs(config: RunConfig):
    """ Sources to process: surface files (directories expand to their *.json files)
    or, with census decoding, signatures (files expand to one signature per line).

    Raises:
        errors.IoError: A path does not exist. """

    sources = []
    for item in config.inputs:
        if config.census:
            if os.path.isfile(item):
                lines = utils.read_text(item).splitlines()
                sources.extend(line.strip() for line in lines if line.strip() and not line.startswith("#"))
            else:
                sources.append(item)
        elif os.path.isdir(item):
            sources.extend(os.path.join(item, name) for name in sorted(os.listdir(item)) if name.endswith(".json"))
        else:
            utils.validate_path(item)
            sources.append(item)
    return sources


def load_surface(source: str, config: RunConfig):
    """ Validated surface of a file path or, with census decoding, of a signature. """

    if config.census:
        raw = vbs_from_triangulation(decode_taut_signature(source), name=source)
    else:
        raw = ingest.load_vbs(source, strict=config.strict)
    return validate(raw)


def process(source: str, config: RunConfig):
    """ Report and exit code of one source. """

    mode = "verify" if config.mode == "batch" else config.mode
    try:
        vbs = load_surface(source, config)
        report = build_report(vbs, source, mode, config.trunc_degree, config.budget_domains,
                              config.budget_states, config.budget_minors, config.fibered_class, config.timings)
        validate_report(report)
    except INPUT_ERRORS as exc:
        log.error("%s: %s", source, exc)
        code = EXIT_FAILED if config.mode == "batch" else EXIT_INPUT
        return error_report(source, config.mode, exc), code
    except errors.FloerveerError as exc:
        log.error("%s: %s", source, exc)
        return error_report(source, config.mode, exc), EXIT_FAILED

    if config.mode == "batch":
        report["mode"] = "batch"
    if config.mode in CHECKED_MODES and not report_passed(report):
        failed = [name for name, ok in report["verdicts"].items() if ok is False]
        log.warning("%s: failed verdicts %s", source, ", ".join(failed))
        return report, EXIT_FAILED
    return report, EXIT_OK


def write_output(reports: list, config: RunConfig):
    """ One pretty JSON document for a single report, an RFC 7464 sequence otherwise. """

    if len(reports) == 1 and config.mode != "batch":
        text = json.dumps(reports[0], indent=2) + "\n"
    else:
        text = "".join(JSONSeqEncoder(with_rs=True).encode(reports))

    if config.out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(config.out))
    if not os.path.isdir(directory):
        raise errors.IoError(f"Output directory does not exist: {directory}")
    with open(config.out, "w", encoding="utf-8") as file:
        file.write(text)


def run(config: RunConfig):
    """ Process every source, write the reports and return the exit code.

    Exit codes: 0 when every requested verdict passes, 1 on a verification
    failure (or any per-file failure in batch mode), 2 on an input error. """

    config.sources = expand_inputs(config)
    if config.mode == "batch" and config.workers != 1 and len(config.sources) > 1:
        # map keeps the input order
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(process, config.sources, repeat(config)))
    else:
        results = [process(source, config) for source in config.sources]
    write_output([report for report, _ in results], config)
    codes = [code for _, code in results]
    if config.mode == "batch":
        passed = sum(1 for code in codes if code == EXIT_OK)
        log.info("Batch: %d of %d surfaces passed", passed, len(codes))
    return max(codes, default=EXIT_OK)


def parse_args(argv=None):
    parser = argparse.ArgumentParser(
        prog="floerveer",
        description="Heegaard diagrams, states and polynomial invariants of veering branched surfaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--mode", choices=MODES, default="report", help="What to run (default: report)")
    parser.add_argument("--input", nargs="+", required=True,
                        help="Surface files or directories; signatures or signature files with --census")
    parser.add_argument("--out", default=None, help="Output file (default: stdout)")
    parser.add_argument("--trunc-degree", type=int, default=DEFAULT_TRUNC_DEGREE,
                        help=f"Degree cap of the zeta expansion (default: {DEFAULT_TRUNC_DEGREE})")
    parser.add_argument("--budget-domains", type=int, default=DEFAULT_DOMAIN_BUDGET,
                        help="Cap on enumerated domains and lattice points")
    parser.add_argument("--budget-states", type=int, default=DEFAULT_STATE_BUDGET,
                        help="Cap on enumerated Heegaard states")
    parser.add_argument("--budget-minors", type=int, default=DEFAULT_MINOR_BUDGET,
                        help="Cap on maximal minors for the taut polynomial")
    parser.add_argument("--strict", action="store_true", help="Reject unknown keys in surface files")
    parser.add_argument("--fibered-class", default=None,
                        help="Comma-separated functional for the fibered profile, e.g. 1,0")
    parser.add_argument("--census", action="store_true", help="Read inputs as taut signatures")
    parser.add_argument("--timings", action="store_true", help="Record section timings in reports")
    parser.add_argument("--workers", type=int, default=None,
                        help="Worker processes in batch mode (default: one per CPU)")
    return parser.parse_args(argv)


def config_from_args(args):
    fibered = tuple(utils.parse_int_list(args.fibered_class)) if args.fibered_class else None
    return RunConfig(
        inputs=list(args.input),
        mode=args.mode,
        out=args.out,
        trunc_degree=args.trunc_degree,
        budget_domains=args.budget_domains,
        budget_states=args.budget_states,
        budget_minors=args.budget_minors,
        strict=args.strict,
        fibered_class=fibered,
        census=args.census,
        timings=args.timings,
        workers=args.workers,
    )


def main(argv=None):
    load_dotenv()
    args = parse_args(argv)
    try:
        utils.setup_logging()
        config = config_from_args(args)
        return run(config)
    except (errors.ConfigError, errors.IoError) as exc:
        sys.stderr.write(f"floerveer: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
