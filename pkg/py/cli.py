#!/usr/bin/env python
#
# Licensed under the BSD license.  See full license in LICENSE file.
#

"""Command line front end for EntangleOps.

Usage examples:

    python py/cli.py measure --state bell.json --n 2 --method chain --basis weyl
    python py/cli.py criterion --state werner.json --type local --basis pauli --b-side conjugate
    python py/cli.py basis-check --type gellmann --dim 4
    python py/cli.py schmidt --state bell.json
    python py/cli.py scan --family werner --grid 0:1:0.1 --criteria local,ppt
    python py/cli.py sample --kind haar --dims 3,3 --seed 7 --out psi.json

Reports go to stdout (JSON by default, --format text for a summary);
log messages and the one-line error diagnostic go to stderr.

Exit codes: 0 success, 2 argument error, 3 invalid state or unsuitable
input, 4 a numerical identity check failed.
"""

import argparse
import logging
import sys
from typing import List, Optional

from bases import basis_by_name, gellmann_completeness_residual, gram_residual, \
    verify_completeness, verify_hermitian_sum_rule, weyl_commutation_residual
from configuration_manager import LOG_LEVELS, get_configuration, tolerances
from criteria import FAMILIES, criterion_kind, criterion_scan, evaluate_criterion, parse_grid
from measures import me2_concurrence, me2_gellmann_closed_form, me2_identical, \
    me2_weyl_closed_form, me_braket, me_chain, me_direct
from numerics import ArgumentError, DomainError, IdentityCheckError, ShapeError, \
    StateValidationError
from schemas import BasisCheckResult, CriterionKind, CriterionReport, MeasureResult, Report, \
    SampleResult, SchmidtResult, load_state_file, save_state_file
from states import RNG_ALGORITHM, DensityMatrix, as_pure, bell_state, ghz_state, \
    haar_random_pure, maximally_entangled, random_mixed, random_separable, schmidt_spectrum, \
    singlet_state, w_state, werner_state

log = logging.getLogger(__name__)

TOOL_VERSION = "1.0.0"

EXIT_OK = 0
EXIT_ARGUMENT = 2
EXIT_STATE = 3
EXIT_NUMERIC = 4

MEASURE_METHODS = ('direct', 'chain', 'braket', 'gellmann', 'weyl', 'identical', 'concurrence')
SAMPLE_KINDS = ('haar', 'mixed', 'separable', 'werner', 'bell', 'singlet', 'ghz', 'w', 'maxent')
RANDOM_KINDS = ('haar', 'mixed', 'separable')


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of printing usage and exiting."""

    def error(self, message):
        raise ArgumentError(message)


def _int_list(text: str, what: str) -> List[int]:
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise ArgumentError("%s must be a comma separated list of integers, got %r" % (what, text))


def _report(argv: List[str], **fields) -> Report:
    return Report(version=TOOL_VERSION, command=list(argv), **fields)


# ----------------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------------

def cmd_measure(args, argv) -> Report:
    state, digest = load_state_file(args.state)
    psi = as_pure(state)
    keep = _int_list(args.keep, "--keep") if args.keep else [0]
    method = args.method
    names = args.basis or []

    if method not in ('chain', 'identical') and names:
        log.warning("--basis is ignored by --method %s", method)
    if method in ('gellmann', 'weyl', 'identical', 'concurrence') and args.n != 2:
        raise ArgumentError("--method %s evaluates n = 2 only, got --n %d" % (method, args.n))

    if method == 'direct':
        result = me_direct(psi, args.n, keep)
    elif method == 'braket':
        result = me_braket(psi, args.n, keep)
    elif method == 'chain':
        d = psi.structure.subsystem(keep).total
        names = names or [get_configuration().criteria.default_basis]
        if len(names) == 1:
            names = names * (args.n - 1)
        if len(names) != args.n - 1:
            raise ArgumentError("--method chain with --n %d needs 1 or %d --basis flags, got %d"
                                % (args.n, args.n - 1, len(names)))
        result = me_chain(psi, args.n, [basis_by_name(name, d) for name in names], keep,
                          naive=args.naive)
    elif method == 'gellmann':
        result = me2_gellmann_closed_form(psi, keep)
    elif method == 'weyl':
        result = me2_weyl_closed_form(psi, keep)
    elif method == 'identical':
        if len(names) > 1:
            raise ArgumentError("--method identical takes at most one --basis")
        basis = basis_by_name(names[0], psi.dims[0]) if names else None
        result = me2_identical(psi, basis)
    else:
        result = me2_concurrence(psi)

    return _report(argv, input_digest=digest, results=[result], warnings=list(result.warnings))


def cmd_criterion(args, argv) -> Report:
    state, digest = load_state_file(args.state)
    kind = criterion_kind(args.type)
    if args.b_side and kind != CriterionKind.LOCAL_UNCERTAINTY:
        log.warning("--b-side is ignored by --type %s", args.type)
    keep = _int_list(args.keep, "--keep") if args.keep else None
    if keep is not None and kind != CriterionKind.UNCERTAINTY_IDENTITY:
        raise ArgumentError("--keep applies to --type identity only")

    basis = None
    if args.basis and kind != CriterionKind.PPT:
        if kind == CriterionKind.UNCERTAINTY_IDENTITY:
            d = state.structure.subsystem(keep).total if keep else state.structure.total
        else:
            d = state.dims[0]
        basis = basis_by_name(args.basis, d)
    elif args.basis:
        log.warning("--basis is ignored by --type ppt")

    report = evaluate_criterion(kind, state, basis,
                                args.b_side if kind == CriterionKind.LOCAL_UNCERTAINTY else None,
                                keep)
    return _report(argv, input_digest=digest, results=[report])


def cmd_basis_check(args, argv) -> Report:
    config = get_configuration()
    basis = basis_by_name(args.type, args.dim)
    probes = args.probes if args.probes is not None else config.sampling.probes
    seed = args.seed if args.seed is not None else config.sampling.default_seed

    result = BasisCheckResult(basis=basis.name, dim=basis.dim, probes=probes, seed=seed,
                              gram_residual=gram_residual(basis),
                              completeness_residual=verify_completeness(basis, probes, seed))
    if basis.is_hermitian:
        result.sum_rule_residual = verify_hermitian_sum_rule(basis)
    else:
        result.notices.append("sum rule skipped: %s basis is not Hermitian" % basis.name)
    if basis.name == 'gellmann':
        result.structure_constant_residual = gellmann_completeness_residual(args.dim)
    if basis.name == 'weyl':
        result.commutation_residual = weyl_commutation_residual(args.dim)

    tol = tolerances().eq_tol
    residuals = {
        'gram': result.gram_residual,
        'completeness': result.completeness_residual,
        'sum rule': result.sum_rule_residual,
        'structure constant': result.structure_constant_residual,
        'commutation': result.commutation_residual,
    }
    for name, residual in residuals.items():
        if residual is not None and residual > tol:
            raise IdentityCheckError("%s residual %.3e of %s basis (d=%d) exceeds %.1e"
                                     % (name, residual, basis.name, basis.dim, tol))

    return _report(argv, rng_algorithm=RNG_ALGORITHM, seeds=[seed], results=[result],
                   warnings=list(result.notices))


def cmd_schmidt(args, argv) -> Report:
    state, digest = load_state_file(args.state)
    psi = as_pure(state)
    spectrum = schmidt_spectrum(psi)
    measures = [me_direct(psi, n) for n in get_configuration().report.schmidt_orders]
    result = SchmidtResult(coefficients=list(spectrum.coefficients), rank=spectrum.rank,
                           entropy_bits=spectrum.entropy(), measures=measures)
    return _report(argv, input_digest=digest, results=[result])


def cmd_scan(args, argv) -> Report:
    grid = parse_grid(args.grid)
    if not grid:
        raise ArgumentError("scan grid %r is empty" % args.grid)
    criteria = [c for c in args.criteria.split(',') if c.strip()]
    basis = None
    if args.basis:
        basis = basis_by_name(args.basis, FAMILIES[args.family](grid[0]).dims[0])
    rows = criterion_scan(args.family, criteria, grid, basis, args.b_side)
    return _report(argv, results=rows)


def cmd_sample(args, argv) -> Report:
    dims = _int_list(args.dims, "--dims") if args.dims else [2, 2]
    seed = args.seed if args.seed is not None else get_configuration().sampling.default_seed
    kind = args.kind
    parameter = None

    if kind == 'haar':
        state = haar_random_pure(dims, seed)
    elif kind == 'mixed':
        total = 1
        for d in dims:
            total *= d
        reduced = random_mixed(total, args.ancilla or total, seed)
        state = DensityMatrix(reduced.matrix, dims, check_positive=False)
    elif kind == 'separable':
        state = random_separable(dims, args.terms or max(dims) ** 2, seed)
    elif kind == 'werner':
        if args.p is None:
            raise ArgumentError("--kind werner needs --p")
        parameter = args.p
        state = werner_state(args.p)
    elif kind == 'bell':
        state = bell_state()
    elif kind == 'singlet':
        state = singlet_state()
    elif kind == 'ghz':
        state = ghz_state(len(dims), dims[0])
    elif kind == 'w':
        state = w_state(len(dims))
    else:
        state = maximally_entangled(dims[0])

    digest = save_state_file(state, args.out)
    result = SampleResult(kind=kind, dims=list(state.dims), path=args.out, digest=digest,
                          seed=seed if kind in RANDOM_KINDS else None, parameter=parameter)
    if kind in RANDOM_KINDS:
        return _report(argv, rng_algorithm=RNG_ALGORITHM, seeds=[seed], results=[result])
    return _report(argv, results=[result])


COMMANDS = {
    'measure': cmd_measure,
    'criterion': cmd_criterion,
    'basis-check': cmd_basis_check,
    'schmidt': cmd_schmidt,
    'scan': cmd_scan,
    'sample': cmd_sample,
}


# ----------------------------------------------------------------------------
# Output
# ----------------------------------------------------------------------------

def _text_line(result) -> List[str]:
    if isinstance(result, MeasureResult):
        line = "M_e(%d) = %.12g  [%s]" % (result.n, result.value, result.method)
        if result.basis_labels:
            line += " bases: %s" % ", ".join(result.basis_labels)
        if result.i_concurrence is not None:
            line += "  C = %.12g" % result.i_concurrence
        return [line]
    if isinstance(result, CriterionReport):
        line = "%s: value %.12g threshold %.12g -> %s" % (
            result.criterion, result.value, result.threshold, result.verdict)
        if result.parameter is not None:
            line = "p = %-6g " % result.parameter + line
        if result.b_side_convention:
            line += " (b-side %s)" % result.b_side_convention
        return [line]
    if isinstance(result, BasisCheckResult):
        lines = ["%s basis, d = %d, %d probes (seed %d)"
                 % (result.basis, result.dim, result.probes, result.seed),
                 "  gram residual          %.3e" % result.gram_residual,
                 "  completeness residual  %.3e" % result.completeness_residual]
        if result.sum_rule_residual is not None:
            lines.append("  sum rule residual      %.3e" % result.sum_rule_residual)
        if result.structure_constant_residual is not None:
            lines.append("  structure residual     %.3e" % result.structure_constant_residual)
        if result.commutation_residual is not None:
            lines.append("  commutation residual   %.3e" % result.commutation_residual)
        return lines
    if isinstance(result, SchmidtResult):
        lines = ["Schmidt spectrum: %s" % ", ".join("%.12g" % c for c in result.coefficients),
                 "rank %d, entropy %.12g bits" % (result.rank, result.entropy_bits)]
        for measure in result.measures:
            lines.extend(_text_line(measure))
        return lines
    return ["wrote %s %s to %s (%s)" % (result.kind, result.dims, result.path, result.digest)]


def render_text(report: Report) -> str:
    lines = ["entangleops %s: %s" % (report.version, " ".join(report.command))]
    if report.input_digest:
        lines.append("input %s" % report.input_digest)
    for result in report.results:
        lines.extend(_text_line(result))
    for warning in report.warnings:
        lines.append("warning: %s" % warning)
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='entangleops',
                     description="EntangleOps - entanglement measures from expectation values")
    parser.add_argument('--format', choices=['json', 'text'], default=None,
                        help="report format (default: [report] format)")
    parser.add_argument('--log-level', default=None, type=str.upper, choices=LOG_LEVELS,
                        help="Set logging level (DEBUG, INFO, WARNING, ERROR)")
    parser.add_argument('--config', default=None, help='Config File Override')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    measure = commands.add_parser('measure', help="M_e(n) of a pure state")
    measure.add_argument('--state', required=True, help="state file (JSON)")
    measure.add_argument('--n', type=int, default=2, help="measure order, n >= 2")
    measure.add_argument('--method', choices=MEASURE_METHODS, default='direct')
    measure.add_argument('--basis', action='append', default=None,
                         help="pauli|gellmann|weyl; repeat once per chain slot or give once")
    measure.add_argument('--keep', default=None, help="factors of subsystem A, e.g. 0 or 0,1")
    measure.add_argument('--naive', action='store_true',
                         help="evaluate the chain term by term (n <= 3, d <= 3)")

    criterion = commands.add_parser('criterion', help="run one entanglement criterion")
    criterion.add_argument('--state', required=True, help="state file (JSON)")
    criterion.add_argument('--type', required=True, choices=['identity', 'local', 'collective', 'ppt'])
    criterion.add_argument('--basis', default=None, help="pauli|gellmann|weyl")
    criterion.add_argument('--b-side', default=None, choices=['same', 'conjugate'])
    criterion.add_argument('--keep', default=None, help="factors to reduce to (identity only)")

    check = commands.add_parser('basis-check', help="verify the identities of an operator basis")
    check.add_argument('--type', required=True, choices=['pauli', 'gellmann', 'weyl'])
    check.add_argument('--dim', required=True, type=int)
    check.add_argument('--probes', type=int, default=None)
    check.add_argument('--seed', type=int, default=None)

    schmidt = commands.add_parser('schmidt', help="Schmidt spectrum and M_e(n) of a pure state")
    schmidt.add_argument('--state', required=True, help="state file (JSON)")

    scan = commands.add_parser('scan', help="criteria over a parametrized state family")
    scan.add_argument('--family', default='werner', choices=sorted(FAMILIES))
    scan.add_argument('--grid', required=True, help="start:stop:step or a comma list")
    scan.add_argument('--criteria', default='local,ppt', help="comma list of criteria")
    scan.add_argument('--basis', default=None, help="pauli|gellmann|weyl")
    scan.add_argument('--b-side', default=None, choices=['same', 'conjugate'])

    sample = commands.add_parser('sample', help="write a named or random state file")
    sample.add_argument('--kind', required=True, choices=SAMPLE_KINDS)
    sample.add_argument('--dims', default=None, help="local dimensions, e.g. 2,2")
    sample.add_argument('--seed', type=int, default=None)
    sample.add_argument('--p', type=float, default=None, help="Werner parameter")
    sample.add_argument('--ancilla', type=int, default=None, help="purification dimension (mixed)")
    sample.add_argument('--terms', type=int, default=None, help="mixture terms (separable)")
    sample.add_argument('--out', required=True, help="output state file")
    return parser


def _fail(kind: str, error: Exception, code: int) -> int:
    sys.stderr.write("entangleops: error[%s]: %s\n" % (kind, str(error).replace("\n", " ")))
    return code


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        config = get_configuration(args.config)

        # Configure logging
        logging.basicConfig(
            level=getattr(logging, args.log_level or config.logging.log_level),
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            stream=sys.stderr,
            force=True
        )
        log.debug("command %s", argv)

        report = COMMANDS[args.command](args, argv)
        output_format = args.format or config.report.format
        if output_format == 'text':
            output = render_text(report)
        else:
            output = report.to_json(indent=config.report.indent)
    except StateValidationError as error:
        return _fail("state", error, EXIT_STATE)
    except DomainError as error:
        return _fail("domain", error, EXIT_STATE)
    except (ArgumentError, ShapeError) as error:
        return _fail("argument", error, EXIT_ARGUMENT)
    except IdentityCheckError as error:
        return _fail("numeric", error, EXIT_NUMERIC)
    except OSError as error:
        return _fail("argument", error, EXIT_ARGUMENT)
    except ValueError as error:
        # bad values in a configuration file
        return _fail("config", error, EXIT_ARGUMENT)

    sys.stdout.write(output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
