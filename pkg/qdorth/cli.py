"""
Command line of qdorth.

    qdorth qr A.mat [--precision cdd] [--workers 4]
    qdorth solve A.mat b.mat
    qdorth accuracy --precision cd --g 1,4,8 --trials 100 --seed 7
    qdorth bench-overhead --reps 1000

Results go to stdout (or atomically to ``--out``), diagnostics to stderr. Every failure prints one line
``<reason>: <message>`` on stderr and exits with 2 (usage), 3 (data) or 4 (numerical or execution).
"""
import argparse
import logging
import math
import os
import sys

from . import __version__, expgen, settings, xreal
from .canvas import run_monitored
from .cfield import astype
from .exceptions import (Breakdown, DimensionMismatchError, ExecutionError, ImproperlyConfigured, MatrixFormatError,
                         NegativeSqrtError, PrecisionOverflowError, QDOrthError, UsageError, ZeroDivisorError)
from .matrix import read_matrix, read_vector, write_atomic, write_matrix, write_vector
from .models import EKind, ExperimentConfig
from .parexec import par_lsq_solve, par_mgs_qr
from .precision import EPrecision
from .qrls import lsq_solve, mgs_qr, orthogonality_defect, pythagoras_defect, residual_max_entry

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

FAILURES = (
    ((UsageError, ImproperlyConfigured), 'usage', EXIT_USAGE),
    ((MatrixFormatError, DimensionMismatchError, OSError), 'data', EXIT_DATA),
    ((Breakdown, PrecisionOverflowError, ZeroDivisorError, NegativeSqrtError), 'numerical', EXIT_NUMERICAL),
    ((ExecutionError, QDOrthError), 'execution', EXIT_NUMERICAL),
)
"""
Exception classes, reason prefix and exit code, first match wins.
"""

DEFAULT_REPS = {
    EKind.OVERHEAD: 1000,
    EKind.SCALING: 10,
    EKind.SPEEDUP: 10,
}


class ArgumentParser(argparse.ArgumentParser):
    """Reports bad usage as a `UsageError` instead of printing the usage and exiting."""

    def error(self, message):
        raise UsageError(message)


def _precision(text):
    try:
        return EPrecision.parse(text.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _precisions(text):
    return tuple(_precision(token) for token in text.split(',') if token.strip())


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, got {!r}".format(text)) from None
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer, got {}".format(value))
    return value


def _count(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, got {!r}".format(text)) from None
    if value < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer, got {}".format(value))
    return value


def _numbers(text, kind=float):
    try:
        return tuple(kind(token) for token in text.split(',') if token.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma separated list of numbers, got {!r}".format(text)) \
            from None


def _factor(text):
    label, _, value = text.rpartition('=')
    try:
        factor = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected FACTOR or LABEL=FACTOR, got {!r}".format(text)) from None
    if not (factor > 0 and math.isfinite(factor)):
        raise argparse.ArgumentTypeError("overhead factor must be positive and finite, got {!r}".format(value))
    return label or value, factor


def _flatten(groups):
    return tuple(value for group in groups or () for value in group)


def _emit(text, out):
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _input_file(path, what):
    if not os.path.isfile(path):
        raise UsageError("{} file {} does not exist".format(what, path))
    return path


def _add_execution(parser):
    parser.add_argument('--workers', type=_positive, default=settings.WORKERS,
                        help="worker threads of the parallel executor (default $QDORTH_WORKERS or the CPU count)")
    parser.add_argument('--redundant-normalization', dest='redundant', action='store_true',
                        help="normalize the pivot in every block task")


def _add_experiment(parser, precisions='cd'):
    parser.add_argument('--precision', dest='precisions', type=_precisions, action='append',
                        help="comma separated precision tags, repeatable (default {})".format(precisions))
    parser.set_defaults(default_precisions=_precisions(precisions))
    parser.add_argument('--m', type=_positive, help="rows (default n)")
    parser.add_argument('--n', type=lambda text: _numbers(text, int), action='append',
                        help="dimension, or comma separated grid of dimensions")
    parser.add_argument('--g', type=_numbers, action='append',
                        help="magnitude range, or comma separated grid (default: the accuracy table grid)")
    parser.add_argument('--trials', type=_positive, default=settings.TRIALS)
    parser.add_argument('--reps', type=_count, help="timed repetitions")
    parser.add_argument('--paper-scale', action='store_true',
                        help="multiply trials and repetitions by {}".format(settings.PAPER_SCALE_FACTOR))
    parser.add_argument('--seed', type=int, default=settings.SEED)
    parser.add_argument('--modulus-dist', dest='distribution', choices=('log', 'linear'), default='log')
    parser.add_argument('--check-precision', choices=('working', 'next'), default='working')
    parser.add_argument('--distribute', action='store_true', help="run the trials of a cell as Celery tasks")
    parser.add_argument('--out', help="write the CSV table to this file")
    _add_execution(parser)


def build_parser():
    parser = ArgumentParser(prog='qdorth', description="Least squares by modified Gram-Schmidt in double, double "
                                                       "double and quad double complex arithmetic.")
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(__version__))
    parser.add_argument('-v', '--verbose', action='count', default=0, help="-v for info, -vv for debug")
    commands = parser.add_subparsers(dest='command', metavar='command', parser_class=ArgumentParser)
    commands.required = True

    qr = commands.add_parser('qr', help="factor a matrix file")
    qr.add_argument('matrix')
    qr.add_argument('--precision', type=_precision, help="convert the matrix to this precision first")
    qr.add_argument('--q-out', help="Q file (default MATRIX.Q)")
    qr.add_argument('--r-out', help="R file (default MATRIX.R)")
    qr.add_argument('--check-precision', choices=('working', 'next'), default='working')
    qr.add_argument('--out', help="write the residual report to this file")
    _add_execution(qr)
    qr.set_defaults(handler=cmd_qr)

    solve = commands.add_parser('solve', help="least squares solution of A x = b")
    solve.add_argument('matrix')
    solve.add_argument('rhs')
    solve.add_argument('--precision', type=_precision, help="convert A and b to this precision first")
    solve.add_argument('--x-out', help="solution file (default RHS.x)")
    solve.add_argument('--out', help="write the residual report to this file")
    _add_execution(solve)
    solve.set_defaults(handler=cmd_solve)

    for name, kind, precisions, summary in (
            ('accuracy', EKind.ACCURACY, 'cd', "accuracy sweep over magnitude ranges"),
            ('precision-rule', EKind.PRECISION_RULE, 'cd', "accuracy in the smallest precision with 2g digits"),
            ('bench-overhead', EKind.OVERHEAD, 'cd,cdd,cqd', "cost of each precision against real double"),
            ('bench-scaling', EKind.SCALING, 'cd', "cost growth with the dimension"),
            ('bench-speedup', EKind.SPEEDUP, 'cd', "speedup of least squares solves with more workers")):
        command = commands.add_parser(name, help=summary)
        _add_experiment(command, precisions)
        command.set_defaults(handler=cmd_experiment, kind=kind)

    recalibrate = commands.add_parser('recalibrate', help="dimensions of equal cost in double precision")
    recalibrate.add_argument('--factor', dest='factors', type=_factor, action='append',
                             help="overhead factor, or LABEL=FACTOR, repeatable (default the reference table)")
    recalibrate.add_argument('--base-n', type=_positive, default=32)
    recalibrate.add_argument('--out')
    recalibrate.set_defaults(handler=cmd_recalibrate)
    return parser


# ==================================================
#   COMMANDS
# ==================================================

def _report(columns, values):
    return '{}\n{}\n'.format(','.join(columns), ','.join(values))


def cmd_qr(args):
    """Factor the matrix file, write Q and R next to it and report the residual and the orthogonality defect."""
    A = read_matrix(_input_file(args.matrix, 'matrix'))
    if args.precision is not None:
        if not args.precision.is_complex:
            raise UsageError("factorizations run in cd, cdd or cqd, not {}".format(args.precision))
        A = A.astype(args.precision)
    if args.workers == 1:
        factors = mgs_qr(A)
    else:
        factors = par_mgs_qr(A, args.workers, args.redundant)
    Q, R = factors
    write_matrix(args.q_out or args.matrix + '.Q', Q)
    write_matrix(args.r_out or args.matrix + '.R', R)
    e = residual_max_entry(A, Q, R, args.check_precision)
    _emit(_report(('residual_max_entry', 'orthogonality_defect'), (repr(e), repr(orthogonality_defect(Q)))),
          args.out)


def cmd_solve(args):
    """Solve in the least squares sense, write x and report the residual norm."""
    A = read_matrix(_input_file(args.matrix, 'matrix'))
    b = read_vector(_input_file(args.rhs, 'right-hand side'))
    if b.precision is not A.precision:
        raise DimensionMismatchError("A is {} but b is {}".format(A.precision, b.precision))
    if args.precision is not None:
        if not args.precision.is_complex:
            raise UsageError("least squares run in cd, cdd or cqd, not {}".format(args.precision))
        A, b = A.astype(args.precision), astype(b, args.precision)
    if args.workers == 1:
        solution = lsq_solve(A, b)
    else:
        solution = par_lsq_solve(A, b, args.workers, args.redundant)
    write_vector(args.x_out or args.rhs + '.x', solution.x)
    z = solution.residual_norm
    _emit(_report(('residual_norm', 'pythagoras_defect'),
                  (xreal.to_decimal_string(z) if isinstance(z, xreal.ExtendedReal) else repr(float(z)),
                   repr(pythagoras_defect(A, b, solution)))), args.out)


def experiment_config(args):
    """The `ExperimentConfig` of an experiment subcommand."""
    scale = settings.PAPER_SCALE_FACTOR if args.paper_scale else 1
    reps = args.reps if args.reps is not None else DEFAULT_REPS.get(args.kind, 1)
    dimensions = _flatten(args.n)
    n_grid = ()
    if args.kind in (EKind.SCALING, EKind.SPEEDUP):
        n_grid = dimensions or (expgen.SCALING_N_GRID if args.kind is EKind.SCALING else (32,))
    elif len(dimensions) > 1:
        raise UsageError("{} takes a single --n".format(args.kind.value))
    g_grid = _flatten(args.g)
    return ExperimentConfig(
        kind=args.kind,
        precisions=_flatten(args.precisions) or args.default_precisions,
        m=args.m,
        n=dimensions[0] if dimensions and not n_grid else 32,
        n_grid=tuple(n_grid),
        g_grid=g_grid,
        trials=args.trials * scale,
        repetitions=reps * scale,
        seed=args.seed,
        workers=args.workers,
        distribution=args.distribution,
        check_precision=args.check_precision,
        redundant=args.redundant,
        distribute=args.distribute,
    )


def cmd_experiment(args):
    """Run an experiment as a monitored job and print its table."""
    config = experiment_config(args)
    job, records = run_monitored(config)
    logger.info("{} done in {}".format(job, job.duration))
    if config.kind is EKind.ACCURACY:
        for precision, slope in expgen.accuracy_slope(records).items():
            logger.info("slope of the median log10(e) in {}: {:.3f} per unit g".format(precision, slope))
    _emit(expgen.summarize(records, config.kind), args.out)


def cmd_recalibrate(args):
    """Print the recalibrated dimensions of overhead factors."""
    rows = expgen.recalibration_table(args.factors or expgen.TABLE_FACTORS, args.base_n)
    _emit(expgen.summarize_recalibration(rows), args.out)


# ==================================================
#   ENTRY POINT
# ==================================================

def configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')


def failure(exc):
    """Reason prefix and exit code of an exception."""
    for classes, reason, code in FAILURES:
        if isinstance(exc, classes):
            return reason, code
    raise exc


def main(argv=None):
    """
    Run the command line.

    Returns
    -------
    int
        The exit code
    """
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.verbose)
        args.handler(args)
    except (QDOrthError, OSError) as exc:
        reason, code = failure(exc)
        message = ' '.join(str(exc).split())
        sys.stderr.write('{}: {}\n'.format(reason, message))
        logger.debug("command failed", exc_info=True)
        return code
    return EXIT_OK
