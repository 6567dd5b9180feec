"""
CLI - Command-line frontend for quadcond
"""
import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, TextIO

from check_ledger import CheckLedger
from conductor import (
    ConeFamily,
    DEFAULT_CORPUS,
    Dim0Family,
    conductor_check,
    delta_dim0,
    run_corpus,
    tensor_decomposition_check,
    trace_form_dim0,
    trace_form_dim0_closed,
)
from config import STRATEGIES, configure_logging, get_settings
from errors import QuadCondError, UserInputError, exit_code_for
from expr_parser import parse_poly, parse_scalar, parse_scalar_list, parse_weights
from gw import GWClass, diagonalize_with_certificate, gw_equal, invariants, specialize
from hyper import hypersurface_report, make_hypersurface
from jacobian import (
    build_jacobian,
    check_cover_identity,
    gram_matrix,
    jacobian_form,
    jacobian_form_full,
    jacobian_form_primitive,
    pairing_basis,
)
from poly import WeightedRing
from scalars import FieldId, format_scalar, square_class, t_order_and_unit

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors become exit code 1"""

    def error(self, message):
        raise UserInputError(message)


def _add_ring_arguments(parser: argparse.ArgumentParser, poly: bool = True) -> None:
    parser.add_argument('--field', default='Q', help='Q, Fp:<p>, Qt or Fpt:<p>')
    parser.add_argument('--vars', help='comma-separated variable names, e.g. x0,x1,x2')
    parser.add_argument('--weights', help='comma-separated positive weights (default all 1)')
    if poly:
        parser.add_argument('--poly', required=True, help='polynomial expression')
    parser.add_argument('--strategy', choices=STRATEGIES, help='Scheja-Storch splitting strategy')
    parser.add_argument('--json', action='store_true', help='machine-readable output')


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='quadcond', description='Quadratic Euler characteristics and conductor formulas')
    parser.add_argument('--log-level', help='override QUADCOND_LOG_LEVEL')
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)
    sub.required = True

    p = sub.add_parser('jacobian', help='Hilbert function, socle degree and e_F of J(F)')
    _add_ring_arguments(p)

    p = sub.add_parser('gram', help='Gram matrix of B_Jac on chosen degrees')
    _add_ring_arguments(p)
    p.add_argument('--degree-set', required=True, help='comma-separated degrees')

    p = sub.add_parser('gwform', help='GW class of B_Jac (full, primitive or chosen degrees)')
    _add_ring_arguments(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument('--primitive', type=int, metavar='N', help='primitive degrees of an N-dimensional hypersurface')
    group.add_argument('--degree-set', help='comma-separated degrees')

    for name, text in (('chi', 'chi of a smooth hypersurface'), ('chi-c-cone', 'chi_c of the projective cone')):
        p = sub.add_parser(name, help=text)
        _add_ring_arguments(p)
        p.add_argument('--dim', type=int, help='hypersurface dimension (default: variables - 2)')

    p = sub.add_parser('conductor', help='conductor formula check for F - t*X^e')
    _add_ring_arguments(p, poly=False)
    p.add_argument('--poly', help='polynomial expression of the base F')
    p.add_argument('--corpus', nargs='?', const='', metavar='PATH', help='run a corpus file (bundled by default)')
    p.add_argument('--workers', type=int, help='process workers for corpus runs')
    p.add_argument('--tensor', action='store_true', help='also run the tensor decomposition cross-check')
    p.add_argument('--record', action='store_true', help='record the result in the check ledger')

    p = sub.add_parser('trace-dim0', help='trace form and conductor of s^e = a*t')
    p.add_argument('--e', type=int, required=True)
    p.add_argument('--a', default='1', help='nonzero rational')
    p.add_argument('--json', action='store_true')

    gw_parser = sub.add_parser('gw', help='GW utilities')
    gw_sub = gw_parser.add_subparsers(dest='gw_command', parser_class=_Parser)
    gw_sub.required = True
    p = gw_sub.add_parser('diag', help='diagonalize a symmetric matrix')
    p.add_argument('--field', default='Q')
    p.add_argument('--matrix', required=True, help="rows separated by ';', entries by ','")
    p.add_argument('--json', action='store_true')
    p = gw_sub.add_parser('eq', help='decide equality of two classes')
    p.add_argument('--field', default='Q')
    p.add_argument('--lhs', required=True, help='diagonal entries')
    p.add_argument('--rhs', required=True, help='diagonal entries')
    p.add_argument('--lhs-hyperbolic', type=int, default=0)
    p.add_argument('--rhs-hyperbolic', type=int, default=0)
    p.add_argument('--json', action='store_true')
    p = gw_sub.add_parser('sp', help='specialize entries at t = 0')
    p.add_argument('--field', default='Qt')
    p.add_argument('--entries', required=True)
    p.add_argument('--json', action='store_true')
    p = gw_sub.add_parser('inv', help='invariants of a diagonal class')
    p.add_argument('--field', default='Q')
    p.add_argument('--entries', required=True)
    p.add_argument('--hyperbolic', type=int, default=0)
    p.add_argument('--json', action='store_true')
    return parser


# --- helpers -----------------------------------------------------------------

def _ring(args) -> WeightedRing:
    if not args.vars:
        raise UserInputError("--vars is required")
    field = FieldId.parse(args.field)
    variables = tuple(v.strip() for v in args.vars.split(',') if v.strip())
    weights = parse_weights(args.weights) if args.weights else [1] * len(variables)
    return WeightedRing(field, variables, tuple(weights))


def _poly(args):
    if not args.poly:
        raise UserInputError("--poly is required")
    return parse_poly(args.poly, _ring(args))


def _degrees(text: str) -> List[int]:
    try:
        return [int(d) for d in text.split(',') if d.strip()]
    except ValueError:
        raise UserInputError(f"--degree-set must be comma-separated integers: {text!r}")


def _strategy(args) -> Optional[str]:
    return getattr(args, 'strategy', None)


# --- commands ------------------------------------------------------------------

def cmd_jacobian(args) -> Dict[str, Any]:
    J = build_jacobian(_poly(args))
    data = J.to_dict()
    if data['smooth']:
        data['socle_generator'] = J.socle_generator(_strategy(args)).to_dict()
        if any(a != 1 for a in J.ring.weights):
            data['cover_identity'] = check_cover_identity(J)
    return data


def cmd_gram(args) -> Dict[str, Any]:
    J = build_jacobian(_poly(args))
    degrees = _degrees(args.degree_set)
    matrix = gram_matrix(J, degrees, _strategy(args))
    return {
        'degrees': degrees,
        'basis': [J.ring.format_monomial(m) for _, m in pairing_basis(J, degrees)],
        'matrix': [[format_scalar(c) for c in row] for row in matrix],
    }


def cmd_gwform(args) -> Dict[str, Any]:
    J = build_jacobian(_poly(args))
    if args.primitive is not None:
        q = jacobian_form_primitive(J, args.primitive, _strategy(args))
    elif args.degree_set:
        q = jacobian_form(J, _degrees(args.degree_set), _strategy(args))
    else:
        q = jacobian_form_full(J, _strategy(args))
    return q.to_dict()


def cmd_chi(args, cone: bool = False) -> Dict[str, Any]:
    H = make_hypersurface(_poly(args), args.dim)
    return hypersurface_report(H, cone=cone)


def cmd_conductor(args) -> Any:
    if args.corpus is not None:
        reports = run_corpus(args.corpus or DEFAULT_CORPUS, args.workers)
        if args.record:
            _record(reports)
        return reports
    fam = ConeFamily(_poly(args))
    report = conductor_check(fam).to_dict()
    if args.tensor:
        report['tensor_decomposition'] = tensor_decomposition_check(fam)
    if args.record:
        _record([report])
    return report


def _record(reports: List[Dict[str, Any]]) -> None:
    ledger = CheckLedger(get_settings().log_dir)
    for report in reports:
        ledger.log_check(report)


def cmd_trace_dim0(args) -> Dict[str, Any]:
    a = parse_scalar(args.a, FieldId.rationals())
    fam = Dim0Family(args.e, Fraction(a))
    report = delta_dim0(fam).to_dict()
    report['trace_form'] = trace_form_dim0(fam).to_dict()
    report['trace_form_closed'] = trace_form_dim0_closed(fam).to_dict()
    return report


def _matrix(text: str, field: FieldId) -> List[List]:
    return [parse_scalar_list(row, field) for row in text.split(';') if row.strip()]


def cmd_gw(args) -> Any:
    field = FieldId.parse(args.field)
    if args.gw_command == 'diag':
        gram = _matrix(args.matrix, field)
        result = diagonalize_with_certificate(gram, field)
        return {
            'diagonal': [format_scalar(d) for d in result.diagonal],
            'transform': [[format_scalar(c) for c in row] for row in result.transform],
            'certificate': result.verify(gram),
            'class': result.gw_class.to_dict(),
        }
    if args.gw_command == 'eq':
        lhs = GWClass.from_diagonal(field, parse_scalar_list(args.lhs, field)) + \
            GWClass.hyperbolic_form(field, args.lhs_hyperbolic)
        rhs = GWClass.from_diagonal(field, parse_scalar_list(args.rhs, field)) + \
            GWClass.hyperbolic_form(field, args.rhs_hyperbolic)
        return gw_equal(lhs, rhs).to_dict()
    if args.gw_command == 'sp':
        entries = parse_scalar_list(args.entries, field)
        if not field.is_function_field:
            raise UserInputError("gw sp needs --field Qt or Fpt:<p>")
        values = [t_order_and_unit(u) for u in entries]
        q = specialize(GWClass.from_diagonal(field, entries))
        return {
            'orders': [order for order, _ in values],
            'units': [format_scalar(u0) for _, u0 in values],
            'classes': [str(square_class(u0)) for _, u0 in values],
            'class': q.to_dict(),
        }
    q = GWClass.from_diagonal(field, parse_scalar_list(args.entries, field)) + \
        GWClass.hyperbolic_form(field, args.hyperbolic)
    data = q.to_dict()
    data['invariants'] = invariants(q).to_dict()
    return data


# --- output ----------------------------------------------------------------------

def _format_gw(data: Dict[str, Any]) -> str:
    parts = [f"<{e['class']}>" if e['mult'] == 1 else f"{e['mult']}<{e['class']}>" for e in data['entries']]
    if data['hyperbolic']:
        parts.append(f"{data['hyperbolic']}H")
    return ' + '.join(parts) or '0'


def render_text(command: str, data: Any) -> str:
    """Human-readable summary of a command result"""
    if command == 'gw sp':
        return ', '.join(data['units'])
    if isinstance(data, list):
        lines = []
        for report in data:
            status = "✅" if report.get('passed') else "❌"
            family = report.get('family', {})
            label = family.get('name') or family.get('poly')
            detail = report.get('error') or f"rank {report.get('rank')} (expected {report.get('expected_rank')})"
            lines.append(f"{status} {label}: {detail}")
        return '\n'.join(lines)
    if isinstance(data, dict) and 'entries' in data and 'hyperbolic' in data:
        return f"{_format_gw(data)}  (rank {data['rank']})"
    lines = []
    for key, value in data.items():
        if isinstance(value, dict) and 'entries' in value:
            value = _format_gw(value)
        lines.append(f"{key}: {value}")
    return '\n'.join(lines)


COMMANDS = {
    'jacobian': cmd_jacobian,
    'gram': cmd_gram,
    'gwform': cmd_gwform,
    'chi': cmd_chi,
    'chi-c-cone': lambda args: cmd_chi(args, cone=True),
    'conductor': cmd_conductor,
    'trace-dim0': cmd_trace_dim0,
    'gw': cmd_gw,
}


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """
    Run one command

    Args:
        argv: arguments without the program name
        stdout: output stream (default sys.stdout)
        stderr: error stream (default sys.stderr)

    Returns:
        int: 0 on success, 1 user error, 2 violated precondition, 3 internal error
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.log_level)
        data = COMMANDS[args.command](args)
        command = args.command if args.command != 'gw' else f"gw {args.gw_command}"
        if getattr(args, 'json', False):
            stdout.write(json.dumps(data, indent=2, ensure_ascii=False) + '\n')
        else:
            stdout.write(render_text(command, data) + '\n')
        return 0
    except QuadCondError as e:
        stderr.write(f"error ({e.kind}): {e}\n")
        return exit_code_for(e)
    except Exception as e:
        logger.exception("internal error")
        stderr.write(f"error (internal): {e}\n")
        return exit_code_for(e)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
