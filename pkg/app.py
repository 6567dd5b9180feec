"""
Flask JSON API for quadcond
Exposes Jacobian rings, Euler characteristics and conductor checks over HTTP
"""
import logging
import platform
from datetime import datetime
from fractions import Fraction
from typing import Any, Dict

from flask import Flask, jsonify, request

from check_ledger import CheckLedger
from conductor import ConeFamily, Dim0Family, conductor_check, delta_dim0, tensor_decomposition_check
from config import configure_logging, get_settings
from errors import QuadCondError, UserInputError, http_status_for
from expr_parser import parse_poly, parse_scalar, parse_weights
from hyper import hypersurface_report, make_hypersurface
from jacobian import build_jacobian, check_cover_identity
from poly import WeightedRing
from scalars import FieldId

logger = logging.getLogger(__name__)

# Initialize Flask application
app = Flask(__name__)
app.config['JSON_SORT_KEYS'] = False

# Initialize the ledger with error handling
try:
    check_ledger = CheckLedger(get_settings().log_dir)
    components_healthy = True
    initialization_errors = []
except (OSError, QuadCondError) as e:
    print(f"Critical error during ledger initialization: {e}")
    check_ledger = None
    components_healthy = False
    initialization_errors = [str(e)]


def _utc_now() -> str:
    return datetime.utcnow().isoformat() + 'Z'


def _error_response(exc: Exception):
    """JSON error body with the status matching the exception's exit code"""
    kind = exc.kind if isinstance(exc, QuadCondError) else 'internal'
    if not isinstance(exc, QuadCondError):
        logger.exception("internal error")
    return jsonify({'error': str(exc), 'kind': kind}), http_status_for(exc)


def _body() -> Dict[str, Any]:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise UserInputError("request body must be a JSON object")
    return data


def _ring_from_body(body: Dict[str, Any]) -> WeightedRing:
    """Ring from {field, vars, weights}; vars and weights may be lists or comma strings"""
    variables = body.get('vars')
    if not variables:
        raise UserInputError("'vars' is required")
    if isinstance(variables, str):
        variables = [v.strip() for v in variables.split(',') if v.strip()]
    weights = body.get('weights')
    if weights is None:
        weights = [1] * len(variables)
    elif isinstance(weights, str):
        weights = parse_weights(weights)
    try:
        weights = tuple(int(w) for w in weights)
    except (TypeError, ValueError):
        raise UserInputError(f"weights must be integers: {weights!r}")
    return WeightedRing(FieldId.parse(str(body.get('field', 'Q'))), tuple(variables), weights)


def _poly_from_body(body: Dict[str, Any]):
    source = body.get('poly')
    if not isinstance(source, str) or not source.strip():
        raise UserInputError("'poly' is required")
    return parse_poly(source, _ring_from_body(body))


def _optional_int(body: Dict[str, Any], key: str):
    value = body.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
        raise UserInputError(f"'{key}' must be an integer")
    try:
        return int(value)
    except (TypeError, ValueError):
        raise UserInputError(f"'{key}' must be an integer")


def _require_ledger() -> CheckLedger:
    if not components_healthy or check_ledger is None:
        raise QuadCondError("check ledger not available")
    return check_ledger


@app.route('/api/health')
def get_health():
    """
    API endpoint for a liveness check with ledger status

    Returns:
        JSON response with component health and current settings
    """
    response_data = {
        'status': 'OK' if components_healthy else 'DEGRADED',
        'components_healthy': components_healthy,
        'initialization_errors': initialization_errors,
        'settings': get_settings().to_dict(),
        'timestamp': _utc_now(),
    }
    if check_ledger is not None:
        try:
            response_data['ledger'] = check_ledger.get_status().to_dict()
        except Exception as e:
            response_data['status'] = 'DEGRADED'
            response_data['initialization_errors'].append(f'Ledger error: {str(e)}')
    return jsonify(response_data), (200 if components_healthy else 503)


@app.route('/api/jacobian', methods=['POST'])
def post_jacobian():
    """
    API endpoint for the graded Jacobian ring of a polynomial

    Body: {field, vars, weights?, poly, strategy?}

    Returns:
        JSON response with Hilbert data, smoothness and the socle generator
    """
    try:
        body = _body()
        J = build_jacobian(_poly_from_body(body))
        data = J.to_dict()
        if data['smooth']:
            data['socle_generator'] = J.socle_generator(body.get('strategy')).to_dict()
            if any(a != 1 for a in J.ring.weights):
                data['cover_identity'] = check_cover_identity(J)
        return jsonify(data)
    except Exception as e:
        return _error_response(e)


@app.route('/api/chi', methods=['POST'])
def post_chi():
    """
    API endpoint for the quadratic Euler characteristic of a smooth hypersurface

    Body: {field, vars, weights?, poly, n?, cone?}

    Returns:
        JSON response with the hypersurface report
    """
    try:
        body = _body()
        H = make_hypersurface(_poly_from_body(body), _optional_int(body, 'n'))
        return jsonify(hypersurface_report(H, cone=bool(body.get('cone', False))))
    except Exception as e:
        return _error_response(e)


@app.route('/api/conductor', methods=['POST'])
def post_conductor():
    """
    API endpoint to run a conductor check on one cone family

    Body: {field, vars, weights?, poly, name?, tensor?, record?}

    Returns:
        JSON response with both sides, the verdict and the ledger record id
        (or a ledger_warning when the check could not be recorded)
    """
    try:
        body = _body()
        fam = ConeFamily(_poly_from_body(body), str(body.get('name', '')))
        report = conductor_check(fam).to_dict()
        if body.get('tensor'):
            report['tensor_decomposition'] = tensor_decomposition_check(fam)
        if body.get('record', True):
            if not components_healthy or check_ledger is None:
                report['ledger_warning'] = "check ledger not available; check not recorded"
            else:
                record = check_ledger.log_check(report)
                if check_ledger.last_write_error:
                    logger.warning("conductor check not recorded: %s", check_ledger.last_write_error)
                    report['ledger_warning'] = f"check not recorded: {check_ledger.last_write_error}"
                else:
                    report['check_id'] = record.check_id
        return jsonify(report)
    except Exception as e:
        return _error_response(e)


@app.route('/api/dim0', methods=['POST'])
def post_dim0():
    """
    API endpoint for the zero-dimensional conductor identity

    Body: {e, a}

    Returns:
        JSON response with both sides and the closed-form comparison
    """
    try:
        body = _body()
        try:
            e = int(body['e'])
        except (KeyError, TypeError, ValueError):
            raise UserInputError("'e' must be an integer")
        a = parse_scalar(str(body.get('a', '1')), FieldId.rationals())
        return jsonify(delta_dim0(Dim0Family(e, Fraction(a))).to_dict())
    except Exception as e:
        return _error_response(e)


@app.route('/api/checks')
def get_recent_checks():
    """
    API endpoint to get recently recorded checks

    Returns:
        JSON response with list of recent checks
    """
    try:
        ledger = _require_ledger()
        try:
            limit = request.args.get('limit', 10, type=int)
            if limit is None or limit < 1 or limit > 100:
                limit = 10
        except (ValueError, TypeError):
            limit = 10
        checks = [record.to_dict() for record in ledger.get_recent_checks(limit)]
        return jsonify({'checks': checks, 'total_count': len(checks)})
    except Exception as e:
        return _error_response(e)


@app.route('/api/statistics')
def get_statistics():
    """
    API endpoint to get check statistics

    Returns:
        JSON response with verdict counts and ledger status
    """
    try:
        ledger = _require_ledger()
        status = ledger.get_status()
        return jsonify({
            'check_statistics': ledger.get_statistics(),
            'ledger': {
                'status': status.status,
                'total_checks': status.total_checks,
                'failed_checks': status.failed_checks,
                'uptime_seconds': status.uptime_seconds,
            },
        })
    except Exception as e:
        return _error_response(e)


@app.route('/api/reset', methods=['POST'])
def reset_ledger():
    """
    API endpoint to clear the check ledger

    Returns:
        JSON response with reset results
    """
    try:
        if _require_ledger().clear_checks():
            return jsonify({
                'success': True,
                'message': 'Check ledger cleared',
                'timestamp': _utc_now(),
            })
        return jsonify({'success': False, 'error': 'Failed to clear check ledger'}), 500
    except Exception as e:
        return _error_response(e)


if __name__ == '__main__':
    configure_logging()
    print("📐 quadcond API")
    print("=" * 50)
    print(f"Ledger directory: {get_settings().log_dir}")
    # Use 127.0.0.1 on Windows, 0.0.0.0 on Linux/Mac
    host = '127.0.0.1' if platform.system() == 'Windows' else '0.0.0.0'
    app.run(host=host, port=5000, debug=False, threaded=True)
