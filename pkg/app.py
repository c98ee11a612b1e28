import logging
from datetime import datetime

from flask import Flask, jsonify, request
from flask_cors import CORS

from config import Config
from dense_sos import Graph, motzkin_form
from exceptions import VerificationError
from services.verification_runner import error_payload, verification_runner

# Configure logging
logging.basicConfig(
    level=getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# Create Flask app
app = Flask(__name__)
CORS(app)


def bad_request(message: str):
    return jsonify({
        "status": "error",
        "error": message,
        "error_code": "INVALID_REQUEST",
        "timestamp": datetime.now().isoformat()
    }), 400


def verification_failed(error: VerificationError):
    logger.error(f"Verification failed: {error}")
    return jsonify(error_payload(error)), 422


@app.route('/')
def health_check():
    """Health check endpoint"""
    return jsonify({
        "status": "healthy",
        "service": "Octonionic Cauchy-Schwarz SOS Verifier",
        "version": "1.0.0",
        "timestamp": datetime.now().isoformat(),
        "certification_range": [Config.K_MIN, Config.K_MAX],
        "sdp_solver": Config.SDP_SOLVER
    })


@app.route('/verify-algebra')
def verify_algebra():
    result = verification_runner.run_algebra_suite()
    result["timestamp"] = datetime.now().isoformat()
    status = 200 if result["status"] == "success" else 422
    return jsonify(result), status


@app.route('/certificate/<int:k>')
def certificate(k):
    if not Config.K_MIN <= k <= Config.K_MAX:
        return bad_request(f"k must lie in {Config.K_MIN}..{Config.K_MAX}")
    try:
        document = verification_runner.certify(k)
        return jsonify({"status": "success", "timestamp": datetime.now().isoformat(), **document})
    except VerificationError as e:
        return verification_failed(e)


@app.route('/gap-table')
def gap_table():
    low, high = Config.GAP_TABLE_RANGE
    try:
        k_from = int(request.args.get('k_from', low))
        k_to = int(request.args.get('k_to', high))
    except ValueError:
        return bad_request("k_from and k_to must be integers")
    if k_from < 2 or k_to < k_from:
        return bad_request(f"need 2 <= k_from <= k_to, got {k_from}..{k_to}")

    try:
        table = verification_runner.gap_table(k_from, k_to)
    except VerificationError as e:
        return verification_failed(e)
    rows = table.to_dict(orient='records')
    return jsonify({
        "status": "success",
        "rows": [{key: (bool(v) if key.startswith(('gap_gt', 'matches')) else v) for key, v in row.items()}
                 for row in rows],
        "timestamp": datetime.now().isoformat()
    })


@app.route('/dense/motzkin')
def dense_motzkin():
    try:
        report = verification_runner.dense_report(motzkin_form())
    except VerificationError as e:
        return verification_failed(e)
    return jsonify({"status": "success", "report": report, "timestamp": datetime.now().isoformat()})


@app.route('/dense/stable-set', methods=['POST'])
def dense_stable_set():
    if not request.is_json:
        return bad_request("Request must be JSON format")
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        return bad_request("Request body must be a JSON object")

    missing_fields = [field for field in ('n', 'edges') if field not in data]
    if missing_fields:
        return bad_request(f"Missing required fields: {', '.join(missing_fields)}")

    try:
        graph = Graph(int(data['n']), frozenset((int(i), int(j)) for i, j in data['edges']))
    except (TypeError, ValueError) as e:
        return bad_request(f"Invalid graph: {e}")

    logger.info(f"Stable-set report requested for n={graph.n}, {len(graph.edges)} edges")
    try:
        report = verification_runner.stable_set_report(graph)
    except ValueError as e:
        return bad_request(str(e))
    except VerificationError as e:
        return verification_failed(e)
    return jsonify({"status": "success", "report": report, "timestamp": datetime.now().isoformat()})


@app.errorhandler(404)
def not_found(error):
    return jsonify({
        "status": "error",
        "error": "Endpoint not found",
        "error_code": "NOT_FOUND",
        "timestamp": datetime.now().isoformat()
    }), 404


@app.errorhandler(500)
def internal_error(error):
    return jsonify({
        "status": "error",
        "error": "Internal server error",
        "error_code": "INTERNAL_ERROR",
        "timestamp": datetime.now().isoformat()
    }), 500


if __name__ == '__main__':
    logger.info("Starting SOS verification service")
    logger.info(f"   Port: {Config.PORT}")
    logger.info(f"   Debug: {Config.FLASK_DEBUG}")

    app.run(host='0.0.0.0', port=Config.PORT, debug=Config.FLASK_DEBUG)
