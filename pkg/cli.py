"""Command-line front end.

Exit codes: 0 verified, 1 verification failed, 2 usage or parse error.
The report goes to stdout, logs to stderr.
"""
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple

import click
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from config import Config
from dense_sos import motzkin_form, parse_form_text, parse_graph_text
from exceptions import FormParseError, VerificationError
from octonion_core import DEFAULT_TABLE
from services.verification_runner import VerificationRunner

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class RunConfig(BaseModel):
    command: Literal['verify-algebra', 'certify', 'gap-table', 'dense', 'convexity']
    k: Optional[int] = Field(default=None, ge=2)
    k_range: Optional[Tuple[int, int]] = None
    seed: int = Config.DEFAULT_SEED
    tol: float = Field(default=Config.DEFAULT_TOL, gt=0)
    output: Optional[str] = None
    format: Literal['json', 'csv', 'text'] = 'text'

    @field_validator('k_range', mode='before')
    @classmethod
    def parse_range(cls, value):
        if isinstance(value, str):
            parts = value.split('..')
            if len(parts) != 2:
                raise ValueError(f"k-range must look like A..B, got {value!r}")
            return int(parts[0]), int(parts[1])
        return value

    @model_validator(mode='after')
    def check_range(self):
        if self.k_range is not None:
            low, high = self.k_range
            if low < 2 or high < low:
                raise ValueError(f"k-range {low}..{high} must satisfy 2 <= A <= B")
        return self

    def ks(self, default: Tuple[int, int]) -> range:
        if self.k is not None:
            return range(self.k, self.k + 1)
        low, high = self.k_range or default
        return range(low, high + 1)


def _setup_logging():
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )


def _run_config(ctx: click.Context, **values) -> RunConfig:
    try:
        return RunConfig(**values)
    except ValidationError as e:
        click.echo(f"Error: {e}", err=True)
        ctx.exit(EXIT_USAGE)


def _emit(text: str, output: Optional[str] = None):
    if output:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + '\n')
        logger.info(f"report written to {path}")
    click.echo(text)


def _dump(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


def _format_report(report: Dict[str, Any], fmt: str) -> str:
    if fmt == 'json':
        return _dump(report)
    return '\n'.join(f"{key}: {value}" for key, value in report.items())


@click.group()
def cli():
    """Exact SOS and convexity verification for octonionic Cauchy-Schwarz forms."""
    _setup_logging()


@cli.command('verify-algebra')
@click.option('--json', 'as_json', is_flag=True, help='Machine-readable pass/fail list.')
@click.option('--seed', type=int, default=Config.DEFAULT_SEED)
@click.option('--corrupt-sign', default=None, hidden=True)
@click.pass_context
def verify_algebra(ctx, as_json, seed, corrupt_sign):
    """Octonion identities, the 81 Clifford relations and S_J orthogonality."""
    table = DEFAULT_TABLE
    if corrupt_sign:
        try:
            row, col = (int(v) for v in corrupt_sign.split(','))
            table = table.with_flipped_sign(row, col)
        except (ValueError, IndexError):
            click.echo(f"Error: --corrupt-sign expects R,C in 0..7, got {corrupt_sign!r}", err=True)
            ctx.exit(EXIT_USAGE)

    result = VerificationRunner(seed).run_algebra_suite(table)
    if as_json:
        click.echo(_dump(result))
    else:
        for check in result['checks']:
            mark = 'PASS' if check['passed'] else 'FAIL'
            click.echo(f"[{mark}] {check['name']}")
            if 'detail' in check:
                click.echo(f"       {check['detail']}")
            for failure in check.get('failures', []):
                click.echo(f"       violated: {failure}")
    ctx.exit(EXIT_OK if result['status'] == 'success' else EXIT_FAILED)


@cli.command()
@click.option('--k', type=int, default=None)
@click.option('--k-range', 'k_range', default=None, help='A..B')
@click.option('--seed', type=int, default=Config.DEFAULT_SEED)
@click.option('--format', 'fmt', type=click.Choice(['json', 'text']), default='text')
@click.option('--output', default=None, help='Directory for certificate files (default: Config.OUTPUT_DIR).')
@click.pass_context
def certify(ctx, k, k_range, seed, fmt, output):
    """Certify q_k SOS (k <= 16) or not SOS (k >= 17)."""
    config = _run_config(ctx, command='certify', k=k, k_range=k_range, seed=seed,
                         output=output, format=fmt)
    ks = config.ks((Config.K_MIN, Config.K_MAX))
    if ks.start < Config.K_MIN or ks.stop - 1 > Config.K_MAX:
        click.echo(f"Error: k must lie in {Config.K_MIN}..{Config.K_MAX}", err=True)
        ctx.exit(EXIT_USAGE)

    runner = VerificationRunner(config.seed)
    try:
        documents = runner.certify_range(ks.start, ks.stop - 1, write=True, output_dir=config.output)
    except VerificationError as e:
        logger.error(f"Certification failed: {e}")
        click.echo(f"Verification failed: {e}", err=True)
        ctx.exit(EXIT_FAILED)

    for doc in documents:
        doc.pop('path', None)
    if config.format == 'json':
        click.echo(_dump(documents[0] if len(documents) == 1 else documents))
    else:
        for doc in documents:
            cert = doc['certificate']
            if doc['verdict'] == 'sos':
                click.echo(f"k={doc['k']}: sos  lambda=({', '.join(cert['lambda'])})")
            else:
                click.echo(f"k={doc['k']}: not_sos  farkas_row=({', '.join(cert['farkas_row'])})  "
                           f"rhs={cert['product_rhs']}")
    ctx.exit(EXIT_OK)


@cli.command('gap-table')
@click.option('--k-range', 'k_range', default=None, help='A..B')
@click.option('--format', 'fmt', type=click.Choice(['json', 'csv', 'text']), default='text')
@click.option('--output', default=None)
@click.pass_context
def gap_table(ctx, k_range, fmt, output):
    """sos_min(cs_k) and gap(cs_k) per k, solved exactly."""
    config = _run_config(ctx, command='gap-table', k_range=k_range, format=fmt, output=output)
    ks = config.ks(Config.GAP_TABLE_RANGE)
    try:
        table = VerificationRunner().gap_table(ks.start, ks.stop - 1)
    except VerificationError as e:
        click.echo(f"Verification failed: {e}", err=True)
        ctx.exit(EXIT_FAILED)

    if config.format == 'csv':
        text = table.to_csv(index=False).rstrip('\n')
    elif config.format == 'json':
        text = table.to_json(orient='records', indent=2)
    else:
        text = table.to_string(index=False)
    _emit(text, config.output)
    ctx.exit(EXIT_OK if table['matches_closed_form'].all() else EXIT_FAILED)


@cli.command()
@click.argument('form_file', required=False, type=click.Path())
@click.option('--motzkin', is_flag=True, help='Use the Motzkin form.')
@click.option('--stable-set', 'graph_file', default=None, type=click.Path(),
              help='Graph file: "n m" then m edges "i j" (0-based).')
@click.option('--tol', type=float, default=Config.DEFAULT_TOL)
@click.option('--seed', type=int, default=Config.DEFAULT_SEED)
@click.option('--format', 'fmt', type=click.Choice(['json', 'text']), default='text')
@click.option('--output', default=None)
@click.pass_context
def dense(ctx, form_file, motzkin, graph_file, tol, seed, fmt, output):
    """Sphere extrema, SOS bound and gap of a small dense form."""
    config = _run_config(ctx, command='dense', tol=tol, seed=seed, format=fmt, output=output)
    chosen = [bool(form_file), motzkin, bool(graph_file)]
    if sum(chosen) != 1:
        click.echo("Error: give exactly one of FORM_FILE, --motzkin, --stable-set", err=True)
        ctx.exit(EXIT_USAGE)

    runner = VerificationRunner(config.seed)
    try:
        if motzkin:
            report = runner.dense_report(motzkin_form(), config.tol)
        elif graph_file:
            graph = parse_graph_text(Path(graph_file).read_text())
            report = runner.stable_set_report(graph, config.tol)
        else:
            form = parse_form_text(Path(form_file).read_text(), name=Path(form_file).stem)
            report = runner.dense_report(form, config.tol)
    except FormParseError as e:
        click.echo(f"Parse error: {e}", err=True)
        ctx.exit(EXIT_USAGE)
    except OSError as e:
        click.echo(f"Error: {e}", err=True)
        ctx.exit(EXIT_USAGE)
    except VerificationError as e:
        click.echo(f"Verification failed: {e}", err=True)
        ctx.exit(EXIT_FAILED)

    _emit(_format_report(report, config.format), config.output)
    ctx.exit(EXIT_OK)


@cli.command()
@click.option('--k', type=int, default=17)
@click.option('--samples', type=int, default=20)
@click.option('--pairs', type=int, default=100)
@click.option('--seed', type=int, default=Config.DEFAULT_SEED)
@click.option('--format', 'fmt', type=click.Choice(['json', 'text']), default='text')
@click.option('--output', default=None)
@click.pass_context
def convexity(ctx, k, samples, pairs, seed, fmt, output):
    """Hessian, midpoint and window checks for q_k."""
    config = _run_config(ctx, command='convexity', k=k, seed=seed, format=fmt, output=output)
    try:
        report = VerificationRunner(config.seed).convexity(config.k, samples, pairs)
    except VerificationError as e:
        click.echo(f"Verification failed: {e}", err=True)
        ctx.exit(EXIT_FAILED)
    _emit(_format_report(report, config.format), config.output)
    ctx.exit(EXIT_OK if report['window_ok'] else EXIT_FAILED)


if __name__ == '__main__':
    cli()
