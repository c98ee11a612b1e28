import logging
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from certificate_lp import (certificate_document, gap_closed_form, sos_min_closed_form, sos_min_invariant,
                            write_certificate)
from clifford_system import (FULL_PRODUCT_SIGN, MAX_LEVEL, SIZE, clifford_relation_report, full_product_check,
                             gram_matrix)
from config import Config
from convexity_checks import convexity_report, gap_certifies_convex_not_sos
from dense_sos import DenseForm, Graph, gap_estimate, sos_lower_bound, sphere_extrema, stable_set_form
from exact import format_rational
from exceptions import UndefinedGapError, VerificationError
from octonion_core import (DEFAULT_TABLE, Octonion, OctonionTable, conj, inner, left_mult_matrix, mul,
                           random_octonion, right_mult_matrix)

logger = logging.getLogger(__name__)


class VerificationRunner:
    def __init__(self, seed: Optional[int] = None):
        self.seed = Config.DEFAULT_SEED if seed is None else seed
        logger.info(f"Verification runner initialized (seed {self.seed})")

    def _rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def _octonion_checks(self, table: OctonionTable, num_samples: int) -> List[Dict[str, Any]]:
        rng = self._rng()
        triples = [(random_octonion(rng), random_octonion(rng), random_octonion(rng))
                   for _ in range(num_samples)]
        identity = np.eye(8, dtype=int)

        def holds(check: Callable[[Octonion, Octonion, Octonion], bool]) -> bool:
            return all(check(a, b, c) for a, b, c in triples)

        checks = {
            'norm multiplicativity |ab|^2 = |a|^2 |b|^2':
                lambda a, b, c: mul(a, b, table).norm_sq() == a.norm_sq() * b.norm_sq(),
            'left alternativity a(ab) = (aa)b':
                lambda a, b, c: mul(a, mul(a, b, table), table) == mul(mul(a, a, table), b, table),
            'right alternativity (ba)a = b(aa)':
                lambda a, b, c: mul(mul(b, a, table), a, table) == mul(b, mul(a, a, table), table),
            'left adjoint <ax, y> = <x, conj(a) y>':
                lambda a, b, c: inner(mul(a, b, table), c) == inner(b, mul(conj(a), c, table)),
            'right adjoint <xa, y> = <x, y conj(a)>':
                lambda a, b, c: inner(mul(b, a, table), c) == inner(b, mul(c, conj(a), table)),
            '[R_conj(u)] = [R_u]^T':
                lambda a, b, c: np.array_equal(right_mult_matrix(conj(a), table), right_mult_matrix(a, table).T),
            '[L_conj(u)] = [L_u]^T':
                lambda a, b, c: np.array_equal(left_mult_matrix(conj(a), table), left_mult_matrix(a, table).T),
        }
        records = [{'name': name, 'passed': holds(check)} for name, check in checks.items()]
        records.append({'name': '[R_e0] = I',
                        'passed': bool(np.array_equal(right_mult_matrix(Octonion.unit(0), table), identity))})
        return records

    def run_algebra_suite(self, table: OctonionTable = DEFAULT_TABLE,
                          num_samples: int = 20) -> Dict[str, Any]:
        """Exact identities of the octonions and the Clifford system."""
        logger.info("Running algebra suite...")
        records = self._octonion_checks(table, num_samples)

        relations = clifford_relation_report(table)
        failed_relations = [r for r in relations if not r['passed']]
        passed_count = len(relations) - len(failed_relations)
        records.append({
            'name': 'Clifford relations S_i S_j + S_j S_i = 2 delta_ij I',
            'passed': not failed_relations,
            'detail': f"{passed_count}/{len(relations)} Clifford relations exact",
            'failures': [f"S_{r['i']} S_{r['j']}" for r in failed_relations],
        })
        records.append({
            'name': f"S_0 S_1 ... S_8 = {'+' if FULL_PRODUCT_SIGN > 0 else '-'}I",
            'passed': full_product_check(table),
        })

        gram = gram_matrix(table)
        expected = SIZE * np.eye(gram.shape[0], dtype=np.int64)
        records.append({
            'name': f'S_J with |J| <= {MAX_LEVEL} pairwise orthogonal with norm 16',
            'passed': bool(np.array_equal(gram, expected)),
            'detail': f"{gram.shape[0]} basis elements",
        })

        failed = [r['name'] for r in records if not r['passed']]
        for name in failed:
            logger.error(f"Algebra check failed: {name}")
        logger.info(f"Algebra suite: {len(records) - len(failed)}/{len(records)} checks passed")
        return {
            'status': 'success' if not failed else 'failed',
            'checks': records,
            'failed': failed,
        }

    def certify(self, k: int, write: bool = False, output_dir: Optional[str] = None,
                num_points: int = 10) -> Dict[str, Any]:
        logger.info(f"Certifying q_{k}...")
        document = certificate_document(k, num_points=num_points, rng=self._rng())
        if write:
            document['path'] = str(write_certificate(document, output_dir))
        return document

    def certify_range(self, k_from: int, k_to: int, **kwargs) -> List[Dict[str, Any]]:
        return [self.certify(k, **kwargs) for k in range(k_from, k_to + 1)]

    def gap_table(self, k_from: int, k_to: int) -> pd.DataFrame:
        rows = []
        for k in range(k_from, k_to + 1):
            logger.info(f"Solving sos_min LP for k={k}...")
            sos_min = sos_min_invariant(k)
            gap = 1 - 4 * sos_min
            rows.append({
                'k': k,
                'sos_min': format_rational(sos_min),
                'gap': format_rational(gap),
                'gap_gt_2': gap_certifies_convex_not_sos(gap),
                'matches_closed_form': sos_min == sos_min_closed_form(k) and gap == gap_closed_form(k),
            })
        return pd.DataFrame(rows, columns=['k', 'sos_min', 'gap', 'gap_gt_2', 'matches_closed_form'])

    def dense_report(self, form: DenseForm, tol: Optional[float] = None) -> Dict[str, Any]:
        logger.info(f"Dense SOS report for {form.name} (n={form.n}, degree={form.degree})")
        p_min, p_max = sphere_extrema(form, rng=self._rng())
        result = sos_lower_bound(form, tol)
        report = {
            'form': form.name,
            'n': form.n,
            'degree': form.degree,
            'min': p_min,
            'max': p_max,
            'sos_bound': result.gamma,
            'residual': result.residual,
            'min_gram_eig': result.min_gram_eig,
            'primal_dual_gap': result.primal_dual_gap,
        }
        try:
            report['gap'] = gap_estimate(form, extrema=(p_min, p_max), result=result)
        except UndefinedGapError as e:
            logger.warning(str(e))
            report['gap'] = None
        return report

    def stable_set_report(self, graph: Graph, tol: Optional[float] = None) -> Dict[str, Any]:
        alpha = graph.independence_number()
        report = self.dense_report(stable_set_form(graph), tol)
        report['alpha'] = alpha
        report['expected_min'] = 1 / alpha
        report['gap_lt_2'] = report['gap'] is None or report['gap'] < 2
        return report

    def convexity(self, k: int, num_samples: int = 20, num_pairs: int = 100) -> Dict[str, Any]:
        return convexity_report(k, num_samples, num_pairs, rng=self._rng()).to_dict()


def error_payload(error: Exception) -> Dict[str, Any]:
    code = error.error_code if isinstance(error, VerificationError) else 'INTERNAL_ERROR'
    return {
        'status': 'error',
        'error': str(error),
        'error_code': code,
        'timestamp': datetime.now().isoformat(),
    }


# Global instance
verification_runner = VerificationRunner()
