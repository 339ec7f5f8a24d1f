"""Singular spectra, Schatten norms, and executable spectral criteria.

Criteria over infinite duals are necessarily evaluated on truncations, so
each evaluator states an explicit finite proxy:

* the two-sided norm test brackets the measured operator norm between the
  largest weighted-block norm and the Schur product constant;
* summability tests (Carleson, Schatten series) compare partial sums across
  a cutoff ladder and call the trend convergent when increments shrink;
* compactness is reported as a pair of decay indicators, not a verdict on
  the full operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .duals import (
    DualCatalog,
    GroupKind,
    IrrepLabel,
    SU2,
    Weight,
    casimir,
    dim,
    weight_eval,
)
from .operators import BlockOperator, assemble
from .symbols import BlockKey, Symbol, SymbolClassParams, class_norm

# Trend thresholds for the truncated proxies of infinite-sum criteria.
SERIES_RATIO_THRESHOLD = 0.75     # Cauchy-increment ratio meaning "converges"
CARLESON_GROWTH_THRESHOLD = 0.05  # relative growth across half/full cutoffs
SPECTRAL_DECAY_RATIO = 0.9        # min-singular-value shrink meaning "decays"
OUTER_DECAY_RATIO = 0.5           # outer-half weighted-norm shrink


@dataclass
class SpectrumReport:
    """Global and per-block singular values of one assembled operator."""

    singular_values: np.ndarray
    per_block: dict[BlockKey, np.ndarray]
    operator_norm: float
    schatten: dict[float, float] = field(default_factory=dict)

    def nonzero(self, rel_tol: float = 1e-12) -> np.ndarray:
        s = self.singular_values
        if s.size == 0 or s[0] == 0.0:
            return s[:0]
        return s[s > rel_tol * s[0]]


@dataclass
class CriterionVerdict:
    name: str
    bound_value: float
    measured_value: float
    satisfied: bool
    detail: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "bound_value": float(self.bound_value),
            "measured_value": float(self.measured_value),
            "satisfied": bool(self.satisfied),
            "detail": self.detail,
        }


def spectrum(op: BlockOperator) -> SpectrumReport:
    """Dense SVD of the whole operator plus an SVD of every weighted block."""
    dense = op.to_dense()
    values = np.linalg.svd(dense, compute_uv=False) if dense.size else np.zeros(0)
    per_block = {
        key: np.linalg.svd(block, compute_uv=False)
        for key, block in op.weighted.items()
    }
    norm = float(values[0]) if values.size else 0.0
    return SpectrumReport(values, per_block, norm)


def schatten_norm(report: SpectrumReport, p: float) -> float:
    """(sum s_n^p)^(1/p) over the global singular values."""
    if p <= 0:
        raise ValueError(f"Schatten exponent must be > 0, got {p}")
    if p not in report.schatten:
        total = float(np.sum(report.singular_values ** p))
        report.schatten[p] = total ** (1.0 / p)
    return report.schatten[p]


def schur_constant(params: SymbolClassParams, codomain: DualCatalog, domain: DualCatalog) -> float:
    """C with C^2 = (sum_rho d_rho (1+lambda)^-n) (sum_pi (1+lambda)^-m)."""
    rho_sum = sum(dim(r) * (1.0 + casimir(r)) ** (-params.n) for r in domain.labels)
    pi_sum = sum((1.0 + casimir(p)) ** (-params.m) for p in codomain.labels)
    return float(np.sqrt(rho_sum * pi_sum))


def schur_bound(sym: Symbol, params: SymbolClassParams) -> CriterionVerdict:
    """Upper bound C * M on the operator norm, checked against a dense SVD."""
    big_m = class_norm(sym, params)
    c = schur_constant(params, sym.codomain, sym.domain)
    measured = spectrum(assemble(sym, params.mu, params.nu)).operator_norm
    bound = c * big_m
    return CriterionVerdict(
        name="schur_bound",
        bound_value=bound,
        measured_value=measured,
        satisfied=measured <= bound + 1e-9,
        detail=f"C={c:.6g}, M={big_m:.6g}, m={params.m}, n={params.n}",
    )


def norm_equivalence_check(sym: Symbol, params: SymbolClassParams) -> CriterionVerdict:
    """Bracket the operator norm: max weighted-block norm <= ||A|| <= C * M."""
    lower = class_norm(sym, SymbolClassParams(0.0, 0.0, params.mu, params.nu))
    upper = schur_constant(params, sym.codomain, sym.domain) * class_norm(sym, params)
    measured = spectrum(assemble(sym, params.mu, params.nu)).operator_norm
    ok = (lower - 1e-9 <= measured) and (measured <= upper + 1e-9)
    return CriterionVerdict(
        name="norm_equivalence",
        bound_value=upper,
        measured_value=measured,
        satisfied=ok,
        detail=f"lower={lower:.6g}, measured={measured:.6g}, upper={upper:.6g}",
    )


def _carleson_value(nu: Weight, labels: list[IrrepLabel], t: float) -> float:
    if not labels:
        return 0.0
    total = sum(
        dim(r) ** 2 * weight_eval(nu, r) ** 2 / (1.0 + casimir(r)) ** t
        for r in labels
    )
    return total / min(dim(r) for r in labels)


def carleson_test(nu: Weight, catalog: DualCatalog, t: float) -> CriterionVerdict:
    """Truncated Carleson sum with sigma({rho}) = d_rho nu(rho)^2; the sum is
    recomputed at half the cutoff and called bounded when the relative growth
    across the outer half stays below 5%."""
    if t <= 0:
        raise ValueError(f"Carleson exponent must be > 0, got {t}")
    half = [r for r in catalog.labels if casimir(r) <= catalog.cutoff / 2.0]
    v_half = _carleson_value(nu, half, t)
    v_full = _carleson_value(nu, list(catalog.labels), t)
    if v_half == 0.0:
        growth = 0.0 if v_full == 0.0 else float("inf")
    else:
        growth = (v_full - v_half) / v_half
    return CriterionVerdict(
        name="carleson",
        bound_value=CARLESON_GROWTH_THRESHOLD,
        measured_value=growth,
        satisfied=growth < CARLESON_GROWTH_THRESHOLD,
        detail=f"t={t}, sum(half)={v_half:.6g}, sum(full)={v_full:.6g}",
    )


def _restrict_operator(op: BlockOperator, frac: float) -> BlockOperator:
    lam_cod = op.codomain.cutoff * frac
    lam_dom = op.domain.cutoff * frac
    sub_cod = op.codomain.restrict(lambda l: casimir(l) <= lam_cod)
    sub_dom = op.domain.restrict(lambda l: casimir(l) <= lam_dom)
    blocks = {
        key: block
        for key, block in op.symbol.blocks.items()
        if key[0] in sub_cod and key[1] in sub_dom
    }
    return assemble(Symbol(sub_cod, sub_dom, blocks), op.mu, op.nu)


def _min_retained_sv(op: BlockOperator) -> float:
    dense = op.to_dense()
    if dense.size == 0:
        return 0.0
    values = np.linalg.svd(dense, compute_uv=False)
    if values.size == 0 or values[0] == 0.0:
        return 0.0
    kept = values[values > 1e-12 * values[0]]
    return float(kept[-1]) if kept.size else 0.0


def compactness_report(op: BlockOperator, params: SymbolClassParams) -> CriterionVerdict:
    """Two decay indicators standing in for compactness of the full operator.

    (i) decay: the column quantity (1+lambda_rho)^(n/2) * max_pi ||T(pi,rho)||
    must shrink across the outer half of the domain catalog (final value at
    most half the first outer value, no growth beyond 5% along the way);
    (ii) spectral: the smallest retained singular value must drop by at least
    10% when the truncation cutoff doubles from half to full.
    The verdict is satisfied only when both fire.
    """
    lams = sorted({casimir(r) for r in op.domain.labels})
    if len(lams) < 2:
        raise ValueError("compactness indicators need at least two distinct Casimir levels")

    col_norm: dict[float, float] = {lam: 0.0 for lam in lams}
    for (pi, rho), block in op.weighted.items():
        val = (1.0 + casimir(rho)) ** (params.n / 2.0) * float(np.linalg.norm(block, 2))
        col_norm[casimir(rho)] = max(col_norm[casimir(rho)], val)
    seq = [col_norm[lam] for lam in lams]
    outer = seq[len(seq) // 2 :]
    if all(v == 0.0 for v in outer):
        decay_fired = True
        outer_ratio = 0.0
    else:
        monotone = all(b <= a * 1.05 + 1e-15 for a, b in zip(outer, outer[1:]))
        outer_ratio = outer[-1] / outer[0] if outer[0] > 0 else float("inf")
        decay_fired = monotone and outer_ratio <= OUTER_DECAY_RATIO

    v_half = _min_retained_sv(_restrict_operator(op, 0.5))
    v_full = _min_retained_sv(op)
    if v_half == 0.0 and v_full == 0.0:
        spectral_fired = True
        sv_ratio = 0.0
    elif v_half > 0.0:
        sv_ratio = v_full / v_half
        spectral_fired = sv_ratio < SPECTRAL_DECAY_RATIO
    else:
        sv_ratio = float("inf")
        spectral_fired = False

    names = []
    if decay_fired:
        names.append("decay")
    if spectral_fired:
        names.append("spectral")
    return CriterionVerdict(
        name="compactness_indicators",
        bound_value=SPECTRAL_DECAY_RATIO,
        measured_value=sv_ratio,
        satisfied=decay_fired and spectral_fired,
        detail=(
            f"fired={names or 'none'}; outer-half ratio={outer_ratio:.6g}, "
            f"min-sv ratio={sv_ratio:.6g}"
        ),
    )


def _spin_grid(group: SU2, l_max: float) -> np.ndarray:
    step = 0.5 if group.half_integers else 1.0
    return np.arange(0.0, l_max + step / 2, step)


def schatten_series_table(
    alpha: float,
    p: float,
    l_ladder: tuple[float, ...] = (64, 128, 256, 512),
    group: GroupKind = SU2(half_integers=False),
) -> list[dict]:
    """Partial sums of (2l+1)^2 (1+l)^(-p*alpha) at each rung of the ladder,
    together with the exact truncated Schatten norm of the diagonal operator
    with decay alpha (whose block singular values are (1+l)^(-alpha), each
    with multiplicity 2l+1)."""
    if p <= 0:
        raise ValueError(f"Schatten exponent must be > 0, got {p}")
    if not isinstance(group, SU2):
        raise ValueError(f"series scan is defined on SU(2) duals, got {group!r}")
    if len(l_ladder) < 3 or any(b <= a for a, b in zip(l_ladder, l_ladder[1:])):
        raise ValueError("cutoff ladder must be increasing with at least 3 rungs")
    rows = []
    prev_sum = None
    prev_increment = None
    for l_max in l_ladder:
        ls = _spin_grid(group, l_max)
        weights = (2 * ls + 1) ** 2 * (1 + ls) ** (-p * alpha)
        partial = float(np.sum(weights))
        op_p = float(np.sum((2 * ls + 1) * (1 + ls) ** (-p * alpha)))
        row = {
            "l_max": float(l_max),
            "partial_sum": partial,
            "operator_schatten": op_p ** (1.0 / p),
        }
        if prev_sum is not None:
            increment = partial - prev_sum
            row["increment"] = increment
            if prev_increment is not None:
                if prev_increment == 0.0:
                    row["increment_ratio"] = 0.0 if increment == 0.0 else float("inf")
                else:
                    row["increment_ratio"] = increment / prev_increment
            prev_increment = increment
        prev_sum = partial
        rows.append(row)
    return rows


def schatten_series_scan(
    alpha: float,
    p: float,
    l_ladder: tuple[float, ...] = (64, 128, 256, 512),
    group: GroupKind = SU2(half_integers=False),
) -> CriterionVerdict:
    """Convergence verdict for the diagonal Schatten criterion series: the
    partial-sum increments across the factor-2 ladder must shrink
    geometrically (every increment ratio below 0.75)."""
    rows = schatten_series_table(alpha, p, l_ladder, group)
    ratios = [row["increment_ratio"] for row in rows if "increment_ratio" in row]
    measured = max(ratios) if ratios else 0.0
    converges = measured < SERIES_RATIO_THRESHOLD
    return CriterionVerdict(
        name="schatten_series",
        bound_value=SERIES_RATIO_THRESHOLD,
        measured_value=measured,
        satisfied=converges,
        detail=(
            f"p={p}, alpha={alpha}, p*alpha={p * alpha:.6g}, "
            f"verdict={'converges' if converges else 'diverges'}, "
            f"last partial sum={rows[-1]['partial_sum']:.6g}"
        ),
    )
