"""Weighted block Hankel-type operators on truncated duals of compact groups.

The package assembles operators T(pi, rho) = mu(pi) a(pi, rho) nu(rho) from
sparse matrix-valued symbols over enumerated group duals, analyzes their
singular spectra (operator and Schatten norms, boundedness and compactness
criteria), evaluates index diagnostics, and recovers band-limited symbols
from (possibly noisy) singular-value data.
"""

from .duals import (
    SU2,
    DualCatalog,
    GroupKind,
    IrrepLabel,
    PowerLaw,
    Product,
    TableWeight,
    Torus,
    UNIT_WEIGHT,
    Weight,
    casimir,
    dim,
    enumerate_dual,
    parse_group,
    weight_eval,
)
from .fredholm import (
    FormulaInapplicableError,
    IndexReport,
    index_formula,
    index_report,
    numerical_index,
    winding_number,
)
from .operators import BlockOperator, assemble, read_dense_csv, write_dense_csv
from .recovery import (
    AttributionError,
    RecoveryConfig,
    SingularTriple,
    SpectralData,
    StabilityRow,
    attribute_triples,
    forward,
    perturb_spectral_data,
    recover_bandlimited,
    stability_scan,
    tikhonov_recover,
)
from .spectral import (
    CriterionVerdict,
    SpectrumReport,
    carleson_test,
    compactness_report,
    norm_equivalence_check,
    schatten_norm,
    schatten_series_scan,
    schatten_series_table,
    schur_bound,
    schur_constant,
    spectrum,
)
from .symbols import (
    Symbol,
    SymbolClassParams,
    class_norm,
    diagonal_symbol,
    hankel_symbol_from_fourier,
    hs_norm,
    random_matching_symbol,
    random_symbol,
    symbol_difference,
    weighted_block,
)

__version__ = "0.1.0"

__all__ = [
    "SU2",
    "Torus",
    "Product",
    "GroupKind",
    "IrrepLabel",
    "PowerLaw",
    "TableWeight",
    "Weight",
    "UNIT_WEIGHT",
    "DualCatalog",
    "enumerate_dual",
    "parse_group",
    "dim",
    "casimir",
    "weight_eval",
    "Symbol",
    "SymbolClassParams",
    "class_norm",
    "diagonal_symbol",
    "hankel_symbol_from_fourier",
    "hs_norm",
    "random_matching_symbol",
    "random_symbol",
    "symbol_difference",
    "weighted_block",
    "BlockOperator",
    "assemble",
    "read_dense_csv",
    "write_dense_csv",
    "SpectrumReport",
    "CriterionVerdict",
    "spectrum",
    "schatten_norm",
    "schur_bound",
    "schur_constant",
    "norm_equivalence_check",
    "carleson_test",
    "compactness_report",
    "schatten_series_scan",
    "schatten_series_table",
    "FormulaInapplicableError",
    "IndexReport",
    "index_formula",
    "index_report",
    "numerical_index",
    "winding_number",
    "AttributionError",
    "RecoveryConfig",
    "SingularTriple",
    "SpectralData",
    "StabilityRow",
    "attribute_triples",
    "forward",
    "perturb_spectral_data",
    "recover_bandlimited",
    "stability_scan",
    "tikhonov_recover",
    "__version__",
]
