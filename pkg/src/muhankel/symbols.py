"""Sparse matrix-valued symbols and their norms.

A symbol stores one complex d_pi x d_rho matrix per (pi, rho) label pair;
absent pairs are zero. Weights act as positive scalars per label, so the
weighted block at (pi, rho) is ``mu(pi) * a(pi, rho) * nu(rho)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .duals import (
    DualCatalog,
    IrrepLabel,
    PowerLaw,
    Torus,
    UNIT_WEIGHT,
    Weight,
    casimir,
    dim,
    weight_eval,
)

BlockKey = tuple[IrrepLabel, IrrepLabel]


def _freeze(block: np.ndarray) -> np.ndarray:
    out = np.array(block, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass
class Symbol:
    """Sparse collection of blocks a(pi, rho), pi from the codomain catalog
    and rho from the domain catalog. Immutable after construction."""

    codomain: DualCatalog
    domain: DualCatalog
    blocks: dict[BlockKey, np.ndarray]

    def __post_init__(self) -> None:
        checked = {}
        for (pi, rho), block in self.blocks.items():
            if pi not in self.codomain:
                raise ValueError(f"codomain label {pi.index} not in catalog")
            if rho not in self.domain:
                raise ValueError(f"domain label {rho.index} not in catalog")
            block = _freeze(block)
            want = (dim(pi), dim(rho))
            if block.shape != want:
                raise ValueError(
                    f"block ({pi.index}, {rho.index}) has shape {block.shape}, "
                    f"expected {want}"
                )
            checked[(pi, rho)] = block
        self.blocks = checked

    def block(self, pi: IrrepLabel, rho: IrrepLabel) -> np.ndarray:
        """Stored block, or a zero matrix of the right shape."""
        found = self.blocks.get((pi, rho))
        if found is not None:
            return found
        return np.zeros((dim(pi), dim(rho)), dtype=np.complex128)

    def scaled(self, c: complex) -> "Symbol":
        return Symbol(
            self.codomain,
            self.domain,
            {key: c * block for key, block in self.blocks.items()},
        )

    def to_dict(self) -> dict:
        entries = []
        for (pi, rho), block in sorted(
            self.blocks.items(), key=lambda kv: (kv[0][0].index, kv[0][1].index)
        ):
            entries.append(
                {
                    "pi_index": list(pi.index),
                    "rho_index": list(rho.index),
                    "re": block.real.tolist(),
                    "im": block.imag.tolist(),
                }
            )
        return {
            "codomain": self.codomain.to_dict(),
            "domain": self.domain.to_dict(),
            "blocks": entries,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Symbol":
        codomain = DualCatalog.from_dict(data["codomain"])
        domain = DualCatalog.from_dict(data["domain"])
        blocks = {}
        for entry in data["blocks"]:
            pi = IrrepLabel(codomain.group, tuple(entry["pi_index"]))
            rho = IrrepLabel(domain.group, tuple(entry["rho_index"]))
            blocks[(pi, rho)] = np.asarray(entry["re"]) + 1j * np.asarray(entry["im"])
        return cls(codomain, domain, blocks)


@dataclass(frozen=True)
class SymbolClassParams:
    """Decay orders (m, n) and the weight pair defining a symbol class."""

    m: float
    n: float
    mu: Weight = UNIT_WEIGHT
    nu: Weight = UNIT_WEIGHT

    def __post_init__(self) -> None:
        if self.m < 0 or self.n < 0:
            raise ValueError(f"decay orders must be >= 0, got m={self.m}, n={self.n}")


def weighted_block(
    sym: Symbol, mu: Weight, nu: Weight, pi: IrrepLabel, rho: IrrepLabel
) -> np.ndarray:
    """mu(pi) * a(pi, rho) * nu(rho); zero matrix when the block is absent."""
    block = sym.block(pi, rho)
    # single scalar product keeps the adjoint exactly conjugate-symmetric
    return (weight_eval(mu, pi) * weight_eval(nu, rho)) * block


def class_norm(sym: Symbol, params: SymbolClassParams) -> float:
    """Largest weighted block operator norm, amplified by the decay factors
    (1+lambda_pi)^(m/2) (1+lambda_rho)^(n/2). Zero for an empty symbol."""
    best = 0.0
    for (pi, rho) in sym.blocks:
        wb = weighted_block(sym, params.mu, params.nu, pi, rho)
        factor = (1.0 + casimir(pi)) ** (params.m / 2.0)
        factor *= (1.0 + casimir(rho)) ** (params.n / 2.0)
        best = max(best, factor * float(np.linalg.norm(wb, 2)))
    return best


def hs_norm(sym: Symbol, mu: Weight = UNIT_WEIGHT, nu: Weight = UNIT_WEIGHT) -> float:
    """l2-sum of Hilbert-Schmidt norms of the weighted blocks."""
    total = 0.0
    for (pi, rho) in sym.blocks:
        wb = weighted_block(sym, mu, nu, pi, rho)
        total += float(np.sum(np.abs(wb) ** 2))
    return float(np.sqrt(total))


def symbol_difference(a: Symbol, b: Symbol) -> Symbol:
    """Blockwise a - b over the union of supports; catalogs must agree."""
    if a.codomain.labels != b.codomain.labels or a.domain.labels != b.domain.labels:
        raise ValueError("symbol difference needs matching catalogs")
    keys = set(a.blocks) | set(b.blocks)
    blocks = {key: a.block(*key) - b.block(*key) for key in keys}
    return Symbol(a.codomain, a.domain, blocks)


def hankel_symbol_from_fourier(
    coeffs: Mapping[int, complex], codomain: DualCatalog, domain: DualCatalog
) -> Symbol:
    """Classical Hankel law a(n, m) = coeffs[n + m] on one-dimensional tori."""
    for cat, side in ((codomain, "codomain"), (domain, "domain")):
        if cat.group != Torus(1):
            raise ValueError(f"{side} catalog must be a 1-torus dual, got {cat.group!r}")
    blocks = {}
    for pi in codomain.labels:
        for rho in domain.labels:
            c = coeffs.get(pi.index[0] + rho.index[0])
            if c:
                blocks[(pi, rho)] = np.array([[c]], dtype=np.complex128)
    return Symbol(codomain, domain, blocks)


def diagonal_symbol(catalog: DualCatalog, decay: float = 0.0) -> Symbol:
    """a(pi, pi) = (1 + r_pi)^(-decay) * identity on a single catalog,
    r_pi the radial size; decay 0 gives identity blocks."""
    taper = PowerLaw(-decay)
    blocks = {}
    for label in catalog.labels:
        scale = weight_eval(taper, label)
        blocks[(label, label)] = scale * np.eye(dim(label), dtype=np.complex128)
    return Symbol(catalog, catalog, blocks)


def random_symbol(
    codomain: DualCatalog, domain: DualCatalog, density: float, seed: int
) -> Symbol:
    """Each label pair is filled with probability ``density``; entries are
    standard complex normal. Same seed, same symbol."""
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must lie in [0, 1], got {density}")
    rng = np.random.default_rng(seed)
    blocks = {}
    for pi in codomain.labels:
        for rho in domain.labels:
            if rng.uniform() < density:
                shape = (dim(pi), dim(rho))
                blocks[(pi, rho)] = (
                    rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
                ) / np.sqrt(2.0)
    return Symbol(codomain, domain, blocks)


def random_matching_symbol(
    codomain: DualCatalog, domain: DualCatalog, seed: int, pairs: int | None = None
) -> Symbol:
    """Random symbol whose support is a partial matching: every codomain and
    every domain label appears in at most one block."""
    rng = np.random.default_rng(seed)
    n_max = min(len(codomain.labels), len(domain.labels))
    if n_max == 0:
        return Symbol(codomain, domain, {})
    count = int(rng.integers(1, n_max + 1)) if pairs is None else min(pairs, n_max)
    pis = [codomain.labels[i] for i in rng.permutation(len(codomain.labels))[:count]]
    rhos = [domain.labels[i] for i in rng.permutation(len(domain.labels))[:count]]
    blocks = {}
    for pi, rho in zip(pis, rhos):
        shape = (dim(pi), dim(rho))
        blocks[(pi, rho)] = (
            rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        ) / np.sqrt(2.0)
    return Symbol(codomain, domain, blocks)
