"""Assembly of weighted block operators in the single-copy coefficient model.

The operator carries one finite block T(pi, rho) = mu(pi) a(pi, rho) nu(rho)
per stored symbol block, mapping the rho coordinate slice of the domain
layout into the pi slice of the codomain layout. Blocks are weighted once at
assembly and cached; application, adjoint, and densification all reuse the
cache, so the adjoint's dense matrix is the exact conjugate transpose.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .duals import DualCatalog, TableWeight, Weight, weight_eval
from .symbols import BlockKey, Symbol

# Largest dense matrix (entry count) that to_dense will materialize.
MAX_DENSE_ENTRIES = 25_000_000


@dataclass
class BlockOperator:
    """Assembled weighted block operator; immutable after construction."""

    symbol: Symbol
    mu: Weight
    nu: Weight
    weighted: dict[BlockKey, np.ndarray] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        _check_table_cover(self.mu, self.symbol.codomain, "mu")
        _check_table_cover(self.nu, self.symbol.domain, "nu")
        weighted = {}
        for (pi, rho), block in self.symbol.blocks.items():
            w = weight_eval(self.mu, pi) * weight_eval(self.nu, rho)
            wb = w * block
            wb.setflags(write=False)
            weighted[(pi, rho)] = wb
        self.weighted = weighted

    @property
    def codomain(self) -> DualCatalog:
        return self.symbol.codomain

    @property
    def domain(self) -> DualCatalog:
        return self.symbol.domain

    @property
    def shape(self) -> tuple[int, int]:
        return (self.codomain.dense_dim, self.domain.dense_dim)

    def apply(self, fhat: np.ndarray) -> np.ndarray:
        """Blockwise matrix-vector product on a dense coefficient vector."""
        fhat = np.asarray(fhat)
        n_out, n_in = self.shape
        if fhat.shape != (n_in,):
            raise ValueError(f"coefficient vector has shape {fhat.shape}, expected ({n_in},)")
        out = np.zeros(n_out, dtype=np.complex128)
        for (pi, rho), block in self.weighted.items():
            out[self.codomain.slice_of(pi)] += block @ fhat[self.domain.slice_of(rho)]
        return out

    def adjoint(self) -> "BlockOperator":
        """Swap weights and conjugate-transpose every block."""
        blocks = {
            (rho, pi): block.conj().T for (pi, rho), block in self.symbol.blocks.items()
        }
        return BlockOperator(
            Symbol(self.symbol.domain, self.symbol.codomain, blocks), self.nu, self.mu
        )

    def to_dense(self) -> np.ndarray:
        n_out, n_in = self.shape
        if n_out * n_in > MAX_DENSE_ENTRIES:
            raise ValueError(
                f"dense matrix would hold {n_out * n_in} entries, over guard "
                f"{MAX_DENSE_ENTRIES}"
            )
        dense = np.zeros((n_out, n_in), dtype=np.complex128)
        for (pi, rho), block in self.weighted.items():
            dense[self.codomain.slice_of(pi), self.domain.slice_of(rho)] = block
        return dense


def _check_table_cover(weight: Weight, catalog: DualCatalog, name: str) -> None:
    if isinstance(weight, TableWeight):
        missing = [l for l in catalog.labels if l not in weight.values]
        if missing:
            raise ValueError(
                f"{name} weight table is missing {len(missing)} catalog labels, "
                f"first: {missing[0].index}"
            )


def assemble(symbol: Symbol, mu: Weight, nu: Weight) -> BlockOperator:
    """Weight every stored block and cache the result."""
    return BlockOperator(symbol, mu, nu)


def write_dense_csv(op: BlockOperator, csv_path, header_path) -> None:
    """Export the dense matrix as CSV rows of interleaved (re, im) pairs,
    with a JSON header carrying the shape and both catalogs."""
    dense = op.to_dense()
    with Path(csv_path).open("w", newline="") as handle:
        writer = csv.writer(handle)
        for row in dense:
            flat = []
            for entry in row:
                flat.append(entry.real)
                flat.append(entry.imag)
            writer.writerow(flat)
    header = {
        "shape": [op.shape[0], op.shape[1]],
        "codomain": op.codomain.to_dict(),
        "domain": op.domain.to_dict(),
    }
    Path(header_path).write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")


def read_dense_csv(csv_path, header_path) -> tuple[np.ndarray, dict]:
    """Inverse of :func:`write_dense_csv`."""
    header = json.loads(Path(header_path).read_text())
    n_out, n_in = header["shape"]
    dense = np.zeros((n_out, n_in), dtype=np.complex128)
    with Path(csv_path).open(newline="") as handle:
        for i, row in enumerate(csv.reader(handle)):
            values = [float(x) for x in row]
            dense[i] = np.asarray(values[0::2]) + 1j * np.asarray(values[1::2])
    return dense, header
