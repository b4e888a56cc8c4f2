"""Dense multi-way array algebra: vectorization, matricization, contracted
products, and CP (sum-of-rank-one) factor representations.

Index convention
----------------
The canonical flat ordering of a D-way array puts the first index fastest:
element (i1, ..., iD) lives at flat position i1 + I1*i2 + I1*I2*i3 + ...
(0-based).  That is numpy's Fortran order, and every operation here
(``vectorize``, ``unfold``, ``khatri_rao``) derives from this single
convention.  Public docstrings speak 1-based where they mirror the usual
mathematical notation; storage arithmetic is 0-based throughout.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

# einsum mode letters; 'z' is reserved for the stacked observation axis
# and 'r' for the component axis in CP contractions.
_MODES = "abcdefghijklm"


def vectorize(a: np.ndarray) -> np.ndarray:
    """Flatten a D-way array into the canonical (first-index-fastest) order."""
    return np.asarray(a).reshape(-1, order="F")


def unfold(a: np.ndarray, mode: int) -> np.ndarray:
    """Mode-``mode`` matricization: rows index the chosen mode, columns run
    over the remaining modes in canonical order (0-based mode index)."""
    a = np.asarray(a)
    if not 0 <= mode < a.ndim:
        raise ValueError(f"mode {mode} out of range for a {a.ndim}-way array")
    return np.moveaxis(a, mode, 0).reshape(a.shape[mode], -1, order="F")


def refold(mat: np.ndarray, mode: int, shape) -> np.ndarray:
    """Inverse of :func:`unfold`: rebuild the array of ``shape`` from its
    mode-``mode`` unfolding."""
    mat = np.asarray(mat)
    shape = tuple(int(s) for s in shape)
    if not 0 <= mode < len(shape):
        raise ValueError(f"mode {mode} out of range for shape {shape}")
    rest = shape[:mode] + shape[mode + 1:]
    if mat.shape != (shape[mode], int(np.prod(rest, dtype=np.int64))):
        raise ValueError(
            f"matrix of shape {mat.shape} does not match unfolding of {shape} "
            f"along mode {mode}"
        )
    return np.moveaxis(mat.reshape((shape[mode],) + rest, order="F"), 0, mode)


def contracted_product(a: np.ndarray, b: np.ndarray, n_modes: int) -> np.ndarray:
    """Contracted tensor product <a, b>_n: sum over the last ``n_modes`` modes
    of ``a`` and the first ``n_modes`` modes of ``b``.

    Result shape is the leading modes of ``a`` followed by the trailing modes
    of ``b``; with two vectors and ``n_modes=1`` this is the inner product.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if n_modes < 0 or n_modes > min(a.ndim, b.ndim):
        raise ValueError("contraction count out of range")
    if a.shape[a.ndim - n_modes:] != b.shape[:n_modes]:
        raise ValueError(
            f"contracted modes mismatch: {a.shape[a.ndim - n_modes:]} vs "
            f"{b.shape[:n_modes]}"
        )
    return np.tensordot(a, b, axes=n_modes)


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Sum of elementwise products of two same-shaped arrays."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.sum(a * b))


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.asarray(a) ** 2)))


def khatri_rao(matrices) -> np.ndarray:
    """Columnwise outer-product flattening of factor matrices.

    Column r of the result is the canonical vectorization of the outer
    product of the r-th columns, so the first matrix's index is fastest.
    A single input is returned unchanged.
    """
    mats = [np.asarray(m) for m in matrices]
    if not mats:
        raise ValueError("need at least one matrix")
    ncols = mats[0].shape[1]
    for m in mats:
        if m.ndim != 2 or m.shape[1] != ncols:
            raise ValueError("all inputs must be matrices with equal column counts")
    out = mats[0]
    for m in mats[1:]:
        out = (out[:, None, :] * m[None, :, :]).reshape(-1, ncols, order="F")
    return out


@dataclass
class CPFactors:
    """Weighted CP representation: sum_r weights[r] * outer(columns r).

    ``factors[d]`` has shape (I_d, R); all factor matrices share the column
    count R = len(weights).
    """

    weights: np.ndarray
    factors: list = field(default_factory=list)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.factors = [np.asarray(f, dtype=float) for f in self.factors]
        if self.weights.ndim != 1 or self.weights.size < 1:
            raise ValueError("weights must be a non-empty vector")
        r = self.weights.size
        if not self.factors:
            raise ValueError("need at least one factor matrix")
        for f in self.factors:
            if f.ndim != 2 or f.shape[1] != r:
                raise ValueError(
                    f"factor of shape {f.shape} incompatible with rank {r}"
                )

    @property
    def rank(self) -> int:
        return self.weights.size

    @property
    def shape(self) -> tuple:
        return tuple(f.shape[0] for f in self.factors)


def cp_compose(f: CPFactors) -> np.ndarray:
    """Dense array represented by the CP factors."""
    nd = len(f.factors)
    subs = ["r"] + [_MODES[d] + "r" for d in range(nd)]
    return np.einsum(
        ",".join(subs) + "->" + _MODES[:nd], f.weights, *f.factors, optimize=True
    )


def canonicalize(f: CPFactors) -> CPFactors:
    """Rescale to the identifiable form: unit-norm factor columns with the
    accumulated scale (and sign) pushed into the weights, components sorted
    by decreasing |weight|.  The composed array is unchanged.

    A zero column zeroes the component's weight and is replaced by a unit
    basis vector (with a warning) so the output still satisfies the
    unit-norm invariant.
    """
    weights = f.weights.copy()
    factors = [m.copy() for m in f.factors]
    for d, m in enumerate(factors):
        norms = np.linalg.norm(m, axis=0)
        for r in range(f.rank):
            if norms[r] == 0.0:
                warnings.warn(
                    f"zero column {r} in factor {d}; component weight set to 0"
                )
                weights[r] = 0.0
                m[0, r] = 1.0
                norms[r] = 1.0
        m /= norms
        # orient each column so its largest-magnitude entry is positive
        signs = np.sign(m[np.argmax(np.abs(m), axis=0), np.arange(f.rank)])
        signs[signs == 0] = 1.0
        m *= signs
        weights *= norms * signs
    order = np.argsort(-np.abs(weights), kind="stable")
    return CPFactors(weights[order], [m[:, order] for m in factors])
