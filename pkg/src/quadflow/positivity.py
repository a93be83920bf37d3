"""Strict positivity certificates for complex canonical transformations.

A transform K is strictly positive when the Hermitian matrix
Pi(K) = i (K^* J K - J) is positive definite.  The smallest eigenvalue of
Pi(K) is the certificate margin; flows of this kind quantize to compact
smoothing operators, and every numerical claim downstream (norms, kernels,
compositions) is gated on this margin.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOLERANCES
from .symplectic import CanonicalTransform, QuadraticForm, bar_inverse, flow, standard_j


@dataclass(frozen=True)
class PositivityReport:
    """Outcome of the strict positivity certificate."""

    margin: float
    is_strict: bool
    boundary: bool  # margin within tolerance of zero: do not trust the verdict

    def __str__(self) -> str:
        state = "strict" if self.is_strict else ("boundary" if self.boundary else "not strict")
        return f"positivity margin {self.margin:.6e} ({state})"


def positivity_matrix(k: CanonicalTransform) -> np.ndarray:
    """Hermitian certificate matrix Pi(K) = i (K^* J K - J)."""
    j = standard_j(k.n)
    m = k.matrix
    pi = 1j * (m.conj().T @ j @ m - j)
    # exactly Hermitian in exact arithmetic; symmetrize the float residue
    return (pi + pi.conj().T) / 2.0


def strict_positivity(k: CanonicalTransform) -> PositivityReport:
    """Certify strict positivity of K and cache the margin on the instance."""
    tol = TOLERANCES["positivity"]
    margin = float(np.min(np.linalg.eigvalsh(positivity_matrix(k))))
    k.margin = margin
    return PositivityReport(
        margin=margin,
        is_strict=margin > tol,
        boundary=abs(margin) <= tol,
    )


def mehler_integrable(k: CanonicalTransform) -> bool:
    """Whether the closed-form symbol of the quantized flow is integrable.

    Requires -1 to stay away from Spec K (the cosh factor must not vanish)
    and the Hermitian part of i J (1+K)^{-1} (1-K) to be negative definite
    (Gaussian decay of the symbol).
    """
    m = k.matrix
    eigs = np.linalg.eigvals(m)
    if np.min(np.abs(eigs + 1.0)) <= TOLERANCES["spectral"]:
        return False
    j = standard_j(k.n)
    g = 1j * j @ np.linalg.solve(np.eye(2 * k.n) + m, np.eye(2 * k.n) - m)
    herm = (g + g.conj().T) / 2.0
    return bool(np.max(np.linalg.eigvalsh(herm)) < -TOLERANCES["positivity"])


def compactness_check(q: QuadraticForm) -> bool:
    """True when the time-1 flow of q is strictly positive."""
    return strict_positivity(flow(q, 1.0)).is_strict


def conjugate_pair_transform(k: CanonicalTransform) -> CanonicalTransform:
    """The companion transform conj(K)^{-1} entering norms and decompositions."""
    return bar_inverse(k)
