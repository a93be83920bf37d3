"""Exact operator norms and shift decompositions for quantized quadratic flows.

The operator obtained by quantizing a strictly positive flow K = flow(q, 1)
is compact, and its norm is determined by the spectrum of conj(K)^{-1} K:
eigenvalues come in pairs (mu, 1/mu) with mu in (0, 1), and the norm equals
the product of mu_j^{1/4}.  Adding a phase-space shift v to the generator
multiplies the norm by an explicitly computable growth factor; decompose()
returns the two real shift centers, the scalar phase, and the norm of the
shifted evolution.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import TOLERANCES
from .errors import (
    BoundarySpectrumError,
    CompositionClassError,
    PositivityError,
    QuadflowError,
)
from .positivity import PositivityReport, strict_positivity
from .symplectic import (
    CanonicalTransform,
    QuadraticForm,
    bar_inverse,
    canonical_log,
    flow,
    inverse,
    standard_j,
    symplectic_form,
)


@dataclass(eq=False)
class EvolutionSpec:
    """Quadratic generator plus complex phase-space shift, q(z - v).

    Construction runs the strict positivity certificate on the time-1 flow
    and rejects generators outside the compact class.
    """

    q: QuadraticForm
    v: np.ndarray | None = None
    transform: CanonicalTransform = field(init=False)
    report: PositivityReport = field(init=False)

    def __post_init__(self):
        n = self.q.n
        if self.v is None:
            self.v = np.zeros(2 * n, dtype=complex)
        self.v = np.asarray(self.v, dtype=complex).reshape(2 * n)
        self.transform = flow(self.q, 1.0)
        self.report = strict_positivity(self.transform)
        if not self.report.is_strict:
            raise PositivityError(
                f"flow is not strictly positive: {self.report}", margin=self.report.margin
            )

    @property
    def n(self) -> int:
        return self.q.n


def eigenvalue_pairing(k: CanonicalTransform) -> np.ndarray:
    """Contraction rates mu_j in (0, 1) from the spectrum of conj(K)^{-1} K.

    Eigenvalues are sorted by modulus and the k-th smallest is paired with
    the k-th largest; each pair must multiply to 1 within
    TOLERANCES["pairing"].  Eigenvalues whose modulus sits within
    TOLERANCES["boundary"] of the unit circle cannot be assigned to a pair
    side and raise BoundarySpectrumError.
    """
    b = bar_inverse(k).matrix @ k.matrix
    eigs = np.linalg.eigvals(b)
    order = np.argsort(np.abs(eigs))
    eigs = eigs[order]
    if np.any(np.abs(np.log(np.abs(eigs))) < TOLERANCES["boundary"]):
        raise BoundarySpectrumError(
            "eigenvalue within boundary tolerance of the unit circle; "
            "pairing is unreliable"
        )
    n = k.n
    small, large = eigs[:n], eigs[2 * n - 1 : n - 1 : -1]
    products = small * large
    if np.max(np.abs(products - 1.0)) > TOLERANCES["pairing"]:
        raise QuadflowError(
            f"eigenvalue pairing failed: worst product residual "
            f"{np.max(np.abs(products - 1.0)):.3e}"
        )
    if np.max(np.abs(small.imag)) > 1e-8 * np.max(np.abs(small)):
        raise QuadflowError("contraction rates are not numerically real")
    mu = np.sort(small.real)
    if np.any(mu <= 0.0):
        raise QuadflowError("contraction rates must be positive")
    return mu


def norm_quadratic(q: QuadraticForm) -> float:
    """Exact operator norm of the quantized time-1 flow of q.

    Raises PositivityError when the flow is not strictly positive.
    """
    spec = EvolutionSpec(q)
    mu = eigenvalue_pairing(spec.transform)
    return float(np.prod(mu**0.25))


def a_matrix(k: CanonicalTransform) -> np.ndarray:
    """Real matrix A mapping Im v to the gap a2 - a1 between shift centers.

    A = (Im K2)^{-1} (1 - Re K2) + (Im K1)^{-1} (1 - Re K1) with
    K1 = K and K2 = conj(K)^{-1}.
    """
    out = np.zeros((2 * k.n, 2 * k.n))
    for mat in (k.matrix, bar_inverse(k).matrix):
        out += np.linalg.solve(mat.imag, np.eye(2 * k.n) - mat.real)
    return out


@dataclass(eq=False)
class DecompositionData:
    """Singular-type decomposition of a shifted evolution.

    The quantized evolution factors as phase * (shift by a2) * (quantized
    unshifted flow) * (adjoint shift by a1), with real centers a1, a2 and
    |phase| carrying the norm growth caused by Im v.
    """

    mu: np.ndarray       # contraction rates, ascending, in (0, 1)
    a1: np.ndarray       # real right shift center
    a2: np.ndarray       # real left shift center
    phase: complex       # scalar factor; |phase| = growth factor
    norm: float          # operator norm of the shifted evolution
    a: np.ndarray        # the matrix with a2 - a1 = A Im v
    imag_residue: float  # largest |Im| discarded when casting a1, a2 real


def decompose(spec: EvolutionSpec) -> DecompositionData:
    """Compute centers, phase, contraction rates, and norm for q(z - v)."""
    k = spec.transform
    k2m = bar_inverse(k).matrix
    km = k.matrix
    eye = np.eye(2 * spec.n)
    v = spec.v
    # complex solves so the cast to real vectors is an observable check
    a1 = v.real + np.linalg.solve(km.imag.astype(complex), (km.real - eye) @ v.imag)
    a2 = v.real - np.linalg.solve(k2m.imag.astype(complex), (k2m.real - eye) @ v.imag)
    residue = float(max(np.max(np.abs(a1.imag)), np.max(np.abs(a2.imag))))
    scale = 1.0 + float(max(np.max(np.abs(a1)), np.max(np.abs(a2))))
    if residue > 1e-9 * scale:
        raise QuadflowError(f"shift centers have imaginary residue {residue:.3e}")
    a1, a2 = a1.real, a2.real
    amat = a_matrix(k)
    phase = np.exp(0.5j * symplectic_form(v, (a2 - a1).astype(complex)))
    mu = eigenvalue_pairing(k)
    norm = float(abs(phase) * np.prod(mu**0.25))
    return DecompositionData(
        mu=mu, a1=a1, a2=a2, phase=complex(phase), norm=norm, a=amat,
        imag_residue=residue,
    )


def norm_shifted(spec: EvolutionSpec) -> float:
    """Exact operator norm of the quantized flow with generator q(z - v)."""
    return decompose(spec).norm


@dataclass(frozen=True)
class CenterSample:
    """One record of a center sweep; ok=False marks a failed certificate."""

    param: float
    a1: np.ndarray | None
    a2: np.ndarray | None
    ok: bool


def center_path(
    items: Iterable[tuple[float, QuadraticForm, Sequence[complex]]]
) -> list[CenterSample]:
    """Decompose a parametrized family, flagging members that lose positivity.

    Each item is (parameter, generator, shift).  Failures are recorded, not
    dropped, so a sweep keeps its full index structure.
    """
    out: list[CenterSample] = []
    for param, q, v in items:
        try:
            data = decompose(EvolutionSpec(q, np.asarray(v, dtype=complex)))
        except (PositivityError, BoundarySpectrumError, QuadflowError):
            out.append(CenterSample(param=param, a1=None, a2=None, ok=False))
            continue
        out.append(CenterSample(param=param, a1=data.a1, a2=data.a2, ok=True))
    return out


def critical_time(theta: float) -> float:
    """Largest imaginary time magnitude below which rotated-oscillator flows
    stay compact for every real time.

    Returns the negative critical value t2_c(theta) = -arctanh(|sin theta|);
    requires |theta| < pi/2.
    """
    if abs(theta) >= np.pi / 2:
        raise ValueError("critical time requires |theta| < pi/2")
    s = abs(np.sin(theta))
    return float(-np.arctanh(s))


@dataclass(eq=False)
class CompositionResult:
    """Composite of two shifted evolutions as a single shifted evolution.

    The product of the quantized evolutions equals
    sign * factor * (quantized evolution of spec), with an overall sign that
    the closed-form amplitude leaves unresolved; sign_ambiguous is always
    True and consumers must pin the sign against a reference value.
    """

    spec: EvolutionSpec
    factor: complex
    sign_ambiguous: bool = True


def compose_evolutions(s1: EvolutionSpec, s2: EvolutionSpec) -> CompositionResult:
    """Composition law: generator, shift, and scalar factor of a product.

    The composed flow is K3 = K1 K2.  Raises CompositionClassError when the
    product leaves the strictly positive class (the composite then has no
    certified generator here).
    """
    if s1.n != s2.n:
        raise ValueError("evolution dimensions differ")
    k1, k2 = s1.transform, s2.transform
    k3m = k1.matrix @ k2.matrix
    eye = np.eye(2 * s1.n)
    k3 = CanonicalTransform(k3m)
    report = strict_positivity(k3)
    if not report.is_strict:
        raise CompositionClassError(
            f"composed flow leaves the strictly positive class: {report}"
        )
    w1 = (eye - k1.matrix) @ s1.v
    u2 = (eye - inverse(k2).matrix) @ s2.v
    v3 = np.linalg.solve(eye - k3m, w1) + np.linalg.solve(eye - inverse(k3).matrix, u2)
    factor = np.exp(
        0.5j * (symplectic_form(s1.v - v3, w1) + symplectic_form(u2, s2.v - v3))
    )
    q3 = canonical_log(k3)
    return CompositionResult(spec=EvolutionSpec(q3, v3), factor=complex(factor))


def _mehler_williamson(k: CanonicalTransform) -> np.ndarray:
    """Williamson invariants of the real positive form behind a self-paired K.

    For strictly positive K with conj(K)^{-1} = K the quadratic form
    q1(z) = sigma(z, -i (1+K)^{-1} (1-K) z) is real positive definite; its
    Hamilton matrix is 2 (-i) (1+K)^{-1} (1-K) with spectrum {+-i mu_j}.
    Returns the mu_j, ascending.
    """
    m = k.matrix
    eye = np.eye(2 * k.n)
    h1 = -2j * np.linalg.solve(eye + m, eye - m)
    eigs = np.linalg.eigvals(h1)
    if np.max(np.abs(eigs.real)) > 1e-8 * (1.0 + np.max(np.abs(eigs))):
        raise QuadflowError("reduced spectrum is not purely imaginary")
    mu = np.sort(eigs.imag[eigs.imag > 0])
    if mu.shape[0] != k.n:
        raise QuadflowError("reduced spectrum does not split into +-i mu pairs")
    return mu


def real_log_exists(k: CanonicalTransform) -> bool:
    """Whether K admits a generator q with -i q real valued.

    Such a generator exists exactly when the quantized evolution can be
    written as the exponential of a real symmetric operator, i.e. when the
    quadratic expectation values of the evolution are sign definite.
    Preconditions: K strictly positive and conj(K)^{-1} = K.

    The test reduces K by a real canonical transform to oscillator blocks
    with invariants mu_j > 0; the block generators are real multiples of the
    harmonic oscillator exactly when arctanh(mu_j / 2) is real, that is,
    mu_j in (0, 2).  Branch shifts of the logarithm flip the sign of the
    evolution but never restore realness for mu_j > 2.
    """
    report = strict_positivity(k)
    if not report.is_strict:
        raise PositivityError(f"precondition failed: {report}", margin=report.margin)
    sym_gap = np.linalg.norm(bar_inverse(k).matrix - k.matrix)
    if sym_gap > 1e-8 * (1.0 + np.linalg.norm(k.matrix)):
        raise ValueError("precondition failed: conj(K)^{-1} != K")
    mu = _mehler_williamson(k)
    return bool(np.all(mu > 0.0) and np.all(mu < 2.0))
