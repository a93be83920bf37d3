"""Gaussian integral kernels of quantized quadratic flows.

A Gaussian kernel is K(x, y) = amplitude * exp(i phi(x, y)) with phi a
complex quadratic polynomial whose Hessian has positive definite imaginary
part in the nondegenerate case.  The module quantizes Gaussian symbols into
kernels, recovers the generating flow and shift from a kernel (graph
relation of the phase), composes kernels, conjugates them by phase-space
shifts, and applies exact degree-2 polynomial Weyl operators.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import TOLERANCES
from .errors import DegenerateKernelError, QuadflowError, SymbolConvergenceError
from .evolution import EvolutionSpec
from .symbols import GaussianSymbol, PolynomialSymbol, ShiftOp, mehler_symbol, two_sided_shift
from .symplectic import CanonicalTransform, QuadraticForm, canonical_log


@dataclass(eq=False)
class GaussianKernel:
    """Kernel amplitude * exp(i phi(x, y)) with quadratic phase.

    phi(x, y) = x.(pxx x)/2 + x.(pxy y) + y.(pyy y)/2 + lx.x + ly.y + c0.
    pxx and pyy are symmetric; the y-x cross block is pxy transposed.
    """

    amplitude: complex
    pxx: np.ndarray
    pxy: np.ndarray
    pyy: np.ndarray
    lx: np.ndarray
    ly: np.ndarray
    c0: complex = 0.0 + 0.0j

    def __post_init__(self):
        self.pxx = np.asarray(self.pxx, dtype=complex)
        self.pxy = np.asarray(self.pxy, dtype=complex)
        self.pyy = np.asarray(self.pyy, dtype=complex)
        n = self.pxx.shape[0]
        for name in ("pxx", "pyy"):
            m = getattr(self, name)
            if m.shape != (n, n):
                raise ValueError(f"{name} must be {n} x {n}")
            scale = max(np.linalg.norm(m), 1.0)
            if np.linalg.norm(m - m.T) > TOLERANCES["sym"] * scale:
                raise ValueError(f"{name} must be symmetric")
            setattr(self, name, (m + m.T) / 2.0)
        if self.pxy.shape != (n, n):
            raise ValueError(f"pxy must be {n} x {n}")
        self.lx = np.asarray(self.lx, dtype=complex).reshape(n)
        self.ly = np.asarray(self.ly, dtype=complex).reshape(n)
        self.amplitude = complex(self.amplitude)
        self.c0 = complex(self.c0)

    @property
    def n(self) -> int:
        return self.pxx.shape[0]

    def phase_hessian(self) -> np.ndarray:
        return np.block([[self.pxx, self.pxy], [self.pxy.T, self.pyy]])

    def nondegeneracy_margin(self) -> float:
        """Smallest eigenvalue of Im phi''; positive for compact smoothing kernels."""
        return float(np.min(np.linalg.eigvalsh(self.phase_hessian().imag)))

    @property
    def nondegenerate(self) -> bool:
        return self.nondegeneracy_margin() > 0.0

    def phase(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return (
            0.5 * np.einsum("...i,ij,...j->...", x, self.pxx, x)
            + np.einsum("...i,ij,...j->...", x, self.pxy, y)
            + 0.5 * np.einsum("...i,ij,...j->...", y, self.pyy, y)
            + x @ self.lx
            + y @ self.ly
            + self.c0
        )

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Evaluate on points; x, y have shape (..., n)."""
        return self.amplitude * np.exp(1j * self.phase(x, y))


def quantize(sym: GaussianSymbol, formal: bool = False) -> GaussianKernel:
    """Integral kernel of the Weyl operator of a Gaussian symbol.

    The momentum integral over exp(i (x-y).xi) a((x+y)/2, xi) converges only
    when the momentum block of the symbol exponent has negative definite
    real part; that is always enforced.  Certified mode additionally demands
    full Gaussian decay of the symbol; formal=True skips the full-decay
    certification and nothing else.
    """
    n = sym.n
    tol = TOLERANCES["definite"]
    g_xi = sym.g[n:, n:]
    if np.max(np.linalg.eigvalsh(g_xi.real)) >= -tol:
        raise SymbolConvergenceError("momentum-block integral diverges for this symbol")
    if not formal:
        herm = (sym.g + sym.g.conj().T) / 2.0
        if np.max(np.linalg.eigvalsh(herm)) >= -tol:
            raise SymbolConvergenceError(
                "symbol lacks Gaussian decay; pass formal=True to quantize anyway"
            )
    g_ww = sym.g[:n, :n]
    s = -np.linalg.inv(g_xi)
    p = 2.0 * sym.g[n:, :n]
    l_w, l_xi = sym.l[:n], sym.l[n:]
    sp = s @ p
    q1 = g_ww + 0.25 * p.T @ sp
    sym_sp = (sp + sp.T) / 2.0
    alpha = 0.25 * q1 - 0.25 * s + 0.25j * sym_sp
    beta = 0.25 * q1 + 0.25 * s + 0.125j * (sp - sp.T)
    gamma = 0.25 * q1 - 0.25 * s - 0.25j * sym_sp
    s_lxi = s @ l_xi
    base = 0.5 * l_w + 0.25 * p.T @ s_lxi
    px = base + 0.5j * s_lxi
    py = base - 0.5j * s_lxi
    e0 = 0.25 * l_xi @ s_lxi
    # Gaussian momentum integral: pi^{n/2} det(-G_xi)^{-1/2}, principal branch
    det_factor = np.exp(-0.5 * np.trace(scipy.linalg.logm(-g_xi)))
    amplitude = sym.c * (2.0 ** -n) * (np.pi ** (-n / 2.0)) * det_factor
    return GaussianKernel(
        amplitude=amplitude,
        pxx=-2j * alpha,
        pxy=-2j * beta,
        pyy=-2j * gamma,
        lx=-1j * px,
        ly=-1j * py,
        c0=-1j * e0,
    )


def evolution_to_kernel(
    spec: EvolutionSpec | QuadraticForm, formal: bool = False
) -> GaussianKernel:
    """Integral kernel of the quantized flow of a (possibly shifted) generator.

    Accepts an EvolutionSpec (certified at construction) or a bare
    QuadraticForm.  With formal=True a bare form is quantized without any
    positivity certification; the overall sign stays ambiguous either way.
    """
    if isinstance(spec, QuadraticForm):
        if formal:
            return quantize(mehler_symbol(spec, formal=True), formal=True)
        spec = EvolutionSpec(spec)
    sym = mehler_symbol(spec.q, formal=formal)
    if np.any(spec.v != 0):
        sym = two_sided_shift(spec.v, sym)
    return quantize(sym, formal=formal)


def _cross_block_inverse(k: GaussianKernel) -> np.ndarray:
    pyx = k.pxy.T
    scale = np.linalg.norm(k.phase_hessian())
    smin = float(np.min(np.linalg.svd(pyx, compute_uv=False)))
    if smin <= TOLERANCES["degenerate"] * max(scale, 1.0):
        raise DegenerateKernelError(
            f"cross block of the phase is singular (smallest singular value {smin:.3e})"
        )
    return np.linalg.inv(pyx)


def kernel_transform(k: GaussianKernel) -> tuple[CanonicalTransform, np.ndarray]:
    """Canonical transform and affine shift generated by a kernel phase.

    The phase generates the graph relation (y, -phi'_y) -> (x, phi'_x);
    solving it for (x, xi) in terms of (y, eta) yields (x, xi) = K (y, eta)
    + w.  Returns (K, w).
    """
    n = k.n
    pyx_inv = _cross_block_inverse(k)
    top = np.hstack([-pyx_inv @ k.pyy, -pyx_inv])
    bottom = np.hstack([k.pxy - k.pxx @ pyx_inv @ k.pyy, -k.pxx @ pyx_inv])
    mat = np.vstack([top, bottom])
    w = np.concatenate([-pyx_inv @ k.ly, k.lx - k.pxx @ pyx_inv @ k.ly])
    return CanonicalTransform(mat), w


def kernel_shift_vector(k: GaussianKernel) -> np.ndarray:
    """Centered shift v with affine part w = (1 - K) v."""
    trans, w = kernel_transform(k)
    eye = np.eye(2 * k.n)
    try:
        return np.linalg.solve(eye - trans.matrix, w)
    except np.linalg.LinAlgError as exc:
        raise QuadflowError("flow has eigenvalue 1; kernel has no centered shift") from exc


def kernel_to_evolution(k: GaussianKernel) -> tuple[EvolutionSpec, complex]:
    """Recover generator, shift, and scalar factor from a nondegenerate kernel.

    Returns (spec, c) with K = c * kernel(evolution_to_kernel(spec))
    pointwise; c absorbs the sign ambiguity of the closed-form symbol.
    Requires Im phi'' positive definite.
    """
    margin = k.nondegeneracy_margin()
    if margin <= 0.0:
        eigs = np.linalg.eigvalsh(k.phase_hessian().imag)
        raise QuadflowError(
            "kernel is degenerate: Im phi'' has eigenvalues "
            + ", ".join(f"{e:.6g}" for e in eigs)
        )
    trans, w = kernel_transform(k)
    q = canonical_log(trans)
    eye = np.eye(2 * k.n)
    v = np.linalg.solve(eye - trans.matrix, w)
    spec = EvolutionSpec(q, v)
    pipeline = evolution_to_kernel(spec)
    zero = np.zeros(k.n)
    ours, theirs = complex(k(zero, zero)), complex(pipeline(zero, zero))
    if abs(theirs) < 1e-12 * abs(pipeline.amplitude) or abs(ours) < 1e-12 * abs(k.amplitude):
        # probe at the envelope center instead of the origin
        im_hess = k.phase_hessian().imag
        lin = np.concatenate([k.lx, k.ly]).imag
        center = np.linalg.solve(im_hess, -lin)
        x0, y0 = center[: k.n], center[k.n :]
        ours, theirs = complex(k(x0, y0)), complex(pipeline(x0, y0))
    return spec, ours / theirs


def kernel_adjoint(k: GaussianKernel) -> GaussianKernel:
    """Kernel of the adjoint operator, conj(K(y, x))."""
    return GaussianKernel(
        amplitude=np.conj(k.amplitude),
        pxx=-np.conj(k.pyy),
        pxy=-np.conj(k.pxy.T),
        pyy=-np.conj(k.pxx),
        lx=-np.conj(k.ly),
        ly=-np.conj(k.lx),
        c0=-np.conj(k.c0),
    )


def kernel_compose(k1: GaussianKernel, k2: GaussianKernel) -> GaussianKernel:
    """Kernel of the operator product, integrating out the middle variable.

    Requires Im(p1yy + p2xx) positive definite so the middle Gaussian
    integral converges.
    """
    if k1.n != k2.n:
        raise ValueError("kernel dimensions differ")
    n = k1.n
    mid = k1.pyy + k2.pxx
    if np.min(np.linalg.eigvalsh(mid.imag)) <= TOLERANCES["definite"]:
        raise SymbolConvergenceError("middle integral of the composition diverges")
    w = np.linalg.inv(mid)
    lmid = k1.ly + k2.lx
    p1xy, p2yx = k1.pxy, k2.pxy.T
    det_factor = np.exp(-0.5 * np.trace(scipy.linalg.logm(-0.5j * mid)))
    amplitude = k1.amplitude * k2.amplitude * (np.pi ** (n / 2.0)) * det_factor
    return GaussianKernel(
        amplitude=amplitude,
        pxx=k1.pxx - p1xy @ w @ p1xy.T,
        pxy=-p1xy @ w @ k2.pxy,
        pyy=k2.pyy - p2yx @ w @ k2.pxy,
        lx=k1.lx - p1xy @ w @ lmid,
        ly=k2.ly - p2yx @ w @ lmid,
        c0=k1.c0 + k2.c0 - 0.5 * lmid @ w @ lmid,
    )


def kernel_left_shift(s: ShiftOp, k: GaussianKernel) -> GaussianKernel:
    """Kernel of (phase * S_v) composed after the operator of k.

    Valid pointwise for complex v by analytic continuation of the phase.
    """
    n = k.n
    vx, vxi = s.v[:n], s.v[n:]
    return GaussianKernel(
        amplitude=k.amplitude * s.phase,
        pxx=k.pxx,
        pxy=k.pxy,
        pyy=k.pyy,
        lx=k.lx - k.pxx @ vx + vxi,
        ly=k.ly - k.pxy.T @ vx,
        c0=k.c0 + 0.5 * vx @ k.pxx @ vx - k.lx @ vx - 0.5 * vx @ vxi,
    )


def kernel_right_shift(s: ShiftOp, k: GaussianKernel) -> GaussianKernel:
    """Kernel of the operator of k composed after (phase * S_v)."""
    n = k.n
    vx, vxi = s.v[:n], s.v[n:]
    return GaussianKernel(
        amplitude=k.amplitude * s.phase,
        pxx=k.pxx,
        pxy=k.pxy,
        pyy=k.pyy,
        lx=k.lx + k.pxy @ vx,
        ly=k.ly + k.pyy @ vx + vxi,
        c0=k.c0 + 0.5 * vx @ k.pyy @ vx + k.ly @ vx + 0.5 * vx @ vxi,
    )


def real_shift_conjugate(a2: np.ndarray, k: GaussianKernel, a1: np.ndarray) -> GaussianKernel:
    """Kernel of S_{a2} T S_{a1}^* for real shift vectors a1, a2."""
    a1 = np.asarray(a1, dtype=float).reshape(2 * k.n)
    a2 = np.asarray(a2, dtype=float).reshape(2 * k.n)
    # S_{a1}^* = S_{-a1} for real a1
    shifted = kernel_right_shift(ShiftOp(-a1.astype(complex)), k)
    return kernel_left_shift(ShiftOp(a2.astype(complex)), shifted)


def random_nondegenerate(n: int, rng: np.random.Generator, shift_scale: float = 0.5) -> GaussianKernel:
    """Random nondegenerate Gaussian kernel with well-conditioned cross block."""
    for _ in range(64):
        r = rng.standard_normal((2 * n, 2 * n))
        im = r @ r.T / (2 * n) + 0.3 * np.eye(2 * n)
        re = rng.standard_normal((2 * n, 2 * n))
        re = (re + re.T) / 2.0
        hess = re + 1j * im
        pxy = hess[:n, n:]
        if np.min(np.linalg.svd(pxy, compute_uv=False)) > 0.05:
            break
    else:
        raise QuadflowError("failed to draw a well-conditioned kernel")
    l = shift_scale * (rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n))
    amp = np.exp(0.3 * (rng.standard_normal() + 1j * rng.standard_normal()))
    return GaussianKernel(
        amplitude=amp,
        pxx=hess[:n, :n],
        pxy=pxy,
        pyy=hess[n:, n:],
        lx=l[:n],
        ly=l[n:],
        c0=0.0,
    )


@dataclass(eq=False)
class PolynomialKernel:
    """Kernel of a degree-2 Weyl operator multiplied against a Gaussian kernel.

    side="left" is a^w T (polynomial acts on the outgoing variable),
    side="right" is T a^w (polynomial acts on the incoming variable).
    The kernel is the Gaussian kernel times an explicit quadratic bracket.
    """

    base: GaussianKernel
    poly: PolynomialSymbol
    side: str

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        n = self.base.n
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        lam_x, lam_xi = self.poly.lam[:n], self.poly.lam[n:]
        sxx = self.poly.s[:n, :n]
        sxxi = self.poly.s[:n, n:]
        sxixi = self.poly.s[n:, n:]
        k = self.base
        if self.side == "left":
            g = x @ k.pxx.T + y @ k.pxy.T + k.lx  # phi'_x at each point
            out = (
                self.poly.c0
                + x @ lam_x
                + g @ lam_xi
                + np.einsum("...i,ij,...j->...", x, sxx, x)
                + 2.0 * np.einsum("...i,ij,...j->...", x, sxxi, g)
                + np.einsum("...i,ij,...j->...", g, sxixi, g)
                - 1j * (np.trace(sxxi) + np.trace(sxixi @ k.pxx))
            )
        elif self.side == "right":
            gy = x @ k.pxy + y @ k.pyy.T + k.ly  # phi'_y at each point
            out = (
                self.poly.c0
                + y @ lam_x
                - gy @ lam_xi
                + np.einsum("...i,ij,...j->...", y, sxx, y)
                - 2.0 * np.einsum("...i,ij,...j->...", y, sxxi, gy)
                + np.einsum("...i,ij,...j->...", gy, sxixi, gy)
                - 1j * (-np.trace(sxxi) + np.trace(sxixi @ k.pyy))
            )
        else:
            raise ValueError("side must be 'left' or 'right'")
        return out

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.base(x, y) * self.bracket(x, y)


def apply_polynomial(poly: PolynomialSymbol, k: GaussianKernel, side: str) -> PolynomialKernel:
    """Kernel of a^w T (side="left") or T a^w (side="right"), exactly."""
    if poly.n != k.n:
        raise ValueError("dimension mismatch between polynomial and kernel")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    return PolynomialKernel(base=k, poly=poly, side=side)
