"""Gaussian radial basis layer over the two-sided velocity state.

Each unit k holds a center eps_k in velocity space and a width alpha_k:

    Phi_k(V) = exp(-||V - eps_k||^2 / alpha_k^2)

Only the basis vector and its norm feed the controller; no output weights
are trained anywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RbfNetwork:
    centers: np.ndarray  # (L, 2), velocity-space points
    widths: np.ndarray   # (L,), all > 0

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=float)
        widths = np.asarray(self.widths, dtype=float)
        if centers.ndim != 2 or centers.shape[1] != 2 or centers.shape[0] < 1:
            raise ValueError("centers must have shape (L, 2) with L >= 1")
        if widths.shape != (centers.shape[0],):
            raise ValueError("widths must have shape (L,)")
        if not np.all(np.isfinite(centers)) or not np.all(np.isfinite(widths)):
            raise ValueError("centers and widths must be finite")
        if np.any(widths <= 0):
            raise ValueError("widths must be > 0")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "widths", widths)

    @property
    def neuron_count(self) -> int:
        return self.centers.shape[0]


def init_centers(count: int, rng, scale: float = 1.0, width: float = 0.13) -> RbfNetwork:
    """Draw centers uniformly from [-scale, scale]^2; one shared width.

    Centers are frozen after this call — nothing later in the pipeline
    moves them.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if scale <= 0 or width <= 0:
        raise ValueError("scale and width must be > 0")
    raw = np.asarray(rng.random((count, 2)), dtype=float)
    centers = scale * (2.0 * raw - 1.0)
    return RbfNetwork(centers=centers, widths=np.full(count, float(width)))


def basis_eval(net: RbfNetwork, v) -> np.ndarray:
    """Basis vector Phi(V) for a velocity pair v = (v_r, v_l)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (2,):
        raise ValueError("v must be a length-2 velocity pair")
    if not np.all(np.isfinite(v)):
        raise ValueError("v must be finite")
    d2 = ((net.centers - v) ** 2).sum(axis=1)
    return np.exp(-d2 / net.widths**2)


def basis_gradient(net: RbfNetwork, v) -> np.ndarray:
    """d Phi_k / d V, shape (L, 2).  Analytic counterpart for the FD check."""
    v = np.asarray(v, dtype=float)
    phi = basis_eval(net, v)
    # dPhi_k/dV = Phi_k * (-2 (V - eps_k) / alpha_k^2)
    diff = v - net.centers
    return (-2.0 * diff / (net.widths**2)[:, None]) * phi[:, None]


def basis_norm(net: RbfNetwork, v) -> float:
    """Euclidean norm of the basis vector; bounded by sqrt(L)."""
    return float(np.linalg.norm(basis_eval(net, v)))
