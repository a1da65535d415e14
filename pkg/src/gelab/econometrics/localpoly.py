"""Kernel-weighted local polynomial regression with robust covariance.

The workhorse behind the discontinuity and kink designs: fit a polynomial
in (x - center) by weighted least squares with kernel weights, on one side
of the center or on all points, and report heteroskedasticity-robust
coefficient covariance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from gelab.econometrics.errors import InsufficientSupport, RankDeficient

KERNELS = ("triangular", "uniform", "epanechnikov")


def kernel_weights(u: np.ndarray, kernel: str) -> np.ndarray:
    """Kernel weight at scaled distance u = (x - center) / bandwidth."""
    a = np.abs(u)
    if kernel == "triangular":
        return np.maximum(0.0, 1.0 - a)
    if kernel == "uniform":
        return (a <= 1.0).astype(float)
    if kernel == "epanechnikov":
        return np.maximum(0.0, 0.75 * (1.0 - a**2))
    raise ValueError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")


@dataclass
class LocalPolyFit:
    coef: np.ndarray  # coefficients on (x-center)^0 .. (x-center)^order
    cov: np.ndarray  # HC1 sandwich covariance
    n: int  # points with positive weight
    center: float
    bandwidth: float
    order: int
    kernel: str
    side: Optional[str]

    @property
    def intercept(self) -> float:
        """Fitted value at the center."""
        return float(self.coef[0])

    @property
    def slope(self) -> float:
        if self.order < 1:
            raise ValueError("order-0 fit has no slope")
        return float(self.coef[1])

    def se(self, j: int) -> float:
        return float(np.sqrt(self.cov[j, j]))


def local_poly_fit(
    x: np.ndarray,
    y: np.ndarray,
    center: float,
    bandwidth: float,
    order: int = 1,
    kernel: str = "triangular",
    side: Optional[str] = None,
    weights: Optional[np.ndarray] = None,
) -> LocalPolyFit:
    """Weighted least squares of y on a polynomial in (x - center).

    side: None for all points, "left" for x < center, "right" for x >= center.
    weights: optional observation weights, multiplied into the kernel weights.
    """
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    if order < 0:
        raise ValueError("order must be non-negative")
    if side not in (None, "left", "right"):
        raise ValueError(f"side must be None, 'left' or 'right', got {side!r}")

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")

    w = kernel_weights((x - center) / bandwidth, kernel)
    if weights is not None:
        w = w * np.asarray(weights, dtype=float)
    if side == "left":
        w = np.where(x < center, w, 0.0)
    elif side == "right":
        w = np.where(x >= center, w, 0.0)

    mask = w > 0
    n = int(mask.sum())
    p = order + 1
    if n < order + 2:
        raise InsufficientSupport(
            f"{n} points with positive weight on side {side!r}; need >= {order + 2}"
        )

    xs, ys, ws = x[mask] - center, y[mask], w[mask]
    X = np.vander(xs, p, increasing=True)
    sw = np.sqrt(ws)
    coef, _, rank, _ = np.linalg.lstsq(X * sw[:, None], ys * sw, rcond=None)
    if rank < p:
        raise RankDeficient(f"design rank {rank} < {p} parameters")

    resid = ys - X @ coef
    xtwx = X.T @ (X * ws[:, None])
    bread = np.linalg.inv(xtwx)
    meat = X.T @ (X * (ws**2 * resid**2)[:, None])
    cov = bread @ meat @ bread
    if n > p:
        cov = cov * n / (n - p)

    return LocalPolyFit(
        coef=coef,
        cov=cov,
        n=n,
        center=center,
        bandwidth=bandwidth,
        order=order,
        kernel=kernel,
        side=side,
    )
