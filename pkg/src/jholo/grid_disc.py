"""Cartesian grid calculus on a closed disc.

Nodes are the points of a square lattice of spacing h = 2*radius/N that fall
inside |zeta| <= radius, each carrying the area of its lattice cell clipped to
the disc.  Wirtinger derivatives are second-order finite differences: centered
at interior nodes, one-sided toward the rim.  L^p norms are plain weighted
sums; only p > 2 (or infinity) is meaningful downstream, so smaller exponents
are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Gauss-Legendre rule used for the 1-d integrals in the clipped cell areas.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _clip_area(x0, x1, y0, y1, radius):
    """Area of the rectangle [x0,x1] x [y0,y1] intersected with the disc.

    Integrates the chord length max(0, min(y1, s(x)) - max(y0, -s(x))) with
    s(x) = sqrt(radius^2 - x^2), splitting at the points where the min/max
    branches switch so each piece is smooth.
    """
    lo, hi = max(x0, -radius), min(x1, radius)
    if lo >= hi:
        return 0.0
    cuts = {lo, hi}
    for yc in (abs(y0), abs(y1)):
        if yc < radius:
            xb = np.sqrt(radius**2 - yc**2)
            for s in (-xb, xb):
                if lo < s < hi:
                    cuts.add(s)
    pts = sorted(cuts)
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        x = 0.5 * (b - a) * _GL_NODES + 0.5 * (a + b)
        s = np.sqrt(np.maximum(radius**2 - x * x, 0.0))
        chord = np.minimum(y1, s) - np.maximum(y0, -s)
        total += 0.5 * (b - a) * np.dot(_GL_WEIGHTS, np.maximum(chord, 0.0))
    return float(total)


@dataclass
class GridDisc:
    """Disc discretization: lattice nodes, clipped-area weights, stencil maps.

    Attributes
    ----------
    radius : float
        Disc radius.
    N : int
        Number of lattice intervals across the diameter (even, >= 16).
    h : float
        Lattice spacing 2*radius/N.
    nodes : (M,) complex ndarray
        Node positions x + iy.
    weights : (M,) float ndarray
        Cell areas; they sum to pi*radius^2 up to quadrature accuracy because
        disc area falling in cells of dropped lattice points is reassigned to
        the nearest kept node.
    inside : (N+1, N+1) bool ndarray
        Lattice mask of kept nodes (axis 0 = x index, axis 1 = y index).
    index : (N+1, N+1) int ndarray
        Node number for kept lattice points, -1 elsewhere.
    """

    radius: float
    N: int
    h: float = field(init=False)
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)
    inside: np.ndarray = field(init=False, repr=False)
    index: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.N % 2 != 0 or self.N < 16:
            # N even keeps the origin on the lattice
            raise ValueError(f"N must be even and >= 16, got {self.N}")
        self.h = 2.0 * self.radius / self.N
        self._build()

    def _build(self):
        R, N, h = self.radius, self.N, self.h
        xs = -R + np.arange(N + 1) * h
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        inside = X * X + Y * Y <= R * R * (1 + 1e-12)

        # Drop nodes with no lattice neighbor inside the disc along some axis:
        # every derivative stencil then has at least a first-order one-sided
        # form, which is exact on affine functions.
        while True:
            nb_x = np.zeros_like(inside)
            nb_x[:-1, :] |= inside[1:, :]
            nb_x[1:, :] |= inside[:-1, :]
            nb_y = np.zeros_like(inside)
            nb_y[:, :-1] |= inside[:, 1:]
            nb_y[:, 1:] |= inside[:, :-1]
            keep = inside & nb_x & nb_y
            if np.array_equal(keep, inside):
                break
            inside = keep

        # closest corner inside disc <=> the full cell is inside
        cx = np.abs(X) + h / 2
        cy = np.abs(Y) + h / 2
        full = cx * cx + cy * cy <= R * R
        W = np.where(inside & full, h * h, 0.0)
        for a, b in zip(*np.nonzero(inside & ~full)):
            W[a, b] = _clip_area(X[a, b] - h / 2, X[a, b] + h / 2,
                                 Y[a, b] - h / 2, Y[a, b] + h / 2, R)

        index = np.full(inside.shape, -1, dtype=np.int64)
        index[inside] = np.arange(int(inside.sum()))

        # Disc area sitting in cells of dropped lattice points goes to the
        # nearest kept node so the weights sum to the exact disc area.
        ncx = np.maximum(np.abs(X) - h / 2, 0.0)
        ncy = np.maximum(np.abs(Y) - h / 2, 0.0)
        orphan = ~inside & (ncx * ncx + ncy * ncy < R * R)
        for a, b in zip(*np.nonzero(orphan)):
            area = _clip_area(X[a, b] - h / 2, X[a, b] + h / 2,
                              Y[a, b] - h / 2, Y[a, b] + h / 2, R)
            if area <= 0.0:
                continue
            a0, a1 = max(a - 3, 0), min(a + 4, N + 1)
            b0, b1 = max(b - 3, 0), min(b + 4, N + 1)
            win = inside[a0:a1, b0:b1]
            if not win.any():
                raise RuntimeError("orphan cell with no kept node nearby")
            wa, wb = np.nonzero(win)
            d2 = (X[a0 + wa, b0 + wb] - X[a, b]) ** 2 + (Y[a0 + wa, b0 + wb] - Y[a, b]) ** 2
            t = int(np.argmin(d2))
            W[a0 + wa[t], b0 + wb[t]] += area

        self.inside = inside
        self.index = index
        self.nodes = (X + 1j * Y)[inside]
        self.weights = W[inside]

    # -- helpers used across the package ------------------------------------

    def interior_mask(self, frac=0.9):
        """Nodes with |zeta| <= frac*radius (the residual-measurement zone)."""
        return np.abs(self.nodes) <= frac * self.radius

    def embed(self, values):
        """Scatter node values onto the (N+1, N+1) lattice (zeros outside)."""
        V = np.zeros(self.inside.shape, dtype=complex)
        V[self.inside] = values
        return V

    def origin_index(self):
        k = self.index[self.N // 2, self.N // 2]
        if k < 0:
            raise RuntimeError("origin node missing from grid")
        return int(k)


@dataclass
class GridFunction:
    """Complex-valued samples on the nodes of a GridDisc."""

    grid: GridDisc
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.grid.nodes.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"{self.grid.nodes.shape} nodes")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid function values must be finite")

    @classmethod
    def from_callable(cls, grid, fn):
        return cls(grid, np.asarray(fn(grid.nodes), dtype=complex))

    def _same_grid(self, other):
        if other.grid is not self.grid and (
                other.grid.N != self.grid.N or other.grid.radius != self.grid.radius):
            raise ValueError("grid functions live on different grids")

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._same_grid(other)
            return GridFunction(self.grid, self.values + other.values)
        return GridFunction(self.grid, self.values + other)

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self._same_grid(other)
            return GridFunction(self.grid, self.values - other.values)
        return GridFunction(self.grid, self.values - other)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._same_grid(other)
            return GridFunction(self.grid, self.values * other.values)
        return GridFunction(self.grid, self.values * other)

    __rmul__ = __mul__

    def conj(self):
        return GridFunction(self.grid, np.conj(self.values))


def _axis_derivative(V, inside, h, axis):
    """Second-order derivative along one lattice axis of a masked 2-d array.

    Centered where both neighbors exist, one-sided (2nd order, falling back
    to 1st order when only one neighbor exists) toward the rim.  All stencils
    are exact on affine functions; centered and the 3-point one-sided forms
    are exact on quadratics.
    """

    def shift(a, k):
        out = np.zeros_like(a)
        src = [slice(None)] * a.ndim
        dst = [slice(None)] * a.ndim
        if k > 0:
            src[axis] = slice(k, None)
            dst[axis] = slice(None, -k)
        else:
            src[axis] = slice(None, k)
            dst[axis] = slice(-k, None)
        out[tuple(dst)] = a[tuple(src)]
        return out

    I = inside
    ip1, im1 = shift(I, 1), shift(I, -1)
    ip2, im2 = shift(I, 2), shift(I, -2)
    vp1, vm1 = shift(V, 1), shift(V, -1)
    vp2, vm2 = shift(V, 2), shift(V, -2)

    d = np.zeros_like(V)
    cen = I & ip1 & im1
    fwd2 = I & ~im1 & ip1 & ip2
    bwd2 = I & ~ip1 & im1 & im2
    fwd1 = I & ~im1 & ip1 & ~ip2
    bwd1 = I & ~ip1 & im1 & ~im2
    d[cen] = (vp1[cen] - vm1[cen]) / (2 * h)
    d[fwd2] = (-3 * V[fwd2] + 4 * vp1[fwd2] - vp2[fwd2]) / (2 * h)
    d[bwd2] = (3 * V[bwd2] - 4 * vm1[bwd2] + vm2[bwd2]) / (2 * h)
    d[fwd1] = (vp1[fwd1] - V[fwd1]) / h
    d[bwd1] = (V[bwd1] - vm1[bwd1]) / h
    covered = cen | fwd2 | bwd2 | fwd1 | bwd1
    if not np.array_equal(covered, I):
        raise RuntimeError("derivative stencil left nodes uncovered")
    return d


def make_grid(radius, N):
    return GridDisc(radius, N)


def wirtinger_d(f):
    """d/dzeta = (d/dx - i d/dy)/2 as a GridFunction."""
    V = f.grid.embed(f.values)
    dx = _axis_derivative(V, f.grid.inside, f.grid.h, 0)
    dy = _axis_derivative(V, f.grid.inside, f.grid.h, 1)
    return GridFunction(f.grid, ((dx - 1j * dy) / 2)[f.grid.inside])


def wirtinger_dbar(f):
    """d/dzetabar = (d/dx + i d/dy)/2 as a GridFunction."""
    V = f.grid.embed(f.values)
    dx = _axis_derivative(V, f.grid.inside, f.grid.h, 0)
    dy = _axis_derivative(V, f.grid.inside, f.grid.h, 1)
    return GridFunction(f.grid, ((dx + 1j * dy) / 2)[f.grid.inside])


def integral(f):
    """Weighted sum approximating the area integral of f over the disc."""
    return complex(np.dot(f.grid.weights, f.values))


def norm(f, p):
    """L^p norm over the disc (p > 2) or the sup norm (p = inf).

    Exponents p <= 2 are rejected: the Schwarz-type machinery downstream is
    only valid for p > 2, and allowing smaller p would silently produce
    estimates with no meaning there.
    """
    if np.isinf(p):
        return float(np.abs(f.values).max())
    if p <= 2:
        raise ValueError(f"norm requires p > 2 or p = inf, got {p}")
    return float(np.dot(f.grid.weights, np.abs(f.values) ** p) ** (1.0 / p))


def interpolate(f, points):
    """Bilinear interpolation of a grid function at complex points.

    Every query must have its four surrounding lattice corners inside the
    disc; this holds comfortably for |point| <= 0.9*radius, which is where
    the callers (disc parameter searches) operate.
    """
    g = f.grid
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    fx = (pts.real + g.radius) / g.h
    fy = (pts.imag + g.radius) / g.h
    ix = np.floor(fx).astype(np.int64)
    iy = np.floor(fy).astype(np.int64)
    ix = np.clip(ix, 0, g.N - 1)
    iy = np.clip(iy, 0, g.N - 1)
    tx = fx - ix
    ty = fy - iy
    corners = np.stack([g.index[ix, iy], g.index[ix + 1, iy],
                        g.index[ix, iy + 1], g.index[ix + 1, iy + 1]])
    if (corners < 0).any():
        raise ValueError("interpolation point too close to the rim")
    v00, v10, v01, v11 = (f.values[c] for c in corners)
    out = (v00 * (1 - tx) * (1 - ty) + v10 * tx * (1 - ty)
           + v01 * (1 - tx) * ty + v11 * tx * ty)
    return out if np.ndim(points) else complex(out[0])
