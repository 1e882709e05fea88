"""Linear algebra for almost complex structures in complex matrix form.

A real-linear endomorphism of R^{2n} (coordinates interleaved as
x1,y1,...,xn,yn) acts on C^n as v -> P v + Q vbar.  An almost complex
structure J with J^2 = -I and ||J - J_st|| small corresponds to the
conjugate-linear operator

    L = (J_st + J)^{-1} (J_st - J),      L v = A vbar,

and the complex n x n matrix A determines J back via the Cayley-type
inverse J = J_st (I - L)(I + L)^{-1}.  A = 0 exactly when J = J_st.

Under a coordinate change t(z) with complex Jacobian blocks t_z, t_zbar the
matrix transforms as

    A' = (t_z A + t_zbar)(conj(t_z) + conj(t_zbar) A)^{-1},

and for a scalar F the anti-invariant part of dF in the coframe
alpha = dz - A dzbar, alphabar = dzbar - Abar dz has coefficient row

    dbar_J F = F_zbar (I - Abar A)^{-1} + F_z (I - A Abar)^{-1} A,

which vanishes exactly when the first-order system F_zbar + F_z A = 0 holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NormalizationError(ValueError):
    """Chart normalization could not reach the requested smallness."""


def j_std(n):
    """Standard structure: block-diagonal [[0, -1], [1, 0]] per complex axis."""
    J = np.zeros((2 * n, 2 * n))
    for k in range(n):
        J[2 * k, 2 * k + 1] = -1.0
        J[2 * k + 1, 2 * k] = 1.0
    return J


def interleave(z):
    """Complex (..., n) -> real (..., 2n), coordinates x1,y1,...,xn,yn."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def deinterleave(x):
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


def to_real(P, Q):
    """Real 2n x 2n matrix of v -> P v + Q vbar."""
    P = np.asarray(P, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    n = P.shape[0]
    M = np.empty((n, n, 2, 2))
    M[..., 0, 0] = P.real + Q.real
    M[..., 0, 1] = -P.imag + Q.imag
    M[..., 1, 0] = P.imag + Q.imag
    M[..., 1, 1] = P.real - Q.real
    return M.transpose(0, 2, 1, 3).reshape(2 * n, 2 * n)


def to_complex_pair(M):
    """Inverse of to_real: real 2n x 2n -> (P, Q)."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0] // 2
    B = M.reshape(n, 2, n, 2).transpose(0, 2, 1, 3)
    P = (B[..., 0, 0] + B[..., 1, 1]) / 2 + 1j * (B[..., 1, 0] - B[..., 0, 1]) / 2
    Q = (B[..., 0, 0] - B[..., 1, 1]) / 2 + 1j * (B[..., 1, 0] + B[..., 0, 1]) / 2
    return P, Q


def a_from_j(J, tol=1e-8):
    """Complex matrix of an almost complex structure.

    Raises if J fails J^2 = -I or if the derived operator has a detectable
    complex-linear part (it must be purely conjugate-linear).
    """
    J = np.asarray(J, dtype=float)
    n = J.shape[0] // 2
    if not np.allclose(J @ J, -np.eye(2 * n), atol=1e-8):
        raise ValueError("J*J != -I: not an almost complex structure")
    Jst = j_std(n)
    L = np.linalg.solve(Jst + J, Jst - J)
    P, Q = to_complex_pair(L)
    scale = max(1.0, np.linalg.norm(Q))
    if np.linalg.norm(P) > tol * scale:
        raise ValueError(f"operator not conjugate-linear: |P| = {np.linalg.norm(P):.2e}")
    return Q


def j_from_a(A):
    """Structure with given complex matrix; requires spectral norm < 1."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if np.linalg.norm(A, 2) >= 1.0:
        raise ValueError("need ||A|| < 1 for an invertible Cayley transform")
    L = to_real(np.zeros_like(A), A)
    I = np.eye(2 * n)
    return j_std(n) @ (I - L) @ np.linalg.inv(I + L)


def pushforward_a(A, t_z, t_zbar):
    """Transformation rule for the complex matrix under a coordinate change
    with Jacobian blocks t_z = dt/dz, t_zbar = dt/dzbar."""
    A = np.asarray(A, dtype=complex)
    num = t_z @ A + t_zbar
    den = np.conj(t_z) + np.conj(t_zbar) @ A
    return num @ np.linalg.inv(den)


def dbar_j(F_z, F_zbar, A):
    """Anti-holomorphic coefficient row of dF for the structure with matrix A.

    Returns (full, reduced): the full coefficient in the alphabar coframe and
    the reduced row F_zbar + F_z A.  Both vanish together; the full row is
    reduced @ (I - Abar A)^{-1}.
    """
    F_z = np.atleast_1d(np.asarray(F_z, dtype=complex))
    F_zbar = np.atleast_1d(np.asarray(F_zbar, dtype=complex))
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    I = np.eye(n)
    Ab = np.conj(A)
    full = F_zbar @ np.linalg.inv(I - Ab @ A) + F_z @ np.linalg.inv(I - A @ Ab) @ A
    reduced = F_zbar + F_z @ A
    return full, reduced


def form_basis(A):
    """Coefficient matrix of (alpha, alphabar) over (dz, dzbar).

    Rows are the 2n coframe coefficient vectors; the matrix is invertible
    exactly when I - Abar A is, which holds whenever ||A|| < 1.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    I = np.eye(n)
    return np.block([[I, -A], [-np.conj(A), I]])


def decompose_one_form(F_z, F_zbar, A):
    """Coefficients (c10, c01) with dF = c10 alpha + c01 alphabar."""
    row = np.concatenate([np.atleast_1d(F_z), np.atleast_1d(F_zbar)]).astype(complex)
    c = np.linalg.solve(form_basis(A).T, row)
    n = len(c) // 2
    return c[:n], c[n:]


# --------------------------------------------------------------------------
# Point-dependent fields


@dataclass
class ComplexMatrixField:
    """Matrix-valued field z -> A(z) on a box chart in C^n.

    fn maps a single point (n,) to an (n, n) matrix; set batch=True when it
    accepts (m, n) stacks directly.  The chart box is stored as bounds on
    the interleaved real coordinates.
    """

    n: int
    fn: object
    chart_lo: np.ndarray
    chart_hi: np.ndarray
    batch: bool = False
    name: str = ""
    _norm_cache: float | None = field(default=None, repr=False)

    def __post_init__(self):
        self.chart_lo = np.asarray(self.chart_lo, dtype=float)
        self.chart_hi = np.asarray(self.chart_hi, dtype=float)
        if self.chart_lo.shape != (2 * self.n,) or self.chart_hi.shape != (2 * self.n,):
            raise ValueError("chart bounds must have shape (2n,)")
        if np.any(self.chart_hi <= self.chart_lo):
            raise ValueError("empty chart box")

    @classmethod
    def constant(cls, A, chart_lo=None, chart_hi=None, name="const"):
        A = np.asarray(A, dtype=complex)
        n = A.shape[0]
        if chart_lo is None:
            chart_lo = -1e6 * np.ones(2 * n)
            chart_hi = 1e6 * np.ones(2 * n)

        def fn(Z):
            Z = np.asarray(Z, dtype=complex)
            if Z.ndim == 1:
                return A.copy()
            return np.broadcast_to(A, (Z.shape[0], n, n)).copy()

        return cls(n, fn, chart_lo, chart_hi, batch=True, name=name)

    @classmethod
    def zero(cls, n):
        return cls.constant(np.zeros((n, n), dtype=complex), name="zero")

    def eval(self, z):
        z = np.asarray(z, dtype=complex)
        if self.batch:
            return np.asarray(self.fn(z), dtype=complex)
        return np.asarray(self.fn(z), dtype=complex)

    def eval_batch(self, Z):
        Z = np.asarray(Z, dtype=complex)
        if self.batch:
            return np.asarray(self.fn(Z), dtype=complex)
        return np.stack([np.asarray(self.fn(z), dtype=complex) for z in Z])

    def contains(self, Z, slack=1e-9):
        X = interleave(np.atleast_2d(np.asarray(Z, dtype=complex)))
        span = np.maximum(self.chart_hi - self.chart_lo, 1.0)
        return bool(np.all(X >= self.chart_lo - slack * span)
                    and np.all(X <= self.chart_hi + slack * span))

    def sampled_sup_norm(self, per_axis=4):
        """Sup of the spectral norm over a chart lattice (cached)."""
        if self._norm_cache is None:
            axes = [np.linspace(lo, hi, per_axis)
                    for lo, hi in zip(self.chart_lo, self.chart_hi)]
            mesh = np.meshgrid(*axes, indexing="ij")
            pts = deinterleave(np.stack([m.ravel() for m in mesh], axis=-1))
            mats = self.eval_batch(pts)
            self._norm_cache = float(np.linalg.norm(mats, 2, axis=(1, 2)).max())
        return self._norm_cache


@dataclass
class StructureField:
    """Field of real 2n x 2n structures J(z) on a box chart."""

    n: int
    fn: object
    chart_lo: np.ndarray
    chart_hi: np.ndarray
    name: str = ""

    @classmethod
    def standard(cls, n):
        J = j_std(n)
        big = 1e6 * np.ones(2 * n)
        return cls(n, lambda z: J, -big, big, name="standard")

    @classmethod
    def from_a_field(cls, af):
        return cls(af.n, lambda z: j_from_a(af.eval(z)), af.chart_lo,
                   af.chart_hi, name=f"J[{af.name}]")

    def eval(self, z):
        return np.asarray(self.fn(np.asarray(z, dtype=complex)), dtype=float)


@dataclass
class AffineChart:
    """Coordinate change w = S (z - p) with a real-linear S (stored with its
    inverse); complex Jacobian blocks are derived once for pushforwards."""

    p: np.ndarray
    S: np.ndarray
    lam: float = 1.0

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=complex)
        self.S = np.asarray(self.S, dtype=float)
        self.S_inv = np.linalg.inv(self.S)
        self.t_z, self.t_zbar = to_complex_pair(self.S)

    def forward(self, z):
        x = interleave(np.asarray(z, dtype=complex) - self.p)
        return deinterleave(x @ self.S.T)

    def backward(self, w):
        x = interleave(np.asarray(w, dtype=complex))
        return self.p + deinterleave(x @ self.S_inv.T)

    def push_a_field(self, af, chart_lo, chart_hi, name=""):
        """A-field of the pushed-forward structure on the new chart."""

        def fn(W):
            W2 = np.atleast_2d(np.asarray(W, dtype=complex))
            Z = self.backward(W2)
            mats = af.eval_batch(Z)
            out = np.stack([pushforward_a(m, self.t_z, self.t_zbar) for m in mats])
            return out if np.asarray(W).ndim == 2 else out[0]

        return ComplexMatrixField(af.n, fn, chart_lo, chart_hi, batch=True,
                                  name=name or f"push[{af.name}]")


def _adapted_frame(Jp):
    """Columns (u1, J u1, u2, J u2, ...) built greedily from the canonical
    basis; satisfies B^{-1} J B = J_st exactly.  For Jp = J_st it returns I."""
    d = Jp.shape[0]
    n = d // 2
    cols = []
    span = np.zeros((d, 0))
    for _ in range(n):
        # next u: canonical vector with the largest residual off the current
        # J-invariant span (first maximizer wins, so J_st yields the identity)
        best, best_res = None, -1.0
        for k in range(d):
            e = np.zeros(d)
            e[k] = 1.0
            r = e - span @ (span.T @ e)
            if np.linalg.norm(r) > best_res + 1e-12:
                best, best_res = r, np.linalg.norm(r)
        u = best / np.linalg.norm(best)
        cols.extend([u, Jp @ u])
        span, _ = np.linalg.qr(np.column_stack(cols))
    return np.column_stack(cols)


@dataclass
class NormalizedChart:
    chart: AffineChart
    a_field: ComplexMatrixField
    lam: float
    seminorm: float
    frame: np.ndarray


def _cm_seminorm(vals, step, m):
    """Max finite-difference derivative magnitude up to order m on a lattice
    of field samples; vals has shape lattice_shape + (n, n)."""
    naxes = vals.ndim - 2
    semi = float(np.abs(vals).max())
    if m >= 1:
        for ax in range(naxes):
            d = np.diff(vals, axis=ax) / step
            semi = max(semi, float(np.abs(d).max()))
    if m >= 2:
        for ax1 in range(naxes):
            d1 = np.diff(vals, axis=ax1) / step
            for ax2 in range(ax1, naxes):
                d2 = np.diff(d1, axis=ax2) / step
                semi = max(semi, float(np.abs(d2).max()))
    return semi


def normalize_chart(J, p, lam0, m=1, lam_min=1e-4):
    """Translate p to 0, map J(p) to J_st by a linear frame, then shrink by
    dilations until the pushed-forward A-field is lam0-small in C^m on the
    unit box.

    Smoothness order is capped at m <= 2 (finite differences above that are
    too noisy to certify anything).  Raises NormalizationError when no
    dilation above lam_min reaches the target.
    """
    if m > 2:
        raise ValueError("seminorm order capped at m = 2")
    p = np.asarray(p, dtype=complex)
    if not hasattr(J, "eval"):
        box = 1e6 * np.ones(2 * p.size)
        J = StructureField(p.size, J, -box, box, "wrapped")
    n = J.n
    Jp = J.eval(p)
    if not np.allclose(Jp @ Jp, -np.eye(2 * n), atol=1e-8):
        raise ValueError("J(p)^2 != -I")
    B = _adapted_frame(Jp)
    B_inv = np.linalg.inv(B)

    per_axis = 5 if n == 1 else 3
    axes = [np.linspace(-1.0, 1.0, per_axis)] * (2 * n)
    mesh = np.meshgrid(*axes, indexing="ij")
    lattice = np.stack([g.ravel() for g in mesh], axis=-1)
    step = 2.0 / (per_axis - 1)

    lam = 1.0
    while lam >= lam_min:
        def a_at(wr):
            z = p + deinterleave(lam * (B @ wr))
            return a_from_j(B_inv @ J.eval(z) @ B)

        vals = np.stack([a_at(wr) for wr in lattice])
        vals = vals.reshape((per_axis,) * (2 * n) + (n, n))
        semi = _cm_seminorm(vals, step, m)
        if semi <= lam0:
            chart = AffineChart(p, B_inv / lam, lam=lam)

            def fn(W):
                W2 = np.atleast_2d(np.asarray(W, dtype=complex))
                Z = p + deinterleave(lam * (interleave(W2) @ B.T))
                out = np.stack([a_from_j(B_inv @ J.eval(z) @ B) for z in Z])
                return out if np.asarray(W).ndim == 2 else out[0]

            af = ComplexMatrixField(n, fn, -np.ones(2 * n), np.ones(2 * n),
                                    batch=True, name="normalized")
            return NormalizedChart(chart, af, lam, semi, B)
        lam /= 2.0
    raise NormalizationError(
        f"no dilation above {lam_min} reaches C^{m} seminorm <= {lam0}")
