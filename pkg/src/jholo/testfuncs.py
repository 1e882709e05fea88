"""Test functions with symbolic Wirtinger gradients.

Each TestFunction carries closed-form grad_z and grad_zbar rows so that
boundary-blowup profiles can be measured against exact derivatives rather
than finite differences (which lose all accuracy near the boundary, exactly
where the profile matters).  The library:

    holo_exp(n)        F = exp(z_n)famously smooth, dbar = 0
    peel(D, beta)      F = conj(z_1) * (-rho)^beta, dbar ~ dist^(beta-1)
    oscillator(D)      F = sin(log(-rho)), bounded with dbar ~ 1/dist

peel is a subsolution-type profile for beta > 1/2 and a hypothesis violator
for small beta; oscillator has no boundary limits along any curve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class TestFunction:
    """Scalar function on a domain with symbolic complex gradients.

    value/grad_z/grad_zbar accept (m, n) complex batches; gradients return
    (m, n) rows.
    """

    value: object
    grad_z: object
    grad_zbar: object
    name: str = ""

    __test__ = False  # keep pytest from collecting this as a test class

    def __call__(self, Z):
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        return np.asarray(self.value(Z), dtype=complex)

    def dbar_row(self, Z, afield=None):
        """Rows of the structure-adapted dbar: F_zbar + F_z A (reduced form;
        A = 0 recovers the standard Wirtinger gradient)."""
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        rows = np.asarray(self.grad_zbar(Z), dtype=complex)
        if afield is not None:
            fz = np.asarray(self.grad_z(Z), dtype=complex)
            mats = afield.eval_batch(Z)
            rows = rows + np.einsum("ij,ijk->ik", fz, mats)
        return rows

    def __add__(self, other):
        def value(Z):
            return self.value(Z) + other.value(Z)

        def grad_z(Z):
            return np.asarray(self.grad_z(Z)) + np.asarray(other.grad_z(Z))

        def grad_zbar(Z):
            return np.asarray(self.grad_zbar(Z)) + np.asarray(other.grad_zbar(Z))

        return TestFunction(value, grad_z, grad_zbar,
                            f"{self.name}+{other.name}")


def holo_exp(n):
    """F = exp(z_n): holomorphic, bounded on {y_n < 0} type domains."""
    en = np.zeros(n, dtype=complex)
    en[n - 1] = 1.0

    def value(Z):
        return np.exp(Z[:, n - 1])

    def grad_z(Z):
        return np.exp(Z[:, n - 1])[:, None] * en[None, :]

    def grad_zbar(Z):
        return np.zeros_like(Z)

    return TestFunction(value, grad_z, grad_zbar, "exp(z_n)")


def peel(D, beta):
    """F = conj(z_1) * (-rho)^beta on {rho < 0}.

    grad_zbar picks up e_1 * (-rho)^beta - beta conj(z_1) (-rho)^(beta-1)
    rho_zbar, so |dbar F| grows like dist^(beta-1) wherever z_1 != 0; the
    vanishing rate at the boundary is governed by beta.  Requires the
    domain to provide symbolic rho_z / rho_zbar.
    """
    if D.rho_z is None or D.rho_zbar is None:
        raise ValueError("peel needs a domain with symbolic complex gradients")
    n = D.n
    e1 = np.zeros(n, dtype=complex)
    e1[0] = 1.0

    def mrho(Z):
        r = -np.asarray(D.rho(Z), dtype=float)
        if np.any(r <= 0):
            raise ValueError("peel evaluated outside the domain")
        return r

    def value(Z):
        return np.conj(Z[:, 0]) * mrho(Z) ** beta

    def grad_z(Z):
        r = mrho(Z)
        rz = np.asarray(D.rho_z(Z), dtype=complex)
        return -beta * (np.conj(Z[:, 0]) * r ** (beta - 1))[:, None] * rz

    def grad_zbar(Z):
        r = mrho(Z)
        rzb = np.asarray(D.rho_zbar(Z), dtype=complex)
        rows = -beta * (np.conj(Z[:, 0]) * r ** (beta - 1))[:, None] * rzb
        rows[:, 0] += r**beta
        return rows

    return TestFunction(value, grad_z, grad_zbar, f"conj(z1)(-rho)^{beta:g}")


def oscillator(D):
    """F = sin(log(-rho)): bounded, oscillates without limit at the boundary,
    with |dbar F| ~ 1/dist (negative control for the profiling gate)."""
    if D.rho_z is None or D.rho_zbar is None:
        raise ValueError("oscillator needs symbolic complex gradients")

    def mrho(Z):
        r = -np.asarray(D.rho(Z), dtype=float)
        if np.any(r <= 0):
            raise ValueError("oscillator evaluated outside the domain")
        return r

    def value(Z):
        return np.sin(np.log(mrho(Z))) + 0j

    def grad_z(Z):
        # d(-rho)/dz = -rho_z, so the chain rule carries a minus sign
        r = mrho(Z)
        rz = np.asarray(D.rho_z(Z), dtype=complex)
        return -(np.cos(np.log(r)) / r)[:, None] * rz

    def grad_zbar(Z):
        r = mrho(Z)
        rzb = np.asarray(D.rho_zbar(Z), dtype=complex)
        return -(np.cos(np.log(r)) / r)[:, None] * rzb

    return TestFunction(value, grad_z, grad_zbar, "sin(log(-rho))")


# --------------------------------------------------------------------------
# Disc polynomials for integral-bound batteries


@dataclass
class DiscPolynomial:
    """g(tau) = sum c[j, k] tau^j conj(tau)^k on a disc, with symbolic dbar
    d g / d conj(tau) = sum k c[j, k] tau^j conj(tau)^(k-1)."""

    coeffs: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)

    def __call__(self, taus):
        taus = np.asarray(taus, dtype=complex)
        out = np.zeros_like(taus)
        for (j, k), c in np.ndenumerate(self.coeffs):
            if c != 0:
                out = out + c * taus**j * np.conj(taus) ** k
        return out

    def dbar(self, taus):
        taus = np.asarray(taus, dtype=complex)
        out = np.zeros_like(taus)
        for (j, k), c in np.ndenumerate(self.coeffs):
            if c != 0 and k > 0:
                out = out + k * c * taus**j * np.conj(taus) ** (k - 1)
        return out


def random_disc_polynomial(rng, degree=3, scale=1.0):
    """Random complex-coefficient polynomial in (tau, conj(tau))."""
    shape = (degree + 1, degree + 1)
    c = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    # taper high orders so sup norms stay comparable across draws
    j, k = np.indices(shape)
    c = c / (1.0 + j + k) ** 2
    return DiscPolynomial(c, f"poly(deg={degree})")
