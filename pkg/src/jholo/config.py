"""Flat key=value experiment configuration.

Grammar: one `key = value` per line; blank lines and lines starting with
"#" are ignored.  Keys:

    rho     halfspace | ball | custom-poly:a,b,c   (rho = a*y_n + b*|z|^2 + c)
    A       zero | const:<n^2 entries> | linear:<n^3 entries>
    N       grid resolution (even, >= 16)
    radius  grid disc radius
    alpha   approach-region aperture
    eps     admissible-region exponent
    p       Lebesgue exponent of the Schwarz estimates
    tol     verdict tolerance
    seed    RNG seed
    samples survey sample count
    n       complex dimension

Unknown keys are an error (fail fast beats silent typos).  Matrix entries
are comma-separated complex literals in row-major order; the linear field
A(z)[j,k] = sum_l c[j,k,l] z_l lists c in (j, k, l) order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .almost_complex import ComplexMatrixField
from .boundary_geometry import ball, halfspace, poly_domain


class ConfigError(ValueError):
    pass


_DEFAULTS = {
    "rho": "halfspace",
    "A": "zero",
    "N": "64",
    "radius": "1.0",
    "alpha": "1.0",
    "eps": "0.5",
    "p": "4.0",
    "tol": "1e-6",
    "seed": "0",
    "samples": "64",
    "n": "2",
}


@dataclass
class Config:
    rho: str = "halfspace"
    A: str = "zero"
    N: int = 64
    radius: float = 1.0
    alpha: float = 1.0
    eps: float = 0.5
    p: float = 4.0
    tol: float = 1e-6
    seed: int = 0
    samples: int = 64
    n: int = 2
    raw: dict = field(default_factory=dict)


def parse_config(text):
    """Parse flat key=value text into a string dict (with validation)."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in _DEFAULTS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def _typed(raw):
    merged = dict(_DEFAULTS)
    merged.update(raw)
    try:
        cfg = Config(
            rho=merged["rho"],
            A=merged["A"],
            N=int(merged["N"]),
            radius=float(merged["radius"]),
            alpha=float(merged["alpha"]),
            eps=float(merged["eps"]),
            p=float(merged["p"]),
            tol=float(merged["tol"]),
            seed=int(merged["seed"]),
            samples=int(merged["samples"]),
            n=int(merged["n"]),
            raw=dict(raw),
        )
    except ValueError as exc:
        raise ConfigError(f"bad numeric value: {exc}") from None
    if cfg.N < 16 or cfg.N % 2:
        raise ConfigError(f"N must be even and >= 16, got {cfg.N}")
    for name in ("radius", "alpha", "eps", "tol"):
        if getattr(cfg, name) <= 0:
            raise ConfigError(f"{name} must be positive")
    if cfg.p <= 2:
        raise ConfigError("p must exceed 2")
    if cfg.n < 1:
        raise ConfigError("n must be >= 1")
    return cfg


def load_config(path=None, text=None):
    if text is None:
        if path is None:
            return _typed({})
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    return _typed(parse_config(text))


def _complex_list(spec, expected, what):
    parts = [s for s in spec.split(",") if s.strip()]
    if len(parts) != expected:
        raise ConfigError(f"{what}: expected {expected} entries, got {len(parts)}")
    try:
        return np.array([complex(s.strip().replace("i", "j")) for s in parts])
    except ValueError as exc:
        raise ConfigError(f"{what}: bad complex literal ({exc})") from None


def build_domain(cfg):
    """DefiningDomain from the rho key (A-field attached)."""
    afield = build_afield(cfg)
    spec = cfg.rho
    if spec == "halfspace":
        return halfspace(cfg.n, afield)
    if spec == "ball":
        return ball(cfg.n, afield)
    if spec.startswith("custom-poly"):
        _, _, coeffs = spec.partition(":")
        vals = _complex_list(coeffs, 3, "custom-poly")
        if np.abs(vals.imag).max() > 0:
            raise ConfigError("custom-poly coefficients must be real")
        a, b, c = vals.real
        return poly_domain(cfg.n, a, b, c, afield)
    raise ConfigError(f"unknown rho spec {spec!r}")


def build_afield(cfg):
    """ComplexMatrixField from the A key."""
    spec = cfg.A
    n = cfg.n
    if spec == "zero":
        return ComplexMatrixField.zero(n)
    if spec.startswith("const"):
        _, _, entries = spec.partition(":")
        mat = _complex_list(entries, n * n, "A const").reshape(n, n)
        return ComplexMatrixField.constant(mat)
    if spec.startswith("linear"):
        _, _, entries = spec.partition(":")
        coeffs = _complex_list(entries, n * n * n, "A linear").reshape(n, n, n)

        def fn(Z):
            Z = np.asarray(Z, dtype=complex)
            if Z.ndim == 1:
                return np.einsum("jkl,l->jk", coeffs, Z)
            return np.einsum("jkl,ml->mjk", coeffs, Z)

        # box sized to the working grid so sup-norm gates see realistic values
        box = 4.0 * max(cfg.radius, 1.0) * np.ones(2 * n)
        return ComplexMatrixField(n, fn, -box, box, batch=True, name="linear")
    raise ConfigError(f"unknown A spec {spec!r}")
