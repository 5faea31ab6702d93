"""Integrals on atomic models, the Alexiewicz norm, and built-in HK integrands."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gauge import Gauge, HKConvergenceError, HKResult, TaggedPartition, hk_integrate
from .measures import ScalarMeasure, VectorMeasure, members, validate_mask
from .spaces import DimensionError, DualCandidateSet

__all__ = [
    "MFunc",
    "as_mfunc",
    "kl_integral_simple",
    "lebesgue_atomic",
    "alexiewicz_norm",
    "alexiewicz_profile",
    "Integrand",
    "BUILTIN_INTEGRANDS",
    "builtin_integrand",
    "hk_integrate",
    "HKResult",
    "HKConvergenceError",
    "Gauge",
    "TaggedPartition",
]


def as_mfunc(f, m: int) -> np.ndarray:
    """Validate per-atom values ``f(t_i)`` of a function on an ``m``-atom model."""
    arr = np.asarray(f, dtype=float)
    if arr.shape != (m,):
        raise DimensionError(f"function has shape {arr.shape}, measure has {m} atoms")
    if not np.all(np.isfinite(arr)):
        raise ValueError("function values must be finite")
    return arr


# Per-atom values are the whole representation; the alias documents intent.
MFunc = np.ndarray


def _mask_vector(A: int, m: int) -> np.ndarray:
    validate_mask(A, m)
    out = np.zeros(m)
    out[members(A)] = 1.0
    return out


def kl_integral_simple(f, mu: VectorMeasure, A: int | None = None) -> np.ndarray:
    """``(KL)∫_A f dμ = Σ_{i∈A} f_i v_i`` for the simple function with values ``f_i``."""
    f = as_mfunc(f, mu.m)
    A = mu.full if A is None else A
    return (f * _mask_vector(A, mu.m)) @ mu.values if mu.m else np.zeros(mu.space.dim)


def lebesgue_atomic(f, nu: ScalarMeasure, A: int | None = None,
                    use_modulus: bool = False) -> float:
    """``∫_A f d|ν|``, or ``∫_A |f| d|ν|`` with ``use_modulus``."""
    m = len(nu.atom_values)
    f = as_mfunc(f, m)
    A = (1 << m) - 1 if A is None else A
    g = np.abs(f) if use_modulus else f
    return float(math.fsum(g * nu.masses * _mask_vector(A, m)))


def alexiewicz_profile(f, mu: VectorMeasure, D: DualCandidateSet) -> np.ndarray:
    """Per-candidate ``sup_A |Σ_{i∈A} f_i |<x'_h, v_i>||``.

    The supremum over sets splits into the positive and negative parts of
    the products ``f_i |<x', v_i>|``: the best ``A`` keeps all terms of one
    sign.
    """
    f = as_mfunc(f, mu.m)
    W = np.abs(D.members @ mu.values.T)
    terms = W * f[None, :]
    pos = np.where(terms > 0, terms, 0.0).sum(axis=1)
    neg = -np.where(terms < 0, terms, 0.0).sum(axis=1)
    return np.maximum(pos, neg)


def alexiewicz_norm(f, mu: VectorMeasure, D: DualCandidateSet) -> float:
    """Alexiewicz norm with the dual-ball supremum taken over ``D``."""
    if mu.m == 0:
        return 0.0
    return float(alexiewicz_profile(f, mu, D).max())


@dataclass(frozen=True)
class Integrand:
    name: str
    f: Callable[[np.ndarray], np.ndarray]
    antiderivative: Callable[[float], float]
    singularities: tuple[float, ...] = ()
    description: str = ""

    def exact(self, a: float, b: float) -> float:
        return self.antiderivative(b) - self.antiderivative(a)

    def integrate(self, a: float, b: float, tol: float, **kwargs) -> HKResult:
        return hk_integrate(self.f, a, b, tol, self.singularities, **kwargs)


def _poly(coeffs) -> Integrand:
    c = [float(x) for x in coeffs] or [0.0]
    anti = [0.0] + [ck / (k + 1) for k, ck in enumerate(c)]

    def f(x):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), c)

    def F(x):
        return float(np.polynomial.polynomial.polyval(x, anti))

    return Integrand("poly", f, F, (), f"polynomial with coefficients {c} (constant first)")


def _sqrt_singular(power: float = -0.5) -> Integrand:
    if not -1 < power < 0:
        raise ValueError("sqrt_singular power must lie in (-1, 0)")

    def f(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(x > 0, np.abs(x) ** power, 0.0)

    def F(x):
        return max(x, 0.0) ** (power + 1) / (power + 1)

    return Integrand("sqrt_singular", f, F, (0.0,), f"x^{power} on x > 0, singular at 0")


def _oscillatory_derivative() -> Integrand:
    def f(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / (x * x)
            out = 2 * x * np.sin(inv) - 2 / x * np.cos(inv)
        return np.where(x != 0, out, 0.0)

    def F(x):
        return 0.0 if x == 0 else x * x * math.sin(1.0 / (x * x))

    return Integrand(
        "oscillatory_derivative", f, F, (0.0,),
        "derivative of x^2 sin(1/x^2), 0 at 0; HK but not Lebesgue integrable near 0",
    )


BUILTIN_INTEGRANDS = {
    "poly": _poly,
    "sqrt_singular": _sqrt_singular,
    "oscillatory_derivative": _oscillatory_derivative,
}


def builtin_integrand(name: str, *params: float) -> Integrand:
    """Look up a named integrand; ``poly`` takes coefficients, constant term first."""
    try:
        factory = BUILTIN_INTEGRANDS[name]
    except KeyError:
        raise KeyError(
            f"unknown integrand {name!r}; choose from {sorted(BUILTIN_INTEGRANDS)}"
        ) from None
    if name == "poly":
        return factory(params or (0.0, 2.0))
    return factory(*params)
