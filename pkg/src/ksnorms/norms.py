"""L^p, Kuelbs-Steadman and weak-topology Kuelbs-Steadman norms on atomic models.

Every dual-ball supremum is a maximum over a finite candidate set ``D``.
All the inequalities between these norms hold for each functional
separately, so they survive that replacement exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .integration import alexiewicz_profile, as_mfunc
from .measures import DenseFamily, VectorMeasure, semivariation
from .spaces import DualCandidateSet

__all__ = [
    "NormResult",
    "check_p",
    "weighted_power_bound",
    "weighted_minkowski",
    "set_integrals",
    "lp_norm",
    "ksp_norm",
    "ksp_weak_norm",
    "ks2_inner",
    "hkl_norm",
    "embedding_constant",
    "meet",
    "join",
]

INF = math.inf
_SUM_SLACK = 1e-12


def check_p(p) -> float:
    """Parse an exponent in ``[1, ∞]``; accepts ``"inf"``."""
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise ValueError(f"exponent must be a number or 'inf', got {p!r}") from None
    if math.isnan(p) or p < 1:
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    return p


@dataclass(frozen=True)
class NormResult:
    value: float
    lower_bound_certified: bool
    series_tail_bound: float
    candidate_provenance: str
    family: str = ""
    p: float = 1.0
    per_candidate: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def upper(self) -> float:
        """Upper end of the bracket for the untruncated candidate-set value."""
        return self.value + self.series_tail_bound


def _power_mean(a: np.ndarray, weights: np.ndarray, p: float) -> np.ndarray:
    """``(Σ_k w_k a_k^p)^(1/p)`` along the last axis, or ``max_k a_k`` for p = ∞.

    Values are scaled by their maximum first so large ``p`` cannot overflow.
    """
    a = np.abs(a)
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1])
    top = a.max(axis=-1)
    if p == INF:
        return top
    safe = np.where(top > 0, top, 1.0)
    ratio = a / safe[..., None]
    return top * ((ratio**p) @ weights) ** (1.0 / p)


def _check_weights(w, name: str) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError(f"{name} must be a non-empty sequence")
    if np.any(w < 0):
        raise ValueError(f"{name} must be nonnegative")
    if abs(w.sum() - 1.0) > _SUM_SLACK:
        raise ValueError(f"{name} must sum to 1 within {_SUM_SLACK}, got {w.sum()!r}")
    return w


def weighted_power_bound(a, eta, p) -> tuple[float, float]:
    """Return ``((Σ η_k a_k^p)^(1/p), sup_k a_k)``; the first never exceeds the second."""
    p = check_p(p)
    eta = _check_weights(eta, "eta")
    a = np.asarray(a, dtype=float)
    if a.shape != eta.shape:
        raise ValueError(f"a has shape {a.shape}, eta has shape {eta.shape}")
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise ValueError("a must be finite and nonnegative")
    return float(_power_mean(a, eta, p)), float(a.max())


def weighted_minkowski(b, c, eta, omega, p) -> tuple[float, float, float]:
    """The three members of the doubly weighted Minkowski chain.

    ``b`` and ``c`` are ``(K, H)`` arrays indexed by set ``k`` and functional
    ``h``.  Returns ``(N(b + c), N(|b| + |c|), N(b) + N(c))`` where
    ``N(x) = [Σ_h ω_h Σ_k η_k |x_{k,h}|^p]^(1/p)``; each is at most the next.
    A single column with ``ω = (1,)`` is the singly indexed version.
    """
    p = check_p(p)
    if p == INF:
        raise ValueError("the weighted Minkowski chain is stated for finite p")
    eta = _check_weights(eta, "eta")
    omega = _check_weights(omega, "omega")
    b = np.asarray(b, dtype=float).reshape(eta.size, omega.size)
    c = np.asarray(c, dtype=float).reshape(eta.size, omega.size)
    joint = np.outer(eta, omega).ravel()

    def N(x):
        return float(_power_mean(x.ravel(), joint, p))

    return N(b + c), N(np.abs(b) + np.abs(c)), N(b) + N(c)


def set_integrals(f, mu: VectorMeasure, fam: DenseFamily, D: DualCandidateSet,
                  use_modulus: bool = False) -> np.ndarray:
    """``(H, K)`` matrix of ``∫_{B_k} f d|x'_h μ|`` (or of ``|f|``)."""
    f = as_mfunc(f, mu.m)
    if fam.m != mu.m:
        raise ValueError(f"family is over {fam.m} atoms, measure has {mu.m}")
    g = np.abs(f) if use_modulus else f
    W = np.abs(D.members @ mu.values.T)
    return (W * g[None, :]) @ fam.indicator().T


def _attains_convex_sup(D: DualCandidateSet) -> bool:
    """Does ``D`` attain the ball supremum of every convex even objective?"""
    if D.is_extreme_complete:
        return True
    return D.space.dim == 1 and bool(np.any(np.abs(D.members) == 1.0))


def _total_mass_bound(f: np.ndarray, mu: VectorMeasure) -> float:
    """Bound on ``∫_T |f| d|x'μ|`` valid for every ``x'`` in the dual ball."""
    return float(np.abs(f) @ mu.atom_norms()) if mu.m else 0.0


def lp_norm(f, mu: VectorMeasure, p, D: DualCandidateSet) -> NormResult:
    p = check_p(p)
    f = as_mfunc(f, mu.m)
    W = np.abs(D.members @ mu.values.T)
    if p == INF:
        charged = np.any(W > 0, axis=0)
        per = np.array([np.abs(f)[W[h] > 0].max(initial=0.0) for h in range(len(D))])
        value = float(np.abs(f)[charged].max(initial=0.0))
        exact = D.separating or _attains_convex_sup(D)
    else:
        top = float(np.abs(f).max(initial=0.0))
        safe = top if top > 0 else 1.0
        per = top * (W @ (np.abs(f) / safe) ** p) ** (1.0 / p)
        value = float(per.max(initial=0.0))
        exact = _attains_convex_sup(D)
    return NormResult(value, not exact, 0.0, D.describe(), "lp", p, per)


def _truncate(fam: DenseFamily, max_sets: int | None) -> tuple[np.ndarray, float]:
    K = len(fam) if max_sets is None else min(int(max_sets), len(fam))
    if K < 1:
        raise ValueError("max_sets must keep at least one set")
    return fam.weights[:K], float(math.fsum(fam.weights[K:]))


def ksp_norm(f, mu: VectorMeasure, p, fam: DenseFamily, D: DualCandidateSet,
             use_modulus: bool = False, *, max_sets: int | None = None) -> NormResult:
    """``KS^p[μ]`` norm: maximum over ``D`` of the ``η``-weighted ``ℓ^p`` mean of set integrals.

    With ``max_sets`` only the first sets of the family are summed and
    ``series_tail_bound`` certifies what the rest can add.
    """
    p = check_p(p)
    f = as_mfunc(f, mu.m)
    eta, tail = _truncate(fam, max_sets)
    a = np.abs(set_integrals(f, mu, fam, D, use_modulus))[:, : eta.size]
    per = _power_mean(a, eta, p)
    value = float(per.max())
    convex = use_modulus or bool(np.all(f >= 0)) or bool(np.all(f <= 0))
    exact = convex and _attains_convex_sup(D)
    tail_bound = 0.0
    if tail > 0:
        reach = _total_mass_bound(f, mu)
        tail_bound = max(reach - value, 0.0) if p == INF else reach * tail ** (1.0 / p)
    return NormResult(value, not exact, tail_bound, D.describe(), "ks", p, per)


def _require_weights(D: DualCandidateSet) -> np.ndarray:
    if D.weights is None:
        raise ValueError("the weak-topology norm needs candidate weights ω_h")
    return D.weights


def ksp_weak_norm(f, mu: VectorMeasure, p, fam: DenseFamily, D: DualCandidateSet, *,
                  max_sets: int | None = None,
                  max_candidates: int | None = None) -> NormResult:
    """``KS^p[wτμ]`` norm: ``ω``-weighted sum over ``D`` instead of a maximum."""
    p = check_p(p)
    omega_all = _require_weights(D)
    f = as_mfunc(f, mu.m)
    eta, set_tail = _truncate(fam, max_sets)
    H = len(D) if max_candidates is None else min(int(max_candidates), len(D))
    if H < 1:
        raise ValueError("max_candidates must keep at least one candidate")
    omega = omega_all[:H]
    omega_tail = float(math.fsum(omega_all[H:]))
    a = np.abs(set_integrals(f, mu, fam, D))[:H, : eta.size]
    if p == INF:
        per = a.max(axis=1)
        value = float(per.max())
    else:
        per = _power_mean(a, eta, p)
        top = float(per.max())
        safe = top if top > 0 else 1.0
        value = top * float(omega @ (per / safe) ** p) ** (1.0 / p)
    tail_bound = 0.0
    dropped = omega_tail + float(omega.sum()) * set_tail
    if dropped > 0:
        reach = _total_mass_bound(f, mu)
        tail_bound = max(reach - value, 0.0) if p == INF else reach * dropped ** (1.0 / p)
    return NormResult(value, False, tail_bound, D.describe(), "ksw", p, per)


def ks2_inner(f, g, mu: VectorMeasure, fam: DenseFamily, D: DualCandidateSet) -> float:
    """Inner product whose norm is ``KS^2[wτμ]``, with the set weights taken as ``η_k``."""
    omega = _require_weights(D)
    If = set_integrals(f, mu, fam, D)
    Ig = set_integrals(g, mu, fam, D)
    return float(omega @ ((If * Ig) @ fam.weights))


def hkl_norm(f, mu: VectorMeasure, D: DualCandidateSet) -> NormResult:
    """Alexiewicz norm as a :class:`NormResult`.

    Per functional the objective is the larger of two convex functions, so a
    complete extreme-point set attains the ball supremum.
    """
    f = as_mfunc(f, mu.m)
    per = alexiewicz_profile(f, mu, D) if mu.m else np.zeros(len(D))
    exact = _attains_convex_sup(D)
    return NormResult(float(per.max(initial=0.0)), not exact, 0.0, D.describe(), "hkl",
                      1.0, per)


def embedding_constant(mu: VectorMeasure) -> float:
    """``M = ||μ||(T) + 1``, the constant in ``||f||_{KS^p} ≤ M ||f||_{L^q}``."""
    return semivariation(mu, mu.full) + 1.0


def meet(f, g) -> np.ndarray:
    return np.minimum(np.asarray(f, dtype=float), np.asarray(g, dtype=float))


def join(f, g) -> np.ndarray:
    return np.maximum(np.asarray(f, dtype=float), np.asarray(g, dtype=float))
