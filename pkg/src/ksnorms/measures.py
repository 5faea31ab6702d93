"""Finite atomic vector measures, scalarization, variation and semivariation.

Sets are bitmasks over atom indices: bit ``i`` set means atom ``i`` belongs
to the set, so ``A ^ B`` is the symmetric difference and ``A & B`` the
intersection.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .spaces import (
    MAX_GEOMETRIC_TERMS,
    DimensionError,
    NormTag,
    SpaceDesc,
    build_candidates,
    geometric_weights,
    norm_eval,
    norming_functional,
)

__all__ = [
    "VectorMeasure",
    "ScalarMeasure",
    "DenseFamily",
    "DenseCheck",
    "SemivariationEstimate",
    "ApproximationWarning",
    "BudgetError",
    "mset",
    "members",
    "full_set",
    "validate_mask",
    "scalarize",
    "variation",
    "semivariation",
    "semivariation_estimate",
    "check_mu_dense",
    "build_family",
    "EXACT_ATOM_BUDGET",
    "EXHAUSTIVE_CAP",
]

EXACT_ATOM_BUDGET = 22
EXHAUSTIVE_CAP = 16


class ApproximationWarning(UserWarning):
    """A supremum was replaced by a certified lower bound."""


class BudgetError(ValueError):
    pass


def mset(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        if i < 0:
            raise ValueError(f"negative atom index {i}")
        mask |= 1 << i
    return mask


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def full_set(m: int) -> int:
    return (1 << m) - 1


def validate_mask(mask: int, m: int) -> int:
    if mask < 0 or mask >> m:
        raise ValueError(f"set {mask:#b} has bits beyond the {m} atoms")
    return mask


@dataclass(frozen=True)
class VectorMeasure:
    """``μ(A) = Σ_{i∈A} v_i`` for atoms ``v_i`` in an ``n``-dimensional space."""

    space: SpaceDesc
    atom_ids: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        ids = tuple(str(a) for a in self.atom_ids)
        if len(set(ids)) != len(ids):
            raise ValueError("atom ids must be unique")
        vals = np.asarray(self.values, dtype=float).reshape(len(ids), -1) if ids else \
            np.zeros((0, self.space.dim))
        if vals.shape != (len(ids), self.space.dim):
            raise DimensionError(
                f"atom values must have shape ({len(ids)}, {self.space.dim}), got {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("atom values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "atom_ids", ids)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_atoms(cls, space: SpaceDesc, atoms: Sequence[tuple[str, Sequence[float]]]):
        ids = [a for a, _ in atoms]
        vals = np.array([np.asarray(v, dtype=float) for _, v in atoms]).reshape(len(ids), -1) \
            if atoms else np.zeros((0, space.dim))
        return cls(space, tuple(ids), vals)

    @property
    def m(self) -> int:
        return len(self.atom_ids)

    @property
    def full(self) -> int:
        return full_set(self.m)

    def __call__(self, A: int) -> np.ndarray:
        validate_mask(A, self.m)
        idx = members(A)
        return self.values[idx].sum(axis=0) if idx else np.zeros(self.space.dim)

    def atom_norms(self) -> np.ndarray:
        if self.m == 0:
            return np.zeros(0)
        return np.atleast_1d(norm_eval(self.values, self.space.norm))

    def nonnull_atoms(self) -> np.ndarray:
        """Boolean mask of atoms with nonzero value (the atoms outside every null set)."""
        return np.any(self.values != 0, axis=1)


@dataclass(frozen=True)
class ScalarMeasure:
    """The signed measure ``x'μ``; ``atom_values[i] = <x', v_i>``."""

    atom_values: np.ndarray
    functional: np.ndarray | None = None

    def __call__(self, A: int) -> float:
        validate_mask(A, len(self.atom_values))
        return float(sum(self.atom_values[i] for i in members(A)))

    @property
    def masses(self) -> np.ndarray:
        """Atom masses of the variation measure ``|x'μ|``."""
        return np.abs(self.atom_values)


def scalarize(mu: VectorMeasure, x) -> ScalarMeasure:
    x = np.asarray(x, dtype=float)
    if x.shape != (mu.space.dim,):
        raise DimensionError(f"functional has shape {x.shape}, space has dim {mu.space.dim}")
    return ScalarMeasure(mu.values @ x, x)


def variation(nu: ScalarMeasure, A: int) -> float:
    """``|ν|(A)``; the partition of ``A`` into atoms attains the supremum."""
    validate_mask(A, len(nu.atom_values))
    return float(sum(abs(nu.atom_values[i]) for i in members(A)))


class SemivariationEstimate(NamedTuple):
    value: float
    exact: bool
    functional: np.ndarray


def _sign_table(first: np.ndarray | None, vecs: np.ndarray, n: int) -> np.ndarray:
    table = (first if first is not None else np.zeros(n))[None, :]
    for v in vecs:
        table = np.concatenate([table + v, table - v])
    return table


def _max_signed_sum(V: np.ndarray, tag: NormTag, rows_per_block: int = 1 << 17):
    """``max_s ||Σ s_i v_i||`` over sign vectors with ``s_0 = +1``.

    Fixing ``s_0`` loses nothing because ``s`` and ``-s`` give the same norm.
    """
    k, n = V.shape
    rest = V[1:]
    p = (k - 1) // 2 + (k - 1) % 2
    head = _sign_table(V[0], rest[:p], n)
    tail = _sign_table(None, rest[p:], n)
    best, best_vec = -1.0, V[0]
    step = max(1, rows_per_block // len(head))
    for start in range(0, len(tail), step):
        block = head[None, :, :] + tail[start : start + step, None, :]
        norms = np.atleast_1d(norm_eval(block.reshape(-1, n), tag))
        j = int(np.argmax(norms))
        if norms[j] > best:
            best = float(norms[j])
            best_vec = block.reshape(-1, n)[j].copy()
    return best, best_vec


def _ascent_lower_bound(V: np.ndarray, space: SpaceDesc, samples: int, seed: int):
    """Best ``Σ|<x', v_i>|`` over sampled and sign-ascent functionals."""
    cands = [build_candidates(space, "sphere_sample", samples, seed, weighted=False).members]
    if space.norm is not NormTag.ELL2:
        if space.norm is NormTag.ELLINF or space.dim <= 12:
            cands.append(build_candidates(space, "extreme_points", weighted=False).members)
    D = np.concatenate(cands)
    scores = np.abs(D @ V.T).sum(axis=1)
    h = int(np.argmax(scores))
    x, value = D[h], float(scores[h])
    for _ in range(100):
        u = np.where(V @ x < 0, -1.0, 1.0) @ V
        if not np.any(u):
            break
        x_new = norming_functional(u, space)
        new_value = float(np.abs(V @ x_new).sum())
        if new_value <= value * (1 + 1e-15):
            break
        x, value = x_new, new_value
    return value, x


def semivariation_estimate(
    mu: VectorMeasure, A: int, *, budget: int = EXACT_ATOM_BUDGET,
    samples: int = 4096, seed: int = 0,
) -> SemivariationEstimate:
    """``||μ||(A)`` with the functional that attains it.

    Exact mode uses ``sup_{||x'||≤1} Σ_{i∈A} |<x', v_i>| = max_s ||Σ s_i v_i||``
    and enumerates ``2^(|A|-1)`` sign patterns.  Above ``budget`` atoms the
    value is a lower bound from sampled functionals refined by sign ascent.
    """
    validate_mask(A, mu.m)
    idx = [i for i in members(A) if np.any(mu.values[i])]
    n = mu.space.dim
    if not idx:
        return SemivariationEstimate(0.0, True, np.zeros(n))
    V = mu.values[idx]
    if len(idx) <= budget:
        value, u = _max_signed_sum(V, mu.space.norm)
        return SemivariationEstimate(value, True, norming_functional(u, mu.space))
    value, x = _ascent_lower_bound(V, mu.space, samples, seed)
    return SemivariationEstimate(value, False, x)


def semivariation(mu: VectorMeasure, A: int, *, budget: int = EXACT_ATOM_BUDGET,
                  samples: int = 4096, seed: int = 0) -> float:
    """``||μ||(A)``; warns with :class:`ApproximationWarning` past the exact budget."""
    est = semivariation_estimate(mu, A, budget=budget, samples=samples, seed=seed)
    if not est.exact:
        warnings.warn(
            f"set has more than {budget} non-null atoms; returning a certified lower bound",
            ApproximationWarning, stacklevel=2,
        )
    return est.value


@dataclass(frozen=True)
class DenseFamily:
    """Sets ``B_k`` (bitmasks over ``m`` atoms) with weights ``η_k > 0``, ``Σ η_k = 1``."""

    m: int
    sets: tuple[int, ...]
    weights: np.ndarray
    kind: str = "explicit"

    def __post_init__(self):
        sets = tuple(int(B) for B in self.sets)
        if not sets:
            raise ValueError("a dense family needs at least one set")
        for k, B in enumerate(sets):
            try:
                validate_mask(B, self.m)
            except ValueError as exc:
                raise ValueError(f"family set {k}: {exc}") from None
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (len(sets),):
            raise ValueError(f"expected {len(sets)} weights, got shape {w.shape}")
        if np.any(w <= 0):
            raise ValueError("family weights must be strictly positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"family weights must sum to 1, got {w.sum()!r}")
        w.setflags(write=False)
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.sets)

    def indicator(self) -> np.ndarray:
        """``(K, m)`` 0/1 matrix whose row ``k`` is ``χ_{B_k}`` on the atoms."""
        E = np.zeros((len(self.sets), self.m))
        for k, B in enumerate(self.sets):
            E[k, members(B)] = 1.0
        return E

    def check_bound(self, mu: VectorMeasure) -> float:
        """Largest ``||μ||(B_k)`` after asserting it stays within ``||μ||(T) + 1``."""
        bound = semivariation(mu, mu.full) + 1.0
        worst = 0.0
        for k, B in enumerate(self.sets):
            s = semivariation(mu, B)
            if s > bound + 1e-12:
                raise ValueError(f"family set {k} has semivariation {s} > {bound}")
            worst = max(worst, s)
        return worst


def _family_weights(count: int, weighting: str) -> np.ndarray:
    if weighting == "geometric":
        if count > MAX_GEOMETRIC_TERMS:
            raise ValueError(
                f"{count} sets exceed the {MAX_GEOMETRIC_TERMS} geometric weights a double "
                "can hold; pass weighting='uniform'"
            )
        return geometric_weights(count)
    if weighting == "uniform":
        return np.full(count, 1.0 / count)
    raise ValueError(f"unknown weighting {weighting!r}")


def _dyadic_sets(m: int) -> list[int]:
    out, queue = [], [(0, m)]
    while queue:
        lo, hi = queue.pop(0)
        out.append(mset(range(lo, hi)))
        if hi - lo > 1:
            mid = lo + (hi - lo + 1) // 2
            queue += [(lo, mid), (mid, hi)]
    return out


def build_family(
    mu: VectorMeasure,
    kind: str = "all_subsets",
    payload: Sequence[int] | None = None,
    *,
    weighting: str = "geometric",
    check: bool = True,
) -> DenseFamily:
    """Build ``(B_k)`` with renormalized geometric weights ``η_k = 2^-k / (1 - 2^-K)``.

    ``all_subsets`` orders sets by cardinality, then lexicographically by atom
    index, with ∅ first.  ``dyadic`` lists ``T`` and then the halves of each
    block breadth-first down to singletons.
    """
    m = mu.m
    if kind == "all_subsets":
        if m > EXHAUSTIVE_CAP:
            raise BudgetError(f"all_subsets needs at most {EXHAUSTIVE_CAP} atoms, got {m}")
        sets = [mset(c) for r in range(m + 1) for c in combinations(range(m), r)]
    elif kind == "dyadic":
        if m == 0:
            raise ValueError("dyadic family of an empty measure")
        sets = _dyadic_sets(m)
    elif kind == "explicit":
        if not payload:
            raise ValueError("explicit family needs a non-empty set list")
        sets = [int(B) for B in payload]
    else:
        raise ValueError(f"unknown family kind {kind!r}")
    fam = DenseFamily(m, tuple(sets), _family_weights(len(sets), weighting), kind)
    if check:
        fam.check_bound(mu)
    return fam


@dataclass(frozen=True)
class DenseCheck:
    dense: bool
    witness: int | None
    worst_distance: float
    sets_checked: int


def check_mu_dense(
    mu: VectorMeasure, fam: DenseFamily, eps: float, *,
    samples: int | None = None, seed: int = 0,
) -> DenseCheck:
    """Is every ``A`` within semivariation ``eps`` of some ``B_k``?

    Exhaustive over all ``2^m`` sets up to ``EXHAUSTIVE_CAP`` atoms; past that
    ``samples`` seeded random sets must be requested explicitly.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    m = mu.m
    if samples is None:
        if m > EXHAUSTIVE_CAP:
            raise BudgetError(
                f"{m} atoms exceed the exhaustive cap {EXHAUSTIVE_CAP}; pass samples=N"
            )
        candidates: Iterable[int] = range(1 << m)
    else:
        rng = random.Random(seed)
        candidates = [rng.getrandbits(m) if m else 0 for _ in range(samples)]
    cache: dict[int, float] = {}

    def dist(S: int) -> float:
        if S not in cache:
            cache[S] = semivariation(mu, S)
        return cache[S]

    worst, checked = 0.0, 0
    for A in candidates:
        checked += 1
        best = np.inf
        for B in fam.sets:
            best = min(best, dist(A ^ B))
            if best <= eps + 1e-12:
                break
        worst = max(worst, best)
        if best > eps + 1e-12:
            return DenseCheck(False, A, worst, checked)
    return DenseCheck(True, None, worst, checked)
