"""Finite-dimensional normed spaces, their duals, and dual-ball candidate sets."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product

import numpy as np

__all__ = [
    "NormTag",
    "SpaceDesc",
    "DualCandidateSet",
    "Provenance",
    "DimensionError",
    "DegenerateInputError",
    "norm_eval",
    "dual_norm",
    "pairing",
    "norming_functional",
    "build_candidates",
    "explicit_candidates",
    "geometric_weights",
    "MAX_GEOMETRIC_TERMS",
]

# 2**-1074 is the smallest positive double.
MAX_GEOMETRIC_TERMS = 1074
_BALL_SLACK = 1e-12


class DimensionError(ValueError):
    pass


class DegenerateInputError(ValueError):
    pass


class NormTag(str, enum.Enum):
    ELL1 = "ell1"
    ELL2 = "ell2"
    ELLINF = "ellinf"

    @property
    def dual(self) -> "NormTag":
        return _DUAL[self]


_DUAL = {NormTag.ELL1: NormTag.ELLINF, NormTag.ELL2: NormTag.ELL2, NormTag.ELLINF: NormTag.ELL1}


@dataclass(frozen=True)
class SpaceDesc:
    dim: int
    norm: NormTag

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DimensionError(f"dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "norm", NormTag(self.norm))

    @property
    def dual(self) -> "SpaceDesc":
        return SpaceDesc(self.dim, self.norm.dual)


def _as_vectors(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] == 0:
        raise DimensionError("empty vector")
    return arr


def norm_eval(v, tag: NormTag | str) -> float | np.ndarray:
    """ℓ1, ℓ2 or ℓ∞ norm of ``v`` (row-wise for 2-D input)."""
    arr = _as_vectors(v)
    tag = NormTag(tag)
    if tag is NormTag.ELL1:
        out = np.abs(arr).sum(axis=-1)
    elif tag is NormTag.ELL2:
        out = np.sqrt((arr * arr).sum(axis=-1))
    else:
        out = np.abs(arr).max(axis=-1)
    return float(out) if out.ndim == 0 else out


def dual_norm(x, tag: NormTag | str) -> float | np.ndarray:
    """Norm of the functional ``x`` on a space normed by ``tag``."""
    return norm_eval(x, NormTag(tag).dual)


def pairing(x, v) -> float | np.ndarray:
    return np.asarray(x, dtype=float) @ np.asarray(v, dtype=float)


def norming_functional(v, space: SpaceDesc) -> np.ndarray:
    """A dual-unit functional ``x'`` with ``<x', v> = ||v||``."""
    arr = _as_vectors(v)
    if arr.ndim != 1 or arr.size != space.dim:
        raise DimensionError(f"expected a vector of length {space.dim}, got shape {arr.shape}")
    if not np.any(arr):
        raise DegenerateInputError("the zero vector has no norming functional")
    if space.norm is NormTag.ELL2:
        return arr / np.sqrt(arr @ arr)
    if space.norm is NormTag.ELLINF:
        j = int(np.argmax(np.abs(arr)))
        out = np.zeros_like(arr)
        out[j] = np.sign(arr[j])
        return out
    return np.where(arr < 0, -1.0, 1.0)


class Provenance(str, enum.Enum):
    EXTREME_POINTS = "extreme_points"
    SPHERE_SAMPLE = "sphere_sample"
    EXPLICIT = "explicit"


def geometric_weights(count: int) -> np.ndarray:
    """``2^-h`` for ``h = 1..count``, renormalized to sum to 1."""
    if count < 1:
        raise ValueError("need at least one weight")
    if count > MAX_GEOMETRIC_TERMS:
        raise ValueError(
            f"geometric weights underflow past {MAX_GEOMETRIC_TERMS} terms (got {count})"
        )
    w = np.ldexp(1.0, -np.arange(1, count + 1))
    return w / (1.0 - 2.0 ** -count) if count < 64 else w / w.sum()


@dataclass(frozen=True)
class DualCandidateSet:
    """A finite subset of the closed dual unit ball of ``space``.

    ``members`` has one functional per row.  ``weights`` (optional) are the
    strictly positive ``ω_h`` used by the weak-topology norm.
    """

    space: SpaceDesc
    members: np.ndarray
    weights: np.ndarray | None = None
    separating: bool = False
    provenance: Provenance = Provenance.EXPLICIT
    seed: int | None = None
    notice: str = ""
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        members = np.atleast_2d(np.asarray(self.members, dtype=float))
        if members.shape[0] == 0 or members.shape[1] != self.space.dim:
            raise DimensionError(
                f"candidate members must have shape (H, {self.space.dim}), got {members.shape}"
            )
        norms = dual_norm(members, self.space.norm)
        if np.any(norms > 1 + _BALL_SLACK):
            h = int(np.argmax(norms))
            raise ValueError(f"candidate {h} has dual norm {norms[h]} > 1")
        members.setflags(write=False)
        object.__setattr__(self, "members", members)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (members.shape[0],):
                raise ValueError(f"expected {members.shape[0]} weights, got shape {w.shape}")
            if np.any(w <= 0):
                raise ValueError("weights must be strictly positive")
            if abs(w.sum() - 1.0) > 1e-12:
                raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
            w.setflags(write=False)
            object.__setattr__(self, "weights", w)
        object.__setattr__(self, "provenance", Provenance(self.provenance))

    def __len__(self) -> int:
        return self.members.shape[0]

    @property
    def is_extreme_complete(self) -> bool:
        """True when the members include every extreme point of a polytope dual ball."""
        return self.provenance is Provenance.EXTREME_POINTS and not self.notice

    def describe(self) -> str:
        if self.provenance is Provenance.SPHERE_SAMPLE:
            text = f"sphere_sample(seed={self.seed}, count={len(self)})"
        else:
            text = f"{self.provenance.value}(count={len(self)})"
        return f"{text}; {self.notice}" if self.notice else text

    def restricted(self, h: int) -> "DualCandidateSet":
        """The singleton set holding member ``h`` with weight 1."""
        return DualCandidateSet(
            self.space, self.members[h : h + 1], np.ones(1),
            separating=self.space.dim == 1 and bool(np.any(self.members[h])),
            provenance=Provenance.EXPLICIT,
        )


def _spans(members: np.ndarray, dim: int) -> bool:
    return int(np.linalg.matrix_rank(members)) == dim


def _sphere(space: SpaceDesc, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((count, space.dim))
    return raw / np.atleast_1d(dual_norm(raw, space.norm))[:, None]


def build_candidates(
    space: SpaceDesc,
    strategy: Provenance | str = Provenance.EXTREME_POINTS,
    size_hint: int = 64,
    seed: int = 0,
    *,
    weighted: bool = True,
) -> DualCandidateSet:
    """Candidate functionals for the dual ball of ``space``.

    ``extreme_points`` returns ``±e_j`` when the dual ball is the ℓ1 ball and
    every sign vector when it is the ℓ∞ ball.  The ℓ2 dual ball has no finite
    extreme-point set, so that request falls back to ``size_hint`` seeded
    sphere samples and says so in ``notice``.
    """
    strategy = Provenance(strategy)
    n = space.dim
    notice = ""
    if strategy is Provenance.EXPLICIT:
        raise ValueError("use explicit_candidates() for an explicit candidate set")
    if strategy is Provenance.EXTREME_POINTS and space.norm is NormTag.ELL2 and n > 1:
        strategy = Provenance.SPHERE_SAMPLE
        notice = "ell2 dual ball has no finite extreme-point set; fell back to sphere sampling"
    if strategy is Provenance.EXTREME_POINTS:
        if space.norm is NormTag.ELLINF or n == 1:
            eye = np.eye(n)
            members = np.empty((2 * n, n))
            members[0::2] = eye
            members[1::2] = -eye
        else:
            members = np.array(list(product((1.0, -1.0), repeat=n)))
        separating = True
    else:
        if size_hint < 1:
            raise ValueError("size_hint must be at least 1 for sphere sampling")
        members = _sphere(space, size_hint, seed)
        separating = _spans(members, n)
    weighted = weighted and len(members) <= MAX_GEOMETRIC_TERMS
    weights = geometric_weights(len(members)) if weighted else None
    return DualCandidateSet(
        space, members, weights, separating=separating, provenance=strategy,
        seed=seed if strategy is Provenance.SPHERE_SAMPLE else None, notice=notice,
        params={"size_hint": size_hint},
    )


def explicit_candidates(space: SpaceDesc, members, weights=None,
                        *, weighted: bool = True) -> DualCandidateSet:
    members = np.atleast_2d(np.asarray(members, dtype=float))
    if weights is None and weighted:
        weights = geometric_weights(members.shape[0])
    return DualCandidateSet(
        space, members, weights, separating=_spans(members, space.dim),
        provenance=Provenance.EXPLICIT,
    )
