"""Local stability indices sigma_j and the cycle classification.

Two regimes, decided by the signs of the basic transition matrices:

* All entries non-negative (every transverse eigenvalue negative): the whole
  question reduces to the spectral radius of one full return.  |lambda_max|
  > 1 gives sigma_j = +inf at every connection (asymptotically stable);
  otherwise sigma_j = -inf everywhere (not an attractor).

* Some matrix M_q has a negative entry (indices q = j_1 < ... < j_L).  The
  full returns are all similar, so the realness/size conditions on
  lambda_max are shared; the sign condition on w_max propagates through
  non-negative partial products, so it suffices to verify the three
  dominant-pair conditions at the checkpoints M^(j_p + 1).  Failure anywhere
  forces sigma_j = -inf for all j.  Otherwise

      sigma_j = min( f_index(v_max of M^(j)),
                     f_index(row s of M_(j_p, j)) over p = 1..L, s = 1..N )

  where the v_max term encodes membership in the attracted set of the full
  return and each partial-turn row demands the corresponding intermediate
  state stay in the negative orthant.

Classification from the indices: any -inf -> not an attractor; any exact 0
-> marginal (no claim made); all +inf -> asymptotically stable; all > 0 ->
essentially asymptotically stable; otherwise (all > -inf, some < 0) the
cycle is fragmentarily asymptotically stable only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import findex
from .spectral import (
    DEFAULT_TOL,
    SpectralError,
    dominant_eigenvalue,
    eigen_decompose,
)
from .transition import CycleLike, as_basic_matrices


class IndeterminateError(RuntimeError):
    """A spectral degeneracy prevented classification (reported, not guessed)."""

    def __init__(self, node: int, cause: Exception):
        super().__init__(f"indeterminate at node {node}: {cause}")
        self.node = node
        self.cause = cause


class Classification(Enum):
    ASYMPTOTICALLY_STABLE = "asymptotically_stable"
    ESSENTIALLY_ASYMPTOTICALLY_STABLE = "essentially_asymptotically_stable"
    FRAGMENTARILY_ASYMPTOTICALLY_STABLE_ONLY = "fragmentarily_asymptotically_stable_only"
    NOT_ATTRACTOR = "not_attractor"
    MARGINAL = "marginal"

    @property
    def short(self) -> str:
        return _SHORT[self]


_SHORT = {
    Classification.ASYMPTOTICALLY_STABLE: "a.s.",
    Classification.ESSENTIALLY_ASYMPTOTICALLY_STABLE: "e.a.s.",
    Classification.FRAGMENTARILY_ASYMPTOTICALLY_STABLE_ONLY: "f.a.s. only",
    Classification.NOT_ATTRACTOR: "not an attractor",
    Classification.MARGINAL: "marginal",
}


@dataclass(frozen=True)
class IndexProvenance:
    """Which direction vector realised sigma_j."""

    source: str
    alpha: tuple[float, ...] | None


@dataclass(frozen=True)
class IndexReport:
    """All sigma_j (along the connection entering node j) plus the verdict."""

    sigma: tuple[float, ...]
    provenance: tuple[IndexProvenance, ...]
    classification: Classification
    tol: float

    def to_dict(self) -> dict:
        return {
            "sigma": [_inf_str(s) for s in self.sigma],
            "provenance": [
                {"source": p.source, "alpha": list(p.alpha) if p.alpha else None}
                for p in self.provenance
            ],
            "classification": self.classification.value,
            "tol": self.tol,
        }


def _inf_str(x: float):
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    return x


def classification_from_sigmas(sigmas) -> Classification:
    sigmas = list(sigmas)
    if any(s == -math.inf for s in sigmas):
        return Classification.NOT_ATTRACTOR
    if any(s == 0.0 for s in sigmas):
        return Classification.MARGINAL
    if all(s == math.inf for s in sigmas):
        return Classification.ASYMPTOTICALLY_STABLE
    if all(s > 0.0 for s in sigmas):
        return Classification.ESSENTIALLY_ASYMPTOTICALLY_STABLE
    return Classification.FRAGMENTARILY_ASYMPTOTICALLY_STABLE_ONLY


def _checkpoints(m: int, negative: list[int]) -> list[int]:
    """Nodes immediately after a negative-entry matrix, cyclically.

    The sign condition on w_max propagates through the non-negative factors
    between consecutive negative matrices, so these are exactly the indices
    where it must be verified directly.
    """
    return sorted({(q + 1) % m for q in negative})


def _full_returns(mats: list[np.ndarray]) -> list[np.ndarray]:
    m = len(mats)
    out = []
    for j in range(m):
        prod = np.eye(mats[0].shape[0])
        for step in range(m):
            prod = mats[(j + step) % m] @ prod
        out.append(prod)
    return out


def _partial(mats: list[np.ndarray], l: int, j: int) -> np.ndarray:
    m = len(mats)
    prod = np.eye(mats[0].shape[0])
    for step in range(((l - j) % m) + 1):
        prod = mats[(j + step) % m] @ prod
    return prod


def collect_alpha_vectors(cycle: CycleLike, j: int, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Direction vectors whose indices are minimised to obtain sigma_j.

    v_max of M^(j) first, then the N rows of each partial turn M_(j_p, j)
    ending at a negative-entry matrix: K = 1 + L*N vectors in total.
    """
    return [alpha for alpha, _ in _tagged_alpha_vectors(as_basic_matrices(cycle), j, tol)]


def _tagged_alpha_vectors(
    mats: list[np.ndarray], j: int, tol: float
) -> list[tuple[np.ndarray, str]]:
    negative = [q for q, M in enumerate(mats) if M.min() < 0.0]
    if not negative:
        raise ValueError("no negative entries: the spectral-radius dichotomy applies")
    full = _full_returns(mats)
    try:
        summary = eigen_decompose(full[j], tol)
    except SpectralError as exc:
        raise IndeterminateError(j, exc) from exc
    if not (summary.condition_i and summary.condition_ii):
        raise ValueError(
            "dominant-pair conditions fail; sigma_j is -inf by the zero-measure "
            "argument, not a minimum of indices"
        )
    tagged = [(np.real(summary.v_max), f"v_max[{j}]")]
    for q in negative:
        part = _partial(mats, q, j)
        for s in range(part.shape[0]):
            tagged.append((part[s], f"M_({q},{j}) row {s}"))
    return tagged


def _sigma_nonnegative(mats: list[np.ndarray], tol: float) -> float:
    """Spectral-radius dichotomy when every basic matrix is non-negative."""
    full0 = _full_returns(mats)[0]
    eigenvalues = np.linalg.eigvals(full0)
    try:
        idx = dominant_eigenvalue(eigenvalues, tol)
    except SpectralError as exc:
        raise IndeterminateError(0, exc) from exc
    return math.inf if abs(eigenvalues[idx]) > 1.0 else -math.inf


def _checkpoint_conditions_hold(mats: list[np.ndarray], negative: list[int], tol: float) -> bool:
    full = _full_returns(mats)
    for q in _checkpoints(len(mats), negative):
        try:
            summary = eigen_decompose(full[q], tol)
        except SpectralError as exc:
            raise IndeterminateError(q, exc) from exc
        if not (summary.condition_i and summary.condition_ii and summary.condition_iii):
            return False
    return True


def sigma(cycle: CycleLike, j: int, tol: float = DEFAULT_TOL) -> float:
    """Local stability index along the connection entering node j."""
    value, _ = _sigma_with_provenance(as_basic_matrices(cycle), j, tol)
    return value


def _sigma_with_provenance(
    mats: list[np.ndarray], j: int, tol: float
) -> tuple[float, IndexProvenance]:
    m = len(mats)
    if not 0 <= j < m:
        raise IndexError(f"node index {j} out of range for m={m}")
    negative = [q for q, M in enumerate(mats) if M.min() < 0.0]
    if not negative:
        value = _sigma_nonnegative(mats, tol)
        return value, IndexProvenance(source="nonnegative-dichotomy", alpha=None)
    if not _checkpoint_conditions_hold(mats, negative, tol):
        return -math.inf, IndexProvenance(source="dominant-pair-conditions-fail", alpha=None)

    best = math.inf
    best_tag = None
    for alpha, tag in _tagged_alpha_vectors(mats, j, tol):
        value = findex.f_index(alpha)
        if value < best or best_tag is None:
            best = value
            best_tag = (tag, tuple(float(a) for a in alpha))
    return best, IndexProvenance(source=best_tag[0], alpha=best_tag[1])


def classify(cycle: CycleLike, tol: float = DEFAULT_TOL) -> IndexReport:
    """Compute every sigma_j and classify the cycle.

    Raises IndeterminateError when a spectral degeneracy (no admissible
    dominant eigenvalue, or a defective full return) blocks the decision.
    """
    mats = as_basic_matrices(cycle)
    sigmas = []
    provenance = []
    for j in range(len(mats)):
        value, prov = _sigma_with_provenance(mats, j, tol)
        sigmas.append(value)
        provenance.append(prov)
    return IndexReport(
        sigma=tuple(sigmas),
        provenance=tuple(provenance),
        classification=classification_from_sigmas(sigmas),
        tol=tol,
    )
