"""Monomial-ideal combinatorics on exponent matrices (rows are monomial generators)."""

import math
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from src.homkernel.polynomials import Monomial


def exponent_matrix(monomials: Iterable[Monomial], nvars: int) -> np.ndarray:
    rows = [list(m) for m in monomials]
    if not rows:
        return np.zeros((0, nvars), dtype=np.int64)
    return np.array(rows, dtype=np.int64).reshape(len(rows), nvars)


def minimalize(A: np.ndarray) -> np.ndarray:
    """Minimalize the generators given as rows of A."""
    kept: List[np.ndarray] = []
    for m in A:
        if all(not np.all(m >= g) for g in kept):
            kept = [g for g in kept if not np.all(g >= m)]
            kept.append(m)
    if not kept:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    return np.array(kept, dtype=np.int64)


def colon(A: np.ndarray, p: Sequence[int]) -> np.ndarray:
    """Generators of (I : x^p)."""
    p = np.asarray(p, dtype=np.int64)
    return minimalize(np.maximum(A - p, 0))


def divisible(monomials: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Boolean mask: which rows of `monomials` lie in the ideal generated by the rows of A."""
    if A.shape[0] == 0 or monomials.shape[0] == 0:
        return np.zeros(monomials.shape[0], dtype=bool)
    return np.all(monomials[:, None, :] >= A[None, :, :], axis=2).any(axis=1)


def contains(A: np.ndarray, m: Sequence[int]) -> bool:
    return bool(divisible(np.asarray([m], dtype=np.int64), A)[0])


def is_unit(A: np.ndarray) -> bool:
    return bool(A.shape[0] and np.any(np.all(A == 0, axis=1)))


def is_variable_prime(A: np.ndarray) -> bool:
    """True when the minimal generators are distinct variables, i.e. the ideal is a monomial prime."""
    A = minimalize(A)
    return bool(A.shape[0]) and bool(np.all(A.sum(axis=1) == 1))


def pure_powers(A: np.ndarray) -> List[Union[int, None]]:
    """Smallest pure power of each variable in the ideal, or None when there is none."""
    nvars = A.shape[1]
    bounds: List[Union[int, None]] = []
    for i in range(nvars):
        rows = [m for m in A if np.count_nonzero(m) <= 1 and (m[i] > 0 or not np.any(m))]
        bounds.append(min(int(m[i]) for m in rows) if rows else None)
    return bounds


def standard_monomials(A: np.ndarray) -> np.ndarray:
    """All monomials outside the ideal, assuming it contains a pure power of every variable."""
    nvars = A.shape[1]
    if is_unit(A):
        return np.zeros((0, nvars), dtype=np.int64)
    if nvars == 0:
        return np.zeros((1, 0), dtype=np.int64)
    bounds = pure_powers(A)
    if any(b is None for b in bounds):
        raise ValueError("infinitely many standard monomials")
    box = np.indices(tuple(bounds)).reshape(nvars, -1).T.astype(np.int64)
    return box[~divisible(box, A)]


def standard_monomial_count(A: np.ndarray) -> Union[int, float]:
    if is_unit(A):
        return 0
    if any(b is None for b in pure_powers(A)):
        return math.inf
    return int(standard_monomials(A).shape[0])


def standard_monomials_of_degree(A: np.ndarray, candidates: Sequence[Monomial]) -> int:
    """How many of the given monomials (one graded piece of A) avoid the ideal."""
    if not candidates:
        return 0
    mons = exponent_matrix(candidates, A.shape[1])
    return int(np.count_nonzero(~divisible(mons, A)))


def as_monomials(A: np.ndarray) -> List[Tuple[int, ...]]:
    return [tuple(int(e) for e in row) for row in A]
