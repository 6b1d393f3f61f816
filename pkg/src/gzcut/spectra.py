"""Corner trace functions, the induced spectral maps, and coincidence counting.

The central quantity is the number of eigenvalues a matrix shares with its
cutoff, counted with multiplicity.  Counting "with multiplicity" means a
one-to-one matching between the two spectra, so the matcher below solves an
assignment problem rather than greedily pairing nearest values: near tolerance
boundaries greedy counting gets the answer wrong.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .linalg import (
    DEFAULT_TOL,
    Spectrum,
    Tolerances,
    aberth_roots,
    as_cmatrix,
    cutoff,
    eigenvalues,
    sort_complex,
)

__all__ = [
    "GZImage",
    "FullGZImage",
    "CoincidenceReport",
    "gz_function",
    "phi_n",
    "phi_full",
    "match_spectra",
    "coincidence_count",
    "newton_to_charpoly",
    "v_membership",
]


@dataclass(frozen=True)
class GZImage:
    """Power sums of the cutoff (degrees 1..n-1) and of the full matrix (1..n)."""

    c_prev: tuple
    c_full: tuple
    n: int

    def __post_init__(self):
        if len(self.c_prev) != self.n - 1 or len(self.c_full) != self.n:
            raise ValueError("power-sum lists must have lengths n-1 and n")


@dataclass(frozen=True)
class FullGZImage:
    """Triangular array of power sums: level i holds tr(x_i^j), j = 1..i."""

    levels: tuple

    def __post_init__(self):
        for i, level in enumerate(self.levels, start=1):
            if len(level) != i:
                raise ValueError("level %d must hold exactly %d power sums" % (i, i))


@dataclass(frozen=True)
class CoincidenceReport:
    """Matched eigenvalue pairs between a cutoff spectrum and a full spectrum.

    l          number of matched pairs (the coincidence count)
    pairs      tuples (cutoff eigenvalue, full eigenvalue), each value used once
    residuals  |lambda - mu| per pair
    """

    l: int
    pairs: tuple
    residuals: tuple


def _corner(x: np.ndarray, i: int) -> np.ndarray:
    return x[:i, :i]


def gz_function(x, i: int, j: int) -> complex:
    """tr((x_i)^j) for the upper-left i x i corner x_i; homogeneous of degree j."""
    m = as_cmatrix(x)
    n = m.shape[0]
    if not (1 <= i <= n and 1 <= j <= i):
        raise ValueError(f"indices (i={i}, j={j}) out of range for n={n}")
    return complex(np.trace(np.linalg.matrix_power(_corner(m, i), j)))


def _power_traces(m: np.ndarray, count: int) -> tuple:
    out = []
    p = np.eye(m.shape[0], dtype=complex)
    for _ in range(count):
        p = p @ m
        out.append(complex(np.trace(p)))
    return tuple(out)


def phi_n(x) -> GZImage:
    """Power sums of the cutoff and of the full matrix; K-conjugation invariant."""
    m = as_cmatrix(x)
    n = m.shape[0]
    if n < 2:
        raise ValueError("the map needs n >= 2: a 1 x 1 matrix has no cutoff")
    return GZImage(_power_traces(cutoff(m), n - 1), _power_traces(m, n), n)


def phi_full(x) -> FullGZImage:
    """Power sums of every leading corner, level i = 1..n."""
    m = as_cmatrix(x)
    n = m.shape[0]
    return FullGZImage(tuple(_power_traces(_corner(m, i), i) for i in range(1, n + 1)))


def _spectrum_values(s) -> np.ndarray:
    if isinstance(s, Spectrum):
        return s.as_array()
    return np.asarray(s, dtype=complex).ravel()


def _assignment(a: np.ndarray, b: np.ndarray, radius: float):
    """Max-cardinality, then min-total-residual matching of two value lists.

    Solved as a rectangular assignment with a prohibitive cost on pairs
    farther apart than `radius`; with the penalty dominating every admissible
    total, the assignment maximizes the admissible count first and minimizes
    the residual sum second.  Returns (row indices, col indices, residuals).
    """
    if a.size == 0 or b.size == 0:
        return [], [], []
    cost = np.abs(a[:, None] - b[None, :])
    admissible = cost <= radius
    big = 1.0 + 2.0 * (radius + 1.0) * min(a.size, b.size)
    rows, cols = linear_sum_assignment(np.where(admissible, cost, big))
    keep = admissible[rows, cols]
    rows, cols = rows[keep], cols[keep]
    return list(rows), list(cols), [float(cost[r, c]) for r, c in zip(rows, cols)]


def match_spectra(s1, s2, tol: Tolerances = DEFAULT_TOL) -> CoincidenceReport:
    """Maximum multiset matching between two spectra.

    A pair is admissible when |lambda - mu| <= eig_match; each eigenvalue is
    used at most once per side, so multiplicities are respected.
    """
    a = _spectrum_values(s1)
    b = _spectrum_values(s2)
    rows, cols, residuals = _assignment(a, b, tol.eig_match)
    order = sorted(
        range(len(rows)),
        key=lambda t: (a[rows[t]].real, a[rows[t]].imag, residuals[t]),
    )
    pairs = tuple((complex(a[rows[t]]), complex(b[cols[t]])) for t in order)
    return CoincidenceReport(len(pairs), pairs, tuple(residuals[t] for t in order))


def coincidence_count(x, tol: Tolerances = DEFAULT_TOL) -> CoincidenceReport:
    """Coincidences between the spectra of the cutoff and of the full matrix."""
    m = as_cmatrix(x)
    if m.shape[0] < 2:
        raise ValueError("coincidence counting needs n >= 2")
    return match_spectra(eigenvalues(cutoff(m), tol), eigenvalues(m, tol), tol)


def newton_to_charpoly(power_sums) -> np.ndarray:
    """Monic characteristic-polynomial coefficients from power sums.

    Newton's identities convert p_1..p_k into elementary symmetric functions;
    the coefficient of lambda^(k-i) is (-1)^i e_i.
    """
    p = np.asarray(power_sums, dtype=complex).ravel()
    k = p.size
    if k < 1:
        raise ValueError("need at least one power sum")
    e = np.zeros(k + 1, dtype=complex)
    e[0] = 1.0
    for m in range(1, k + 1):
        acc = 0.0 + 0.0j
        for i in range(1, m + 1):
            acc += (-1) ** (i - 1) * e[m - i] * p[i - 1]
        e[m] = acc / m
    return e * (-1.0) ** np.arange(k + 1)


def v_membership(img: GZImage, l: int, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether a power-sum image lies in the locus of >= l shared eigenvalues.

    Both spectra are recovered through Newton's identities and Aberth root
    finding, then rematched at 10x the coincidence radius: the round trip
    through coefficients loses precision, so the radius is derated.
    """
    if not 0 <= l <= img.n - 1:
        raise ValueError(f"l={l} out of range for n={img.n}")
    roots_prev = sort_complex(aberth_roots(newton_to_charpoly(img.c_prev)))
    roots_full = sort_complex(aberth_roots(newton_to_charpoly(img.c_full)))
    loose = replace(tol, eig_match=10.0 * tol.eig_match)
    return match_spectra(roots_prev, roots_full, loose).l >= l
