"""Polynomial families with structured lemniscates, built as explicit zero sets.

Everything here places zeros directly (trigonometric positions, preimages
under a generating polynomial, equilibrium samples) instead of multiplying
out and refactoring coefficient vectors, so the structural facts the
families are used for — double zeros, circle placement, preimage membership
— hold exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polycore import (
    MAX_EXPANSION_DEGREE,
    MonicPolynomial,
    derivative_coefficients,
    evaluate_coefficients,
)
from .potential import CompactSetModel, equilibrium_sample
from .rootfind import SolverError, all_roots, critical_points, solve_preimages

_SIGNS = {"minus_one": -1.0, "plus_one": 1.0}


def roots_of_unity_poly(n: int, sign: str = "minus_one") -> MonicPolynomial:
    """z^n - 1 ("minus_one") or z^n + 1 ("plus_one") as exact zero placements."""
    if n < 1:
        raise ValueError("need n >= 1")
    if sign not in _SIGNS:
        raise ValueError("sign must be 'minus_one' or 'plus_one'")
    k = np.arange(n)
    if sign == "minus_one":
        zeros = np.exp(2j * np.pi * k / n)
    else:
        zeros = np.exp(1j * np.pi * (2 * k + 1) / n)
    return MonicPolynomial(zeros)


def chebyshev_monic(n: int, half_width: float = 2.0) -> MonicPolynomial:
    """Monic Chebyshev polynomial on [-half_width, half_width].

    Zeros at half_width * cos((k - 1/2) pi / n). With half_width 2 every
    critical value has magnitude exactly 2; with half_width 1 they collapse
    to 2^(1-n)/2 and the lemniscate at level 1 is one piece.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if not (half_width > 0 and math.isfinite(half_width)):
        raise ValueError("half_width must be a positive finite real")
    k = np.arange(1, n + 1)
    return MonicPolynomial(half_width * np.cos((2 * k - 1) * np.pi / (2 * n)))


def ehp_polynomial(n: int) -> MonicPolynomial:
    """Degree-n polynomial whose level-1 set has exactly n - 1 components.

    Zeros are the n-th roots of -1 with the two nearest to z = 1 (namely
    e^{+-i pi/n}) removed and a double zero at 1 inserted. The double zero
    makes 1 a critical point with value 0; every other critical value has
    modulus in (1, 32], so exactly one pair of the n petals merges.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    k = np.arange(1, n - 1)
    kept = np.exp(1j * np.pi * (2 * k + 1) / n)
    return MonicPolynomial(np.concatenate([kept, [1.0 + 0j, 1.0 + 0j]]))


def scaled_ehp(n: int) -> MonicPolynomial:
    """ehp_polynomial(n) shrunk so its smallest nonzero critical value is 1.

    All zeros land on the circle of radius delta_n = c_n^(-1/n) < 1, and the
    level-1 set still has exactly n - 1 components, now with every zero
    strictly inside the unit disk.
    """
    p = ehp_polynomial(n)
    cs = critical_points(p)
    finite = cs.log_values[np.isfinite(cs.log_values)]
    if finite.size == 0:
        raise SolverError("no nonzero critical values found")
    c_n = math.exp(float(np.min(finite)))
    delta = c_n ** (-1.0 / n)
    return p.scale(delta)


def _preimage_zeros(coeffs, targets) -> np.ndarray:
    chunks = []
    for t in targets:
        roots = solve_preimages(coeffs, t)
        if not roots.converged:
            raise SolverError(f"preimage solve failed at target {t!r}")
        chunks.append(roots.expanded_points())
    return np.concatenate(chunks)


def composed_period_m(pm_coeffs, n: int) -> MonicPolynomial:
    """Chebyshev composed with a monic generating polynomial, as zeros.

    The zeros are all solutions of P_m(z) = 2 cos((k - 1/2) pi / n) for
    k = 1..n, i.e. the preimages of the monic-Chebyshev zeros on [-2, 2],
    so the result has degree m*n and lives in the period-m set
    P_m^{-1}([-2, 2]).
    """
    c = np.asarray(pm_coeffs, dtype=complex).ravel()
    if c.size < 2 or c[-1] != 1:
        raise ValueError("generating polynomial must be monic of degree >= 1")
    if n < 1:
        raise ValueError("need n >= 1")
    k = np.arange(1, n + 1)
    targets = 2.0 * np.cos((2 * k - 1) * np.pi / (2 * n))
    return MonicPolynomial(_preimage_zeros(c, targets))


def lemniscate_power(qm_coeffs, n: int, sign: str = "plus_one") -> MonicPolynomial:
    """Zeros of Q_m(z)^n + 1 (default) or Q_m(z)^n - 1 ("minus_one").

    Solves Q_m(z) = zeta over the n-th roots of -1 (resp. +1); degree m*n.
    """
    c = np.asarray(qm_coeffs, dtype=complex).ravel()
    if c.size < 2 or c[-1] != 1:
        raise ValueError("generating polynomial must be monic of degree >= 1")
    if n < 1:
        raise ValueError("need n >= 1")
    if sign not in _SIGNS:
        raise ValueError("sign must be 'minus_one' or 'plus_one'")
    k = np.arange(n)
    if sign == "plus_one":
        targets = np.exp(1j * np.pi * (2 * k + 1) / n)  # zeta^n = -1
    else:
        targets = np.exp(2j * np.pi * k / n)  # zeta^n = +1
    return MonicPolynomial(_preimage_zeros(c, targets))


@dataclass(frozen=True)
class FaberCoefficients:
    """Faber polynomials of the set whose exterior map has the given tail.

    psi_coeffs = (a0, a1, a2, ...) describe psi(w) = w + a0 + a1/w + ...;
    faber[n] is the ascending coefficient vector of the monic degree-n
    Faber polynomial.
    """

    psi_coeffs: tuple
    faber: tuple


def faber_polynomials(psi_coeffs, up_to: int) -> FaberCoefficients:
    """First Faber polynomials F_0..F_up_to by the Laurent-tail recurrence.

    F_0 = 1, F_1 = z - a0, and
    F_{n+1} = (z - a0) F_n - sum_{j=1}^{n-1} a_j F_{n-j} - (n+1) a_n,
    with missing a_j treated as zero. This index convention is the one that
    reproduces z^n for psi(w) = w and the monic Chebyshev 2 T_n(z/2) for
    psi(w) = w + 1/w, and it matches direct Laurent extraction of the
    polynomial part of Phi^n.
    """
    if up_to < 1:
        raise ValueError("need up_to >= 1")
    if up_to > MAX_EXPANSION_DEGREE:
        raise ValueError(f"coefficient work is capped at degree {MAX_EXPANSION_DEGREE}")
    a = [complex(c) for c in psi_coeffs]
    if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in a):
        raise ValueError("psi coefficients must be finite")

    def tail(j):
        return a[j] if j < len(a) else 0j

    fs = [np.array([1.0 + 0j]), np.array([-tail(0), 1.0 + 0j])]
    for n in range(1, up_to):
        nxt = np.zeros(n + 2, dtype=complex)
        nxt[1:] += fs[n]  # z * F_n
        nxt[:-1] -= tail(0) * fs[n]
        for j in range(1, n):
            nxt[: n - j + 1] -= tail(j) * fs[n - j]
        nxt[0] -= (n + 1) * tail(n)
        fs.append(nxt)
    frozen = []
    for f in fs[: up_to + 1]:
        f.setflags(write=False)
        frozen.append(f)
    return FaberCoefficients(tuple(a), tuple(frozen))


def cluster_construction(
    a, arc: CompactSetModel, n1: int, n2: int, seed: int
) -> MonicPolynomial:
    """n1 zeros stacked at the point a plus n2 equilibrium samples of arc."""
    if n1 < 1 or n2 < 0:
        raise ValueError("need n1 >= 1 and n2 >= 0")
    aa = complex(a)
    if n2 == 0:
        return MonicPolynomial(np.full(n1, aa))
    drawn = equilibrium_sample(arc, n2, seed).points
    return MonicPolynomial(np.concatenate([np.full(n1, aa), drawn]))


def aligned_power_indices(qm_coeffs, n_max: int, sign: str = "plus_one"):
    """All n <= n_max where no nonzero critical value of Q^n +- 1 dips below 1.

    The critical values of P = Q^n + 1 away from zeros of Q are
    v^n + 1 over the critical values v of Q, and |v^n + 1| >= 1 iff
    |v|^n + 2 cos(n arg v) >= 0 — an alignment condition on the powers.
    Values that vanish exactly (v^n = -1) are multiple zeros of P, not
    critical values to police, and are skipped.
    """
    c = np.asarray(qm_coeffs, dtype=complex).ravel()
    if c.size < 2 or c[-1] != 1:
        raise ValueError("generating polynomial must be monic of degree >= 1")
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    if sign not in _SIGNS:
        raise ValueError("sign must be 'minus_one' or 'plus_one'")
    shift = _SIGNS[sign]  # P = Q^n + shift... -shift is the root target
    if c.size == 2:
        return list(range(1, n_max + 1))  # linear Q has no critical points
    beta = all_roots(derivative_coefficients(c)).expanded_points()
    vals = evaluate_coefficients(c, beta)
    out = []
    for n in range(1, n_max + 1):
        ok = True
        for v in vals:
            r = abs(v)
            if r == 0.0:
                continue  # value is exactly +-1
            if r > 1.0 and n * math.log(r) > math.log(4.0):
                continue  # |v^n| >= 4 dominates the shift
            w = v**n + shift
            if abs(w) < 1e-12:
                continue  # multiple zero of P, not a critical value
            if abs(w) < 1.0 - 1e-12:
                ok = False
                break
        if ok:
            out.append(n)
    return out
