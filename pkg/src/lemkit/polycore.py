"""Monic polynomials represented by their zero multisets.

The zero multiset is the source of truth everywhere in this package:
evaluation is the plain product of (z - z_j), log-magnitude evaluation is
the sum of log-distances (well defined even when the product over- or
underflows), and the Newton ratio p'/p is the sum of reciprocals.
Coefficients are expanded only on demand, and only below a degree bound:
past ~degree 128 the binomial growth of elementary symmetric functions
makes double-precision coefficient arithmetic meaningless.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

# Coefficient expansion is refused above this degree; see module docstring.
MAX_EXPANSION_DEGREE = 128


@dataclass(frozen=True)
class MonicPolynomial:
    """A monic polynomial stored as its multiset of zeros.

    Repeated entries mean multiplicity. The array is read-only; building a
    modified polynomial means building a new instance.
    """

    zeros: np.ndarray

    def __init__(self, zeros):
        z = np.atleast_1d(np.asarray(zeros, dtype=complex)).ravel().copy()
        if z.size == 0:
            raise ValueError("a monic polynomial needs at least one zero")
        if not np.all(np.isfinite(z)):
            raise ValueError("zeros must be finite")
        z.setflags(write=False)
        object.__setattr__(self, "zeros", z)

    @property
    def degree(self) -> int:
        return int(self.zeros.size)

    def evaluate(self, z):
        """prod (z - z_j). Overflows to inf for large degree far from the zeros;
        use log_abs for magnitudes in that regime."""
        z = np.asarray(z, dtype=complex)
        diffs = z[..., np.newaxis] - self.zeros
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.prod(diffs, axis=-1)
        return out if out.ndim else complex(out)

    def log_abs(self, z):
        """log|p(z)| as the sum of log|z - z_j| in input (zero-array) order.

        Returns -inf when z hits a zero. The fixed summation order keeps
        results reproducible and bit-identical to the discrete potential of
        the empirical zero measure.
        """
        z = np.asarray(z, dtype=complex)
        d = np.abs(z[..., np.newaxis] - self.zeros)
        with np.errstate(divide="ignore"):
            logs = np.log(d)
        out = np.sum(logs, axis=-1)
        return out if out.ndim else float(out)

    def newton_ratio(self, z):
        """p'(z)/p(z) = sum 1/(z - z_j); inf at a zero of p."""
        z = np.asarray(z, dtype=complex)
        diffs = z[..., np.newaxis] - self.zeros
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.sum(1.0 / diffs, axis=-1)
        if np.any(diffs == 0):
            pole = np.any(diffs == 0, axis=-1)
            out = np.where(pole, complex(np.inf, 0.0), out)
        return out if out.ndim else complex(out)

    def coefficients(self) -> np.ndarray:
        """Expand to coefficients, ascending degree, last entry exactly 1.

        Refuses degrees above MAX_EXPANSION_DEGREE.
        """
        n = self.degree
        if n > MAX_EXPANSION_DEGREE:
            raise ValueError(
                f"degree {n} exceeds the coefficient expansion bound "
                f"{MAX_EXPANSION_DEGREE}; use the product/log forms instead"
            )
        c = np.array([1.0 + 0j])
        for zj in self.zeros:
            c = np.convolve(c, np.array([-zj, 1.0 + 0j]))
        c[-1] = 1.0
        return c

    def scale(self, t: float) -> "MonicPolynomial":
        """The rescaled polynomial p_t(z) = t^n p(z/t); its zeros are t*z_j."""
        t = float(t)
        if not (t > 0 and np.isfinite(t)):
            raise ValueError("scale factor must be a positive finite real")
        return MonicPolynomial(t * self.zeros)

    def sorted_zeros(self) -> np.ndarray:
        order = np.lexsort((self.zeros.imag, self.zeros.real))
        return self.zeros[order]


def derivative_coefficients(coeffs: np.ndarray) -> np.ndarray:
    """Coefficient vector (ascending) of the derivative. Not normalized:
    the leading entry is n for a monic input of degree n."""
    c = np.asarray(coeffs, dtype=complex)
    if c.size < 2:
        raise ValueError("cannot differentiate a constant")
    return c[1:] * np.arange(1, c.size)


def evaluate_coefficients(coeffs: np.ndarray, z):
    """Horner evaluation of an ascending coefficient vector."""
    c = np.asarray(coeffs, dtype=complex)
    z = np.asarray(z, dtype=complex)
    acc = np.full(z.shape, c[-1])
    for a in c[-2::-1]:
        acc = acc * z + a
    return acc if acc.ndim else complex(acc)


def poly_json_dict(p: MonicPolynomial) -> dict:
    """JSON form {"zeros": [[re, im], ...]}, sorted ascending by (re, im)."""
    zs = p.sorted_zeros()
    return {"zeros": [[float(z.real), float(z.imag)] for z in zs]}


def poly_from_json_dict(d: dict) -> MonicPolynomial:
    """Reader accepts zeros in any order."""
    if "zeros" not in d:
        raise ValueError("polynomial JSON must contain a 'zeros' list")
    pairs = d["zeros"]
    zeros = [complex(float(re), float(im)) for re, im in pairs]
    return MonicPolynomial(zeros)


def save_polynomial(p: MonicPolynomial, path) -> None:
    with open(path, "w") as fh:
        json.dump(poly_json_dict(p), fh)
        fh.write("\n")


def load_polynomial(path) -> MonicPolynomial:
    with open(path) as fh:
        return poly_from_json_dict(json.load(fh))
