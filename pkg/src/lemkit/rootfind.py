"""Simultaneous-iteration root solver with multiplicity clustering.

The primary path is Aberth-Ehrlich iteration on the coefficient vector:
it needs only polynomial evaluation, is deterministic (fixed initial
points on a circle, rotated by an irrational angle to break symmetry
traps), and handles degree ~100 in double precision. A companion-matrix
eigenvalue solver is kept as an independent cross-check oracle.

Three numerical subtleties drive the post-processing:

1. Aberth stalls on multiple roots. For p(z) = z^m the iterate circle
   contracts by (m-1)/(m+1) per sweep, so a multiplicity-59 root is still
   ~1e-3 wide after 200 sweeps. Roots are therefore merged not only at a
   fixed cluster radius but whenever their Weierstrass inclusion disks
   B(z_i, n|p(z_i)| / prod_{j!=i}|z_i - z_j|) overlap: a connected group
   of k disks contains exactly k roots, which is precisely the
   multiplicity evidence we need. All radii are computed in log space so
   the products cannot underflow.

2. Near a stalled multiple root the evaluated |p| is pure rounding noise,
   which can be accidentally tiny and hide the cluster. The evaluated
   magnitude is floored at the Horner running-error scale
   ~4n*eps*sum|c_j||z|^j before the disk radius is formed.

3. A multiplicity-k zero of p' under perturbation of size eta dissolves
   into a genuine ring of k simple zeros of radius ~eta^(1/k) -- for
   k = 29 even eta ~ 1e-14 gives a ring of radius ~0.3, so the critical
   point solver never expands p to coefficients (whose Vieta rounding is
   exactly such a perturbation) and instead iterates on the logarithmic
   derivative S(z) = sum m_i/(z - zeta_i) evaluated from the zeros. The
   residual eps-ring that evaluation noise still produces is merged back
   by a backward-error plausibility rule: a group of k points with spread
   rho is reported as one multiplicity-k critical point exactly when a
   k-fold zero at its centroid is consistent with the data, i.e. when
   rho^k * prod(dist to other roots) * n sits below the evaluation noise
   of S*q at the centroid (greedy agglomeration over edges by increasing
   length). The multiple-root description is preferred whenever both
   descriptions are backward-plausible.

Cluster centroids are polished with the multiplicity-aware Newton step
z -= k*p/p' (which restores quadratic convergence at a k-fold root),
but only while the evaluation stands above its own noise floor; below
it the centroid is already as good as the data allows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polycore import (
    MonicPolynomial,
    derivative_coefficients,
    evaluate_coefficients,
)

EPS = np.finfo(float).eps
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200
# Fixed irrational rotation (radians) of the initial circle of guesses.
INITIAL_ROTATION = 0.5 * (math.sqrt(5.0) - 1.0)


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicities, sorted by (re, im).

    residual is max over roots of |q(root)| / sum_j |c_j||root|^j, the
    backward-relative evaluation residual of the monic target q.
    """

    roots: tuple
    residual: float
    converged: bool

    @property
    def points(self) -> np.ndarray:
        return np.array([r for r, _ in self.roots], dtype=complex)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([m for _, m in self.roots], dtype=int)

    def expanded_points(self) -> np.ndarray:
        """Each root repeated by its multiplicity."""
        return np.repeat(self.points, self.multiplicities)


@dataclass(frozen=True)
class CriticalPoint:
    point: complex
    multiplicity: int
    value: float
    log_value: float


@dataclass(frozen=True)
class CriticalSet:
    entries: tuple
    residual: float
    converged: bool

    @property
    def points(self) -> np.ndarray:
        return np.array([e.point for e in self.entries], dtype=complex)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([e.multiplicity for e in self.entries], dtype=int)

    @property
    def log_values(self) -> np.ndarray:
        return np.array([e.log_value for e in self.entries], dtype=float)


class SolverError(RuntimeError):
    """Root iteration failed badly enough that no result can be reported."""


def _horner_abs_scale(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """sum_j |c_j| |z|^j, the natural magnitude scale of an evaluation."""
    return np.real(evaluate_coefficients(np.abs(c).astype(complex), np.abs(z)))


def _initial_points(c: np.ndarray, n: int) -> np.ndarray:
    bound = 1.0 + float(np.max(np.abs(c[:-1]))) if n >= 1 else 1.0
    radius = 1.0 + bound
    k = np.arange(n)
    return radius * np.exp(1j * (2.0 * np.pi * k / n + INITIAL_ROTATION))


def _aberth_iterate(c, z, tol, max_iter):
    """Aberth-Ehrlich sweeps; converged points are frozen. Returns (z, all_ok)."""
    n = z.size
    dc = derivative_coefficients(c)
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        p = evaluate_coefficients(c, z)
        scale = _horner_abs_scale(c, z)
        # backward-stable points are done regardless of the step size
        tiny = np.abs(p) <= 4.0 * n * EPS * scale
        dp = evaluate_coefficients(dc, z)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            newton = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulse = np.sum(1.0 / diff, axis=1)
            w = newton / (1.0 - newton * repulse)
        w = np.where(np.isfinite(w), w, 0.0)
        small = np.abs(w) <= tol * np.maximum(1.0, np.abs(z))
        step = np.where(active & ~tiny, w, 0.0)
        z = z - step
        active &= ~(small | tiny)
        if not active.any():
            return z, True
    return z, not active.any()


def _union_find_groups(n, edges):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _cluster_roots(c, z, cluster_radius):
    """Merge approximations into multiplicity clusters.

    Merge rule: fixed radius OR overlapping Weierstrass inclusion disks
    (log-space, noise-floored |p|; see module docstring).
    """
    n = z.size
    if n == 1:
        return [([0], z[0])]
    dist = np.abs(z[:, None] - z[None, :])
    with np.errstate(divide="ignore"):
        logdist = np.log(dist)
    np.fill_diagonal(logdist, 0.0)
    log_offdiag_prod = np.sum(logdist, axis=1)

    pabs = np.abs(evaluate_coefficients(c, z))
    floor = 4.0 * n * EPS * _horner_abs_scale(c, z)
    with np.errstate(divide="ignore"):
        logp = np.log(np.maximum(pabs, floor))
    log_radius = math.log(n) + logp - log_offdiag_prod

    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i, j] <= cluster_radius:
                edges.append((i, j))
                continue
            with np.errstate(over="ignore"):
                ri = math.exp(min(log_radius[i], 700.0))
                rj = math.exp(min(log_radius[j], 700.0))
            if dist[i, j] <= ri + rj:
                edges.append((i, j))
    groups = _union_find_groups(n, edges)
    return [(idx, np.mean(z[idx])) for idx in groups]


def _polish_multiple(c, dc, center, k, spread, cluster_radius):
    """Multiplicity-aware Newton polish of a cluster centroid.

    The total displacement is capped: a polish that wants to leave the
    cluster's own neighborhood is evidence of a mislabeled cluster, and in
    that case the centroid is kept.
    """
    start = center
    budget = 8.0 * spread + 10.0 * cluster_radius + 1e3 * EPS * (1.0 + abs(center))
    for _ in range(40):
        p = evaluate_coefficients(c, np.array([center]))[0]
        dp = evaluate_coefficients(dc, np.array([center]))[0]
        if dp == 0 or not np.isfinite(dp) or not np.isfinite(p):
            break
        step = k * p / dp
        if not np.isfinite(step):
            break
        candidate = center - step
        if abs(candidate - start) > budget:
            break
        center = candidate
        if abs(step) <= 4.0 * EPS * max(1.0, abs(center)):
            break
    return center


def _final_residual(c, points):
    pabs = np.abs(evaluate_coefficients(c, points))
    scale = _horner_abs_scale(c, points)
    scale = np.maximum(scale, 1e-300)
    return float(np.max(pabs / scale))


def all_roots(coeffs, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
              cluster_radius: float | None = None) -> RootSet:
    """All roots of a polynomial given by ascending coefficients.

    The input is normalized by its leading coefficient, so near-monic
    vectors (e.g. derivatives of monic polynomials) are accepted as-is.
    Deterministic for fixed inputs. On non-convergence the best available
    clustering is returned with converged=False.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size < 2:
        raise ValueError("need degree >= 1")
    if c[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    c = c / c[-1]
    n = c.size - 1
    if cluster_radius is None:
        cluster_radius = max(1e-7, tol * 100.0)

    if n == 1:
        root = -c[0]
        return RootSet(roots=((complex(root), 1),), residual=0.0, converged=True)

    z0 = _initial_points(c, n)
    z, iter_ok = _aberth_iterate(c, z0, tol, max_iter)

    dc = derivative_coefficients(c)
    clusters = _cluster_roots(c, z, cluster_radius)
    roots = []
    for idx, center in clusters:
        k = len(idx)
        spread = float(np.max(np.abs(z[idx] - center))) if k > 1 else 0.0
        center = _polish_multiple(c, dc, center, k, spread, cluster_radius)
        roots.append((complex(center), k))
    roots.sort(key=lambda rm: (rm[0].real, rm[0].imag))

    points = np.array([r for r, _ in roots], dtype=complex)
    residual = _final_residual(c, points)
    converged = bool(iter_ok or residual <= max(tol, 64.0 * EPS))
    return RootSet(roots=tuple(roots), residual=residual, converged=converged)


def solve_preimages(coeffs, target, tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER) -> RootSet:
    """All solutions of q(z) = target for the polynomial q given by coeffs."""
    c = np.asarray(coeffs, dtype=complex).ravel().copy()
    c[0] = c[0] - complex(target)
    return all_roots(c, tol=tol, max_iter=max_iter)


def companion_roots(coeffs) -> np.ndarray:
    """Eigenvalues of the companion matrix; the independent small-degree oracle."""
    c = np.asarray(coeffs, dtype=complex).ravel()
    c = c / c[-1]
    n = c.size - 1
    if n < 1:
        raise ValueError("need degree >= 1")
    m = np.zeros((n, n), dtype=complex)
    if n > 1:
        m[np.arange(1, n), np.arange(n - 1)] = 1.0
    m[:, -1] = -c[:-1]
    vals = np.linalg.eigvals(m)
    return vals[np.lexsort((vals.imag, vals.real))]


def _distinct_zeros(p: MonicPolynomial):
    """Group the zero multiset into distinct points with multiplicities."""
    zs = p.sorted_zeros()
    scale = max(1.0, float(np.max(np.abs(zs))))
    tol = 1e-12 * scale
    reps = [zs[0]]
    mult = [1]
    for z in zs[1:]:
        if abs(z - reps[-1]) <= tol:
            mult[-1] += 1
        else:
            reps.append(z)
            mult.append(1)
    return np.array(reps, dtype=complex), np.array(mult, dtype=int)


def _plausible_multiple(z, members, zeta, mf, n_total):
    """Backward-error test: could these points be one multiple critical point?

    With f = S*q the numerator polynomial of p'/p, declaring the group a
    single k-fold zero at its centroid m replaces f by the model
    fhat = n * (z - m)^k * prod(z - z_other). The model is accepted only
    if it reproduces the observed near-vanishing of f at every member:
    |fhat(z_i)| must sit within the floating-point evaluation noise of f
    at z_i for each member z_i. Evaluating at the members (not at m) is
    what rejects fake merges such as a symmetric pair whose centroid
    happens to land on a third root, where any centroid-based bound
    degenerates. The multiple-root description is preferred whenever both
    descriptions are backward-plausible.
    """
    pts = z[members]
    m = complex(np.mean(pts))
    if float(np.max(np.abs(pts - m))) == 0.0:
        return True
    k = len(members)
    mask = np.ones(z.size, dtype=bool)
    mask[members] = False
    others = z[mask]
    log_n = math.log(n_total)
    for zi in pts:
        du = np.abs(zi - zeta)
        if np.any(du == 0.0):
            return False
        step = abs(zi - m)
        if step == 0.0:
            continue
        with np.errstate(divide="ignore"):
            log_g = float(np.sum(np.log(np.abs(zi - others)))) if others.size else 0.0
        lhs = k * math.log(step) + log_g + log_n
        rhs = math.log(32.0 * EPS * float(np.dot(1.0 / du, mf))) + float(
            np.sum(np.log(du))
        )
        if lhs > rhs:
            return False
    return True


def _critical_points_product_form(p, tol, max_iter):
    """Critical points without coefficient expansion, valid for any degree.

    p'/p = sum m_i/(z - zeta_i) =: S(z), so the critical points away from
    the zeros are the zeros of the degree-(D-1) numerator f = S * q,
    q = prod(z - zeta_i) over the D distinct zeros. Newton's ratio for f
    is 1/(S'/S + q'/q), which is computable in O(D) per point directly
    from the zeros, so Aberth iteration runs with no coefficients at all.
    Each distinct zero of multiplicity m also carries multiplicity m-1 as
    a critical point.
    """
    zeta, mult = _distinct_zeros(p)
    d = zeta.size
    n = p.degree
    base = [(complex(zt), int(m - 1)) for zt, m in zip(zeta, mult) if m >= 2]
    if d == 1:
        return base, 0.0, True

    nsolve = d - 1
    # Critical points lie in the convex hull of the zeros, so start on the
    # smallest centroid-centred circle containing them.  An inflated circle
    # (radius 1 + max|zeta|) also works but the collective inward drift is
    # only O(1/n) per sweep, which starves high degrees of iterations.
    center = complex(np.mean(zeta))
    radius = float(np.max(np.abs(zeta - center)))
    k = np.arange(nsolve)
    z = center + radius * np.exp(
        1j * (2.0 * np.pi * k / max(nsolve, 1) + INITIAL_ROTATION))

    active = np.ones(nsolve, dtype=bool)
    mf = mult.astype(float)
    for _ in range(max_iter):
        u = 1.0 / (z[:, None] - zeta[None, :])
        s = u @ mf
        sp = -(u * u) @ mf
        qr = np.sum(u, axis=1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            newton = 1.0 / (sp / s + qr)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulse = np.sum(1.0 / diff, axis=1)
            w = newton / (1.0 - newton * repulse)
        w = np.where(np.isfinite(w), w, 0.0)
        # relative cancellation in S is the honest convergence measure here
        noise = 4.0 * EPS * (np.abs(u) @ mf)
        tiny = np.abs(s) <= noise
        small = np.abs(w) <= tol * np.maximum(1.0, np.abs(z))
        z = z - np.where(active & ~tiny, w, 0.0)
        active &= ~(small | tiny)
        if not active.any():
            break
    iter_ok = not active.any()

    # Cluster in log space, edges by increasing length. Three merge rules:
    # fixed radius, overlapping Weierstrass disks for f = S*q (|S| floored
    # at its cancellation noise), and the backward-error plausibility test
    # (module docstring, item 3): a group of k points with spread rho and
    # centroid m could collapse to a single k-fold critical point exactly
    # when rho^k * prod|m - others| * n is within the evaluation noise of
    # f at m, which is eps * sum(m_l |u_l|) * |q(m)|.
    cluster_radius = max(1e-7, tol * 100.0)
    u = 1.0 / (z[:, None] - zeta[None, :])
    s = u @ mf
    noise = 4.0 * EPS * (np.abs(u) @ mf)
    with np.errstate(divide="ignore"):
        logf = np.log(np.maximum(np.abs(s), noise)) + np.sum(
            np.log(np.abs(z[:, None] - zeta[None, :])), axis=1
        )
    if nsolve == 1:
        groups = [[0]]
    else:
        dist = np.abs(z[:, None] - z[None, :])
        with np.errstate(divide="ignore"):
            logdist = np.log(dist)
        np.fill_diagonal(logdist, 0.0)
        log_radius = math.log(nsolve) + logf - math.log(n) - np.sum(logdist, axis=1)

        parent = list(range(nsolve))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        members = {i: [i] for i in range(nsolve)}
        order = sorted(
            (dist[i, j], i, j) for i in range(nsolve) for j in range(i + 1, nsolve)
        )
        for dij, i, j in order:
            ra, rb = find(i), find(j)
            if ra == rb:
                continue
            wi = math.exp(min(log_radius[i], 700.0))
            wj = math.exp(min(log_radius[j], 700.0))
            merge = dij <= max(wi + wj, cluster_radius)
            if not merge:
                merge = _plausible_multiple(z, members[ra] + members[rb], zeta, mf, n)
            if merge:
                parent[ra] = rb
                members[rb] = members[rb] + members.pop(ra)
        groups = list(members.values())

    solved = []
    resid = 0.0
    for idx in groups:
        kmult = len(idx)
        center = complex(np.mean(z[idx]))
        spread = float(np.max(np.abs(z[idx] - center))) if kmult > 1 else 0.0
        budget = 8.0 * spread + 10.0 * cluster_radius + 1e3 * EPS * (1.0 + abs(center))
        start = center
        for _ in range(40):
            uc = 1.0 / (center - zeta)
            sc = np.dot(uc, mf)
            if abs(sc) <= 8.0 * EPS * np.dot(np.abs(uc), mf):
                break  # below the noise floor: the centroid is already optimal
            spc = -np.dot(uc * uc, mf)
            qrc = np.sum(uc)
            denom = spc / sc + qrc
            if denom == 0 or not np.isfinite(denom):
                break
            step = kmult / denom
            if not np.isfinite(step) or abs(center - step - start) > budget:
                break
            center = center - step
            if abs(step) <= 4.0 * EPS * max(1.0, abs(center)):
                break
        uc = 1.0 / (center - zeta)
        resid = max(resid, float(abs(np.dot(uc, mf)) / max(np.dot(np.abs(uc), mf), 1e-300)))
        solved.append((complex(center), kmult))

    entries = base + solved
    entries.sort(key=lambda rm: (rm[0].real, rm[0].imag))
    converged = bool(iter_ok or resid <= max(tol, 64.0 * EPS))
    return entries, resid, converged


def critical_points(p: MonicPolynomial, tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER) -> CriticalSet:
    """Roots of p' with multiplicities, each paired with |p| there.

    Multiplicities are counted (a multiplicity-k critical point contributes
    k to downstream tallies); the component-count formula requires exactly
    this convention. The solve always runs in product form, straight from
    the zeros: expanding to coefficients first injects noise that genuinely
    dissolves a multiplicity-k critical point into a ring of k simple ones
    of radius ~noise^(1/k), which for k = 29 is already ~0.3. The product
    form has no such expansion step and keeps the multiplicity recoverable
    at any degree.
    """
    n = p.degree
    if n < 2:
        raise ValueError("critical points need degree >= 2")

    pairs, residual, converged = _critical_points_product_form(p, tol, max_iter)

    total = sum(m for _, m in pairs)
    if total != n - 1:
        raise SolverError(
            f"critical point multiplicities sum to {total}, expected {n - 1}"
        )
    entries = []
    for point, m in pairs:
        logv = p.log_abs(point)
        value = float(np.exp(logv)) if logv != -np.inf else 0.0
        entries.append(CriticalPoint(point=complex(point), multiplicity=int(m),
                                     value=value, log_value=float(logv)))
    return CriticalSet(entries=tuple(entries), residual=residual, converged=converged)
