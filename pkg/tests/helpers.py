"""Small geometry helpers shared by the test modules."""

import numpy as np


def convex_hull(points):
    """Monotone-chain convex hull; input complex, output list of complex vertices."""
    pts = sorted(set((float(z.real), float(z.imag)) for z in np.asarray(points)))
    if len(pts) <= 2:
        return [complex(*p) for p in pts]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return [complex(*p) for p in lower[:-1] + upper[:-1]]


def distance_to_segment(z, a, b):
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return abs(z - a)
    t = ((z - a).real * ab.real + (z - a).imag * ab.imag) / denom
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * ab))


def distance_to_hull(z, hull):
    """Distance from a complex point to a convex hull (0 when inside)."""
    if len(hull) == 1:
        return abs(z - hull[0])
    if len(hull) == 2:
        return distance_to_segment(z, hull[0], hull[1])
    inside = True
    m = len(hull)
    for i in range(m):
        a, b = hull[i], hull[(i + 1) % m]
        crossv = (b.real - a.real) * (z.imag - a.imag) - (b.imag - a.imag) * (z.real - a.real)
        if crossv < 0:
            inside = False
            break
    if inside:
        return 0.0
    return min(distance_to_segment(z, hull[i], hull[(i + 1) % m]) for i in range(m))


def separated_disk_zeros(rng, degree, radius=1.0, min_sep=0.08, max_tries=20000):
    """Random points in a disk with a minimum pairwise separation.

    The separation keeps the coefficient <-> zero round trip well
    conditioned; nearly-coincident simple zeros are exercised by the
    dedicated clustering tests instead.
    """
    out = []
    tries = 0
    while len(out) < degree:
        tries += 1
        if tries > max_tries:
            raise RuntimeError("separation rejection sampling stalled")
        w = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if abs(w) > radius:
            continue
        if all(abs(w - v) >= min_sep for v in out):
            out.append(w)
    return np.array(out, dtype=complex)


def faber_laurent_oracle(psi_coeffs, n, samples=2048, radius=4.0):
    """Polynomial part of Phi^n extracted numerically, as ascending coefficients.

    With psi(w) = w + a0 + a1/w + ... the Laurent coefficient of w^k in
    psi(w)^j vanishes for k > j and is 1 at k = j, so requiring the w^k
    coefficients of sum_j f_j psi^j - w^n to vanish for k < n is an
    upper-triangular system solved by back-substitution. Laurent
    coefficients come from an FFT around |w| = radius, where the series
    converges comfortably for the tails used in tests.
    """
    a = [complex(c) for c in psi_coeffs]
    t = np.arange(samples)
    w = radius * np.exp(2j * np.pi * t / samples)
    psi = w + sum(aj * w ** (-j) for j, aj in enumerate(a))
    mat = np.zeros((n + 1, n + 1), dtype=complex)
    power = np.ones_like(w)
    for j in range(n + 1):
        if j:
            power = power * psi
        spectrum = np.fft.fft(power) / samples
        for k in range(n + 1):
            mat[k, j] = spectrum[k] * radius ** (-k)
    f = np.zeros(n + 1, dtype=complex)
    f[n] = 1.0
    for k in range(n - 1, -1, -1):
        f[k] = -np.dot(mat[k, k + 1 :], f[k + 1 :]) / mat[k, k]
    return f
