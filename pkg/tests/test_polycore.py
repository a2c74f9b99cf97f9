import json

import numpy as np
import pytest

from lemkit.polycore import (
    MAX_EXPANSION_DEGREE,
    MonicPolynomial,
    derivative_coefficients,
    evaluate_coefficients,
    load_polynomial,
    poly_from_json_dict,
    poly_json_dict,
    save_polynomial,
)

from helpers import separated_disk_zeros


def test_construction_basics():
    p = MonicPolynomial([1.0, -2.0, 1j])
    assert p.degree == 3
    assert p.zeros.dtype == complex
    with pytest.raises((ValueError, RuntimeError)):
        p.zeros[0] = 0.0  # stored array is read-only

    with pytest.raises(ValueError):
        MonicPolynomial([])
    with pytest.raises(ValueError):
        MonicPolynomial([np.inf])
    with pytest.raises(ValueError):
        MonicPolynomial([np.nan + 0j])


def test_scalar_in_scalar_out():
    p = MonicPolynomial([0.0, 1.0])
    assert isinstance(p.evaluate(2.0), complex)
    assert isinstance(p.log_abs(2.0), float)
    assert isinstance(p.newton_ratio(2.0), complex)
    arr = p.evaluate(np.array([2.0, 3.0]))
    assert isinstance(arr, np.ndarray) and arr.shape == (2,)


def test_evaluate_against_horner():
    """Product evaluation must agree with Horner on the expanded coefficients."""
    rng = np.random.default_rng(61000)
    for _ in range(25):
        n = int(rng.integers(1, 21))
        zeros = rng.normal(size=n) + 1j * rng.normal(size=n)
        p = MonicPolynomial(zeros)
        c = p.coefficients()
        pts = rng.normal(size=8) + 1j * rng.normal(size=8)
        direct = p.evaluate(pts)
        horner = evaluate_coefficients(c, pts)
        scale = np.maximum(np.abs(horner), 1.0)
        assert np.all(np.abs(direct - horner) / scale < 1e-10)


def test_evaluate_is_exactly_zero_on_zeros():
    p = MonicPolynomial([2.0, -1.0 + 0.5j])
    assert p.evaluate(2.0) == 0
    assert p.log_abs(2.0) == -np.inf


def test_log_abs_matches_evaluate():
    rng = np.random.default_rng(61001)
    for _ in range(25):
        n = int(rng.integers(1, 31))
        zeros = rng.normal(size=n) + 1j * rng.normal(size=n)
        zeros /= np.maximum(1.0, np.max(np.abs(zeros)))  # keep inside unit disk
        p = MonicPolynomial(zeros)
        pts = 2.0 * (rng.normal(size=16) + 1j * rng.normal(size=16))
        keep = np.min(np.abs(pts[:, None] - zeros[None, :]), axis=1) > 0.05
        pts = pts[keep]
        got = p.log_abs(pts)
        want = np.log(np.abs(p.evaluate(pts)))
        assert np.all(np.abs(got - want) <= 1e-10 * np.maximum(1.0, np.abs(want)))


def test_log_abs_survives_overflow_scale():
    # degree high enough that the raw product overflows at a far point
    zeros = np.full(400, 0.0, dtype=complex)
    p = MonicPolynomial(zeros)
    assert not np.isfinite(abs(p.evaluate(1e3)))
    assert p.log_abs(1e3) == pytest.approx(400 * np.log(1e3))


def test_newton_ratio_against_coefficient_oracle():
    rng = np.random.default_rng(61002)
    for _ in range(20):
        n = int(rng.integers(2, 21))
        zeros = rng.normal(size=n) + 1j * rng.normal(size=n)
        p = MonicPolynomial(zeros)
        c = p.coefficients()
        dc = derivative_coefficients(c)
        pts = 2.5 * (rng.normal(size=12) + 1j * rng.normal(size=12))
        keep = np.min(np.abs(pts[:, None] - zeros[None, :]), axis=1) > 0.1
        pts = pts[keep]
        got = p.newton_ratio(pts)
        want = evaluate_coefficients(dc, pts) / evaluate_coefficients(c, pts)
        assert np.all(np.abs(got - want) <= 1e-10 * np.abs(want))
        # far from every zero the two forms agree essentially to rounding
        far = pts[np.min(np.abs(pts[:, None] - zeros[None, :]), axis=1) > 1.0]
        if far.size:
            g2 = p.newton_ratio(far)
            w2 = evaluate_coefficients(dc, far) / evaluate_coefficients(c, far)
            assert np.all(np.abs(g2 - w2) <= 1e-12 * np.abs(w2))


def test_newton_ratio_pole_at_zero():
    p = MonicPolynomial([1.0, 3.0])
    assert not np.isfinite(p.newton_ratio(1.0))


def test_coefficients_monic_and_bounded():
    p = MonicPolynomial(np.arange(5) * 1j)
    c = p.coefficients()
    assert c[-1] == 1.0
    assert c.size == 6

    big = MonicPolynomial(np.zeros(MAX_EXPANSION_DEGREE + 1))
    with pytest.raises(ValueError):
        big.coefficients()
    # the bound itself is still allowed
    edge = MonicPolynomial(np.zeros(MAX_EXPANSION_DEGREE))
    assert edge.coefficients().size == MAX_EXPANSION_DEGREE + 1


def test_coefficients_small_cases():
    # (z - 1)(z + 1) = z^2 - 1
    c = MonicPolynomial([1.0, -1.0]).coefficients()
    assert np.allclose(c, [-1.0, 0.0, 1.0], atol=1e-15)
    # (z - (1+i))(z - (1-i)) = z^2 - 2z + 2
    c = MonicPolynomial([1 + 1j, 1 - 1j]).coefficients()
    assert np.allclose(c, [2.0, -2.0, 1.0], atol=1e-15)


def test_scale_moves_zeros_and_round_trips():
    rng = np.random.default_rng(61003)
    zeros = rng.normal(size=9) + 1j * rng.normal(size=9)
    p = MonicPolynomial(zeros)
    for t in (0.25, 1.0, 3.5):
        q = p.scale(t)
        assert np.allclose(q.zeros, t * zeros, rtol=0, atol=0)
        back = q.scale(1.0 / t)
        assert np.all(np.abs(back.zeros - zeros) <= 1e-12 * np.maximum(1.0, np.abs(zeros)))
    # p_t(z) = t^n p(z/t): check the defining identity at sample points
    q = p.scale(2.0)
    pts = rng.normal(size=6) + 1j * rng.normal(size=6)
    lhs = q.evaluate(pts)
    rhs = 2.0 ** p.degree * p.evaluate(pts / 2.0)
    assert np.all(np.abs(lhs - rhs) <= 1e-10 * np.maximum(1.0, np.abs(rhs)))

    for bad in (0.0, -1.0, np.inf, np.nan):
        with pytest.raises(ValueError):
            p.scale(bad)


def test_sorted_zeros_orders_lexicographically():
    p = MonicPolynomial([1 + 2j, -1 + 0j, 1 - 2j, -1 - 5j])
    s = p.sorted_zeros()
    keys = [(z.real, z.imag) for z in s]
    assert keys == sorted(keys)


def test_json_round_trip(tmp_path):
    rng = np.random.default_rng(61004)
    zeros = rng.normal(size=11) + 1j * rng.normal(size=11)
    p = MonicPolynomial(zeros)
    d = poly_json_dict(p)
    assert list(d.keys()) == ["zeros"]
    q = poly_from_json_dict(d)
    assert np.array_equal(q.sorted_zeros(), p.sorted_zeros())

    path = tmp_path / "poly.json"
    save_polynomial(p, path)
    r = load_polynomial(path)
    assert np.array_equal(r.sorted_zeros(), p.sorted_zeros())
    # the file is honest JSON with the documented shape
    with open(path) as fh:
        raw = json.load(fh)
    assert raw == d


def test_json_reader_accepts_any_order():
    d = {"zeros": [[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0]]}
    shuffled = {"zeros": [[0.0, 2.0], [1.0, 0.0], [-1.0, 0.0]]}
    a = poly_from_json_dict(d)
    b = poly_from_json_dict(shuffled)
    assert np.array_equal(a.sorted_zeros(), b.sorted_zeros())
    with pytest.raises(ValueError):
        poly_from_json_dict({"points": []})


def test_derivative_coefficients_matches_numpy():
    rng = np.random.default_rng(61005)
    for _ in range(10):
        n = int(rng.integers(2, 12))
        c = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        got = derivative_coefficients(c)
        want = np.polyder(np.poly1d(c[::-1])).c[::-1]
        assert np.allclose(got, want, rtol=1e-13, atol=0)
    with pytest.raises(ValueError):
        derivative_coefficients(np.array([1.0]))


def test_round_trip_zeros_to_coefficients_and_back():
    """Zeros in the unit disk, degree <= 30: recoverable to 1e-8 from coefficients."""
    from lemkit.rootfind import all_roots

    rng = np.random.default_rng(61006)
    for _ in range(12):
        n = int(rng.integers(2, 31))
        zeros = separated_disk_zeros(rng, n)
        p = MonicPolynomial(zeros)
        rs = all_roots(p.coefficients())
        assert rs.converged
        got = np.sort_complex(rs.expanded_points())
        want = np.sort_complex(zeros)
        assert got.size == want.size
        assert np.max(np.abs(got - want)) < 1e-8
