import math
import time
from fractions import Fraction

import numpy as np
import pytest

from polykan import basis, oracle
from polykan.basis import (
    DivisionDegenerateError,
    InvalidOrderError,
    InvalidParameterError,
    NonrealResultError,
    SingularSystemError,
    UnsupportedDegreeError,
    bernoulli_numbers,
    eval_basis,
    eval_basis_many,
    pade_construct,
)
from polykan.families import FAMILY_NAMES, family_spec

RATIONAL_FAMILIES = tuple(n for n in FAMILY_NAMES if n != "meixner-pollaczek")


def exact_value(spec, n, t):
    return float(oracle.eval_exact(oracle.expand_family(spec, n), Fraction(t)))


# -- dispatcher and seeds -----------------------------------------------------


def test_degree_zero_is_constant_for_every_family():
    for name in FAMILY_NAMES:
        ev = eval_basis(family_spec(name), 0, 0.37)
        assert ev.values.shape == (1,)
        assert ev.derivs[0] == 0.0
        expected = 0.0 if name in ("tribonacci", "tetranacci", "pentanacci",
                                   "hexanacci", "heptanacci", "octanacci") else 1.0
        assert ev.values[0] == expected


def test_vieta_pell_examples():
    ev = eval_basis(family_spec("vieta-pell"), 1, 0.7)
    assert np.allclose(ev.values, [1.0, 1.4])
    assert eval_basis(family_spec("vieta-pell"), 2, 1.0).values[2] == pytest.approx(5.0)


def test_negative_degree_rejected():
    with pytest.raises(InvalidParameterError):
        eval_basis(family_spec("fermat"), -1, 0.0)
    with pytest.raises(InvalidParameterError):
        eval_basis(family_spec("fermat"), 0, float("nan"))


# -- k-bonacci ----------------------------------------------------------------


def test_kbonacci_examples():
    assert np.allclose(basis.eval_kbonacci(3, 2, 2.0).values, [0.0, 1.0, 2.0])
    assert basis.eval_kbonacci(7, 6, 1.0).values[6] == pytest.approx(8.0)
    assert basis.eval_kbonacci(3, 3, 1.0).values[3] == pytest.approx(2.0)


def test_kbonacci_seeds_follow_fibonacci_pattern():
    # Seeds P_0..P_{k-1} are the two-term Fibonacci polynomials.
    t = 1.7
    fib = [0.0, 1.0]
    for _ in range(8):
        fib.append(t * fib[-1] + fib[-2])
    for k in range(3, 9):
        ev = basis.eval_kbonacci(k, k - 1, t)
        assert np.allclose(ev.values, fib[:k])


def test_kbonacci_invalid_order():
    for k in (2, 9, 0, -3):
        with pytest.raises(InvalidOrderError):
            basis.eval_kbonacci(k, 3, 0.0)


def test_octanacci_literal_flag_matches_heptanacci():
    t = np.linspace(-1.5, 1.5, 7)
    lit, _ = eval_basis_many(family_spec("octanacci", literal=True), 9, t)
    hep, _ = eval_basis_many(family_spec("heptanacci"), 9, t)
    assert np.array_equal(lit, hep)
    # the default eight-term form separates the two families from degree 8 on
    oct_default, _ = eval_basis_many(family_spec("octanacci"), 9, t)
    assert np.array_equal(oct_default[..., :7], hep[..., :7])
    assert not np.allclose(oct_default[..., 8], hep[..., 8])


# -- boubaker / fermat / gottlieb / charlier ----------------------------------


def test_boubaker_examples():
    assert np.allclose(eval_basis(family_spec("boubaker"), 1, 3.0).values, [1.0, 3.0])
    assert eval_basis(family_spec("boubaker"), 2, 0.0).values[2] == pytest.approx(-1.0)
    assert eval_basis(family_spec("boubaker"), 3, 1.0).values[3] == pytest.approx(-4.0)


def test_fermat_examples_and_identity():
    assert eval_basis(family_spec("fermat"), 0, 5.0).values[0] == 1.0
    assert basis.eval_fermat(2, 2.0).values[2] == pytest.approx(3.0)
    assert basis.eval_fermat(1, 1.0).values[1] == pytest.approx(0.0)
    # t^n - 1 identity, exact in rational arithmetic for n <= 16
    t = Fraction(3, 7)
    for n in range(17):
        p = oracle.expand_family(family_spec("fermat"), n)
        expected = t**n - 1 if n >= 1 else Fraction(1)
        assert oracle.eval_exact(p, t) == expected


def test_bernoulli_examples_and_identities():
    table = bernoulli_numbers(16)
    assert table[0] == 1
    assert table[1] == Fraction(-1, 2)
    assert table[2] == Fraction(1, 6)
    assert table[3] == 0
    for k in range(3, 16, 2):
        assert table[k] == 0
    for m in range(1, 17):
        assert sum(math.comb(m + 1, j) * table[j] for j in range(m + 1)) == 0
    with pytest.raises(InvalidParameterError):
        bernoulli_numbers(-1)


def test_gottlieb_examples():
    assert eval_basis(family_spec("gottlieb"), 0, 2.0).values[0] == 1.0
    assert basis.eval_gottlieb(1, 1.0).values[1] == pytest.approx(0.5)
    assert basis.eval_gottlieb(2, 0.0).values[2] == pytest.approx(1.0 / 6.0)


def test_charlier_examples():
    assert basis.eval_charlier(2.0, 0, 9.9).values[0] == 1.0
    assert basis.eval_charlier(2.0, 1, 3.0).values[1] == pytest.approx(1.0)
    assert basis.eval_charlier(2.0, 2, 0.0).values[2] == pytest.approx(4.0)
    with pytest.raises(InvalidParameterError):
        basis.eval_charlier(-1.0, 2, 0.0)


def test_charlier_at_zero_is_minus_a_power_n():
    # Under the printed explicit formula only the k=0 term survives at x=0.
    spec = family_spec("charlier", a=2.0)
    for n in range(9):
        p = oracle.expand_family(spec, n)
        assert oracle.eval_exact(p, Fraction(0)) == Fraction(-2) ** n


# -- recurrence families with parameters --------------------------------------


def test_al_salam_carlitz_examples():
    assert basis.eval_al_salam_carlitz(1.0, 0.5, 0, 0.3).values[0] == 1.0
    assert basis.eval_al_salam_carlitz(1.0, 0.5, 1, 2.0).values[1] == pytest.approx(1.0)
    assert basis.eval_al_salam_carlitz(1.0, 0.5, 2, 1.0).values[2] == pytest.approx(-0.5)
    with pytest.raises(InvalidParameterError):
        basis.eval_al_salam_carlitz(1.0, 1.0, 2, 0.0)


def test_bannai_ito_examples():
    assert basis.eval_bannai_ito(0.5, 0.25, 0, 1.0).values[0] == 1.0
    assert basis.eval_bannai_ito(0.5, 0.25, 1, 1.0).values[1] == pytest.approx(0.5)
    assert basis.eval_bannai_ito(0.5, 0.25, 2, 0.0).values[2] == pytest.approx(0.0)


def test_bannai_ito_explicit_sequences_and_length_guard():
    rho, tau = (0.5, 0.4, 0.3), (0.25, 0.2, 0.15)
    ev = basis.eval_bannai_ito(rho, tau, 3, 0.9)
    spec = family_spec("bannai-ito", rho=rho, tau=tau)
    for n in range(4):
        assert ev.values[n] == pytest.approx(exact_value(spec, n, 0.9))
    with pytest.raises(UnsupportedDegreeError):
        basis.eval_bannai_ito(rho, tau, 4, 0.9)


def test_askey_wilson_examples():
    half = (0.5, 0.5, 0.5, 0.5, 0.5)
    assert basis.eval_askey_wilson(*half, 0, 0.2).values[0] == 1.0
    assert basis.eval_askey_wilson(*half, 1, 0.5).values[1] == pytest.approx(0.0)
    assert basis.eval_askey_wilson(*half, 1, 1.0).values[1] == pytest.approx(1.125 / 1.015625)


def test_askey_wilson_zero_denominator_reports_degree():
    # abcd q^3 = 1 makes 1 - abcd q^{2n-1} vanish at n = 2.
    with pytest.raises(DivisionDegenerateError) as err:
        basis.eval_askey_wilson(8.0, 1.0, 1.0, 1.0, 0.5, 2, 0.1)
    assert "n=2" in str(err.value)


def test_boas_buck_examples():
    assert basis.eval_boas_buck(1.0, 0.0, 0, 0.1).values[0] == 1.0
    assert basis.eval_boas_buck(1.0, 0.0, 1, 0.37).values[1] == pytest.approx(0.37)
    assert basis.eval_boas_buck(1.0, 0.0, 2, 1.0).values[2] == pytest.approx(0.0)


def test_boas_buck_degenerate_denominator():
    with pytest.raises(DivisionDegenerateError):
        basis.eval_boas_buck(1.0, 1.0, 2, 0.5)


# -- Meixner-Pollaczek ---------------------------------------------------------


def test_meixner_pollaczek_examples():
    assert basis.eval_meixner_pollaczek(1.0, math.pi / 4, 0, 0.0).values[0] == 1.0
    got = basis.eval_meixner_pollaczek(1.0, math.pi / 4, 1, 1.0).values[1]
    assert got == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-12)


def test_meixner_pollaczek_closed_form_degree_one():
    # P_1 = 2 (lambda cos phi + x sin phi)
    for lam in (0.5, 1.0, 2.0):
        for phi in (math.pi / 6, math.pi / 4, math.pi / 3):
            for x in (-2.0, -0.3, 0.0, 1.7):
                got = basis.eval_meixner_pollaczek(lam, phi, 1, x).values[1]
                want = 2.0 * (lam * math.cos(phi) + x * math.sin(phi))
                assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_meixner_pollaczek_reality_grid():
    pts = np.linspace(-3.0, 3.0, 16)
    for lam in (0.5, 1.0, 2.0):
        for phi in (math.pi / 6, math.pi / 4, math.pi / 3):
            spec = family_spec("meixner-pollaczek", lam=lam, phi=phi)
            values, derivs = eval_basis_many(spec, 8, pts)  # raises on residue
            assert np.all(np.isfinite(values))
            assert np.all(np.isfinite(derivs))


# -- Narayana -------------------------------------------------------------------


def test_narayana_examples():
    assert basis.eval_narayana(1, -3.3).values[1] == pytest.approx(1.0)
    assert basis.eval_narayana(3, 1.0).values[3] == pytest.approx(5.0)
    assert basis.eval_narayana(2, 0.0).values[2] == pytest.approx(1.0)


def test_narayana_catalan_identity():
    catalan = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]
    spec = family_spec("narayana")
    for n in range(1, 11):
        p = oracle.expand_family(spec, n)
        assert oracle.eval_exact(p, Fraction(1)) == catalan[n]


# -- oracle equivalence and derivatives (module invariants) ---------------------


def test_float_kernels_match_exact_oracle():
    started = time.perf_counter()
    points = np.linspace(-2.0, 2.0, 64)
    for name in RATIONAL_FAMILIES:
        spec = family_spec(name)
        values, _ = eval_basis_many(spec, 8, points)
        for n in range(9):
            poly = oracle.expand_family(spec, n)
            for i, x in enumerate(points):
                ref = float(oracle.eval_exact(poly, Fraction(x)))
                assert abs(values[i, n] - ref) <= 1e-9 * (1.0 + abs(ref)), (name, n, x)
    assert time.perf_counter() - started < 5.0


def test_derivatives_match_central_differences():
    rng = np.random.default_rng(20240601)
    pts = rng.uniform(-1.0, 1.0, 16)
    h = 1e-6
    for name in FAMILY_NAMES:
        spec = family_spec(name)
        _, derivs = eval_basis_many(spec, 8, pts)
        plus, _ = eval_basis_many(spec, 8, pts + h)
        minus, _ = eval_basis_many(spec, 8, pts - h)
        fd = (plus - minus) / (2.0 * h)
        err = np.abs(fd - derivs) / (1.0 + np.abs(fd))
        assert err.max() <= 1e-5, (name, err.max())


def test_degree_and_leading_coefficient():
    expectations = {
        "fermat": lambda n: n,
        "gottlieb": lambda n: n,
        "boubaker": lambda n: n,
        "vieta-pell": lambda n: n,
        "narayana": lambda n: n - 1 if n >= 1 else 0,
    }
    for name, degree_of in expectations.items():
        spec = family_spec(name)
        start = 1 if name == "fermat" else 0
        for n in range(start, 9):
            poly = oracle.expand_family(spec, n)
            assert poly.degree == degree_of(n), (name, n)
            assert poly.coeffs[-1] != 0
    for kb in ("tribonacci", "tetranacci", "pentanacci", "hexanacci", "heptanacci", "octanacci"):
        spec = family_spec(kb)
        for n in range(1, 9):
            poly = oracle.expand_family(spec, n)
            assert poly.degree == n - 1, (kb, n)
            assert poly.coeffs[-1] != 0


def test_boubaker_and_vieta_pell_parity():
    for name in ("boubaker", "vieta-pell"):
        spec = family_spec(name)
        for n in range(9):
            poly = oracle.expand_family(spec, n)
            for power, coeff in enumerate(poly.coeffs):
                if (power - n) % 2 != 0:
                    assert coeff == 0, (name, n, power)


# -- rational approximant construction ------------------------------------------


def test_pade_construct_examples():
    p, q = pade_construct([4.25], 0, 0)
    assert np.allclose(p, [4.25]) and np.allclose(q, [1.0])

    taylor = [1.0, -2.0, 0.25, 3.5]
    p, q = pade_construct(taylor, 3, 0)
    assert np.allclose(p, taylor) and np.allclose(q, [1.0])

    p, q = pade_construct([1.0, 1.0, 0.5], 1, 1)
    assert np.allclose(p, [1.0, 0.5], atol=1e-12)
    assert np.allclose(q, [1.0, -0.5], atol=1e-12)


def test_pade_construct_matches_exp_expansion():
    # [2/2] approximant of exp: numerator/denominator (1 +- x/2 + x^2/12)
    taylor = [1 / math.factorial(k) for k in range(5)]
    p, q = pade_construct(taylor, 2, 2)
    assert np.allclose(p, [1.0, 0.5, 1.0 / 12.0], atol=1e-12)
    assert np.allclose(q, [1.0, -0.5, 1.0 / 12.0], atol=1e-12)


def test_pade_construct_errors():
    with pytest.raises(InvalidParameterError):
        pade_construct([1.0, 2.0], 1, 1)  # needs m+n+1 = 3 coefficients
    with pytest.raises(SingularSystemError):
        pade_construct([1.0, 0.0, 0.0, 0.0, 0.0], 1, 2)  # singular denominator system
