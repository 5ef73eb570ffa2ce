"""Floating-point evaluation kernels for the 18 polynomial families.

Every kernel produces values P_0..P_D and first derivatives P'_0..P'_D at
the evaluation points, propagating (value, derivative) pairs through the
family's recurrence or closed form.  No finite differencing anywhere.

Kernels are vectorized: ``eval_basis_many`` accepts an array of points and
returns arrays of shape ``t.shape + (D + 1,)``; ``eval_basis`` is the
scalar wrapper.  All functions are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .families import (
    KBONACCI_ORDER,
    DivisionDegenerateError,
    FamilySpec,
    InvalidParameterError,
    UnsupportedDegreeError,
    family_spec,
    seq_at,
)

__all__ = [
    "BasisEval",
    "InvalidOrderError",
    "NonrealResultError",
    "SingularSystemError",
    "bernoulli_numbers",
    "eval_basis",
    "eval_basis_many",
    "eval_al_salam_carlitz",
    "eval_askey_wilson",
    "eval_bannai_ito",
    "eval_boas_buck",
    "eval_boubaker",
    "eval_charlier",
    "eval_fermat",
    "eval_gottlieb",
    "eval_kbonacci",
    "eval_meixner_pollaczek",
    "eval_narayana",
    "pade_construct",
]


class InvalidOrderError(InvalidParameterError):
    """Generalized-Fibonacci order outside 3..8."""


class NonrealResultError(ArithmeticError):
    """A nominally real evaluation kept a non-negligible imaginary part."""


class SingularSystemError(ValueError):
    """The linear system for the rational-approximant denominator is rank-deficient."""


#: Imaginary residue tolerance for Meixner-Pollaczek: |Im| <= tol * (1 + |Re|).
MP_IMAG_TOL = 1e-9

_KBONACCI_NAME = {order: name for name, order in KBONACCI_ORDER.items()}


@dataclass(frozen=True)
class BasisEval:
    """Values P_0..P_D and derivatives dP_0..dP_D at a single point."""

    degree_max: int
    values: np.ndarray
    derivs: np.ndarray


def _alloc(degree_max: int, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    shape = t.shape + (degree_max + 1,)
    return np.zeros(shape), np.zeros(shape)


def _kernel_vieta_pell(params, D, t):
    V, dV = _alloc(D, t)
    V[..., 0] = 1.0
    if D >= 1:
        V[..., 1] = 2.0 * t
        dV[..., 1] = 2.0
    for n in range(2, D + 1):
        V[..., n] = 2.0 * t * V[..., n - 1] + V[..., n - 2]
        dV[..., n] = 2.0 * V[..., n - 1] + 2.0 * t * dV[..., n - 1] + dV[..., n - 2]
    return V, dV


def _kernel_kbonacci(order: int, D: int, t: np.ndarray):
    V, dV = _alloc(D, t)
    # Seeds P_0 = 0, P_1 = 1, then the two-term Fibonacci-polynomial pattern
    # x^(j-1) + ... up to P_{order-1}.
    if D >= 1:
        V[..., 1] = 1.0
    for n in range(2, min(D, order - 1) + 1):
        V[..., n] = t * V[..., n - 1] + V[..., n - 2]
        dV[..., n] = V[..., n - 1] + t * dV[..., n - 1] + dV[..., n - 2]
    for n in range(order, D + 1):
        acc = t * V[..., n - 1]
        dacc = V[..., n - 1] + t * dV[..., n - 1]
        for r in range(2, order + 1):
            acc = acc + V[..., n - r]
            dacc = dacc + dV[..., n - r]
        V[..., n] = acc
        dV[..., n] = dacc
    return V, dV


def _kernel_boubaker(params, D, t):
    V, dV = _alloc(D, t)
    V[..., 0] = 1.0
    if D >= 1:
        V[..., 1] = t
        dV[..., 1] = 1.0
    for n in range(1, D):
        V[..., n + 1] = t * V[..., n] - float(n * n) * V[..., n - 1]
        dV[..., n + 1] = V[..., n] + t * dV[..., n] - float(n * n) * dV[..., n - 1]
    return V, dV


def _kernel_fermat(params, D, t):
    # The product over all n-th roots of unity collapses to t^n - 1.
    V, dV = _alloc(D, t)
    V[..., 0] = 1.0
    power = np.ones_like(t)
    for n in range(1, D + 1):
        dV[..., n] = float(n) * power
        power = power * t
        V[..., n] = power - 1.0
    return V, dV


def _kernel_gottlieb(params, D, t):
    V, dV = _alloc(D, t)
    bern = [float(b) for b in bernoulli_numbers(D)]
    powers = [np.ones_like(t)]
    for _ in range(D):
        powers.append(powers[-1] * t)
    for n in range(D + 1):
        val = np.zeros_like(t)
        der = np.zeros_like(t)
        for k in range(n + 1):
            c = math.comb(n, k) * bern[k]
            val = val + c * powers[n - k]
            if n - k >= 1:
                der = der + c * (n - k) * powers[n - k - 1]
        V[..., n] = val
        dV[..., n] = der
    return V, dV


def _kernel_charlier(params, D, t):
    a = params["a"]
    V, dV = _alloc(D, t)
    # Falling factorials t(t-1)...(t-k+1) with real argument, paired with
    # their derivatives via the product rule.
    ff = [np.ones_like(t)]
    dff = [np.zeros_like(t)]
    for k in range(D):
        factor = t - float(k)
        dff.append(dff[-1] * factor + ff[-1])
        ff.append(ff[-1] * factor)
    for n in range(D + 1):
        val = np.zeros_like(t)
        der = np.zeros_like(t)
        for k in range(n + 1):
            c = math.comb(n, k) * (-a) ** (n - k) / math.factorial(k)
            val = val + c * ff[k]
            der = der + c * dff[k]
        V[..., n] = val
        dV[..., n] = der
    return V, dV


def _kernel_al_salam_carlitz(params, D, t):
    a, q = params["a"], params["q"]
    V, dV = _alloc(D, t)
    V[..., 0] = 1.0
    if D >= 1:
        # n = 0 step with U_{-1} = 0 yields U_1 = x - a.
        V[..., 1] = t - a
        dV[..., 1] = 1.0
    for n in range(1, D):
        shift = a * q**n
        back = q ** (n - 1) * (1.0 - q**n)
        V[..., n + 1] = (t - shift) * V[..., n] - back * V[..., n - 1]
        dV[..., n + 1] = V[..., n] + (t - shift) * dV[..., n] - back * dV[..., n - 1]
    return V, dV


def _kernel_bannai_ito(params, D, t):
    rho, tau = params["rho"], params["tau"]
    V, dV = _alloc(D, t)
    V[..., 0] = 1.0
    if D >= 1:
        r0 = seq_at(rho, 0, family="bannai-ito", name="rho")
        V[..., 1] = t - r0
        dV[..., 1] = 1.0
    for n in range(1, D):
        rn = seq_at(rho, n, family="bannai-ito", name="rho")
        tn = seq_at(tau, n, family="bannai-ito", name="tau")
        V[..., n + 1] = (t - rn) * V[..., n] - tn * V[..., n - 1]
        dV[..., n + 1] = V[..., n] + (t - rn) * dV[..., n] - tn * dV[..., n - 1]
    return V, dV


def _kernel_askey_wilson(params, D, t):
    a, b, c, d, q = params["a"], params["b"], params["c"], params["d"], params["q"]
    ab, cd, abcd = a * b, c * d, a * b * c * d
    V, dV = _alloc(D, t)
    V[..., 0] = 1.0
    if D >= 1:
        den1 = 1.0 + abcd * q * q
        if den1 == 0.0:
            raise DivisionDegenerateError("askey-wilson: zero denominator 1 + abcd q^2 at n=1")
        V[..., 1] = (2.0 * (1.0 + ab * q) * t - (a + b) * (1.0 + cd * q)) / den1
        dV[..., 1] = 2.0 * (1.0 + ab * q) / den1
    for n in range(2, D + 1):
        g1 = 1.0 - ab * q ** (n - 1)
        g2 = 1.0 - cd * q ** (n - 1)
        e2nm2 = 1.0 - abcd * q ** (2 * n - 2)
        e2nm1 = 1.0 - abcd * q ** (2 * n - 1)
        e2n = 1.0 - abcd * q ** (2 * n)
        qn = 1.0 - q**n
        if e2nm1 * e2n == 0.0 or e2nm2 * e2nm1 == 0.0 or qn == 0.0:
            raise DivisionDegenerateError(f"askey-wilson: zero denominator at n={n}")
        A_n = g1 * g2 * e2nm2 / (e2nm1 * e2n)
        C_n = qn * g1 * g2 * e2nm2 / (e2nm2 * e2nm1)
        V[..., n] = ((2.0 * t - A_n) * V[..., n - 1] - C_n * V[..., n - 2]) / qn
        dV[..., n] = (2.0 * V[..., n - 1] + (2.0 * t - A_n) * dV[..., n - 1] - C_n * dV[..., n - 2]) / qn
    return V, dV


def _kernel_boas_buck(params, D, t):
    a_seq, b_seq = params["a_seq"], params["b_seq"]

    def ab(n):
        return (
            seq_at(a_seq, n, family="boas-buck", name="a_seq"),
            seq_at(b_seq, n, family="boas-buck", name="b_seq"),
        )

    V, dV = _alloc(D, t)
    V[..., 0] = 1.0
    if D >= 1:
        a0, b0 = ab(0)
        a1, b1 = ab(1)
        den = a1 - b1
        if den == 0.0:
            raise DivisionDegenerateError("boas-buck: a_1 - b_1 = 0")
        V[..., 1] = (a0 * t - b0) / den
        dV[..., 1] = a0 / den
    for n in range(2, D + 1):
        anm1, bnm1 = ab(n - 1)
        anm2, bnm2 = ab(n - 2)
        an, bn = ab(n)
        den = an - bn
        if den == 0.0:
            raise DivisionDegenerateError(f"boas-buck: a_n - b_n = 0 at n={n}")
        lead = anm1 * t - bnm1
        V[..., n] = (lead * V[..., n - 1] - (anm2 - bnm2) * V[..., n - 2]) / den
        dV[..., n] = (anm1 * V[..., n - 1] + lead * dV[..., n - 1] - (anm2 - bnm2) * dV[..., n - 2]) / den
    return V, dV


def _kernel_meixner_pollaczek(params, D, t):
    lam, phi = params["lam"], params["phi"]
    V, dV = _alloc(D, t)
    z = 1.0 - complex(math.cos(2.0 * phi), -math.sin(2.0 * phi))
    tc = lam + 1j * t
    poch2l = 1.0  # (2 lambda)_n as a running product
    for n in range(D + 1):
        pref = poch2l / math.factorial(n) * complex(math.cos(n * phi), math.sin(n * phi))
        total = np.zeros(t.shape, dtype=complex)
        dtotal = np.zeros(t.shape, dtype=complex)
        bval = np.ones(t.shape, dtype=complex)  # (lambda + i t)_k
        bder = np.zeros(t.shape, dtype=complex)
        coef = complex(1.0)  # (-n)_k z^k / ((2 lambda)_k k!)
        for k in range(n + 1):
            total = total + coef * bval
            dtotal = dtotal + coef * bder
            if k < n:
                coef *= (-n + k) * z / ((2.0 * lam + k) * (k + 1))
                bder = bder * (tc + k) + 1j * bval
                bval = bval * (tc + k)
        val = pref * total
        der = pref * dtotal
        if np.any(np.abs(val.imag) > MP_IMAG_TOL * (1.0 + np.abs(val.real))):
            raise NonrealResultError(
                f"meixner-pollaczek: imaginary residue exceeds tolerance at n={n}"
            )
        V[..., n] = val.real
        dV[..., n] = der.real
        poch2l *= 2.0 * lam + n
    return V, dV


def _narayana_coefficient(n: int, k: int) -> int:
    return math.comb(n, k) * math.comb(n, k - 1) // n


def _kernel_narayana(params, D, t):
    V, dV = _alloc(D, t)
    V[..., 0] = 1.0  # constant term chosen so the basis has a bias slot
    powers = [np.ones_like(t)]
    for _ in range(max(D - 1, 0)):
        powers.append(powers[-1] * t)
    for n in range(1, D + 1):
        val = np.zeros_like(t)
        der = np.zeros_like(t)
        for k in range(1, n + 1):
            c = float(_narayana_coefficient(n, k))
            val = val + c * powers[k - 1]
            if k >= 2:
                der = der + c * (k - 1) * powers[k - 2]
        V[..., n] = val
        dV[..., n] = der
    return V, dV


def _kernel_monomial(params, D, t):
    # Power basis underlying the learnable rational edge.
    V, dV = _alloc(D, t)
    V[..., 0] = 1.0
    power = np.ones_like(t)
    for n in range(1, D + 1):
        dV[..., n] = float(n) * power
        power = power * t
        V[..., n] = power
    return V, dV


def _dispatch(spec: FamilySpec, D: int, t: np.ndarray):
    fam = spec.family
    if fam in KBONACCI_ORDER:
        order = KBONACCI_ORDER[fam]
        if fam == "octanacci" and spec.params.get("literal", False):
            order = 7  # printed recurrence: identical to the heptanacci form
        return _kernel_kbonacci(order, D, t)
    if fam == "vieta-pell":
        return _kernel_vieta_pell(spec.params, D, t)
    if fam == "boubaker":
        return _kernel_boubaker(spec.params, D, t)
    if fam == "fermat":
        return _kernel_fermat(spec.params, D, t)
    if fam == "gottlieb":
        return _kernel_gottlieb(spec.params, D, t)
    if fam == "charlier":
        return _kernel_charlier(spec.params, D, t)
    if fam == "al-salam-carlitz":
        return _kernel_al_salam_carlitz(spec.params, D, t)
    if fam == "bannai-ito":
        return _kernel_bannai_ito(spec.params, D, t)
    if fam == "askey-wilson":
        return _kernel_askey_wilson(spec.params, D, t)
    if fam == "boas-buck":
        return _kernel_boas_buck(spec.params, D, t)
    if fam == "meixner-pollaczek":
        return _kernel_meixner_pollaczek(spec.params, D, t)
    if fam == "narayana":
        return _kernel_narayana(spec.params, D, t)
    if fam == "pade":
        return _kernel_monomial(spec.params, D, t)
    raise AssertionError(f"unregistered family {fam!r}")


def eval_basis_many(spec: FamilySpec, degree_max: int, t) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate values and derivatives at an array of points.

    Returns ``(values, derivs)`` with shape ``t.shape + (degree_max + 1,)``.
    """
    if degree_max < 0:
        raise InvalidParameterError(f"degree_max must be >= 0, got {degree_max}")
    t = np.asarray(t, dtype=float)
    return _dispatch(spec, int(degree_max), t)


def eval_basis(spec: FamilySpec, degree_max: int, t: float) -> BasisEval:
    """Evaluate one family at a single point; see :func:`eval_basis_many`."""
    t = float(t)
    if not math.isfinite(t):
        raise InvalidParameterError(f"evaluation point must be finite, got {t}")
    values, derivs = eval_basis_many(spec, degree_max, np.asarray(t))
    return BasisEval(degree_max=int(degree_max), values=values, derivs=derivs)


# -- named per-family entry points ------------------------------------------


def eval_kbonacci(k: int, degree_max: int, t: float) -> BasisEval:
    """Order-k Fibonacci-type polynomials, k in 3..8."""
    if k not in _KBONACCI_NAME:
        raise InvalidOrderError(f"k-bonacci order must be in 3..8, got {k}")
    return eval_basis(family_spec(_KBONACCI_NAME[k]), degree_max, t)


def eval_boubaker(degree_max: int, t: float) -> BasisEval:
    return eval_basis(family_spec("boubaker"), degree_max, t)


def eval_fermat(degree_max: int, t: float) -> BasisEval:
    return eval_basis(family_spec("fermat"), degree_max, t)


def eval_gottlieb(degree_max: int, t: float) -> BasisEval:
    return eval_basis(family_spec("gottlieb"), degree_max, t)


def eval_charlier(a: float, degree_max: int, t: float) -> BasisEval:
    return eval_basis(family_spec("charlier", a=a), degree_max, t)


def eval_al_salam_carlitz(a: float, q: float, degree_max: int, t: float) -> BasisEval:
    return eval_basis(family_spec("al-salam-carlitz", a=a, q=q), degree_max, t)


def eval_bannai_ito(rho, tau, degree_max: int, t: float) -> BasisEval:
    return eval_basis(family_spec("bannai-ito", rho=rho, tau=tau), degree_max, t)


def eval_askey_wilson(a, b, c, d, q, degree_max: int, t: float) -> BasisEval:
    return eval_basis(family_spec("askey-wilson", a=a, b=b, c=c, d=d, q=q), degree_max, t)


def eval_boas_buck(a_seq, b_seq, degree_max: int, t: float) -> BasisEval:
    return eval_basis(family_spec("boas-buck", a_seq=a_seq, b_seq=b_seq), degree_max, t)


def eval_meixner_pollaczek(lam: float, phi: float, degree_max: int, t: float) -> BasisEval:
    return eval_basis(family_spec("meixner-pollaczek", lam=lam, phi=phi), degree_max, t)


def eval_narayana(degree_max: int, t: float) -> BasisEval:
    return eval_basis(family_spec("narayana"), degree_max, t)


# -- Bernoulli numbers -------------------------------------------------------

_bernoulli_cache: list[Fraction] = [Fraction(1)]


def bernoulli_numbers(m: int) -> tuple[Fraction, ...]:
    """Exact Bernoulli numbers B_0..B_m (convention B_1 = -1/2), memoized.

    Computed from B_k = -(1/(k+1)) * sum_{j<k} C(k+1, j) B_j.  The cache is
    a write-once memo: concurrent fills recompute identical entries.
    """
    if m < 0:
        raise InvalidParameterError(f"m must be >= 0, got {m}")
    if m >= len(_bernoulli_cache):
        table = list(_bernoulli_cache)
        for k in range(len(table), m + 1):
            acc = sum((Fraction(math.comb(k + 1, j)) * table[j] for j in range(k)), Fraction(0))
            table.append(-acc / (k + 1))
        _bernoulli_cache[:] = table
    return tuple(_bernoulli_cache[: m + 1])


# -- Taylor-matching rational approximant ------------------------------------


def pade_construct(taylor, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Solve the order conditions for the [m/n] rational approximant.

    ``taylor`` supplies f_0..f_{m+n}.  Returns ``(p, q)`` with numerator
    coefficients p_0..p_m and denominator coefficients q_0=1, q_1..q_n, such
    that sum_j q_j f_{k-j} equals p_k for k <= m and 0 for m < k <= m+n.
    """
    if m < 0 or n < 0:
        raise InvalidParameterError(f"pade orders must be >= 0, got m={m}, n={n}")
    f = np.asarray(taylor, dtype=float).ravel()
    if f.size < m + n + 1:
        raise InvalidParameterError(
            f"need m+n+1 = {m + n + 1} Taylor coefficients, got {f.size}"
        )
    f = f[: m + n + 1]
    q = np.ones(n + 1)
    if n > 0:
        A = np.zeros((n, n))
        rhs = np.zeros(n)
        for r in range(n):
            k = m + 1 + r
            rhs[r] = -f[k]
            for j in range(1, n + 1):
                if 0 <= k - j <= m + n:
                    A[r, j - 1] = f[k - j]
        try:
            tail = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError(f"denominator system is singular: {exc}") from exc
        if not np.all(np.isfinite(tail)):
            raise SingularSystemError("denominator system produced non-finite solution")
        q[1:] = tail
    p = np.zeros(m + 1)
    for k in range(m + 1):
        p[k] = sum(q[j] * f[k - j] for j in range(0, min(k, n) + 1))
    return p, q
