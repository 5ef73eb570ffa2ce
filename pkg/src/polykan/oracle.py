"""Exact-rational reference expansions of the polynomial families.

A deliberately independent second implementation: each family's polynomials
are expanded symbolically as rational coefficient vectors using only exact
arithmetic, sharing no evaluation code with the floating-point kernels in
:mod:`polykan.basis`.  Intended for tests and small degrees (n <= ~16).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .families import (
    KBONACCI_ORDER,
    DivisionDegenerateError,
    FamilySpec,
    UnsupportedDegreeError,
)

__all__ = [
    "ExactPolynomial",
    "UnsupportedFamilyError",
    "eval_exact",
    "expand_family",
    "bernoulli_exact",
    "X",
    "ONE",
    "ZERO",
]


class UnsupportedFamilyError(ValueError):
    """Family has no exact-rational expansion (irrational parameters)."""


@dataclass(frozen=True)
class ExactPolynomial:
    """Polynomial with exact rational coefficients, index = power of x.

    Canonical form: no trailing zero coefficient; the zero polynomial has an
    empty coefficient tuple.
    """

    coeffs: tuple[Fraction, ...]

    @classmethod
    def from_coeffs(cls, coeffs) -> "ExactPolynomial":
        out = [Fraction(c) for c in coeffs]
        while out and out[-1] == 0:
            out.pop()
        return cls(tuple(out))

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __add__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        width = max(len(self.coeffs), len(other.coeffs))
        return ExactPolynomial.from_coeffs(
            [self[i] + other[i] for i in range(width)]
        )

    def __sub__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        width = max(len(self.coeffs), len(other.coeffs))
        return ExactPolynomial.from_coeffs(
            [self[i] - other[i] for i in range(width)]
        )

    def __neg__(self) -> "ExactPolynomial":
        return ExactPolynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        if not self.coeffs or not other.coeffs:
            return ZERO
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            for j, cj in enumerate(other.coeffs):
                out[i + j] += ci * cj
        return ExactPolynomial.from_coeffs(out)

    def scaled(self, factor) -> "ExactPolynomial":
        factor = Fraction(factor)
        if factor == 0:
            return ZERO
        return ExactPolynomial(tuple(c * factor for c in self.coeffs))

    def times_x(self) -> "ExactPolynomial":
        if not self.coeffs:
            return ZERO
        return ExactPolynomial((Fraction(0),) + self.coeffs)

    def __getitem__(self, power: int) -> Fraction:
        return self.coeffs[power] if power < len(self.coeffs) else Fraction(0)


ZERO = ExactPolynomial(())
ONE = ExactPolynomial((Fraction(1),))
X = ExactPolynomial((Fraction(0), Fraction(1)))


def eval_exact(p: ExactPolynomial, t) -> Fraction:
    """Horner evaluation in exact arithmetic; the zero polynomial gives 0."""
    t = Fraction(t)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * t + c
    return acc


def _linear(c0, c1) -> ExactPolynomial:
    return ExactPolynomial.from_coeffs([Fraction(c0), Fraction(c1)])


def bernoulli_exact(n: int) -> Fraction:
    """Bernoulli number B_n via the Akiyama-Tanigawa scheme (B_1 = -1/2).

    A different algorithm from the recurrence used by the float kernels, so
    the two tables cross-check each other.
    """
    if n == 1:
        return Fraction(-1, 2)  # Akiyama-Tanigawa natively yields +1/2
    row = [Fraction(1, j + 1) for j in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(n - i + 1):
            row[j] = (j + 1) * (row[j] - row[j + 1])
    return row[0]


def _seq_frac(param, index: int, *, family: str, name: str) -> Fraction:
    if isinstance(param, float):
        return Fraction(param)
    if index >= len(param):
        raise UnsupportedDegreeError(
            f"{family}: sequence parameter {name!r} has {len(param)} entries "
            f"but index {index} is required"
        )
    return Fraction(param[index])


def _expand_recurrence(n, p0, p1, step):
    """Run p_{k} = step(k, p_{k-1}, p_{k-2}) from the two seeds up to index n."""
    if n == 0:
        return p0
    prev, cur = p0, p1
    for k in range(2, n + 1):
        prev, cur = cur, step(k, cur, prev)
    return cur


def _expand_kbonacci(order: int, n: int) -> ExactPolynomial:
    polys = [ZERO, ONE]
    for k in range(2, min(n, order - 1) + 1):
        polys.append(polys[k - 1].times_x() + polys[k - 2])
    for k in range(order, n + 1):
        acc = polys[k - 1].times_x()
        for r in range(2, order + 1):
            acc = acc + polys[k - r]
        polys.append(acc)
    return polys[n]


def _expand_boubaker(n: int) -> ExactPolynomial:
    def step(k, cur, prev):
        # B_k = x B_{k-1} - (k-1)^2 B_{k-2}
        return cur.times_x() - prev.scaled((k - 1) ** 2)

    return _expand_recurrence(n, ONE, X, step)


def _expand_vieta_pell(n: int) -> ExactPolynomial:
    def step(k, cur, prev):
        return cur.times_x().scaled(2) + prev

    return _expand_recurrence(n, ONE, X.scaled(2), step)


def _expand_fermat(n: int) -> ExactPolynomial:
    if n == 0:
        return ONE
    return ExactPolynomial.from_coeffs(
        [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    )


def _expand_gottlieb(n: int) -> ExactPolynomial:
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        coeffs[n - k] += math.comb(n, k) * bernoulli_exact(k)
    return ExactPolynomial.from_coeffs(coeffs)


def _expand_charlier(a: Fraction, n: int) -> ExactPolynomial:
    falling = ONE
    total = ZERO
    for k in range(n + 1):
        if k > 0:
            falling = falling * _linear(-(k - 1), 1)
        c = Fraction(math.comb(n, k)) * (-a) ** (n - k) / math.factorial(k)
        total = total + falling.scaled(c)
    return total


def _expand_narayana(n: int) -> ExactPolynomial:
    if n == 0:
        return ONE
    coeffs = [
        Fraction(math.comb(n, k) * math.comb(n, k - 1), n) for k in range(1, n + 1)
    ]
    return ExactPolynomial.from_coeffs(coeffs)


def _expand_al_salam_carlitz(a: Fraction, q: Fraction, n: int) -> ExactPolynomial:
    def step(k, cur, prev):
        # U_k from the printed recurrence at index k-1.
        m = k - 1
        return (_linear(-a * q**m, 1) * cur) - prev.scaled(q ** (m - 1) * (1 - q**m))

    return _expand_recurrence(n, ONE, _linear(-a, 1), step)


def _expand_bannai_ito(spec: FamilySpec, n: int) -> ExactPolynomial:
    rho, tau = spec.params["rho"], spec.params["tau"]

    def step(k, cur, prev):
        m = k - 1
        rm = _seq_frac(rho, m, family="bannai-ito", name="rho")
        tm = _seq_frac(tau, m, family="bannai-ito", name="tau")
        return (_linear(-rm, 1) * cur) - prev.scaled(tm)

    r0 = _seq_frac(rho, 0, family="bannai-ito", name="rho") if n >= 1 else Fraction(0)
    return _expand_recurrence(n, ONE, _linear(-r0, 1), step)


def _expand_askey_wilson(spec: FamilySpec, n: int) -> ExactPolynomial:
    a, b, c, d, q = (Fraction(spec.params[key]) for key in ("a", "b", "c", "d", "q"))
    ab, cd, abcd = a * b, c * d, a * b * c * d
    if n == 0:
        return ONE
    den1 = 1 + abcd * q * q
    if den1 == 0:
        raise DivisionDegenerateError("askey-wilson: zero denominator 1 + abcd q^2 at n=1")
    p1 = _linear(-(a + b) * (1 + cd * q), 2 * (1 + ab * q)).scaled(Fraction(1) / den1)

    def step(k, cur, prev):
        g1 = 1 - ab * q ** (k - 1)
        g2 = 1 - cd * q ** (k - 1)
        e2nm2 = 1 - abcd * q ** (2 * k - 2)
        e2nm1 = 1 - abcd * q ** (2 * k - 1)
        e2n = 1 - abcd * q ** (2 * k)
        qn = 1 - q**k
        if e2nm1 * e2n == 0 or e2nm2 * e2nm1 == 0 or qn == 0:
            raise DivisionDegenerateError(f"askey-wilson: zero denominator at n={k}")
        A_k = g1 * g2 * e2nm2 / (e2nm1 * e2n)
        C_k = qn * g1 * g2 * e2nm2 / (e2nm2 * e2nm1)
        return ((_linear(-A_k, 2) * cur) - prev.scaled(C_k)).scaled(Fraction(1) / qn)

    return _expand_recurrence(n, ONE, p1, step)


def _expand_boas_buck(spec: FamilySpec, n: int) -> ExactPolynomial:
    a_seq, b_seq = spec.params["a_seq"], spec.params["b_seq"]

    def ab(k):
        return (
            _seq_frac(a_seq, k, family="boas-buck", name="a_seq"),
            _seq_frac(b_seq, k, family="boas-buck", name="b_seq"),
        )

    if n == 0:
        return ONE
    a0, b0 = ab(0)
    a1, b1 = ab(1)
    if a1 - b1 == 0:
        raise DivisionDegenerateError("boas-buck: a_1 - b_1 = 0")
    p1 = _linear(-b0, a0).scaled(Fraction(1) / (a1 - b1))

    def step(k, cur, prev):
        akm1, bkm1 = ab(k - 1)
        akm2, bkm2 = ab(k - 2)
        ak, bk = ab(k)
        if ak - bk == 0:
            raise DivisionDegenerateError(f"boas-buck: a_n - b_n = 0 at n={k}")
        lead = _linear(-bkm1, akm1)
        return ((lead * cur) - prev.scaled(akm2 - bkm2)).scaled(Fraction(1) / (ak - bk))

    return _expand_recurrence(n, ONE, p1, step)


def _expand_monomial(n: int) -> ExactPolynomial:
    return ExactPolynomial.from_coeffs([Fraction(0)] * n + [Fraction(1)])


def expand_family(spec: FamilySpec, n: int) -> ExactPolynomial:
    """Expand the family's n-th polynomial as exact rational coefficients.

    Meixner-Pollaczek is rejected: cos(phi) is irrational for the parameters
    of interest, so its reference is high-precision summation instead.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    fam = spec.family
    if fam == "meixner-pollaczek":
        raise UnsupportedFamilyError(
            "meixner-pollaczek has no rational expansion; use the high-precision reference"
        )
    if fam in KBONACCI_ORDER:
        order = KBONACCI_ORDER[fam]
        if fam == "octanacci" and spec.params.get("literal", False):
            order = 7
        return _expand_kbonacci(order, n)
    if fam == "boubaker":
        return _expand_boubaker(n)
    if fam == "vieta-pell":
        return _expand_vieta_pell(n)
    if fam == "fermat":
        return _expand_fermat(n)
    if fam == "gottlieb":
        return _expand_gottlieb(n)
    if fam == "charlier":
        return _expand_charlier(Fraction(spec.params["a"]), n)
    if fam == "narayana":
        return _expand_narayana(n)
    if fam == "al-salam-carlitz":
        return _expand_al_salam_carlitz(
            Fraction(spec.params["a"]), Fraction(spec.params["q"]), n
        )
    if fam == "bannai-ito":
        return _expand_bannai_ito(spec, n)
    if fam == "askey-wilson":
        return _expand_askey_wilson(spec, n)
    if fam == "boas-buck":
        return _expand_boas_buck(spec, n)
    if fam == "pade":
        return _expand_monomial(n)
    raise AssertionError(f"unregistered family {fam!r}")
