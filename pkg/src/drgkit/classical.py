"""Classical parameters (D, b, alpha, beta).

    c_i = [i] (1 + alpha [i-1]),    b_i = ([D] - [i]) (beta - alpha [i]),
    [i] = 1 + b + ... + b^(i-1).

Arithmetic is exact (``Fraction``) whenever b is rational; irrational roots of
the fitting polynomial are carried as floats and flagged ``exact=False``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .drg import IntersectionArray
from .errors import DegenerateDual, HypothesisViolated, NonIntegerEntry, NonPositiveEntry


def gaussian_bracket(i: int, b):
    """[i] = 1 + b + ... + b^(i-1); [0] = 0."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    if b == 1:
        return i
    total = 0 * b
    term = 1 + 0 * b
    for _ in range(i):
        total += term
        term *= b
    return total


@dataclass(frozen=True)
class ClassicalParameters:
    D: int
    b: object
    alpha: object
    beta: object

    def __post_init__(self):
        if self.D < 1:
            raise ValueError("D must be positive")
        if self.b == 0 or self.b == -1:
            raise ValueError("b must avoid 0 and -1")

    def astuple(self) -> tuple:
        return (self.D, self.b, self.alpha, self.beta)

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return int(v) if v.denominator == 1 else str(v)
            return v if isinstance(v, int) else float(v)

        return {"D": self.D, "b": enc(self.b), "alpha": enc(self.alpha), "beta": enc(self.beta)}


def _as_exact(v):
    if isinstance(v, (int, Fraction, Rational)):
        return Fraction(v)
    return v


def classical_b_c(p: ClassicalParameters) -> tuple[list, list]:
    """Raw (unvalidated) b_0..b_D and c_0..c_D."""
    b, al, be = (_as_exact(v) for v in (p.b, p.alpha, p.beta))
    br = [gaussian_bracket(i, b) for i in range(p.D + 1)]
    cs = [br[i] * (1 + al * br[i - 1]) if i > 0 else 0 * br[0] for i in range(p.D + 1)]
    bs = [(br[p.D] - br[i]) * (be - al * br[i]) for i in range(p.D + 1)]
    return bs, cs


def classical_intersection_array(p: ClassicalParameters, rel_tol: float = 1e-9) -> IntersectionArray:
    bs, cs = classical_b_c(p)
    vals = bs[:p.D] + cs[1:]
    ints = []
    for v in vals:
        if isinstance(v, Fraction):
            if v.denominator != 1:
                raise NonIntegerEntry(f"entry {v} is not an integer")
            iv = int(v)
        else:
            iv = int(round(float(v)))
            if abs(float(v) - iv) > rel_tol * max(1.0, abs(iv)):
                raise NonIntegerEntry(f"entry {v} is not an integer")
        if iv < 1:
            raise NonPositiveEntry(f"entry {iv} is not positive")
        ints.append(iv)
    return IntersectionArray(ints[:p.D], ints[p.D:])


@dataclass(frozen=True)
class FitCandidate:
    params: ClassicalParameters
    exact: bool
    max_deviation: float

    def to_json(self) -> dict:
        out = self.params.to_json()
        out.update({"exact": self.exact, "max_deviation": self.max_deviation})
        return out


@dataclass(frozen=True)
class FitReport:
    candidates: list = field(default_factory=list)

    @property
    def matched(self) -> bool:
        return bool(self.candidates)

    def contains(self, D, b, alpha, beta, tol: float = 1e-9) -> bool:
        for c in self.candidates:
            p = c.params
            if p.D == D and all(abs(float(u) - float(v)) <= tol * max(1.0, abs(float(v)))
                                for u, v in ((p.b, b), (p.alpha, alpha), (p.beta, beta))):
                return True
        return False

    def to_json(self) -> dict:
        return {"matched": self.matched, "candidates": [c.to_json() for c in self.candidates],
                "regime": "exact-rational (float only for irrational b)"}


def _b_polynomial(c2: int, c3: int) -> list[int]:
    # eliminate alpha: c3 = (1 + b + b^2)(c2 - b); coefficients highest degree first
    return [-1, c2 - 1, c2 - 1, c2 - c3]


def _integer_roots(coeffs: Sequence[int]) -> list[int]:
    """Integer roots of an integer polynomial whose leading coefficient is +-1."""
    coeffs = list(coeffs)
    roots = []
    while coeffs and coeffs[-1] == 0:
        roots.append(0)
        coeffs.pop()
    if len(coeffs) <= 1:
        return sorted(set(roots))
    c0 = abs(coeffs[-1])
    divisors = {d for t in range(1, int(c0 ** 0.5) + 1) if c0 % t == 0 for d in (t, c0 // t)}
    for d in sorted(divisors):
        for r in (d, -d):
            if sum(c * r ** (len(coeffs) - 1 - t) for t, c in enumerate(coeffs)) == 0:
                roots.append(r)
    return sorted(set(roots))


def _deviation(p: ClassicalParameters, arr: IntersectionArray) -> float:
    bs, cs = classical_b_c(p)
    got = [float(v) for v in bs[:arr.D] + cs[1:]]
    want = [float(v) for v in arr.b + arr.c]
    dev = max(abs(g - w) for g, w in zip(got, want))
    return max(dev, abs(float(bs[arr.D])))


def fit_classical_parameters(arr: IntersectionArray, float_tol: float = 1e-9) -> FitReport:
    """All (D, b, alpha, beta) reproducing ``arr``.

    b is a root of the cubic obtained from c_2 and c_3; alpha follows from c_2
    and beta from b_0 = [D] beta.  Each candidate is regenerated and compared
    against the whole array.
    """
    D = arr.D
    if D < 3:
        raise HypothesisViolated(f"classical fitting needs D >= 3 (D = {D})")
    c2, c3, b0 = arr.c[1], arr.c[2], arr.b[0]
    coeffs = _b_polynomial(c2, c3)
    exact_roots = [Fraction(r) for r in _integer_roots(coeffs)]
    float_roots = []
    for z in np.roots(coeffs):
        if abs(z.imag) > 1e-9 * max(1.0, abs(z)):
            continue
        x = float(z.real)
        if all(abs(x - float(r)) > 1e-7 for r in exact_roots):
            float_roots.append(x)
    cands = []
    for b, exact in [(r, True) for r in exact_roots] + [(r, False) for r in float_roots]:
        if abs(float(b)) < 1e-12 or abs(float(b) + 1) < 1e-12:
            continue
        alpha = Fraction(c2) / (1 + b) - 1 if exact else c2 / (1 + b) - 1
        bd = gaussian_bracket(D, b)
        if abs(float(bd)) < 1e-12:
            continue
        beta = Fraction(b0) / bd if exact else b0 / bd
        p = ClassicalParameters(D, int(b) if exact and b.denominator == 1 else b, alpha, beta)
        if exact:
            bs, cs = classical_b_c(p)
            ok = ([int(x) if x.denominator == 1 else None for x in bs[:D]] == list(arr.b)
                  and [int(x) if x.denominator == 1 else None for x in cs[1:]] == list(arr.c))
            dev = 0.0 if ok else _deviation(p, arr)
        else:
            dev = _deviation(p, arr)
            ok = dev <= float_tol * max(1, arr.k)
        if ok:
            cands.append(FitCandidate(p, exact, dev))
    return FitReport(cands)


def verify_dual_relation(theta_star, b, tol: float = 1e-12) -> float:
    """Worst relative deviation of
    theta*_i - theta*_0 = (theta*_1 - theta*_0) [i] b^(1-i),  1 <= i <= D."""
    ts = np.asarray(getattr(theta_star, "theta_star", theta_star), dtype=float)
    b = float(b)
    if b == 0 or b == -1:
        raise ValueError("b must avoid 0 and -1")
    base = ts[1] - ts[0]
    if abs(base) <= tol * max(1.0, abs(ts[0])):
        raise DegenerateDual("theta*_1 = theta*_0")
    worst = 0.0
    for i in range(1, ts.shape[0]):
        lhs = ts[i] - ts[0]
        rhs = base * float(gaussian_bracket(i, b)) * b ** (1 - i)
        scale = max(abs(lhs), abs(rhs), abs(base))
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


@dataclass(frozen=True)
class EquivalenceReport:
    qpolynomial: bool
    no_parallelogram_3: bool
    no_parallelogram_any: bool
    classical: bool
    orderings: int

    @property
    def cond_i(self) -> bool:
        return self.qpolynomial and self.no_parallelogram_3

    @property
    def cond_ii(self) -> bool:
        return self.qpolynomial and self.no_parallelogram_any

    @property
    def cond_iii(self) -> bool:
        return self.classical

    @property
    def agree(self) -> bool:
        return self.cond_i == self.cond_ii == self.cond_iii

    def to_json(self) -> dict:
        return {"qpolynomial": self.qpolynomial, "no_parallelogram_3": self.no_parallelogram_3,
                "no_parallelogram_any": self.no_parallelogram_any, "classical": self.classical,
                "cond_i": self.cond_i, "cond_ii": self.cond_ii, "cond_iii": self.cond_iii,
                "agree": self.agree}


def classical_equivalence_crosscheck(g, cert, spectral, oracle=None) -> EquivalenceReport:
    """Evaluate independently, for a graph with D >= 3, a_1 = 0, a_2 != 0:
    (i) Q-polynomial and no parallelogram of length 3, (ii) Q-polynomial and
    none of any length 3..D, (iii) classical parameters exist.  The three
    must agree; ``agree`` reports whether they do."""
    from .closure import find_parallelograms
    from .drg import hypothesis_gate
    from .graph import DistanceOracle
    from .spectral import find_qpoly_orderings

    gate = hypothesis_gate(cert)
    if not gate.admissible:
        raise HypothesisViolated("; ".join(gate.failures))
    oracle = oracle or DistanceOracle(g)
    orders = find_qpoly_orderings(spectral)
    par = {i: not find_parallelograms(g, i, cert, first_only=True, oracle=oracle)
           for i in range(3, cert.D + 1)}
    fit = fit_classical_parameters(cert.array)
    return EquivalenceReport(bool(orders), par[3], all(par.values()), fit.matched, len(orders))
