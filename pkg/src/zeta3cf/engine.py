"""Exact evaluation of stages and flattened fractions, and rate measurement.

Ground truth for a flattened fraction is always the forward three-term
recurrence in exact integers:

    p_n = b_n p_{n-1} + a_n p_{n-2},   q_n = b_n q_{n-1} + a_n q_{n-2},

seeded p_{-1} = 1, q_{-1} = 0, p_0 = b_0, q_0 = 1.  Backward evaluation of
the nested recurrence is a cross-check, never the primary value, because it
needs a tail seed while forward convergents do not.

The reference value of zeta(3) comes from two independent oracles: the
alternating central-binomial series zeta(3) = (5/2) * sum (-1)^(n-1) /
(n^3 C(2n,n)), summed in exact rationals with the alternating-series tail
bound, and a deep convergent of the Apery fraction.  Both must agree on
every reported digit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .rational import log10_fraction, to_decimal
from .stages import FlatCF, Stage, Target, flatten, lookup

Terms = list[tuple[Fraction, Fraction]]  # [(a_n, b_n)] for n = 1, 2, ...


class DegenerateConvergent(ArithmeticError):
    """A convergent denominator q_n vanished."""

    def __init__(self, n: int):
        super().__init__(f"q_{n} = 0")
        self.n = n


class InsufficientData(ValueError):
    """Too few error-curve points in the requested window."""


class InsufficientReferencePrecision(ValueError):
    """Reference digits cannot resolve the smallest measured error."""


@dataclass(frozen=True)
class Convergent:
    """Unreduced p/q from the three-term recurrence plus the reduced value."""

    n: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def convergents(flat: FlatCF, n_max: int) -> list[Convergent]:
    """Exact convergents x_0 .. x_{n_max} of a flattened fraction."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if flat.b0.denominator != 1:
        raise ValueError(f"non-integer leading term b0 = {flat.b0}")
    out = [Convergent(0, int(flat.b0), 1)]
    p_prev, q_prev = 1, 0
    p, q = int(flat.b0), 1
    for n in range(1, n_max + 1):
        a = flat.a_term(n)
        b = flat.b_term(n)
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError(f"non-integer term at n={n}: a={a}, b={b}")
        p, p_prev = int(b) * p + int(a) * p_prev, p
        q, q_prev = int(b) * q + int(a) * q_prev, q
        if q == 0:
            raise DegenerateConvergent(n)
        out.append(Convergent(n, p, q))
    return out


def convergents_from_terms(b0: Fraction, terms: Terms) -> list[tuple[Fraction, Fraction]]:
    """(p_n, q_n) pairs for an explicit finite term list, exact rationals."""
    p_prev, q_prev = Fraction(1), Fraction(0)
    p, q = Fraction(b0), Fraction(1)
    out = [(p, q)]
    for n, (a, b) in enumerate(terms, start=1):
        p, p_prev = b * p + a * p_prev, p
        q, q_prev = b * q + a * q_prev, q
        if q == 0:
            raise DegenerateConvergent(n)
        out.append((p, q))
    return out


def values_from_terms(b0: Fraction, terms: Terms) -> list[Fraction]:
    return [p / q for p, q in convergents_from_terms(b0, terms)]


def eval_backward(stage: Stage, depth: int, seed: Fraction | int) -> Fraction:
    """Seed X_depth, apply the step maps down to X_0, then the head.

    Exact; a pole along the descent propagates as PoleError with the
    offending index.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    x = Fraction(seed)
    for k in range(depth - 1, -1, -1):
        x = stage.step.apply(x, k)
    return stage.head.apply(x, 0)


def truncation_value(stage: Stage, depth: int) -> Fraction:
    """Backward value with the tail dropped: X_depth = step_depth(infinity).

    For a level-form stage this seeds the full block at k = depth with its
    own trailing term removed (the b-part rule for one-level stages).
    """
    seed = stage.step.apply_to_infinity(depth)
    return eval_backward(stage, depth, seed)


# ---------------------------------------------------------------------------
# Reference value of zeta(3).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReferenceValue:
    """zeta(3) to `digits` truncated digits, tagged with the oracle used.

    `fraction` approximates zeta(3) with |error| < 10**-(digits + 3); the
    decimal string is its truncation to `digits` digits.
    """

    digits: int
    decimal: str
    oracle_id: str
    fraction: Fraction

    def value(self, target: Target) -> Fraction:
        return target.scale * self.fraction

    def decimal_for(self, target: Target) -> str:
        text, _ = to_decimal(self.value(target), self.digits)
        return text


def _series_fraction(digits: int) -> Fraction:
    threshold = Fraction(1, 10 ** (digits + 5))
    total = Fraction(0)
    n = 1
    while True:
        term = Fraction(1, n**3 * math.comb(2 * n, n))
        if term < threshold:
            break
        total += term if n % 2 == 1 else -term
        n += 1
    # Alternating with decreasing terms: tail bounded by the first omitted
    # term, so |zeta3 - value| < (5/2) * 10**-(digits+5).
    return Fraction(5, 2) * total


def _deep_cf_fraction(digits: int) -> Fraction:
    flat = flatten(lookup("APERY"))
    depth = int(digits / 3) + 12
    for _ in range(6):
        convs = convergents(flat, depth + 2)
        gap1 = abs(convs[depth + 1].value - convs[depth].value)
        gap2 = abs(convs[depth + 2].value - convs[depth + 1].value)
        # Demand the gap already resolves the requested digits and keeps
        # contracting, so the limit is within ~1.01 * gap2 of x_{depth+2}.
        if gap2 < Fraction(1, 10 ** (digits + 6)) and gap2 * 50 < gap1:
            return convs[depth + 2].value / 2
        depth = depth + depth // 2 + 8
    raise InsufficientReferencePrecision(
        f"deep-fraction oracle did not certify {digits} digits"
    )


def zeta3_reference(digits: int, oracle: str = "SERIES") -> ReferenceValue:
    """zeta(3) correct to `digits` truncated digits from the named oracle."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if oracle == "SERIES":
        frac = _series_fraction(digits)
    elif oracle == "DEEP_CF":
        frac = _deep_cf_fraction(digits)
    else:
        raise ValueError(f"unknown oracle {oracle!r}")
    text, _ = to_decimal(frac, digits)
    return ReferenceValue(digits, text, oracle, frac)


def oracles_agree(digits: int) -> tuple[bool, ReferenceValue, ReferenceValue]:
    """Compare the two oracles digit-for-digit at the requested precision."""
    series = zeta3_reference(digits, "SERIES")
    deep = zeta3_reference(digits, "DEEP_CF")
    agree = series.decimal == deep.decimal and abs(
        series.fraction - deep.fraction
    ) < Fraction(1, 10 ** (digits + 2))
    return agree, series, deep


# ---------------------------------------------------------------------------
# Convergence-rate measurement.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ErrorCurve:
    """Decimal-digits-of-accuracy d_n = -log10|x_n - L| per index."""

    points: tuple[tuple[int, float], ...]
    target: Target
    ref_digits: int


def error_curve(
    flat: FlatCF, target: Target, n_max: int, ref: ReferenceValue
) -> ErrorCurve:
    """Measure accuracy of the first n_max convergents against the reference.

    Indices where x_n equals the reference exactly are omitted.  If the
    largest measured accuracy comes within 10 guard digits of the reference
    precision, the reference is extended once; failing that is an error.
    """
    for attempt in range(2):
        limit = ref.value(target)
        points: list[tuple[int, float]] = []
        for conv in convergents(flat, n_max):
            err = abs(conv.value - limit)
            if err == 0:
                continue
            points.append((conv.n, -log10_fraction(err)))
        max_d = max((d for _, d in points), default=0.0)
        if max_d <= ref.digits - 10:
            return ErrorCurve(tuple(points), target, ref.digits)
        if attempt == 0:
            ref = zeta3_reference(int(max_d) + 20, ref.oracle_id)
    raise InsufficientReferencePrecision(
        f"reference digits {ref.digits} cannot resolve d = {max_d:.1f}"
    )


def digits_per_term(curve: ErrorCurve, lo: int, hi: int) -> float:
    """Least-squares slope of d versus n over the window lo..hi inclusive."""
    pts = [(n, d) for n, d in curve.points if lo <= n <= hi]
    if len(pts) < 2:
        raise InsufficientData(
            f"window {lo}:{hi} holds {len(pts)} point(s); need at least 2"
        )
    count = len(pts)
    mean_n = sum(n for n, _ in pts) / count
    mean_d = sum(d for _, d in pts) / count
    cov = sum((n - mean_n) * (d - mean_d) for n, d in pts)
    var = sum((n - mean_n) ** 2 for n, _ in pts)
    return cov / var
