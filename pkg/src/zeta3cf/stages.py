"""Stage catalog for the continued-fraction chain from Apery to Nesterenko.

A *stage* is a tail recurrence X_k = phi_k(X_{k+1}) together with a head
transform mapping X_0 to a target constant.  Apery's fraction for 2*zeta(3)

    2*zeta(3) = 12/A_0,   A_k = 34k^3 + 51k^2 + 27k + 5 - (k+1)^6 / A_{k+1}

is one stage; Nesterenko's four-level expansion

    2*zeta(3) = 2 + 1/N_0,
    N_k = 2k+2 + (k+1)(k+2)/(2k+4 + (k+1)^2/(2k+3 + (k+2)^2/(2k+2 + (k+1)(k+2)/N_{k+1})))

is another.  The elementary derivation connecting them runs through a chain
of named intermediate stages,

    APERY -> A5 -> W -> U -> P -> Q -> Z -> H -> G -> N,

each obtained from the previous by a substitution X^{from}_k = sigma_k(X^{to}_k)
(a shift, a scaling, or a constant Moebius change of variable).

The catalog stores each stage as it is traditionally displayed ("claimed"
entries, transcribed literally, including any typographical damage the
displays circulate with), plus the two normative endpoints.  The verifier
re-derives every intermediate stage from the substitutions alone and diffs
it against the claimed transcription; the claimed entries are never used as
ground truth.

Index conventions: stages use k >= 0.  Flattened fractions use n >= 0 with
b_0 the leading integer part and a_1 the first partial numerator, so the
three-term recurrence for convergents starts at p_0/q_0 = b_0/1.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction

from .mobius import DegenerateMobius, PolyMobius, level_map, scale_map, shift_map
from .polynomial import K, Poly, as_poly


class DegenerateStep(ArithmeticError):
    """A stage's collapsed step matrix is degenerate."""


class HeadNotFlattenable(ValueError):
    """The stage head is not of the b0 + a1/X_0 form needed to flatten."""


class Target(Enum):
    """Constant a stage evaluates to; TWO_ZETA3 is exactly 2 * ZETA3."""

    ZETA3 = 1
    TWO_ZETA3 = 2

    @property
    def scale(self) -> int:
        """Multiple of zeta(3) this target represents."""
        return self.value


@dataclass(frozen=True)
class Level:
    """One nesting depth: contributes b + a/(next level) to the fraction."""

    b: Poly
    a: Poly

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", as_poly(self.b))
        object.__setattr__(self, "a", as_poly(self.a))
        if self.a.is_zero:
            raise ValueError("a zero partial numerator truncates the fraction")

    def matrix(self) -> PolyMobius:
        return level_map(self.b, self.a)


@dataclass(frozen=True)
class Stage:
    """Named tail recurrence with a head transform and target constant.

    `step` is the one-index map X_k = step_k(X_{k+1}); when the stage came
    from a pure nested display the original levels are kept as well (they
    are needed to flatten).  `kind` is "normative" for the trusted
    endpoints, "claimed" for literal transcriptions, "derived" for stages
    produced by the substitution chain.
    """

    name: str
    step: PolyMobius
    head: PolyMobius
    target: Target
    levels: tuple[Level, ...] | None = None
    kind: str = "claimed"
    note: str = ""

    def __post_init__(self) -> None:
        if not self.head.is_constant:
            raise ValueError(f"stage {self.name}: head entries must be constant")

    @property
    def depth(self) -> int:
        return len(self.levels) if self.levels else 1


@dataclass(frozen=True)
class SubstitutionStep:
    """Chain link: X^{from}_k = sigma_k(X^{to}_k); sigma None marks the head peel."""

    name: str
    from_stage: str
    to_stage: str
    sigma: PolyMobius | None
    note: str = ""

    @property
    def is_peel(self) -> bool:
        return self.sigma is None


@dataclass(frozen=True)
class FlatCF:
    """Periodic flattened fraction b0 + a1/(b1 + a2/(b2 + ...)).

    For n >= 1 the terms follow period-`period` polynomial families in the
    block index m (n = period*m + j + 1):  b_n = b_fam[j](m) and
    a_n = a_fam[j](m).  Positions fixed up by the head override the families
    through the finite `exceptions` map (for these fractions that is just
    a_1, where the wrapped family value would vanish).
    """

    name: str
    b0: Fraction
    a1: Fraction
    period: int
    b_fam: tuple[Poly, ...]
    a_fam: tuple[Poly, ...]
    exceptions: dict[int, Fraction] = field(default_factory=dict)

    def b_term(self, n: int) -> Fraction:
        if n < 1:
            raise IndexError("partial denominators start at n = 1")
        m, j = divmod(n - 1, self.period)
        return self.b_fam[j](m)

    def a_term(self, n: int) -> Fraction:
        if n < 1:
            raise IndexError("partial numerators start at n = 1")
        if n in self.exceptions:
            return self.exceptions[n]
        m, j = divmod(n - 1, self.period)
        return self.a_fam[j](m)


def step_matrix(stage: Stage) -> PolyMobius:
    """The collapsed one-index map of the stage's displayed nesting."""
    return stage.step


def _stage_from_levels(
    name: str,
    levels: list[tuple],
    head: PolyMobius,
    target: Target,
    kind: str = "claimed",
    note: str = "",
) -> Stage:
    lvls = tuple(Level(b, a) for b, a in levels)
    try:
        step = lvls[0].matrix()
        for lv in lvls[1:]:
            step = step @ lv.matrix()
    except DegenerateMobius as exc:
        raise DegenerateStep(f"stage {name}: {exc}") from exc
    return Stage(name, step, head, target, levels=lvls, kind=kind, note=note)


def stage_from_levels(name, levels, head, target, kind="claimed", note="") -> Stage:
    """Build a stage from a pure nested display (list of (b, a) pairs)."""
    return _stage_from_levels(name, levels, head, target, kind, note)


def peel_head(stage: Stage, new_name: str | None = None) -> Stage:
    """Absorb the k = 0 recurrence step into the head and shift k -> k+1.

    The peeled stage evaluates to the same target: running the original to
    depth m+1 equals running the peeled stage to depth m with the same seed.
    """
    head = stage.head @ stage.step.at_k(0)
    levels = None
    if stage.levels is not None:
        levels = tuple(Level(lv.b.shift(1), lv.a.shift(1)) for lv in stage.levels)
    return Stage(
        new_name or f"{stage.name}+1",
        stage.step.shifted(1),
        head,
        stage.target,
        levels=levels,
        kind="derived",
        note=stage.note,
    )


def flatten(stage: Stage) -> FlatCF:
    """Flatten a nested stage into its periodic term families.

    Requires the original levels and a head of the form b0 + a1/X_0
    (matrix proportional to [[b0, a1], [1, 0]]).  The n-th truncation of
    the result equals the depth-matched truncation of the nested stage
    exactly.
    """
    if stage.levels is None:
        raise HeadNotFlattenable(
            f"stage {stage.name} has no level decomposition to flatten"
        )
    h = stage.head
    if not h.d.is_zero or h.c.is_zero or h.b.is_zero:
        raise HeadNotFlattenable(
            f"stage {stage.name}: head {h} is not of the b0 + a1/x form"
        )
    c = h.c.constant_value()
    b0 = h.a.constant_value() / c
    a1 = h.b.constant_value() / c
    p = len(stage.levels)
    b_fam = tuple(lv.b for lv in stage.levels)
    a_fam = (stage.levels[-1].a.shift(-1),) + tuple(
        lv.a for lv in stage.levels[:-1]
    )
    exceptions: dict[int, Fraction] = {}
    if a_fam[0](0) != a1:
        exceptions[1] = a1
    return FlatCF(stage.name, b0, a1, p, b_fam, a_fam, exceptions)


# ---------------------------------------------------------------------------
# The catalog.
# ---------------------------------------------------------------------------

_TAU = PolyMobius(6, 5, 5, 4)  # 1 + 1/(4 + 1/(1 + 1/x)) collapsed

T_NOTE = (
    "defining shift circulates as 'T_k - 5(k+1)^3' with T undeclared; "
    "read as the A-variable, the only reading consistent with the chain"
)


def _claimed_stages() -> list[Stage]:
    k = K
    e2 = (k + 1) * (k + 2) * (2 * k + 3)
    b_apery = 34 * k**3 + 51 * k**2 + 27 * k + 5
    b_shifted = 34 * k**3 + 153 * k**2 + 231 * k + 117
    b_w = 29 * k**3 + 138 * k**2 + 216 * k + 112

    head_apery = PolyMobius(0, 12, 1, 0)  # 2*zeta(3) = 12/A_0
    head_a5 = PolyMobius(6, 0, 5, -1)  # zeta(3) = 6/(5 - 1/A_0)
    head_two_plus = PolyMobius(2, 1, 1, 0)  # 2 + 1/x
    identity = PolyMobius.identity()

    stages: list[Stage] = []

    stages.append(
        _stage_from_levels(
            "APERY",
            [(b_apery, -((k + 1) ** 6))],
            head_apery,
            Target.TWO_ZETA3,
            kind="normative",
        )
    )
    stages.append(
        _stage_from_levels(
            "A5",
            [(b_shifted, -((k + 2) ** 6))],
            head_a5,
            Target.ZETA3,
        )
    )
    stages.append(
        _stage_from_levels(
            "A6",
            [(5 * (k + 1) ** 3 + b_w, -((k + 2) ** 6))],
            head_a5,
            Target.ZETA3,
            note="same recurrence as A5 with the cubic split off the leading term",
        )
    )
    # W_k = b_w - (k+2)^6 / (W_{k+1} + (5k^2+20k+20)(k+2))
    stages.append(
        Stage(
            "W",
            level_map(b_w, -((k + 2) ** 6)) @ shift_map((5 * k**2 + 20 * k + 20) * (k + 2)),
            PolyMobius(6, 30, 5, 24),
            Target.ZETA3,
            note=T_NOTE,
        )
    )
    # U_k = b_w/(6(k+1)) + (1/(6(k+1))) * (-(k+2)^5) / ((5k^2+20k+20) + 6U_{k+1})
    stages.append(
        Stage(
            "U",
            PolyMobius(1, 0, 0, 6 * (k + 1))
            @ level_map(b_w, -((k + 2) ** 5))
            @ PolyMobius(6, 5 * k**2 + 20 * k + 20, 0, 1),
            PolyMobius(6, 5, 5, 4),
            Target.ZETA3,
        )
    )
    # Four-level form of U
    stages.append(
        _stage_from_levels(
            "U4",
            [
                ((2 * k + 3) * (2 * k + 4), (k + 2) ** 3),
                (k + 1, k + 1),
                (Poly.const(4), Poly.const(1)),
                (Poly.const(1), (k + 2) ** 2),
            ],
            PolyMobius(6, 5, 5, 4),
            Target.ZETA3,
        )
    )
    # P_k = (2k+3)(2k+4)/(k+1)^2 + ((k+2)^3/(k+1)^3) / (1 + 1/(4 + 1/(1 + 1/P_{k+1})))
    stages.append(
        Stage(
            "P",
            PolyMobius(2 * e2, (k + 2) ** 3, (k + 1) ** 3, 0) @ _TAU,
            PolyMobius(6, 5, 5, 4),
            Target.ZETA3,
            note="denominators (k+1)^2, (k+1)^3 cleared from the displayed step",
        )
    )
    # Q_k = 1 + 1/(4 + 1/(1 + 1/((2k+3)(2k+4)/(k+1)^2 + (k+2)^3/Q_{k+1})))
    stages.append(
        Stage(
            "Q",
            _TAU @ PolyMobius((2 * k + 3) * (2 * k + 4), (k + 1) ** 2 * (k + 2) ** 3, (k + 1) ** 2, 0),
            identity,
            Target.ZETA3,
            note="transcribed literally; the inner numerator appears without a (k+1)^3 divisor",
        )
    )
    # Q12: Q_k = 1 + 1/(4 + 1/(1 + 1/((k+1)^3 + (k+2)^3/Q_{k+1})))
    stages.append(
        _stage_from_levels(
            "Q12",
            [
                (Poly.const(1), Poly.const(1)),
                (Poly.const(4), Poly.const(1)),
                (Poly.const(1), Poly.const(1)),
                ((k + 1) ** 3, (k + 2) ** 3),
            ],
            identity,
            Target.ZETA3,
        )
    )
    # Z_k = 1 + 1/(4 + 2/(2 + 2(k+1)^3/(2(k+1)(k+2)(2k+3) + 2(k+2)^3/(2 Z_{k+1}))))
    stages.append(
        Stage(
            "Z",
            level_map(1, 1)
            @ level_map(4, 2)
            @ level_map(2, 2 * (k + 1) ** 3)
            @ level_map(2 * e2, 2 * (k + 2) ** 3)
            @ scale_map(2),
            scale_map(2),  # 2*zeta(3) = 2 Z_0
            Target.TWO_ZETA3,
            note="trailing doubled-variable handoff folded into the step matrix",
        )
    )
    # H_k = 2 + 1/(2 + 1/(2 + 1/(k+1)^3 + (k+2)^3/H_{k+1}))
    stages.append(
        Stage(
            "H",
            head_two_plus
            @ head_two_plus
            @ PolyMobius(2 * (k + 1) ** 3 + 1, (k + 1) ** 3 * (k + 2) ** 3, (k + 1) ** 3, 0),
            identity,
            Target.TWO_ZETA3,
            note="innermost three-term denominator read literally as displayed",
        )
    )
    # G (first displayed form): 2 + 1/(2 + 1/((k+1)^3 + (k+2)^3/(2 + 1/G_{k+1})))
    stages.append(
        _stage_from_levels(
            "G",
            [
                (Poly.const(2), Poly.const(1)),
                (Poly.const(2), Poly.const(1)),
                ((k + 1) ** 3, (k + 2) ** 3),
                (Poly.const(2), Poly.const(1)),
            ],
            head_two_plus,
            Target.TWO_ZETA3,
        )
    )
    stages.append(
        _stage_from_levels(
            "G16",
            [
                (Poly.const(2), k + 2),
                (2 * k + 4, (k + 1) * (k + 2) ** 2),
                ((k + 1) * (2 * k + 3), k + 1),
                (2 * k + 2, Poly.const(1)),
            ],
            head_two_plus,
            Target.TWO_ZETA3,
        )
    )
    stages.append(
        _stage_from_levels(
            "G17",
            [
                (Poly.const(2), k + 2),
                (2 * k + 4, (k + 1) * (k + 2) ** 2),
                (2 * k + 3, k + 1),
                (2 * k + 2, Poly.const(1)),
            ],
            head_two_plus,
            Target.TWO_ZETA3,
        )
    )
    stages.append(
        _stage_from_levels(
            "N",
            [
                (2 * k + 2, (k + 1) * (k + 2)),
                (2 * k + 4, (k + 1) ** 2),
                (2 * k + 3, (k + 2) ** 2),
                (2 * k + 2, (k + 1) * (k + 2)),
            ],
            head_two_plus,
            Target.TWO_ZETA3,
            kind="normative",
        )
    )
    return stages


_CATALOG: dict[str, Stage] | None = None


def catalog() -> dict[str, Stage]:
    """All claimed/normative stages, keyed by name (insertion = chain order)."""
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = {s.name: s for s in _claimed_stages()}
    return _CATALOG


def lookup(name: str) -> Stage:
    try:
        return catalog()[name]
    except KeyError:
        raise KeyError(f"unknown stage {name!r}; known: {', '.join(catalog())}")


# Chain positions and the presentational variants attached to each.
CHAIN_ORDER = ("APERY", "A5", "W", "U", "P", "Q", "Z", "H", "G", "N")
VARIANTS = {"A5": ("A6",), "U": ("U4",), "Q": ("Q12",), "G": ("G16", "G17")}


def substitution_chain() -> tuple[SubstitutionStep, ...]:
    """The ordered chain of rewrites carrying APERY into N.

    The first entry is the distinguished head peel (absorb the k = 0 step
    and shift the index); every later entry is a substitution
    X^{from}_k = sigma_k(X^{to}_k).
    """
    k = K
    return (
        SubstitutionStep("A5", "APERY", "A5", None, note="head peel, k -> k+1"),
        SubstitutionStep("W", "A5", "W", shift_map(5 * (k + 1) ** 3), note=T_NOTE),
        SubstitutionStep("U", "W", "U", scale_map(6 * (k + 1))),
        SubstitutionStep("P", "U", "P", scale_map((k + 1) ** 2)),
        SubstitutionStep("Q", "P", "Q", _TAU.inverse()),
        SubstitutionStep("Z", "Q", "Z", PolyMobius.identity()),
        SubstitutionStep("H", "Z", "H", PolyMobius(1, 0, 0, 2)),
        SubstitutionStep("G", "H", "G", PolyMobius(2, 1, 1, 0)),
        SubstitutionStep("N", "G", "N", PolyMobius(1, 0, 0, k + 1)),
    )


def perturbed(flat: FlatCF, n: int, delta: Fraction | int) -> FlatCF:
    """Copy of a flat CF with a_n bumped by delta (negative-control hook)."""
    exc = dict(flat.exceptions)
    exc[n] = flat.a_term(n) + Fraction(delta)
    return replace(flat, exceptions=exc)
