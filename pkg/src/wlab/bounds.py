"""Sharp bounds on totally ramified value numbers, and unicity comparisons.

For rational Gauss components g1, g2 of degrees d1, d2 on the k-punctured
genus-G sphere, the divisor of h dz ties the degrees to the pole orders
mu_j of h dz at the punctures: d1 + d2 = 2G - 2 + sum(mu_j), provided the
components are first rotated so neither has a pole at a puncture and all
their poles are simple.  That identity controls the ratios

    R_i = d_i / (2G - 2 + k)

and the totally ramified value numbers obey nu_i <= 2 + 1/R_i per
component; when both exceed 2 they obey the joint bound

    1/(nu_1 - 2) + 1/(nu_2 - 2) >= R_1 + R_2 >= 1,

with strict R_1 + R_2 > 1 when the periods vanish (the surface closes up
on the punctured sphere itself instead of its universal cover).  The same
ratios limit how many values two distinct Gauss maps can share with equal
preimage sets: p <= 4 + 1/R_1 against one component, jointly
1/(p - 4) + 1/(q - 4) >= R_1 + R_2, which forces the maps to be identical
at (p, q) = (7, 7), or at p = 6 when the second components are the same
constant.

Every verdict here is evaluated in integer / Fraction arithmetic; floats
enter only upstream (root finding, residues).  Conclusions that depend on
the surface hypotheses (conformality, regularity, completeness) are gated
on those checks: a falsified conclusion on data satisfying the hypotheses
is reported as a contradiction, because the underlying statements are
theorems and a contradiction can only mean an implementation bug.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exprparse import as_sphere_point
from .ramification import exceptional_values, preimages, ramification_report
from .rational import RationalFunction, SpherePoint
from .roots import IllConditionedRootsError, RootCrossCheckError
from .tolerances import DEFAULT_SEED, Tolerances, default_tolerances
from .weierstrass import (
    VERDICT_COMPLETE,
    VERDICT_DEGENERATE,
    WeierstrassData,
    check_conformality,
    check_regularity,
    classify_ends,
    compute_periods,
    phi_from_data,
)

__all__ = [
    "CASE_BOTH",
    "CASE_ONE_CONSTANT",
    "CASE_FLAT",
    "COROLLARY_CONSISTENT",
    "COROLLARY_SHARP",
    "COROLLARY_CONTRADICTION",
    "SHARED_GENERIC",
    "SHARED_IDENTICAL",
    "SHARED_CONSTANT_PAIR",
    "IDENTITY_IDENTICAL",
    "IDENTITY_FORCED",
    "IDENTITY_NOT_FORCED",
    "RotationSearchError",
    "RotationNormalization",
    "BoundsReport",
    "SharedValue",
    "SharedValues",
    "UnicityReport",
    "rotation_normalize",
    "compute_bounds",
    "compute_bounds_abstract",
    "corollary_check",
    "shared_values",
    "unicity_report",
]

CASE_BOTH = "both-nonconstant"
CASE_ONE_CONSTANT = "one-constant"
CASE_FLAT = "flat"

COROLLARY_CONSISTENT = "consistent"
COROLLARY_SHARP = "consistent, at the sharp boundary"
COROLLARY_CONTRADICTION = "contradiction"

SHARED_GENERIC = "generic"
SHARED_IDENTICAL = "identical"
SHARED_CONSTANT_PAIR = "constant-pair"

IDENTITY_IDENTICAL = "identical"
IDENTITY_FORCED = "forced identical"
IDENTITY_NOT_FORCED = "not forced"


class RotationSearchError(RuntimeError):
    """No admissible rotation found within the attempt budget."""


@dataclass(frozen=True)
class RotationNormalization:
    """Data rotated so both Gauss components are puncture-finite, simple-poled.

    ``rotations`` holds the (a, b) pair per component of the sphere rotation
    T(w) = (a w - conj(b)) / (b w + conj(a)), |a|^2 + |b|^2 = 1; constant
    components keep the identity (1, 0).
    """

    data: WeierstrassData
    rotations: tuple[tuple[complex, complex], tuple[complex, complex]]
    attempts: int
    seed: int


@dataclass(frozen=True)
class BoundsReport:
    """Exact evaluation of the degree/ramification bounds on one data set.

    Quantities that do not apply (constant component, undefined ratio,
    missing abstract inputs) are None rather than guessed.  ``contradiction``
    is True only when a conclusion fails while its hypotheses hold.
    """

    mode: str  # "computed" | "abstract"
    case: str  # CASE_BOTH | CASE_ONE_CONSTANT | CASE_FLAT
    G: int
    k: int
    chi_term: int  # 2G - 2 + k
    d1: int
    d2: int
    nu_g1: Fraction | None = None
    nu_g2: Fraction | None = None
    exceptional_g1: int | None = None
    exceptional_g2: int | None = None
    R1: Fraction | None = None
    R2: Fraction | None = None
    ratio_sum: Fraction | None = None
    ratio_sum_at_least_one: bool | None = None
    nu_bound_g1: Fraction | None = None  # 2 + chi_term/d1
    nu_bound_g1_ok: bool | None = None
    nu_bound_g1_equality: bool | None = None
    nu_bound_g2: Fraction | None = None
    nu_bound_g2_ok: bool | None = None
    nu_bound_g2_equality: bool | None = None
    joint_bound_applies: bool = False  # both nu > 2 and ratios defined
    joint_bound_lhs: Fraction | None = None  # 1/(nu1-2) + 1/(nu2-2)
    joint_bound_ok: bool | None = None
    joint_bound_equality: bool | None = None
    mu: tuple[int, ...] | None = None  # pole orders of rotated h dz at punctures
    rotation: tuple[tuple[complex, complex], tuple[complex, complex]] | None = None
    rotation_seed: int | None = None
    degree_identity_ok: bool | None = None  # d1 + d2 == 2G - 2 + sum(mu)
    mu_all_at_least_two: bool | None = None
    algebraic: bool | None = None  # hypotheses + vanishing periods
    strict_ok: bool | None = None  # ratio_sum > 1, resp. chi/d < 1
    conformal_ok: bool | None = None
    regular_ok: bool | None = None
    complete_ok: bool | None = None  # no degenerate end, at least one puncture
    hypotheses_ok: bool | None = None
    chi_nonpositive: bool = False
    contradiction: bool = False
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class SharedValue:
    value: SpherePoint
    delta: int  # number of common preimage points off the punctures


@dataclass(frozen=True)
class SharedValues:
    kind: str  # SHARED_GENERIC | SHARED_IDENTICAL | SHARED_CONSTANT_PAIR
    values: tuple[SharedValue, ...]


@dataclass(frozen=True)
class UnicityReport:
    """Shared-value counts of two data sets against their sharp ceilings."""

    case: str  # "identical" | CASE_BOTH | CASE_ONE_CONSTANT | "mixed"
    G: int
    k: int
    chi_term: int
    d1: int
    d2: int
    shared_g1: SharedValues | None
    shared_g2: SharedValues | None
    p: int | None
    q: int | None
    R1: Fraction | None = None
    R2: Fraction | None = None
    count_bound_g1: Fraction | None = None  # 4 + chi_term/d1
    count_bound_g2: Fraction | None = None
    count_bound_g1_ok: bool | None = None
    count_bound_g2_ok: bool | None = None
    count_bound_g1_equality: bool | None = None
    count_bound_g2_equality: bool | None = None
    pair_bound_applies: bool = False  # both components distinct, p > 4, q > 4
    pair_bound_lhs: Fraction | None = None  # 1/(p-4) + 1/(q-4)
    pair_bound_ok: bool | None = None
    pair_bound_equality: bool | None = None
    pole_budget_g1_ok: bool | None = None  # sum(delta) <= 2 d1
    pole_budget_g2_ok: bool | None = None
    identity_verdict: str = IDENTITY_NOT_FORCED
    hypotheses_ok: bool = False
    contradiction: bool = False
    notes: tuple[str, ...] = ()


# -- rotation normalization ----------------------------------------------------


def _unit_pair(rng) -> tuple[complex, complex]:
    v = rng.normal(size=4)
    v = v / np.linalg.norm(v)
    return complex(v[0], v[1]), complex(v[2], v[3])


def _poles_admissible(g: RationalFunction, punctures, tol: Tolerances) -> bool:
    if any(g.value_at_sphere(p, tol).is_infinity for p in punctures):
        return False
    return all(e.order == -1 for e in g.zeros_and_poles(tol) if e.order < 0)


def rotation_normalize(
    d: WeierstrassData,
    tol: Tolerances | None = None,
    seed: int = DEFAULT_SEED,
    max_attempts: int = 32,
) -> RotationNormalization:
    """Rotate the Gauss components into the bookkeeping position.

    Post-composes each non-constant component with a random sphere rotation,
    redrawn until neither component has a pole at any puncture and all their
    poles are simple.  h picks up the factor (b1 g1 + conj(a1)) (b2 g2 +
    conj(a2)), which keeps the metric -- and hence the surface and every
    geometric invariant -- unchanged.  Deterministic for a fixed seed.
    """
    tol = tol or default_tolerances()
    rng = np.random.default_rng(seed)
    identity = (1 + 0j, 0j)
    for attempt in range(1, max_attempts + 1):
        pairs = tuple(
            identity if g.is_constant else _unit_pair(rng) for g in (d.g1, d.g2)
        )
        rotated: list[RationalFunction] = []
        admissible = True
        for g, (a, b) in zip((d.g1, d.g2), pairs):
            if g.is_constant:
                rotated.append(g)
                continue
            gr = g.compose_moebius(a, -b.conjugate(), b, a.conjugate())
            try:
                if not _poles_admissible(gr, d.punctures, tol):
                    admissible = False
                    break
            except (IllConditionedRootsError, RootCrossCheckError):
                admissible = False
                break
            rotated.append(gr)
        if not admissible:
            continue
        (a1, b1), (a2, b2) = pairs
        h_hat = d.h * (d.g1 * b1 + a1.conjugate()) * (d.g2 * b2 + a2.conjugate())
        data = WeierstrassData(
            h_hat, rotated[0], rotated[1], d.punctures, d.genus, d.label
        )
        return RotationNormalization(data=data, rotations=pairs, attempts=attempt, seed=seed)
    raise RotationSearchError(
        f"no admissible rotation of the Gauss components in {max_attempts} "
        f"attempts (seed {seed})"
    )


# -- surface hypotheses ---------------------------------------------------------


@dataclass(frozen=True)
class _Hypotheses:
    conformal: bool
    regular: bool
    nondegenerate: bool  # no degenerate end, and at least one puncture
    strictly_complete: bool  # every end a genuine complete end
    nonflat: bool

    @property
    def ok(self) -> bool:
        return self.conformal and self.regular and self.nondegenerate and self.nonflat


def _hypotheses(d: WeierstrassData, tol: Tolerances) -> _Hypotheses:
    ends = classify_ends(d, tol)
    return _Hypotheses(
        conformal=check_conformality(phi_from_data(d), tol).ok,
        regular=check_regularity(d, tol).ok,
        nondegenerate=bool(ends.records)
        and all(r.verdict != VERDICT_DEGENERATE for r in ends.records),
        strictly_complete=bool(ends.records)
        and all(r.verdict == VERDICT_COMPLETE for r in ends.records),
        nonflat=d.g1.degree >= 1 or d.g2.degree >= 1,
    )


# -- Theorem evaluation ---------------------------------------------------------


def _component_bound(
    nu: Fraction | None, degree: int, chi: int
) -> tuple[Fraction | None, bool | None, bool | None]:
    """The per-component ceiling nu <= 2 + chi/degree and its verdicts."""
    if degree < 1:
        return None, None, None
    bound = 2 + Fraction(chi, degree)
    if nu is None:
        return bound, None, None
    return bound, nu <= bound, nu == bound


def _joint_bound(
    nu1: Fraction | None,
    nu2: Fraction | None,
    R1: Fraction | None,
    R2: Fraction | None,
) -> tuple[bool, Fraction | None, bool | None, bool | None]:
    """1/(nu1-2) + 1/(nu2-2) >= R1 + R2, asserted only when both nu > 2."""
    if nu1 is None or nu2 is None or nu1 <= 2 or nu2 <= 2:
        return False, None, None, None
    lhs = 1 / (nu1 - 2) + 1 / (nu2 - 2)
    if R1 is None or R2 is None:
        return False, lhs, None, None
    rhs = R1 + R2
    return True, lhs, lhs >= rhs, lhs == rhs


def compute_bounds(
    d: WeierstrassData, tol: Tolerances | None = None, seed: int = DEFAULT_SEED
) -> BoundsReport:
    """Evaluate every degree/ramification bound on concrete genus-0 data.

    The per-component ceiling nu <= 2 + chi/d and the joint bound are pure
    counting facts for rational maps with finitely many punctures, so their
    failure is flagged unconditionally.  The ratio-sum bound R1 + R2 >= 1,
    the degree identity, and the strict algebraic variants additionally
    need the surface hypotheses; they are reported always but only promote
    to a contradiction when the hypotheses hold.
    """
    tol = tol or default_tolerances()
    if d.genus != 0:
        raise ValueError(
            "bounds on computed data require genus 0; "
            "use compute_bounds_abstract for other genera"
        )
    G, k = 0, len(d.punctures)
    chi = 2 * G - 2 + k
    d1, d2 = d.g1.degree, d.g2.degree

    if d1 == 0 and d2 == 0:
        return BoundsReport(
            mode="computed",
            case=CASE_FLAT,
            G=G,
            k=k,
            chi_term=chi,
            d1=d1,
            d2=d2,
            chi_nonpositive=chi <= 0,
            notes=("both Gauss components constant: flat data, nothing to bound",),
        )

    case = CASE_BOTH if min(d1, d2) >= 1 else CASE_ONE_CONSTANT
    notes: list[str] = []

    hyp = _hypotheses(d, tol)
    if not hyp.conformal:
        notes.append("conformality fails: not minimal-surface data")
    if not hyp.regular:
        notes.append("metric degenerates away from the punctures")
    if not hyp.nondegenerate:
        notes.append("a degenerate end (or no puncture at all) breaks completeness")
    period_ok = bool(compute_periods(d, tol).period_ok)
    algebraic = hyp.ok and period_ok
    if hyp.ok and not period_ok:
        notes.append("periods do not vanish: surface lives on the universal cover")

    rot = rotation_normalize(d, tol=tol, seed=seed)
    mu = tuple(-rot.data.h.form_order_at(p, tol) for p in d.punctures)
    degree_identity_ok = d1 + d2 == 2 * G - 2 + sum(mu)
    mu_all2 = all(m >= 2 for m in mu) if mu else None

    ram1 = ramification_report(d.g1, d.punctures, 0, tol) if d1 >= 1 else None
    ram2 = ramification_report(d.g2, d.punctures, 0, tol) if d2 >= 1 else None
    nu1 = ram1.nu_f if ram1 else None
    nu2 = ram2.nu_f if ram2 else None

    R1 = Fraction(d1, chi) if chi >= 1 and d1 >= 1 else None
    R2 = Fraction(d2, chi) if chi >= 1 and d2 >= 1 else None
    ratio_sum = R1 + R2 if (R1 is not None and R2 is not None) else None
    ratio_sum_ok = None if ratio_sum is None else ratio_sum >= 1
    if chi <= 0:
        notes.append(
            "2G-2+k <= 0: ratios undefined, the bound degenerates to nu <= 2 + (2G-2+k)/d"
        )

    bound1, b1_ok, b1_eq = _component_bound(nu1, d1, chi)
    bound2, b2_ok, b2_eq = _component_bound(nu2, d2, chi)
    j_applies, j_lhs, j_ok, j_eq = _joint_bound(nu1, nu2, R1, R2)

    if case == CASE_BOTH:
        strict_ok = None if ratio_sum is None else ratio_sum > 1
    else:
        strict_ok = Fraction(chi, max(d1, d2)) < 1

    contradiction = (
        b1_ok is False
        or b2_ok is False
        or (j_applies and j_ok is False)
        or (hyp.regular and not degree_identity_ok)
        or (hyp.regular and hyp.strictly_complete and ratio_sum_ok is False)
        or (algebraic and hyp.strictly_complete and strict_ok is False)
    )

    return BoundsReport(
        mode="computed",
        case=case,
        G=G,
        k=k,
        chi_term=chi,
        d1=d1,
        d2=d2,
        nu_g1=nu1,
        nu_g2=nu2,
        exceptional_g1=ram1.exceptional_count if ram1 else None,
        exceptional_g2=ram2.exceptional_count if ram2 else None,
        R1=R1,
        R2=R2,
        ratio_sum=ratio_sum,
        ratio_sum_at_least_one=ratio_sum_ok,
        nu_bound_g1=bound1,
        nu_bound_g1_ok=b1_ok,
        nu_bound_g1_equality=b1_eq,
        nu_bound_g2=bound2,
        nu_bound_g2_ok=b2_ok,
        nu_bound_g2_equality=b2_eq,
        joint_bound_applies=j_applies,
        joint_bound_lhs=j_lhs,
        joint_bound_ok=j_ok,
        joint_bound_equality=j_eq,
        mu=mu,
        rotation=rot.rotations,
        rotation_seed=seed,
        degree_identity_ok=degree_identity_ok,
        mu_all_at_least_two=mu_all2,
        algebraic=algebraic,
        strict_ok=strict_ok,
        conformal_ok=hyp.conformal,
        regular_ok=hyp.regular,
        complete_ok=hyp.nondegenerate,
        hypotheses_ok=hyp.ok,
        chi_nonpositive=chi <= 0,
        contradiction=contradiction,
        notes=tuple(notes),
    )


def _as_optional_fraction(x) -> Fraction | None:
    if x is None:
        return None
    return Fraction(x)


def compute_bounds_abstract(
    G: int,
    k: int,
    d1: int,
    d2: int = 0,
    nu1=None,
    nu2=None,
    mu=None,
) -> BoundsReport:
    """Pure arithmetic evaluation from user-supplied invariants.

    Constant components are encoded by degree 0 with nu omitted.  The caller
    asserts that a surface with these numbers exists, so any falsified
    conclusion -- including a mu list that breaks the degree identity -- is
    reported as a contradiction rather than silently accepted.  Genus >= 1
    is allowed here (nothing is computed from functions).
    """
    for name, v in (("G", G), ("k", k), ("d1", d1), ("d2", d2)):
        if not isinstance(v, int) or v < 0:
            raise ValueError(f"{name} must be a non-negative integer")
    chi = 2 * G - 2 + k
    nu1 = _as_optional_fraction(nu1)
    nu2 = _as_optional_fraction(nu2)
    if d1 == 0 and nu1 is not None:
        raise ValueError("nu1 given for a constant first component")
    if d2 == 0 and nu2 is not None:
        raise ValueError("nu2 given for a constant second component")

    if d1 == 0 and d2 == 0:
        return BoundsReport(
            mode="abstract",
            case=CASE_FLAT,
            G=G,
            k=k,
            chi_term=chi,
            d1=d1,
            d2=d2,
            chi_nonpositive=chi <= 0,
            notes=("both components constant: flat data, nothing to bound",),
        )

    case = CASE_BOTH if min(d1, d2) >= 1 else CASE_ONE_CONSTANT
    notes: list[str] = []

    mu_tuple: tuple[int, ...] | None = None
    degree_identity_ok: bool | None = None
    mu_all2: bool | None = None
    algebraic: bool | None = None
    if mu is not None:
        mu_tuple = tuple(int(m) for m in mu)
        if len(mu_tuple) != k:
            raise ValueError("mu must list one pole order per puncture")
        degree_identity_ok = d1 + d2 == 2 * G - 2 + sum(mu_tuple)
        if not degree_identity_ok:
            notes.append(
                f"d1 + d2 = {d1 + d2} but 2G - 2 + sum(mu) = {2 * G - 2 + sum(mu_tuple)}"
            )
        mu_all2 = all(m >= 2 for m in mu_tuple) if mu_tuple else None
        algebraic = bool(mu_all2)

    R1 = Fraction(d1, chi) if chi >= 1 and d1 >= 1 else None
    R2 = Fraction(d2, chi) if chi >= 1 and d2 >= 1 else None
    ratio_sum = R1 + R2 if (R1 is not None and R2 is not None) else None
    ratio_sum_ok = None if ratio_sum is None else ratio_sum >= 1
    if chi <= 0:
        notes.append(
            "2G-2+k <= 0: ratios undefined, the bound degenerates to nu <= 2 + (2G-2+k)/d"
        )

    bound1, b1_ok, b1_eq = _component_bound(nu1, d1, chi)
    bound2, b2_ok, b2_eq = _component_bound(nu2, d2, chi)
    j_applies, j_lhs, j_ok, j_eq = _joint_bound(nu1, nu2, R1, R2)

    if case == CASE_BOTH:
        strict_ok = None if ratio_sum is None else ratio_sum > 1
    else:
        strict_ok = Fraction(chi, max(d1, d2)) < 1

    contradiction = (
        b1_ok is False
        or b2_ok is False
        or (j_applies and j_ok is False)
        or degree_identity_ok is False
        or ratio_sum_ok is False
        or (bool(algebraic) and strict_ok is False)
    )

    return BoundsReport(
        mode="abstract",
        case=case,
        G=G,
        k=k,
        chi_term=chi,
        d1=d1,
        d2=d2,
        nu_g1=nu1,
        nu_g2=nu2,
        R1=R1,
        R2=R2,
        ratio_sum=ratio_sum,
        ratio_sum_at_least_one=ratio_sum_ok,
        nu_bound_g1=bound1,
        nu_bound_g1_ok=b1_ok,
        nu_bound_g1_equality=b1_eq,
        nu_bound_g2=bound2,
        nu_bound_g2_ok=b2_ok,
        nu_bound_g2_equality=b2_eq,
        joint_bound_applies=j_applies,
        joint_bound_lhs=j_lhs,
        joint_bound_ok=j_ok,
        joint_bound_equality=j_eq,
        mu=mu_tuple,
        degree_identity_ok=degree_identity_ok,
        mu_all_at_least_two=mu_all2,
        algebraic=algebraic,
        strict_ok=strict_ok,
        hypotheses_ok=True,
        chi_nonpositive=chi <= 0,
        contradiction=contradiction,
        notes=tuple(notes),
    )


def corollary_check(report: BoundsReport) -> str:
    """Exceptional-value counts against the planarity thresholds.

    Non-flat data cannot have both components omitting more than four
    values (more than three on each when the periods vanish); with one
    component constant the other cannot omit more than three (two in the
    vanishing-period case).  The sharp boundaries are flagged.
    """
    if report.case == CASE_FLAT:
        return COROLLARY_CONSISTENT
    algebraic = bool(report.algebraic)
    if report.case == CASE_BOTH:
        r1, r2 = report.exceptional_g1, report.exceptional_g2
        if r1 is None or r2 is None:
            raise ValueError("corollary check needs exceptional-value counts")
        if r1 > 4 and r2 > 4:
            return COROLLARY_CONTRADICTION
        if algebraic and r1 > 3 and r2 > 3:
            return COROLLARY_CONTRADICTION
        if not algebraic and r1 == 4 and r2 == 4:
            return COROLLARY_SHARP
        return COROLLARY_CONSISTENT
    r = report.exceptional_g1 if report.d1 >= 1 else report.exceptional_g2
    if r is None:
        raise ValueError("corollary check needs exceptional-value counts")
    if r > 3:
        return COROLLARY_CONTRADICTION
    if algebraic and r > 2:
        return COROLLARY_CONTRADICTION
    if (algebraic and r == 2) or (not algebraic and r == 3):
        return COROLLARY_SHARP
    return COROLLARY_CONSISTENT


# -- shared values and unicity --------------------------------------------------


def _fiber_in_domain(
    f: RationalFunction, a: SpherePoint, punctures, tol: Tolerances
) -> list[SpherePoint]:
    """Distinct preimage points of ``a`` that are not punctures."""
    return [
        pt
        for pt, _mult in preimages(f, a, tol)
        if not any(pt.close_to(q, tol.eps_pt) for q in punctures)
    ]


def _point_sets_equal(xs, ys, eps_pt: float) -> bool:
    if len(xs) != len(ys):
        return False
    pool = list(ys)
    for x in xs:
        hit = next((i for i, y in enumerate(pool) if x.close_to(y, eps_pt)), None)
        if hit is None:
            return False
        pool.pop(hit)
    return True


def _dedup_points(points, eps_pt: float) -> list[SpherePoint]:
    out: list[SpherePoint] = []
    for p in points:
        if not any(p.close_to(q, eps_pt) for q in out):
            out.append(p)
    return out


def shared_values(
    gA: RationalFunction,
    gB: RationalFunction,
    punctures,
    tol: Tolerances | None = None,
) -> SharedValues:
    """All values whose preimage sets off the punctures coincide.

    A value can be shared in two ways: through common solution points of
    gA = gB in the domain, or with both preimage sets empty (exceptional
    for both maps).  Every nonempty shared preimage point is a zero of
    gA - gB, so the zeros of the difference together with the puncture
    images form a complete, finite candidate list; each candidate is then
    settled by comparing the two fibers as point sets (multiplicities do
    not matter).  Identical maps share everything and are reported as a
    special kind, as is a pair of distinct constants.
    """
    tol = tol or default_tolerances()
    pts = tuple(as_sphere_point(p) for p in punctures)
    if gA.equals(gB):
        return SharedValues(SHARED_IDENTICAL, ())
    if gA.is_constant and gB.is_constant:
        return SharedValues(SHARED_CONSTANT_PAIR, ())
    if gA.is_constant or gB.is_constant:
        const, varying = (gA, gB) if gA.is_constant else (gB, gA)
        c = SpherePoint.of(const.constant_value)
        vals = [
            rv.value
            for rv in exceptional_values(varying, pts, tol)
            if not rv.value.close_to(c, tol.eps_pt)
        ]
        vals.sort(key=lambda v: v.sort_key())
        return SharedValues(SHARED_GENERIC, tuple(SharedValue(v, 0) for v in vals))

    diff = gA - gB
    candidates: list[SpherePoint] = []
    for e in diff.zeros_and_poles(tol):
        if e.order > 0:
            candidates.append(gA.value_at_sphere(e.point, tol))
    for p in pts:
        candidates.append(gA.value_at_sphere(p, tol))
        candidates.append(gB.value_at_sphere(p, tol))

    shared: list[SharedValue] = []
    for a in _dedup_points(candidates, tol.eps_pt):
        fa = _fiber_in_domain(gA, a, pts, tol)
        fb = _fiber_in_domain(gB, a, pts, tol)
        if _point_sets_equal(fa, fb, tol.eps_pt):
            shared.append(SharedValue(a, len(fa)))
    shared.sort(key=lambda sv: sv.value.sort_key())
    return SharedValues(SHARED_GENERIC, tuple(shared))


def _same_puncture_sets(a, b, eps_pt: float) -> bool:
    return _point_sets_equal(list(a), list(b), eps_pt)


def unicity_report(
    dataA: WeierstrassData, dataB: WeierstrassData, tol: Tolerances | None = None
) -> UnicityReport:
    """Compare the Gauss maps of two data sets on the same punctured sphere.

    Requires equal genus, the same puncture set, and componentwise equal
    degrees (a hypothesis of the statement being checked, not a convention).
    The count bounds p <= 4 + chi/d1 and the pole budget sum(delta) <= 2 d1
    are counting facts for any same-degree pair, so their failure always
    flags a contradiction; the forced-identity conclusions additionally
    need both data sets to be honest complete surfaces and are gated on
    those hypotheses.
    """
    tol = tol or default_tolerances()
    if dataA.genus != dataB.genus:
        raise ValueError("genus mismatch between the two data sets")
    if dataA.genus != 0:
        raise ValueError("computed unicity reports require genus 0")
    if not _same_puncture_sets(dataA.punctures, dataB.punctures, tol.eps_pt):
        raise ValueError("the two data sets have different puncture sets")
    d1, d2 = dataA.g1.degree, dataA.g2.degree
    if d1 != dataB.g1.degree:
        raise ValueError("first Gauss components must have the same degree")
    if d2 != dataB.g2.degree:
        raise ValueError("second Gauss components must have the same degree")

    G, k = 0, len(dataA.punctures)
    chi = 2 * G - 2 + k
    notes: list[str] = []

    id1 = dataA.g1.equals(dataB.g1)
    id2 = dataA.g2.equals(dataB.g2)
    const2 = dataA.g2.is_constant and dataB.g2.is_constant

    hypA = _hypotheses(dataA, tol)
    hypB = _hypotheses(dataB, tol)
    hypotheses = (
        hypA.ok and hypB.ok and hypA.strictly_complete and hypB.strictly_complete
    )
    if not hypotheses:
        notes.append(
            "at least one data set fails the complete-surface hypotheses; "
            "identity cannot be forced"
        )

    if id1 and id2:
        return UnicityReport(
            case="identical",
            G=G,
            k=k,
            chi_term=chi,
            d1=d1,
            d2=d2,
            shared_g1=SharedValues(SHARED_IDENTICAL, ()),
            shared_g2=SharedValues(SHARED_IDENTICAL, ()),
            p=None,
            q=None,
            identity_verdict=IDENTITY_IDENTICAL,
            hypotheses_ok=hypotheses,
            notes=("the two Gauss maps are identical; every value is shared",),
        )

    R1 = Fraction(d1, chi) if chi >= 1 and d1 >= 1 else None
    R2 = Fraction(d2, chi) if chi >= 1 and d2 >= 1 else None
    if chi <= 0:
        notes.append("2G-2+k <= 0: ratios undefined")

    shared1 = shared_values(dataA.g1, dataB.g1, dataA.punctures, tol) if not id1 else SharedValues(SHARED_IDENTICAL, ())
    shared2 = shared_values(dataA.g2, dataB.g2, dataA.punctures, tol) if not id2 else SharedValues(SHARED_IDENTICAL, ())

    def _count(sv: SharedValues) -> int | None:
        return len(sv.values) if sv.kind == SHARED_GENERIC else None

    p = _count(shared1)
    q = _count(shared2)

    def _count_bound(count, degree, distinct):
        if degree < 1 or not distinct:
            return None, None, None, None
        bound = 4 + Fraction(chi, degree)
        if count is None:
            return bound, None, None, None
        return bound, count <= bound, count == bound, None

    cb1, cb1_ok, cb1_eq, _ = _count_bound(p, d1, not id1)
    cb2, cb2_ok, cb2_eq, _ = _count_bound(q, d2, not id2 and not const2)

    def _pole_budget(sv: SharedValues, degree, distinct):
        if not distinct or degree < 1 or sv.kind != SHARED_GENERIC:
            return None
        return sum(v.delta for v in sv.values) <= 2 * degree

    budget1 = _pole_budget(shared1, d1, not id1)
    budget2 = _pole_budget(shared2, d2, not id2 and not const2)

    if const2 and id2 and not id1 and d1 >= 1:
        case = CASE_ONE_CONSTANT
    elif not id1 and not id2 and min(d1, d2) >= 1:
        case = CASE_BOTH
    else:
        case = "mixed"
        notes.append(
            "component pattern outside the two theorem cases; "
            "only the per-component count bounds are evaluated"
        )

    pair_applies = case == CASE_BOTH and p is not None and q is not None and p > 4 and q > 4
    pair_lhs = pair_ok = pair_eq = None
    if pair_applies:
        pair_lhs = Fraction(1, p - 4) + Fraction(1, q - 4)
        if R1 is not None and R2 is not None:
            pair_ok = pair_lhs >= R1 + R2
            pair_eq = pair_lhs == R1 + R2

    if case == CASE_BOTH and p is not None and q is not None and p >= 7 and q >= 7:
        verdict = IDENTITY_FORCED
    elif case == CASE_ONE_CONSTANT and p is not None and p >= 6:
        verdict = IDENTITY_FORCED
    else:
        verdict = IDENTITY_NOT_FORCED

    contradiction = (
        cb1_ok is False
        or cb2_ok is False
        or budget1 is False
        or budget2 is False
        or (pair_applies and pair_ok is False)
        or (verdict == IDENTITY_FORCED and hypotheses)
    )
    if verdict == IDENTITY_FORCED:
        notes.append(
            "shared-value counts force identical maps, yet the maps differ"
            + ("" if hypotheses else " (hypotheses already fail, not flagged)")
        )

    return UnicityReport(
        case=case,
        G=G,
        k=k,
        chi_term=chi,
        d1=d1,
        d2=d2,
        shared_g1=shared1,
        shared_g2=shared2,
        p=p,
        q=q,
        R1=R1,
        R2=R2,
        count_bound_g1=cb1,
        count_bound_g2=cb2,
        count_bound_g1_ok=cb1_ok,
        count_bound_g2_ok=cb2_ok,
        count_bound_g1_equality=cb1_eq,
        count_bound_g2_equality=cb2_eq,
        pair_bound_applies=pair_applies,
        pair_bound_lhs=pair_lhs,
        pair_bound_ok=pair_ok,
        pair_bound_equality=pair_eq,
        pole_budget_g1_ok=budget1,
        pole_budget_g2_ok=budget2,
        identity_verdict=verdict,
        hypotheses_ok=hypotheses,
        contradiction=contradiction,
        notes=tuple(notes),
    )
