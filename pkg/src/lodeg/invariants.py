"""Degree invariants of affine varieties under linear optimization.

The counts here answer the question "how many critical points does a
generic linear objective have on the smooth locus", in several flavors:
plain, after slicing the variety, after slicing the conormal variety, and
for the projective closure.  A binomial transform turns the slice counts
into characteristic-class coefficients, and an alternating sum of them
reads off the local Euler obstruction at the vertex of a cone.

Every randomized count goes through the cross-seed, cross-prime agreement
protocol; reported integers are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence, Union

from .conormal import (
    ConormalIdeal,
    DegenerateSlice,
    MultiplierSystem,
    SlicedVariety,
    VarietySpec,
    affine_conormal_ideal,
    multiplier_slack_forms,
    multiplier_system,
    projective_conormal_ideal,
    projective_multiplier_system,
    restrict_base,
    slice_variety,
)
from .groebner import Ideal, count_points, krull_dimension
from .poly import CoefT, Polynomial
from .randomness import (
    DEFAULT_POLICY,
    DEFAULT_PRIMES,
    AgreementPolicy,
    Instability,
    SeedStream,
    agreed_value,
    derive_seed,
)

FormT = tuple[Sequence[CoefT], CoefT]


class NotACone(ValueError):
    """Raised when a cone-point invariant is asked of a non-homogeneous input."""


@dataclass(frozen=True)
class DegreeVector:
    """Integer invariants indexed by slice codimension 0..d.

    ``kind`` is one of ``bidegree``, ``sectional``, ``polar`` or
    ``chern_mather``.  For ``polar`` the entry at index i is the invariant
    of the closure cut by i hyperplanes on the point side, which pairs with
    the affine entry of the same index.
    """

    kind: str
    values: tuple[int, ...]
    dimension: int
    ambient: int

    def __post_init__(self) -> None:
        if self.kind not in ("bidegree", "sectional", "polar", "chern_mather"):
            raise ValueError(f"unknown degree vector kind {self.kind!r}")
        if len(self.values) != self.dimension + 1:
            raise ValueError("degree vector must have one entry per codimension 0..d")

    def alternating_sum(self) -> int:
        d = self.dimension
        return sum((-1) ** (d - i) * v for i, v in enumerate(self.values))


@dataclass(frozen=True)
class CorrespondenceReport:
    """Critical points of one explicit objective versus conormal intersections."""

    i: int
    seed: int
    count_critical: int
    count_conormal: int
    generic: bool
    expected: int


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking one identity between independently computed sides."""

    identity: str
    passed: bool
    left: tuple[int, ...]
    right: tuple[int, ...]
    seed: int
    primes: tuple[int, ...]
    notes: tuple[str, ...] = ()


def _counting_vector(kind: str, values: Sequence[int], d: int, n: int) -> DegreeVector:
    """Wrap computed counts, enforcing the sign facts true of genuine counts."""
    vec = DegreeVector(kind, tuple(int(v) for v in values), d, n)
    if any(v < 0 for v in vec.values):
        raise RuntimeError(f"{kind} counts came out negative: {vec.values}")
    if vec.values[-1] < 1:
        raise RuntimeError(f"{kind} top count must be at least 1: {vec.values}")
    return vec


# ---------------------------------------------------------------------------
# Core counting helpers on multiplier systems
# ---------------------------------------------------------------------------


def _dual_form(system: MultiplierSystem, coeffs: Sequence[CoefT], const: CoefT) -> Polynomial:
    """The equation <coeffs, dual coordinates> = const on a multiplier system."""
    fld = system.ring.field_
    acc = system.ring.zero() - system.ring.constant(fld.coerce(const))
    for k, c in enumerate(coeffs):
        acc = acc + system.covector[k] * fld.coerce(c)
    return acc


def _count_system(
    system: MultiplierSystem,
    extra: Sequence[Polynomial],
    stream: SeedStream,
    count_seed: int,
    budget_secs: Optional[float],
) -> int:
    eqs = list(system.equations) + list(extra)
    eqs.extend(multiplier_slack_forms(system, stream))
    return count_points(Ideal.of(system.ring, eqs), seed=count_seed, budget_secs=budget_secs)


def _draw_base_forms(stream: SeedStream, width: int, count: int, const: Optional[int]) -> list[FormT]:
    """Seeded affine forms on the base variables at shrinking widths.

    ``const`` fixes every right-hand side (used for chart and hyperplane
    forms); ``None`` draws it from the stream.
    """
    forms: list[FormT] = []
    for _ in range(count):
        coeffs = stream.coefficients(width)
        rhs = stream.integer() if const is None else const
        forms.append((coeffs, rhs))
        width -= 1
    return forms


# ---------------------------------------------------------------------------
# The invariants
# ---------------------------------------------------------------------------


def lo_degree(
    spec: VarietySpec,
    seed: int = 0,
    covector: Optional[Sequence[CoefT]] = None,
    policy: AgreementPolicy = DEFAULT_POLICY,
    budget_secs: Optional[float] = None,
) -> int:
    """Number of critical points of a generic linear objective on the smooth
    locus.

    An explicit ``covector`` pins the objective instead of drawing one; the
    count is then for that particular objective (and may be smaller than
    the generic value).
    """
    n = spec.n

    def computation(child: int, prime: int) -> int:
        system = multiplier_system(spec, prime)
        stream = SeedStream(child)
        u = list(covector) if covector is not None else stream.coefficients(n)
        pins = [
            system.covector[k] - system.ring.constant(system.ring.field_.coerce(u[k]))
            for k in range(n)
        ]
        return _count_system(system, pins, stream, derive_seed(child, 5), budget_secs)

    return agreed_value(computation, seed, policy, "critical point count")


def bidegrees(
    spec: VarietySpec,
    seed: int = 0,
    policy: AgreementPolicy = DEFAULT_POLICY,
    budget_secs: Optional[float] = None,
    method: str = "multiplier",
) -> DegreeVector:
    """Slice counts of the affine conormal variety.

    Entry i counts the points cut out by i generic affine forms on the
    point factor and n-i on the dual factor.  ``method="conormal"`` slices
    the explicit saturated conormal ideal instead of the multiplier
    presentation; both agree and the latter is much faster.
    """
    d, n = spec.dimension, spec.n
    values = []
    for i in range(d + 1):
        values.append(
            agreed_value(
                _bidegree_computation(spec, i, budget_secs, method),
                derive_seed(seed, 11 + i),
                policy,
                f"conormal slice count at codimension {i}",
            )
        )
    lo = lo_degree(spec, derive_seed(seed, 7), policy=policy, budget_secs=budget_secs)
    if values[0] != lo:
        raise Instability(
            "slice count at codimension 0 vs critical point count",
            {(seed, 0): values[0], (seed, 1): lo},
        )
    return _counting_vector("bidegree", values, d, n)


def _bidegree_computation(
    spec: VarietySpec, i: int, budget_secs: Optional[float], method: str
):
    n = spec.n

    def by_multiplier(child: int, prime: int) -> int:
        system = multiplier_system(spec, prime)
        stream = SeedStream(child)
        restricted = restrict_base(system, _draw_base_forms(stream, n, i, None))
        duals = [
            _dual_form(restricted, stream.coefficients(n), stream.integer())
            for _ in range(n - i)
        ]
        return _count_system(restricted, duals, stream, derive_seed(child, 3), budget_secs)

    def by_conormal(child: int, prime: int) -> int:
        cono = affine_conormal_ideal(
            spec, prime, seed=derive_seed(child, 1), budget_secs=budget_secs
        )
        stream = SeedStream(child)
        eqs = list(cono.generators)
        ring = cono.ring
        fld = ring.field_
        for start, count in ((0, i), (n, n - i)):
            for _ in range(count):
                acc = ring.zero() - fld.coerce(stream.integer())
                for k in range(n):
                    acc = acc + ring.gen(start + k) * fld.coerce(stream.integer())
                eqs.append(acc)
        return count_points(Ideal.of(ring, eqs), seed=derive_seed(child, 3), budget_secs=budget_secs)

    if method == "multiplier":
        return by_multiplier
    if method == "conormal":
        return by_conormal
    raise ValueError(f"unknown bidegree method {method!r}")


def sectional_lo_degrees(
    spec: VarietySpec,
    seed: int = 0,
    policy: AgreementPolicy = DEFAULT_POLICY,
    budget_secs: Optional[float] = None,
) -> DegreeVector:
    """Critical point counts of the variety cut by 0, 1, ..., d generic
    affine hyperplanes."""
    d, n = spec.dimension, spec.n
    values = []
    for i in range(d + 1):
        if i == 0:
            target = spec
        else:
            target = slice_variety(
                spec, i, derive_seed(seed, 31 + i), budget_secs=budget_secs
            ).spec
        values.append(
            lo_degree(target, derive_seed(seed, 61 + i), policy=policy, budget_secs=budget_secs)
        )
    return _counting_vector("sectional", values, d, n)


def variety_degree(
    spec: VarietySpec,
    seed: int = 0,
    policy: AgreementPolicy = DEFAULT_POLICY,
    budget_secs: Optional[float] = None,
) -> int:
    """Degree of the variety: points left after slicing down to dimension 0."""
    d = spec.dimension
    target = spec if d == 0 else slice_variety(
        spec, d, derive_seed(seed, 101), budget_secs=budget_secs
    ).spec

    def computation(child: int, prime: int) -> int:
        return count_points(target.reduce_mod(prime), seed=child, budget_secs=budget_secs)

    return agreed_value(computation, seed, policy, "degree by slicing to points")


def polar_degrees(
    spec: VarietySpec,
    seed: int = 0,
    policy: AgreementPolicy = DEFAULT_POLICY,
    budget_secs: Optional[float] = None,
    method: str = "multiplier",
) -> DegreeVector:
    """Slice counts of the conormal variety of the projective closure.

    Entry i is computed in a random affine chart of each projective factor:
    one chart form per factor is set to 1, then i point-side and n-1-i
    dual-side hyperplanes through the origin of the chart are imposed.
    """
    d, n = spec.dimension, spec.n
    values = []
    for i in range(d + 1):
        values.append(
            agreed_value(
                _polar_computation(spec, i, budget_secs, method),
                derive_seed(seed, 131 + i),
                policy,
                f"projective conormal slice count at codimension {i}",
            )
        )
    return _counting_vector("polar", values, d, n)


def _polar_computation(
    spec: VarietySpec, i: int, budget_secs: Optional[float], method: str
):
    n = spec.n

    def by_multiplier(child: int, prime: int) -> int:
        system = projective_multiplier_system(spec, prime, budget_secs=budget_secs)
        stream = SeedStream(child)
        nb = system.base_count  # n + 1
        chart = _draw_base_forms(stream, nb, 1, 1)
        # A generic hyperplane of the point factor, written in the chart,
        # is an affine form with a generic nonzero constant; constant zero
        # would force it through the coordinate point the chart eliminated.
        hyperplanes = _draw_base_forms(stream, nb - 1, i, None)
        restricted = restrict_base(system, chart + hyperplanes)
        duals = [_dual_form(restricted, stream.coefficients(nb), 1)]
        for _ in range(n - 1 - i):
            duals.append(_dual_form(restricted, stream.coefficients(nb), 0))
        return _count_system(restricted, duals, stream, derive_seed(child, 3), budget_secs)

    def by_conormal(child: int, prime: int) -> int:
        cono = projective_conormal_ideal(
            spec, prime, seed=derive_seed(child, 1), budget_secs=budget_secs
        )
        stream = SeedStream(child)
        ring = cono.ring
        fld = ring.field_
        nb = cono.base_count
        eqs = list(cono.generators)
        for start, chart_count, plane_count in ((0, 1, i), (nb, 1, n - 1 - i)):
            for idx in range(chart_count + plane_count):
                rhs = 1 if idx < chart_count else 0
                acc = ring.zero() - fld.coerce(rhs)
                for k in range(nb):
                    acc = acc + ring.gen(start + k) * fld.coerce(stream.integer())
                eqs.append(acc)
        return count_points(Ideal.of(ring, eqs), seed=derive_seed(child, 3), budget_secs=budget_secs)

    if method == "multiplier":
        return by_multiplier
    if method == "conormal":
        return by_conormal
    raise ValueError(f"unknown polar method {method!r}")


def dual_contains_hyperplane_at_infinity(
    spec: VarietySpec,
    prime: Optional[int] = None,
    seed: int = 0,
    budget_secs: Optional[float] = None,
) -> bool:
    """Whether the hyperplane at infinity is a point of the dual variety.

    The dual coordinates are aligned so that the hyperplane at infinity is
    the first one; the projective conormal ideal is specialized there and
    the fiber is nonempty iff its affine cone has dimension at least 1.
    """
    p = prime if prime is not None else DEFAULT_PRIMES[0]
    cono = projective_conormal_ideal(
        spec, p, seed=derive_seed(seed, 201), budget_secs=budget_secs
    )
    ring = cono.ring
    nb = cono.base_count
    assignments = {nb: ring.one()}
    for k in range(1, nb):
        assignments[nb + k] = ring.zero()
    keep = list(range(nb))
    specialized = [
        g.substitute(assignments).project(keep) for g in cono.generators
    ]
    point_ring = specialized[0].ring if specialized else ring
    fiber = Ideal.of(point_ring, specialized)
    return krull_dimension(fiber, budget_secs=budget_secs) >= 1


# ---------------------------------------------------------------------------
# Binomial transform to characteristic-class coefficients
# ---------------------------------------------------------------------------


def _as_values(
    vec: Union[DegreeVector, Sequence[int]],
    d: Optional[int],
    n: Optional[int],
    expected_kind: str,
) -> tuple[tuple[int, ...], int, int]:
    if isinstance(vec, DegreeVector):
        if vec.kind != expected_kind:
            raise ValueError(f"expected a {expected_kind} vector, got {vec.kind}")
        return vec.values, vec.dimension, vec.ambient
    values = tuple(int(v) for v in vec)
    dd = len(values) - 1 if d is None else d
    nn = dd if n is None else n
    if len(values) != dd + 1:
        raise ValueError("vector length must be d + 1")
    return values, dd, nn


def bidegrees_from_chern_mather(
    a: Union[DegreeVector, Sequence[int]],
    d: Optional[int] = None,
    n: Optional[int] = None,
) -> DegreeVector:
    """Forward binomial transform: entry i is sum_j (-1)^(d-j) C(j,i) a_j."""
    values, dd, nn = _as_values(a, d, n, "chern_mather")
    b = [
        sum((-1) ** (dd - j) * comb(j, i) * values[j] for j in range(i, dd + 1))
        for i in range(dd + 1)
    ]
    return DegreeVector("bidegree", tuple(b), dd, nn)


def chern_mather_from_bidegrees(
    b: Union[DegreeVector, Sequence[int]],
    d: Optional[int] = None,
    n: Optional[int] = None,
) -> DegreeVector:
    """Invert the binomial transform by back-substitution, exactly."""
    values, dd, nn = _as_values(b, d, n, "bidegree")
    a = [0] * (dd + 1)
    for j in range(dd, -1, -1):
        tail = sum((-1) ** (dd - k) * comb(k, j) * a[k] for k in range(j + 1, dd + 1))
        a[j] = (-1) ** (dd - j) * (values[j] - tail)
    result = DegreeVector("chern_mather", tuple(a), dd, nn)
    check = bidegrees_from_chern_mather(result)
    if check.values != values:
        raise RuntimeError("binomial transform inversion failed to round-trip")
    return result


def euler_obstruction_at_cone_point(
    spec: VarietySpec,
    seed: int = 0,
    policy: AgreementPolicy = DEFAULT_POLICY,
    budget_secs: Optional[float] = None,
) -> int:
    """Local Euler obstruction at the vertex of an affine cone: the
    alternating sum of the conormal slice counts."""
    if not spec.is_homogeneous():
        raise NotACone("all generators must be homogeneous")
    b = bidegrees(spec, seed, policy=policy, budget_secs=budget_secs)
    value = b.alternating_sum()
    a = chern_mather_from_bidegrees(b)
    if value != a.values[0]:
        raise RuntimeError("alternating sum disagrees with the transform's 0th entry")
    return value


# ---------------------------------------------------------------------------
# Critical point correspondence for explicit data
# ---------------------------------------------------------------------------


def _rational_kernel(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Basis of the right kernel of a full-row-rank matrix over the rationals."""
    mat = [row[:] for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        sel = next((k for k in range(r, len(mat)) if mat[k][col] != 0), None)
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [c * inv for c in mat[r]]
        for k in range(len(mat)):
            if k != r and mat[k][col] != 0:
                factor = mat[k][col]
                mat[k] = [a - factor * b for a, b in zip(mat[k], mat[r])]
        pivots.append(col)
        r += 1
    basis: list[list[Fraction]] = []
    free = [c for c in range(n) if c not in pivots]
    for col in free:
        vec = [Fraction(0)] * n
        vec[col] = Fraction(1)
        for k, pc in enumerate(pivots):
            vec[pc] = -mat[k][col]
        basis.append(vec)
    return basis


def critical_correspondence(
    spec: VarietySpec,
    i: int,
    seed: int = 0,
    covector: Optional[Sequence[CoefT]] = None,
    slices: Optional[Sequence[FormT]] = None,
    policy: AgreementPolicy = DEFAULT_POLICY,
    budget_secs: Optional[float] = None,
) -> CorrespondenceReport:
    """Compare two counts attached to one objective u and one affine slice L.

    ``count_critical`` counts critical points of the objective on the
    sliced variety; ``count_conormal`` counts conormal points over L whose
    dual coordinate lies in the affine space through u orthogonal to L's
    direction (standard dot product).  For generic data both equal the
    conormal slice count at codimension i.
    """
    d, n = spec.dimension, spec.n
    if not 0 <= i <= d:
        raise ValueError(f"slice codimension {i} outside 0..{d}")
    explicit = covector is not None or slices is not None
    attempts = 1 if explicit else 4
    last: Optional[Exception] = None
    for attempt in range(attempts):
        stream = SeedStream(derive_seed(seed, 301 + attempt))
        u = [Fraction(c) for c in covector] if covector is not None else [
            Fraction(c) for c in stream.coefficients(n)
        ]
        if slices is not None:
            forms = [
                ([Fraction(c) for c in coeffs], Fraction(const))
                for coeffs, const in slices
            ]
            if len(forms) != i:
                raise ValueError(f"expected {i} slicing forms, got {len(forms)}")
        else:
            forms = [
                ([Fraction(c) for c in stream.coefficients(n)], Fraction(stream.integer()))
                for _ in range(i)
            ]
        try:
            return _correspondence_once(
                spec, i, seed, u, forms, policy, budget_secs
            )
        except DegenerateSlice as err:
            last = err
            if explicit:
                raise
    raise DegenerateSlice(f"correspondence data kept degenerating: {last}")


def _correspondence_once(
    spec: VarietySpec,
    i: int,
    seed: int,
    u: list[Fraction],
    forms: list[tuple[list[Fraction], Fraction]],
    policy: AgreementPolicy,
    budget_secs: Optional[float],
) -> CorrespondenceReport:
    n = spec.n
    sliced = slice_variety(spec, i, seed=0, forms=forms, budget_secs=budget_secs)
    pushed, _ = sliced.trail.push_objective(u)

    def count_critical_comp(child: int, prime: int) -> int:
        system = multiplier_system(sliced.spec, prime)
        stream = SeedStream(child)
        pins = [
            system.covector[k] - system.ring.constant(system.ring.field_.coerce(pushed[k]))
            for k in range(sliced.spec.n)
        ]
        return _count_system(system, pins, stream, derive_seed(child, 5), budget_secs)

    count_critical = agreed_value(
        count_critical_comp, derive_seed(seed, 303), policy, "sliced critical count"
    )

    kernel = _rational_kernel([list(c) for c, _ in forms], n) if forms else [
        [Fraction(1 if k == j else 0) for k in range(n)] for j in range(n)
    ]

    def count_conormal_comp(child: int, prime: int) -> int:
        system = multiplier_system(spec, prime)
        stream = SeedStream(child)
        restricted = restrict_base(system, list(sliced.forms))
        conditions = [
            _dual_form(restricted, w, sum(wk * uk for wk, uk in zip(w, u)))
            for w in kernel
        ]
        return _count_system(restricted, conditions, stream, derive_seed(child, 5), budget_secs)

    count_conormal = agreed_value(
        count_conormal_comp, derive_seed(seed, 307), policy, "conormal fiber count"
    )

    expected = bidegrees(spec, derive_seed(seed, 311), policy=policy, budget_secs=budget_secs).values[i]
    generic = count_critical == expected and count_conormal == expected
    return CorrespondenceReport(i, seed, count_critical, count_conormal, generic, expected)


# ---------------------------------------------------------------------------
# Identity verification
# ---------------------------------------------------------------------------


def verify_sectional_bidegrees(
    spec: VarietySpec,
    seed: int = 0,
    policy: AgreementPolicy = DEFAULT_POLICY,
    budget_secs: Optional[float] = None,
) -> VerificationReport:
    """Check that slicing the variety and slicing its conormal variety give
    the same counts, componentwise."""
    b = bidegrees(spec, derive_seed(seed, 1), policy=policy, budget_secs=budget_secs)
    s = sectional_lo_degrees(spec, derive_seed(seed, 2), policy=policy, budget_secs=budget_secs)
    return VerificationReport(
        "sectional counts match conormal slice counts",
        b.values == s.values,
        b.values,
        s.values,
        seed,
        policy.primes,
    )


def verify_polar_relation(
    spec: VarietySpec,
    seed: int = 0,
    policy: AgreementPolicy = DEFAULT_POLICY,
    budget_secs: Optional[float] = None,
) -> VerificationReport:
    """Check the dichotomy between affine and projective conormal counts.

    The affine counts equal the shifted projective ones exactly when the
    hyperplane at infinity is not in the dual variety; when it is, the
    first nonzero projective count strictly exceeds its affine partner.
    """
    b = bidegrees(spec, derive_seed(seed, 1), policy=policy, budget_secs=budget_secs)
    delta = polar_degrees(spec, derive_seed(seed, 2), policy=policy, budget_secs=budget_secs)
    contained = dual_contains_hyperplane_at_infinity(
        spec, seed=derive_seed(seed, 3), budget_secs=budget_secs
    )
    matched = b.values == delta.values
    passed = matched != contained
    notes = [f"dual contains hyperplane at infinity: {contained}"]
    if contained:
        first = next(idx for idx, v in enumerate(delta.values) if v != 0)
        strict = b.values[first] < delta.values[first]
        notes.append(
            f"strictness at first nonzero projective count: "
            f"{b.values[first]} < {delta.values[first]} is {strict}"
        )
        passed = passed and strict
    return VerificationReport(
        "affine vs projective conormal count dichotomy",
        passed,
        b.values,
        delta.values,
        seed,
        policy.primes,
        tuple(notes),
    )
