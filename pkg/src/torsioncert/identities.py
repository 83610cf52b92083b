"""Equational identities behind the torsion-candidate witnesses.

Two families live here:

* integer identities for an alternating binomial convolution and an
  alternating binomial row sum, each with a telescoping-companion
  certificate that is checked by exact arithmetic on every scanned tuple;
* polynomial identities (a two-variable kernel identity, its cyclic
  three-variable extension, and a triple-sum identity for the 2x2 minors of
  a generic 2x3 matrix), cleared of denominators so every check happens in
  a polynomial ring over the integers.

On top of these the module assembles explicit membership certificates: the
2x4-minor quadric witness (from the cleared identity and a congruence table
for its coefficients), a three-variable containment check decided by strong
Groebner bases, the regular-sequence witness obtained by specializing that
containment, and the witness for arbitrary relations against the 2x3
minors, obtained by decomposing over the two matrix rows and combining the
row witnesses with polynomial weights.

All certificate constructions re-verify themselves by plain arithmetic; the
construction path is never trusted.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd, lcm

from .catalog import minor_polys, minors_row_relation, plucker_relation, plucker_ring
from .cohomology import (
    NotARelationError,
    RelationInstance,
    WrongArityError,
    combine_with_weights,
    make_relation,
    torsion_candidate,
)
from .groebner import (
    CertificateInvalidError,
    GroebnerOptions,
    MembershipCertificate,
    ResourceBoundError,
    membership,
)
from .polyring import (
    AlgebraError,
    NotDivisibleError,
    Polynomial,
    RingMismatchError,
    RingSpec,
    exact_div,
    exact_div_int,
    is_prime,
    mod_reduce,
    poly_to_json,
    substitute,
    variables,
)


class DecompositionError(AlgebraError):
    """A required decomposition over given elements does not exist."""


#: rough upper bound on coefficient operations an identity check may cost
DEFAULT_WORK_BUDGET = 200_000_000


def _ensure_budget(estimate: int, what: str, budget: int | None = None) -> None:
    cap = DEFAULT_WORK_BUDGET if budget is None else budget
    if estimate > cap:
        raise ResourceBoundError(
            f"{what} needs about {estimate} coefficient operations, over the cap {cap}"
        )


def binom(k: int, i: int) -> int:
    """Binomial coefficient, zero whenever i < 0 or k < i.

    The k < i clause covers every negative k (then k < i for all i >= 0),
    which differs from the usual extension to negative upper index; the
    summation conventions of the identities below rely on this.
    """
    if i < 0 or k < i:
        return 0
    return comb(k, i)


def parity(n: int) -> int:
    """(-1)**n for arbitrary integers, including negative n."""
    return 1 if n % 2 == 0 else -1


@dataclass
class TelescopeCheck:
    """Outcome of exact checks of a summation identity and its certificate.

    ``checked`` counts asserted equalities, ``skipped`` counts tuples whose
    assertion was out of scope (the identity carries implicit parameter
    constraints) or degenerate, and ``failures`` lists every asserted tuple
    that did not hold -- the verdict is simply that there are none.
    """

    identity: str
    parameters: dict
    checked: int = 0
    passed: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return not self.failures

    def count(self, ok: bool, label) -> None:
        self.checked += 1
        if ok:
            self.passed += 1
        else:
            self.failures.append(label)

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "parameters": dict(self.parameters),
            "checked": self.checked,
            "passed": self.passed,
            "skipped": self.skipped,
            "failures": [list(f) if isinstance(f, tuple) else f for f in self.failures],
            "verdict": self.verdict,
        }


@dataclass
class IdentityReport:
    """Result of one polynomial identity check.

    ``verdict`` is true exactly when ``residual`` is the zero polynomial;
    ``details`` carries auxiliary exact checks (coefficient tables,
    congruence tables, reduction cross-checks) and ``certificate`` a
    membership certificate when the check produces one.
    """

    identity: str
    parameters: dict
    residual: Polynomial
    verdict: bool
    details: dict = field(default_factory=dict)
    certificate: MembershipCertificate | None = None
    timing: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        obj = {
            "identity": self.identity,
            "parameters": dict(self.parameters),
            "residual": poly_to_json(self.residual),
            "verdict": self.verdict,
            "details": dict(self.details),
            "timing": dict(self.timing),
        }
        if self.certificate is not None:
            obj["certificate"] = self.certificate.to_json()
        return obj


# ---------------------------------------------------------------------------
# alternating binomial convolution
# ---------------------------------------------------------------------------


def binom_convolution_term(m: int, s: int, r: int, k: int, n: int) -> int:
    """Summand (-1)^n C(m+s-r, m-n) C(k-n, k-r) of the convolution."""
    return parity(n) * binom(m + s - r, m - n) * binom(k - n, k - r)


def _convolution_support(m: int, s: int, r: int, k: int) -> range:
    """An integer range certain to contain every nonzero summand."""
    lo = min(0, r - s) - 1
    hi = max(m, k, r, 0) + 2
    return range(lo, hi)


def binom_convolution_sum(m: int, s: int, r: int, k: int) -> int:
    """The full alternating convolution, summed over all integers n."""
    return sum(binom_convolution_term(m, s, r, k, n) for n in _convolution_support(m, s, r, k))


def binom_convolution_closed_form(m: int, s: int, r: int, k: int) -> tuple[int, str]:
    """Three-case closed form: (value, case label in {low, high, zero})."""
    if m <= k - s:
        return parity(r - s) * binom(k - m, s), "low"
    if k + 1 <= m:
        return parity(r) * binom(m + s - k - 1, s), "high"
    return 0, "zero"


def binom_convolution_eval(m: int, s: int, r: int, k: int) -> tuple[int, int, str]:
    """(sum, closed-form value, case label); agreement is the identity."""
    closed, case = binom_convolution_closed_form(m, s, r, k)
    return binom_convolution_sum(m, s, r, k), closed, case


def binom_convolution_in_scope(m: int, s: int, r: int, k: int) -> bool:
    """Validity domain of the closed form: s <= k and r <= min(m+s, k).

    The identity is stated without explicit constraints but fails at
    corners outside this region, e.g. (m,s,r,k) = (0,0,1,2) has an empty
    support (sum 0) while the low case evaluates to -1.  Every downstream
    use instantiates it with s <= r <= k and a vanishing C(m, r-s) factor
    outside r <= m+s, which is exactly this region; exhaustive scans over
    [0,10]^4 confirm agreement on all of it and failures only outside.
    """
    return s <= k and r <= m + s and r <= k


def binom_convolution_certificate(
    m: int, s: int, r: int, k: int, n_values: range | None = None
) -> TelescopeCheck:
    """Check the telescoping companion of the convolution at one tuple.

    With F(s,n) the summand and G(s,n) = -(k+1-n) F(s,n), the certificate
    recurrence is

        (s+1) F(s+1,n) - (m+s-k) F(s,n)  ==  G(s,n+1) - G(s,n),

    which holds whenever r <= m+s (checked; tuples outside are counted as
    skipped -- e.g. (m,s,r,k,n) = (0,0,1,1,0) fails the raw recurrence).
    Summing telescopes the right side away, giving the first-order
    recurrence for the full sum H(s), which is also checked; the base value
    H(0) == (-1)^r is checked whenever r <= min(m, k).
    """
    check = TelescopeCheck(
        identity="binom-convolution",
        parameters={"m": m, "s": s, "r": r, "k": k},
    )
    if n_values is None:
        n_values = _convolution_support(m, s, r, k)
    if r <= m + s:
        for n in n_values:
            lhs = (s + 1) * binom_convolution_term(m, s + 1, r, k, n) - (
                m + s - k
            ) * binom_convolution_term(m, s, r, k, n)
            rhs = -(k + 1 - (n + 1)) * binom_convolution_term(m, s, r, k, n + 1) + (
                k + 1 - n
            ) * binom_convolution_term(m, s, r, k, n)
            check.count(lhs == rhs, ("recurrence", m, s, r, k, n))
        summed = (s + 1) * binom_convolution_sum(m, s + 1, r, k) - (
            m + s - k
        ) * binom_convolution_sum(m, s, r, k)
        check.count(summed == 0, ("sum-recurrence", m, s, r, k))
    else:
        check.skipped += len(n_values) + 1
    if r <= min(m, k):
        check.count(
            binom_convolution_sum(m, 0, r, k) == parity(r), ("base", m, r, k)
        )
    else:
        check.skipped += 1
    return check


def binom_convolution_scan(
    bound: int = 8, certificates: bool = True, lo: int = 0
) -> TelescopeCheck:
    """Exhaustive check over the box [lo, bound]^4 restricted to s <= k.

    Closed-form agreement is asserted on the validity domain; tuples
    outside it are counted as skipped.  With certificates enabled the
    telescoping companion is checked on the same box.
    """
    total = TelescopeCheck(
        identity="binom-convolution",
        parameters={"lo": lo, "bound": bound, "certificates": certificates},
    )
    for m in range(lo, bound + 1):
        for s in range(lo, bound + 1):
            for r in range(lo, bound + 1):
                for k in range(lo, bound + 1):
                    if s > k:
                        continue
                    if binom_convolution_in_scope(m, s, r, k):
                        value, closed, _ = binom_convolution_eval(m, s, r, k)
                        total.count(value == closed, ("closed-form", m, s, r, k))
                    else:
                        total.skipped += 1
                    if certificates:
                        part = binom_convolution_certificate(m, s, r, k)
                        total.checked += part.checked
                        total.passed += part.passed
                        total.skipped += part.skipped
                        total.failures.extend(part.failures)
    return total


# ---------------------------------------------------------------------------
# alternating binomial row sum
# ---------------------------------------------------------------------------


def binom_alternating_term(m: int, s: int, k: int, r: int) -> int:
    """Summand (-1)^r C(2k-r, m-1) C(m, r-s) of the row sum."""
    return parity(r) * binom(2 * k - r, m - 1) * binom(m, r - s)


def _alternating_support(m: int, s: int, k: int) -> range:
    lo = min(s, 0) - 1
    hi = 2 * max(k, 0) + max(m, s, 0) + 3
    return range(lo, hi)


def binom_alternating_sum(m: int, s: int, k: int) -> int:
    """The full alternating row sum over all integers r."""
    return sum(binom_alternating_term(m, s, k, r) for r in _alternating_support(m, s, k))


def binom_alternating_in_range(m: int, s: int, k: int) -> bool:
    """The hypothesis under which the sum vanishes: 1 <= m <= 2k - s."""
    return 1 <= m <= 2 * k - s


def binom_alternating_certificate(
    m: int, s: int, k: int, r_values: range | None = None
) -> TelescopeCheck:
    """Check the telescoping companion of the row sum at one tuple.

    With F(r) the summand and G(r) = (2k+1-r)(r-s) F(r), the relation

        G(r) - G(r+1)  ==  m (2k+1-m-s) F(r)

    holds with no parameter constraints (checked for every r).  Dividing by
    m (2k+1-m-s) and summing gives the vanishing of the full sum; when that
    factor is zero the division step is recorded as skipped (the telescoped
    relation still holds as 0 == 0), which happens only outside the range
    hypothesis.
    """
    check = TelescopeCheck(
        identity="binom-alternating",
        parameters={"m": m, "s": s, "k": k},
    )
    if r_values is None:
        r_values = _alternating_support(m, s, k)
    factor = m * (2 * k + 1 - m - s)
    for r in r_values:
        g_r = (2 * k + 1 - r) * (r - s) * binom_alternating_term(m, s, k, r)
        g_r1 = (2 * k - r) * (r + 1 - s) * binom_alternating_term(m, s, k, r + 1)
        check.count(
            g_r - g_r1 == factor * binom_alternating_term(m, s, k, r),
            ("telescope", m, s, k, r),
        )
    if factor != 0:
        check.count(binom_alternating_sum(m, s, k) == 0, ("division", m, s, k))
    else:
        check.skipped += 1
    return check


def binom_alternating_scan(bound: int = 10, lo: int = 0) -> TelescopeCheck:
    """Exhaustive check over [lo, bound]^3: in-range sums vanish and the
    telescoping certificate holds everywhere."""
    total = TelescopeCheck(
        identity="binom-alternating", parameters={"lo": lo, "bound": bound}
    )
    for m in range(lo, bound + 1):
        for s in range(lo, bound + 1):
            for k in range(lo, bound + 1):
                if binom_alternating_in_range(m, s, k):
                    total.count(
                        binom_alternating_sum(m, s, k) == 0, ("sum", m, s, k)
                    )
                else:
                    total.skipped += 1
                part = binom_alternating_certificate(m, s, k)
                total.checked += part.checked
                total.passed += part.passed
                total.skipped += part.skipped
                total.failures.extend(part.failures)
    return total


# ---------------------------------------------------------------------------
# kernel identity in T, Y, Z and its cyclic extension
# ---------------------------------------------------------------------------


def _cleared_multiplier(k: int) -> int:
    """lcm of the denominators 2k+1-r for r = 0..k, i.e. lcm(k+1..2k+1)."""
    return lcm(*(2 * k + 1 - r for r in range(k + 1)))


def kernel_identity_check(
    k: int, coefficient_table: bool = True, budget: int | None = None
) -> IdentityReport:
    """Check the cleared two-sided kernel identity in ZZ[T, Y, Z].

    Both sides of

        sum_{r=0..k} sum_{n=0..r} C(2k+1-r, n) C(k-n, r-n)
            T^{k-r}/(2k+1-r) (T-Y)^n (Y-Z)^{2k+1-r-n} Y^r Z^r
        == sum_{s=0..k} (-1)^s C(k, s) T^{k-s}/(2k+1-s)
            (Y^{2k+1} Z^s - Z^{2k+1} Y^s)

    are multiplied by L = lcm(k+1..2k+1) and compared exactly.  With
    ``coefficient_table`` the per-coefficient evaluation used in its proof
    is checked too: for each s, the coefficient of Y^m Z^{2k+1-s-m} in the
    normalized left side vanishes except at m = 0 and m = 2k+1-s, where it
    is -C(k,s)/(2k+1-s) and +C(k,s)/(2k+1-s).  Both the cleared (integer)
    and the rational form of that table are checked.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    _ensure_budget((k + 1) ** 2 * (2 * k + 3) ** 2, "kernel identity check", budget)
    start = time.perf_counter()
    ring = RingSpec(("T", "Y", "Z"))
    T, Y, Z = variables(ring)
    L = _cleared_multiplier(k)
    lhs = Polynomial.zero(ring)
    for r in range(k + 1):
        for n in range(r + 1):
            c = (L // (2 * k + 1 - r)) * binom(2 * k + 1 - r, n) * binom(k - n, r - n)
            if not c:
                continue
            lhs = lhs + (
                T ** (k - r)
                * (T - Y) ** n
                * (Y - Z) ** (2 * k + 1 - r - n)
                * Y**r
                * Z**r
            ).scale(c)
    rhs = Polynomial.zero(ring)
    for s in range(k + 1):
        c = parity(s) * binom(k, s) * (L // (2 * k + 1 - s))
        rhs = rhs + (
            T ** (k - s) * (Y ** (2 * k + 1) * Z**s - Z ** (2 * k + 1) * Y**s)
        ).scale(c)
    residual = lhs - rhs
    details: dict = {}
    if coefficient_table:
        cleared_ok = True
        rational_ok = True
        for s in range(k + 1):
            for m in range(2 * k + 2 - s):
                inner = 0
                for r in range(s, k + 1):
                    inner_n = binom_convolution_sum(m, s, r, k)
                    inner += (
                        (L // (2 * k + 1 - r))
                        * binom(m, r - s)
                        * binom(2 * k + 1 - r, m)
                        * inner_n
                    )
                cleared = parity(m + 1) * inner
                if m == 0:
                    expected = -(L // (2 * k + 1 - s)) * binom(k, s)
                elif m == 2 * k + 1 - s:
                    expected = (L // (2 * k + 1 - s)) * binom(k, s)
                else:
                    expected = 0
                if cleared != expected:
                    cleared_ok = False
                rational = Fraction(0)
                for r in range(s, k + 1):
                    rational += Fraction(
                        parity(m + 1)
                        * binom(m, r - s)
                        * binom(2 * k + 1 - r, m)
                        * binom_convolution_sum(m, s, r, k),
                        2 * k + 1 - r,
                    )
                if m == 0:
                    target = -Fraction(binom(k, s), 2 * k + 1 - s)
                elif m == 2 * k + 1 - s:
                    target = Fraction(binom(k, s), 2 * k + 1 - s)
                else:
                    target = Fraction(0)
                if rational != target:
                    rational_ok = False
        details["coefficient_table_cleared"] = cleared_ok
        details["coefficient_table_rational"] = rational_ok
    return IdentityReport(
        identity="kernel",
        parameters={"k": k, "cleared_by": L},
        residual=residual,
        verdict=residual.is_zero() and all(details.values() or [True]),
        details=details,
        timing={"seconds": time.perf_counter() - start},
    )


def cyclic_identity_check(k: int, budget: int | None = None) -> IdentityReport:
    """Check the cleared cyclic triple identity in ZZ[T, X, Y, Z].

    The sum over r, n of (k+1)/(2k+1-r) C(2k+1-r,n) C(k-n,r-n) T^{k-r}
    applied cyclically to (X, Y, Z) vanishes identically.  The check clears
    denominators with L = lcm(k+1..2k+1), keeps the k+1 factor, verifies
    the total is zero, and also verifies the two steps of its derivation:
    the cyclic sum equals the kernel identity's right side summed over the
    three rotations, and that sum telescopes to zero.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    _ensure_budget(3 * (k + 1) ** 2 * (2 * k + 3) ** 2, "cyclic identity check", budget)
    start = time.perf_counter()
    ring = RingSpec(("T", "X", "Y", "Z"))
    T, X, Y, Z = variables(ring)
    rotations = ((X, Y, Z), (Y, Z, X), (Z, X, Y))
    L = _cleared_multiplier(k)
    lhs = Polynomial.zero(ring)
    for r in range(k + 1):
        coeff_r = L * (k + 1) // (2 * k + 1 - r)
        for n in range(r + 1):
            c = coeff_r * binom(2 * k + 1 - r, n) * binom(k - n, r - n)
            if not c:
                continue
            bracket = Polynomial.zero(ring)
            for a, b, d in rotations:
                bracket = bracket + (
                    a ** (2 * k + 1)
                    * (T - b) ** n
                    * (b - d) ** (2 * k + 1 - r - n)
                    * b**r
                    * d**r
                )
            lhs = lhs + (T ** (k - r) * bracket).scale(c)
    telescoped = Polynomial.zero(ring)
    for s in range(k + 1):
        c = parity(s) * binom(k, s) * (L * (k + 1) // (2 * k + 1 - s))
        bracket = Polynomial.zero(ring)
        for a, b, d in rotations:
            bracket = bracket + a ** (2 * k + 1) * (
                b ** (2 * k + 1) * d**s - d ** (2 * k + 1) * b**s
            )
        telescoped = telescoped + (T ** (k - s) * bracket).scale(c)
    details = {
        "reduction_matches": lhs == telescoped,
        "telescoped_sum_zero": telescoped.is_zero(),
    }
    return IdentityReport(
        identity="cyclic",
        parameters={"k": k, "cleared_by": L},
        residual=lhs,
        verdict=lhs.is_zero() and all(details.values()),
        details=details,
        timing={"seconds": time.perf_counter() - start},
    )


# ---------------------------------------------------------------------------
# the 2x3 minors triple-sum identity and its mod-p reduction
# ---------------------------------------------------------------------------


def _minor_identity_cofactors(k: int) -> tuple[RingSpec, list, list, list]:
    """The triple-sum identity's cofactors C_i with sum(D_i^{2k+1} C_i) == 0.

    Returns (ring, row, minors, cofactors) where row = (u, v, w) and the
    cofactor at slot i is

        row_i^{k+1} * sum_{n=0..k} C(k,n) X_i^n * sum_{j=0..n} (-1)^j
            C(k+j, k) C(k+n-j, k) row_{i+2}^j row_{i+1}^{n-j}
            D_{i+1}^{k-j} D_{i+2}^{k-n+j}

    with indices mod 3 and X = (x, y, z) the second matrix row.
    """
    rel = minors_row_relation(1)
    ring = rel.ring
    row = list(rel.F)
    second = [Polynomial.variable(ring, name) for name in ("x", "y", "z")]
    minors = list(rel.G)
    cofactors = []
    for i in range(3):
        i1, i2 = (i + 1) % 3, (i + 2) % 3
        total = Polynomial.zero(ring)
        for n in range(k + 1):
            inner = Polynomial.zero(ring)
            for j in range(n + 1):
                c = parity(j) * binom(k + j, k) * binom(k + n - j, k)
                inner = inner + (
                    row[i2] ** j
                    * row[i1] ** (n - j)
                    * minors[i1] ** (k - j)
                    * minors[i2] ** (k - n + j)
                ).scale(c)
            total = total + (second[i] ** n * inner).scale(binom(k, n))
        cofactors.append(row[i] ** (k + 1) * total)
    return ring, row, minors, cofactors


def minor_identity_check(k: int, budget: int | None = None) -> IdentityReport:
    """Check that the minors triple-sum identity vanishes exactly.

    At k = 0 it reduces to the defining relation u D_1 + v D_2 + w D_3 = 0.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    _ensure_budget(3 * (k + 1) ** 2 * (k + 2) ** 4, "minors identity check", budget)
    start = time.perf_counter()
    ring, _, minors, cofactors = _minor_identity_cofactors(k)
    residual = Polynomial.zero(ring)
    for d, c in zip(minors, cofactors):
        residual = residual + d ** (2 * k + 1) * c
    return IdentityReport(
        identity="minor",
        parameters={"k": k},
        residual=residual,
        verdict=residual.is_zero(),
        timing={"seconds": time.perf_counter() - start},
    )


def minor_identity_mod_p_lift(
    p: int, e: int, budget: int | None = None
) -> MembershipCertificate:
    """Mod-p certificate that the q-th power sum of the minors relation is a
    relation on the (2k+1)-th minor powers, k = q-1.

    Exactly over the integers the identity cofactors C_i satisfy
    sum(C_i D_i^{2k+1}) == 0, and every C_i is congruent mod p to
    F_i^q (prod_{j != i} D_j)^k because the interior binomial coefficients
    C(q-1+i, i) vanish mod p for 0 < i < q.  Both facts are verified, along
    with the exact decomposition

        (sum (F_i D_i)^q) (D_1 D_2 D_3)^{q-1}
            == sum (F_i^q (prod_{j != i} D_j)^k - C_i) D_i^{2k+1},

    and the returned certificate is the mod-p shadow: target zero (the
    reduced power sum), generators D_i^{2k+1}, cofactors the reduced
    F_i^q (prod_{j != i} D_j)^k.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("the exponent e must be at least 1")
    q = p**e
    k = q - 1
    _ensure_budget(3 * (k + 1) ** 2 * (k + 2) ** 4, "minors identity lift", budget)
    ring, row, minors, cofactors = _minor_identity_cofactors(k)
    identity_total = Polynomial.zero(ring)
    for d, c in zip(minors, cofactors):
        identity_total = identity_total + d ** (2 * k + 1) * c
    if identity_total:
        raise CertificateInvalidError("the minors identity failed to vanish")
    rests = []
    for i in range(3):
        rest = Polynomial.one(ring)
        for j in range(3):
            if j != i:
                rest = rest * minors[j]
        rests.append(rest**k)
    frobenius = [row[i] ** q * rests[i] for i in range(3)]
    for i in range(3):
        if mod_reduce(cofactors[i] - frobenius[i], p):
            raise CertificateInvalidError(
                "identity cofactor is not congruent to its Frobenius form mod p"
            )
    power_sum = Polynomial.zero(ring)
    for f, d in zip(row, minors):
        power_sum = power_sum + (f * d) ** q
    product = minors[0] * minors[1] * minors[2]
    target_int = power_sum * product**k
    recomposed = Polynomial.zero(ring)
    for i in range(3):
        recomposed = recomposed + (frobenius[i] - cofactors[i]) * minors[i] ** (2 * k + 1)
    if target_int != recomposed:
        raise CertificateInvalidError("exact decomposition of the power sum failed")
    return MembershipCertificate(
        target=mod_reduce(target_int, p),
        generators=[mod_reduce(d ** (2 * k + 1), p) for d in minors],
        cofactors=[mod_reduce(f, p) for f in frobenius],
        modulus=p,
    )


# ---------------------------------------------------------------------------
# the 2x4 minors quadric witness
# ---------------------------------------------------------------------------


def clearing_multiplier(p: int, e: int) -> int:
    """The canonical integer d with d = 1 mod p and (2q-1-r) | dq for all
    0 <= r <= q-1, q = p^e.

    d is d0 * t where d0 is the lcm of the denominators of q/(2q-1-r) in
    lowest terms and t the least positive integer with d0 * t = 1 mod p.
    All three postconditions are re-checked before returning.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("the exponent e must be at least 1")
    q = p**e
    d0 = lcm(*((2 * q - 1 - r) // gcd(q, 2 * q - 1 - r) for r in range(q)))
    t = 1
    while (d0 * t) % p != 1:
        t += 1
    d = d0 * t
    assert d % p == 1
    assert gcd(d, p) == 1
    assert all((d * q) % (2 * q - 1 - r) == 0 for r in range(q))
    return d


@dataclass
class PluckerWitness:
    """Everything the 2x4 minors quadric witness construction produces.

    The cleared identity sums to zero exactly; its coefficients are
    congruent mod p to 1 at (r, n) = (k, 0) and 0 elsewhere; peeling that
    single term off yields the membership certificate for the torsion
    candidate at level k = q-1.
    """

    p: int
    e: int
    q: int
    k: int
    d: int
    identity_residual: Polynomial
    congruence_ok: bool
    certificate: MembershipCertificate

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "q": self.q,
            "k": self.k,
            "d": self.d,
            "identity_residual": poly_to_json(self.identity_residual),
            "congruence_ok": self.congruence_ok,
            "certificate": self.certificate.to_json(),
        }


def plucker_witness(p: int, e: int, budget: int | None = None) -> PluckerWitness:
    """Witness for the quadric relation of the 2x4 minors at k = q-1.

    Builds the cleared-denominator identity in ZZ[s,t,u,v,w,x,y,z] with
    coefficients c(r,n) = dq/(2q-1-r) C(2k+1-r, n) C(k-n, r-n), verifies it
    sums to zero, verifies the congruence table (c = 1 mod p iff
    (r,n) = (k,0), else 0), and assembles from both facts a verified
    certificate for

        candidate * (G_1 G_2 G_3)^k in (G_1^{q+k}, G_2^{q+k}, G_3^{q+k}),

    where G = (ut-xs, vt-ys, wt-zs) and the candidate is the divided q-th
    power sum of the quadric relation.
    """
    q = p**e
    k = q - 1
    _ensure_budget(9 * (k + 1) ** 2 * (2 * k + 2) ** 4, "quadric witness", budget)
    d = clearing_multiplier(p, e)
    ring = plucker_ring()
    rel = plucker_relation(ring)
    D = list(rel.F)
    G = list(rel.G)
    s, t, u, v, w, x, y, z = variables(ring)
    M = [w * y, u * z, v * x]
    st = s * t
    rests = []
    for i in range(3):
        rest = Polynomial.one(ring)
        for j in range(3):
            if j != i:
                rest = rest * G[j]
        rests.append(rest)

    def coeff(r: int, n: int) -> int:
        numerator = d * q
        assert numerator % (2 * q - 1 - r) == 0
        return (numerator // (2 * q - 1 - r)) * binom(2 * k + 1 - r, n) * binom(
            k - n, r - n
        )

    identity_total = Polynomial.zero(ring)
    congruence_ok = True
    for r in range(k + 1):
        for n in range(r + 1):
            c = coeff(r, n)
            expected = 1 if (r == k and n == 0) else 0
            if c % p != expected:
                congruence_ok = False
            if not c:
                continue
            bracket = Polynomial.zero(ring)
            for i in range(3):
                bracket = bracket + (
                    G[i] ** (2 * k + 1)
                    * M[i] ** n
                    * D[i] ** (2 * k + 1 - r - n)
                    * rests[i] ** r
                )
            identity_total = identity_total + (st ** (k - r) * bracket).scale(c)
    cand = torsion_candidate(rel, p, e)
    d_tilde = (d - 1) // p
    cofactors = []
    for i in range(3):
        h = (D[i] ** q * rests[i] ** k).scale(-d_tilde)
        for r in range(k + 1):
            for n in range(r + 1):
                if r == k and n == 0:
                    continue
                c = coeff(r, n)
                if not c:
                    continue
                reduced, remainder = divmod(c, p)
                if remainder:
                    raise CertificateInvalidError(
                        f"identity coefficient at (r={r}, n={n}) is not divisible by {p}"
                    )
                h = h - (
                    st ** (k - r)
                    * M[i] ** n
                    * D[i] ** (2 * k + 1 - r - n)
                    * rests[i] ** r
                ).scale(reduced)
        cofactors.append(h)
    certificate = MembershipCertificate(
        target=cand.value * (G[0] * G[1] * G[2]) ** k,
        generators=[g ** (q + k) for g in G],
        cofactors=cofactors,
    )
    return PluckerWitness(
        p=p,
        e=e,
        q=q,
        k=k,
        d=d,
        identity_residual=identity_total,
        congruence_ok=congruence_ok,
        certificate=certificate,
    )


# ---------------------------------------------------------------------------
# the three-variable containment and the regular-sequence witness
# ---------------------------------------------------------------------------


def containment_check(
    p: int,
    e: int,
    options: GroebnerOptions | None = None,
) -> IdentityReport:
    """Check the ZZ[A,B,T] containment by strong Groebner membership.

    With q = p^e, k = q-1 and N = ((A+B)^q + (-A)^q + (-B)^q)/p, decides

        N * ((A+B) A B)^k  in  (A+B)^{q+k} (T,A)^k (T,B)^k
                              + A^{q+k} (T,B)^k (T+B, A+B)^k
                              + B^{q+k} (T,A)^k (T-A, A+B)^k

    with the product ideals expanded into 3 (k+1)^2 explicit generators.
    The certificate and the (branch, a, b) label of every generator are
    kept on the report for downstream specialization.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("the exponent e must be at least 1")
    start = time.perf_counter()
    q = p**e
    k = q - 1
    ring = RingSpec(("A", "B", "T"))
    A, B, T = variables(ring)
    N = exact_div_int((A + B) ** q + (-A) ** q + (-B) ** q, p)
    target = N * ((A + B) * A * B) ** k
    generators = []
    labels = []
    for a in range(k + 1):
        for b in range(k + 1):
            generators.append(
                (A + B) ** (q + k) * T**a * A ** (k - a) * T**b * B ** (k - b)
            )
            labels.append((1, a, b))
    for a in range(k + 1):
        for b in range(k + 1):
            generators.append(
                A ** (q + k) * T**a * B ** (k - a) * (T + B) ** b * (A + B) ** (k - b)
            )
            labels.append((2, a, b))
    for a in range(k + 1):
        for b in range(k + 1):
            generators.append(
                B ** (q + k) * T**a * A ** (k - a) * (T - A) ** b * (A + B) ** (k - b)
            )
            labels.append((3, a, b))
    certificate = membership(target, generators, options)
    verdict = certificate is not None
    return IdentityReport(
        identity="containment",
        parameters={"p": p, "e": e, "q": q, "k": k},
        residual=Polynomial.zero(ring) if verdict else target,
        verdict=verdict,
        details={"generator_labels": labels},
        certificate=certificate,
        timing={"seconds": time.perf_counter() - start},
    )


def regular_sequence_witness(
    rel: RelationInstance,
    alpha: Polynomial,
    beta: Polynomial,
    p: int,
    e: int,
    options: GroebnerOptions | None = None,
) -> tuple[int, MembershipCertificate]:
    """Witness at k = q-1 for a three-term relation whose F entries admit
    the decomposition G_3 == alpha * F_1 + beta * F_2.

    Specializes the three-variable containment certificate along
    A = -F_2 G_2, B = -F_3 G_3, T = beta F_2 F_3 (after checking the
    decomposition and the simplification identities the specialization
    relies on), factors (F_1 F_2 F_3)^k out of every specialized generator,
    and emits a verified certificate for

        candidate * (G_1 G_2 G_3)^k in (G_1^{q+k}, G_2^{q+k}, G_3^{q+k}).
    """
    if rel.n != 3:
        raise WrongArityError(f"the witness needs a three-term relation, got {rel.n}")
    if not rel.is_exact:
        raise NotARelationError("the witness needs an exact relation")
    ring = rel.ring
    if alpha.ring != ring or beta.ring != ring:
        raise RingMismatchError("alpha and beta live in the wrong ring")
    F, G = list(rel.F), list(rel.G)
    if G[2] != alpha * F[0] + beta * F[1]:
        raise DecompositionError("G_3 is not alpha*F_1 + beta*F_2")
    if not (F[0] * F[1] * F[2]):
        raise DecompositionError("the F entries must all be nonzero")
    a_img = -(F[1] * G[1])
    b_img = -(F[2] * G[2])
    t_img = beta * F[1] * F[2]
    if a_img + b_img != F[0] * G[0]:
        raise DecompositionError("A + B does not simplify to F_1 G_1")
    if t_img + b_img != -(alpha * F[0] * F[2]):
        raise DecompositionError("T + B does not simplify to -alpha F_1 F_3")
    if t_img - a_img != -(F[0] * G[0]) - alpha * F[0] * F[2]:
        raise DecompositionError("T - A does not simplify as expected")
    report = containment_check(p, e, options)
    if not report.verdict:
        raise CertificateInvalidError("the three-variable containment failed")
    q, k = report.parameters["q"], report.parameters["k"]
    assignment = {"A": a_img, "B": b_img, "T": t_img}
    prod_f = F[0] * F[1] * F[2]
    cofactors = [Polynomial.zero(ring) for _ in range(3)]
    labels = report.details["generator_labels"]
    cert = report.certificate
    for label, gen, h in zip(labels, cert.generators, cert.cofactors):
        branch, a, b = label
        if not h:
            continue
        if branch == 1:
            slot = 0
            rest = (
                (beta ** (a + b))
                * F[0] ** q
                * F[1] ** b
                * F[2] ** a
                * G[1] ** (k - a)
                * G[2] ** (k - b)
            ).scale(parity(a + b))
        elif branch == 2:
            slot = 1
            rest = (
                alpha**b
                * beta**a
                * F[1] ** (q + a)
                * F[2] ** b
                * G[0] ** (k - b)
                * G[2] ** (k - a)
            ).scale(parity(q + a + b))
        else:
            slot = 2
            rest = (
                beta**a
                * F[2] ** (q + a)
                * (G[0] + alpha * F[2]) ** b
                * G[0] ** (k - b)
                * G[1] ** (k - a)
            ).scale(parity(q + a + b))
        # the factored specialization must match the direct one exactly
        if substitute(gen, assignment, target=ring) != prod_f**k * G[slot] ** (q + k) * rest:
            raise CertificateInvalidError(
                f"specialized generator (branch {branch}, a={a}, b={b}) "
                "does not factor as expected"
            )
        cofactors[slot] = cofactors[slot] + substitute(h, assignment, target=ring) * rest
    cand = torsion_candidate(rel, p, e)
    certificate = MembershipCertificate(
        target=cand.value * (G[0] * G[1] * G[2]) ** k,
        generators=[g ** (q + k) for g in G],
        cofactors=cofactors,
    )
    return k, certificate


def minor_relation_witness(
    F: list[Polynomial],
    p: int,
    e: int,
    options: GroebnerOptions | None = None,
) -> tuple[int, MembershipCertificate]:
    """Witness at k = q-1 for an arbitrary relation against the 2x3 minors.

    Every relation vector on (vz-wy, wx-uz, uy-vx) is a combination of the
    two matrix rows (u,v,w) and (x,y,z); the coefficients come from the
    2x2 system on the first two entries (its determinant is the third
    minor), checked by exact division.  The row relations are certified by
    the regular-sequence witness, and the two certificates combine with the
    decomposition coefficients as weights.
    """
    if len(F) != 3:
        raise WrongArityError(f"need a three-entry relation vector, got {len(F)}")
    ring = F[0].ring
    row1 = [Polynomial.variable(ring, name) for name in ("u", "v", "w")]
    row2 = [Polynomial.variable(ring, name) for name in ("x", "y", "z")]
    minors = list(minor_polys(ring))
    total = Polynomial.zero(ring)
    for f, d in zip(F, minors):
        total = total + f * d
    if total:
        raise NotARelationError(
            "the vector is not a relation on the minors", residual=total
        )
    try:
        a = exact_div(F[0] * row2[1] - F[1] * row2[0], minors[2])
        b = exact_div(F[1] * row1[0] - F[0] * row1[1], minors[2])
    except NotDivisibleError as exc:
        raise DecompositionError(
            "the relation vector does not decompose over the matrix rows"
        ) from exc
    for f, r1, r2 in zip(F, row1, row2):
        if f != a * r1 + b * r2:
            raise DecompositionError(
                "the decomposition over the matrix rows failed its re-check"
            )
    relE = make_relation(row1, minors)
    relF = make_relation(row2, minors)
    kE, certE = regular_sequence_witness(relE, row2[1], -row2[0], p, e, options)
    kF, certF = regular_sequence_witness(relF, -row1[1], row1[0], p, e, options)
    combined, k, cert = combine_with_weights(
        relE, relF, (kE, certE), (kF, certF), p, e, (a, b)
    )
    if combined.F != tuple(F):
        raise CertificateInvalidError("the combined relation does not match the input")
    return k, cert
