"""Torsion candidates from polynomial relations, and bounded vanishing scans.

A relation is a pair of equal-length lists F, G over the integers with
sum(F_i * G_i) == 0 (optionally modulo a list of ambient quotient
generators).  For a prime power q = p^e the divided Frobenius power sum

    (sum (F_i G_i)^q  -  (sum F_i G_i)^q) / p

is an integer polynomial; modulo the q-th powers G_i^q it represents a
candidate p-torsion class.  The candidate vanishes at level k exactly when

    candidate * (G_1 ... G_n)^k  lies in  (G_1^{q+k}, ..., G_n^{q+k}),

which is decidable over the integers with a strong Groebner basis.  This
module builds candidates, certifies the easy cases (two-term and pairwise
swap relations), runs the bounded scan over k, and combines certified
relations into certified weighted sums.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb

from .groebner import (
    CertificateInvalidError,
    GroebnerOptions,
    MembershipCertificate,
    ResourceBoundError,
    membership,
)
from .polyring import (
    AlgebraError,
    Polynomial,
    RingMismatchError,
    RingSpec,
    embed,
    exact_div_int,
    extend_ring,
    format_poly,
    is_prime,
    mod_reduce,
    parse,
    poly_from_json,
    poly_to_json,
)


class NotARelationError(AlgebraError):
    """The pairing sum is nonzero (or outside the quotient ideal)."""

    def __init__(self, message: str, residual: Polynomial | None = None):
        super().__init__(message)
        self.residual = residual


class WrongArityError(AlgebraError):
    """An operation required a specific number of relation entries."""


class IncompatibleRelationsError(AlgebraError):
    """Two relations cannot be combined (different rings or G lists)."""


@dataclass(frozen=True)
class RelationInstance:
    """A validated relation sum(F_i * G_i) == 0 over the integers.

    When ``quotient_extra`` is nonempty the pairing sum is instead required
    to lie in the ideal the extra generators span; ``extra_cofactors`` then
    stores one verified cofactor per extra generator, so that

        sum(F_i * G_i) == sum(extra_cofactors_j * quotient_extra_j).

    This models a relation that only holds in the quotient by those
    generators (the hypersurface setting); exact relations keep both tuples
    empty.  Construct through make_relation, which validates everything.
    """

    ring: RingSpec
    F: tuple[Polynomial, ...]
    G: tuple[Polynomial, ...]
    quotient_extra: tuple[Polynomial, ...] = ()
    extra_cofactors: tuple[Polynomial, ...] = ()

    @property
    def n(self) -> int:
        return len(self.G)

    @property
    def is_exact(self) -> bool:
        return not self.quotient_extra

    def pairing_sum(self) -> Polynomial:
        total = Polynomial.zero(self.ring)
        for f, g in zip(self.F, self.G):
            total = total + f * g
        return total

    def product(self) -> Polynomial:
        total = Polynomial.one(self.ring)
        for g in self.G:
            total = total * g
        return total

    def to_json(self) -> dict:
        obj = {
            "vars": list(self.ring.variables),
            "F": [poly_to_json(f) for f in self.F],
            "G": [poly_to_json(g) for g in self.G],
        }
        if self.quotient_extra:
            obj["quotient_extra"] = [poly_to_json(h) for h in self.quotient_extra]
        return obj


def make_relation(
    F: list[Polynomial],
    G: list[Polynomial],
    quotient_extra: list[Polynomial] = (),
    options: GroebnerOptions | None = None,
) -> RelationInstance:
    """Validate and build a RelationInstance.

    Raises NotARelationError (with the offending residual) when the pairing
    sum is nonzero, or lies outside the quotient ideal when one is given.
    """
    if len(F) != len(G):
        raise WrongArityError(f"{len(F)} F entries against {len(G)} G entries")
    if len(G) < 2:
        raise WrongArityError("a relation needs at least two terms")
    ring = G[0].ring
    if ring.modulus is not None:
        raise RingMismatchError("relations live over the integers")
    for poly in list(F) + list(G) + list(quotient_extra):
        if poly.ring != ring:
            raise RingMismatchError("relation polynomials live in different rings")
    total = Polynomial.zero(ring)
    for f, g in zip(F, G):
        total = total + f * g
    if not quotient_extra:
        if total:
            raise NotARelationError(
                f"pairing sum is nonzero: {format_poly(total)}", residual=total
            )
        return RelationInstance(ring, tuple(F), tuple(G))
    cert = membership(total, list(quotient_extra), options)
    if cert is None:
        raise NotARelationError(
            "pairing sum does not lie in the quotient ideal: "
            f"{format_poly(total)}",
            residual=total,
        )
    return RelationInstance(
        ring, tuple(F), tuple(G), tuple(quotient_extra), tuple(cert.cofactors)
    )


def relation_from_json(obj: dict) -> RelationInstance:
    """Load a relation from the JSON shape emitted by RelationInstance.

    Entries of "F", "G" and "quotient_extra" may be polynomial JSON objects
    or plain strings in the parser syntax.
    """
    ring = RingSpec(tuple(obj["vars"]))

    def load(entry):
        if isinstance(entry, str):
            return parse(entry, ring)
        return poly_from_json(entry, ring)

    F = [load(e) for e in obj["F"]]
    G = [load(e) for e in obj["G"]]
    extra = [load(e) for e in obj.get("quotient_extra", [])]
    return make_relation(F, G, extra)


@dataclass(frozen=True)
class TorsionCandidate:
    """The divided Frobenius power sum of a relation at q = p^e.

    Invariant (checked at construction time by torsion_candidate):

        p * value + pairing_sum^q == sum (F_i G_i)^q

    so for an exact relation p * value is literally the q-th power sum.
    ``frobenius_powers`` caches the scan ideal generators G_i^q.
    """

    relation: RelationInstance
    p: int
    e: int
    q: int
    value: Polynomial
    frobenius_powers: tuple[Polynomial, ...]

    def to_json(self) -> dict:
        return {
            "relation": self.relation.to_json(),
            "p": self.p,
            "e": self.e,
            "q": self.q,
            "value": poly_to_json(self.value),
            "frobenius_powers": [poly_to_json(g) for g in self.frobenius_powers],
        }


def torsion_candidate(rel: RelationInstance, p: int, e: int) -> TorsionCandidate:
    """Build the candidate for the relation at q = p^e.

    The power sum minus pairing_sum^q is divisible by p because q-th powers
    commute with sums modulo p; exact_div_int still checks this, and a
    failure there would indicate an arithmetic bug, not bad input.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("the exponent e must be at least 1")
    q = p**e
    power_sum = Polynomial.zero(rel.ring)
    for f, g in zip(rel.F, rel.G):
        power_sum = power_sum + (f * g) ** q
    value = exact_div_int(power_sum - rel.pairing_sum() ** q, p)
    return TorsionCandidate(
        relation=rel,
        p=p,
        e=e,
        q=q,
        value=value,
        frobenius_powers=tuple(g**q for g in rel.G),
    )


def annihilation_certificate(cand: TorsionCandidate) -> MembershipCertificate:
    """Certify p * value in (G_1^q, ..., G_n^q) plus the quotient ideal.

    The cofactors are the q-th powers F_i^q; for a quotient relation with
    pairing sum S == sum(e_j * extra_j) the extra generators receive the
    cofactors -S^{q-1} * e_j, which absorb the S^q correction exactly.
    """
    rel = cand.relation
    generators = list(cand.frobenius_powers)
    cofactors = [f**cand.q for f in rel.F]
    if rel.quotient_extra:
        s_power = rel.pairing_sum() ** (cand.q - 1)
        generators.extend(rel.quotient_extra)
        cofactors.extend(-(s_power * ej) for ej in rel.extra_cofactors)
    return MembershipCertificate(
        target=cand.value.scale(cand.p),
        generators=generators,
        cofactors=cofactors,
    )


@dataclass
class VanishingReport:
    """Outcome of a bounded scan for the vanishing level k.

    status is FOUND (with the level and a verified certificate), EXHAUSTED
    (no level up to k_max works, proven by strong Groebner normal forms), or
    UNKNOWN (a resource cap interrupted the scan; nothing is claimed).
    """

    candidate: TorsionCandidate
    k_max: int
    status: str
    k: int | None = None
    certificate: MembershipCertificate | None = None
    resource: str | None = None
    quotient_extra: tuple[Polynomial, ...] = ()
    timing: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "candidate": self.candidate.to_json(),
            "k_max": self.k_max,
            "status": self.status,
            "k": self.k,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "resource": self.resource,
            "quotient_extra": [poly_to_json(h) for h in self.quotient_extra],
            "timing": dict(self.timing),
        }


def vanishing_scan(
    cand: TorsionCandidate,
    k_max: int,
    quotient_extra: list[Polynomial] | None = None,
    options: GroebnerOptions | None = None,
) -> VanishingReport:
    """Scan k = 0..k_max for value * (G_1...G_n)^k in (G_1^{q+k}, ...).

    Each level is decided independently over the integers; the quotient
    generators of the relation (plus any passed explicitly) are adjoined to
    the ideal, which is membership in the quotient ring.  The first success
    returns FOUND with its certificate; a clean sweep returns EXHAUSTED.
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    rel = cand.relation
    extra = list(rel.quotient_extra)
    for h in quotient_extra or []:
        if h.ring != rel.ring:
            raise RingMismatchError("quotient generators live in the wrong ring")
        if h not in extra:
            extra.append(h)
    start = time.perf_counter()
    product = rel.product()
    try:
        for k in range(k_max + 1):
            target = cand.value * product**k
            generators = [g ** (cand.q + k) for g in rel.G] + extra
            cert = membership(target, generators, options)
            if cert is not None:
                return VanishingReport(
                    candidate=cand,
                    k_max=k_max,
                    status="FOUND",
                    k=k,
                    certificate=cert,
                    quotient_extra=tuple(extra),
                    timing={"seconds": time.perf_counter() - start},
                )
    except ResourceBoundError as exc:
        return VanishingReport(
            candidate=cand,
            k_max=k_max,
            status="UNKNOWN",
            resource=str(exc),
            quotient_extra=tuple(extra),
            timing={"seconds": time.perf_counter() - start},
        )
    return VanishingReport(
        candidate=cand,
        k_max=k_max,
        status="EXHAUSTED",
        quotient_extra=tuple(extra),
        timing={"seconds": time.perf_counter() - start},
    )


def two_term_closed_form(
    rel: RelationInstance, p: int, e: int
) -> tuple[Polynomial, MembershipCertificate]:
    """Closed form for two-term relations: the candidate is (F1*G1)^q when
    p = 2 and zero otherwise, and it already lies in (G1^q, G2^q) at k = 0.

    Returns the candidate value and a verified certificate; the value is
    cross-checked against the general construction.
    """
    if rel.n != 2:
        raise WrongArityError(f"closed form needs exactly two terms, got {rel.n}")
    if not rel.is_exact:
        raise WrongArityError("closed form needs an exact relation")
    cand = torsion_candidate(rel, p, e)
    q = cand.q
    if p == 2:
        value = (rel.F[0] * rel.G[0]) ** q
        cofactors = [rel.F[0] ** q, Polynomial.zero(rel.ring)]
    else:
        value = Polynomial.zero(rel.ring)
        cofactors = [Polynomial.zero(rel.ring), Polynomial.zero(rel.ring)]
    if value != cand.value:
        raise CertificateInvalidError(
            "closed form disagrees with the general construction"
        )
    cert = MembershipCertificate(
        target=value,
        generators=list(cand.frobenius_powers),
        cofactors=cofactors,
    )
    return value, cert


def koszul_certificate(
    G: list[Polynomial], i: int, j: int, p: int, e: int
) -> tuple[int, MembershipCertificate]:
    """Certificate at k = 0 for the pairwise swap relation on G_i, G_j.

    The relation puts G_j at slot i and -G_i at slot j, so the candidate is
    the two-term closed form embedded in the full ideal (G_1^q, ..., G_n^q).
    """
    n = len(G)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"indices {i}, {j} outside 0..{n - 1}")
    if i == j:
        raise IndexError("the swap relation needs two distinct indices")
    ring = G[0].ring
    zero = Polynomial.zero(ring)
    F = [zero] * n
    F[i] = G[j]
    F[j] = -G[i]
    rel = make_relation(F, list(G))
    cand = torsion_candidate(rel, p, e)
    cofactors = [zero] * n
    if p == 2:
        cofactors[i] = G[j] ** cand.q
    cert = MembershipCertificate(
        target=cand.value,
        generators=list(cand.frobenius_powers),
        cofactors=cofactors,
    )
    return 0, cert


def _check_scan_certificate(
    rel: RelationInstance,
    cand: TorsionCandidate,
    k: int,
    cert: MembershipCertificate,
) -> None:
    """Require cert to certify value * (G_1...G_n)^k in (G_i^{q+k})."""
    if k < 0:
        raise CertificateInvalidError("negative level k")
    if cert.modulus is not None:
        raise CertificateInvalidError("expected an exact certificate")
    if cert.target != cand.value * rel.product() ** k:
        raise CertificateInvalidError(
            f"certificate target is not the candidate shifted to level {k}"
        )
    if list(cert.generators) != [g ** (cand.q + k) for g in rel.G]:
        raise CertificateInvalidError(
            f"certificate generators are not the (q+{k})-th powers of G"
        )
    cert.verify()


def combine_with_weights(
    relE: RelationInstance,
    relF: RelationInstance,
    certE: tuple[int, MembershipCertificate],
    certF: tuple[int, MembershipCertificate],
    p: int,
    e: int,
    weights: tuple[Polynomial, Polynomial],
) -> tuple[RelationInstance, int, MembershipCertificate]:
    """Certify the weighted-sum relation (a*E_i + b*F_i, G_i) constructively.

    Given certificates for relE and relF at levels k1 and k2 (same prime
    power q = p^e, same G list), produces one for the relation with entries
    a*E_i + b*F_i at level k = max(k1, k2).  The q-th power of each entry
    splits as a^q E_i^q + b^q F_i^q plus p times integral cross terms
    (binomial coefficients C(q, j) are divisible by p for 0 < j < q), so the
    two certificates rescale and the cross terms land in the ideal directly.
    """
    if relE.ring != relF.ring:
        raise IncompatibleRelationsError("relations live in different rings")
    if relE.G != relF.G:
        raise IncompatibleRelationsError("relations have different G lists")
    if not (relE.is_exact and relF.is_exact):
        raise IncompatibleRelationsError("only exact relations can be combined")
    a, b = weights
    if a.ring != relE.ring or b.ring != relE.ring:
        raise RingMismatchError("weights live in the wrong ring")
    k1, ce = certE
    k2, cf = certF
    candE = torsion_candidate(relE, p, e)
    candF = torsion_candidate(relF, p, e)
    _check_scan_certificate(relE, candE, k1, ce)
    _check_scan_certificate(relF, candF, k2, cf)
    q = candE.q
    k = max(k1, k2)
    ring = relE.ring
    G = relE.G
    combined = make_relation(
        [a * ei + b * fi for ei, fi in zip(relE.F, relF.F)], list(G)
    )
    cand = torsion_candidate(combined, p, e)
    aq = a**q
    bq = b**q
    rests1 = []
    rests2 = []
    restsk = []
    for i in range(len(G)):
        rest = Polynomial.one(ring)
        for jj, gj in enumerate(G):
            if jj != i:
                rest = rest * gj
        rests1.append(rest ** (k - k1))
        rests2.append(rest ** (k - k2))
        restsk.append(rest**k)
    cofactors = []
    for i in range(len(G)):
        cross = Polynomial.zero(ring)
        for j in range(1, q):
            coeff, rem = divmod(comb(q, j), p)
            if rem:
                raise CertificateInvalidError(
                    f"binomial C({q},{j}) is not divisible by {p}"
                )
            cross = cross + (
                (a**j) * (b ** (q - j)) * (relE.F[i] ** j) * (relF.F[i] ** (q - j))
            ).scale(coeff)
        cofactors.append(
            aq * ce.cofactors[i] * rests1[i]
            + bq * cf.cofactors[i] * rests2[i]
            + cross * restsk[i]
        )
    cert = MembershipCertificate(
        target=cand.value * combined.product() ** k,
        generators=[g ** (q + k) for g in G],
        cofactors=cofactors,
    )
    return combined, k, cert


def combine_relations(
    relE: RelationInstance,
    relF: RelationInstance,
    certE: tuple[int, MembershipCertificate],
    certF: tuple[int, MembershipCertificate],
    p: int,
    e: int,
) -> tuple[int, MembershipCertificate]:
    """Certify the formal-sum relation (s*E_i + t*F_i, G_i) with fresh s, t.

    Extends the ring with two fresh variables named s and t (a name clash is
    an error) and delegates to combine_with_weights.  Returns the level
    k = max(k1, k2) and the verified certificate in the extended ring.
    """
    if relE.ring != relF.ring:
        raise IncompatibleRelationsError("relations live in different rings")
    if relE.G != relF.G:
        raise IncompatibleRelationsError("relations have different G lists")
    big = extend_ring(relE.ring, ("s", "t"))
    s = Polynomial.variable(big, "s")
    t = Polynomial.variable(big, "t")

    def lift_rel(rel: RelationInstance) -> RelationInstance:
        return make_relation([embed(f, big) for f in rel.F], [embed(g, big) for g in rel.G])

    def lift_cert(rel, pair):
        k, cert = pair
        return k, MembershipCertificate(
            target=embed(cert.target, big),
            generators=[embed(g, big) for g in cert.generators],
            cofactors=[embed(c, big) for c in cert.cofactors],
        )

    relE_big = lift_rel(relE)
    relF_big = lift_rel(relF)
    _, k, cert = combine_with_weights(
        relE_big, relF_big, lift_cert(relE, certE), lift_cert(relF, certF), p, e, (s, t)
    )
    return k, cert


def shift_certificate(
    rel: RelationInstance,
    p: int,
    e: int,
    k: int,
    cert: MembershipCertificate,
) -> tuple[int, MembershipCertificate]:
    """Turn a level-k certificate into a level-(k+1) certificate.

    Multiplying the identity by G_1...G_n moves each cofactor across:
    h_i * G_i^{q+k} * (G_1...G_n) == (h_i * prod_{j != i} G_j) * G_i^{q+k+1}.
    Quotient generators, when present, keep their cofactors times the
    product.  This realizes the monotonicity of FOUND levels.
    """
    cand = torsion_candidate(rel, p, e)
    q = cand.q
    extra = list(cert.generators[rel.n :])
    expected = [g ** (q + k) for g in rel.G] + extra
    if list(cert.generators) != expected:
        raise CertificateInvalidError(
            f"certificate generators do not match level {k}"
        )
    if cert.target != cand.value * rel.product() ** k:
        raise CertificateInvalidError("certificate target does not match level")
    product = rel.product()
    cofactors = []
    for i, g in enumerate(rel.G):
        rest = Polynomial.one(rel.ring)
        for jj, gj in enumerate(rel.G):
            if jj != i:
                rest = rest * gj
        cofactors.append(cert.cofactors[i] * rest)
    for j in range(len(extra)):
        cofactors.append(cert.cofactors[rel.n + j] * product)
    shifted = MembershipCertificate(
        target=cand.value * product ** (k + 1),
        generators=[g ** (q + k + 1) for g in rel.G] + extra,
        cofactors=cofactors,
    )
    return k + 1, shifted
