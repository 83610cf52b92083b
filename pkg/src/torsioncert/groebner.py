"""Groebner machinery: reduced bases over prime fields, strong bases over the
integers, normal forms, and membership certificates with cofactor tracking.

Over a field the classical Buchberger completion suffices.  Over the integers
membership cannot be decided by monomial divisibility alone: reduction must
respect coefficient divisibility, and completion must process gcd
combinations (G-polynomials) next to the usual S-polynomials.  The result is
a strong basis: the leading term of every nonzero ideal element is divisible,
coefficient included, by some basis leading term, so the zero-or-not of a
normal form decides membership in both directions.

Every reduction step is tracked, so a successful membership test yields the
explicit cofactors writing the target as a combination of the original
generators.  Certificates re-verify themselves by plain arithmetic on
construction; nothing downstream ever trusts the search that produced them.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd

from .polyring import (
    AlgebraError,
    Polynomial,
    RingMismatchError,
    RingSpec,
    exact_div_int,
    is_prime,
    mod_reduce,
    mono_degree,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    poly_from_json,
    poly_to_json,
)


class ResourceBoundError(AlgebraError):
    """A configured resource cap was hit; the computation is inconclusive."""


class CertificateInvalidError(AlgebraError):
    """A certificate failed its arithmetic re-verification or its contract."""


@dataclass(frozen=True)
class GroebnerOptions:
    """Resource caps for basis completion and reduction.

    Exceeding a cap always raises ResourceBoundError; a capped run never
    returns a wrong verdict.
    """

    max_pairs: int = 200_000
    max_degree: int | None = None
    max_terms: int | None = None


DEFAULT_OPTIONS = GroebnerOptions()


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, u, v) with u*a + v*b == g > 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class _Elem:
    """A basis element with cached leading data and generator history."""

    __slots__ = ("poly", "lm", "lc", "lcinv", "tail", "hist")

    def __init__(self, poly: Polynomial, hist: list[Polynomial] | None):
        self.poly = poly
        self.lm, self.lc = poly.leading()
        p = poly.ring.modulus
        self.lcinv = pow(self.lc, p - 2, p) if p is not None else None
        self.tail = [(m, c) for m, c in poly.terms.items() if m != self.lm]
        self.hist = hist


def _heap_key(ring: RingSpec, mono: tuple[int, ...]) -> tuple[int, ...]:
    """Min-heap key whose minimum is the largest monomial in ring order."""
    return tuple(-x for x in ring.order_key(mono))


def _reduce(
    f_terms: dict,
    ring: RingSpec,
    elems: list[_Elem],
    opts: GroebnerOptions,
    track: bool,
) -> tuple[dict, list[dict] | None]:
    """Fully reduce a term map against the basis elements.

    Returns the remainder term map and, when tracked, one cofactor term map
    per element such that input == sum(cofactor * element) + remainder.
    Reduction is coefficient-aware over the integers: a term is reducible
    only when some leading term divides it monomial and coefficient included.
    """
    p = ring.modulus
    coeffs = dict(f_terms)
    out: dict = {}
    cof: list[dict] | None = [{} for _ in elems] if track else None
    heap = [(_heap_key(ring, m), m) for m in coeffs]
    heapq.heapify(heap)
    cap = opts.max_terms
    while heap:
        _, m = heapq.heappop(heap)
        c = coeffs.pop(m, 0)
        if not c:
            continue
        for idx, el in enumerate(elems):
            if not mono_divides(el.lm, m):
                continue
            if p is None:
                q, r = divmod(c, el.lc)
                if r:
                    continue
            else:
                q = c * el.lcinv % p
            delta = mono_div(m, el.lm)
            for m2, c2 in el.tail:
                mm = mono_mul(delta, m2)
                nc = coeffs.get(mm, 0) - q * c2
                if p is not None:
                    nc %= p
                if nc:
                    if mm not in coeffs:
                        heapq.heappush(heap, (_heap_key(ring, mm), mm))
                    coeffs[mm] = nc
                else:
                    coeffs.pop(mm, None)
            if track:
                cd = cof[idx]
                nq = cd.get(delta, 0) + q
                if p is not None:
                    nq %= p
                if nq:
                    cd[delta] = nq
                else:
                    cd.pop(delta, None)
            break
        else:
            out[m] = c
        if cap is not None and len(coeffs) + len(out) > cap:
            raise ResourceBoundError(
                f"reduction exceeded the {cap}-term cap"
            )
    return out, cof


def _normalize_elem(
    poly: Polynomial, hist: list[Polynomial] | None
) -> tuple[Polynomial, list[Polynomial] | None]:
    """Scale so the leading coefficient is positive (Z) or one (field)."""
    p = poly.ring.modulus
    _, lc = poly.leading()
    if p is None:
        if lc < 0:
            poly = -poly
            hist = [-h for h in hist] if hist is not None else None
    elif lc != 1:
        inv = pow(lc, p - 2, p)
        poly = poly.scale(inv)
        hist = [h.scale(inv) for h in hist] if hist is not None else None
    return poly, hist


class _Completion:
    """Shared state for one basis computation."""

    def __init__(self, ring: RingSpec, opts: GroebnerOptions, track: bool):
        self.ring = ring
        self.opts = opts
        self.track = track
        self.elems: list[_Elem] = []
        self.pairs: list[tuple] = []
        self.processed = 0

    def add(self, poly: Polynomial, hist: list[Polynomial] | None):
        poly, hist = _normalize_elem(poly, hist)
        el = _Elem(poly, hist)
        idx = len(self.elems)
        for j in range(idx):
            self._push_pairs(j, idx, self.elems[j], el)
        self.elems.append(el)

    def _push_pairs(self, i: int, j: int, a: _Elem, b: _Elem):
        lcm = mono_lcm(a.lm, b.lm)
        deg = mono_degree(lcm)
        if self.opts.max_degree is not None and deg > self.opts.max_degree:
            raise ResourceBoundError(
                f"S-pair degree {deg} exceeds the cap {self.opts.max_degree}"
            )
        heapq.heappush(self.pairs, (deg, i, j, 0))
        if self.ring.modulus is None:
            if a.lc % b.lc and b.lc % a.lc:
                heapq.heappush(self.pairs, (deg, i, j, 1))

    def _combination(self, i: int, j: int, kind: int):
        """Build the S-polynomial (kind 0) or G-polynomial (kind 1)."""
        a, b = self.elems[i], self.elems[j]
        lcm = mono_lcm(a.lm, b.lm)
        da, db = mono_div(lcm, a.lm), mono_div(lcm, b.lm)
        if kind == 0:
            if self.ring.modulus is None:
                l = a.lc * b.lc // gcd(a.lc, b.lc)
                ca, cb = l // a.lc, -(l // b.lc)
            else:
                ca, cb = 1, -1
        else:
            _, ca, cb = _xgcd(a.lc, b.lc)
        poly = a.poly.mul_term(ca, da) + b.poly.mul_term(cb, db)
        hist = None
        if self.track:
            hist = [
                ha.mul_term(ca, da) + hb.mul_term(cb, db)
                for ha, hb in zip(a.hist, b.hist)
            ]
        return poly, hist

    def run(self):
        """Process every queued pair, growing the basis as needed."""
        while self.pairs:
            _, i, j, kind = heapq.heappop(self.pairs)
            self.processed += 1
            if self.processed > self.opts.max_pairs:
                raise ResourceBoundError(
                    f"basis completion exceeded the {self.opts.max_pairs}-pair cap"
                )
            poly, hist = self._combination(i, j, kind)
            if not poly:
                continue
            rem, cof = _reduce(poly.terms, self.ring, self.elems, self.opts, self.track)
            if not rem:
                continue
            r = Polynomial._raw(self.ring, rem)
            if self.track:
                for idx, cd in enumerate(cof):
                    if cd:
                        mult = Polynomial._raw(self.ring, cd)
                        hist = [
                            h - mult * hg
                            for h, hg in zip(hist, self.elems[idx].hist)
                        ]
            self.add(r, hist)

    def interreduce(self) -> bool:
        """Reduce every element against the others until stable.

        Returns True when anything changed.  Histories stay consistent.
        """
        changed_any = False
        restart = True
        while restart:
            restart = False
            for i in range(len(self.elems)):
                el = self.elems[i]
                others = self.elems[:i] + self.elems[i + 1 :]
                if not others:
                    continue
                rem, cof = _reduce(el.poly.terms, self.ring, others, self.opts, self.track)
                r = Polynomial._raw(self.ring, rem)
                if r == el.poly:
                    continue
                changed_any = True
                hist = el.hist
                if self.track:
                    for idx, cd in enumerate(cof):
                        if cd:
                            mult = Polynomial._raw(self.ring, cd)
                            hist = [
                                h - mult * hg
                                for h, hg in zip(hist, others[idx].hist)
                            ]
                if not r:
                    del self.elems[i]
                else:
                    poly, hist = _normalize_elem(r, hist)
                    self.elems[i] = _Elem(poly, hist)
                restart = True
                break
        return changed_any

    def requeue_all_pairs(self):
        self.pairs = []
        for j in range(len(self.elems)):
            for i in range(j):
                self._push_pairs(i, j, self.elems[i], self.elems[j])


@dataclass
class GroebnerBasis:
    """A completed basis together with its provenance.

    ``histories[i]`` expresses ``basis[i]`` as a combination of the original
    generators; it is what turns a successful reduction into a certificate.
    """

    ring: RingSpec
    generators: list[Polynomial]
    basis: list[Polynomial]
    histories: list[list[Polynomial]]
    options: GroebnerOptions = field(default_factory=lambda: DEFAULT_OPTIONS)

    @property
    def domain(self) -> str:
        return "FIELD" if self.ring.modulus is not None else "INTEGER_RING"

    def reduce(
        self, f: Polynomial, track: bool = False
    ) -> tuple[Polynomial, list[Polynomial] | None]:
        """Full reduction of f; optionally with cofactors over the basis."""
        if f.ring != self.ring:
            raise RingMismatchError("polynomial ring differs from basis ring")
        elems = [_Elem(b, None) for b in self.basis]
        rem, cof = _reduce(f.terms, self.ring, elems, self.options, track)
        remainder = Polynomial._raw(self.ring, rem)
        if not track:
            return remainder, None
        cofactors = [Polynomial._raw(self.ring, cd) for cd in cof]
        return remainder, cofactors


def _compute_basis(
    gens: list[Polynomial], opts: GroebnerOptions, track: bool
) -> GroebnerBasis:
    if not gens:
        raise ValueError("need at least one generator")
    ring = gens[0].ring
    one = Polynomial.one(ring)
    zero = Polynomial.zero(ring)
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError("generators live in different rings")
        if not g:
            raise ValueError("zero generators are not allowed")
    comp = _Completion(ring, opts, track)
    for i, g in enumerate(gens):
        hist = None
        if track:
            hist = [one if j == i else zero for j in range(len(gens))]
        comp.add(g, hist)
    # Complete, tidy, then re-check every pair of the tidied basis.  The
    # second pass is a construction-independent proof of the basis property;
    # it only costs one extra sweep because nothing new normally appears.
    comp.run()
    while True:
        changed = comp.interreduce()
        before = len(comp.elems)
        comp.requeue_all_pairs()
        comp.run()
        if len(comp.elems) == before and not changed:
            break
    order = sorted(
        range(len(comp.elems)),
        key=lambda i: ring.order_key(comp.elems[i].lm),
    )
    basis = [comp.elems[i].poly for i in order]
    histories = [comp.elems[i].hist for i in order] if track else [None] * len(order)
    return GroebnerBasis(ring, list(gens), basis, histories, opts)


def buchberger(
    gens: list[Polynomial], options: GroebnerOptions | None = None
) -> GroebnerBasis:
    """Reduced Groebner basis over a prime field (monic, auto-reduced)."""
    if not gens:
        raise ValueError("need at least one generator")
    if gens[0].ring.modulus is None:
        raise RingMismatchError("buchberger needs prime-field coefficients")
    return _compute_basis(gens, options or DEFAULT_OPTIONS, track=True)


def strong_groebner(
    gens: list[Polynomial], options: GroebnerOptions | None = None
) -> GroebnerBasis:
    """Strong Groebner basis over the integers.

    Strong means: every nonzero element of the ideal has its leading term
    divisible, coefficient included, by some basis leading term.  Normal
    forms against such a basis decide membership over the integers.
    """
    if not gens:
        raise ValueError("need at least one generator")
    if gens[0].ring.modulus is not None:
        raise RingMismatchError("strong_groebner needs integer coefficients")
    return _compute_basis(gens, options or DEFAULT_OPTIONS, track=True)


def groebner_basis(
    gens: list[Polynomial], options: GroebnerOptions | None = None
) -> GroebnerBasis:
    """Dispatch on the coefficient domain of the generators."""
    if not gens:
        raise ValueError("need at least one generator")
    if gens[0].ring.modulus is None:
        return strong_groebner(gens, options)
    return buchberger(gens, options)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Fully reduced remainder of f against a completed basis."""
    return gb.reduce(f)[0]


@dataclass
class MembershipCertificate:
    """target == sum(cofactor_i * generator_i), re-checked on construction.

    ``modulus`` is None for an exact integer identity; otherwise all
    polynomials live over the field with that prime modulus and the identity
    holds there.  Verification is plain arithmetic, independent of however
    the cofactors were found.
    """

    target: Polynomial
    generators: list[Polynomial]
    cofactors: list[Polynomial]
    modulus: int | None = None
    verified: bool = field(default=False, init=False)

    def __post_init__(self):
        self.generators = list(self.generators)
        self.cofactors = list(self.cofactors)
        if len(self.generators) != len(self.cofactors):
            raise CertificateInvalidError(
                f"{len(self.generators)} generators vs {len(self.cofactors)} cofactors"
            )
        ring = self.target.ring
        if ring.modulus != self.modulus:
            raise CertificateInvalidError(
                f"ring modulus {ring.modulus} does not match certificate modulus "
                f"{self.modulus}"
            )
        for poly in self.generators + self.cofactors:
            if poly.ring != ring:
                raise CertificateInvalidError("certificate polynomials mix rings")
        self.verify()

    def recompose(self) -> Polynomial:
        total = Polynomial.zero(self.target.ring)
        for c, g in zip(self.cofactors, self.generators):
            total = total + c * g
        return total

    def verify(self) -> bool:
        if self.recompose() != self.target:
            self.verified = False
            raise CertificateInvalidError(
                "certificate does not recompose to its target"
            )
        self.verified = True
        return True

    def to_json(self) -> dict:
        return {
            "target": poly_to_json(self.target),
            "generators": [poly_to_json(g) for g in self.generators],
            "cofactors": [poly_to_json(c) for c in self.cofactors],
            "modulus": self.modulus,
            "verified": bool(self.verified),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MembershipCertificate":
        modulus = obj.get("modulus")
        target_vars = tuple(obj["target"]["vars"])
        ring = RingSpec(target_vars, modulus=modulus)
        return cls(
            target=poly_from_json(obj["target"], ring),
            generators=[poly_from_json(g, ring) for g in obj["generators"]],
            cofactors=[poly_from_json(c, ring) for c in obj["cofactors"]],
            modulus=modulus,
        )


def membership(
    f: Polynomial,
    gens: list[Polynomial],
    options: GroebnerOptions | None = None,
) -> MembershipCertificate | None:
    """Decide ideal membership and certify positives.

    Returns a verified MembershipCertificate when f lies in the ideal the
    generators span, or None when it provably does not.  Zero generators are
    tolerated (they contribute nothing and get zero cofactors).  A resource
    cap raises ResourceBoundError instead of guessing.
    """
    if not gens:
        raise ValueError("need at least one generator")
    ring = gens[0].ring
    if f.ring != ring:
        raise RingMismatchError("target ring differs from generator ring")
    zero = Polynomial.zero(ring)
    live = [(i, g) for i, g in enumerate(gens) if g]
    if not live:
        if f:
            return None
        return MembershipCertificate(
            target=f,
            generators=list(gens),
            cofactors=[zero] * len(gens),
            modulus=ring.modulus,
        )
    gb = groebner_basis([g for _, g in live], options)
    remainder, cof = gb.reduce(f, track=True)
    if remainder:
        return None
    live_cofactors = [zero] * len(live)
    for c, hist in zip(cof, gb.histories):
        if not c:
            continue
        live_cofactors = [acc + c * h for acc, h in zip(live_cofactors, hist)]
    cofactors = [zero] * len(gens)
    for (i, _), c in zip(live, live_cofactors):
        cofactors[i] = c
    return MembershipCertificate(
        target=f,
        generators=list(gens),
        cofactors=cofactors,
        modulus=ring.modulus,
    )


def relation_lift(
    cert: MembershipCertificate,
    F: list[Polynomial],
    G: list[Polynomial],
    p: int,
    e: int,
    k: int,
) -> list[Polynomial]:
    """Turn a vanishing certificate into an exact integral relation.

    Given an exact certificate for  D * (G_1...G_n)^k == sum h_i G_i^(q+k),
    where D is the divided Frobenius power sum of the relation (F, G) and
    q = p^e, the returned alpha_i satisfy, exactly over the integers:

        sum alpha_i * G_i^(q+k) == 0
        alpha_i  ==  F_i^q * (prod_{j != i} G_j)^k   (mod p)

    The construction is alpha_i = F_i^q * (prod_{j != i} G_j)^k - p * h_i;
    both properties are re-checked before returning.
    """
    if not is_prime(p):
        raise CertificateInvalidError(f"{p} is not prime")
    if e < 1 or k < 0:
        raise CertificateInvalidError("need e >= 1 and k >= 0")
    if cert.modulus is not None:
        raise CertificateInvalidError("lift requires an exact (modulus-free) certificate")
    if len(F) != len(G) or len(F) < 2:
        raise CertificateInvalidError("F and G must have equal length >= 2")
    ring = cert.target.ring
    for poly in list(F) + list(G):
        if poly.ring != ring:
            raise RingMismatchError("relation ring differs from certificate ring")
    q = p**e
    power_sum = Polynomial.zero(ring)
    for fi, gi in zip(F, G):
        power_sum = power_sum + (fi * gi) ** q
    lam = exact_div_int(power_sum, p)
    prod_all = Polynomial.one(ring)
    for gi in G:
        prod_all = prod_all * gi
    if cert.target != lam * prod_all**k:
        raise CertificateInvalidError(
            "certificate target is not the divided power sum times (G_1...G_n)^k"
        )
    expected_gens = [gi ** (q + k) for gi in G]
    if cert.generators != expected_gens:
        raise CertificateInvalidError(
            "certificate generators are not the (q+k)-th powers of G"
        )
    cert.verify()
    alphas = []
    frobenius_parts = []
    for i, fi in enumerate(F):
        rest = Polynomial.one(ring)
        for j, gj in enumerate(G):
            if j != i:
                rest = rest * gj
        part = fi**q * rest**k
        frobenius_parts.append(part)
        alphas.append(part - cert.cofactors[i].scale(p))
    total = Polynomial.zero(ring)
    for alpha, gi in zip(alphas, G):
        total = total + alpha * gi ** (q + k)
    if total:
        raise CertificateInvalidError("lifted relation does not sum to zero")
    for alpha, part in zip(alphas, frobenius_parts):
        if mod_reduce(alpha - part, p):
            raise CertificateInvalidError(
                "lifted cofactor is not congruent to its Frobenius part mod p"
            )
    return alphas
