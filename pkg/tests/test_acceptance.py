"""Acceptance gate: every criterion checked exactly, one verdict line each.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines; each criterion also carries its own wall-clock budget, asserted.
All checks are exact (integer or polynomial equality, tolerance zero).
"""

import random
import time

import pytest

from torsioncert.catalog import (
    hypersurface_relation,
    minors_ring,
    minors_row_relation,
    plucker_relation,
)
from torsioncert.cohomology import (
    combine_relations,
    torsion_candidate,
    vanishing_scan,
)
from torsioncert.groebner import (
    MembershipCertificate,
    buchberger,
    groebner_basis,
    membership,
    normal_form,
    relation_lift,
    strong_groebner,
)
from torsioncert.identities import (
    binom_alternating_certificate,
    binom_alternating_in_range,
    binom_alternating_scan,
    binom_alternating_sum,
    binom_convolution_certificate,
    binom_convolution_eval,
    binom_convolution_in_scope,
    binom_convolution_scan,
    binom_convolution_term,
    cyclic_identity_check,
    kernel_identity_check,
    minor_identity_check,
    minor_identity_mod_p_lift,
    plucker_witness,
    regular_sequence_witness,
)
from torsioncert.polyring import Polynomial, RingSpec, mod_reduce, variables


def _criterion(number: int, text: str, body, budget: float) -> None:
    start = time.perf_counter()
    try:
        body()
    except BaseException as exc:
        print(f"[criterion {number}] FAIL: {text} ({type(exc).__name__}: {exc})")
        raise
    elapsed = time.perf_counter() - start
    if elapsed >= budget:
        print(f"[criterion {number}] FAIL: {text} (over budget: {elapsed:.1f}s)")
        pytest.fail(f"criterion {number} exceeded its {budget:.0f}s budget")
    print(f"[criterion {number}] PASS: {text} ({elapsed:.1f}s)")


@pytest.fixture(scope="module")
def minors_scans():
    """FOUND scans for the minors row relation at (2,1) and (3,1)."""
    rel = minors_row_relation(1)
    out = {}
    for p in (2, 3):
        cand = torsion_candidate(rel, p, 1)
        out[p] = (cand, vanishing_scan(cand, p - 1))
    return rel, out


@pytest.fixture(scope="module")
def plucker_cross_check():
    """GB membership re-derivation of the (2,1) quadric witness target."""
    w = plucker_witness(2, 1)
    cert = membership(w.certificate.target, list(w.certificate.generators))
    return w, cert


def test_criterion_1_convolution_closed_form():
    def body():
        scan = binom_convolution_scan(bound=8)
        assert scan.verdict and scan.failures == []
        assert scan.checked > 20000
        # the stated box includes corners outside the closed form's validity
        # domain; they are counted as skipped, and the exclusion is sharp:
        assert scan.skipped > 0
        assert not binom_convolution_in_scope(0, 0, 1, 2)
        value, closed, _ = binom_convolution_eval(0, 0, 1, 2)
        assert (value, closed) == (0, -1)
        # the certificate recurrence likewise needs r <= m+s; raw failure:
        m, s, r, k, n = 0, 0, 1, 1, 0
        lhs = (s + 1) * binom_convolution_term(m, s + 1, r, k, n) - (
            m + s - k
        ) * binom_convolution_term(m, s, r, k, n)
        rhs = -(k - n) * binom_convolution_term(m, s, r, k, n + 1) + (
            k + 1 - n
        ) * binom_convolution_term(m, s, r, k, n)
        assert lhs != rhs
        single = binom_convolution_certificate(1, 0, 1, 1)
        assert single.verdict and single.checked > 0

    _criterion(
        1,
        "convolution closed form and certificates over [0,8]^4 (s<=k), "
        "validity domain restricted and proven sharp",
        body,
        budget=10.0,
    )


def test_criterion_2_alternating_row_sums():
    def body():
        scan = binom_alternating_scan(bound=10)
        assert scan.verdict and scan.failures == []
        assert scan.checked > 25000
        assert scan.checked + scan.skipped > 30000
        assert not binom_alternating_in_range(3, 0, 1)
        assert binom_alternating_sum(3, 0, 1) == 1
        single = binom_alternating_certificate(1, 0, 1)
        assert single.verdict

    _criterion(
        2,
        "alternating row sums vanish over [0,10]^3 with telescoping "
        "certificates; out-of-range witness (3,0,1) = 1",
        body,
        budget=10.0,
    )


def test_criterion_3_kernel_and_cyclic_identities():
    def body():
        for k in range(7):
            report = kernel_identity_check(k)
            assert report.verdict, f"kernel k={k}"
            assert report.residual.is_zero()
            assert report.details["coefficient_table_cleared"]
            assert report.details["coefficient_table_rational"]
        for k in range(7):
            report = cyclic_identity_check(k)
            assert report.verdict, f"cyclic k={k}"
            assert report.details["reduction_matches"]
            assert report.details["telescoped_sum_zero"]

    _criterion(
        3,
        "kernel and cyclic identity residuals exactly 0 for k = 0..6",
        body,
        budget=120.0,
    )


def test_criterion_4_minor_identity_and_lifts():
    def body():
        for k in range(5):
            report = minor_identity_check(k)
            assert report.verdict, f"minor k={k}"
        for p, e in [(2, 1), (3, 1)]:
            cert = minor_identity_mod_p_lift(p, e)
            assert cert.verified and cert.modulus == p
            assert cert.recompose() == cert.target
            assert cert.target.is_zero()

    _criterion(
        4,
        "minors triple-sum identity 0 for k = 0..4; mod-p lift "
        "certificates recompose at (2,1) and (3,1)",
        body,
        budget=120.0,
    )


def test_criterion_5_quadric_witnesses(plucker_cross_check):
    def body():
        w2, cross = plucker_cross_check
        assert w2.identity_residual.is_zero()
        assert w2.congruence_ok
        assert w2.certificate.verified
        assert w2.certificate.recompose() == w2.certificate.target
        assert cross is not None and cross.verified
        assert cross.target == w2.certificate.target
        w3 = plucker_witness(3, 1)
        assert w3.identity_residual.is_zero()
        assert w3.congruence_ok
        assert w3.certificate.verified

    _criterion(
        5,
        "quadric witnesses at (2,1) and (3,1): residual 0, congruence "
        "table, recomposing certificates; (2,1) cross-checked by GB",
        body,
        budget=600.0,
    )


def test_criterion_6_minors_witnesses_and_scans(minors_scans):
    def body():
        rel, scans = minors_scans
        u, v, w, x, y, z = variables(rel.ring)
        for p in (2, 3):
            q = p
            k, cert = regular_sequence_witness(rel, y, -x, p, 1)
            assert k == q - 1 and cert.verified
            assert cert.recompose() == cert.target
            cand, report = scans[p]
            assert report.status == "FOUND"
            assert report.k is not None and report.k <= q - 1
            assert report.certificate is not None and report.certificate.verified

    _criterion(
        6,
        "minors row witness recomposes at k=q-1 for (2,1) and (3,1); "
        "scans report FOUND(k <= q-1)",
        body,
        budget=600.0,
    )


def test_criterion_7_hypersurface_exhausted():
    def body():
        rel = hypersurface_relation()
        for p in (2, 3):
            cand = torsion_candidate(rel, p, 1)
            report = vanishing_scan(cand, 2)
            assert report.status == "EXHAUSTED", f"p={p}"
            assert report.k is None and report.certificate is None

    _criterion(
        7,
        "hypersurface quotient scans report EXHAUSTED for p in {2,3} "
        "with k_max = 2",
        body,
        budget=900.0,
    )


def test_criterion_8_relation_lifts(minors_scans, plucker_cross_check):
    def body():
        rel, scans = minors_scans
        found = []
        for p in (2, 3):
            cand, report = scans[p]
            found.append((report.certificate, rel, p, report.k))
        w2, cross = plucker_cross_check
        prel = plucker_relation()
        found.append((cross, prel, 2, w2.k))
        for cert, relation, p, k in found:
            alphas = relation_lift(
                cert, list(relation.F), list(relation.G), p, 1, k
            )
            q = p
            total = Polynomial.zero(relation.ring)
            rest_all = [
                [g for j, g in enumerate(relation.G) if j != i]
                for i in range(len(relation.G))
            ]
            for i, alpha in enumerate(alphas):
                total = total + alpha * relation.G[i] ** (q + k)
                rest = Polynomial.one(relation.ring)
                for g in rest_all[i]:
                    rest = rest * g
                assert mod_reduce(alpha - relation.F[i] ** q * rest**k, p).is_zero()
            assert total.is_zero()

    _criterion(
        8,
        "every FOUND certificate lifts to an exact relation vector "
        "congruent mod p to the Frobenius cofactors",
        body,
        budget=60.0,
    )


def test_criterion_9_combining_row_relations():
    def body():
        relE = minors_row_relation(1)
        relF = minors_row_relation(2)
        u, v, w, x, y, z = variables(relE.ring)
        kE, certE = regular_sequence_witness(relE, y, -x, 2, 1)
        kF, certF = regular_sequence_witness(relF, -v, u, 2, 1)
        k, cert = combine_relations(relE, relF, (kE, certE), (kF, certF), 2, 1)
        assert k == max(kE, kF) == 1
        assert cert.verified
        assert cert.recompose() == cert.target

    _criterion(
        9,
        "row relations combine through fresh weights into a recomposing "
        "certificate at k = max{1,1} = 1",
        body,
        budget=300.0,
    )


def test_criterion_10_engine_properties(minors_scans, plucker_cross_check):
    def body():
        rng = random.Random(20240814)
        ring = RingSpec(("x", "y", "z"))

        def rand_poly():
            poly = Polynomial.zero(ring)
            for _ in range(rng.randrange(1, 5)):
                mono = tuple(rng.randrange(0, 4) for _ in range(3))
                poly = poly + Polynomial.one(ring).mul_term(
                    rng.randrange(-9, 10), mono
                )
            return poly

        # ring axioms on >= 1000 random triples
        for _ in range(1000):
            a, b, c = rand_poly(), rand_poly(), rand_poly()
            assert a + b == b + a
            assert (a + b) + c == a + (b + c)
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c

        # normal-form idempotence against a fixed basis
        gens = [rand_poly() for _ in range(3)]
        basis = strong_groebner([g for g in gens if g])
        for _ in range(50):
            f = rand_poly()
            nf = normal_form(f, basis)
            assert normal_form(nf, basis) == nf

        # reduced field bases do not depend on generator order
        field_ring = RingSpec(("x", "y", "z"), modulus=13)

        def rand_field_poly():
            poly = Polynomial.zero(field_ring)
            for _ in range(rng.randrange(1, 5)):
                mono = tuple(rng.randrange(0, 3) for _ in range(3))
                poly = poly + Polynomial.one(field_ring).mul_term(
                    rng.randrange(1, 13), mono
                )
            return poly

        field_gens = [rand_field_poly() for _ in range(3)]
        reference = sorted(
            str(g) for g in buchberger([g for g in field_gens if g]).basis
        )
        for _ in range(20):
            shuffled = list(field_gens)
            rng.shuffle(shuffled)
            again = sorted(
                str(g) for g in buchberger([g for g in shuffled if g]).basis
            )
            assert again == reference

        # strong-GB soundness: random ideal combinations are members.
        # Five random ideals, forty combinations each; the basis is computed
        # once per ideal and every reduction's cofactors are recomposed.  The
        # first combination of each ideal additionally goes through the
        # public membership() path to exercise certificate construction.
        def rand_small():
            poly = Polynomial.zero(ring)
            for _ in range(rng.randrange(1, 5)):
                mono = tuple(rng.randrange(0, 3) for _ in range(3))
                poly = poly + Polynomial.one(ring).mul_term(
                    rng.randrange(-9, 10), mono
                )
            return poly

        sound = 0
        while sound < 200:
            gens = [g for g in (rand_small() for _ in range(3)) if g]
            if not gens:
                continue
            gb = groebner_basis(gens)
            for combo in range(40):
                target = Polynomial.zero(ring)
                for g in gens:
                    target = target + rand_small() * g
                if combo == 0:
                    cert = membership(target, gens)
                    assert cert is not None and cert.verified
                    assert cert.recompose() == target
                else:
                    remainder, cof = gb.reduce(target, track=True)
                    assert not remainder
                    recomposed = Polynomial.zero(ring)
                    for c, b in zip(cof, gb.basis):
                        recomposed = recomposed + c * b
                    assert recomposed == target
                sound += 1

        # every certificate produced along the acceptance run recomposes
        rel, scans = minors_scans
        w2, cross = plucker_cross_check
        emitted = [scans[2][1].certificate, scans[3][1].certificate,
                   w2.certificate, cross]
        for cert in emitted:
            assert isinstance(cert, MembershipCertificate)
            assert cert.verified and cert.recompose() == cert.target

    _criterion(
        10,
        "engine properties: 1000 ring-axiom triples, NF idempotence, "
        "20-shuffle order independence, 200 soundness combos, "
        "certificate recomposition",
        body,
        budget=300.0,
    )
