"""Command-line front end for identity checks, scans, and witnesses.

Four commands:

* ``verify``     -- run one identity family over a parameter box or k-range;
* ``conjecture`` -- scan a relation (from a JSON file) for its vanishing
                    level over a list of primes;
* ``witness``    -- build one of the certificate constructions and emit it
                    as JSON (re-verified before writing);
* ``report``     -- run a small fixed battery of all of the above.

Exit codes: 0 everything verified, 1 a mathematical check failed or an
expectation was violated, 2 usage or input error, 3 a resource cap was hit.
Reports are byte-deterministic for a fixed configuration except for the
contents of "timing" keys; progress goes to stderr only.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .catalog import minors_row_relation
from .cohomology import (
    NotARelationError,
    WrongArityError,
    relation_from_json,
    torsion_candidate,
    vanishing_scan,
)
from .groebner import (
    CertificateInvalidError,
    GroebnerOptions,
    MembershipCertificate,
    ResourceBoundError,
    membership,
)
from .identities import (
    DecompositionError,
    binom_alternating_scan,
    binom_convolution_scan,
    clearing_multiplier,
    containment_check,
    cyclic_identity_check,
    kernel_identity_check,
    minor_identity_check,
    minor_identity_mod_p_lift,
    minor_relation_witness,
    plucker_witness,
    regular_sequence_witness,
)
from .polyring import (
    AlgebraError,
    PolynomialSyntaxError,
    format_poly,
    parse,
    variables,
)

EXIT_VERIFIED = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

IDENTITY_CHOICES = ("binom-convolution", "binom-alternating", "kernel", "cyclic", "minor")
WITNESS_CHOICES = ("plucker", "containment", "minor-mu", "regular", "minors")


class UsageError(Exception):
    """Bad flag combination or unreadable input."""


@dataclass
class RunConfig:
    """Echo of the options a run was invoked with."""

    command: str
    options: dict

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "options": {k: self.options[k] for k in sorted(self.options)},
        }


@dataclass
class TaskOutcome:
    name: str
    ok: bool
    payload: dict
    seconds: float
    resource_bound: bool = False

    @property
    def status(self) -> str:
        if self.resource_bound:
            return "RESOURCE_BOUND"
        return "VERIFIED" if self.ok else "FAILED"


@dataclass
class RunReport:
    """Per-task outcomes plus the overall verdict (their conjunction)."""

    config: RunConfig
    tasks: list = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(t.ok for t in self.tasks)

    @property
    def resource_bound(self) -> bool:
        return any(t.resource_bound for t in self.tasks)

    @property
    def status(self) -> str:
        if self.resource_bound:
            return "RESOURCE_BOUND"
        return "VERIFIED" if self.verdict else "FAILED"

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "tasks": [
                {
                    "name": t.name,
                    "status": t.status,
                    "ok": t.ok,
                    "outcome": t.payload,
                    "timing": {"seconds": t.seconds},
                }
                for t in self.tasks
            ],
            "verdict": self.verdict,
            "status": self.status,
        }

    def to_plain(self) -> str:
        lines = [f"{t.name}: {t.status}" for t in self.tasks]
        lines.append(f"overall: {self.status}")
        return "\n".join(lines) + "\n"


def _parse_span(text: str, zero_based: bool) -> tuple[int, int]:
    """Parse "A..B" (or a single integer) into an inclusive range.

    A bare integer V means [0, V] for boxes and [V, V] for k-lists.
    """
    try:
        if ".." in text:
            lo_text, hi_text = text.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
        else:
            value = int(text)
            lo, hi = (0, value) if zero_based else (value, value)
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}; expected A..B or an integer") from exc
    if lo < 0 or hi < lo:
        raise UsageError(f"bad range {text!r}; bounds must satisfy 0 <= A <= B")
    return lo, hi


def _groebner_options(args) -> GroebnerOptions | None:
    if args.max_pairs is None and args.max_terms is None:
        return None
    kwargs = {}
    if args.max_pairs is not None:
        if args.max_pairs <= 0:
            raise UsageError("--max-pairs must be positive")
        kwargs["max_pairs"] = args.max_pairs
    if args.max_terms is not None:
        if args.max_terms <= 0:
            raise UsageError("--max-terms must be positive")
        kwargs["max_terms"] = args.max_terms
    return GroebnerOptions(**kwargs)


def _run_job(name, fn) -> TaskOutcome:
    print(f"[torsioncert] running {name}", file=sys.stderr, flush=True)
    start = time.perf_counter()
    try:
        payload, ok = fn()
    except ResourceBoundError as exc:
        seconds = time.perf_counter() - start
        print(f"[torsioncert] {name}: RESOURCE_BOUND", file=sys.stderr, flush=True)
        return TaskOutcome(
            name,
            False,
            {"error": "RESOURCE_BOUND", "message": str(exc)},
            seconds,
            resource_bound=True,
        )
    seconds = time.perf_counter() - start
    print(
        f"[torsioncert] {name}: {'ok' if ok else 'FAILED'} ({seconds:.2f}s)",
        file=sys.stderr,
        flush=True,
    )
    return TaskOutcome(name, ok, payload, seconds)


def _execute(jobs, workers: int) -> list[TaskOutcome]:
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda job: _run_job(*job), jobs))
    return [_run_job(name, fn) for name, fn in jobs]


def _load_relation(path: str):
    try:
        with open(path, encoding="utf-8") as handle:
            obj = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read relation file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"relation file {path} is not valid JSON: {exc}") from exc
    return relation_from_json(obj)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_jobs(args) -> list:
    identity = args.identity
    budget = None if args.max_terms is None else args.max_terms
    if identity in ("binom-convolution", "binom-alternating"):
        default = "0..8" if identity == "binom-convolution" else "0..10"
        lo, hi = _parse_span(args.box or default, zero_based=True)
        if identity == "binom-convolution":
            fn = lambda: _as_outcome(binom_convolution_scan(bound=hi, lo=lo))
        else:
            fn = lambda: _as_outcome(binom_alternating_scan(bound=hi, lo=lo))
        return [(f"{identity} box {lo}..{hi}", fn)]
    if args.box is not None:
        raise UsageError(f"--box applies only to the binomial identities, not {identity}")
    lo, hi = _parse_span(args.k_values or "0..4", zero_based=False)
    check = {
        "kernel": kernel_identity_check,
        "cyclic": cyclic_identity_check,
        "minor": minor_identity_check,
    }[identity]
    jobs = []
    for k in range(lo, hi + 1):
        jobs.append(
            (
                f"{identity} k={k}",
                lambda k=k: _as_outcome(check(k, budget=budget)),
            )
        )
    return jobs


def _as_outcome(result) -> tuple[dict, bool]:
    return result.to_json(), result.verdict


def _run_verify(args) -> RunReport:
    config = RunConfig(
        "verify",
        {
            "identity": args.identity,
            "box": args.box,
            "k": args.k_values,
            "max_pairs": args.max_pairs,
            "max_terms": args.max_terms,
            "workers": args.workers,
            "format": args.format,
        },
    )
    tasks = _execute(_verify_jobs(args), args.workers)
    return RunReport(config, tasks)


# ---------------------------------------------------------------------------
# conjecture
# ---------------------------------------------------------------------------


def _run_conjecture(args) -> RunReport:
    rel = _load_relation(args.relation)
    try:
        primes = [int(p) for p in args.primes.split(",") if p]
    except ValueError as exc:
        raise UsageError(f"bad --primes list {args.primes!r}") from exc
    if not primes:
        raise UsageError("--primes must name at least one prime")
    if args.k_max < 0:
        raise UsageError("--k-max must be nonnegative")
    options = _groebner_options(args)
    expected = None
    if args.expect_found:
        expected = "FOUND"
    elif args.expect_exhausted:
        expected = "EXHAUSTED"
    config = RunConfig(
        "conjecture",
        {
            "relation": args.relation,
            "primes": primes,
            "power": args.power,
            "k_max": args.k_max,
            "expect": expected,
            "max_pairs": args.max_pairs,
            "max_terms": args.max_terms,
            "workers": args.workers,
            "format": args.format,
        },
    )

    def job(p):
        def run():
            cand = torsion_candidate(rel, p, args.power)
            report = vanishing_scan(cand, args.k_max, options=options)
            if report.status == "UNKNOWN":
                raise ResourceBoundError(report.resource or "scan interrupted")
            ok = report.status == expected if expected else True
            return report.to_json(), ok

        return run

    jobs = [(f"scan p={p} e={args.power} k_max={args.k_max}", job(p)) for p in primes]
    return RunReport(config, _execute(jobs, args.workers))


# ---------------------------------------------------------------------------
# witness
# ---------------------------------------------------------------------------


def _build_witness(args) -> tuple[dict, bool, MembershipCertificate | None]:
    kind = args.kind
    p, e = args.prime, args.power
    options = _groebner_options(args)
    if kind == "plucker":
        w = plucker_witness(p, e, budget=args.max_terms)
        ok = w.identity_residual.is_zero() and w.congruence_ok and w.certificate.verified
        payload = {"kind": kind, **w.to_json()}
        return payload, ok, w.certificate
    if kind == "containment":
        report = containment_check(p, e, options)
        payload = {"kind": kind, **report.to_json()}
        return payload, report.verdict, report.certificate
    if kind == "minor-mu":
        cert = minor_identity_mod_p_lift(p, e, budget=args.max_terms)
        payload = {
            "kind": kind,
            "p": p,
            "e": e,
            "k": p**e - 1,
            "certificate": cert.to_json(),
        }
        return payload, cert.verified, cert
    if kind == "regular":
        if not args.relation or args.alpha is None or args.beta is None:
            raise UsageError("witness regular needs --relation, --alpha and --beta")
        rel = _load_relation(args.relation)
        alpha = parse(args.alpha, rel.ring)
        beta = parse(args.beta, rel.ring)
        k, cert = regular_sequence_witness(rel, alpha, beta, p, e, options)
        payload = {
            "kind": kind,
            "p": p,
            "e": e,
            "k": k,
            "certificate": cert.to_json(),
        }
        return payload, cert.verified, cert
    if not args.relation:
        raise UsageError("witness minors needs --relation")
    rel = _load_relation(args.relation)
    k, cert = minor_relation_witness(list(rel.F), p, e, options)
    payload = {"kind": kind, "p": p, "e": e, "k": k, "certificate": cert.to_json()}
    return payload, cert.verified, cert


def _run_witness(args) -> RunReport:
    config = RunConfig(
        "witness",
        {
            "kind": args.kind,
            "prime": args.prime,
            "power": args.power,
            "relation": args.relation,
            "alpha": args.alpha,
            "beta": args.beta,
            "cross_check_gb": args.cross_check_gb,
            "max_pairs": args.max_pairs,
            "max_terms": args.max_terms,
            "output": args.output,
            "format": args.format,
        },
    )

    def run():
        payload, ok, cert = _build_witness(args)
        if cert is not None:
            # re-verify through a serialization round trip before reporting
            reloaded = MembershipCertificate.from_json(
                json.loads(json.dumps(cert.to_json()))
            )
            ok = ok and reloaded.verified
        if args.cross_check_gb:
            if cert is None:
                raise UsageError("--cross-check-gb needs a certificate-producing kind")
            options = _groebner_options(args)
            check = membership(cert.target, list(cert.generators), options)
            payload["cross_check_gb"] = check is not None
            ok = ok and check is not None
        return payload, ok

    name = f"witness {args.kind} p={args.prime} e={args.power}"
    report = RunReport(config, _execute([(name, run)], 1))
    return report


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def _run_report(args) -> RunReport:
    config = RunConfig(
        "report",
        {
            "workers": args.workers,
            "format": args.format,
            "max_pairs": args.max_pairs,
            "max_terms": args.max_terms,
        },
    )
    options = _groebner_options(args)
    data_rel = minors_row_relation(1)
    u, v, w, x, y, z = variables(data_rel.ring)

    def clearing_task():
        values = {
            "2,1": clearing_multiplier(2, 1),
            "2,2": clearing_multiplier(2, 2),
            "3,1": clearing_multiplier(3, 1),
        }
        return {"clearing_multipliers": values}, values == {
            "2,1": 3,
            "2,2": 105,
            "3,1": 40,
        }

    def witness_task(builder):
        def run():
            k, cert = builder()
            return {"k": k, "certificate": cert.to_json()}, cert.verified

        return run

    def scan_task(rel, p, expected):
        def run():
            cand = torsion_candidate(rel, p, 1)
            report = vanishing_scan(cand, 2, options=options)
            if report.status == "UNKNOWN":
                raise ResourceBoundError(report.resource or "scan interrupted")
            return report.to_json(), report.status == expected

        return run

    from .catalog import hypersurface_relation

    jobs = [
        (
            "binom-convolution box 0..4",
            lambda: _as_outcome(binom_convolution_scan(bound=4)),
        ),
        (
            "binom-alternating box 0..5",
            lambda: _as_outcome(binom_alternating_scan(bound=5)),
        ),
        ("kernel k=0..2", lambda: _kbatch(kernel_identity_check, 2)),
        ("cyclic k=0..2", lambda: _kbatch(cyclic_identity_check, 2)),
        ("minor k=0..2", lambda: _kbatch(minor_identity_check, 2)),
        ("clearing multipliers", clearing_task),
        ("witness plucker p=2 e=1", _plucker_task),
        (
            "witness containment p=2 e=1",
            lambda: _as_outcome(containment_check(2, 1, options)),
        ),
        (
            "witness minor-mu p=2 e=1",
            witness_task(lambda: (1, minor_identity_mod_p_lift(2, 1))),
        ),
        (
            "witness regular rows p=2 e=1",
            witness_task(
                lambda: regular_sequence_witness(data_rel, y, -x, 2, 1, options)
            ),
        ),
        ("scan minors p=2", scan_task(data_rel, 2, "FOUND")),
        ("scan hypersurface p=2", scan_task(hypersurface_relation(), 2, "EXHAUSTED")),
    ]
    return RunReport(config, _execute(jobs, args.workers))


def _kbatch(check, k_hi: int) -> tuple[dict, bool]:
    reports = [check(k) for k in range(k_hi + 1)]
    return (
        {"reports": [r.to_json() for r in reports]},
        all(r.verdict for r in reports),
    )


def _plucker_task() -> tuple[dict, bool]:
    w = plucker_witness(2, 1)
    ok = w.identity_residual.is_zero() and w.congruence_ok and w.certificate.verified
    return w.to_json(), ok


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torsioncert",
        description="verify torsion-candidate identities and emit certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--max-pairs", type=int, default=None, help="cap on completion pairs")
        p.add_argument("--max-terms", type=int, default=None, help="cap on polynomial size / work")
        p.add_argument("--workers", type=int, default=1, help="parallel task workers")
        p.add_argument("--format", choices=("json", "plain"), default="json")
        p.add_argument("-o", "--output", default=None, help="write the primary artifact here")

    verify = sub.add_parser("verify", help="check one identity family")
    verify.add_argument("--identity", required=True, choices=IDENTITY_CHOICES)
    verify.add_argument("--box", default=None, help="parameter box A..B for the binomial scans")
    verify.add_argument("--k", dest="k_values", default=None, help="k range A..B (or single k)")
    common(verify)

    conjecture = sub.add_parser("conjecture", help="scan a relation for its vanishing level")
    conjecture.add_argument("relation", help="relation JSON file")
    conjecture.add_argument("--primes", required=True, help="comma-separated primes")
    conjecture.add_argument("--power", type=int, default=1, help="prime power exponent e")
    conjecture.add_argument("--k-max", dest="k_max", type=int, required=True)
    expect = conjecture.add_mutually_exclusive_group()
    expect.add_argument("--expect-found", action="store_true")
    expect.add_argument("--expect-exhausted", action="store_true")
    common(conjecture)

    witness = sub.add_parser("witness", help="construct and verify a certificate")
    witness.add_argument("kind", choices=WITNESS_CHOICES)
    witness.add_argument("--prime", type=int, required=True)
    witness.add_argument("--power", type=int, default=1)
    witness.add_argument("--relation", default=None, help="relation JSON file (regular/minors)")
    witness.add_argument("--alpha", default=None, help="decomposition coefficient (regular)")
    witness.add_argument("--beta", default=None, help="decomposition coefficient (regular)")
    witness.add_argument("--cross-check-gb", action="store_true",
                         help="re-decide the membership with the Groebner engine")
    common(witness)

    report = sub.add_parser("report", help="run a small battery of all checks")
    common(report)

    return parser


def _emit(report: RunReport, args) -> None:
    if args.format == "json":
        text = json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    else:
        text = report.to_plain()
    sys.stdout.write(text)
    if args.output:
        if args.command == "witness":
            artifact = (
                json.dumps(report.tasks[0].payload, indent=2, sort_keys=True) + "\n"
            )
        else:
            artifact = text
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(artifact)


def _merge_value_flags(argv, flags) -> list:
    """Join ``--flag value`` into ``--flag=value`` for the given flags, so
    values with a leading minus sign (like a coefficient "-x") parse."""
    merged = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in flags and i + 1 < len(argv):
            merged.append(f"{token}={argv[i + 1]}")
            i += 2
        else:
            merged.append(token)
            i += 1
    return merged


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _merge_value_flags(list(argv), {"--alpha", "--beta"})
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code in (None, 0):
            return EXIT_VERIFIED
        return EXIT_USAGE
    try:
        if args.command == "verify":
            report = _run_verify(args)
        elif args.command == "conjecture":
            report = _run_conjecture(args)
        elif args.command == "witness":
            report = _run_witness(args)
        else:
            report = _run_report(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotARelationError as exc:
        message = f"error: not a relation: {exc}"
        if exc.residual is not None:
            message += f" [residual = {format_poly(exc.residual)}]"
        print(message, file=sys.stderr)
        return EXIT_USAGE
    except ResourceBoundError as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CertificateInvalidError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (
        PolynomialSyntaxError,
        DecompositionError,
        WrongArityError,
        AlgebraError,
        ValueError,
        KeyError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, args)
    if report.resource_bound:
        return EXIT_RESOURCE
    return EXIT_VERIFIED if report.verdict else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
