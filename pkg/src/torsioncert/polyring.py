"""Sparse multivariate polynomial arithmetic over the integers and prime fields.

This is the arithmetic kernel for the whole package.  Coefficients are exact:
arbitrary-precision integers, or residues normalized to [0, p) when the ring
carries a prime modulus.  Every ring fixes an ordered tuple of variable names
and a global monomial order, so leading terms, printed forms and serialized
forms are all reproducible byte for byte.

Polynomials are immutable values.  Operations return new objects and never
mutate shared state.  Monomials are plain tuples of non-negative exponents,
one slot per ring variable, manipulated through the small helper functions
below rather than a wrapper class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

LEX = "lex"
DEGLEX = "deglex"
DEGREVLEX = "degrevlex"
_ORDERS = (LEX, DEGLEX, DEGREVLEX)


class AlgebraError(Exception):
    """Base class for every algebraic failure raised by this package."""


class RingMismatchError(AlgebraError):
    """Operands live in different rings (variables, order or modulus differ)."""


class NotDivisibleError(AlgebraError):
    """An exact division failed; carries the first offending term if any."""

    def __init__(self, message, monomial=None, coefficient=None):
        super().__init__(message)
        self.monomial = monomial
        self.coefficient = coefficient


class NotPrimeError(AlgebraError):
    """A modulus that must be prime is not."""


class UnassignedVariableError(AlgebraError):
    """A substitution is missing an image for a variable that occurs."""


class UnknownVariableError(AlgebraError):
    """A variable name is not part of the ring."""


class PolynomialSyntaxError(AlgebraError):
    """Expression text failed to parse; carries the 0-based offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact well past 64 bits)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class RingSpec:
    """An ordered variable list, a coefficient domain and a monomial order.

    ``modulus`` is ``None`` for integer coefficients, or a prime p for the
    field of p elements.  ``order`` is one of ``lex``, ``deglex``,
    ``degrevlex`` (the default).
    """

    variables: tuple[str, ...]
    modulus: int | None = None
    order: str = DEGREVLEX

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        names = self.variables
        if not names:
            raise ValueError("a ring needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names!r}")
        for name in names:
            if not name or not (name[0].isalpha() or name[0] == "_") or not all(
                ch.isalnum() or ch == "_" for ch in name
            ):
                raise ValueError(f"invalid variable name {name!r}")
        if self.order not in _ORDERS:
            raise ValueError(f"unknown monomial order {self.order!r}")
        if self.modulus is not None and not is_prime(self.modulus):
            raise NotPrimeError(f"modulus {self.modulus} is not prime")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariableError(
                f"variable {name!r} is not in ring {self.variables}"
            ) from None

    def order_key(self, exponents: tuple[int, ...]) -> tuple[int, ...]:
        """Sort key: larger key means larger monomial in the ring order."""
        if self.order == LEX:
            return exponents
        total = sum(exponents)
        if self.order == DEGLEX:
            return (total, *exponents)
        return (total, *(-e for e in reversed(exponents)))

    def normalize_coeff(self, c: int) -> int:
        return c if self.modulus is None else c % self.modulus


def mono_one(nvars: int) -> tuple[int, ...]:
    return (0,) * nvars


def mono_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """True when monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(numer: tuple[int, ...], denom: tuple[int, ...]) -> tuple[int, ...]:
    """numer / denom, assuming denom divides numer."""
    return tuple(x - y for x, y in zip(numer, denom))


def mono_lcm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: tuple[int, ...]) -> int:
    return sum(a)


class Polynomial:
    """An immutable sparse polynomial: a ring plus a term map.

    ``terms`` maps exponent tuples to nonzero coefficients.  Treat it as
    read-only; every mutating-looking operation returns a fresh object.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingSpec, terms: Mapping[tuple[int, ...], int] | Iterable):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        clean: dict[tuple[int, ...], int] = {}
        n = ring.nvars
        for mono, coeff in items:
            mono = tuple(mono)
            if len(mono) != n or any(e < 0 or not isinstance(e, int) for e in mono):
                raise ValueError(f"bad exponent vector {mono!r} for {n} variables")
            c = ring.normalize_coeff(clean.get(mono, 0) + coeff)
            if c:
                clean[mono] = c
            else:
                clean.pop(mono, None)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _raw(cls, ring: RingSpec, terms: dict) -> "Polynomial":
        obj = object.__new__(cls)
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(obj, "terms", terms)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial objects are immutable")

    @classmethod
    def zero(cls, ring: RingSpec) -> "Polynomial":
        return cls._raw(ring, {})

    @classmethod
    def one(cls, ring: RingSpec) -> "Polynomial":
        return cls.constant(ring, 1)

    @classmethod
    def constant(cls, ring: RingSpec, c: int) -> "Polynomial":
        c = ring.normalize_coeff(c)
        return cls._raw(ring, {mono_one(ring.nvars): c} if c else {})

    @classmethod
    def variable(cls, ring: RingSpec, name: str) -> "Polynomial":
        i = ring.index(name)
        mono = tuple(1 if j == i else 0 for j in range(ring.nvars))
        return cls._raw(ring, {mono: 1})

    # -- basic queries ----------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Largest term degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    def coefficient(self, mono: tuple[int, ...]) -> int:
        return self.terms.get(tuple(mono), 0)

    def constant_term(self) -> int:
        return self.terms.get(mono_one(self.ring.nvars), 0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in descending ring order, the canonical output order."""
        key = self.ring.order_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading(self) -> tuple[tuple[int, ...], int]:
        """(monomial, coefficient) of the largest term; raises on zero."""
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        key = self.ring.order_key
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def variables_used(self) -> set[str]:
        used: set[int] = set()
        for mono in self.terms:
            for i, e in enumerate(mono):
                if e:
                    used.add(i)
        return {self.ring.variables[i] for i in used}

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, int):
            return Polynomial.constant(self.ring, other)
        return other

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(
                f"ring mismatch: {self.ring.variables}/{self.ring.modulus} vs "
                f"{other.ring.variables}/{other.ring.modulus}"
            )

    def __add__(self, other):
        other = self._coerce(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        p = self.ring.modulus
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, 0) + c
            if p is not None:
                nc %= p
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.modulus
        if p is None:
            return Polynomial._raw(self.ring, {m: -c for m, c in self.terms.items()})
        return Polynomial._raw(self.ring, {m: (-c) % p for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        p = self.ring.modulus
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[tuple[int, ...], int] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                nc = out.get(m, 0) + c1 * c2
                if p is not None:
                    nc %= p
                if nc:
                    out[m] = nc
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.modulus
        c = self.ring.normalize_coeff(c)
        if c == 0:
            return Polynomial.zero(self.ring)
        if p is None:
            return Polynomial._raw(self.ring, {m: cc * c for m, cc in self.terms.items()})
        out = {}
        for m, cc in self.terms.items():
            nc = cc * c % p
            if nc:
                out[m] = nc
        return Polynomial._raw(self.ring, out)

    def mul_term(self, coeff: int, mono: tuple[int, ...]) -> "Polynomial":
        """Multiply by a single term coeff * X^mono."""
        p = self.ring.modulus
        coeff = self.ring.normalize_coeff(coeff)
        if coeff == 0:
            return Polynomial.zero(self.ring)
        out = {}
        for m, c in self.terms.items():
            nc = c * coeff
            if p is not None:
                nc %= p
                if not nc:
                    continue
            out[tuple(x + y for x, y in zip(m, mono))] = nc
        return Polynomial._raw(self.ring, out)

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    __hash__ = None

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r})"


def variables(ring: RingSpec) -> list[Polynomial]:
    """All ring variables as polynomials, in declaration order."""
    return [Polynomial.variable(ring, name) for name in ring.variables]


def exact_div_int(f: Polynomial, m: int) -> Polynomial:
    """Divide every coefficient by the integer m, exactly.

    Only meaningful over the integers.  On failure reports the first
    offending term in canonical order.
    """
    if f.ring.modulus is not None:
        raise RingMismatchError("exact_div_int needs integer coefficients")
    if m == 0:
        raise ZeroDivisionError("exact division by zero")
    out = {}
    for mono, c in f.sorted_terms():
        q, r = divmod(c, m)
        if r:
            raise NotDivisibleError(
                f"coefficient {c} of monomial {_format_mono(f.ring, mono) or '1'} "
                f"is not divisible by {m}",
                monomial=mono,
                coefficient=c,
            )
        out[mono] = q
    return Polynomial._raw(f.ring, out)


def mod_reduce(f: Polynomial, p: int) -> Polynomial:
    """Reduce an integer polynomial modulo a prime p."""
    if f.ring.modulus is not None:
        raise RingMismatchError("mod_reduce expects an integer polynomial")
    if not is_prime(p):
        raise NotPrimeError(f"modulus {p} is not prime")
    ring_p = RingSpec(f.ring.variables, modulus=p, order=f.ring.order)
    out = {}
    for m, c in f.terms.items():
        cc = c % p
        if cc:
            out[m] = cc
    return Polynomial._raw(ring_p, out)


def exact_div(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact polynomial division: return q with f == q*g, else raise.

    Works over the integers (coefficient-aware) and over prime fields.
    """
    f._check_ring(g)
    if not g:
        raise ZeroDivisionError("exact division by the zero polynomial")
    ring = f.ring
    p = ring.modulus
    glm, glc = g.leading()
    gtail = [(m, c) for m, c in g.terms.items() if m != glm]
    rem = dict(f.terms)
    quo: dict[tuple[int, ...], int] = {}
    key = ring.order_key
    while rem:
        m = max(rem, key=key)
        c = rem.pop(m)
        if not mono_divides(glm, m):
            raise NotDivisibleError(
                "not an exact multiple: leading monomial "
                f"{_format_mono(ring, m) or '1'} is not divisible",
                monomial=m,
                coefficient=c,
            )
        if p is not None:
            qc = c * pow(glc, p - 2, p) % p
        else:
            qc, r = divmod(c, glc)
            if r:
                raise NotDivisibleError(
                    f"not an exact multiple: coefficient {c} is not divisible by {glc}",
                    monomial=m,
                    coefficient=c,
                )
        delta = mono_div(m, glm)
        quo[delta] = qc
        for m2, c2 in gtail:
            mm = mono_mul(delta, m2)
            nc = rem.get(mm, 0) - qc * c2
            if p is not None:
                nc %= p
            if nc:
                rem[mm] = nc
            else:
                rem.pop(mm, None)
    return Polynomial._raw(ring, quo)


def substitute(
    f: Polynomial,
    assignment: Mapping[str, Polynomial],
    target: RingSpec | None = None,
) -> Polynomial:
    """Evaluate f with each variable replaced by a polynomial image.

    Every variable that occurs in f must have an image; images must share a
    single target ring with the same modulus as f's ring.
    """
    ring = f.ring
    for name in assignment:
        ring.index(name)
    for img in assignment.values():
        if target is None:
            target = img.ring
        elif img.ring != target:
            raise RingMismatchError("substitution images live in different rings")
    if target is None:
        raise UnassignedVariableError(
            "empty assignment: pass a target ring to substitute constants"
        )
    if ring.modulus != target.modulus:
        raise RingMismatchError("substitution cannot change the coefficient modulus")
    missing = f.variables_used() - set(assignment)
    if missing:
        raise UnassignedVariableError(
            f"no image for variable(s) {sorted(missing)!r}"
        )
    images = {ring.index(name): poly for name, poly in assignment.items()}
    powers: dict[int, list[Polynomial]] = {
        i: [Polynomial.one(target), img] for i, img in images.items()
    }

    def power_of(i: int, e: int) -> Polynomial:
        cache = powers[i]
        while len(cache) <= e:
            cache.append(cache[-1] * cache[1])
        return cache[e]

    result = Polynomial.zero(target)
    for mono, c in f.terms.items():
        term = Polynomial.constant(target, c)
        for i, e in enumerate(mono):
            if e:
                term = term * power_of(i, e)
        result = result + term
    return result


def embed(f: Polynomial, big: RingSpec) -> Polynomial:
    """Reinterpret f in a ring whose variable list extends f's own."""
    small = f.ring
    if big.modulus != small.modulus or big.order != small.order:
        raise RingMismatchError("embedding cannot change modulus or order")
    if big.variables[: small.nvars] != small.variables:
        raise RingMismatchError(
            f"{big.variables!r} does not extend {small.variables!r}"
        )
    pad = (0,) * (big.nvars - small.nvars)
    return Polynomial._raw(big, {m + pad: c for m, c in f.terms.items()})


def extend_ring(ring: RingSpec, new_variables: Iterable[str]) -> RingSpec:
    """Append fresh variables to a ring; name collisions are an error."""
    new_variables = tuple(new_variables)
    for name in new_variables:
        if name in ring.variables:
            raise ValueError(f"variable {name!r} already exists in the ring")
    return RingSpec(ring.variables + new_variables, ring.modulus, ring.order)


# -- text form ------------------------------------------------------------


def _format_mono(ring: RingSpec, mono: tuple[int, ...]) -> str:
    parts = []
    for name, e in zip(ring.variables, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    """Canonical text form; parse(format_poly(f), ring) round-trips."""
    if not f.terms:
        return "0"
    chunks = []
    for i, (mono, c) in enumerate(f.sorted_terms()):
        ms = _format_mono(f.ring, mono)
        mag = abs(c)
        if ms and mag == 1:
            body = ms
        elif ms:
            body = f"{mag}*{ms}"
        else:
            body = str(mag)
        if i == 0:
            chunks.append(f"-{body}" if c < 0 else body)
        else:
            chunks.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(chunks)


_TOKEN_OPS = set("+-*^()")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_OPS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        raise PolynomialSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    """Recursive descent for: sums of products of powered primaries.

    Exponentiation binds tightest and requires a literal integer exponent
    (chains like 2^3^2 associate to the right).  There is no implicit
    multiplication.
    """

    def __init__(self, text: str, ring: RingSpec):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise PolynomialSyntaxError(
                f"expected {kind!r}, found {tok[1]!r}" if tok[1] else f"expected {kind!r}",
                tok[2],
            )
        return tok

    def parse(self) -> Polynomial:
        value = self.expression()
        tok = self.peek()
        if tok[0] != "end":
            raise PolynomialSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return value

    def expression(self) -> Polynomial:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.next()[0] == "-" else 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value = self.factor()
        while self.peek()[0] == "*":
            self.next()
            value = value * self.factor()
        return value

    def factor(self) -> Polynomial:
        base = self.primary()
        if self.peek()[0] == "^":
            self.next()
            return base ** self.exponent()
        return base

    def exponent(self) -> int:
        tok = self.expect("int")
        value = int(tok[1])
        if self.peek()[0] == "^":
            self.next()
            return value ** self.exponent()
        return value

    def primary(self) -> Polynomial:
        tok = self.next()
        kind, text, pos = tok
        if kind == "int":
            return Polynomial.constant(self.ring, int(text))
        if kind == "ident":
            if text not in self.ring.variables:
                raise UnknownVariableError(
                    f"variable {text!r} is not in ring {self.ring.variables} "
                    f"(at position {pos})"
                )
            return Polynomial.variable(self.ring, text)
        if kind == "(":
            value = self.expression()
            self.expect(")")
            return value
        raise PolynomialSyntaxError(
            f"unexpected {text!r}" if text else "unexpected end of input", pos
        )


def parse(text: str, ring: RingSpec) -> Polynomial:
    """Parse an expression (integers, ring variables, + - * ^, parentheses)."""
    return _Parser(text, ring).parse()


# -- canonical JSON -------------------------------------------------------


def poly_to_json(f: Polynomial) -> dict:
    """Canonical JSON form: variable list plus descending term list."""
    return {
        "vars": list(f.ring.variables),
        "terms": [[str(c), list(m)] for m, c in f.sorted_terms()],
    }


def poly_from_json(obj: Mapping, ring: RingSpec | None = None) -> Polynomial:
    """Rebuild a polynomial from its canonical JSON form.

    When ``ring`` is omitted an integer ring with the listed variables and
    the default order is used.
    """
    if not isinstance(obj, Mapping) or "vars" not in obj or "terms" not in obj:
        raise ValueError("polynomial JSON needs 'vars' and 'terms'")
    vars_ = tuple(obj["vars"])
    if ring is None:
        ring = RingSpec(vars_)
    elif ring.variables != vars_:
        raise RingMismatchError(
            f"JSON variables {vars_!r} do not match ring {ring.variables!r}"
        )
    terms = []
    for entry in obj["terms"]:
        coeff_str, exps = entry
        terms.append((tuple(int(e) for e in exps), int(coeff_str)))
    return Polynomial(ring, terms)
