"""Sparse multivariate polynomial arithmetic over a prime field F_p.

Monomials are plain exponent tuples; polynomials are term maps
monomial -> nonzero coefficient.  Everything is exact mod-p integer
arithmetic and immutable after construction, so values can be shared
freely.  grevlex is the working order; lex is kept for debugging output.
"""

import re

from .errors import ParseError


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """Arithmetic context for F_p with p a word-sized prime."""

    def __init__(self, p):
        if not isinstance(p, int) or not 2 <= p <= 2**31 - 1 or not _is_prime(p):
            raise ValueError(f"characteristic must be a prime in [2, 2^31-1], got {p!r}")
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


# ---------------------------------------------------------------------------
# Monomials: exponent tuples.

def mdeg(m):
    return sum(m)


def mmul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mdivides(a, b):
    """True if monomial a divides b."""
    return all(x <= y for x, y in zip(a, b))


def mdiv(a, b):
    """a / b, assuming b divides a."""
    return tuple(x - y for x, y in zip(a, b))


def mlcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def grevlex_key(m):
    """Sort key: bigger key means bigger monomial in grevlex."""
    return (sum(m),) + tuple(-e for e in reversed(m))


def lex_key(m):
    return m


ORDER_KEYS = {"grevlex": grevlex_key, "lex": lex_key}

LT, EQ, GT = -1, 0, 1


def compare(order, a, b):
    """Compare monomials under the named order; returns -1, 0, or 1."""
    if len(a) != len(b):
        raise ValueError("monomials from different ambient rings")
    ka, kb = ORDER_KEYS[order](a), ORDER_KEYS[order](b)
    if ka < kb:
        return LT
    if ka > kb:
        return GT
    return EQ


class PolyRing:
    """Signature (p, variable names, monomial order) for F_p[x_1..x_n]."""

    def __init__(self, p, variables, order="grevlex"):
        if order not in ORDER_KEYS:
            raise ValueError(f"unknown monomial order {order!r}")
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        self.field = PrimeField(p)
        self.p = p
        self.variables = tuple(variables)
        self.n = len(self.variables)
        self.order = order
        self._var_index = {v: i for i, v in enumerate(self.variables)}
        self.key = ORDER_KEYS[order]

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c %= self.p
        if c == 0:
            return self.zero()
        return Polynomial(self, {(0,) * self.n: c})

    def gen(self, i):
        e = [0] * self.n
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def var(self, name):
        return self.gen(self._var_index[name])

    def monomial(self, m, c=1):
        c %= self.p
        if c == 0:
            return self.zero()
        return Polynomial(self, {tuple(m): c})

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and other.p == self.p
            and other.variables == self.variables
            and other.order == self.order
        )

    def __hash__(self):
        return hash((self.p, self.variables, self.order))

    def __repr__(self):
        return f"PolyRing(F_{self.p}[{', '.join(self.variables)}], {self.order})"


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuple to coeff in 1..p-1."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # --- queries ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(mdeg(m) == 0 for m in self.terms)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mdeg(m) for m in self.terms)

    def is_homogeneous(self):
        degs = {mdeg(m) for m in self.terms}
        return len(degs) <= 1

    def lead_monomial(self):
        if not self.terms:
            raise ValueError("zero polynomial has no lead term")
        return max(self.terms, key=self.ring.key)

    def lead_term(self):
        m = self.lead_monomial()
        return m, self.terms[m]

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.n, 0)

    # --- arithmetic ------------------------------------------------------

    def __add__(self, other):
        p = self.ring.p
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = (terms.get(m, 0) + c) % p
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Polynomial(self.ring, terms)

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {m: (-c) % p for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        p = self.ring.p
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mmul(m1, m2)
                s = (terms.get(m, 0) + c1 * c2) % p
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def scale(self, c):
        c %= self.ring.p
        if c == 0:
            return self.ring.zero()
        if c == 1:
            return self
        p = self.ring.p
        return Polynomial(self.ring, {m: (k * c) % p for m, k in self.terms.items()})

    def term_mul(self, mono, c=1):
        """Multiply by c * x^mono without building an intermediate Polynomial."""
        c %= self.ring.p
        if c == 0:
            return self.ring.zero()
        return Polynomial(
            self.ring, {mmul(m, mono): (k * c) % self.ring.p for m, k in self.terms.items()}
        )

    def __pow__(self, e):
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def evaluate(self, point):
        """Value in F_p at a point given as a coefficient tuple."""
        p = self.ring.p
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = (v * pow(x, e, p)) % p
            total = (total + v) % p
        return total % p

    # --- comparison ------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and other.ring == self.ring
            and other.terms == self.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def frobenius_power(f, nsteps):
    """Raise f to the p^nsteps power via the characteristic-p identity.

    In characteristic p the q-th power map is additive, so the result is the
    term-wise q-th power: coefficients c -> c^q (= c, by Fermat) and
    exponents scaled by q.  Degrees multiply by q exactly.
    """
    if nsteps < 0:
        raise ValueError("nsteps must be >= 0")
    if nsteps == 0:
        return f
    q = f.ring.p ** nsteps
    terms = {tuple(e * q for e in m): c for m, c in f.terms.items()}
    return Polynomial(f.ring, terms)


# ---------------------------------------------------------------------------
# Text grammar.  poly := term ('+' term)*
#                term := factor ('*' factor)*
#                factor := int | var ('^' nat)?
# Printing orders terms descending in the ring's order, elides coefficient 1,
# and always writes '*' between factors and '^' before exponents.

_TOKEN = re.compile(r"\s*([0-9]+|[A-Za-z_][A-Za-z_0-9]*|\^|\*|\+)")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParseError(f"bad token at position {pos}: {rest[:10]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_poly(text, ring, require_homogeneous=False):
    """Parse the canonical text grammar into a Polynomial over ``ring``."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")
    result = ring.zero()
    term_tokens = []
    chunks = []
    for t in tokens:
        if t == "+":
            chunks.append(term_tokens)
            term_tokens = []
        else:
            term_tokens.append(t)
    chunks.append(term_tokens)
    for chunk in chunks:
        if not chunk:
            raise ParseError("empty term (stray '+')")
        result = result + _parse_term(chunk, ring)
    if require_homogeneous and not result.is_homogeneous():
        raise ParseError(f"inhomogeneous polynomial: {text!r}")
    return result


def _parse_term(tokens, ring):
    coeff = 1
    expo = [0] * ring.n
    # split factors on '*'
    factors = []
    cur = []
    for t in tokens:
        if t == "*":
            if not cur:
                raise ParseError("stray '*'")
            factors.append(cur)
            cur = []
        else:
            cur.append(t)
    if not cur:
        raise ParseError("term ends with '*'")
    factors.append(cur)
    for f in factors:
        if f[0].isdigit():
            if len(f) != 1:
                raise ParseError(f"bad factor {' '.join(f)!r}")
            coeff = (coeff * int(f[0])) % ring.p
        else:
            name = f[0]
            if name not in ring._var_index:
                raise ParseError(f"unknown variable {name!r}")
            if len(f) == 1:
                e = 1
            elif len(f) == 3 and f[1] == "^" and f[2].isdigit():
                e = int(f[2])
            else:
                raise ParseError(f"bad factor {' '.join(f)!r}")
            expo[ring._var_index[name]] += e
    return ring.monomial(tuple(expo), coeff)


def format_monomial(m, ring):
    parts = []
    for name, e in zip(ring.variables, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(f):
    """Canonical text form: terms descending in the active order."""
    if f.is_zero():
        return "0"
    ring = f.ring
    parts = []
    for m in sorted(f.terms, key=ring.key, reverse=True):
        c = f.terms[m]
        mono = format_monomial(m, ring)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts)
