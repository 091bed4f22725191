"""Groebner bases for homogeneous submodules of graded free R-modules.

One engine covers ideals (rank 1) and submodules: position-over-term
grevlex with row-degree shifts, Buchberger with the normal selection
strategy, syzygy computation through elimination in an extended free
module, and the combinatorics read off leading terms (Krull dimension,
Hilbert numerator, standard-monomial length counts).

Quotient-ring computations never get their own engine: callers adjoin
I*e_i generators and work over R throughout.
"""

import heapq
from itertools import combinations, product

from .errors import DegreeLimitError
from .polycore import (
    Polynomial,
    grevlex_key,
    mdeg,
    mdiv,
    mdivides,
    mlcm,
    mmul,
)

MINUS_INFINITY = float("-inf")
INFINITE = float("inf")

DEFAULT_DEGREE_CAP = 512


def pot_key(term):
    """Position-over-term key: lower position dominates, grevlex inside."""
    pos, m = term
    return (-pos,) + grevlex_key(m)


class VectorElement:
    """Element of a free module R^rank as a term map (position, monomial) -> coeff."""

    __slots__ = ("ring", "rank", "terms")

    def __init__(self, ring, rank, terms):
        self.ring = ring
        self.rank = rank
        self.terms = terms

    @classmethod
    def from_coordinates(cls, coords):
        rank = len(coords)
        ring = coords[0].ring
        terms = {}
        for pos, f in enumerate(coords):
            for m, c in f.terms.items():
                terms[(pos, m)] = c
        return cls(ring, rank, terms)

    @classmethod
    def basis(cls, ring, rank, pos):
        return cls(ring, rank, {(pos, (0,) * ring.n): 1})

    @classmethod
    def from_poly(cls, f):
        """Rank-1 wrapper for ideal computations."""
        return cls(f.ring, 1, {(0, m): c for m, c in f.terms.items()})

    def coordinates(self):
        coords = [dict() for _ in range(self.rank)]
        for (pos, m), c in self.terms.items():
            coords[pos][m] = c
        return [Polynomial(self.ring, t) for t in coords]

    def coordinate(self, pos):
        return Polynomial(
            self.ring, {m: c for (q, m), c in self.terms.items() if q == pos}
        )

    def is_zero(self):
        return not self.terms

    def lead(self):
        term = max(self.terms, key=pot_key)
        return term, self.terms[term]

    def degree(self, shifts):
        """Common degree of a homogeneous element; None if zero."""
        if not self.terms:
            return None
        pos, m = next(iter(self.terms))
        return mdeg(m) + shifts[pos]

    def is_homogeneous(self, shifts):
        degs = {mdeg(m) + shifts[pos] for pos, m in self.terms}
        return len(degs) <= 1

    def add(self, other):
        p = self.ring.p
        terms = dict(self.terms)
        for t, c in other.terms.items():
            s = (terms.get(t, 0) + c) % p
            if s:
                terms[t] = s
            else:
                terms.pop(t, None)
        return VectorElement(self.ring, self.rank, terms)

    def sub(self, other):
        p = self.ring.p
        terms = dict(self.terms)
        for t, c in other.terms.items():
            s = (terms.get(t, 0) - c) % p
            if s:
                terms[t] = s
            else:
                terms.pop(t, None)
        return VectorElement(self.ring, self.rank, terms)

    def scale(self, c):
        c %= self.ring.p
        if c == 0:
            return VectorElement(self.ring, self.rank, {})
        p = self.ring.p
        return VectorElement(
            self.ring, self.rank, {t: (k * c) % p for t, k in self.terms.items()}
        )

    def term_mul(self, mono, c=1):
        c %= self.ring.p
        if c == 0:
            return VectorElement(self.ring, self.rank, {})
        p = self.ring.p
        return VectorElement(
            self.ring,
            self.rank,
            {(pos, mmul(m, mono)): (k * c) % p for (pos, m), k in self.terms.items()},
        )

    def monic(self):
        _, c = self.lead()
        if c == 1:
            return self
        return self.scale(self.ring.field.inv(c))

    def __eq__(self, other):
        return (
            isinstance(other, VectorElement)
            and other.rank == self.rank
            and other.terms == self.terms
            and other.ring == self.ring
        )

    def __repr__(self):
        return f"VectorElement({[str(f) for f in self.coordinates()]})"


def _index_by_position(basis):
    by_pos = {}
    for b in basis:
        (pos, m), c = b.lead()
        by_pos.setdefault(pos, []).append((m, c, b))
    return by_pos


def reduce_vector(v, by_pos, ring):
    """Full normal form of v against the indexed basis; deterministic."""
    p = ring.p
    inv = ring.field.inv
    rem = {}
    work = dict(v.terms)
    while work:
        term = max(work, key=pot_key)
        c = work.pop(term)
        pos, m = term
        hit = None
        for mb, cb, b in by_pos.get(pos, ()):
            if mdivides(mb, m):
                hit = (mb, cb, b)
                break
        if hit is None:
            rem[term] = c
            continue
        mb, cb, b = hit
        mult = mdiv(m, mb)
        coef = (c * inv(cb)) % p
        for (tpos, tm), tc in b.terms.items():
            key = (tpos, mmul(tm, mult))
            if key == term:
                continue
            s = (work.get(key, 0) - coef * tc) % p
            if s:
                work[key] = s
            else:
                work.pop(key, None)
    return VectorElement(ring, v.rank, rem)


class SubmoduleGB:
    """Reduced Groebner basis of a submodule of a shifted free module."""

    def __init__(self, ring, rank, shifts, generators, basis):
        self.ring = ring
        self.rank = rank
        self.shifts = list(shifts)
        self.generators = list(generators)
        self.basis = list(basis)
        self._by_pos = _index_by_position(self.basis)

    def normal_form(self, v):
        return reduce_vector(v, self._by_pos, self.ring)

    def contains(self, v):
        return self.normal_form(v).is_zero()

    def lead_terms(self):
        return [g.lead()[0] for g in self.basis]

    def lt_monomials_by_position(self):
        out = {pos: [] for pos in range(self.rank)}
        for pos, m in self.lead_terms():
            out[pos].append(m)
        return out


def buchberger(gens, rank, shifts, ring, degree_cap=None):
    """Reduced Groebner basis of the submodule generated by ``gens``.

    Pairs are processed by ascending shifted lcm degree (normal strategy).
    The product criterion applies only in the ideal case; the chain
    criterion uses the strict-divisor form, which is sound in any
    processing order.  Raises DegreeLimitError when a pending S-pair
    exceeds the cap.
    """
    cap = DEFAULT_DEGREE_CAP if degree_cap is None else degree_cap
    gens = list(gens)
    G = []
    for g in gens:
        if not g.is_zero():
            G.append(g.monic())
    leads = [g.lead() for g in G]
    pairs = []

    def push_pairs(j):
        (pj, mj), _ = leads[j]
        for i in range(j):
            (pi, mi), _ = leads[i]
            if pi != pj:
                continue
            if rank == 1 and mlcm(mi, mj) == mmul(mi, mj):
                continue
            L = mlcm(mi, mj)
            heapq.heappush(pairs, (mdeg(L) + shifts[pi], pi, grevlex_key(L), i, j))

    for j in range(len(G)):
        push_pairs(j)

    by_pos = _index_by_position(G)
    while pairs:
        d, pos, _, i, j = heapq.heappop(pairs)
        if d > cap:
            raise DegreeLimitError(
                f"S-pair of degree {d} exceeds the degree cap {cap}"
            )
        (pi, mi), ci = leads[i]
        (pj, mj), cj = leads[j]
        L = mlcm(mi, mj)
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            (pk, mk), _ = leads[k]
            if pk != pos or not mdivides(mk, L):
                continue
            if mlcm(mi, mk) != L and mlcm(mj, mk) != L:
                skip = True
                break
        if skip:
            continue
        inv = ring.field.inv
        s = G[i].term_mul(mdiv(L, mi), inv(ci)).sub(G[j].term_mul(mdiv(L, mj), inv(cj)))
        r = reduce_vector(s, by_pos, ring)
        if not r.is_zero():
            r = r.monic()
            G.append(r)
            leads.append(r.lead())
            (rp, rm), rc = leads[-1]
            by_pos.setdefault(rp, []).append((rm, rc, r))
            push_pairs(len(G) - 1)

    basis = _autoreduce(G, ring)
    return SubmoduleGB(ring, rank, shifts, gens, basis)


def _autoreduce(G, ring):
    """Inter-reduce a Groebner basis to the unique reduced form."""
    if not G:
        return []
    G = sorted(G, key=lambda g: pot_key(g.lead()[0]))
    minimal = []
    min_leads = []
    for g in G:
        (pos, m), _ = g.lead()
        if any(p == pos and mdivides(mb, m) for p, mb in min_leads):
            continue
        minimal.append(g)
        min_leads.append((pos, m))
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        r = reduce_vector(g, _index_by_position(others), ring)
        out.append(r.monic())
    return out


def ideal_gb(polys, ring, degree_cap=None):
    """Reduced Groebner basis of an ideal, as polynomials."""
    gens = [VectorElement.from_poly(f) for f in polys if not f.is_zero()]
    gb = buchberger(gens, 1, [0], ring, degree_cap)
    return [g.coordinate(0) for g in gb.basis]


def syzygy_module(tagged, rank, shifts, ring, untagged=(), tag_degrees=None,
                  degree_cap=None):
    """Generators of { a in R^s : sum_j a_j * tagged[j] in span(untagged) }.

    Works in the extended free module R^(rank+s) where each tagged
    generator carries a unit tag; POT makes the first block an elimination
    block, so the tag-only elements of the reduced basis project onto a
    generating set of the syzygy module.  Returns (syzygies, tag_degrees);
    the tag degrees are the row shifts of the syzygy module.
    """
    s = len(tagged)
    if tag_degrees is None:
        tag_degrees = []
        for g in tagged:
            d = g.degree(shifts)
            tag_degrees.append(0 if d is None else d)
    ext_rank = rank + s
    ext_shifts = list(shifts) + list(tag_degrees)
    zero_mono = (0,) * ring.n
    ext_gens = []
    for j, g in enumerate(tagged):
        terms = dict(g.terms)
        terms[(rank + j, zero_mono)] = 1
        ext_gens.append(VectorElement(ring, ext_rank, terms))
    for u in untagged:
        ext_gens.append(VectorElement(ring, ext_rank, dict(u.terms)))
    gb = buchberger(ext_gens, ext_rank, ext_shifts, ring, degree_cap)
    syz = []
    for g in gb.basis:
        if all(pos >= rank for pos, _ in g.terms):
            proj = {(pos - rank, m): c for (pos, m), c in g.terms.items()}
            syz.append(VectorElement(ring, s, proj))
    return syz, list(tag_degrees)


def syzygies(gb):
    """Syzygy matrix of a Groebner basis: column j records the coefficients
    of one generating relation among gb.basis (Schreyer-style output shape,
    computed by elimination)."""
    syz, _ = syzygy_module(
        list(gb.basis), gb.rank, gb.shifts, gb.ring, degree_cap=None
    )
    rows = [[v.coordinate(i) for v in syz] for i in range(len(gb.basis))]
    return rows


def ideal_rows(ideal_polys, rank, ring):
    """The elements f*e_i for f in ideal_polys, used to work over R/I."""
    out = []
    for f in ideal_polys:
        for i in range(rank):
            out.append(
                VectorElement(ring, rank, {(i, m): c for m, c in f.terms.items()})
            )
    return out


# ---------------------------------------------------------------------------
# Leading-term combinatorics.


def monomial_dimension(lts, n):
    """Krull dimension of R/(lts): the largest variable subset meeting no
    generator's support; MINUS_INFINITY for the unit ideal."""
    lts = list(lts)
    if any(mdeg(m) == 0 for m in lts):
        return MINUS_INFINITY
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lts]
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            Sset = set(S)
            if all(not sup <= Sset for sup in supports):
                return size
    return 0


def _minimalize_monomials(lts):
    out = []
    for m in sorted(set(lts), key=lambda m: (mdeg(m), m)):
        if not any(mdivides(g, m) for g in out):
            out.append(m)
    return out


def hilbert_numerator(lts, n):
    """Numerator N(t) of the Hilbert series N(t)/(1-t)^n of R/(lts).

    Recursive pivot splitting on the most shared variable; pairwise
    coprime generators are the complete-intersection base case.  Returned
    as a dict degree -> integer coefficient.
    """
    gens = _minimalize_monomials(lts)
    return _hilbert_rec(gens, n)


def _hilbert_rec(gens, n):
    if any(mdeg(m) == 0 for m in gens):
        return {}
    num = {0: 1}
    shared = _most_shared_variable(gens)
    if shared is None:
        for m in gens:
            num = _tpoly_mul(num, {0: 1, mdeg(m): -1})
        return num
    j = shared
    left = [m for m in gens if m[j] == 0]
    pivot = tuple(1 if i == j else 0 for i in range(n))
    left = _minimalize_monomials(left + [pivot])
    right = _minimalize_monomials(
        [tuple(e - 1 if i == j and e > 0 else e for i, e in enumerate(m)) for m in gens]
    )
    return _tpoly_add(_hilbert_rec(left, n), _tpoly_shift(_hilbert_rec(right, n), 1))


def _most_shared_variable(gens):
    counts = {}
    for m in gens:
        for i, e in enumerate(m):
            if e:
                counts[i] = counts.get(i, 0) + 1
    best = None
    for i in sorted(counts):
        if counts[i] >= 2 and (best is None or counts[i] > counts[best]):
            best = i
    return best


def _tpoly_add(a, b):
    out = dict(a)
    for d, c in b.items():
        s = out.get(d, 0) + c
        if s:
            out[d] = s
        else:
            out.pop(d, None)
    return out


def _tpoly_mul(a, b):
    out = {}
    for d1, c1 in a.items():
        for d2, c2 in b.items():
            s = out.get(d1 + d2, 0) + c1 * c2
            if s:
                out[d1 + d2] = s
            else:
                out.pop(d1 + d2, None)
    return out


def _tpoly_shift(a, k):
    return {d + k: c for d, c in a.items()}


def tpoly_eval_at_1(a):
    return sum(a.values())


def vanishing_order_at_1(num):
    """Multiplicity of the root t=1; num must be a nonzero dict poly."""
    order = 0
    cur = num
    while cur and tpoly_eval_at_1(cur) == 0:
        cur = _divide_by_one_minus_t(cur)
        order += 1
    return order


def _divide_by_one_minus_t(num):
    """Exact quotient num / (1 - t); caller guarantees num(1) = 0.

    From (1 - t) * q = num one gets q_d = sum_{k <= d} num_k.
    """
    deg = max(num)
    total = 0
    q = []
    for d in range(deg):
        total += num.get(d, 0)
        q.append(total)
    return {d: c for d, c in enumerate(q) if c}


def quotient_hilbert_polynomial(lts, n):
    """For a finite-colength monomial ideal, the polynomial Hilbert series
    of R/(lts) as dict degree -> dim; None if not finite."""
    num = hilbert_numerator(lts, n)
    cur = num
    for _ in range(n):
        if not cur:
            break
        if tpoly_eval_at_1(cur) != 0:
            return None
        cur = _divide_by_one_minus_t(cur)
    return cur


def standard_monomials(lts, n):
    """Monomials not divisible by any generator; None when infinite."""
    gens = _minimalize_monomials(lts)
    if any(mdeg(m) == 0 for m in gens):
        return []
    bounds = []
    for j in range(n):
        pure = [m[j] for m in gens if all(e == 0 for i, e in enumerate(m) if i != j)]
        if not pure:
            return None
        bounds.append(min(pure))
    out = []
    for expo in product(*(range(b) for b in bounds)):
        if not any(mdivides(g, expo) for g in gens):
            out.append(expo)
    out.sort(key=grevlex_key)
    return out


def module_length(gb):
    """F_p-dimension of coker(gb) counted by standard monomials per
    position; INFINITE when some position has positive dimension."""
    by_pos = gb.lt_monomials_by_position()
    total = 0
    for pos in range(gb.rank):
        std = standard_monomials(by_pos[pos], gb.ring.n)
        if std is None:
            return INFINITE
        total += len(std)
    return total


# ---------------------------------------------------------------------------
# The Ideal type: rank-1 case with cached basis and invariants.


class Ideal:
    """Homogeneous ideal of R with a cached reduced Groebner basis."""

    def __init__(self, ring, gens, degree_cap=None):
        self.ring = ring
        self.gens = [g for g in gens if not g.is_zero()]
        self.degree_cap = degree_cap
        self._gb = None

    def groebner(self):
        if self._gb is None:
            self._gb = ideal_gb(self.gens, self.ring, self.degree_cap)
        return self._gb

    def lt_monomials(self):
        return [g.lead_monomial() for g in self.groebner()]

    def normal_form(self, f):
        v = VectorElement.from_poly(f)
        basis = [VectorElement.from_poly(g) for g in self.groebner()]
        return reduce_vector(v, _index_by_position(basis), self.ring).coordinate(0)

    def contains(self, f):
        return self.normal_form(f).is_zero()

    def is_zero(self):
        return not self.groebner()

    def is_unit(self):
        gb = self.groebner()
        return any(g.is_constant() and not g.is_zero() for g in gb)

    def dimension(self):
        return monomial_dimension(self.lt_monomials(), self.ring.n)

    def hilbert_numerator(self):
        return hilbert_numerator(self.lt_monomials(), self.ring.n)

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.gens]})"


def ideal_intersection(j1, j2, ring, extra=(), degree_cap=None):
    """(J1 + extra) intersect (J2 + extra), by tagged elimination on e_0 + e_1."""
    tagged = [VectorElement(ring, 2, {(0, (0,) * ring.n): 1, (1, (0,) * ring.n): 1})]
    untagged = []
    for g in list(j1) + list(extra):
        if not g.is_zero():
            untagged.append(VectorElement(ring, 2, {(0, m): c for m, c in g.terms.items()}))
    for g in list(j2) + list(extra):
        if not g.is_zero():
            untagged.append(VectorElement(ring, 2, {(1, m): c for m, c in g.terms.items()}))
    syz, _ = syzygy_module(tagged, 2, [0, 0], ring, untagged, degree_cap=degree_cap)
    return [v.coordinate(0) for v in syz if not v.is_zero()]


# ---------------------------------------------------------------------------
# Polynomial matrices: determinants and minors (Fitting ideals, exactness).


def poly_det(rows):
    """Determinant by cofactor expansion along the first row."""
    k = len(rows)
    if k == 0:
        raise ValueError("empty determinant")
    return _det_rec(rows, list(range(k)), list(range(k)))


def _det_rec(rows, ris, cis):
    ring = rows[ris[0]][cis[0]].ring
    if len(ris) == 1:
        return rows[ris[0]][cis[0]]
    total = ring.zero()
    sign = 1
    for idx, ci in enumerate(cis):
        a = rows[ris[0]][ci]
        if not a.is_zero():
            sub = _det_rec(rows, ris[1:], cis[:idx] + cis[idx + 1 :])
            term = a * sub
            total = total + (term if sign > 0 else -term)
        sign = -sign
    return total


def matrix_minors(rows, size):
    """All size x size minors of a polynomial matrix (list of rows)."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    out = []
    for ris in combinations(range(nr), size):
        for cis in combinations(range(nc), size):
            out.append(_det_rec(rows, list(ris), list(cis)))
    return out
