"""Finitely generated graded modules over A = R/I.

Free resolutions over R and over A (with cutoff), minimalization,
projective dimension, depth, grade, Ext modules, annihilators, and
homology of bounded free complexes.  Every submodule computation happens
over R with I*e_i generators adjoined, per the one-engine design.
"""

from dataclasses import dataclass
from functools import cached_property

from .errors import (
    DegreeLimitError,
    NotAComplexError,
    NotEquidimensionalError,
    NotHomogeneousError,
    PdCutoffError,
    ZeroModuleError,
)
from .groebner import (
    MINUS_INFINITY,
    Ideal,
    VectorElement,
    buchberger,
    ideal_intersection,
    ideal_rows,
    matrix_minors,
    module_length,
    syzygy_module,
)
from .polycore import frobenius_power

DEFAULT_CUTOFF = 8


class QuotientRing:
    """A = F_p[x_1..x_n]/I with I homogeneous and proper.

    The zero-ideal case doubles as the base polynomial ring R, which is
    where depth and pd_R computations live.
    """

    def __init__(self, ring, ideal_gens, equidimensional=None, degree_cap=None):
        for g in ideal_gens:
            if not g.is_homogeneous():
                raise NotHomogeneousError(f"defining ideal generator {g} is inhomogeneous")
        self.ring = ring
        self.degree_cap = degree_cap
        self.ideal = Ideal(ring, ideal_gens, degree_cap)
        if self.ideal.is_unit():
            raise ValueError("defining ideal is the unit ideal")
        self.equidimensional = equidimensional

    @property
    def n(self):
        return self.ring.n

    @property
    def p(self):
        return self.ring.p

    @cached_property
    def d(self):
        return int(self.ideal.dimension())

    def is_base(self):
        return self.ideal.is_zero()

    @cached_property
    def base_ring(self):
        if self.is_base():
            return self
        return QuotientRing(self.ring, [], degree_cap=self.degree_cap)

    def reduce(self, f):
        if self.is_base():
            return f
        return self.ideal.normal_form(f)

    @cached_property
    def depth(self):
        """depth of A itself, as n - pd_R(A) (Auslander-Buchsbaum over R)."""
        if self.is_base():
            return self.n
        as_module = FgModule(self.base_ring, [list(self.ideal.gens)], [0])
        return self.n - as_module.pd("R")

    def module(self, rows, row_degrees=None):
        return FgModule(self, rows, row_degrees)

    def free_module(self, rank):
        return FgModule(self, [[] for _ in range(rank)], [0] * rank)

    def quotient_by(self, extra_gens, equidimensional=None):
        return QuotientRing(
            self.ring,
            list(self.ideal.gens) + [g for g in extra_gens if not g.is_zero()],
            equidimensional=equidimensional,
            degree_cap=self.degree_cap,
        )

    def height(self, ideal):
        """Height of an ideal of A as d - dim(A/J).

        The formula needs every component of A to have full dimension, so
        it refuses unless the session asserted equidimensionality.
        """
        if not self.equidimensional:
            raise NotEquidimensionalError(
                "height via d - dim(A/J) needs the equidimensional flag"
            )
        gens = ideal.gens if isinstance(ideal, Ideal) else list(ideal)
        full = Ideal(self.ring, list(self.ideal.gens) + gens, self.degree_cap)
        dim = full.dimension()
        if dim == MINUS_INFINITY:
            raise ZeroModuleError("height of the unit ideal")
        return self.d - int(dim)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.ideal.gens) or "0"
        return f"QuotientRing(F_{self.p}[{', '.join(self.ring.variables)}]/({gens}))"


@dataclass(frozen=True)
class AtLeast:
    """Lower bound for a projective dimension left incomplete at the cutoff."""

    bound: int

    def __repr__(self):
        return f"AT_LEAST({self.bound})"


class FgModule:
    """Graded A-module given by a homogeneous presentation matrix.

    Rows index generators, columns index relations; ``row_degrees`` are the
    generator degree shifts.  Invariants are cached after first use.
    """

    def __init__(self, qring, rows, row_degrees=None):
        self.qring = qring
        self.rows = [[qring.reduce(e) for e in row] for row in rows]
        self.b0 = len(rows)
        ncols = {len(row) for row in rows}
        if len(ncols) > 1:
            raise ValueError("presentation matrix is ragged")
        self.ncols = ncols.pop() if ncols else 0
        self.row_degrees = list(row_degrees) if row_degrees is not None else [0] * self.b0
        if len(self.row_degrees) != self.b0:
            raise ValueError("row_degrees length does not match row count")
        self._check_homogeneous()
        self._cache = {}

    def _check_homogeneous(self):
        for j in range(self.ncols):
            degs = set()
            for i in range(self.b0):
                e = self.rows[i][j]
                if e.is_zero():
                    continue
                if not e.is_homogeneous():
                    raise NotHomogeneousError(f"presentation entry ({i},{j}) is inhomogeneous")
                degs.add(e.degree() + self.row_degrees[i])
            if len(degs) > 1:
                raise NotHomogeneousError(
                    f"presentation column {j} is not homogeneous for the row degrees"
                )

    # --- presentation views ------------------------------------------------

    def columns(self):
        ring = self.qring.ring
        out = []
        for j in range(self.ncols):
            terms = {}
            for i in range(self.b0):
                for m, c in self.rows[i][j].terms.items():
                    terms[(i, m)] = c
            out.append(VectorElement(ring, self.b0, terms))
        return out

    def combined_gb(self):
        """GB of (relation columns + I*e_i) over R; the workhorse cache."""
        if "gb" not in self._cache:
            qr = self.qring
            gens = self.columns() + ideal_rows(qr.ideal.groebner(), self.b0, qr.ring)
            self._cache["gb"] = buchberger(
                gens, self.b0, self.row_degrees, qr.ring, qr.degree_cap
            )
        return self._cache["gb"]

    # --- basic invariants ----------------------------------------------------

    def length(self):
        if "length" not in self._cache:
            self._cache["length"] = module_length(self.combined_gb()) if self.b0 else 0
        return self._cache["length"]

    def is_zero(self):
        return self.length() == 0

    def dimension(self):
        """Krull dimension of the support, via the 0th Fitting ideal
        (same radical as the annihilator)."""
        if "dim" not in self._cache:
            if self.b0 == 0:
                self._cache["dim"] = MINUS_INFINITY
            else:
                qr = self.qring
                minors = (
                    matrix_minors(self.rows, self.b0) if self.ncols >= self.b0 else []
                )
                fitting = Ideal(
                    qr.ring, minors + list(qr.ideal.gens), qr.degree_cap
                )
                self._cache["dim"] = fitting.dimension()
        return self._cache["dim"]

    def codim(self):
        r = self.dimension()
        if r == MINUS_INFINITY:
            raise ZeroModuleError("codimension of the zero module")
        return self.qring.d - int(r)

    def annihilator(self):
        """ann M as an ideal of A, represented over R (contains I)."""
        if "ann" not in self._cache:
            qr = self.qring
            ring = qr.ring
            if self.b0 == 0 or self.is_zero():
                self._cache["ann"] = Ideal(ring, [ring.one()], qr.degree_cap)
                return self._cache["ann"]
            cols = self.columns()
            irows = ideal_rows(qr.ideal.groebner(), self.b0, ring)
            acc = None
            for i in range(self.b0):
                tagged = [VectorElement.basis(ring, self.b0, i)]
                syz, _ = syzygy_module(
                    tagged,
                    self.b0,
                    self.row_degrees,
                    ring,
                    untagged=cols + irows,
                    tag_degrees=[self.row_degrees[i]],
                    degree_cap=qr.degree_cap,
                )
                gens_i = [v.coordinate(0) for v in syz if not v.is_zero()]
                if acc is None:
                    acc = gens_i
                else:
                    acc = ideal_intersection(acc, gens_i, ring, degree_cap=qr.degree_cap)
            self._cache["ann"] = Ideal(
                ring, acc + list(qr.ideal.gens), qr.degree_cap
            )
        return self._cache["ann"]

    # --- resolutions ---------------------------------------------------------

    def resolution(self, over="A", cutoff=DEFAULT_CUTOFF):
        key = ("res", over)
        cached = self._cache.get(key)
        if cached is not None and (cached.complete or cached.cutoff >= cutoff):
            return cached
        res = free_resolution(self, over=over, cutoff=cutoff)
        self._cache[key] = res
        return res

    def pd(self, over="A", cutoff=DEFAULT_CUTOFF):
        return self.resolution(over, cutoff).pd()

    def depth(self):
        """n - pd_R(M); depth is intrinsic to the graded local structure."""
        if self.is_zero():
            raise ZeroModuleError("depth of the zero module")
        if "depth" not in self._cache:
            self._cache["depth"] = self.qring.n - self.as_base_module().pd("R")
        return self._cache["depth"]

    def as_base_module(self):
        """The same abelian group presented as a module over R."""
        if self.qring.is_base():
            return self
        qr = self.qring
        rows = [list(row) for row in self.rows]
        for f in qr.ideal.groebner():
            for i in range(self.b0):
                for i2 in range(self.b0):
                    rows[i2].append(f if i2 == i else qr.ring.zero())
        return FgModule(qr.base_ring, rows, self.row_degrees)

    def grade(self, cutoff=None):
        """min i with Ext^i(M, A) != 0; needs only a partial resolution of
        length d+1, so finite pd is not required."""
        if self.is_zero():
            raise ZeroModuleError("grade of the zero module")
        if "grade" not in self._cache:
            d = self.qring.d
            depth_needed = d + 1
            try:
                self.resolution("A", max(cutoff or 0, depth_needed))
            except DegreeLimitError as exc:
                raise PdCutoffError(
                    f"partial resolution of length {depth_needed} unavailable: {exc}"
                )
            for i in range(d + 1):
                if not self.ext(i, cutoff=depth_needed).is_zero():
                    self._cache["grade"] = i
                    break
            else:
                raise RuntimeError("grade not found in 0..d; engine bug")
        return self._cache["grade"]

    def ext(self, i, cutoff=DEFAULT_CUTOFF):
        key = ("ext", i)
        if key not in self._cache:
            self._cache[key] = ext_module(self, i, cutoff)
        return self._cache[key]

    def quotient_by_sequence(self, elements):
        """M/(x_1..x_k)M presented over the same ring."""
        rows = [list(row) for row in self.rows]
        zero = self.qring.ring.zero()
        for x in elements:
            for i in range(self.b0):
                for i2 in range(self.b0):
                    rows[i2].append(x if i2 == i else zero)
        return FgModule(self.qring, rows, self.row_degrees)

    def length_mod_ideal(self, extra_gens):
        """l(M tensor A/(extra)); the finite-intersection precheck for chi."""
        qr = self.qring
        gens = self.columns() + ideal_rows(
            list(qr.ideal.groebner()) + [g for g in extra_gens if not g.is_zero()],
            self.b0,
            qr.ring,
        )
        gb = buchberger(gens, self.b0, self.row_degrees, qr.ring, qr.degree_cap)
        return module_length(gb)

    def __repr__(self):
        mat = "; ".join(", ".join(str(e) for e in row) for row in self.rows)
        return f"FgModule({self.b0} gens: [{mat}])"


class FreeComplex:
    """Bounded complex of free A-modules ... -> F_1 -> F_0 as matrices.

    ``shifts[k]`` lists the degree shifts of F_k (so ranks are implied);
    ``d(k)`` is the matrix of F_k -> F_{k-1}, rows indexed by F_{k-1}.
    """

    def __init__(self, qring, shifts, matrices, check=True):
        self.qring = qring
        self.shifts = [list(s) for s in shifts]
        self._mats = [[[qring.reduce(e) for e in row] for row in m] for m in matrices]
        if len(self.shifts) != len(self._mats) + 1:
            raise ValueError("shift/matrix count mismatch")
        if check:
            self._validate()

    def _validate(self):
        for k in range(1, self.length + 1):
            mat = self.d(k)
            if len(mat) != self.ranks[k - 1]:
                raise ValueError(f"d_{k} has wrong row count")
            for row in mat:
                if len(row) != self.ranks[k]:
                    raise ValueError(f"d_{k} has wrong column count")
            for i, row in enumerate(mat):
                for j, e in enumerate(row):
                    if e.is_zero():
                        continue
                    if not e.is_homogeneous():
                        raise NotHomogeneousError(f"entry ({i},{j}) of d_{k} inhomogeneous")
                    if e.degree() != self.shifts[k][j] - self.shifts[k - 1][i]:
                        raise NotHomogeneousError(
                            f"entry ({i},{j}) of d_{k} breaks the degree shifts"
                        )
        for k in range(1, self.length):
            prod = matmul(self.d(k), self.d(k + 1))
            for row in prod:
                for e in row:
                    if not self.qring.reduce(e).is_zero():
                        raise NotAComplexError(f"d_{k} d_{k+1} != 0")

    @property
    def length(self):
        return len(self._mats)

    @property
    def ranks(self):
        return [len(s) for s in self.shifts]

    def d(self, k):
        return self._mats[k - 1]

    def column_elements(self, k):
        ring = self.qring.ring
        mat = self.d(k)
        rank = self.ranks[k - 1]
        out = []
        for j in range(self.ranks[k]):
            terms = {}
            for i in range(rank):
                for m, c in mat[i][j].terms.items():
                    terms[(i, m)] = c
            out.append(VectorElement(ring, rank, terms))
        return out

    def over_quotient(self, extra_gens, shift_by=0):
        qr2 = self.qring.quotient_by(extra_gens)
        shifts = [[s + shift_by for s in level] for level in self.shifts]
        return FreeComplex(qr2, shifts, self._mats, check=False)

    def frobenius(self, nsteps):
        q = self.qring.p ** nsteps
        shifts = [[s * q for s in level] for level in self.shifts]
        mats = [
            [[frobenius_power(e, nsteps) for e in row] for row in m] for m in self._mats
        ]
        return FreeComplex(self.qring, shifts, mats, check=False)

    def dual(self):
        """Hom(-, A) read as a chain complex: position m holds F_{h-m}^*."""
        h = self.length
        shifts = [[-s for s in self.shifts[h - m]] for m in range(h + 1)]
        mats = [transpose(self.d(h - m + 1), self.ranks[h - m + 1]) for m in range(1, h + 1)]
        return FreeComplex(self.qring, shifts, mats, check=False)

    def __repr__(self):
        return f"FreeComplex(ranks={self.ranks})"


def matmul(a, b):
    """Product of polynomial matrices (lists of rows)."""
    if not a:
        return []
    inner = len(a[0])
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new_row = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                if row[k].is_zero() or b[k][j].is_zero():
                    continue
                term = row[k] * b[k][j]
                acc = term if acc is None else acc + term
            if acc is None:
                acc = row[0].ring.zero() if row else None
            new_row.append(acc)
        out.append(new_row)
    return out


def transpose(mat, ncols):
    nrows = len(mat)
    return [[mat[i][j] for i in range(nrows)] for j in range(ncols)]


class Resolution:
    """A free complex resolving a module, with completeness bookkeeping."""

    def __init__(self, complex_, module, complete, cutoff, minimal=True):
        self.complex = complex_
        self.module = module
        self.complete = complete
        self.cutoff = cutoff
        self.minimal = minimal

    @property
    def ranks(self):
        return self.complex.ranks

    def pd(self):
        if not self.complete:
            return AtLeast(self.cutoff)
        ranks = self.ranks
        if not ranks or ranks == [0]:
            return MINUS_INFINITY
        return self.complex.length

    def __repr__(self):
        state = "complete" if self.complete else f"cutoff@{self.cutoff}"
        return f"Resolution(ranks={self.ranks}, {state})"


def _minimal_generators(cols, rank, shifts, ring, untagged, degree_cap):
    """Prune to an irredundant (hence minimal, by graded Nakayama)
    generating set modulo span(untagged).  Deterministic: candidates are
    dropped highest degree first, later index first."""
    cols = [c for c in cols if not c.is_zero()]
    if len(cols) <= 1:
        return cols
    order = sorted(
        range(len(cols)),
        key=lambda i: (-(cols[i].degree(shifts) or 0), -i),
    )
    keep = set(range(len(cols)))
    for idx in order:
        if len(keep) == 1:
            break
        others = [cols[i] for i in sorted(keep) if i != idx] + list(untagged)
        gb = buchberger(others, rank, shifts, ring, degree_cap)
        if gb.contains(cols[idx]):
            keep.discard(idx)
    return [cols[i] for i in sorted(keep)]


def free_resolution(module, over="A", cutoff=DEFAULT_CUTOFF):
    """Minimal graded free resolution by iterated syzygies.

    Each syzygy step keeps only a minimal generating set, which makes the
    construction terminate at pd exactly; a final constant-pivot sweep
    removes any redundancy left in the original presentation.
    """
    if over not in ("A", "R"):
        raise ValueError("over must be 'A' or 'R'")
    qr = module.qring
    if over == "R":
        qr = qr.base_ring
        work = module.as_base_module() if not module.qring.is_base() else module
    else:
        work = module
    ring = qr.ring
    cap = qr.degree_cap

    if work.b0 == 0 or work.is_zero():
        cx = FreeComplex(qr, [[]], [], check=False)
        return Resolution(cx, module, complete=True, cutoff=cutoff, minimal=True)

    ideal_gb = qr.ideal.groebner()
    shifts_levels = [list(work.row_degrees)]
    matrices = []
    cols = work.columns()
    rank = work.b0
    complete = False
    max_steps = cutoff if over == "A" else qr.n + 2

    for k in range(1, max_steps + 1):
        untagged = ideal_rows(ideal_gb, rank, ring)
        cols = _minimal_generators(cols, rank, shifts_levels[k - 1], ring, untagged, cap)
        if not cols:
            complete = True
            break
        shifts_levels.append(
            [c.degree(shifts_levels[k - 1]) for c in cols]
        )
        matrices.append(_matrix_from_columns(cols, rank, ring))
        syz, _ = syzygy_module(
            cols,
            rank,
            shifts_levels[k - 1],
            ring,
            untagged=untagged,
            tag_degrees=shifts_levels[k],
            degree_cap=cap,
        )
        next_cols = []
        for v in syz:
            reduced = VectorElement.from_coordinates(
                [qr.reduce(f) for f in v.coordinates()]
            ) if not qr.is_base() else v
            if not reduced.is_zero():
                next_cols.append(reduced)
        rank = len(cols)
        cols = next_cols
        if not cols:
            complete = True
            break

    if over == "R" and not complete:
        raise RuntimeError("resolution over the polynomial ring failed to terminate")

    cx = FreeComplex(qr, shifts_levels, matrices, check=False)
    cx = minimalize_complex(cx)
    return Resolution(cx, module, complete=complete, cutoff=cutoff, minimal=True)


def _matrix_from_columns(cols, rank, ring):
    mat = [[ring.zero() for _ in cols] for _ in range(rank)]
    for j, v in enumerate(cols):
        for (pos, m), c in v.terms.items():
            mat[pos][j] = mat[pos][j] + ring.monomial(m, c)
    return mat


def minimalize_complex(C):
    """Split off constant-entry pivots until no matrix has a degree-0 entry.

    Row/column eliminations happen over F_p on unit entries, scanning
    matrices in ascending homological position and entries in row-major
    order, so the output is deterministic.  Homotopy type and H_0 are
    preserved; trailing zero positions are trimmed.
    """
    qr = C.qring
    inv = qr.ring.field.inv
    shifts = [list(s) for s in C.shifts]
    mats = [[list(row) for row in C.d(k)] for k in range(1, C.length + 1)]

    def find_pivot():
        for ki, mat in enumerate(mats):
            for i, row in enumerate(mat):
                for j, e in enumerate(row):
                    if not e.is_zero() and e.is_constant():
                        return ki, i, j
        return None

    while True:
        hit = find_pivot()
        if hit is None:
            break
        ki, i, j = hit
        mat = mats[ki]
        c = mat[i][j].constant_coeff()
        cinv = inv(c)
        nrows = len(mat)
        ncols = len(mat[0])
        lambdas = {
            j2: mat[i][j2].scale(cinv) for j2 in range(ncols) if j2 != j
        }
        # column ops on d_k clear row i; mirror as row ops on d_{k+1}
        for j2, lam in lambdas.items():
            if lam.is_zero():
                continue
            for r in range(nrows):
                mat[r][j2] = qr.reduce(mat[r][j2] - lam * mat[r][j])
        if ki + 1 < len(mats):
            nxt = mats[ki + 1]
            for j2, lam in lambdas.items():
                if lam.is_zero():
                    continue
                for col in range(len(nxt[0]) if nxt else 0):
                    nxt[j][col] = qr.reduce(nxt[j][col] + lam * nxt[j2][col])
        # row ops on d_k clear column j; mirror as column ops on d_{k-1}
        mus = {i2: mat[i2][j].scale(cinv) for i2 in range(nrows) if i2 != i}
        for i2, mu in mus.items():
            if mu.is_zero():
                continue
            for col in range(ncols):
                mat[i2][col] = qr.reduce(mat[i2][col] - mu * mat[i][col])
        if ki > 0:
            prv = mats[ki - 1]
            for i2, mu in mus.items():
                if mu.is_zero():
                    continue
                for r in range(len(prv)):
                    prv[r][i] = qr.reduce(prv[r][i] + mu * prv[r][i2])
        # delete row i / column j of d_k and the matching borders
        del shifts[ki + 1][j]
        del shifts[ki][i]
        for row in mat:
            del row[j]
        del mat[i]
        if ki + 1 < len(mats):
            del mats[ki + 1][j]
        if ki > 0:
            for row in mats[ki - 1]:
                del row[i]

    while mats and not shifts[-1]:
        mats.pop()
        shifts.pop()
    return FreeComplex(qr, shifts, mats, check=False)


# ---------------------------------------------------------------------------
# Homology.


def homology(C, k):
    """Presentation of ker(d_k)/im(d_{k+1}) as a module over C's ring.

    Kernel generators come from syzygies with I*e_i adjoined; relations are
    the coefficient vectors carrying kernel generators into the image.
    """
    if k < 0 or k > C.length:
        raise ValueError(f"position {k} outside complex of length {C.length}")
    qr = C.qring
    ring = qr.ring
    ideal_gb = qr.ideal.groebner()
    if C.ranks[k] == 0:
        return FgModule(qr, [], [])
    if k == 0:
        if C.length == 0:
            return FgModule(qr, [[] for _ in range(C.ranks[0])], C.shifts[0])
        return FgModule(qr, C.d(1), C.shifts[0])
    rank_prev = C.ranks[k - 1]
    if rank_prev == 0:
        ker = [VectorElement.basis(ring, C.ranks[k], i) for i in range(C.ranks[k])]
        ker_degs = list(C.shifts[k])
    else:
        cols = C.column_elements(k)
        ker, ker_degs = syzygy_module(
            cols,
            rank_prev,
            C.shifts[k - 1],
            ring,
            untagged=ideal_rows(ideal_gb, rank_prev, ring),
            tag_degrees=C.shifts[k],
            degree_cap=qr.degree_cap,
        )
        ker = [
            v
            for v in (
                VectorElement.from_coordinates([qr.reduce(f) for f in w.coordinates()])
                if not qr.is_base()
                else w
                for w in ker
            )
            if not v.is_zero()
        ]
        ker_degs = [v.degree(C.shifts[k]) for v in ker]
    if not ker:
        return FgModule(qr, [], [])
    image_cols = C.column_elements(k + 1) if k < C.length else []
    rels, _ = syzygy_module(
        ker,
        C.ranks[k],
        C.shifts[k],
        ring,
        untagged=image_cols + ideal_rows(ideal_gb, C.ranks[k], ring),
        tag_degrees=ker_degs,
        degree_cap=qr.degree_cap,
    )
    pres = _matrix_from_columns(rels, len(ker), ring) if rels else [[] for _ in ker]
    return FgModule(qr, pres, ker_degs)


def ext_module(M, i, cutoff=DEFAULT_CUTOFF):
    """Ext^i(M, A) as H^i of the dualized (partial) resolution."""
    res = M.resolution("A", max(cutoff, i + 1))
    L = res.complex
    h = L.length
    if res.complete and i > h:
        return FgModule(M.qring, [], [])
    if not res.complete and h < i + 1:
        raise PdCutoffError(
            f"Ext^{i} needs a resolution of length {i + 1}; only {h} available"
        )
    if h == 0:
        # free module: Ext^0 = dual, Ext^{>0} = 0
        if i > 0:
            return FgModule(M.qring, [], [])
        return FgModule(
            M.qring, [[] for _ in L.shifts[0]], [-s for s in L.shifts[0]]
        )
    return homology(L.dual(), h - i)


def homology_with_coefficients(C, M, k, cutoff=DEFAULT_CUTOFF):
    """H_k(C tensor M) for a bounded free complex C over A.

    Cyclic M = A/J is handled by reducing C into the quotient ring; other
    modules go through the total complex of C tensor L_*(M), which needs a
    complete finite resolution of M.
    """
    if M.b0 == 1:
        extras = [e for e in M.rows[0] if not e.is_zero()]
        reduced = C.over_quotient(extras, shift_by=M.row_degrees[0])
        return homology(reduced, k)
    res = M.resolution("A", cutoff)
    if not res.complete:
        raise PdCutoffError(
            "coefficients module has no finite resolution under the cutoff"
        )
    total = tensor_total(C, res.complex)
    return homology(total, k)


def tensor_total(C, L):
    """Total complex of the double complex C_s tensor L_t.

    Basis order inside T_m: blocks by ascending s, then (i, j) with the L
    index fastest.  Differential: d_C tensor id + (-1)^s id tensor d_L.
    """
    qr = C.qring
    hC, hL = C.length, L.length
    h = hC + hL
    blocks = []
    offsets = []
    shifts = []
    for m in range(h + 1):
        blk = [(s, m - s) for s in range(max(0, m - hL), min(m, hC) + 1)]
        blocks.append(blk)
        off = {}
        level_shifts = []
        pos = 0
        for s, t in blk:
            off[(s, t)] = pos
            for i in range(C.ranks[s]):
                for jj in range(L.ranks[t]):
                    level_shifts.append(C.shifts[s][i] + L.shifts[t][jj])
            pos += C.ranks[s] * L.ranks[t]
        offsets.append(off)
        shifts.append(level_shifts)
    zero = qr.ring.zero()
    mats = []
    for m in range(1, h + 1):
        nrows = len(shifts[m - 1])
        ncols = len(shifts[m])
        mat = [[zero for _ in range(ncols)] for _ in range(nrows)]
        for s, t in blocks[m]:
            base_col = offsets[m][(s, t)]
            lt_rank = L.ranks[t]
            for i in range(C.ranks[s]):
                for jj in range(lt_rank):
                    col = base_col + i * lt_rank + jj
                    if s >= 1 and (s - 1, t) in offsets[m - 1]:
                        dC = C.d(s)
                        base_row = offsets[m - 1][(s - 1, t)]
                        for i2 in range(C.ranks[s - 1]):
                            e = dC[i2][i]
                            if not e.is_zero():
                                row = base_row + i2 * lt_rank + jj
                                mat[row][col] = mat[row][col] + e
                    if t >= 1 and (s, t - 1) in offsets[m - 1]:
                        dL = L.d(t)
                        base_row = offsets[m - 1][(s, t - 1)]
                        sign = 1 if s % 2 == 0 else -1
                        prev_rank = L.ranks[t - 1]
                        for j2 in range(prev_rank):
                            e = dL[j2][jj]
                            if not e.is_zero():
                                row = base_row + i * prev_rank + j2
                                term = e if sign > 0 else -e
                                mat[row][col] = mat[row][col] + term
        mats.append(mat)
    return FreeComplex(qr, shifts, mats, check=False)
