"""Frobenius functor and asymptotic multiplicities.

F^n acts on presentations by entry-wise p^n-th powers (base change along
the n-fold Frobenius is right exact).  The limit reports track
chi(F^n(M), A/J) or e(x; F^n(M)) normalized by p^(n codim M) as exact
rationals; the positive/zero verdict is a documented finite-n heuristic,
never an error.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DimMismatchError,
    NotSopError,
    ParseError,
    PdCutoffError,
    TriesExhaustedError,
)
from .groebner import INFINITE, MINUS_INFINITY
from .koszul import ParamSeq, chi_of_resolution, koszul_complex, multiplicity, tor_lengths
from .modcalc import DEFAULT_CUTOFF, FgModule, Resolution, homology_with_coefficients
from .polycore import frobenius_power

DEFAULT_THRESHOLDS = {
    "positive_level": Fraction(3, 4),
    "positive_step": Fraction(1, 4),
    "zero_level": Fraction(1, 4),
    "zero_ratio": Fraction(1, 2),
}


def default_nmax(p):
    """Degrees scale as p^n, so fewer steps for larger characteristic."""
    return 3 if p == 2 else 2


def frobenius_module(M, nsteps):
    """F^n(M): every presentation entry to the p^nsteps power, shifts scaled."""
    if nsteps < 0:
        raise ValueError("nsteps must be >= 0")
    if nsteps == 0:
        return M
    q = M.qring.p ** nsteps
    rows = [[frobenius_power(e, nsteps) for e in row] for row in M.rows]
    return FgModule(M.qring, rows, [s * q for s in M.row_degrees])


def frobenius_complex(C, nsteps):
    """Entry-wise p^nsteps powers; stays a complex since Frobenius is a ring map."""
    if nsteps < 0:
        raise ValueError("nsteps must be >= 0")
    if nsteps == 0:
        return C
    return C.frobenius(nsteps)


@dataclass
class LimitReport:
    kind: str  # "chi" or "e"
    codim: int
    values: list = field(default_factory=list)  # (n, raw, Fraction)
    verdict: str = "inconclusive"
    thresholds: dict = field(default_factory=lambda: dict(DEFAULT_THRESHOLDS))

    def normalized(self):
        return [v for _, _, v in self.values]

    def raw(self):
        return [r for _, r, _ in self.values]

    def to_dict(self):
        return {
            "kind": self.kind,
            "codim": self.codim,
            "values": [
                {"n": n, "raw": raw, "normalized": {"num": v.numerator, "den": v.denominator}}
                for n, raw, v in self.values
            ],
            "verdict": self.verdict,
            "thresholds": {
                k: {"num": v.numerator, "den": v.denominator}
                for k, v in sorted(self.thresholds.items())
            },
        }


def classify_limit(values, thresholds=None):
    """Verdict for a finite normalized sequence.

    positive: last value >= positive_level and the last step moved by at
    most positive_step.  zero: last value <= zero_level and the last ratio
    is at most zero_ratio (0/0 counts as ratio 0).  Anything else,
    including a single-point sequence, is inconclusive.
    """
    th = dict(DEFAULT_THRESHOLDS)
    if thresholds:
        th.update(thresholds)
    if len(values) < 2:
        return "inconclusive"
    last, prev = values[-1], values[-2]
    if last >= th["positive_level"] and abs(last - prev) <= th["positive_step"]:
        return "positive"
    if last <= th["zero_level"]:
        ratio = Fraction(0) if prev == 0 else last / prev
        if 0 <= ratio <= th["zero_ratio"]:
            return "zero"
    return "inconclusive"


def _check_sop_for(M, elements):
    r = M.dimension()
    if r == MINUS_INFINITY:
        raise NotSopError("zero module has no system of parameters")
    if len(elements) != r:
        raise NotSopError(f"sequence length {len(elements)} != dim M = {r}")
    if M.length_mod_ideal(elements) == INFINITE:
        raise NotSopError("M/(x)M has infinite length")


def chi_infinity(M, seq=None, ideal_gens=None, nmax=None, cutoff=DEFAULT_CUTOFF,
                 thresholds=None):
    """Normalized chi(F^n(M), A/J) for n = 0..nmax.

    J is either the ideal of a parameter sequence (sop checked) or an
    arbitrary homogeneous ideal with l(M tensor A/J) finite (the vanishing
    route).  F^n resolutions come from Frobenius powers of one fixed
    resolution of M, valid because pd M is finite.
    """
    if nmax is None:
        nmax = default_nmax(M.qring.p)
    if seq is not None:
        elements = seq.elements if isinstance(seq, ParamSeq) else list(seq)
        _check_sop_for(M, elements)
        gens = elements
    elif ideal_gens is not None:
        gens = list(ideal_gens)
    else:
        raise ValueError("chi_infinity needs a sequence or an ideal")
    res = M.resolution("A", cutoff)
    if not res.complete:
        raise PdCutoffError("chi_infinity needs finite pd under the cutoff")
    codim = M.codim()
    p = M.qring.p
    report = LimitReport(kind="chi", codim=codim)
    if thresholds:
        report.thresholds.update(thresholds)
    for n in range(nmax + 1):
        Ln = frobenius_complex(res.complex, n)
        raw = chi_of_resolution(Ln, gens)
        report.values.append((n, raw, Fraction(raw, p ** (n * codim))))
    report.verdict = classify_limit(report.normalized(), report.thresholds)
    return report


def e_infinity(M, seq, nmax=None, cutoff=DEFAULT_CUTOFF, thresholds=None,
               recompute=False):
    """Normalized Koszul multiplicities e(x; F^n(M)) for n = 0..nmax.

    codim F^n(M) = codim M since the support is preserved, so one sop
    check on M covers every n.  With ``recompute`` the resolution of each
    F^n(M) is rebuilt from scratch instead of using the Frobenius fast
    path (cross-validation only).
    """
    if nmax is None:
        nmax = default_nmax(M.qring.p)
    elements = seq.elements if isinstance(seq, ParamSeq) else list(seq)
    _check_sop_for(M, elements)
    codim = M.codim()
    p = M.qring.p
    report = LimitReport(kind="e", codim=codim)
    if thresholds:
        report.thresholds.update(thresholds)
    base_res = None
    if M.b0 > 1 and not recompute:
        base_res = M.resolution("A", cutoff)
        if not base_res.complete:
            raise PdCutoffError("e_infinity on a non-cyclic module needs finite pd")
    for n in range(nmax + 1):
        Mn = frobenius_module(M, n)
        if base_res is not None:
            # resolve F^n(M) by the Frobenius power of the fixed resolution
            Mn._cache[("res", "A")] = Resolution(
                frobenius_complex(base_res.complex, n),
                Mn,
                complete=True,
                cutoff=base_res.cutoff,
            )
        raw = multiplicity(elements, Mn, cutoff)
        report.values.append((n, raw, Fraction(raw, p ** (n * codim))))
    report.verdict = classify_limit(report.normalized(), report.thresholds)
    return report


def tor_limit_table(M, elements, nmax, cutoff=DEFAULT_CUTOFF):
    """Normalized lengths of Tor_i(F^n(M), A/(x)) for every i, n.

    Used to watch the positive-index Tor terms vanish asymptotically when
    pd M = codim M.  Returns {i: [(n, raw, normalized)]}.
    """
    res = M.resolution("A", cutoff)
    if not res.complete:
        raise PdCutoffError("Tor table needs finite pd under the cutoff")
    codim = M.codim()
    p = M.qring.p
    table = {}
    for n in range(nmax + 1):
        Ln = frobenius_complex(res.complex, n)
        lengths = tor_lengths(Ln, elements)
        for i, raw in enumerate(lengths):
            table.setdefault(i, []).append(
                (n, raw, Fraction(raw, p ** (n * codim)))
            )
    return table


# ---------------------------------------------------------------------------
# Systems of parameters.


def _dim_after(module, elements):
    return module.quotient_by_sequence(elements).dimension() if elements else module.dimension()


def _ring_dim_after(qring, elements):
    from .groebner import Ideal

    if not elements:
        return qring.d
    return Ideal(
        qring.ring, list(qring.ideal.gens) + list(elements), qring.degree_cap
    ).dimension()


def _higher_koszul_finite(elements, qring, cutoff):
    """Condition (c): l(H_t(x; A)) < infinity for all t >= 1."""
    if not elements:
        return True
    K = koszul_complex(elements, qring)
    A = qring.module([[]], [0])
    for t in range(1, len(elements) + 1):
        H = homology_with_coefficients(K, A, t, cutoff)
        if H.length() == INFINITE:
            return False
    return True


def is_sop(seq, M, cutoff=DEFAULT_CUTOFF):
    """Certificates (sop for M, part of a sop for A, higher Koszul homology
    finite) for a user-supplied sequence; no searching."""
    elements = seq.elements if isinstance(seq, ParamSeq) else list(seq)
    qr = M.qring
    r = M.dimension()
    sop_for_m = len(elements) == r
    part_of_sop = True
    for i in range(1, len(elements) + 1):
        prefix = elements[:i]
        if _dim_after(M, prefix) != r - i:
            sop_for_m = False
        if _ring_dim_after(qr, prefix) != qr.d - i:
            part_of_sop = False
    finite = _higher_koszul_finite(elements, qr, cutoff)
    return ParamSeq(
        elements,
        sop_for_M=sop_for_m,
        part_of_sop_for_A=part_of_sop,
        higher_koszul_finite=finite,
    )


def _random_form(ring, degree, rng):
    from itertools import combinations_with_replacement

    monos = sorted(
        (
            tuple(
                sum(1 for c in combo if c == v) for v in range(ring.n)
            )
            for combo in combinations_with_replacement(range(ring.n), degree)
        ),
    )
    f = ring.zero()
    for m in monos:
        c = rng.randrange(ring.p)
        if c:
            f = f + ring.monomial(m, c)
    return f


def find_sop(M, seed=0, max_tries=200, cutoff=DEFAULT_CUTOFF):
    """Search for a sop of M that extends to a sop of A with finite higher
    Koszul homology.

    Candidates are random F_p-linear forms first, then forms of degree
    2, 3, ...; each slot must drop both dim M and dim A by one, and the
    finished sequence must pass the Koszul finiteness check (which stands
    in for associated-prime avoidance).  Deterministic for a fixed seed.
    """
    r = M.dimension()
    if r == MINUS_INFINITY:
        raise NotSopError("zero module has no system of parameters")
    r = int(r)
    rng = random.Random(seed)
    if r == 0:
        return ParamSeq([], True, True, True)
    qr = M.qring
    tries = 0
    per_degree = max(8, max_tries // 4)
    while tries < max_tries:
        chosen = []
        for i in range(r):
            found = None
            degree = 1
            attempts_at_degree = 0
            while tries < max_tries:
                x = _random_form(qr.ring, degree, rng)
                tries += 1
                attempts_at_degree += 1
                if attempts_at_degree > per_degree:
                    degree += 1
                    attempts_at_degree = 0
                if x.is_zero():
                    continue
                prefix = chosen + [x]
                if _dim_after(M, prefix) != r - len(prefix):
                    continue
                if _ring_dim_after(qr, prefix) != qr.d - len(prefix):
                    continue
                found = x
                break
            if found is None:
                raise TriesExhaustedError(
                    f"no parameter found after {tries} candidates"
                )
            chosen.append(found)
        if _higher_koszul_finite(chosen, qr, cutoff):
            return ParamSeq(chosen, True, True, True)
    raise TriesExhaustedError(f"no certified sequence after {tries} candidates")


# ---------------------------------------------------------------------------
# The associativity cross-check.


@dataclass
class PrimeDatum:
    """User-asserted prime with localized lengths l(F^n(M)_p).

    The engine verifies only dim A/p = dim M; primality and the lengths
    stay user assertions and are flagged as such in reports.
    """

    name: str
    ideal_gens: list
    lengths: list


def associativity_check(M, seq, primes, nmax, cutoff=DEFAULT_CUTOFF):
    """Compare e(x; F^n(M)) against sum_p e(x; A/p) l(F^n(M)_p).

    Left side fully engine-computed; right side combines engine values
    e(x; A/p) with the user-supplied localized lengths.
    """
    elements = seq.elements if isinstance(seq, ParamSeq) else list(seq)
    qr = M.qring
    r = M.dimension()
    _check_sop_for(M, elements)
    prime_rows = []
    for datum in primes:
        quotient = qr.module([list(datum.ideal_gens)], [0])
        dim_p = quotient.dimension()
        if dim_p != r:
            raise DimMismatchError(
                f"prime {datum.name}: dim A/p = {dim_p} != dim M = {r}"
            )
        if len(datum.lengths) < nmax + 1:
            raise ParseError(
                f"prime {datum.name}: needs lengths for n = 0..{nmax}"
            )
        e_p = multiplicity(elements, quotient, cutoff)
        prime_rows.append((datum, e_p))
    ereport = e_infinity(M, ParamSeq(elements), nmax=nmax, cutoff=cutoff)
    rows = []
    all_equal = True
    for n, raw, _ in ereport.values:
        rhs = sum(e_p * datum.lengths[n] for datum, e_p in prime_rows)
        equal = raw == rhs
        all_equal = all_equal and equal
        rows.append({"n": n, "engine_e": raw, "prime_sum": rhs, "equal": equal})
    return {
        "module_dim": int(r),
        "sequence": [str(x) for x in elements],
        "primes": [
            {
                "name": datum.name,
                "e_on_quotient": e_p,
                "lengths": list(datum.lengths[: nmax + 1]),
                "status": "lengths user-asserted; dimension engine-verified",
            }
            for datum, e_p in prime_rows
        ],
        "rows": rows,
        "all_equal": all_equal,
    }
