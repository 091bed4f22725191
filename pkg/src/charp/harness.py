"""Session files, the theorem-check suite, and deterministic reports.

A session is one JSON file naming a ring, modules, sequences, ideals,
complexes, and prime data.  Each check maps a statement about modules of
finite projective dimension to a pass/fail/inconclusive/skipped record;
preconditions that fail produce ``skipped``, never ``fail``.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import (
    CAError,
    NotHomogeneousError,
    NotSopError,
    ParseError,
    UnknownCheckError,
)
from .frobmult import (
    PrimeDatum,
    chi_infinity,
    default_nmax,
    e_infinity,
    find_sop,
    is_sop,
    tor_limit_table,
)
from .groebner import INFINITE, MINUS_INFINITY, Ideal
from .koszul import chi, multiplicity
from .modcalc import (
    DEFAULT_CUTOFF,
    AtLeast,
    FgModule,
    FreeComplex,
    QuotientRing,
)
from .polycore import PolyRing, format_poly, parse_poly

SESSION_KEYS = {
    "characteristic",
    "variables",
    "ideal",
    "equidimensional",
    "modules",
    "sequences",
    "ideals",
    "complexes",
    "primes",
}


@dataclass
class Session:
    path: str
    qring: QuotientRing
    modules: dict = field(default_factory=dict)
    sequences: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)
    complexes: dict = field(default_factory=dict)
    primes: dict = field(default_factory=dict)

    @property
    def ring(self):
        return self.qring.ring


def _parse_homogeneous(text, ring, where):
    try:
        f = parse_poly(text, ring)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc.message}")
    if not f.is_homogeneous():
        raise NotHomogeneousError(f"{where}: {text!r} is inhomogeneous")
    return f


def load_session(path, degree_cap=None):
    """Parse and fully validate a session file."""
    path = str(path)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ParseError(f"no such session file: {path}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(data, dict):
        raise ParseError(f"{path}: session must be a JSON object")
    unknown = set(data) - SESSION_KEYS
    if unknown:
        raise ParseError(f"{path}: unknown keys {sorted(unknown)}")
    try:
        p = data["characteristic"]
        variables = data["variables"]
    except KeyError as exc:
        raise ParseError(f"{path}: missing key {exc}")
    try:
        ring = PolyRing(p, variables)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{path}: {exc}")
    ideal_gens = [
        _parse_homogeneous(t, ring, f"ideal[{i}]")
        for i, t in enumerate(data.get("ideal", []))
    ]
    try:
        qring = QuotientRing(
            ring,
            ideal_gens,
            equidimensional=data.get("equidimensional"),
            degree_cap=degree_cap,
        )
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}")
    session = Session(path=path, qring=qring)

    for name, entry in data.get("modules", {}).items():
        if not isinstance(entry, dict) or "presentation" not in entry:
            raise ParseError(f"module {name}: needs a presentation matrix")
        rows = [
            [_parse_homogeneous(t, ring, f"module {name} entry ({i},{j})") for j, t in enumerate(row)]
            for i, row in enumerate(entry["presentation"])
        ]
        row_degrees = entry.get("row_degrees")
        try:
            session.modules[name] = FgModule(qring, rows, row_degrees)
        except NotHomogeneousError as exc:
            raise NotHomogeneousError(f"module {name}: {exc.message}")
        except ValueError as exc:
            raise ParseError(f"module {name}: {exc}")

    for name, texts in data.get("sequences", {}).items():
        session.sequences[name] = [
            _parse_homogeneous(t, ring, f"sequence {name}[{i}]")
            for i, t in enumerate(texts)
        ]
    for name, texts in data.get("ideals", {}).items():
        session.ideals[name] = [
            _parse_homogeneous(t, ring, f"ideal {name}[{i}]")
            for i, t in enumerate(texts)
        ]
    for name, mats in data.get("complexes", {}).items():
        session.complexes[name] = _build_complex(name, mats, qring)
    for name, entry in data.get("primes", {}).items():
        if not isinstance(entry, dict) or "ideal" not in entry or "lengths" not in entry:
            raise ParseError(f"prime {name}: needs 'ideal' and 'lengths'")
        gens = [
            _parse_homogeneous(t, ring, f"prime {name} ideal[{i}]")
            for i, t in enumerate(entry["ideal"])
        ]
        lengths = entry["lengths"]
        if not all(isinstance(l, int) and l >= 0 for l in lengths):
            raise ParseError(f"prime {name}: lengths must be nonnegative integers")
        session.primes[name] = PrimeDatum(name, gens, lengths)
    return session


def _build_complex(name, mats, qring):
    """Complexes live over the base polynomial ring; shifts are inferred
    from entry degrees, starting from zero shifts at position 0."""
    base = qring.base_ring
    ring = base.ring
    parsed = []
    for k, mat in enumerate(mats):
        rows = [
            [
                _parse_homogeneous(t, ring, f"complex {name} d_{k + 1} entry ({i},{j})")
                for j, t in enumerate(row)
            ]
            for i, row in enumerate(mat)
        ]
        parsed.append(rows)
    if not parsed:
        raise ParseError(f"complex {name}: needs at least one matrix")
    ranks = [len(parsed[0])]
    for k, mat in enumerate(parsed):
        ncols = {len(row) for row in mat}
        if len(ncols) > 1:
            raise ParseError(f"complex {name}: d_{k + 1} is ragged")
        ncols = ncols.pop() if ncols else 0
        if k + 1 < len(parsed) and len(parsed[k + 1]) != ncols:
            raise ParseError(
                f"complex {name}: d_{k + 2} row count differs from d_{k + 1} columns"
            )
        ranks.append(ncols)
    shifts = [[0] * ranks[0]]
    for k, mat in enumerate(parsed):
        level = []
        for j in range(ranks[k + 1]):
            degs = {
                mat[i][j].degree() + shifts[k][i]
                for i in range(ranks[k])
                if not mat[i][j].is_zero()
            }
            if len(degs) > 1:
                raise NotHomogeneousError(
                    f"complex {name}: column {j} of d_{k + 1} has mixed degrees"
                )
            level.append(degs.pop() if degs else 0)
        shifts.append(level)
    return FreeComplex(base, shifts, parsed, check=False)


# ---------------------------------------------------------------------------
# JSON-friendly rendering shared by reports and the CLI.


def jsonable(v):
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator}
    if isinstance(v, AtLeast):
        return {"at_least": v.bound}
    if isinstance(v, float):
        if v == INFINITE:
            return "infinite"
        if v == MINUS_INFINITY:
            return "-infinity"
        raise ValueError(f"unexpected float {v} in a report")
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if hasattr(v, "terms") and hasattr(v, "ring"):
        return format_poly(v)
    return v


def dumps_report(obj):
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Checks.


def _result(check_id, module_name, status, statement, inputs=None, computed=None,
            reason=None):
    out = {
        "check": check_id,
        "statement": statement,
        "module": module_name,
        "status": status,
        "inputs": inputs or {},
        "computed": computed or {},
    }
    if reason is not None:
        out["reason"] = reason
    return out


def _finite_pd(M, cutoff):
    pd = M.pd("A", cutoff)
    return (pd, True) if not isinstance(pd, AtLeast) else (pd, False)


def _check_ab(session, name, M, opts):
    st = "Auslander-Buchsbaum: pd M + depth M = depth A"
    pd, ok = _finite_pd(M, opts["cutoff"])
    if not ok:
        return _result("ab", name, "skipped", st, reason=f"pd_A is {pd}, not finite under the cutoff")
    depth_m = M.depth()
    depth_a = M.qring.depth
    holds = pd + depth_m == depth_a
    return _result(
        "ab", name, "pass" if holds else "fail", st,
        computed={"pd_A": pd, "depth_M": depth_m, "depth_A": depth_a},
    )


def _check_grade_bounds(session, name, M, opts):
    st = "Peskine-Szpiro bounds: depth A <= grade M + dim M <= dim A"
    g = M.grade()
    r = M.dimension()
    d = M.qring.d
    depth_a = M.qring.depth
    holds = depth_a <= g + r <= d
    return _result(
        "grade-bounds", name, "pass" if holds else "fail", st,
        computed={"depth_A": depth_a, "grade": g, "dim": r, "d": d},
    )


def _check_grade_conj(session, name, M, opts):
    st = "Grade Conjecture: grade M + dim M = dim A (a theorem for graded modules)"
    pd, ok = _finite_pd(M, opts["cutoff"])
    if not ok:
        return _result("grade-conj", name, "skipped", st, reason=f"pd_A is {pd}, not finite under the cutoff")
    g = M.grade()
    r = M.dimension()
    d = M.qring.d
    holds = g + r == d
    return _result(
        "grade-conj", name, "pass" if holds else "fail", st,
        computed={"grade": g, "dim": r, "d": d},
    )


def _check_ht_grade(session, name, M, opts):
    st = "height ann M = grade M for modules of finite projective dimension"
    if not session.qring.equidimensional:
        return _result("ht-grade", name, "skipped", st, reason="equidimensionality not asserted in the session")
    pd, ok = _finite_pd(M, opts["cutoff"])
    if not ok:
        return _result("ht-grade", name, "skipped", st, reason=f"pd_A is {pd}, not finite under the cutoff")
    ann = M.annihilator()
    height = M.qring.height(ann)
    g = M.grade()
    holds = height == g
    return _result(
        "ht-grade", name, "pass" if holds else "fail", st,
        computed={"height_ann": height, "grade": g,
                  "ann": [format_poly(f) for f in ann.groebner()]},
    )


def _check_mult_eq_chi(session, name, M, opts):
    st = "e(x; M) = chi(M, A/x) for a parameter sequence with finite higher Koszul homology"
    if M.dimension() >= M.qring.d:
        return _result("mult-eq-chi", name, "skipped", st, reason="needs dim M < dim A")
    pd, ok = _finite_pd(M, opts["cutoff"])
    if not ok:
        return _result("mult-eq-chi", name, "skipped", st, reason=f"pd_A is {pd}, not finite under the cutoff")
    seq = _sop_for(session, M, opts)
    e = multiplicity(seq, M, opts["cutoff"])
    c = chi(M, seq.elements, opts["cutoff"])
    holds = e == c
    return _result(
        "mult-eq-chi", name, "pass" if holds else "fail", st,
        inputs={"sequence": [format_poly(x) for x in seq.elements]},
        computed={"e": e, "chi": c, "certificates": seq.certificates()},
    )


def _check_ext_dim_equiv(session, name, M, opts):
    st = "e_infinity(x; M) > 0 iff dim Ext^codim(M, A) = dim M"
    pd, ok = _finite_pd(M, opts["cutoff"])
    if not ok:
        return _result("ext-dim-equiv", name, "skipped", st, reason=f"pd_A is {pd}, not finite under the cutoff")
    r = int(M.dimension())
    d = M.qring.d
    seq = _sop_for(session, M, opts)
    report = e_infinity(M, seq, nmax=opts["nmax"], cutoff=opts["cutoff"])
    ext_dim = M.ext(d - r, opts["cutoff"]).dimension()
    computed = {
        "e_values": report.raw(),
        "normalized": report.normalized(),
        "verdict": report.verdict,
        "ext_index": d - r,
        "dim_ext": ext_dim,
        "dim_M": r,
    }
    inputs = {"sequence": [format_poly(x) for x in seq.elements]}
    if report.verdict == "inconclusive":
        return _result("ext-dim-equiv", name, "inconclusive", st, inputs, computed,
                       reason="finite-n verdict inconclusive")
    equal = ext_dim == r
    positive = report.verdict == "positive"
    holds = positive == equal
    return _result("ext-dim-equiv", name, "pass" if holds else "fail", st, inputs, computed)


def _check_lowpd(session, name, M, opts):
    st = "pd M = codim M forces asymptotic positivity and dim Ext^codim = dim M"
    pd, ok = _finite_pd(M, opts["cutoff"])
    if not ok:
        return _result("lowpd", name, "skipped", st, reason=f"pd_A is {pd}, not finite under the cutoff")
    r = int(M.dimension())
    d = M.qring.d
    if pd != d - r:
        return _result("lowpd", name, "skipped", st, reason=f"pd M = {pd} differs from codim = {d - r}")
    seq = _sop_for(session, M, opts)
    report = chi_infinity(M, seq=seq, nmax=opts["nmax"], cutoff=opts["cutoff"])
    ext_dim = M.ext(d - r, opts["cutoff"]).dimension()
    table = tor_limit_table(M, seq.elements, opts["nmax"], opts["cutoff"])
    trailing = {
        i: [str(v) for _, _, v in vals] for i, vals in sorted(table.items()) if i >= 1
    }
    tors_vanish = all(
        vals[-1][2] <= Fraction(1, 4) for i, vals in table.items() if i >= 1
    )
    computed = {
        "pd": pd,
        "codim": d - r,
        "chi_values": report.raw(),
        "verdict": report.verdict,
        "dim_ext": ext_dim,
        "dim_M": r,
        "extends_to_sop_for_A": seq.part_of_sop_for_A,
        "normalized_positive_tors": trailing,
    }
    inputs = {"sequence": [format_poly(x) for x in seq.elements]}
    if report.verdict == "inconclusive":
        return _result("lowpd", name, "inconclusive", st, inputs, computed,
                       reason="finite-n verdict inconclusive")
    holds = (
        seq.part_of_sop_for_A
        and report.verdict == "positive"
        and ext_dim == r
        and tors_vanish
    )
    return _result("lowpd", name, "pass" if holds else "fail", st, inputs, computed)


def _check_dim_one(session, name, M, opts):
    st = "dim M = 1 and finite pd force dim Ext^(d-1)(M, A) = 1"
    if M.dimension() != 1:
        return _result("dim-one", name, "skipped", st, reason="needs dim M = 1")
    pd, ok = _finite_pd(M, opts["cutoff"])
    if not ok:
        return _result("dim-one", name, "skipped", st, reason=f"pd_A is {pd}, not finite under the cutoff")
    d = M.qring.d
    ext_dim = M.ext(d - 1, opts["cutoff"]).dimension()
    holds = ext_dim == 1
    return _result(
        "dim-one", name, "pass" if holds else "fail", st,
        computed={"ext_index": d - 1, "dim_ext": ext_dim},
    )


def _check_intersection(session, name, M, opts):
    st = "Intersection Theorem: dim A/(x) <= pd M for a parameter sequence of M"
    pd, ok = _finite_pd(M, opts["cutoff"])
    if not ok:
        return _result("intersection", name, "skipped", st, reason=f"pd_A is {pd}, not finite under the cutoff")
    seq = _sop_for(session, M, opts)
    qr = M.qring
    quotient_dim = Ideal(
        qr.ring, list(qr.ideal.gens) + list(seq.elements), qr.degree_cap
    ).dimension()
    if quotient_dim == MINUS_INFINITY:
        quotient_dim = 0
    holds = quotient_dim <= pd
    return _result(
        "intersection", name, "pass" if holds else "fail", st,
        inputs={"sequence": [format_poly(x) for x in seq.elements]},
        computed={"dim_A_mod_x": quotient_dim, "pd": pd},
    )


def _check_perfect(session, name, M, opts):
    st = "perfect modules (pd = grade) satisfy grade M + dim M = dim A"
    pd, ok = _finite_pd(M, opts["cutoff"])
    if not ok:
        return _result("perfect", name, "skipped", st, reason=f"pd_A is {pd}, not finite under the cutoff")
    g = M.grade()
    if pd != g:
        return _result("perfect", name, "skipped", st, reason=f"not perfect: pd = {pd}, grade = {g}")
    r = M.dimension()
    d = M.qring.d
    holds = g + r == d
    return _result(
        "perfect", name, "pass" if holds else "fail", st,
        computed={"pd": pd, "grade": g, "dim": r, "d": d},
    )


def _check_dim_zero(session, name, M, opts):
    st = "finite length + finite pd force M perfect and A Cohen-Macaulay"
    if M.dimension() != 0:
        return _result("dim-zero", name, "skipped", st, reason="needs dim M = 0")
    pd, ok = _finite_pd(M, opts["cutoff"])
    if not ok:
        return _result("dim-zero", name, "skipped", st, reason=f"pd_A is {pd}, not finite under the cutoff")
    g = M.grade()
    d = M.qring.d
    depth_a = M.qring.depth
    perfect = pd == g
    conj = g == d
    cm = depth_a == d
    holds = perfect and conj and cm
    return _result(
        "dim-zero", name, "pass" if holds else "fail", st,
        computed={"pd": pd, "grade": g, "d": d, "depth_A": depth_a,
                  "perfect": perfect, "cohen_macaulay": cm},
    )


def _check_vanishing(session, name, M, opts):
    st = "asymptotic vanishing: chi_infinity(M, A/J) = 0 when dim M + dim A/J < dim A"
    ideal_name = opts.get("ideal")
    if ideal_name is None:
        return _result("vanishing", name, "skipped", st, reason="no ideal named")
    if ideal_name not in session.ideals:
        raise ParseError(f"unknown ideal {ideal_name!r}")
    gens = session.ideals[ideal_name]
    qr = M.qring
    dim_j = Ideal(qr.ring, list(qr.ideal.gens) + list(gens), qr.degree_cap).dimension()
    r = M.dimension()
    d = qr.d
    inputs = {"ideal": ideal_name, "ideal_gens": [format_poly(g) for g in gens]}
    if not r + dim_j < d:
        return _result("vanishing", name, "skipped", st, inputs,
                       reason=f"needs dim M + dim A/J < d; got {r} + {dim_j} >= {d}")
    if M.length_mod_ideal(gens) == INFINITE:
        return _result("vanishing", name, "skipped", st, inputs,
                       reason="l(M tensor A/J) is infinite")
    pd, ok = _finite_pd(M, opts["cutoff"])
    if not ok:
        return _result("vanishing", name, "skipped", st, inputs,
                       reason=f"pd_A is {pd}, not finite under the cutoff")
    report = chi_infinity(M, ideal_gens=gens, nmax=opts["nmax"], cutoff=opts["cutoff"])
    computed = {
        "chi_values": report.raw(),
        "normalized": report.normalized(),
        "verdict": report.verdict,
        "dim_M": r,
        "dim_A_mod_J": dim_j,
        "d": d,
    }
    if report.verdict == "inconclusive":
        return _result("vanishing", name, "inconclusive", st, inputs, computed,
                       reason="finite-n verdict inconclusive")
    holds = report.verdict == "zero"
    return _result("vanishing", name, "pass" if holds else "fail", st, inputs, computed)


def _sop_for(session, M, opts):
    seq_name = opts.get("seq")
    if seq_name is not None:
        if seq_name not in session.sequences:
            raise ParseError(f"unknown sequence {seq_name!r}")
        seq = is_sop(session.sequences[seq_name], M, opts["cutoff"])
        if not seq.sop_for_M:
            raise NotSopError(f"sequence {seq_name!r} is not a sop for the module")
        return seq
    return find_sop(M, seed=opts["seed"], cutoff=opts["cutoff"])


CHECKS = {
    "ab": _check_ab,
    "dim-one": _check_dim_one,
    "dim-zero": _check_dim_zero,
    "ext-dim-equiv": _check_ext_dim_equiv,
    "grade-bounds": _check_grade_bounds,
    "grade-conj": _check_grade_conj,
    "ht-grade": _check_ht_grade,
    "intersection": _check_intersection,
    "lowpd": _check_lowpd,
    "mult-eq-chi": _check_mult_eq_chi,
    "perfect": _check_perfect,
    "vanishing": _check_vanishing,
}

STATEMENTS = {
    "ab": "Auslander-Buchsbaum: pd M + depth M = depth A",
    "dim-one": "dim M = 1 and finite pd force dim Ext^(d-1)(M, A) = 1",
    "dim-zero": "finite length + finite pd force M perfect and A Cohen-Macaulay",
    "ext-dim-equiv": "e_infinity(x; M) > 0 iff dim Ext^codim(M, A) = dim M",
    "grade-bounds": "Peskine-Szpiro bounds: depth A <= grade M + dim M <= dim A",
    "grade-conj": "Grade Conjecture: grade M + dim M = dim A (a theorem for graded modules)",
    "ht-grade": "height ann M = grade M for modules of finite projective dimension",
    "intersection": "Intersection Theorem: dim A/(x) <= pd M for a parameter sequence of M",
    "lowpd": "pd M = codim M forces asymptotic positivity and dim Ext^codim = dim M",
    "mult-eq-chi": "e(x; M) = chi(M, A/x) for a parameter sequence with finite higher Koszul homology",
    "perfect": "perfect modules (pd = grade) satisfy grade M + dim M = dim A",
    "vanishing": "asymptotic vanishing: chi_infinity(M, A/J) = 0 when dim M + dim A/J < dim A",
}


def _normalize_opts(session, options):
    opts = {"seed": 0, "nmax": None, "cutoff": DEFAULT_CUTOFF, "ideal": None, "seq": None}
    opts.update(options or {})
    if opts["nmax"] is None:
        opts["nmax"] = default_nmax(session.qring.p)
    return opts


def verify(session, check_id, module_name, options=None):
    """Run one named check on one named module."""
    if check_id not in CHECKS:
        raise UnknownCheckError(f"unknown check {check_id!r}")
    if module_name not in session.modules:
        raise ParseError(f"unknown module {module_name!r}")
    M = session.modules[module_name]
    opts = _normalize_opts(session, options)
    statement = STATEMENTS[check_id]
    if M.is_zero():
        return _result(check_id, module_name, "skipped", statement, reason="zero module")
    try:
        return CHECKS[check_id](session, module_name, M, opts)
    except CAError as exc:
        if exc.code in ("E_PARSE", "E_UNKNOWN_CHECK"):
            raise
        return _result(check_id, module_name, "skipped", statement,
                       reason=f"{exc.code}: {exc.message}")


def run_all(session, options=None):
    """Every applicable check on every named module, deterministic order."""
    opts = _normalize_opts(session, options)
    checks = []
    for module_name in sorted(session.modules):
        for check_id in sorted(CHECKS):
            if check_id == "vanishing":
                for ideal_name in sorted(session.ideals):
                    sub = dict(opts)
                    sub["ideal"] = ideal_name
                    checks.append(verify(session, check_id, module_name, sub))
                continue
            checks.append(verify(session, check_id, module_name, opts))
    counts = {"pass": 0, "fail": 0, "skipped": 0, "inconclusive": 0}
    for c in checks:
        counts[c["status"]] += 1
    return {
        "session": Path(session.path).name,
        "seed": opts["seed"],
        "nmax": opts["nmax"],
        "cutoff": opts["cutoff"],
        "checks": checks,
        "counts": counts,
    }
