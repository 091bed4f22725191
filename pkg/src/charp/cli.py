"""The ``ca`` command line: session inspection, invariants, limit reports,
and the theorem-check suite.

Exit codes: 0 success / no failing check, 1 a check failed, 2 input error,
3 resource cap hit (degree cap, cutoff, or search budget).
"""

import argparse
import sys

from .errors import CAError, ParseError
from .frobmult import associativity_check, chi_infinity, e_infinity, find_sop
from .groebner import INFINITE, Ideal
from .harness import dumps_report, load_session, run_all, verify
from .koszul import be_exactness, chi, koszul_homology_lengths, tor_lengths
from .modcalc import DEFAULT_CUTOFF
from .polycore import format_poly

RESOURCE_CODES = ("E_DEGREE_LIMIT", "E_PD_CUTOFF", "E_TRIES_EXHAUSTED")


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except CAError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return 3 if exc.code in RESOURCE_CODES else 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ca", description="graded commutative algebra engine over F_p"
    )
    sub = parser.add_subparsers(dest="command")

    def cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("session", help="session JSON file")
        sp.add_argument("--format", choices=["json", "text"], default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--nmax", type=int, default=None)
        sp.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
        sp.add_argument("--degree-cap", type=int, default=None)
        sp.set_defaults(func=func)
        return sp

    cmd("info", _cmd_info, "summarize a session")

    sp = cmd("gb", _cmd_gb, "reduced Groebner basis of a named (or the defining) ideal")
    sp.add_argument("--ideal", default=None)

    sp = cmd("invariants", _cmd_invariants, "module invariants as one JSON object")
    sp.add_argument("module")

    sp = cmd("resolution", _cmd_resolution, "free resolution ranks, shifts, matrices")
    sp.add_argument("module")
    sp.add_argument("--over", choices=["A", "R"], default="A")

    sp = cmd("koszul", _cmd_koszul, "Koszul homology lengths and Euler characteristic")
    sp.add_argument("module")
    sp.add_argument("--seq", required=True)

    sp = cmd("chi", _cmd_chi, "intersection multiplicity chi(M, A/J)")
    sp.add_argument("module")
    sp.add_argument("--ideal", required=True)

    sp = cmd("chi-inf", _cmd_chi_inf, "normalized chi of Frobenius powers")
    sp.add_argument("module")
    sp.add_argument("--seq", default=None)
    sp.add_argument("--ideal", default=None)
    sp.add_argument("--auto-sop", action="store_true")

    sp = cmd("e-inf", _cmd_e_inf, "normalized multiplicities of Frobenius powers")
    sp.add_argument("module")
    sp.add_argument("--seq", default=None)
    sp.add_argument("--auto-sop", action="store_true")
    sp.add_argument("--recompute", action="store_true",
                    help="resolve each Frobenius power from scratch")

    sp = cmd("sop", _cmd_sop, "search for a certified system of parameters")
    sp.add_argument("module")
    sp.add_argument("--max-tries", type=int, default=200)

    sp = cmd("assoc", _cmd_assoc, "additivity of e across user-supplied primes")
    sp.add_argument("module")
    sp.add_argument("--seq", required=True)
    sp.add_argument("--primes", required=True, help="comma-separated prime names")

    sp = cmd("exactness", _cmd_exactness, "Buchsbaum-Eisenbud exactness report")
    sp.add_argument("--complex", dest="complex_name", required=True)
    sp.add_argument("--points", type=int, default=8)

    sp = cmd("verify", _cmd_verify, "run one named check on one module")
    sp.add_argument("--check", required=True)
    sp.add_argument("--module", required=True)
    sp.add_argument("--ideal", default=None)
    sp.add_argument("--seq", default=None)

    cmd("run-all", _cmd_run_all, "run every applicable check on every module")
    return parser


def _load(args):
    return load_session(args.session, degree_cap=args.degree_cap)


def _emit(args, payload, default="json", text_renderer=None):
    fmt = args.format or default
    if fmt == "json":
        sys.stdout.write(dumps_report(payload))
    else:
        if text_renderer is None:
            sys.stdout.write(dumps_report(payload))
        else:
            text_renderer(payload)
    return 0


def _cmd_info(args):
    s = _load(args)
    payload = {
        "characteristic": s.qring.p,
        "variables": list(s.ring.variables),
        "ideal": [format_poly(g) for g in s.qring.ideal.gens],
        "dim": s.qring.d,
        "depth": s.qring.depth,
        "equidimensional": s.qring.equidimensional,
        "modules": sorted(s.modules),
        "sequences": sorted(s.sequences),
        "ideals": sorted(s.ideals),
        "complexes": sorted(s.complexes),
        "primes": sorted(s.primes),
    }

    def text(p):
        print(f"F_{p['characteristic']}[{', '.join(p['variables'])}]"
              f" / ({', '.join(p['ideal']) or '0'})")
        print(f"dim A = {p['dim']}, depth A = {p['depth']},"
              f" equidimensional = {p['equidimensional']}")
        for key in ("modules", "sequences", "ideals", "complexes", "primes"):
            if p[key]:
                print(f"{key}: {', '.join(p[key])}")

    return _emit(args, payload, default="text", text_renderer=text)


def _cmd_gb(args):
    s = _load(args)
    if args.ideal is None:
        gens = list(s.qring.ideal.gens)
    elif args.ideal in s.ideals:
        gens = list(s.qring.ideal.gens) + list(s.ideals[args.ideal])
    else:
        raise ParseError(f"unknown ideal {args.ideal!r}")
    basis = Ideal(s.ring, gens, s.qring.degree_cap).groebner()
    lines = [format_poly(g) for g in basis]

    def text(p):
        for line in p:
            print(line)

    return _emit(args, lines, default="text", text_renderer=text)


def _cmd_invariants(args):
    s = _load(args)
    M = _module(s, args.module)
    pd_a = M.pd("A", args.cutoff)
    payload = {
        "dim": M.dimension(),
        "codim": M.codim(),
        "depth": M.depth(),
        "pd_A": pd_a,
        "pd_R": M.pd("R"),
        "grade": M.grade(),
        "ann": [format_poly(g) for g in M.annihilator().groebner()],
        "length": M.length(),
    }
    return _emit(args, payload)


def _cmd_resolution(args):
    s = _load(args)
    M = _module(s, args.module)
    res = M.resolution(args.over, args.cutoff)
    cx = res.complex
    payload = {
        "over": args.over,
        "ranks": cx.ranks,
        "shifts": cx.shifts,
        "complete": res.complete,
        "minimal": res.minimal,
        "pd": res.pd(),
        "matrices": [
            [[format_poly(e) for e in row] for row in cx.d(k)]
            for k in range(1, cx.length + 1)
        ],
    }

    def text(p):
        print(f"ranks: {p['ranks']}  complete: {p['complete']}  pd: {p['pd']}")
        print(f"shifts: {p['shifts']}")
        for k, mat in enumerate(p["matrices"], start=1):
            print(f"d_{k}:")
            for row in mat:
                print("  [" + ", ".join(row) + "]")

    return _emit(args, payload, default="text", text_renderer=text)


def _cmd_koszul(args):
    s = _load(args)
    M = _module(s, args.module)
    seq = _sequence(s, args.seq)
    lengths = koszul_homology_lengths(seq, M, args.cutoff)
    finite = all(l != INFINITE for l in lengths)
    euler = None
    if finite:
        euler = sum(l if t % 2 == 0 else -l for t, l in enumerate(lengths))
    payload = {
        "sequence": [format_poly(x) for x in seq],
        "homology_lengths": lengths,
        "euler": euler,
    }
    return _emit(args, payload)


def _cmd_chi(args):
    s = _load(args)
    M = _module(s, args.module)
    gens = _ideal(s, args.ideal)
    value = chi(M, gens, args.cutoff)
    res = M.resolution("A", args.cutoff)
    payload = {
        "ideal": args.ideal,
        "tor_lengths": tor_lengths(res.complex, gens),
        "chi": value,
    }
    return _emit(args, payload)


def _cmd_chi_inf(args):
    s = _load(args)
    M = _module(s, args.module)
    if args.auto_sop:
        seq = find_sop(M, seed=args.seed, cutoff=args.cutoff)
        report = chi_infinity(M, seq=seq, nmax=args.nmax, cutoff=args.cutoff)
    elif args.seq is not None:
        report = chi_infinity(M, seq=_sequence(s, args.seq), nmax=args.nmax,
                              cutoff=args.cutoff)
    elif args.ideal is not None:
        report = chi_infinity(M, ideal_gens=_ideal(s, args.ideal), nmax=args.nmax,
                              cutoff=args.cutoff)
    else:
        print("error: chi-inf needs --seq, --ideal, or --auto-sop", file=sys.stderr)
        return 2
    return _emit(args, report.to_dict())


def _cmd_e_inf(args):
    s = _load(args)
    M = _module(s, args.module)
    if args.auto_sop:
        seq = find_sop(M, seed=args.seed, cutoff=args.cutoff)
    elif args.seq is not None:
        seq = _sequence(s, args.seq)
    else:
        print("error: e-inf needs --seq or --auto-sop", file=sys.stderr)
        return 2
    report = e_infinity(M, seq, nmax=args.nmax, cutoff=args.cutoff,
                        recompute=args.recompute)
    return _emit(args, report.to_dict())


def _cmd_sop(args):
    s = _load(args)
    M = _module(s, args.module)
    seq = find_sop(M, seed=args.seed, max_tries=args.max_tries, cutoff=args.cutoff)
    payload = {
        "elements": [format_poly(x) for x in seq.elements],
        "certificates": seq.certificates(),
    }
    return _emit(args, payload)


def _cmd_assoc(args):
    s = _load(args)
    M = _module(s, args.module)
    seq = _sequence(s, args.seq)
    primes = []
    for name in args.primes.split(","):
        name = name.strip()
        if name not in s.primes:
            raise ParseError(f"unknown prime datum {name!r}")
        primes.append(s.primes[name])
    nmax = args.nmax if args.nmax is not None else 2
    report = associativity_check(M, seq, primes, nmax, args.cutoff)
    _emit(args, report)
    return 0 if report["all_equal"] else 1


def _cmd_exactness(args):
    s = _load(args)
    if args.complex_name not in s.complexes:
        raise ParseError(f"unknown complex {args.complex_name!r}")
    C = s.complexes[args.complex_name]
    report = be_exactness(C, seed=args.seed, points=args.points)
    return _emit(args, report.to_dict())


def _cmd_verify(args):
    s = _load(args)
    options = {
        "seed": args.seed,
        "nmax": args.nmax,
        "cutoff": args.cutoff,
        "ideal": args.ideal,
        "seq": args.seq,
    }
    result = verify(s, args.check, args.module, options)
    _emit(args, result)
    return 1 if result["status"] == "fail" else 0


def _cmd_run_all(args):
    s = _load(args)
    report = run_all(s, {"seed": args.seed, "nmax": args.nmax, "cutoff": args.cutoff})

    def text(p):
        for c in p["checks"]:
            line = f"{c['module']:>8}  {c['check']:<14} {c['status']}"
            if c.get("reason"):
                line += f"  ({c['reason']})"
            print(line)
        print("counts:", p["counts"])

    _emit(args, report, default="json", text_renderer=text)
    return 1 if report["counts"]["fail"] else 0


def _module(session, name):
    if name not in session.modules:
        raise ParseError(f"unknown module {name!r}")
    return session.modules[name]


def _sequence(session, name):
    if name not in session.sequences:
        raise ParseError(f"unknown sequence {name!r}")
    return session.sequences[name]


def _ideal(session, name):
    if name not in session.ideals:
        raise ParseError(f"unknown ideal {name!r}")
    return session.ideals[name]


if __name__ == "__main__":
    sys.exit(main())
