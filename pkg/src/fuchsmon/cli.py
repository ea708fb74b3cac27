"""Command-line frontend.

    fuchsmon [--digits D] [--order N] [--safety R] [--seed S]
             [--forms DIR] [--operators FILE] [--json OUT]
             <command> [arguments]

Commands
    scheme OP          Riemann scheme (singularities, exponents, types)
    monodromy OP       generator monodromies at the MUM point and at s
    dm OP              rational-basis data: d_A, K, exact M_0^B and M_s^B
    transition OP      transition matrices and the constrained-family fit
    lattice OP         monodromy images of the conifold period, Q-span rank
    identify OP        symbolic recognition of transition-matrix entries
    lvalue FORM        special values L(f,1..3) and modularity residuals
    reproduce NAME     recompute an embedded fixture and diff it

OP is the name of a shipped fixture operator (2.17, 6.15, 2.47), a name from
the --operators ingestion file, or a literal theta-form expression in t and T.
FORM is a shipped newform label (6_1, 8_1, 12_1, 32_2) or a coefficient file
path.  Reports are deterministic given (inputs, --seed, --digits): two runs
with the same configuration produce byte-identical JSON.

Exit codes: 0 success, 2 parse failure, 3 geometry failure, 4 precision
failure, 5 recognition failure, 6 fixture mismatch, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import mpmath as mp

from . import continuation, fixtures, lattice
from .dmbasis import Pipeline, qmatrix_str, rationalize_complex
from .errors import (FuchsmonError, GeometryError, ParseError,
                     RecognitionError)
from .frobenius import to_mpc
from .lseries import (functional_check, load_newform, modularity_residual,
                      special_values)
from .operators import parse_operator, parse_operator_file, riemann_scheme

SHIPPED_FORMS = ("6_1", "8_1", "12_1", "32_2")


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

def _num(x, digits, ident="unidentified"):
    """A reported number: decimal string plus identification tag."""
    if isinstance(x, (mp.mpf, mp.mpc)):
        s = mp.nstr(x, digits)
    elif isinstance(x, complex):
        with mp.workdps(digits):
            s = mp.nstr(mp.mpc(x), digits)
    else:
        s = str(x)
    return {"value": s, "id": ident}


def _matrix(M, digits, ident="unidentified"):
    return [[_num(M[i, j], digits, ident) for j in range(M.cols)]
            for i in range(M.rows)]


def emit_report(report, args):
    """JSON to --json (or stdout) plus a short human-readable summary."""
    text = json.dumps(report, indent=2, sort_keys=True, default=str)
    if args.json:
        Path(args.json).write_text(text + "\n")
        print("report written to %s" % args.json)
    else:
        print(text)


# ---------------------------------------------------------------------------
# input resolution
# ---------------------------------------------------------------------------

def resolve_operator(spec, operators_path=None):
    """(label, DifferentialOperator) from a name or a literal expression."""
    table = parse_operator_file(
        (fixtures.FIXTURE_DIR / "operators.txt").read_text())
    if operators_path:
        table.update(parse_operator_file(Path(operators_path).read_text()))
    if spec in table:
        return spec, table[spec]
    return "inline", parse_operator(spec)


def resolve_form(spec, forms_dir=None):
    base = Path(forms_dir) if forms_dir else fixtures.DATA_DIR
    cand = base / ("%s.txt" % spec)
    if cand.exists():
        return load_newform(cand, label=spec)
    if not Path(spec).exists():
        raise ParseError("no newform %r: not a shipped label (%s) and not "
                         "a coefficient file" % (spec,
                                                 ", ".join(SHIPPED_FORMS)))
    return load_newform(spec)


def _pipeline(args):
    label, op = resolve_operator(args.target, args.operators)
    target = args.singularity
    pipe = Pipeline(op, target=target, digits=args.digits, order=args.order)
    return label, pipe


def _config_echo(args, label=None):
    cfg = {"digits": args.digits, "order": args.order,
           "safety": args.safety, "seed": args.seed}
    if label is not None:
        cfg["operator"] = label
    return cfg


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_scheme(args):
    label, op = resolve_operator(args.target, args.operators)
    scheme = riemann_scheme(op)
    return {"command": "scheme", "config": _config_echo(args, label),
            "fuchs_relation_holds": scheme.fuchs_relation_holds,
            "singularities": [e.to_dict() for e in scheme.entries]}


def cmd_monodromy(args):
    label, pipe = _pipeline(args)
    d = args.digits
    report = {"command": "monodromy", "config": _config_echo(args, label),
              "s": str(pipe.s), "n": pipe.n,
              "basis": "normalized Frobenius at the MUM point",
              "M0": _matrix(pipe.M0_fm, d, "numeric (analytic continuation)"),
              "Ms": _matrix(pipe.Ms_fm, d, "numeric (analytic continuation)"),
              "Ms_local": _matrix(pipe.Ms_fc, d,
                                  "numeric (Jordan form expected)")}
    with mp.workdps(pipe.work):
        prod = pipe.M0_fm * pipe.Ms_fm
        # generator product = inverse of the monodromy at infinity
        report["product_M0_Ms"] = _matrix(
            prod, d, "numeric (inverse monodromy at infinity)")
    return report


def cmd_dm(args):
    label, pipe = _pipeline(args)
    dm = pipe.dm
    (d_inv, p_inv, a_inv), _res = pipe.mum_invariants()
    return {"command": "dm", "config": _config_echo(args, label),
            "s": str(pipe.s), "n": pipe.n,
            "d_A": {"value": dm.d_A, "id": "exact integer"},
            "K": {"value": str(dm.K), "id": "exact rational"},
            "M0_B": {"value": qmatrix_str(dm.M0_B_exact),
                     "id": "exact rational"},
            "Ms_B": {"value": qmatrix_str(dm.Ms_B_exact),
                     "id": "exact rational"},
            "expansion_invariants": {
                "d": {"value": d_inv, "id": "exact integer"},
                "p": {"value": p_inv, "id": "exact integer"},
                "a": {"value": a_inv, "id": "exact integer"}}}


def cmd_transition(args):
    label, pipe = _pipeline(args)
    d = args.digits
    report = {"command": "transition", "config": _config_echo(args, label),
              "s": str(pipe.s), "n": pipe.n}
    report["T_Fc_Fm"] = _matrix(pipe.transition_between_frobenius(), d)
    try:
        report["T_Fc_B"] = _matrix(pipe.transition_to_conifold(), d)
        report["T_B_Fm"] = _matrix(pipe.transition_to_mum(), d)
        report["d_A"] = {"value": pipe.dm.d_A, "id": "exact integer"}
    except GeometryError as exc:
        report["d_A"] = {"value": 0, "id": "exact integer"}
        report["note"] = str(exc)
        return report
    try:
        fit = pipe.classify()
        report["family"] = {"value": fit.family, "id": "exact"}
        report["family_params"] = {k: {"value": str(v), "id": "exact rational"}
                                   for k, v in fit.params.items()}
    except RecognitionError as exc:
        report["family"] = {"value": "none", "id": "not a real rational M_s^B"}
        report["note"] = str(exc)
    return report


def cmd_lattice(args):
    label, pipe = _pipeline(args)
    d = args.digits
    words = lattice.power_words(-3, 3)
    if args.words == "full":
        words = lattice.enumerate_words(2) + lattice.random_words(
            args.random_words, 4, args.seed)
    group = lattice.conifold_values(pipe, words, seed=args.seed)
    rep = lattice.q_span_rank(group)
    report = {"command": "lattice", "config": _config_echo(args, label),
              "s": str(pipe.s), "scope": group.scope,
              "rank": rep.as_dict()}
    values = []
    comm = None
    if args.form:
        f = resolve_form(args.form, args.forms)
        sv = special_values(f, args.digits)
        with mp.workdps(pipe.work):
            comm = lattice.commensurability_factors(
                group, sv.L1, sv.L2 / (2j * mp.pi))
    for (w, v) in group.values:
        wl = lattice.word_label(w)
        ident = "unidentified"
        if comm is not None and comm.get(wl):
            c1, c2 = comm[wl]
            ident = "%s * L(f,1) + %s * L(f,2)/(2 pi i)" % (c1, c2)
        values.append({"word": wl, **_num(v, d, ident)})
    report["values"] = values
    return report


# default monomial catalog for entry identification; names are fixture-style
# expressions over the base environment
CATALOG = ("1", "pi", "log2", "zeta3", "sqrt2", "pi**2", "pi*log2",
           "L1", "L2", "pi*L1", "pi*L2", "pi**2*L1", "pi**2*L2",
           "pi*L2*i", "pi**2/L2", "sqrt2*pi", "sqrt2*pi*L2", "sqrt2*pi**2/L2",
           "zeta3/pi**2", "zeta3*L2/pi**4", "L2/pi", "pi**4*L1", "zeta3*L2",
           "pi**2*zeta3")

# small PSLQ dictionaries tried per entry, after single monomials
COMBO_DICTS = (("1", "pi", "log2"),
               ("pi**2*L1", "pi*L2"),
               ("pi**2*L1*i", "pi*L2"),
               ("pi**2*L1", "pi*L2*i"),
               ("1", "pi", "log2", "zeta3", "pi*i"),
               ("pi**4*L1", "zeta3*L2", "pi**2*zeta3"))


def _identify_entry(x, env, names, field, digits):
    if not names:
        return None
    with mp.workdps(digits + 20):
        x = to_mpc(x)
        if abs(x) < mp.mpf(10) ** (-(digits - 30)):
            return "0"
        # single Gaussian-rational multiple of a catalog monomial
        for name in names:
            if name == "1":
                continue
            m = fixtures.eval_expr(name, env)
            try:
                re, im = rationalize_complex(x / m, 10 ** 6, dps=digits - 10)
            except RecognitionError:
                continue
            parts = []
            if re:
                parts.append("(%s)" % re)
            if im:
                parts.append("(%s)*i" % im)
            return " + ".join("%s*%s" % (p, name) for p in parts)
        # small linear combinations
        for combo in COMBO_DICTS:
            if not all(c in names or c == "1" for c in combo):
                continue
            dictionary = [(c, fixtures.eval_expr(c, env)) for c in combo]
            rec = lattice.recognize_constant(x, dictionary, field=field,
                                             bound=10 ** 6, dps=digits)
            if rec.identified and not rec.ambiguous:
                return rec.symbolic()
        return None


def cmd_identify(args):
    label, pipe = _pipeline(args)
    f = resolve_form(args.form, args.forms)
    sv = special_values(f, args.digits)
    env = fixtures.base_environment(sv.L1, sv.L2, pipe.work)
    names = tuple(CATALOG) if args.dictionary is None else tuple(
        n for n in args.dictionary.split(",") if n)
    try:
        T = pipe.transition_to_conifold()
        basis = "B"
    except GeometryError:
        T = pipe.transition_between_frobenius()
        basis = "Fm"
    d = args.digits
    rows, hits = [], 0
    for i in range(4):
        row = []
        for j in range(4):
            sym = _identify_entry(T[i, j], env, names, args.field, d)
            if sym is not None:
                hits += 1
            row.append({"value": mp.nstr(T[i, j], d),
                        "id": sym if sym is not None else "unidentified"})
        rows.append(row)
    report = {"command": "identify", "config": _config_echo(args, label),
              "s": str(pipe.s), "basis": basis, "form": f.label,
              "field": args.field, "dictionary": list(names),
              "entries": rows, "identified": hits}
    if hits == 0:
        exc = RecognitionError("no transition-matrix entry was identified "
                               "over the given dictionary")
        exc.report = report
        raise exc
    return report


def cmd_lvalue(args):
    f = resolve_form(args.target, args.forms)
    d = args.digits
    sv = special_values(f, d)
    with mp.workdps(d + 15):
        report = {
            "command": "lvalue", "config": _config_echo(args),
            "form": {"label": f.label, "level": f.level, "weight": f.weight,
                     "sign": f.sign, "ncoeffs": f.ncoeffs},
            "L1": _num(sv.L1, d, "L(f,1) by approximate functional equation"),
            "L2": _num(sv.L2, d, "L(f,2) by approximate functional equation"),
            "L3": _num(sv.L3, d, "L(f,3) by approximate functional equation"),
            "error_estimate": sv.error_estimate,
            "functional_relation_residual": mp.nstr(functional_check(f, min(d, 60)), 5),
            "modularity_residual": mp.nstr(modularity_residual(f, 40), 5)}
    return report


def cmd_reproduce(args):
    if args.list:
        return {"command": "reproduce",
                "fixtures": fixtures.list_fixtures()}
    if args.target is None:
        raise ParseError("reproduce needs a fixture name (or --list)")
    return {"command": "reproduce", "config": _config_echo(args),
            **fixtures.reproduce(args.target, digits=args.digits,
                                 order=args.order,
                                 operators_path=args.operators,
                                 forms_dir=args.forms)}


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="fuchsmon",
        description="Monodromy, rational bases and transition matrices of "
                    "order-4 Fuchsian operators with a MUM point and a 1/nC "
                    "singularity.")
    p.add_argument("--digits", type=int, default=120,
                   help="working precision in decimal digits (>= 60)")
    p.add_argument("--order", type=int, default=None,
                   help="series truncation order (default: from precision)")
    p.add_argument("--safety", type=float, default=None,
                   help="step-size safety ratio for continuation (0..1)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for randomized word sampling")
    p.add_argument("--forms", default=None, metavar="DIR",
                   help="directory of newform coefficient files")
    p.add_argument("--operators", default=None, metavar="FILE",
                   help="operator ingestion file (name | expression)")
    p.add_argument("--json", default=None, metavar="OUT",
                   help="write the JSON report to this path")
    sub = p.add_subparsers(dest="command", required=True)

    def op_command(name, fn, helptext):
        q = sub.add_parser(name, help=helptext)
        q.add_argument("target", help="operator name or theta-form expression")
        q.add_argument("--singularity", default=None,
                       help="location of the 1/nC point (default: first)")
        q.set_defaults(fn=fn)
        return q

    q = sub.add_parser("scheme", help="Riemann scheme of an operator")
    q.add_argument("target")
    q.set_defaults(fn=cmd_scheme)
    op_command("monodromy", cmd_monodromy, "generator monodromy matrices")
    op_command("dm", cmd_dm, "rational basis and exact monodromies")
    op_command("transition", cmd_transition,
               "transition matrices and family fit")
    q = op_command("lattice", cmd_lattice,
                   "conifold-period monodromy values and Q-span rank")
    q.add_argument("--words", choices=("L0", "full"), default="L0")
    q.add_argument("--random-words", type=int, default=10)
    q.add_argument("--form", default=None,
                   help="newform for commensurability factors")
    q = op_command("identify", cmd_identify,
                   "recognize transition-matrix entries symbolically")
    q.add_argument("--form", required=True)
    q.add_argument("--field", choices=("Q", "Q[i]", "Q[sqrt2,i]"),
                   default="Q[i]")
    q.add_argument("--dictionary", default=None,
                   help="comma-separated catalog names ('' for empty)")
    q = sub.add_parser("lvalue", help="special L-values of a weight-4 newform")
    q.add_argument("target", help="form label or coefficient file")
    q.set_defaults(fn=cmd_lvalue)
    q = sub.add_parser("reproduce",
                       help="recompute an embedded fixture and diff")
    q.add_argument("target", nargs="?", default=None,
                   help="fixture name, e.g. 2.17 (see --list)")
    q.add_argument("--list", action="store_true",
                   help="list available fixture names and exit")
    q.set_defaults(fn=cmd_reproduce)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.digits < 60:
        print("fuchsmon: --digits must be at least 60", file=sys.stderr)
        return 2
    if args.safety is not None:
        if not 0 < args.safety < 1:
            print("fuchsmon: --safety must be in (0, 1)", file=sys.stderr)
            return 2
        continuation.SAFETY_RATIO = args.safety
    try:
        report = args.fn(args)
    except FuchsmonError as exc:
        print("fuchsmon: %s" % exc, file=sys.stderr)
        report = getattr(exc, "report", None)
        if report is not None:
            emit_report(report, args)
        return exc.exit_code
    emit_report(report, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
