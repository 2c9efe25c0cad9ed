"""Command line front end: ``lcseries <command> [presentation] [flags]``.

Exit codes: 0 success, 1 usage or input error, 2 internal invariant
violation (a containment that must hold failed, which means a bug).
"""
from __future__ import annotations

import argparse
import io
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import linalg
from .chardec import CharacterError, character_of, decompose, kerchev_bound
from .forms import even_form_dim, fs_kernel, fs_rank
from .hilbert import fit_series, format_fit
from .lcs import InvariantViolation, LCSEngine, MemoryGuardError, Presentation, PresentationError, dim_table, verify_containments
from .parser import ParseError, format_presentation, load_presentation
from .star import max_weight_shift, positive_weight_witnesses, standard_fiber, x2sq_witness

SCHEMA_VERSION = "1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# ----------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("presentation", nargs="?", help="presentation file (default: free algebra, see --free)")
    src.add_argument("--free", type=int, metavar="N", help="use the free algebra on N degree-1 generators (default 2)")
    common.add_argument("--kmax", type=int, default=3)
    common.add_argument("--maxdeg", type=int, default=None, metavar="D")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--report-dir", metavar="DIR", help="directory for reports; --out is resolved inside it")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)

    p = _Parser(prog="lcseries", description="Lower central series invariants of graded presentations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("dims", parents=[common], help="dimensions of L_k, M_k, B_k, N_k per degree")
    f = sub.add_parser("fiber", parents=[common], help="standard fiber St(N_k) and its Schur decomposition")
    f.add_argument("--k", type=int, required=True)
    sub.add_parser("verify", parents=[common], help="exhaustive containment checks")
    h = sub.add_parser("hilbert", parents=[common], help="rational fits of the N_k Hilbert series")
    h.add_argument("--k", type=int, default=None, help="single k (default: 2..kmax)")
    sub.add_parser("fs-check", parents=[common], help="compare A/M_3 with even forms")
    return p


def _presentation(args) -> Presentation:
    if args.presentation:
        try:
            return load_presentation(args.presentation)
        except OSError as e:
            raise UsageError(f"cannot read {args.presentation}: {e.strerror}") from e
    n = 2 if args.free is None else args.free
    if n < 1:
        raise UsageError("--free needs N >= 1")
    return Presentation.free(n)


def _describe(P: Presentation) -> dict:
    return {
        "generators": [{"name": g.name, "degree": g.degree} for g in P.generators],
        "relations": [[[" ".join(P.names[i] for i in w), rational(c)] for w, c in r] for r in P.relations],
        "text": format_presentation(P),
    }


# ----------------------------------------------------------------------
# commands; each returns (report dict, tsv header, tsv rows, exit code)


def cmd_dims(args, P):
    D = 6 if args.maxdeg is None else args.maxdeg
    tab = dim_table(P, args.kmax, D, LCSEngine(P))
    rows = list(tab.rows())
    rep = {
        "kmax": args.kmax, "maxdeg": D,
        "rows": [dict(zip(("k", "d", "dimL", "dimM", "dimB", "dimN"), r)) for r in rows],
    }
    return rep, ("k", "d", "dimL", "dimM", "dimB", "dimN"), rows, 0


def cmd_fiber(args, P):
    if not P.is_free:
        raise UsageError("fiber needs a free presentation")
    if args.k < 2:
        raise UsageError("--k must be >= 2")
    n, k = P.n, args.k
    bound = kerchev_bound(k, n)
    D = min(bound + 2, 8) if args.maxdeg is None else args.maxdeg
    fib = standard_fiber(P, k, D)
    dec = decompose(character_of(fib))
    mult = dec.as_strings()
    witnesses = positive_weight_witnesses(fib)
    over = [lam for lam in dec.multiplicities if sum(lam) > bound]
    basis = []
    for d in sorted(fib.perdegree):
        for w, v in zip(fib.weights[d], fib.basis(d)):
            basis.append({"degree": d, "weight": list(w), "element": v.format(P.names)})
    rep = {
        "k": k, "maxdeg": D,
        "dims": {str(d): m for d, m in fib.dims().items() if m},
        "totaldim": fib.totaldim,
        "stable": fib.stable,
        "multiplicities": mult,
        "schur_dim": dec.dim,
        "basis": basis,
        "nonsplit": bool(witnesses),
        "witnesses": [
            {"exponent": list(w.field[0]), "index": w.field[1], "degree": w.degree,
             "source": w.source_index, "image": [rational(x) for x in w.image]}
            for w in witnesses
        ],
        "max_weight_shift": max_weight_shift(fib) if witnesses else 0,
        "degree_bound": bound,
        "degree_bound_ok": not over,
    }
    if k == 3 and n >= 2 and D >= 4:
        rep["x2sq_witness"] = x2sq_witness(fib)
    rows = [("totaldim", "", fib.totaldim), ("stable", "", _tsv_bool(fib.stable))]
    rows += [("dim", d, m) for d, m in rep["dims"].items()]
    rows += [("multiplicity", lam, m) for lam, m in mult.items()]
    rows += [("nonsplit", "", _tsv_bool(rep["nonsplit"])), ("degree_bound", "", bound),
             ("degree_bound_ok", "", _tsv_bool(not over))]
    for key, val in rep.get("x2sq_witness", {}).items():
        rows.append(("x2sq_witness", key, _tsv_bool(val)))
    return rep, ("field", "key", "value"), rows, 0


def cmd_verify(args, P):
    D = 6 if args.maxdeg is None else args.maxdeg
    report = verify_containments(P, D, LCSEngine(P), seed=args.seed)
    entries = [{"check": e.name, "degree": e.degree, "vectors": e.checked, "result": "PASS" if e.passed else "FAIL"}
               for e in report.entries]
    rep = {"maxdeg": D, "seed": args.seed, "ok": report.ok, "entries": entries}
    rows = [(e["check"], e["degree"], e["vectors"], e["result"]) for e in entries]
    return rep, ("check", "degree", "vectors", "result"), rows, 0 if report.ok else 2


def cmd_hilbert(args, P):
    D = 8 if args.maxdeg is None else args.maxdeg
    ks = [args.k] if args.k is not None else list(range(2, args.kmax + 1))
    if any(k < 1 for k in ks):
        raise UsageError("k must be >= 1")
    tab = dim_table(P, max(ks), D, LCSEngine(P))
    fits, rows = [], []
    for k in ks:
        dims = tab.series("N", k)
        fit = fit_series(dims, P.generators, D)
        num, facs = fit.reduced()
        roundtrip = fit.expand(D) == [dims[d] for d in range(D + 1)]
        fits.append({
            "k": k, "dims": [dims[d] for d in range(D + 1)],
            "numerator": list(fit.numerator), "exponent": fit.exponent,
            "gen_degrees": list(fit.gen_degrees), "stable": fit.stable,
            "reduced_numerator": num, "reduced_factors": [list(f) for f in facs],
            "formula": format_fit(fit), "roundtrip": roundtrip,
        })
        rows.append((k, format_fit(fit), fit.exponent, _tsv_bool(fit.stable), _tsv_bool(roundtrip),
                     " ".join(str(dims[d]) for d in range(D + 1))))
    rep = {"maxdeg": D, "fits": fits}
    return rep, ("k", "series", "exponent", "stable", "roundtrip", "dims"), rows, 0


def cmd_fs_check(args, P):
    if not P.is_free or any(d != 1 for d in P.degrees):
        raise UsageError("fs-check needs a free presentation with degree-1 generators")
    D = 6 if args.maxdeg is None else args.maxdeg
    n = P.n
    eng = LCSEngine(P)
    out, rows, ok = [], [], True
    for d in range(D + 1):
        words = eng.ncols(d) - eng.M(3, d).dim
        forms = even_form_dim(n, d)
        rank = fs_rank(n, d, eng.index)
        same = fs_kernel(n, d, eng.index) == eng.M(3, d)
        good = words == forms == rank and same
        ok &= good
        out.append({"d": d, "dim_words": words, "dim_forms": forms, "fs_rank": rank,
                    "kernel_equals_M3": same, "result": "PASS" if good else "FAIL"})
        rows.append((d, words, forms, rank, _tsv_bool(same), "PASS" if good else "FAIL"))
    rep = {"maxdeg": D, "n": n, "ok": ok, "degrees": out}
    return rep, ("d", "dim_words", "dim_forms", "fs_rank", "kernel_equals_M3", "result"), rows, 0 if ok else 2


COMMANDS = {"dims": cmd_dims, "fiber": cmd_fiber, "verify": cmd_verify, "hilbert": cmd_hilbert, "fs-check": cmd_fs_check}


# ----------------------------------------------------------------------
# output


def _tsv_bool(b) -> str:
    return "true" if b else "false"


def render(command: str, P: Presentation, rep: dict, header, rows, fmt: str) -> str:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "presentation": _describe(P)}
        doc.update(rep)
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    buf.write("\t".join(header) + "\n")
    for r in rows:
        buf.write("\t".join(str(x) for x in r) + "\n")
    return buf.getvalue()


def _destination(args) -> Path | None:
    if args.report_dir:
        base = Path(args.report_dir)
        base.mkdir(parents=True, exist_ok=True)
        return base / (args.out or f"{args.command}.{args.format}")
    return Path(args.out) if args.out else None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.kmax < 1:
            raise UsageError("--kmax must be >= 1")
        if args.maxdeg is not None and args.maxdeg < 1:
            raise UsageError("--maxdeg must be >= 1")
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        linalg.set_threads(args.threads)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            P = _presentation(args)
        for w in caught:
            print(f"lcseries: warning: {w.message}", file=sys.stderr)
        rep, header, rows, code = COMMANDS[args.command](args, P)
        text = render(args.command, P, rep, header, rows, args.format)
        dest = _destination(args)
        if dest is None:
            sys.stdout.write(text)
        else:
            dest.write_text(text, encoding="utf-8")
        return code
    except (UsageError, ParseError, PresentationError, MemoryGuardError) as e:
        print(f"lcseries: error: {e}", file=sys.stderr)
        return 1
    except (InvariantViolation, CharacterError) as e:
        print(f"lcseries: invariant violation: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
