"""Command-line front end.

Every run prints one JSON object on stdout (``command``, ``inputs``,
``limits``, ``result``) and a short human summary plus wall time on stderr.
``--manifest PATH`` also writes the object with the argv and timing, and
``hypercomb replay PATH`` re-runs it and checks the output is identical.

Exit codes: 0 ok, 1 domain error, 2 usage error, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import density, intsets, jin, prcalc, ramsey, strcalc, structure
from ._parallel import default_threads
from .errors import HypercombError, ResourceLimitExceeded, SpecSyntaxError

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

# options that change how, not what, is computed; kept out of the echoed inputs
_EXECUTION_OPTS = ("threads", "manifest")


class UsageError(Exception):
    pass


# -- argument parsing helpers -------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _interval(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}")


def _set_spec(text: str):
    try:
        return intsets.parse_set_spec(text)
    except SpecSyntaxError as exc:
        raise UsageError(str(exc))


def _window(s, interval, limits):
    lo, hi = interval
    if lo > hi:
        raise UsageError(f"empty window {lo}..{hi}")
    return intsets.window(s, lo, hi, limits["max_window"])


def _read_lines(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            return [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")


# -- subcommand handlers ------------------------------------------------------

def cmd_density(args, limits):
    s = _set_spec(args.spec)
    out = {"set": intsets.render(s)}
    for name, rep in density.density_summary(s).items():
        out[name] = rep.to_json() if rep else None
    if args.window is not None:
        if args.L is None:
            raise UsageError("--window needs --L")
        w = _window(s, args.window, limits)
        x, value = density.best_window_density(w, args.L)
        start, run = intsets.longest_run(w)
        try:
            gap = intsets.max_gap(w)
        except HypercombError:
            gap = None
        out["window"] = {
            "lo": w.lo, "hi": w.hi, "members": sum(w.bits),
            "best": {"x": x, "interval": [x + 1, x + args.L],
                     "value": {"num": value.numerator, "den": value.denominator}},
            "max_gap": gap, "longest_run": [start, run],
        }
    summary = ", ".join(f"{k}={v['value']['num']}/{v['value']['den']}"
                        for k, v in out.items() if isinstance(v, dict) and "value" in v)
    return out, summary


def cmd_classify(args, limits):
    s = _set_spec(args.spec)
    if not isinstance(s, intsets.EventuallyPeriodic):
        raise HypercombError("classify needs an eventually periodic set")
    c = structure.classify_ep(s)
    return {"set": intsets.render(s), "thick": c.thick, "syndetic": c.syndetic, "ps": c.ps}, str(c)


def cmd_ps(args, limits):
    s = _set_spec(args.spec)
    w = _window(s, args.window, limits)
    wit = structure.is_ps_window(w, args.k, args.L)
    out = {"set": intsets.render(s), "witness": wit.to_json() if wit else None}
    return out, f"witness {wit.interval if wit else None}"


def cmd_embed(args, limits):
    Y = _set_spec(args.Y)
    F = sorted(set(args.F))
    if not F:
        raise UsageError("--F must be non-empty")
    if 2 * args.bound + F[-1] - F[0] + 1 > limits["max_window"]:
        raise ResourceLimitExceeded("shift search window exceeds --max-window")
    shift = structure.finite_embeds(F, Y, args.bound)
    out = {
        "F": F, "Y": intsets.render(Y), "bound": args.bound,
        "shift": shift.t if shift else None,
        "decision": structure.embeds_decision(F, Y),
        "shift_count": structure.count_shifts(F, Y, args.bound),
        "difference_property": (structure.fe_difference_property(F, Y, args.bound)
                                if shift else None),
    }
    return out, f"shift {out['shift']}"


def cmd_jin(args, limits):
    s = _set_spec(args.spec)
    if args.M < 1:
        raise UsageError("--M must be positive")
    w = _window(s, (1, args.M), limits)
    cert = jin.jin_xi_search(w, args.k, args.beta, args.threads)
    trace = None if cert else jin.jin_stepping_refuter(w, args.k, args.beta, args.threads)
    out = {
        "set": intsets.render(s), "M": args.M, "k": args.k, "beta": str(args.beta),
        "certificate": cert.to_json() if cert else None,
        "embed_check": jin.jin_embed_check(cert, s) if cert else None,
        "refutation": trace.to_json() if trace else None,
    }
    return out, f"xi={cert.xi}" if cert else f"refuted in {len(trace.steps)} steps"


def cmd_clique(args, limits):
    triples = []
    for ln in _read_lines(args.coloring):
        try:
            i, j, c = (int(x) for x in ln.split())
        except ValueError:
            raise UsageError(f"bad pair-colouring line {ln!r}; expected 'i j c'")
        triples.append((i, j, c))
    pc = ramsey.PairColoring.from_triples(triples, args.r)
    H, color = ramsey.ramsey_greedy(pc)
    out = {"N": pc.N, "r": pc.r, "H": H, "color": color, "size": len(H),
           "verified": ramsey.is_monochromatic(pc, H) == color}
    return out, f"|H|={len(H)} colour {color}"


def cmd_ap3(args, limits):
    try:
        colors = [int(ln) for ln in _read_lines(args.coloring)]
    except ValueError:
        raise UsageError("colouring file must hold one integer colour per line")
    ap = ramsey.find_mono_3ap(colors)
    return {"N": len(colors), "ap": list(ap) if ap else None}, f"ap {ap}"


def _equation(args):
    if args.square:
        return prcalc.SumEqualsSquare()
    if args.c is None:
        raise UsageError("give --c or --square")
    try:
        return prcalc.Linear(tuple(args.c))
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_rado(args, limits):
    if 0 in args.c:
        raise UsageError("coefficients must be non-zero")
    F = prcalc.rado_condition(args.c)
    out = {"c": args.c, "rado_subset": list(F) if F else None, "partition_regular": F is not None}
    return out, f"Rado subset {F}"


def cmd_search(args, limits):
    e = _equation(args)
    stats: dict = {}
    col = prcalc.search_avoiding_coloring(
        e, args.r, args.N, args.injective, max_nodes=limits["max_search_nodes"],
        time_budget=limits["time_budget"], threads=args.threads, stats=stats)
    out = {
        "equation": str(e), "r": args.r, "N": args.N, "injective": args.injective,
        "coloring": list(col.assign) if col else None,
        "exhausted": col is None, "nodes": stats["nodes"],
    }
    return out, "avoiding colouring found" if col else "every colouring has a monochromatic solution"


def cmd_solve(args, limits):
    e = _equation(args)
    colors = [int(x) for x in args.coloring]
    col = prcalc.Coloring(len(colors), max(colors, default=1), tuple(colors))
    sol = prcalc.find_mono_solution(e, col, args.injective)
    return {"equation": str(e), "solution": list(sol) if sol else None}, f"solution {sol}"


def cmd_quintic(args, limits):
    scan = prcalc.quintic_scan(args.N)
    return scan.to_json(), f"{scan.count} non-trivial monochromatic solutions"


def cmd_coeffs(args, limits):
    try:
        sol = prcalc.injective_pr_coeffs(args.c)
    except ValueError as exc:
        raise UsageError(str(exc))
    mat = prcalc.build_mu_matrix(args.c, sol)
    return {"solution": sol.to_json(), "matrix": mat.to_json()}, f"a={sol.a}"


def cmd_canon(args, limits):
    s = tuple(args.string)
    return ({"input": list(s), "canonical": list(strcalc.canonical_form(s))},
            strcalc.format_string(strcalc.canonical_form(s)))


def cmd_eq(args, limits):
    s, t = tuple(args.s), tuple(args.t)
    eq = strcalc.equivalent(s, t)
    out = {"equivalent": eq,
           "canonical": [list(strcalc.canonical_form(s)), list(strcalc.canonical_form(t))]}
    return out, "equivalent" if eq else "not equivalent"


# -- parser -------------------------------------------------------------------

def _common(sub: bool) -> argparse.ArgumentParser:
    d = argparse.SUPPRESS if sub else None
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("execution and limits")
    g.add_argument("--threads", type=int, default=d,
                   help="worker processes for searches (env HYPERCOMB_THREADS)")
    g.add_argument("--max-window", type=int, default=d, help="largest window, default 10^7")
    g.add_argument("--max-nodes", type=int, default=d, help="search node budget, default 10^8")
    g.add_argument("--time-budget", type=float, default=d, help="seconds; unlimited by default")
    g.add_argument("--manifest", default=d, help="also write the run manifest to this file")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(sub=True)
    parser = argparse.ArgumentParser(
        prog="hypercomb", parents=[_common(sub=False)],
        description="Densities, syndeticity, partition regularity and coefficient strings.",
        epilog="Lists starting with a minus sign need '=' (e.g. --c=-1,2,-1) or a preceding '--'.")
    subs = parser.add_subparsers(dest="cmd", required=True, metavar="COMMAND")

    def leaf(container, name, func, help_):
        p = container.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(func=func, command=name)
        return p

    p = leaf(subs, "density", cmd_density, "exact densities of a set, optional window scan")
    p.add_argument("spec")
    p.add_argument("--window", type=_interval, help="lo..hi")
    p.add_argument("--L", type=int, help="subwindow length for the best-window scan")

    st = subs.add_parser("structure", help="thick / syndetic / PS structure and embeddings")
    st_subs = st.add_subparsers(dest="sub", required=True, metavar="SUBCOMMAND")
    p = leaf(st_subs, "classify", cmd_classify, "thick/syndetic/PS of an eventually periodic set")
    p.add_argument("spec")
    p = leaf(st_subs, "ps", cmd_ps, "find a gap-bounded window")
    p.add_argument("spec")
    p.add_argument("--window", type=_interval, required=True)
    p.add_argument("-k", type=int, required=True, help="gap bound")
    p.add_argument("-L", type=int, required=True, help="minimum witness length")
    for container in (st_subs, subs):
        p = leaf(container, "embed", cmd_embed, "shift a finite set into another set")
        p.add_argument("--F", type=_int_list, required=True)
        p.add_argument("--Y", required=True)
        p.add_argument("--bound", type=int, required=True)

    p = leaf(subs, "jin", cmd_jin, "prefix-density start search or stepping refutation")
    p.add_argument("--spec", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--beta", type=_fraction, required=True)

    rm = subs.add_parser("ramsey", help="monochromatic cliques and 3-APs")
    rm_subs = rm.add_subparsers(dest="sub", required=True, metavar="SUBCOMMAND")
    p = leaf(rm_subs, "clique", cmd_clique, "greedy monochromatic set for a pair colouring")
    p.add_argument("--coloring", required=True, help="file of 'i j c' lines")
    p.add_argument("-r", type=int, default=2)
    p = leaf(rm_subs, "ap3", cmd_ap3, "least monochromatic 3-term progression")
    p.add_argument("--coloring", required=True, help="file with the colour of i on line i")

    pr = subs.add_parser("pr", help="partition regularity of equations")
    pr_subs = pr.add_subparsers(dest="sub", required=True, metavar="SUBCOMMAND")
    p = leaf(pr_subs, "rado", cmd_rado, "Rado's condition for one linear equation")
    p.add_argument("--c", type=_int_list, required=True)
    p = leaf(pr_subs, "search", cmd_search, "search a colouring avoiding monochromatic solutions")
    p.add_argument("--c", type=_int_list)
    p.add_argument("--square", action="store_true", help="use x + y = z^2")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--injective", action="store_true")
    p = leaf(pr_subs, "solve", cmd_solve, "least monochromatic solution under a colouring")
    p.add_argument("--c", type=_int_list)
    p.add_argument("--square", action="store_true")
    p.add_argument("--coloring", type=_int_list, required=True, help="colours of 1..N")
    p.add_argument("--injective", action="store_true")
    p = leaf(pr_subs, "quintic", cmd_quintic, "scan x + y = z^2 under the base-5 colouring")
    p.add_argument("-N", type=int, required=True)
    p = leaf(pr_subs, "coeffs", cmd_coeffs, "coefficients and rows for a zero-sum equation")
    p.add_argument("--c", type=_int_list, required=True)

    sc = subs.add_parser("strings", help="coefficient string equivalence")
    sc_subs = sc.add_subparsers(dest="sub", required=True, metavar="SUBCOMMAND")
    p = leaf(sc_subs, "canon", cmd_canon, "canonical form")
    p.add_argument("string", type=_int_list)
    p = leaf(sc_subs, "eq", cmd_eq, "decide equivalence")
    p.add_argument("s", type=_int_list)
    p.add_argument("t", type=_int_list)

    p = subs.add_parser("replay", help="re-run a manifest and compare its output")
    p.add_argument("path")
    p.add_argument("--threads", type=int)
    p.set_defaults(command="replay")
    return parser


# -- dispatch -----------------------------------------------------------------

def _strip_execution_opts(argv: Sequence[str]) -> list[str]:
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        name = tok.split("=", 1)[0]
        if name in ("--threads", "--manifest"):
            skip = "=" not in tok
            continue
        out.append(tok)
    return out


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _emit(obj):
    sys.stdout.write(_dumps(obj) + "\n")
    sys.stdout.flush()


def _limits(args) -> dict:
    return {
        "max_window": args.max_window or intsets.DEFAULT_MAX_WINDOW,
        "max_search_nodes": args.max_nodes or prcalc.DEFAULT_MAX_NODES,
        "time_budget": args.time_budget,
    }


def _fill_defaults(args):
    for name in ("threads", "max_window", "max_nodes", "time_budget", "manifest"):
        if not hasattr(args, name):
            setattr(args, name, None)
    if args.threads is None:
        args.threads = default_threads()


def _inputs(args) -> dict:
    skip = {"func", "command", "cmd", "sub", "max_window", "max_nodes", "time_budget",
            *_EXECUTION_OPTS}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = str(v) if isinstance(v, Fraction) else list(v) if isinstance(v, tuple) else v
    return out


def run(argv: Sequence[str]) -> tuple[int, Optional[dict]]:
    """Parse and execute; returns the exit code and the stdout object."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_USAGE if exc.code else EXIT_OK), None
    if args.command == "replay":
        return _replay(args)
    _fill_defaults(args)
    if args.threads < 1:
        parser.error("--threads must be positive")
    limits = _limits(args)
    command = " ".join(x for x in (args.cmd, getattr(args, "sub", None)) if x)
    out = {"command": command, "inputs": _inputs(args), "limits": limits}
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        result, summary = args.func(args, limits)
        out["result"] = result
    except UsageError as exc:
        code, summary = EXIT_USAGE, f"usage error: {exc}"
        out["error"] = {"kind": "usage", "message": str(exc)}
    except ResourceLimitExceeded as exc:
        code, summary = EXIT_LIMIT, f"resource limit: {exc}"
        out["error"] = {"kind": "resource_limit", "message": str(exc)}
    except (HypercombError, ValueError) as exc:
        code, summary = EXIT_DOMAIN, f"error: {exc}"
        out["error"] = {"kind": "domain", "message": str(exc)}
    ms = (time.perf_counter() - t0) * 1000
    print(f"hypercomb {command}: {summary} [{ms:.1f} ms]", file=sys.stderr)
    if args.manifest:
        manifest = dict(out, argv=_strip_execution_opts(argv), timing=round(ms, 3),
                        exit_code=code)
        with open(args.manifest, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, sort_keys=True, indent=2)
            fh.write("\n")
    return code, out


def _replay(args) -> tuple[int, Optional[dict]]:
    try:
        with open(args.path, encoding="utf-8") as fh:
            manifest = json.load(fh)
        argv = list(manifest["argv"])
    except (OSError, ValueError, KeyError) as exc:
        print(f"hypercomb replay: cannot load manifest: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    if args.threads:
        argv += ["--threads", str(args.threads)]
    code, out = run(argv)
    expected = {k: v for k, v in manifest.items() if k not in ("argv", "timing", "exit_code")}
    if out is None or _dumps(out) != _dumps(expected):
        print("hypercomb replay: output differs from the manifest", file=sys.stderr)
        return EXIT_DOMAIN, out
    return code, out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    code, out = run(argv)
    if out is not None:
        _emit(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
