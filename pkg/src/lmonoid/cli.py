"""``lmonoid`` command line.

Exit codes: 0 success, 1 a yes/no query answered "no", 2 usage or input
errors, 3 a search cap was exceeded.  Every subcommand takes ``--json``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import amalgamation as am
from . import congruence as cg
from . import nested as ns
from . import terms as tm
from . import variety as vr
from .core import CapExceeded, FinOrdMonoid, format_algebra, parse_algebra

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, text: str, data) -> None:
        if self.as_json:
            print(json.dumps(data, sort_keys=True))
        else:
            sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _read_algebra(path: str) -> FinOrdMonoid:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path) as fh:
            text = fh.read()
    return parse_algebra(text)


def _alg_json(M: FinOrdMonoid) -> dict:
    return {"size": M.size, "unit": M.unit, "table": [list(r) for r in M.table]}


def _positions(text: str) -> tuple:
    text = text.strip()
    if text in ("", "-"):
        return ()
    return tuple(int(x) for x in text.split(","))


def _fmt_positions(p) -> str:
    return ",".join(map(str, p)) if p else "-"


def _cap(args, default: int, hard: Optional[int] = None) -> int:
    cap = args.cap if args.cap is not None else default
    if hard is not None and cap > hard:
        raise CapExceeded("requested cap", cap, hard)
    return cap


# ---------------------------------------------------------------- subcommands

def cmd_compose(args, out):
    M = ns.compose(ns.parse_word(args.word))
    out.emit(format_algebra(M), _alg_json(M))
    return EXIT_OK


def cmd_decompose(args, out):
    w = ns.decompose(_read_algebra(args.file))
    out.emit(ns.format_word(w), {"word": ns.format_word(w), "letters": [l.value for l in w]})
    return EXIT_OK


def cmd_enumerate(args, out):
    cap = _cap(args, vr.COUNT_CAP)
    if args.n > cap:
        raise CapExceeded("word size for enumeration", args.n, cap)
    words = [ns.format_word(w) for w in vr.enumerate_words(args.n, args.filter)]
    out.emit("".join(w + "\n" for w in words) or "\n", {"n": args.n, "filter": args.filter, "words": words})
    return EXIT_OK


def cmd_counts(args, out):
    rows = [(n, vr.count_I(n), vr.count_S(n), vr.count_comm(n)) for n in range(args.start, args.up_to + 1)]
    text = "n\tI\tS\tcomm\n" + "".join("\t".join(map(str, r)) + "\n" for r in rows)
    out.emit(text, [dict(zip(("n", "I", "S", "comm"), r)) for r in rows])
    return EXIT_OK


def cmd_check(args, out):
    M = _read_algebra(args.file)
    eq = tm.parse_equation(args.equation)
    w = tm.failure_witness(M, eq, _cap(args, tm.DEFAULT_VALUATION_CAP))
    if w is None:
        out.emit("holds", {"equation": str(eq), "holds": True, "witness": None})
        return EXIT_OK
    line = " ".join(f"x{k}={v}" for k, v in sorted(w.items()))
    out.emit(f"fails\n{line}", {"equation": str(eq), "holds": False, "witness": {f"x{k}": v for k, v in w.items()}})
    return EXIT_NO


def cmd_axiom(args, out):
    kind = args.kind
    if kind in ("sigma", "sigma-dual", "gamma"):
        if args.n is None:
            raise ValueError(f"{kind} needs n")
        eq = {"sigma": tm.sigma, "sigma-dual": tm.sigma_dual, "gamma": tm.gamma}[kind](args.n)
        label = f"{kind}({args.n})"
    else:
        v = vr.CIdVarietyId.parse(kind)
        try:
            eq = vr.cid_axiom(v)
        except vr.NoFiniteAxiom:
            out.emit(f"{v}: no axiom relative to the commutative class", {"variety": str(v), "equation": None})
            return EXIT_NO
        label = str(v)
    out.emit(str(eq), {"name": label, "equation": str(eq), "variables": len(tm.equation_vars(eq))})
    return EXIT_OK


def cmd_sdi(args, out):
    M = _read_algebra(args.file)
    mono = cg.monolith(M)
    data = {"sdi": mono is not None, "monolith": str(mono) if mono else None}
    out.emit(f"yes\nmonolith {mono}" if mono else "no", data)
    return EXIT_OK if mono else EXIT_NO


def cmd_congruences(args, out):
    M = _read_algebra(args.file)
    cons = cg.all_congruences(M)
    chain = all(x.leq(y) or y.leq(x) for i, x in enumerate(cons) for y in cons[i + 1:])
    out.emit("".join(f"{c}\n" for c in cons), {"congruences": [str(c) for c in cons], "chain": chain})
    return EXIT_OK


def cmd_cep(args, out):
    M = _read_algebra(args.file)
    ok = cg.has_cep(M, _cap(args, cg.CEP_SIZE_CAP, cg.CEP_SIZE_CAP))
    out.emit("yes" if ok else "no", {"cep": ok})
    return EXIT_OK if ok else EXIT_NO


def cmd_embed(args, out):
    w1, w2 = ns.parse_word(args.source), ns.parse_word(args.target)
    f = ns.word_embeds(w1, w2)
    if f is None:
        out.emit("none", {"witness": None})
        return EXIT_NO
    phi = ns.lift_embedding(w1, w2, f)
    out.emit(f"{_fmt_positions(f)}\nmap {' '.join(map(str, phi.image))}",
             {"witness": list(f), "map": list(phi.image)})
    return EXIT_OK


def cmd_member(args, out):
    w = ns.parse_word(args.word)
    gens = [ns.parse_word(g) for g in args.gens]
    ok = vr.member(w, gens, _cap(args, vr.CONGRUENCE_CAP, vr.CONGRUENCE_HARD_MAX))
    out.emit("yes" if ok else "no", {"member": ok})
    return EXIT_OK if ok else EXIT_NO


def _span(args) -> am.Span:
    algs = (args.base_alg, args.left_alg, args.right_alg)
    if any(a is not None for a in algs):
        if not all(a is not None for a in algs) or args.f_map is None or args.g_map is None:
            raise ValueError("element-level spans need --base-alg, --left-alg, --right-alg, --f-map and --g-map")
        from .core import ElementMap, check_map
        L, M, N = (_read_algebra(p) for p in algs)
        words = [ns.decompose(A) for A in (L, M, N)]
        maps = []
        for src, dst, text in ((L, M, args.f_map), (L, N, args.g_map)):
            img = _positions(text)
            if not check_map(src, dst, img).is_embedding:
                raise ValueError(f"map {text} is not an embedding")
            maps.append(ElementMap(src.size, dst.size, img))
        f = ns.position_map(words[0], words[1], maps[0])
        g = ns.position_map(words[0], words[2], maps[1])
        return am.Span(words[0], words[1], f, words[2], g)
    if args.left is None or args.right is None:
        raise ValueError("a span needs --left and --right (and --base, --f, --g)")
    base = ns.parse_word(args.base or "0")
    return am.Span(base, ns.parse_word(args.left), _positions(args.f or ""),
                   ns.parse_word(args.right), _positions(args.g or ""))


def _amalgam_text(a: am.Amalgam) -> str:
    return f"{ns.format_word(a.word)}\nj1 {_fmt_positions(a.j1)}\nj2 {_fmt_positions(a.j2)}"


def _amalgam_json(a: am.Amalgam) -> dict:
    return {"word": ns.format_word(a.word), "j1": list(a.j1), "j2": list(a.j2)}


def cmd_amalgamate(args, out):
    span = _span(args)
    try:
        a = am.amalgamate(span)
    except am.IncompatibleSpan as exc:
        out.emit(f"incompatible at base position {exc.position}", {"compatible": False, "certificate": exc.position})
        return EXIT_NO
    v = am.verify_amalgam(span, a)
    data = {"compatible": True, "amalgam": _amalgam_json(a), **v._asdict()}
    out.emit(_amalgam_text(a) + f"\nstrong {'yes' if v.strong else 'no'}", data)
    return EXIT_OK


def cmd_search_amalgam(args, out):
    span = _span(args)
    a = am.search_amalgam(span, args.max_size)
    if a is None:
        out.emit(f"none up to size {args.max_size}", {"amalgam": None, "max_size": args.max_size})
        return EXIT_NO
    out.emit(_amalgam_text(a), {"amalgam": _amalgam_json(a), "max_size": args.max_size})
    return EXIT_OK


def cmd_variety_status(args, out):
    if args.named:
        status = vr.named_amalgamation_status(args.named)
        out.emit(status.value, {"variety": args.named, "status": status.value})
        return EXIT_OK
    if args.cid:
        v = vr.CIdVarietyId.parse(args.cid)
        gens = vr.cid_generators(v)
        if gens is None:
            status = vr.named_amalgamation_status("CId")
            out.emit(status.value, {"variety": str(v), "status": status.value})
            return EXIT_OK
    elif args.gens:
        gens = [ns.parse_word(g) for g in args.gens]
    else:
        raise ValueError("give --gens, --cid or --named")
    cap = _cap(args, vr.CONGRUENCE_CAP, vr.CONGRUENCE_HARD_MAX)
    anti = sorted(vr.variety_antichain(gens, cap))
    status = vr.amalgamation_status(gens, cap)
    lines = [status.value, "maximal " + (" ".join(ns.format_word(w) for w in anti) or "0")]
    data = {"status": status.value, "maximal": [ns.format_word(w) for w in anti]}
    try:
        cid = vr.cid_identify(gens)
        lines.append(f"commutative {cid}")
        data["commutative"] = str(cid)
    except vr.NotCommutative:
        data["commutative"] = None
    out.emit("\n".join(lines), data)
    return EXIT_NO if status is vr.AmalgamationStatus.NO else EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")
    common.add_argument("--cap", type=int, default=None, help="override the default search cap")

    p = argparse.ArgumentParser(prog="lmonoid", description="Finite idempotent ordered monoids.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("compose", cmd_compose, "algebra table of a word such as G3+C2")
    sp.add_argument("word")
    sp = add("decompose", cmd_decompose, "word of an algebra file ('-' for stdin)")
    sp.add_argument("file")
    sp = add("enumerate", cmd_enumerate, "all words of a given size")
    sp.add_argument("n", type=int)
    sp.add_argument("--filter", choices=vr.FILTERS, default="all")
    sp = add("counts", cmd_counts, "TSV of I(n), S(n) and 2^(n-1)")
    sp.add_argument("--up-to", type=int, required=True)
    sp.add_argument("--from", dest="start", type=int, default=1)
    sp = add("check", cmd_check, "check an equation on an algebra")
    sp.add_argument("file")
    sp.add_argument("equation")
    sp = add("axiom", cmd_axiom, "print sigma/sigma-dual/gamma or the axiom of a commutative variety")
    sp.add_argument("kind", help="sigma, sigma-dual, gamma, or a variety id such as VC(3)")
    sp.add_argument("n", type=int, nargs="?")
    sp = add("sdi", cmd_sdi, "subdirect irreducibility and monolith")
    sp.add_argument("file")
    sp = add("congruences", cmd_congruences, "all congruences, finest first")
    sp.add_argument("file")
    sp = add("cep", cmd_cep, "congruence extension property")
    sp.add_argument("file")
    sp = add("embed", cmd_embed, "embedding witness between two words")
    sp.add_argument("source")
    sp.add_argument("target")
    sp = add("member", cmd_member, "membership in the variety generated by chains")
    sp.add_argument("word")
    sp.add_argument("--gens", nargs="+", required=True)

    for name, fn, help in (("amalgamate", cmd_amalgamate, "amalgam of a compatible span"),
                           ("search-amalgam", cmd_search_amalgam, "bounded exhaustive amalgam search")):
        sp = add(name, fn, help)
        sp.add_argument("--base")
        sp.add_argument("--left")
        sp.add_argument("--f")
        sp.add_argument("--right")
        sp.add_argument("--g")
        sp.add_argument("--base-alg")
        sp.add_argument("--left-alg")
        sp.add_argument("--right-alg")
        sp.add_argument("--f-map")
        sp.add_argument("--g-map")
        if name == "search-amalgam":
            sp.add_argument("--max-size", type=int, default=am.SEARCH_MAX_SIZE)

    sp = add("variety-status", cmd_variety_status, "amalgamation property of a variety")
    sp.add_argument("--gens", nargs="+")
    sp.add_argument("--cid", help="a commutative variety id such as VJoin(2)")
    sp.add_argument("--named", choices=("CId", "G-limit", "D-limit"))
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out = _Out(args.json)
    try:
        return args.fn(args, out)
    except CapExceeded as exc:
        print(f"lmonoid: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, OSError) as exc:
        print(f"lmonoid: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
