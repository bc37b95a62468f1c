"""Command-line front end: construct, verify, profile, export."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import cayley as C
from . import divis as D
from . import symlaw as S
from .certificate import GroupSpec, LawCertificate, VerifyMode
from .perm import Perm, classify
from .word import parse, serialize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COUNTEREXAMPLE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cert_exit(cert: LawCertificate, args) -> int:
    _emit(cert.dumps(), args.out)
    if args.out:
        print(f"{cert.method} law for {cert.target}: {cert.outcome.status}, nominal length {cert.nominal_length}")
    return EXIT_COUNTEREXAMPLE if cert.outcome.status == "counterexample" else EXIT_OK


def _mode(text: str | None, seed: int) -> VerifyMode | None:
    return VerifyMode.parse(text, seed=seed) if text else None


def _search_config(args) -> S.RandomSearchConfig:
    return S.RandomSearchConfig(seed=args.seed, walk_length=args.walk_budget, pool_budget=args.pool_budget,
                                max_attempts=args.max_attempts, target_rule=args.target_rule)


def _gens(args) -> list[Perm]:
    if not args.gens:
        raise UsageError("need at least one generator")
    n = args.degree or max(Perm.parse(g).degree for g in args.gens)
    return [Perm.parse(g, n) for g in args.gens]


# ---------------------------------------------------------------------------
# subcommands


def cmd_law_sym(args) -> int:
    if args.n > args.max_degree:
        raise UsageError(f"n = {args.n} above --max-degree {args.max_degree}")
    mode = _mode(args.verify, args.seed)
    if args.method == "landau":
        cert = S.landau_law(args.n, mode, args.jobs)
    elif args.method == "order":
        cert = S.order_law(args.max_order or S.landau_g(args.n), mode or S.default_mode(args.n), args.n, args.jobs)
    elif args.method == "random":
        print(f"seed: {args.seed}", file=sys.stderr)
        cert = S.random_law(args.n, _search_config(args), args.jobs, mode)
    else:
        print(f"seed: {args.seed}", file=sys.stderr)
        cert = S.recursive_law(args.n, _search_config(args), mode, args.v_method, args.max_order, args.c1, args.jobs)
    return _cert_exit(cert, args)


def cmd_law_matrix(args, projective: bool) -> int:
    from .lielaw import gl_law, pgl_law, gl_order

    if gl_order(args.n, args.q) > args.max_order:
        raise UsageError(f"|GL_{args.n}({args.q})| above --max-order {args.max_order}")
    mode = _mode(args.verify, args.seed)
    cert = (pgl_law if projective else gl_law)(args.n, args.q, mode, args.jobs)
    return _cert_exit(cert, args)


def cmd_verify(args) -> int:
    with open(args.law, encoding="utf-8") as fh:
        cert = LawCertificate.loads(fh.read())
    spec = GroupSpec.parse(args.group) if args.group else cert.target
    mode = _mode(args.mode, args.seed) or cert.mode
    out = S.verify_law(cert.law, spec, mode, args.jobs)
    print(json.dumps({"group": str(spec), "verification": mode.to_json(), "outcome": out.to_json()}, sort_keys=True))
    return EXIT_COUNTEREXAMPLE if out.status == "counterexample" else EXIT_OK


def cmd_div(args) -> int:
    w = parse(args.word)
    r = D.d_f2(w, args.max_n, args.oracle)
    if args.format == "json":
        print(json.dumps(r.to_json(), sort_keys=True))
    else:
        print(r.value)
    return EXIT_OK


def cmd_div_profile(args) -> int:
    rows = D.d_f2_profile(args.max_length, args.max_n, args.oracle)
    if args.format == "csv":
        _emit(D.profile_csv(rows), args.out)
    else:
        data = [{"length": r.length, "D": r.value, "word": serialize(r.word), "D_exact_length": r.length_value,
                 "word_exact_length": serialize(r.length_word), "classes": r.words_checked} for r in rows]
        _emit(json.dumps(data, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_cheby(args) -> int:
    x = args.x
    data = {"x": x, "theta": D.chebyshev_theta(x), "psi": D.chebyshev_psi(x)}
    if x <= 10**5:
        data["log_lcm"] = math.log(D.lcm_upto(int(x)))
    print(json.dumps(data, sort_keys=True))
    return EXIT_OK


def cmd_cayley(args) -> int:
    gens = _gens(args)
    if gens[0].degree > args.max_degree:
        raise UsageError(f"degree above --max-degree {args.max_degree}")
    g = C.build_cayley(gens, cap=args.max_order)
    diam = C.diameter(g)
    data = {"order": g.order, "s_size": g.s_size, "diameter": diam,
            "mixing_bound": C.mixing_bound(g.s_size, diam, g.order)}
    if g.order <= C.DENSE_CAP:
        rep = C.check_gap_inequality(g)
        data.update(gap=rep.gap, gap_bound=rep.bound, gap_holds=rep.holds)
    if args.walk_table is not None:
        k = args.target_cycle or gens[0].degree
        mask = C.target_mask(g, lambda p: p.cycle_type == (k,) + (1,) * (p.degree - k))
        steps = args.steps if args.steps is not None else data["mixing_bound"]
        with open(args.walk_table, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(C.walk_table_csv(C.walk_table(g, mask, steps)))
        data["target_density"] = float(mask.mean())
    print(json.dumps(data, sort_keys=True))
    return EXIT_OK


def cmd_classify(args) -> int:
    rep = classify(_gens(args), max_degree=args.max_degree, cap=args.max_order)
    print(json.dumps(rep.to_json(), sort_keys=True))
    return EXIT_OK


def cmd_alpha_table(args) -> int:
    if args.n_max > args.max_degree:
        raise UsageError(f"n_max above --max-degree {args.max_degree}")
    rows = S.alpha_table(args.n_max, _search_config(args), args.jobs)
    _emit(S.alpha_csv(rows) if args.format == "csv" else S.alpha_json(rows), args.out)
    return EXIT_OK if all(r.verified for r in rows) else EXIT_COUNTEREXAMPLE


def cmd_exp_ineq(args) -> int:
    rep = S.check_exponent_inequality(args.m_lo, args.m_hi)
    _emit(json.dumps(rep.to_json(), sort_keys=True) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=lambda s: int(s, 0), default=S.DEFAULT_SEED)
    common.add_argument("--out", help="write primary output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--max-degree", type=int, default=8)
    common.add_argument("--max-order", type=int, default=None)
    common.add_argument("--walk-budget", type=int, default=None, help="walk length override")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)

    p = _Parser(prog="grouplaws", description="Short laws for finite groups: build, verify, profile.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    q = add("law-sym", "build a law for Sym(n)")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--method", choices=("landau", "random", "recursive", "order"), default="landau")
    q.add_argument("--verify", help="exhaustive | classes | sampled[:SEED[:TRIALS]] | none")
    q.add_argument("--v-method", choices=("auto", "random", "landau"), default="auto")
    q.add_argument("--c1", type=float, default=None)
    q.add_argument("--pool-budget", type=int, default=16)
    q.add_argument("--max-attempts", type=int, default=200)
    q.add_argument("--target-rule", choices=("long_cycle", "low_order"), default="long_cycle")

    for name in ("law-gl", "law-pgl"):
        q = add(name, f"build a law for {name[4:].upper()}_n(q)")
        q.add_argument("--n", type=int, required=True)
        q.add_argument("--q", type=int, required=True)
        q.add_argument("--verify")

    q = add("verify", "re-verify a certificate")
    q.add_argument("--law", required=True)
    q.add_argument("--group")
    q.add_argument("--mode")

    q = add("div", "divisibility D_F2 of a word")
    q.add_argument("--word", required=True)
    q.add_argument("--max-n", type=int, default=6)
    q.add_argument("--oracle", choices=("law", "subgroup"), default="law")

    q = add("div-profile", "D_F2(l) over all short words")
    q.add_argument("--max-length", type=int, default=6)
    q.add_argument("--max-n", type=int, default=6)
    q.add_argument("--oracle", choices=("law", "subgroup"), default="law")

    q = add("cheby", "Chebyshev theta and psi")
    q.add_argument("--x", type=int, required=True)

    for name, help_ in (("cayley", "Cayley graph statistics"), ("classify", "subgroup case of <gens>")):
        q = add(name, help_)
        q.add_argument("--gens", nargs="+", help="permutations, cycle or one-line notation")
        q.add_argument("--degree", type=int, default=None)
        if name == "cayley":
            q.add_argument("--walk-table", help="write the walk CSV here")
            q.add_argument("--steps", type=int, default=None)
            q.add_argument("--target-cycle", type=int, default=None)

    q = add("alpha-table", "lengths of verified Sym(n) laws")
    q.add_argument("--n-max", type=int, default=6)
    q.add_argument("--pool-budget", type=int, default=16)
    q.add_argument("--max-attempts", type=int, default=200)
    q.add_argument("--target-rule", choices=("long_cycle", "low_order"), default="long_cycle")

    q = add("exp-ineq", "enumerate the exponent inequality")
    q.add_argument("--m-lo", type=int, default=1)
    q.add_argument("--m-hi", type=int, default=2000)
    return p


_DEFAULT_ORDER = {"law-gl": 10**6, "law-pgl": 10**6, "cayley": 50_000, "classify": 50_000}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_order is None and args.cmd in _DEFAULT_ORDER:
        args.max_order = _DEFAULT_ORDER[args.cmd]
    if args.format is None:
        args.format = "csv" if args.cmd == "alpha-table" else "json" if args.cmd == "div-profile" else "text"
    handlers = {
        "law-sym": cmd_law_sym,
        "law-gl": lambda a: cmd_law_matrix(a, False),
        "law-pgl": lambda a: cmd_law_matrix(a, True),
        "verify": cmd_verify,
        "div": cmd_div,
        "div-profile": cmd_div_profile,
        "cheby": cmd_cheby,
        "cayley": cmd_cayley,
        "classify": cmd_classify,
        "alpha-table": cmd_alpha_table,
        "exp-ineq": cmd_exp_ineq,
    }
    try:
        return handlers[args.cmd](args)
    except (UsageError, ValueError, RuntimeError, OSError, KeyError) as exc:
        print(f"grouplaws: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
