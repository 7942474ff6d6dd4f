"""Command-line front end.

Exit status: 0 on success (a negative answer such as "infeasible" or
"absent" is a success), 1 on domain errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from . import codes, expansion, geometry, search
from .gf import FieldError, prime_power


class DomainError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# --- parameter handling -----------------------------------------------------------


def _field_size(parser, q: int) -> int:
    try:
        prime_power(q)
    except (FieldError, ValueError):
        parser.error(f"--q {q} is not a prime power")
    return q


def _params(parser, args) -> tuple[expansion.DivParams | None, int, int]:
    """(DivParams or None when Delta has a cofactor prime to p, t, Delta)."""
    q = _field_size(parser, args.q)
    if args.delta is not None:
        if args.a is not None or args.b is not None:
            parser.error("give either --delta or --a/--b, not both")
        if args.delta < 1:
            parser.error("--delta must be positive")
        t, f = expansion.split_delta(q, args.delta)
        if f == 0:
            return None, t, args.delta
        p, e = prime_power(q)
        a = -(-f // e)
        return expansion.DivParams(q, a, a * e - f), t, args.delta
    if args.a is None:
        parser.error("give --delta or --a (and optionally --b)")
    try:
        P = expansion.DivParams(q, args.a, args.b or 0)
    except ValueError as exc:
        parser.error(str(exc))
    return P, 1, P.delta


def _nonneg(parser, name: str, value: int) -> int:
    if value < 0:
        parser.error(f"--{name} must be non-negative")
    return value


def _read_input(src: str, q: int | None):
    """A PointMultiset from multiset JSON or a code matrix (file or '-')."""
    text = sys.stdin.read() if src == "-" else Path(src).read_text()
    if text.lstrip().startswith("{"):
        M = geometry.PointMultiset.from_dict(json.loads(text))
        if q is not None and M.q != q:
            raise DomainError(f"input lives over GF({M.q}), not GF({q})")
        return M
    return codes.multiset_from_code(codes.parse_matrix(text, q))


def _input_code(src: str, q: int | None) -> codes.LinearCode:
    text = sys.stdin.read() if src == "-" else Path(src).read_text()
    if text.lstrip().startswith("{"):
        M = geometry.PointMultiset.from_dict(json.loads(text))
        if q is not None and M.q != q:
            raise DomainError(f"input lives over GF({M.q}), not GF({q})")
        return codes.code_from_multiset(M)
    return codes.parse_matrix(text, q)


# --- subcommands ------------------------------------------------------------------


def cmd_feasible(parser, args) -> str:
    P, t, delta = _params(parser, args)
    n = _nonneg(parser, "n", args.n)
    ok = expansion.feasible_general(n, args.q, delta)
    out = {"n": n, "q": args.q, "delta": delta, "feasible": ok}
    reason = None
    if n % t:
        reason = f"not a multiple of {t}"
    elif P is not None:
        ex = expansion.expand(n // t, P)
        out.update(a=P.a, b=P.b, leading=ex.leading)
        reason = f"leading coefficient {ex.leading}"
    if args.json:
        return _dump(out)
    word = "feasible" if ok else "infeasible"
    return f"{word} ({reason})" if reason else word


def cmd_expand(parser, args) -> str:
    P, t, _ = _params(parser, args)
    if P is None or t != 1:
        parser.error("expand needs Delta to be a power of the characteristic")
    ex = expansion.expand(args.n, P)
    if args.json:
        return _dump(ex.to_dict())
    s = expansion.base_sequence(P)
    terms = " + ".join(f"{c}*{si}" for c, si in zip(ex.coefficients, s))
    return (
        f"{args.n} = {terms}\n"
        f"coefficients: {' '.join(map(str, ex.coefficients))}\n"
        f"cross sum: {ex.cross_sum}\n"
        f"{'feasible' if ex.feasible else 'infeasible'}"
    )


def cmd_frobenius(parser, args) -> str:
    P, t, delta = _params(parser, args)
    if P is None or t != 1:
        raise DomainError(f"infinitely many lengths are excluded for Delta={delta} over GF({args.q})")
    g = expansion.frobenius_number(P)
    if args.json:
        return _dump({"q": P.q, "a": P.a, "b": P.b, "delta": P.delta, "frobenius": g, "base": list(expansion.base_sequence(P))})
    return str(g)


def cmd_construct(parser, args) -> str:
    P, t, delta = _params(parser, args)
    n = _nonneg(parser, "n", args.n)
    if n % t or not expansion.feasible_general(n, args.q, delta):
        raise DomainError(f"no {delta}-divisible multiset of cardinality {n} over GF({args.q})")
    if P is None:
        M = geometry.PointMultiset(args.q, 1, {(1,): n}) if n else geometry.PointMultiset(args.q, 1)
    else:
        M = geometry.construct_from_expansion(n // t, P) * t
    if args.json:
        return _dump(M.to_dict())
    if not M.mults:
        raise DomainError("the empty multiset has no generator matrix; use --json")
    return codes.format_matrix(codes.code_from_multiset(M), header=True).rstrip("\n")


def cmd_verify(parser, args) -> str:
    C = _input_code(args.matrix, args.q)
    g = codes.weight_divisibility(C)
    out = {
        "n": C.n,
        "effective_n": C.effective_length,
        "k": C.k,
        "divisibility_gcd": g,
        "projective": codes.is_projective(C),
        "spanning": codes.is_spanning_code(C),
    }
    if args.delta is not None:
        out["delta"] = args.delta
        out["divisible"] = g % args.delta == 0
    if args.json:
        return _dump(out)
    return "\n".join(f"{k}: {json.dumps(v)}" for k, v in out.items())


def cmd_profile(parser, args) -> str:
    M = _read_input(args.matrix, args.q)
    mh = geometry.hyperplane_multiplicities(M) if M.v >= 2 else []
    prof = dict(sorted(Counter(int(x) for x in mh).items()))
    out = {"v": M.v, "q": M.q, "n": M.cardinality, "hyperplane_profile": {str(k): c for k, c in prof.items()}}
    if M.v == 3 and M.is_set and M.cardinality > M.q:
        t = M.cardinality - M.q
        out["km_arc"] = geometry.is_km_arc(M, t)
        out["hyperoval"] = geometry.is_hyperoval(M)
        out["line"] = geometry.is_line(M)
    if args.json:
        return _dump(out)
    lines = [f"n={M.cardinality} v={M.v} q={M.q}"]
    lines += [f"{k}: {c}" for k, c in prof.items()]
    lines += [f"{k}: {json.dumps(out[k])}" for k in ("line", "hyperoval", "km_arc") if k in out]
    return "\n".join(lines)


def _search_spec(parser, args) -> search.SearchSpec:
    _field_size(parser, args.q)
    if args.v < 1:
        parser.error("--v must be >= 1")
    if args.delta < 1:
        parser.error("--delta must be positive")
    _nonneg(parser, "n", args.n)
    if args.projective and args.max_mult not in (None, 1):
        parser.error("--projective conflicts with --max-mult")
    mm = 1 if args.projective or args.max_mult is None else args.max_mult
    if mm < 1:
        parser.error("--max-mult must be >= 1")
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    return search.SearchSpec(args.q, args.v, args.delta, args.n, max_mult=mm, spanning=args.spanning)


def _timing(d: dict, args) -> dict:
    if args.no_timing:
        d["seconds"] = None
    return d


def cmd_search(parser, args) -> str:
    spec = _search_spec(parser, args)
    res = search.exists_divisible_set(spec, node_budget=args.budget, use_bounds=not args.no_bounds, threads=args.threads)
    if args.json:
        return _dump(_timing(res.to_dict(), args))
    lines = [f"{res.status} (certificate: {res.certificate}, nodes: {res.nodes})"]
    if res.witness is not None:
        lines.append(codes.format_matrix(codes.code_from_multiset(res.witness), header=True).rstrip("\n") if res.witness.mults else "(empty multiset)")
    return "\n".join(lines)


def cmd_classify(parser, args) -> str:
    spec = _search_spec(parser, args)
    if spec.v != 3:
        parser.error("classify is implemented for --v 3")
    res = search.classify(spec, node_budget=args.budget, threads=args.threads)
    if args.emit_reps:
        out_dir = Path(args.emit_reps)
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, R in enumerate(res.representatives):
            if R.mults:
                text = codes.format_matrix(codes.code_from_multiset(R), header=True)
                (out_dir / f"q{spec.q}_n{spec.n}_{i:03d}.txt").write_text(text)
    if args.json:
        return _dump(_timing(res.to_dict(), args))
    lines = [f"{res.status}: {res.count} class(es) (nodes: {res.nodes})"]
    for i, R in enumerate(res.representatives):
        prof = search._profile_or_none(R)
        lines.append(f"[{i}] line profile {prof}" if prof is not None else f"[{i}]")
    return "\n".join(lines)


# --- parser -----------------------------------------------------------------------


def _add_params(p: argparse.ArgumentParser, need_n: bool = True):
    p.add_argument("--q", type=int, required=True, help="field size p^e")
    p.add_argument("--delta", type=int, help="divisor Delta (alternative to --a/--b)")
    p.add_argument("--a", type=int, help="Delta = p^(a*e - b)")
    p.add_argument("--b", type=int, help="defaults to 0")
    if need_n:
        p.add_argument("--n", type=int, required=True, help="length / cardinality")


def _add_search(p: argparse.ArgumentParser):
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--v", type=int, required=True, help="ambient vector space dimension")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--projective", action="store_true", help="point sets only (max multiplicity 1)")
    p.add_argument("--max-mult", type=int, help="largest point multiplicity (default 1)")
    p.add_argument("--spanning", action="store_true", help="require the support to span")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--budget", type=int, help=f"node budget (default ${search.BUDGET_ENV} or {search.DEFAULT_NODE_BUDGET})")
    p.add_argument("--no-timing", action="store_true", help="report seconds as null (byte-stable output)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="divcodes", description="Divisible linear codes over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    _add_params(add("feasible", cmd_feasible, "does a Delta-divisible code of effective length n exist"))
    _add_params(add("expand", cmd_expand, "digit expansion of n over the base sequence"))
    _add_params(add("frobenius", cmd_frobenius, "largest excluded length"), need_n=False)
    _add_params(add("construct", cmd_construct, "build a Delta-divisible multiset of cardinality n"))

    p = add("verify", cmd_verify, "weight divisibility of a code (matrix or multiset JSON)")
    p.add_argument("--matrix", required=True, help="file, or - for stdin")
    p.add_argument("--q", type=int, help="field size when the input has no header")
    p.add_argument("--delta", type=int, help="also report whether Delta divides all weights")

    p = add("profile", cmd_profile, "hyperplane (line) intersection profile")
    p.add_argument("--matrix", required=True, help="file, or - for stdin")
    p.add_argument("--q", type=int)

    p = add("search", cmd_search, "find a Delta-divisible (multi)set or certify absence")
    _add_search(p)
    p.add_argument("--no-bounds", action="store_true", help="decide by traversal alone, without numeric cutoffs")
    p = add("classify", cmd_classify, "orbit representatives in PG(2, q)")
    _add_search(p)
    p.add_argument("--emit-reps", metavar="DIR", help="write each representative as a matrix file")
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(parser, args)
    except (DomainError, FieldError, ValueError, OSError, NotImplementedError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
