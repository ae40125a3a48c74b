"""Command-line entry point.

Exit codes: 0 definite truth or success, 1 definite falsity or proven
absence, 2 inconclusive or out of budget, 3 usage or input errors.  With
--format json a machine-readable result object is always printed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .budget import Budget, BudgetExceeded
from .extract import (
    CountingFailure,
    ExtractionFailure,
    decompose_mixed,
    fuse,
    pigeonhole_extract,
)
from .formula import (
    BUILTIN_PSI0,
    TOP,
    FormulaSyntaxError,
    Pi03Sentence,
    PrefixShapeError,
    PrefixedSentence,
    QuantStep,
    RtLikeStatement,
    SecondOrderParam,
    evaluate,
    formula_text,
    parse,
    weakly_pi04_transform,
)
from .grouping import (
    ABSENT,
    FOUND,
    GroupingWitness,
    LSpec,
    MalformedWitness,
    find_grouping,
    is_grouping,
)
from .largeness import (
    Certificate,
    LargenessSpec,
    PreconditionError,
    SizeOverflow,
    check_large,
    minimal_large_interval,
    t_apart,
    verify_certificate,
)
from .lowerbound import (
    CONFIRMED,
    COUNTEREXAMPLE,
    tree,
    verify_lower_bound,
)
from .ramsey import (
    DensityParams,
    EmConstants,
    Mode,
    QTotalityError,
    ads_extract,
    ads_q_coloring,
    bounds_table,
    bounds_tsv,
    em_extract,
    is_large_gamma,
    is_n_dense,
)
from .sets import ColoringTable, FinSet, SparsityPolicy

DEFAULT_SEED = 1729


class UsageError(ValueError):
    pass


@dataclass
class Outcome:
    code: int
    payload: dict
    human: str


# ---------------------------------------------------------------------------
# input loading
# ---------------------------------------------------------------------------


def load_set(args, attr: str = "set") -> FinSet:
    path = getattr(args, attr, None)
    interval = getattr(args, "interval", None) if attr == "set" else None
    if interval:
        try:
            lo, hi = interval.split(":")
            return FinSet.interval(int(lo), int(hi), floor=args.floor)
        except ValueError as err:
            raise UsageError(f"bad --interval {interval!r}: expected LO:HI") from err
    if not path:
        raise UsageError("a set is required (--set FILE or --interval LO:HI)")
    return _parse_set_file(path, args.floor)


def _parse_set_file(path: str, floor: int) -> FinSet:
    try:
        text = open(path).read()
    except OSError as err:
        raise UsageError(str(err)) from err
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            values = [int(s) for s in json.loads(stripped)]
        except (json.JSONDecodeError, ValueError) as err:
            raise UsageError(f"{path}: bad JSON set: {err}") from err
    else:
        values = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                values.append(int(line))
            except ValueError as err:
                raise UsageError(f"{path}:{lineno}: not a decimal numeral: {line!r}") from err
    try:
        return FinSet(tuple(values), floor)
    except ValueError as err:
        raise UsageError(f"{path}: {err}") from err


def load_sentence(args) -> Pi03Sentence:
    if getattr(args, "theta_file", None):
        try:
            return Pi03Sentence.from_json(open(args.theta_file).read())
        except (OSError, ValueError, KeyError) as err:
            raise UsageError(f"{args.theta_file}: {err}") from err
    text = getattr(args, "theta", "top")
    if text == "top":
        return TOP
    try:
        return Pi03Sentence(
            parse(text),
            getattr(args, "param_a", 0),
            SecondOrderParam(getattr(args, "param_A", "") or ""),
        )
    except (FormulaSyntaxError, ValueError) as err:
        raise UsageError(f"bad --theta: {err}") from err


def load_coloring(args, attr: str = "coloring") -> ColoringTable:
    path = getattr(args, attr, None)
    if not path:
        raise UsageError("a coloring is required (--coloring FILE)")
    try:
        return ColoringTable.from_json(open(path).read(), floor=0)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as err:
        raise UsageError(f"{path}: {err}") from err


def load_lspec(text: str, sentence: Pi03Sentence) -> LSpec:
    """card:M, or omega:N[:K][:top] largeness forms."""
    parts = text.split(":")
    try:
        if parts[0] == "card":
            return LSpec.card(int(parts[1]))
        if parts[0] == "omega":
            exponent = int(parts[1])
            multiplier = int(parts[2]) if len(parts) > 2 and parts[2] else 1
            sent = TOP if parts[-1] == "top" else sentence
            return LSpec.largeness(LargenessSpec(exponent, multiplier, sent))
    except (IndexError, ValueError) as err:
        raise UsageError(f"bad largeness requirement {text!r}") from err
    raise UsageError(f"bad largeness requirement {text!r}; use card:M or omega:N[:K][:top]")


def make_budget(args) -> Budget:
    return Budget(args.budget)


def make_statement(args) -> RtLikeStatement:
    name = args.gamma
    presets = {
        "rt22": (2, 2, "homogeneous"),
        "rt12": (1, 2, "homogeneous"),
        "em": (2, 2, "transitive"),
        "ads-asc": (2, 2, "monotone-ascending"),
        "ads-desc": (2, 2, "monotone-descending"),
        "true": (1, 1, "true"),
    }
    if name in presets:
        arity, colors, psi0 = presets[name]
    else:
        arity, colors, psi0 = args.arity, args.colors, args.psi0
    if psi0 not in BUILTIN_PSI0:
        try:
            return RtLikeStatement(arity, colors, parse(psi0))
        except FormulaSyntaxError as err:
            raise UsageError(f"bad --psi0: {err}") from err
    return RtLikeStatement(arity, colors, psi0)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def cmd_large_check(args) -> Outcome:
    x = load_set(args)
    sentence = load_sentence(args)
    spec = LargenessSpec(args.n, args.k, sentence)
    if args.verify:
        try:
            cert = Certificate.from_json(open(args.verify).read())
        except (OSError, ValueError, KeyError) as err:
            raise UsageError(f"{args.verify}: {err}") from err
        ok = verify_certificate(x, cert, spec, paranoid=args.paranoid)
        return Outcome(
            0 if ok else 1,
            {"verified": ok},
            "certificate accepted" if ok else "certificate rejected",
        )
    cert = check_large(x, spec, mode=args.mode, budget=make_budget(args))
    if cert is None:
        if args.mode == "greedy":
            return Outcome(2, {"result": "not-found", "mode": "greedy"}, "greedy search found no witness")
        return Outcome(1, {"result": "not-large"}, "not large: no decomposition exists")
    assert verify_certificate(x, cert, spec, paranoid=args.paranoid)
    if args.cert_out:
        with open(args.cert_out, "w") as fh:
            fh.write(cert.to_json())
    return Outcome(0, {"result": "large", "certificate": cert.to_obj()}, "large: certificate found")


def cmd_large_minimal(args) -> Outcome:
    try:
        out = minimal_large_interval(args.x, args.n, budget=args.budget or 10 ** 6)
    except SizeOverflow as err:
        return Outcome(2, {"result": "overflow", "reason": str(err)}, f"overflow: {err}")
    payload = {"elements": [str(v) for v in out], "cardinality": len(out), "max": str(out.maximum)}
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out.to_lines())
    return Outcome(0, payload, f"minimal interval [{out.minimum}, {out.maximum}], {len(out)} elements")


def cmd_large_pigeonhole(args) -> Outcome:
    x = load_set(args)
    f = load_coloring(args)
    sentence = load_sentence(args)
    policy = SparsityPolicy(args.sparsity)
    try:
        out = pigeonhole_extract(
            x, f, args.b, sentence, policy, strict=args.strict, budget=make_budget(args)
        )
    except CountingFailure as err:
        return Outcome(2, {"result": "counting-failure", "reason": str(err)}, str(err))
    except ExtractionFailure as err:
        return Outcome(1, {"result": "no-witness", "reason": str(err)}, str(err))
    payload = {
        "subset": [str(v) for v in out.homogeneous],
        "color": out.color,
        "used_fallback": out.used_fallback,
        "counting_inequality_held": out.counting_inequality_held,
        "certificate": out.certificate.to_obj(),
    }
    return Outcome(0, payload, f"homogeneous subset of color {out.color}, {len(out.homogeneous)} elements")


def cmd_large_decompose(args) -> Outcome:
    x = load_set(args)
    sentence = load_sentence(args)
    out = decompose_mixed(x, args.n, args.m, sentence, budget=make_budget(args))
    payload = {
        "blocks": [[str(v) for v in b] for b in out.blocks],
        "minima": [str(v) for v in out.minima],
    }
    return Outcome(0, payload, f"{len(out.blocks)} apart blocks; minima set of {len(out.minima)}")


def cmd_large_fuse(args) -> Outcome:
    sets = [_parse_set_file(p, args.floor) for p in args.blocks]
    sentence = load_sentence(args)
    out = fuse(sets[0], sets[1:], args.a, args.b, sentence, budget=make_budget(args))
    payload = {
        "fused": [str(v) for v in out.fused],
        "certificate": out.certificate.to_obj(),
    }
    return Outcome(0, payload, f"fused set of {len(out.fused)} elements at exponent {args.a + args.b}")


def cmd_apart(args) -> Outcome:
    x = _parse_set_file(args.x, args.floor)
    y = _parse_set_file(args.y, args.floor)
    sentence = load_sentence(args)
    ok = t_apart(x, y, sentence)
    return Outcome(0 if ok else 1, {"apart": ok}, "apart" if ok else "not apart")


def cmd_grouping_find(args) -> Outcome:
    z = load_set(args)
    f = load_coloring(args)
    sentence = load_sentence(args)
    l0 = load_lspec(args.l0, sentence)
    l1 = load_lspec(args.l1, sentence)
    out = find_grouping(z, f, l0, l1, sentence, make_budget(args))
    if out.status == FOUND:
        payload = {"result": "found", "blocks": [[str(v) for v in b] for b in out.witness.blocks]}
        if args.witness_out:
            with open(args.witness_out, "w") as fh:
                fh.write(out.witness.to_json())
        return Outcome(0, payload, f"grouping with {len(out.witness.blocks)} blocks")
    if out.status == ABSENT:
        return Outcome(1, {"result": "absent", "detail": out.detail}, "no grouping exists")
    return Outcome(2, {"result": "exhausted", "steps": out.steps}, "budget exhausted")


def cmd_grouping_check(args) -> Outcome:
    f = load_coloring(args)
    sentence = load_sentence(args)
    try:
        witness = GroupingWitness.from_json(open(args.witness).read(), f)
    except (OSError, ValueError, KeyError) as err:
        raise UsageError(f"{args.witness}: {err}") from err
    l0 = load_lspec(args.l0, sentence)
    l1 = load_lspec(args.l1, sentence)
    try:
        ok = is_grouping(witness, l0, l1, sentence)
    except (MalformedWitness, KeyError) as err:
        raise UsageError(f"malformed witness: {err}") from err
    return Outcome(0 if ok else 1, {"grouping": ok}, "valid grouping" if ok else "not a grouping")


def cmd_gamma_large(args) -> Outcome:
    z = load_set(args)
    sentence = load_sentence(args)
    statement = make_statement(args)
    mode = Mode(args.mode, seed=args.seed, trials=args.trials)
    out = is_large_gamma(z, args.r, args.s, sentence, statement, mode)
    return _verdict_outcome(out)


def cmd_gamma_dense(args) -> Outcome:
    z = load_set(args)
    sentence = load_sentence(args)
    statement = make_statement(args)
    mode = Mode(args.mode, seed=args.seed, trials=args.trials)
    out = is_n_dense(z, DensityParams(statement, sentence, args.m, mode))
    return _verdict_outcome(out)


def _verdict_outcome(v) -> Outcome:
    code = {"true": 0, "false": 1, "inconclusive": 2}[v.value]
    return Outcome(code, {"verdict": v.value, "reason": v.reason}, f"{v.value}: {v.reason}")


def cmd_em_extract(args) -> Outcome:
    x = load_set(args)
    f = load_coloring(args)
    sentence = load_sentence(args)
    constants = EmConstants.scaled(max(args.n, 1)) if args.scaled else EmConstants.faithful(max(args.n, 1))
    out = em_extract(x, f, args.n, sentence, make_budget(args), constants)
    if out.status == FOUND:
        payload = {
            "result": "found",
            "subset": [str(v) for v in out.subset],
            "certificate": out.certificate.to_obj(),
        }
        return Outcome(0, payload, f"transitive subset of {len(out.subset)} elements")
    code = 1 if out.status == ABSENT else 2
    return Outcome(code, {"result": out.status, "stage": out.stage}, f"{out.status} at stage: {out.stage}")


def cmd_ads_q(args) -> Outcome:
    x = load_set(args)
    f = load_coloring(args)
    sentence = load_sentence(args)
    try:
        q = ads_q_coloring(x, f, args.n, sentence, successor=args.successor, budget=make_budget(args))
    except QTotalityError as err:
        return Outcome(1, {"result": "partial", "reason": str(err)}, str(err))
    payload = json.loads(q.to_json())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(q.to_json())
    return Outcome(0, {"result": "total", "coloring": payload}, f"recoloring with {q.colors} cases")


def cmd_ads_extract(args) -> Outcome:
    x = load_set(args)
    f = load_coloring(args)
    sentence = load_sentence(args)
    out = ads_extract(x, f, args.n, sentence, make_budget(args))
    if out.status == FOUND:
        payload = {"result": "found", "subset": [str(v) for v in out.subset]}
        return Outcome(0, payload, f"homogeneous subset of {len(out.subset)} elements")
    code = 1 if out.status == ABSENT else 2
    return Outcome(code, {"result": out.status}, out.status)


def cmd_lowerbound_tree(args) -> Outcome:
    t = tree(args.base, args.rank)
    cap = args.budget or 10 ** 6
    try:
        card, top = str(t.cardinality(cap)), str(t.max_value(cap))
    except SizeOverflow:
        card = top = f"overflow(>{cap})"
    payload = {"base": str(args.base), "rank": args.rank, "cardinality": card, "max": top}
    human = f"tree base={args.base} rank={args.rank} cardinality={card} max={top}"
    if args.materialize:
        try:
            mat = t.materialize(budget=cap)
        except SizeOverflow as err:
            return Outcome(2, {**payload, "result": "overflow"}, f"{human}\nmaterialization overflow: {err}")
        payload["elements"] = [str(v) for v in mat]
        human += f"\n{' '.join(str(v) for v in mat)}"
    if args.export_theta:
        sentence = t.export_sentence()
        with open(args.export_theta, "w") as fh:
            fh.write(sentence.to_json())
        human += f"\nseparation sentence written to {args.export_theta}"
    return Outcome(0, payload, human)


def cmd_lowerbound_fx(args) -> Outcome:
    t = tree(args.base, args.rank)
    if args.value is not None:
        try:
            color = t.parity_color(args.value)
        except PreconditionError as err:
            raise UsageError(str(err)) from err
        return Outcome(0, {"value": str(args.value), "color": color}, f"f({args.value}) = {color}")
    mat = t.materialize(budget=args.budget or 10 ** 5)
    colors = {str(v): t.parity_color(v) for v in mat}
    human = " ".join(f"{v}:{c}" for v, c in colors.items())
    return Outcome(0, {"colors": colors}, human)


def cmd_lowerbound_verify(args) -> Outcome:
    base = args.base
    rank = 2 * args.n - 1
    t = tree(base, rank)
    try:
        report = verify_lower_bound(t, mode=args.mode, budget=make_budget(args))
    except SizeOverflow as err:
        return Outcome(2, {"result": "overflow", "reason": str(err)}, str(err))
    payload = {
        "status": report.status,
        "complete": report.complete,
        "checked_subsets": report.checked_subsets,
        "sub_instances": report.sub_instances,
        "detail": report.detail,
    }
    if report.status == CONFIRMED:
        return Outcome(0, payload, "confirmed: no homogeneous large subset")
    if report.status == COUNTEREXAMPLE:
        payload["witness"] = [str(v) for v in report.witness]
        return Outcome(1, payload, "counterexample found")
    return Outcome(2, payload, f"consistent with the claim ({report.detail})")


def cmd_bounds_table(args) -> Outcome:
    rows = bounds_table(args.n_max, args.k)
    payload = {
        "rows": [
            {
                "n": r.n,
                "pigeonhole": str(r.pigeonhole),
                "grouping_chain": [str(v) for v in r.grouping_chain],
                "em": str(r.em),
                "ads": str(r.ads),
                "rt22": str(r.rt22),
                "lower": str(r.lower),
            }
            for r in rows
        ]
    }
    return Outcome(0, payload, bounds_tsv(rows).rstrip("\n"))


def cmd_formula_parse(args) -> Outcome:
    try:
        phi = parse(args.text)
    except FormulaSyntaxError as err:
        raise UsageError(str(err)) from err
    return Outcome(0, {"canonical": formula_text(phi)}, formula_text(phi))


def cmd_formula_eval(args) -> Outcome:
    try:
        phi = parse(args.text)
    except FormulaSyntaxError as err:
        raise UsageError(str(err)) from err
    env = {}
    if args.env:
        for item in args.env.split(","):
            try:
                name, value = item.split("=")
                env[name.strip()] = int(value)
            except ValueError as err:
                raise UsageError(f"bad --env entry {item!r}") from err
    overflowed = []
    try:
        out = evaluate(
            phi,
            env,
            a=args.param_a,
            param=SecondOrderParam(args.param_A or ""),
            on_beyond_length=overflowed.append,
        )
    except ValueError as err:
        raise UsageError(str(err)) from err
    for pos in overflowed:
        print(f"warning: membership query at {pos} is beyond the coded length of A", file=sys.stderr)
    return Outcome(
        0 if out else 1,
        {"value": out, "beyond_length_queries": overflowed},
        "true" if out else "false",
    )


def cmd_formula_weaken(args) -> Outcome:
    if args.file:
        try:
            sentence = PrefixedSentence.from_json(open(args.file).read())
        except (OSError, ValueError, KeyError) as err:
            raise UsageError(f"{args.file}: {err}") from err
    else:
        try:
            matrix = parse(args.text)
        except FormulaSyntaxError as err:
            raise UsageError(str(err)) from err
        sentence = PrefixedSentence(
            (QuantStep("exists", "x"), QuantStep("forall", "y"), QuantStep("exists", "z")),
            matrix,
        )
    try:
        out = weakly_pi04_transform(sentence)
    except PrefixShapeError as err:
        raise UsageError(str(err)) from err
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out.to_json())
    return Outcome(0, {"sentence": json.loads(out.to_json())}, out.text())


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise UsageError(message)


def _common(p, theta=True, budget=True, coloring=False):
    p.add_argument("--floor", type=int, default=3, help="least admissible element")
    p.add_argument("--format", choices=["human", "json"], default="human")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1,
                   help="cap on internal parallelism; results never depend on it")
    if budget:
        p.add_argument("--budget", type=int, default=None, help="search step budget")
    if theta:
        p.add_argument("--theta", default="top", help="apartness formula text, or 'top'")
        p.add_argument("--theta-file", help="JSON sentence file (overrides --theta)")
        p.add_argument("--param-a", type=int, default=0)
        p.add_argument("--param-A", default="")
    if coloring:
        p.add_argument("--coloring", required=True, help="coloring table JSON file")


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="omegalarge", description=__doc__)
    sub = root.add_subparsers(dest="command", required=True)

    large = sub.add_parser("large", help="largeness checks and extractors").add_subparsers(
        dest="sub", required=True
    )
    p = large.add_parser("check")
    p.add_argument("--set")
    p.add_argument("--interval", help="LO:HI shorthand instead of --set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--mode", choices=["exhaustive", "greedy"], default="exhaustive")
    p.add_argument("--paranoid", action="store_true", help="all-pairs apartness in verification")
    p.add_argument("--cert-out", help="write the certificate JSON here")
    p.add_argument("--verify", help="verify this certificate file instead of searching")
    _common(p)
    p.set_defaults(handler=cmd_large_check)

    p = large.add_parser("minimal")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    _common(p, theta=False)
    p.set_defaults(handler=cmd_large_minimal)

    p = large.add_parser("pigeonhole")
    p.add_argument("--set")
    p.add_argument("--interval")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--sparsity", choices=[s.value for s in SparsityPolicy], default="none")
    p.add_argument("--strict", action="store_true", help="fail on counting failure instead of falling back")
    _common(p, coloring=True)
    p.set_defaults(handler=cmd_large_pigeonhole)

    p = large.add_parser("decompose")
    p.add_argument("--set")
    p.add_argument("--interval")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _common(p)
    p.set_defaults(handler=cmd_large_decompose)

    p = large.add_parser("fuse")
    p.add_argument("--blocks", nargs="+", required=True, help="block set files, increasing")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    _common(p)
    p.set_defaults(handler=cmd_large_fuse)

    p = sub.add_parser("apart")
    p.add_argument("--x", required=True, help="left set file")
    p.add_argument("--y", required=True, help="right set file")
    _common(p)
    p.set_defaults(handler=cmd_apart)

    grouping = sub.add_parser("grouping").add_subparsers(dest="sub", required=True)
    p = grouping.add_parser("find")
    p.add_argument("--set")
    p.add_argument("--interval")
    p.add_argument("--l0", required=True, help="block requirement: card:M or omega:N[:K][:top]")
    p.add_argument("--l1", required=True, help="transversal requirement")
    p.add_argument("--witness-out")
    _common(p, coloring=True)
    p.set_defaults(handler=cmd_grouping_find)

    p = grouping.add_parser("check")
    p.add_argument("--witness", required=True)
    p.add_argument("--l0", required=True)
    p.add_argument("--l1", required=True)
    _common(p, coloring=True)
    p.set_defaults(handler=cmd_grouping_check)

    gamma = sub.add_parser("gamma").add_subparsers(dest="sub", required=True)
    for name, handler in (("large", cmd_gamma_large), ("dense", cmd_gamma_dense)):
        p = gamma.add_parser(name)
        p.add_argument("--set")
        p.add_argument("--interval")
        p.add_argument("--gamma", default="custom", help="rt22|rt12|em|ads-asc|ads-desc|true|custom")
        p.add_argument("--arity", type=int, default=2)
        p.add_argument("--colors", type=int, default=2)
        p.add_argument("--psi0", default="homogeneous")
        p.add_argument("--mode", choices=["exact", "sampled"], default="exact")
        p.add_argument("--trials", type=int, default=200)
        if name == "large":
            p.add_argument("--r", type=int, required=True)
            p.add_argument("--s", type=int, default=1)
        else:
            p.add_argument("--m", type=int, required=True)
        _common(p)
        p.set_defaults(handler=handler)

    em = sub.add_parser("em").add_subparsers(dest="sub", required=True)
    p = em.add_parser("extract")
    p.add_argument("--set")
    p.add_argument("--interval")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--scaled", action="store_true", help="desk-scale internal constants")
    _common(p, coloring=True)
    p.set_defaults(handler=cmd_em_extract)

    ads = sub.add_parser("ads").add_subparsers(dest="sub", required=True)
    p = ads.add_parser("q")
    p.add_argument("--set")
    p.add_argument("--interval")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--successor", choices=["drop_max", "drop_min"], default="drop_max")
    p.add_argument("--out")
    _common(p, coloring=True)
    p.set_defaults(handler=cmd_ads_q)

    p = ads.add_parser("extract")
    p.add_argument("--set")
    p.add_argument("--interval")
    p.add_argument("--n", type=int, required=True)
    _common(p, coloring=True)
    p.set_defaults(handler=cmd_ads_extract)

    lower = sub.add_parser("lowerbound").add_subparsers(dest="sub", required=True)
    p = lower.add_parser("tree")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--materialize", action="store_true")
    p.add_argument("--export-theta", help="write the separation sentence JSON here")
    _common(p, theta=False)
    p.set_defaults(handler=cmd_lowerbound_tree)

    p = lower.add_parser("fx")
    p.add_argument("--base", type=int, default=3)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--value", type=int, help="one element; omit for the whole table")
    _common(p, theta=False)
    p.set_defaults(handler=cmd_lowerbound_fx)

    p = lower.add_parser("verify")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--base", type=int, default=3)
    p.add_argument("--mode", choices=["exhaustive", "pruned"], default="exhaustive")
    _common(p, theta=False)
    p.set_defaults(handler=cmd_lowerbound_verify)

    p = sub.add_parser("bounds-table")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    _common(p, theta=False, budget=False)
    p.set_defaults(handler=cmd_bounds_table)

    formula = sub.add_parser("formula").add_subparsers(dest="sub", required=True)
    p = formula.add_parser("parse")
    p.add_argument("text")
    _common(p, theta=False, budget=False)
    p.set_defaults(handler=cmd_formula_parse)

    p = formula.add_parser("eval")
    p.add_argument("text")
    p.add_argument("--env", help="comma-separated name=value bindings")
    p.add_argument("--param-a", type=int, default=0)
    p.add_argument("--param-A", default="")
    _common(p, theta=False, budget=False)
    p.set_defaults(handler=cmd_formula_eval)

    p = formula.add_parser("weaken")
    p.add_argument("--text", help="bounded core; the standard three-step prefix is assumed")
    p.add_argument("--file", help="prefixed sentence JSON")
    p.add_argument("--out")
    _common(p, theta=False, budget=False)
    p.set_defaults(handler=cmd_formula_weaken)

    return root


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 3
    if getattr(args, "threads", 1) < 1:
        print("usage error: --threads must be at least 1", file=sys.stderr)
        return 3
    try:
        outcome = args.handler(args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 3
    except PreconditionError as err:
        print(f"precondition violated: {err}", file=sys.stderr)
        return 3
    except BudgetExceeded as err:
        outcome = Outcome(2, {"result": "exhausted", "reason": str(err)}, str(err))
    except SizeOverflow as err:
        outcome = Outcome(2, {"result": "overflow", "reason": str(err)}, str(err))
    if args.format == "json":
        print(json.dumps({"command": args.command, "exit": outcome.code, **outcome.payload}))
    else:
        print(outcome.human)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
