"""Command-line front end over the library."""

from __future__ import annotations

import argparse
import json
import sys

from . import closures
from .balanced import check_ioco, find_balanced_run
from .conformance import ConformanceSpec, check_conf
from .core import TAU, Iovpts, Vpa, Vpts, enumerate_language
from .errors import ModelError
from .iovpts import FaultModel, build_fault_model
from .modelio import resolve, save
from .vpts import contract

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _expect(model, kinds, what: str):
    if isinstance(model, FaultModel):
        model = model.model
    if not isinstance(model, kinds):
        names = "/".join(k.__name__ for k in kinds)
        raise ModelError("usage", f"{what} must be a {names} model")
    return model


def _emit_verdict(verdict, as_json: bool) -> int:
    if as_json:
        print(json.dumps({
            "verdict": "conforms" if verdict.conforms else "fail",
            "witness": list(verdict.witness or ()),
            "stats": verdict.stats,
        }, sort_keys=True))
    elif verdict.conforms:
        print("conforms")
    else:
        print("fail")
        print(" ".join(verdict.witness))
    return EXIT_OK if verdict.conforms else EXIT_FAIL


def _cmd_ioco(a):
    spec = _expect(resolve(a.spec), (Iovpts,), "--spec")
    impl = _expect(resolve(a.impl), (Iovpts,), "--impl")
    return _emit_verdict(check_ioco(spec, impl), a.json)


def _cmd_conf(a):
    spec = _expect(resolve(a.spec), (Vpts,), "--spec")
    impl = _expect(resolve(a.impl), (Vpts,), "--impl")
    d = _expect(resolve(a.desired), (Vpa,), "--desired")
    f = _expect(resolve(a.forbidden), (Vpa,), "--forbidden")
    return _emit_verdict(check_conf(impl, spec, ConformanceSpec(d, f)), a.json)


def _cmd_fault_model(a):
    spec = _expect(resolve(a.spec), (Iovpts,), "--spec")
    save(build_fault_model(spec), a.output)
    return EXIT_OK


def _binary(op):
    def run(a):
        x = _expect(resolve(a.a), (Vpa,), "A")
        y = _expect(resolve(a.b), (Vpa,), "B")
        save(op(x, y), a.output)
        return EXIT_OK
    return run


def _cmd_complement(a):
    save(closures.complement(_expect(resolve(a.a), (Vpa,), "A")), a.output)
    return EXIT_OK


def _cmd_concat(a):
    symbols = [s.strip() for s in a.suffix_set.split(",") if s.strip()]
    save(closures.concat_suffix(_expect(resolve(a.a), (Vpa,), "A"), symbols), a.output)
    return EXIT_OK


def _cmd_empty(a):
    res = closures.is_empty(_expect(resolve(a.a), (Vpa,), "A"))
    if a.json:
        print(json.dumps({"verdict": "empty" if res.empty else "nonempty",
                          "witness": list(res.witness or ()),
                          "stats": {"saturation_pairs": res.saturation_pairs}}, sort_keys=True))
    elif res.empty:
        print("empty")
    else:
        print("nonempty")
        print(" ".join(res.witness))
    return EXIT_OK if res.empty else EXIT_FAIL


def _cmd_contract(a):
    model = _expect(resolve(a.m), (Vpts,), "M")
    report = contract(model, warn=False)
    save(report.result, a.output)
    if report.removed_transitions or report.removed_states:
        print(f"removed {len(report.removed_transitions)} transitions and "
              f"{len(report.removed_states)} states", file=sys.stderr)
    return EXIT_OK


def _cmd_balanced(a):
    model = _expect(resolve(a.m), (Vpts, Vpa), "M")
    word = find_balanced_run(model, a.source, a.target)
    if word is None:
        print("none")
        return EXIT_FAIL
    print(" ".join("tau" if x == TAU else x for x in word))
    return EXIT_OK


def _cmd_enumerate(a):
    model = _expect(resolve(a.a), (Vpa,), "A")
    for w in sorted(enumerate_language(model, a.max_len), key=lambda w: (len(w), w)):
        print(" ".join(w) if w else "<eps>")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vpconf", description="Visibly pushdown conformance tools.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ioco", help="ioco-like check of an implementation against a specification")
    s.add_argument("--spec", required=True)
    s.add_argument("--impl", required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=_cmd_ioco)

    s = sub.add_parser("conf", help="(D,F)-conformance check")
    for flag in ("--spec", "--impl", "--desired", "--forbidden"):
        s.add_argument(flag, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=_cmd_conf)

    s = sub.add_parser("fault-model", help="build the fault model of a specification")
    s.add_argument("--spec", required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(run=_cmd_fault_model)

    for name, op in (("product", closures.product), ("intersect", closures.intersect),
                     ("union", closures.union)):
        s = sub.add_parser(name, help=f"{name} of two VPAs")
        s.add_argument("a")
        s.add_argument("b")
        s.add_argument("-o", "--output", required=True)
        s.set_defaults(run=_binary(op))

    s = sub.add_parser("complement", help="complement of a deterministic VPA")
    s.add_argument("a")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(run=_cmd_complement)

    s = sub.add_parser("concat", help="L(A).B for a set B of symbols")
    s.add_argument("a")
    s.add_argument("--suffix-set", required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(run=_cmd_concat)

    s = sub.add_parser("empty", help="emptiness check with a witness")
    s.add_argument("a")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=_cmd_empty)

    s = sub.add_parser("contract", help="contract a VPTS")
    s.add_argument("m")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(run=_cmd_contract)

    s = sub.add_parser("balanced", help="search a balanced run between two states")
    s.add_argument("m")
    s.add_argument("--from", dest="source", required=True)
    s.add_argument("--to", dest="target", required=True)
    s.set_defaults(run=_cmd_balanced)

    s = sub.add_parser("enumerate", help="list accepted words up to a length")
    s.add_argument("a")
    s.add_argument("--max-len", type=int, required=True)
    s.set_defaults(run=_cmd_enumerate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except ModelError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
