"""IOVPTS semantics: after/out, fault models and cross products with the passes verdict."""

from __future__ import annotations

from dataclasses import dataclass

from .balanced import Verdict, reach_any_stack
from .closures import check_deterministic, product_info
from .core import (BOT, DIA, POP, PUSH, SIMPLE, Configuration, Iovpts, Transition, Vpts,
                   fresh, observable_step, run_closure, run_word)
from .errors import ModelError
from .vpts import contract, induced_vpa, induced_vpts, is_deterministic_exact

FAIL = "_fail"


@dataclass(frozen=True)
class FaultModel:
    """Tester with swapped I/O roles and a sink `fail_state`."""

    model: Iovpts
    fail_state: str

    def __post_init__(self):
        if self.fail_state not in self.model.states:
            raise ModelError("domain", f"fail state {self.fail_state!r} is not a state")
        if self.model.outgoing(self.fail_state):
            raise ModelError("domain", "the fail state must be a sink")


def after(m: Vpts, start, w) -> set:
    """Configurations reachable from `start` along the observable word `w`."""
    return run_word(m, tuple(w), start)


def out(m: Vpts, cs) -> set:
    """Outputs enabled by an elementary move at some configuration of `cs`."""
    found = set()
    for c in cs:
        c = Configuration(*c)
        for label in m.alphabet.outputs:
            if label not in found and observable_step(m, [c], label):
                found.add(label)
    return found


def _deterministic_core(spec: Vpts) -> Vpts:
    if not is_deterministic_exact(spec):
        raise ModelError("precondition", "the specification must be deterministic")
    if all(t.label is not None for t in spec.transitions):
        if check_deterministic(induced_vpa(spec)).deterministic:
            return spec
    return contract(spec, warn=False).result


def build_fault_model(spec: Iovpts) -> FaultModel:
    """Add a fail sink reached by every output the specification does not allow."""
    if not isinstance(spec, Iovpts):
        raise ModelError("domain", "a fault model needs an IOVPTS specification")
    spec = _deterministic_core(spec)
    fail = fresh(FAIL, spec.states)
    gamma = set(spec.stack_symbols)
    outputs = spec.alphabet.outputs
    if gamma:
        z = min(gamma)
    else:
        z = "_nb"
        if outputs & spec.alphabet.calls:
            gamma.add(z)
    pops = sorted(gamma) + [BOT]
    ts = set(spec.transitions)
    for s in sorted(spec.states):
        for label in sorted(outputs):
            kind = spec.alphabet.kind(label)
            have = spec.moves.get((s, label), ())
            if kind == PUSH:
                if not have:
                    ts.add(Transition(s, label, z, fail))
            elif kind == POP:
                present = {m[1] for m in have}
                for w in pops:
                    if w not in present:
                        ts.add(Transition(s, label, w, fail))
            elif kind == SIMPLE and not have:
                ts.add(Transition(s, label, DIA, fail))
    model = Iovpts(spec.states | {fail}, spec.initial, spec.alphabet.swapped(), gamma, ts)
    return FaultModel(model, fail)


@dataclass(frozen=True)
class CrossProduct:
    vpts: Vpts
    names: dict  # (tester state, implementation state) -> state id


def cross_product_info(t, i: Vpts) -> CrossProduct:
    tester = t.model if isinstance(t, FaultModel) else t
    info = product_info(induced_vpa(tester), induced_vpa(i), reachable_only=True)
    return CrossProduct(induced_vpts(info.vpa), info.names)


def cross_product(t, i: Vpts) -> Vpts:
    """VPTS induced by the product of the induced VPAs (reachable part)."""
    return cross_product_info(t, i).vpts


def passes(i: Iovpts, t: FaultModel) -> Verdict:
    """I passes T unless some ((fail, q), stack) is reachable in T x I."""
    if not t.model.alphabet.same_partition(i.alphabet):
        raise ModelError("domain", "tester and implementation alphabets differ")
    cross = cross_product_info(t, i)
    fails = {n for (x, _), n in cross.names.items() if x == t.fail_state}
    word, stats = reach_any_stack(cross.vpts, fails)
    if word is None:
        return Verdict(True, None, "no fail configuration is reachable", stats)
    reached = after(cross.vpts, run_closure(cross.vpts, {Configuration(s, ()) for s in cross.vpts.initial}), word)
    if not any(c.state in fails for c in reached):  # pragma: no cover - internal consistency guard
        raise AssertionError(f"witness {word} does not reach the fail state")
    return Verdict(False, word, "fail state reachable", stats)
