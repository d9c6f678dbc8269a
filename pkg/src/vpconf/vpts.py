"""VPTS determinism, contraction through a reachability grammar, and the
conversions between VPTSs and VPAs."""

from __future__ import annotations

import warnings
from collections import defaultdict, deque
from dataclasses import dataclass

from .closures import check_deterministic
from .core import (BOT, DEFAULT_BUDGET, POP, PUSH, Configuration, Iovpts, Vpa, Vpts, explore,
                   initial_configurations, reachable_states)
from .errors import ModelError

NONE = "_none"


def induced_vpa(vpts: Vpts) -> Vpa:
    """Same transitions, internal moves read as epsilon, every state final."""
    return Vpa(vpts.states, vpts.initial, vpts.alphabet, vpts.stack_symbols,
               vpts.transitions, vpts.states)


def induced_vpts(vpa: Vpa) -> Vpts:
    """Inverse of `induced_vpa`; needs every state final.

    Epsilon self-loops carry no behaviour and are dropped.
    """
    if vpa.finals != vpa.states:
        raise ModelError("domain", "every state must be final to induce a VPTS")
    ts = {t for t in vpa.transitions if not (t.label is None and t.src == t.dst)}
    cls = Iovpts if vpa.alphabet.has_io else Vpts
    return cls(vpa.states, vpa.initial, vpa.alphabet, vpa.stack_symbols, ts)


@dataclass(frozen=True)
class VptsDeterminism:
    deterministic: bool  # bounded semantic verdict
    syntactic: bool  # sufficient check: no internal moves and a deterministic induced VPA
    witness: tuple | None = None  # shortest word reaching two configurations

    def __bool__(self) -> bool:
        return self.deterministic


def vpts_determinism(vpts: Vpts, max_len: int = 6, budget: int = DEFAULT_BUDGET) -> VptsDeterminism:
    syntactic = (all(t.label is not None for t in vpts.transitions)
                 and check_deterministic(induced_vpa(vpts)).deterministic)
    table = explore(vpts, max_len, budget=budget)
    bad = [w for w, cs in table.items() if len(cs) > 1]
    witness = min(bad, key=lambda w: (len(w), w)) if bad else None
    return VptsDeterminism(witness is None, syntactic, witness)


def check_vpts_deterministic(vpts: Vpts, max_len: int = 6) -> bool:
    """Bounded semantic check: every observable word of length <= max_len
    reaches at most one configuration."""
    return vpts_determinism(vpts, max_len).deterministic


def is_deterministic_exact(vpts: Vpts) -> bool:
    """Exact sufficient condition used as a precondition by the checkers."""
    if all(t.label is not None for t in vpts.transitions) and check_deterministic(induced_vpa(vpts)):
        return True
    core = contract(vpts, warn=False).result
    return (all(t.label is not None for t in core.transitions)
            and check_deterministic(induced_vpa(core)).deterministic)


@dataclass(frozen=True)
class ContractionReport:
    result: Vpts
    removed_transitions: frozenset
    removed_states: frozenset


class _Grammar:
    """Nonterminals [s, Z, p]: runs from s with Z on top that end by popping Z
    into p; [s, bottom, NONE] stands for runs that never go below the bottom."""

    def __init__(self, vpts: Vpts):
        self.v = vpts
        self.kind = {t: vpts.alphabet.kind(t.label) for t in vpts.transitions}
        self.states = sorted(vpts.states)
        self.productive = self._productive()

    def _productive(self) -> set:
        v, kind = self.v, self.kind
        prod = set()
        todo = deque()
        simple_into = defaultdict(list)  # q -> sources of simple/internal moves into q
        push_into = defaultdict(list)  # q -> (source, W)
        for t in v.transitions:
            k = kind[t]
            if k == PUSH:
                push_into[t.dst].append((t.src, t.stack))
            elif k == POP:
                if t.stack != BOT:
                    todo.append((t.src, t.stack, t.dst))
            else:
                simple_into[t.dst].append(t.src)
        ends = defaultdict(set)  # r -> {(q, W) : [q, W, r] productive}
        starts = defaultdict(set)  # r -> {(Z, p) : [r, Z, p] productive}

        def add(n):
            if n not in prod:
                prod.add(n)
                todo.append(n)

        pending = list(todo)
        todo.clear()
        for n in pending:
            add(n)
        while todo:
            q, z, p = todo.popleft()
            ends[p].add((q, z))
            starts[q].add((z, p))
            for s in simple_into.get(q, ()):
                add((s, z, p))
            # [q, z, p] as the left child: push (s, a, z, q) then [p, Z', p']
            for s, w in push_into.get(q, ()):
                if w == z:
                    for z2, p2 in list(starts[p]):
                        add((s, z2, p2))
            # [q, z, p] as the right child: push (s, a, W, q') with [q', W, q]
            for q2, w in list(ends[q]):
                for s, w2 in push_into.get(q2, ()):
                    if w2 == w:
                        add((s, z, p))
        return prod

    def leftmost(self) -> set:
        """LN: nonterminals reachable in leftmost position from the start symbols."""
        v, kind, prod = self.v, self.kind, self.productive
        ln = set()
        todo = deque()

        def add(n):
            if n not in ln:
                ln.add(n)
                todo.append(n)

        for s in sorted(v.initial):
            add((s, BOT, NONE))
        while todo:
            s, z, p = todo.popleft()
            for t in v.outgoing(s):
                k = kind[t]
                if k == PUSH:
                    for r in self.states:
                        add((t.dst, t.stack, r))
                        if (t.dst, t.stack, r) in prod:
                            add((r, z, p))
                elif k == POP:
                    if z == BOT and t.stack == BOT:
                        add((t.dst, BOT, NONE))
                else:
                    add((t.dst, z, p))
        return ln


def _kept(vpts: Vpts, grammar: _Grammar, ln: set) -> set:
    kept = set()
    for s, z, p in ln:
        for t in vpts.outgoing(s):
            if grammar.kind[t] != POP:
                kept.add(t)
            elif t.stack == z and ((z != BOT and p == t.dst) or (z == BOT and p == NONE)):
                kept.add(t)
    return kept


def contract(vpts: Vpts, warn: bool = True) -> ContractionReport:
    """Drop pop transitions no run can take, then unreachable states; tr is unchanged."""
    g = _Grammar(vpts)
    kept = _kept(vpts, g, g.leftmost())
    core = type(vpts)(vpts.states, vpts.initial, vpts.alphabet, vpts.stack_symbols, kept)
    live = reachable_states(core)
    removed_states = vpts.states - live
    if removed_states and warn:
        warnings.warn(f"pruned unreachable states {sorted(removed_states)}", stacklevel=2)
    ts = frozenset(t for t in kept if t.src in live and t.dst in live)
    result = type(vpts)(live, vpts.initial, vpts.alphabet, vpts.stack_symbols, ts)
    return ContractionReport(result, frozenset(vpts.transitions - ts), frozenset(removed_states))


def uncontracted_pops(vpts: Vpts) -> tuple:
    """Pop transitions that no reachable configuration enables (exact)."""
    g = _Grammar(vpts)
    ln = g.leftmost()
    bad = []
    for t in vpts.sorted_transitions:
        if g.kind[t] != POP:
            continue
        need = (t.src, BOT, NONE) if t.stack == BOT else None
        if need is not None:
            ok = need in ln
        else:
            ok = (t.src, t.stack, t.dst) in ln
        if not ok:
            bad.append(t)
    return tuple(bad)


def _bounded_contracted(vpts: Vpts, budget: int):
    pops = [t for t in vpts.sorted_transitions if vpts.alphabet.kind(t.label) == POP]
    want = {(t.src, t.stack) for t in pops}
    seen = set(initial_configurations(vpts))
    todo = deque(seen)
    while todo and want:
        c = todo.popleft()
        want.discard((c.state, c.stack[0] if c.stack else BOT))
        for t in vpts.outgoing(c.state):
            k = vpts.alphabet.kind(t.label)
            if k == PUSH:
                d = (t.dst, (t.stack,) + c.stack)
            elif k == POP:
                if t.stack == BOT:
                    if c.stack:
                        continue
                    d = (t.dst, c.stack)
                elif c.stack and c.stack[0] == t.stack:
                    d = (t.dst, c.stack[1:])
                else:
                    continue
            else:
                d = (t.dst, c.stack)
            if d not in seen:
                if len(seen) >= budget:
                    return None
                d = Configuration(*d)
                seen.add(d)
                todo.append(d)
    return not want


def is_contracted(vpts: Vpts, budget: int = 0):
    """True iff every pop transition is enabled at some reachable configuration.

    budget 0 is exact; a positive budget runs a bounded configuration search
    and returns None when the budget runs out before a decision.
    """
    if budget == 0:
        return not uncontracted_pops(vpts)
    return _bounded_contracted(vpts, budget)


__all__ = [
    "ContractionReport", "VptsDeterminism", "check_vpts_deterministic", "contract",
    "induced_vpa", "induced_vpts", "is_contracted", "is_deterministic_exact",
    "uncontracted_pops", "vpts_determinism",
]
