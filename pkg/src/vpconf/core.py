"""Alphabets, models, configurations and run semantics."""

from __future__ import annotations

import warnings
from collections import defaultdict, deque
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Union

from .errors import ModelError

BOT = "_bot"
DIA = "_dia"
TAU = "_tau"
RESERVED = frozenset({BOT, DIA, TAU})

MAX_ENUM_LEN = 10
DEFAULT_BUDGET = 10**6

Word = tuple  # tuple of str

PUSH, POP, SIMPLE, INTERNAL = "push", "pop", "simple", "internal"


def fresh(base: str, taken: Iterable[str]) -> str:
    """Return `base`, primed until it avoids every id in `taken`."""
    taken = taken if isinstance(taken, (set, frozenset, dict)) else set(taken)
    while base in taken:
        base += "'"
    return base


def erase(word: Iterable[str], symbols: Iterable[str]) -> Word:
    """Morphism deleting every occurrence of `symbols` from `word`."""
    drop = frozenset(symbols)
    return tuple(x for x in word if x not in drop)


def _fs(xs) -> frozenset:
    if isinstance(xs, str):
        raise ModelError("schema", f"expected a collection of ids, got string {xs!r}")
    return frozenset(xs)


def _check_ids(kind: str, ids: Iterable) -> None:
    for x in ids:
        if not isinstance(x, str) or not x:
            raise ModelError("schema", f"{kind} id must be a non-empty string, got {x!r}")
        if x in RESERVED:
            raise ModelError("reserved-id", f"{kind} id {x!r} is reserved")


@dataclass(frozen=True)
class Alphabet:
    """Visibly pushdown alphabet with an optional input/output view."""

    calls: frozenset = frozenset()
    returns: frozenset = frozenset()
    simples: frozenset = frozenset()
    inputs: frozenset = frozenset()
    outputs: frozenset = frozenset()

    def __post_init__(self):
        for name in ("calls", "returns", "simples", "inputs", "outputs"):
            object.__setattr__(self, name, _fs(getattr(self, name)))
            _check_ids("label", getattr(self, name))
        c, r, i = self.calls, self.returns, self.simples
        if c & r or c & i or r & i:
            both = sorted((c & r) | (c & i) | (r & i))
            raise ModelError("partition", f"labels in more than one of calls/returns/simples: {both}")
        if self.inputs or self.outputs:
            if self.inputs & self.outputs:
                raise ModelError("partition", f"labels both input and output: {sorted(self.inputs & self.outputs)}")
            if self.inputs | self.outputs != self.letters:
                raise ModelError("partition", "inputs and outputs must cover calls/returns/simples exactly")

    @cached_property
    def letters(self) -> frozenset:
        return self.calls | self.returns | self.simples

    @property
    def has_io(self) -> bool:
        return bool(self.inputs or self.outputs)

    def kind(self, label: str | None) -> str:
        if label is None or label == TAU:
            return INTERNAL
        if label in self.calls:
            return PUSH
        if label in self.returns:
            return POP
        if label in self.simples:
            return SIMPLE
        raise ModelError("domain", f"unknown label {label!r}")

    def same_partition(self, other: "Alphabet") -> bool:
        return (self.calls, self.returns, self.simples) == (other.calls, other.returns, other.simples)

    def swapped(self) -> "Alphabet":
        return replace(self, inputs=self.outputs, outputs=self.inputs)

    def extended(self, calls=(), returns=(), simples=()) -> "Alphabet":
        """Add fresh labels; an I/O view, if present, files them as inputs."""
        extra = frozenset(calls) | frozenset(returns) | frozenset(simples)
        return Alphabet(
            self.calls | frozenset(calls),
            self.returns | frozenset(returns),
            self.simples | frozenset(simples),
            self.inputs | extra if self.has_io else frozenset(),
            self.outputs,
        )

    def without_io(self) -> "Alphabet":
        return Alphabet(self.calls, self.returns, self.simples)


class Transition(NamedTuple):
    src: str
    label: str | None  # None is epsilon in a VPA and the internal action in a VPTS
    stack: str
    dst: str


def transition_key(t: Transition) -> tuple:
    return (t.src, "" if t.label is None else t.label, t.stack, t.dst)


class Configuration(NamedTuple):
    state: str
    stack: tuple = ()  # topmost first; the bottom marker is implicit


def transition_problem(t, alphabet: Alphabet, gamma: frozenset, states: frozenset):
    """Return (code, message) if `t` breaks well-formedness, else None."""
    if t.src not in states or t.dst not in states:
        return "domain", f"endpoint of {tuple(t)} is not a state"
    if t.label is None:
        if t.stack != DIA:
            return "partition", f"unlabelled transition {tuple(t)} must carry {DIA}"
        return None
    if t.label in RESERVED:
        return "reserved-id", f"label {t.label!r} is reserved"
    if t.label in alphabet.calls:
        ok = t.stack in gamma
    elif t.label in alphabet.returns:
        ok = t.stack in gamma or t.stack == BOT
    elif t.label in alphabet.simples:
        ok = t.stack == DIA
    else:
        return "domain", f"label {t.label!r} of {tuple(t)} is not in the alphabet"
    if not ok:
        return "partition", f"stack symbol {t.stack!r} does not fit the class of {t.label!r}"
    return None


class _Semantics:
    """Indexes shared by Vpa and Vpts."""

    def _validate_common(self):
        for name in ("states", "initial", "stack_symbols", "transitions"):
            object.__setattr__(self, name, _fs(getattr(self, name)))
        _check_ids("state", self.states)
        _check_ids("stack symbol", self.stack_symbols)
        if not isinstance(self.alphabet, Alphabet):
            raise ModelError("schema", "alphabet must be an Alphabet")
        if not self.initial <= self.states:
            raise ModelError("domain", f"initial states not declared: {sorted(self.initial - self.states)}")
        ts = set()
        for t in self.transitions:
            t = Transition(*t)
            problem = transition_problem(t, self.alphabet, self.stack_symbols, self.states)
            if problem:
                raise ModelError(*problem)
            ts.add(t)
        object.__setattr__(self, "transitions", frozenset(ts))

    @cached_property
    def moves(self) -> dict:
        """(state, label) -> tuple of (kind, stack symbol, target)."""
        idx = defaultdict(list)
        for t in self.sorted_transitions:
            idx[(t.src, t.label)].append((self.alphabet.kind(t.label), t.stack, t.dst))
        return {k: tuple(v) for k, v in idx.items()}

    @cached_property
    def by_source(self) -> dict:
        idx = defaultdict(list)
        for t in self.sorted_transitions:
            idx[t.src].append(t)
        return {k: tuple(v) for k, v in idx.items()}

    @cached_property
    def internal_succ(self) -> dict:
        idx = defaultdict(list)
        for t in self.sorted_transitions:
            if t.label is None:
                idx[t.src].append(t.dst)
        return {k: tuple(v) for k, v in idx.items()}

    @cached_property
    def sorted_transitions(self) -> tuple:
        return tuple(sorted(self.transitions, key=transition_key))

    def outgoing(self, state: str) -> tuple:
        return self.by_source.get(state, ())

    def transition_kind(self, t: Transition) -> str:
        return self.alphabet.kind(t.label)


@dataclass(frozen=True)
class Vpa(_Semantics):
    """Visibly pushdown automaton; acceptance by final state, any stack."""

    states: frozenset
    initial: frozenset
    alphabet: Alphabet
    stack_symbols: frozenset
    transitions: frozenset
    finals: frozenset

    def __post_init__(self):
        self._validate_common()
        object.__setattr__(self, "finals", _fs(self.finals))
        if not self.finals <= self.states:
            raise ModelError("domain", f"final states not declared: {sorted(self.finals - self.states)}")


@dataclass(frozen=True)
class Vpts(_Semantics):
    """Visibly pushdown transition system; unlabelled transitions are internal."""

    states: frozenset
    initial: frozenset
    alphabet: Alphabet
    stack_symbols: frozenset
    transitions: frozenset

    def __post_init__(self):
        self._validate_common()
        for t in self.transitions:
            if t.label is None and t.src == t.dst:
                raise ModelError("domain", f"internal self-loop {tuple(t)} is not allowed")


@dataclass(frozen=True)
class Iovpts(Vpts):
    """VPTS whose labels are split into inputs and outputs."""

    def __post_init__(self):
        super().__post_init__()
        if not self.alphabet.has_io:
            raise ModelError("partition", "an IOVPTS needs inputs and outputs")


Model = Union[Vpa, Vpts]


def reachable_states(model: Model) -> frozenset:
    """States reachable from an initial state in the transition graph."""
    seen = set(model.initial)
    todo = deque(sorted(model.initial))
    while todo:
        s = todo.popleft()
        for t in model.outgoing(s):
            if t.dst not in seen:
                seen.add(t.dst)
                todo.append(t.dst)
    return frozenset(seen)


def restrict(model: Model, keep: Iterable[str]) -> Model:
    """Drop every state outside `keep` together with its transitions."""
    keep = frozenset(keep)
    ts = frozenset(t for t in model.transitions if t.src in keep and t.dst in keep)
    extra = {"finals": model.finals & keep} if isinstance(model, Vpa) else {}
    return replace(model, states=keep, initial=model.initial & keep, transitions=ts, **extra)


def prune_unreachable(model: Model, warn: bool = True) -> Model:
    keep = reachable_states(model)
    if keep == model.states:
        return model
    if warn:
        warnings.warn(f"pruned unreachable states {sorted(model.states - keep)}", stacklevel=2)
    return restrict(model, keep)


def _label_arg(model: Model, label):
    if label is None or label == TAU:
        return None
    if label not in model.alphabet.letters:
        raise ModelError("domain", f"unknown label {label!r}")
    return label


def _succ(model: Model, c: Configuration, label) -> Iterator[Configuration]:
    st = c.stack
    for kind, z, q in model.moves.get((c.state, label), ()):
        if kind == PUSH:
            yield Configuration(q, (z,) + st)
        elif kind == POP:
            if z == BOT:
                if not st:
                    yield Configuration(q, st)
            elif st and st[0] == z:
                yield Configuration(q, st[1:])
        else:
            yield Configuration(q, st)


def step(model: Model, c: Configuration, label) -> set:
    """Configurations reachable from `c` by one elementary move on `label`.

    `label` None (or TAU) selects the unlabelled moves.
    """
    c = Configuration(*c)
    if c.state not in model.states:
        raise ModelError("domain", f"unknown state {c.state!r}")
    return set(_succ(model, c, _label_arg(model, label)))


def run_closure(model: Model, cs: Iterable) -> set:
    """Least superset of `cs` closed under unlabelled moves."""
    out = {Configuration(*c) for c in cs}
    todo = list(out)
    succ = model.internal_succ
    while todo:
        c = todo.pop()
        for q in succ.get(c.state, ()):
            d = Configuration(q, c.stack)
            if d not in out:
                out.add(d)
                todo.append(d)
    return out


def initial_configurations(model: Model) -> set:
    return {Configuration(s, ()) for s in model.initial}


def observable_step(model: Model, cs: Iterable, label: str) -> set:
    """Closure of the label-successors of `cs` (assumes `cs` already closed)."""
    label = _label_arg(model, label)
    nxt = set()
    for c in cs:
        nxt.update(_succ(model, c, label))
    return run_closure(model, nxt)


def run_word(model: Model, w: Iterable[str], start: Iterable | None = None) -> set:
    cs = run_closure(model, initial_configurations(model) if start is None else start)
    for a in w:
        if not cs:
            break
        cs = observable_step(model, cs, a)
    return cs


def accepts(vpa: Vpa, w: Iterable[str]) -> bool:
    w = tuple(w)
    for a in w:
        if a not in vpa.alphabet.letters:
            raise ModelError("domain", f"unknown label {a!r}")
    return any(c.state in vpa.finals for c in run_word(vpa, w))


def _check_len(max_len: int, bound: int) -> None:
    if max_len < 0 or max_len > bound:
        raise ModelError("usage", f"max_len {max_len} outside 0..{bound}")


def explore(model: Model, max_len: int, *, closure: bool = True, with_tau: bool = False,
            bound: int = MAX_ENUM_LEN, budget: int = DEFAULT_BUDGET) -> dict:
    """Map every live word of length <= max_len to its configuration set.

    With `closure` unlabelled moves are absorbed; with `with_tau` they are
    read as the visible symbol TAU instead.
    """
    _check_len(max_len, bound)
    labels = sorted(model.alphabet.letters)
    first = initial_configurations(model)
    layer = {(): frozenset(run_closure(model, first) if closure else first)}
    seen = dict(layer)
    count = len(layer[()])
    for _ in range(max_len):
        nxt = {}
        for w, cs in layer.items():
            for a in labels + ([TAU] if with_tau else []):
                key = None if a == TAU else a
                ds = set()
                for c in cs:
                    ds.update(_succ(model, c, key))
                if closure:
                    ds = run_closure(model, ds)
                if ds:
                    count += len(ds)
                    if count > budget:
                        raise ModelError("budget", f"more than {budget} configurations explored")
                    nxt[w + (a,)] = frozenset(ds)
        seen.update(nxt)
        layer = nxt
    return seen


def enumerate_language(vpa: Vpa, max_len: int, bound: int = MAX_ENUM_LEN,
                       budget: int = DEFAULT_BUDGET) -> set:
    """All accepted words of length <= max_len."""
    table = explore(vpa, max_len, bound=bound, budget=budget)
    return {w for w, cs in table.items() if any(c.state in vpa.finals for c in cs)}


def traces(vpts: Model, max_len: int, observable: bool = True, bound: int = MAX_ENUM_LEN,
           budget: int = DEFAULT_BUDGET) -> set:
    """tr (TAU kept as a symbol) or otr (internal moves erased), length <= max_len."""
    if observable:
        return set(explore(vpts, max_len, bound=bound, budget=budget))
    return set(explore(vpts, max_len, closure=False, with_tau=True, bound=bound, budget=budget))
