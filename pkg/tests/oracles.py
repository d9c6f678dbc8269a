"""Independent reference semantics and random model generators for the tests.

Nothing here calls the library's algorithms: models are read through their raw
fields only, and every language is computed by explicit run enumeration.
"""

from __future__ import annotations

import itertools
import random
from collections import deque

from vpconf.core import BOT, DIA, TAU, Alphabet, Transition, Vpa, Vpts

# -- raw single steps -------------------------------------------------------


def _kind(alphabet, label):
    if label is None:
        return "eps"
    if label in alphabet.calls:
        return "push"
    if label in alphabet.returns:
        return "pop"
    return "simple"


def table(model):
    """state -> [(kind, transition)] built from the raw transition set."""
    out = {}
    for t in model.transitions:
        out.setdefault(t.src, []).append((_kind(model.alphabet, t.label), t))
    return out


def moves(model, state, stack, tab=None):
    """All (label, target, new stack) for one raw move; label None is unlabelled."""
    tab = table(model) if tab is None else tab
    for k, t in tab.get(state, ()):
        if k == "push":
            yield t.label, t.dst, (t.stack,) + stack
        elif k == "pop":
            if t.stack == BOT and not stack:
                yield t.label, t.dst, stack
            elif stack and stack[0] == t.stack:
                yield t.label, t.dst, stack[1:]
        else:
            yield t.label, t.dst, stack


# -- languages by run enumeration ------------------------------------------


def runs(model, max_len, tau_visible=False):
    """Every (word, state, stack) reached by a run whose word has length <= max_len.

    A depth-first walk over run prefixes; a visited set keeps loops of
    unlabelled moves finite.
    """
    tab = table(model)
    seen = set()
    stack_ = [((), s, ()) for s in model.initial]
    while stack_:
        node = stack_.pop()
        if node in seen:
            continue
        seen.add(node)
        word, state, st = node
        for label, dst, st2 in moves(model, state, st, tab):
            if label is None and not tau_visible:
                stack_.append((word, dst, st2))
            elif len(word) < max_len:
                stack_.append((word + (TAU if label is None else label,), dst, st2))
    return seen


def language(vpa, max_len):
    return {w for w, s, _ in runs(vpa, max_len) if s in vpa.finals}


def trace_set(vpts, max_len, observable=True):
    return {w for w, _, _ in runs(vpts, max_len, tau_visible=not observable)}


def configs_after(model, word):
    return {(s, st) for w, s, st in runs(model, len(word)) if w == tuple(word)}


def all_words(letters, max_len):
    letters = sorted(letters)
    out = set()
    for n in range(max_len + 1):
        out.update(itertools.product(letters, repeat=n))
    return out


def h_tau(word):
    return tuple(x for x in word if x != TAU)


# -- balanced runs by configuration search ----------------------------------


def balanced_bfs_from(vpts, p, bound=12):
    """q -> shortest word of a run (p, empty) -> (q, empty), q != p, stack height <= bound."""
    flat, pushes, pops = {}, {}, {}
    for s, entries in table(vpts).items():
        for kind, t in entries:
            label = TAU if t.label is None else t.label
            if kind == "push":
                pushes.setdefault(s, []).append((label, t.stack, t.dst))
            elif kind == "pop":
                if t.stack != BOT:
                    pops.setdefault((s, t.stack), []).append((label, t.dst))
            else:
                flat.setdefault(s, []).append((label, t.dst))
    start = (p, ())
    parent = {start: None}
    todo = deque([start])
    while todo:
        node = todo.popleft()
        state, st = node
        nxt = [(label, (dst, st)) for label, dst in flat.get(state, ())]
        if len(st) < bound:
            nxt += [(label, (dst, (z,) + st)) for label, z, dst in pushes.get(state, ())]
        if st:
            nxt += [(label, (dst, st[1:])) for label, dst in pops.get((state, st[0]), ())]
        for label, child in nxt:
            if child not in parent:
                parent[child] = (node, label)
                todo.append(child)
    out = {}
    for q in vpts.states:
        if q == p or (q, ()) not in parent:
            continue
        word, node = [], (q, ())
        while parent[node] is not None:
            node, label = parent[node]
            word.append(label)
        out[q] = tuple(reversed(word))
    return out


def balanced_bfs(vpts, p, q, bound=12):
    """Word of a run (p, empty) -> (q, empty) with stack height <= bound, or None.

    Pops on the bottom are skipped; the balanced-run setting has none.
    """
    return balanced_bfs_from(vpts, p, bound).get(q)


def replays_balanced(vpts, p, q, word):
    """Does some run on `word` (TAU = one unlabelled move) go from (p, empty) to (q, empty)?"""
    tab = table(vpts)
    current = {(p, ())}
    for a in word:
        nxt = set()
        for state, st in current:
            for label, dst, st2 in moves(vpts, state, st, tab):
                if (label is None and a == TAU) or label == a:
                    nxt.add((dst, st2))
        current = nxt
    return (q, ()) in current


def reachable_any_stack(model, targets, max_configs=20000):
    """Bounded search: is some target state reached with any stack?"""
    tab = table(model)
    start = [(s, ()) for s in model.initial]
    seen = set(start)
    todo = deque(start)
    while todo and len(seen) < max_configs:
        state, st = todo.popleft()
        if state in targets:
            return True
        for _, dst, st2 in moves(model, state, st, tab):
            if (dst, st2) not in seen:
                seen.add((dst, st2))
                todo.append((dst, st2))
    return False


# -- random models ------------------------------------------------------------


def random_alphabet(rng: random.Random, n_labels=None, io=False):
    n = n_labels or rng.randint(2, 4)
    labels = ["a", "b", "c", "d"][:n]
    roles = [rng.choice("cri") for _ in labels]
    roles[0], roles[-1] = "c", "r"
    calls = {x for x, r in zip(labels, roles) if r == "c"}
    returns = {x for x, r in zip(labels, roles) if r == "r"}
    simples = {x for x, r in zip(labels, roles) if r == "i"}
    if io:
        outputs = {x for x in labels if rng.random() < 0.4} or {labels[-1]}
        return Alphabet(calls, returns, simples, set(labels) - outputs, outputs)
    return Alphabet(calls, returns, simples)


def random_vpa(rng: random.Random, alphabet=None, n_states=None, n_gamma=None,
               deterministic=False, eps=0.2, density=0.5):
    alphabet = alphabet or random_alphabet(rng)
    n = n_states or rng.randint(1, 5)
    states = [f"p{i}" for i in range(n)]
    gamma = [f"Z{i}" for i in range(n_gamma if n_gamma is not None else rng.randint(1, 2))]
    ts = set()
    for s in states:
        if rng.random() < eps:
            ts.add(Transition(s, None, DIA, rng.choice(states)))
            if deterministic:
                continue
        for a in sorted(alphabet.calls):
            k = 1 if deterministic else rng.randint(1, 2)
            if rng.random() < density and gamma:
                for _ in range(k):
                    ts.add(Transition(s, a, rng.choice(gamma), rng.choice(states)))
        for a in sorted(alphabet.returns):
            for z in gamma + [BOT]:
                if rng.random() < density:
                    k = 1 if deterministic else rng.randint(1, 2)
                    for _ in range(k):
                        ts.add(Transition(s, a, z, rng.choice(states)))
        for a in sorted(alphabet.simples):
            if rng.random() < density:
                k = 1 if deterministic else rng.randint(1, 2)
                for _ in range(k):
                    ts.add(Transition(s, a, DIA, rng.choice(states)))
    if deterministic:
        initial = {states[0]}
    else:
        initial = set(rng.sample(states, rng.randint(1, min(2, n))))
    finals = {s for s in states if rng.random() < 0.4}
    return Vpa(states, initial, alphabet, gamma, ts, finals)


def random_vpts(rng: random.Random, alphabet=None, n_states=None, n_gamma=None,
                bottom_pops=True, internal=0.2, density=0.45, io=False):
    alphabet = alphabet or random_alphabet(rng, io=io)
    n = n_states or rng.randint(1, 8)
    states = [f"q{i}" for i in range(n)]
    gamma = [f"Z{i}" for i in range(n_gamma if n_gamma is not None else rng.randint(1, 3))]
    ts = set()
    for s in states:
        if n > 1 and rng.random() < internal:
            ts.add(Transition(s, None, DIA, rng.choice([x for x in states if x != s])))
        for a in sorted(alphabet.calls):
            if rng.random() < density:
                ts.add(Transition(s, a, rng.choice(gamma), rng.choice(states)))
        for a in sorted(alphabet.returns):
            for z in gamma + ([BOT] if bottom_pops else []):
                if rng.random() < density * 0.7:
                    ts.add(Transition(s, a, z, rng.choice(states)))
        for a in sorted(alphabet.simples):
            if rng.random() < density:
                ts.add(Transition(s, a, DIA, rng.choice(states)))
    cls = Vpts
    if alphabet.has_io:
        from vpconf.core import Iovpts
        cls = Iovpts
    return cls(states, {states[0]}, alphabet, gamma, ts)
