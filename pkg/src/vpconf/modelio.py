"""JSON model format: validation with JSON-path diagnostics, canonical
serialisation, and the bundled model corpus."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .core import (RESERVED, Alphabet, Iovpts, Transition, Vpa, Vpts, transition_key,
                   transition_problem)
from .errors import ModelError
from .iovpts import FaultModel

KINDS = ("vpa", "vpts", "iovpts")
ALPHABET_KEYS = ("calls", "returns", "simples", "inputs", "outputs")
TRANSITION_KEYS = frozenset({"from", "label", "stack", "to"})
TOP_KEYS = frozenset({"kind", "alphabet", "states", "initial", "stack_symbols", "finals",
                      "transitions", "fail_state"})


def _ids(doc, key: str, path: str, what: str, required: bool = True) -> list:
    if key not in doc:
        if required:
            raise ModelError("schema", f"missing field {key!r}", path)
        return []
    xs = doc[key]
    here = f"{path}.{key}"
    if not isinstance(xs, list):
        raise ModelError("schema", "expected a list", here)
    for i, x in enumerate(xs):
        if not isinstance(x, str) or not x:
            raise ModelError("schema", f"{what} must be a non-empty string", f"{here}[{i}]")
        if x in RESERVED:
            raise ModelError("reserved-id", f"{x!r} is reserved", f"{here}[{i}]")
    return xs


def from_document(doc):
    """Validate a parsed document and build the model it describes."""
    if not isinstance(doc, dict):
        raise ModelError("schema", "document must be a JSON object", "$")
    extra = set(doc) - TOP_KEYS
    if extra:
        raise ModelError("schema", f"unknown fields {sorted(extra)}", "$")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ModelError("schema", f"kind must be one of {list(KINDS)}", "$.kind")
    ab = doc.get("alphabet")
    if not isinstance(ab, dict):
        raise ModelError("schema", "alphabet must be an object", "$.alphabet")
    if set(ab) - set(ALPHABET_KEYS):
        raise ModelError("schema", f"unknown alphabet fields {sorted(set(ab) - set(ALPHABET_KEYS))}", "$.alphabet")
    parts = {}
    for key in ALPHABET_KEYS:
        parts[key] = _ids(ab, key, "$.alphabet", "label", required=key in ("calls", "returns", "simples"))
    seen = {}
    for key in ("calls", "returns", "simples"):
        for i, x in enumerate(parts[key]):
            if x in seen and seen[x] != key:
                raise ModelError("partition", f"{x!r} is in both {seen[x]} and {key}", f"$.alphabet.{key}[{i}]")
            seen[x] = key
    if kind == "iovpts" and not (parts["inputs"] or parts["outputs"]):
        raise ModelError("partition", "an iovpts needs inputs and outputs", "$.alphabet")
    try:
        alphabet = Alphabet(*(parts[k] for k in ALPHABET_KEYS))
    except ModelError as e:
        raise ModelError(e.code, e.message, "$.alphabet") from None
    states = _ids(doc, "states", "$", "state")
    initial = _ids(doc, "initial", "$", "state")
    gamma = _ids(doc, "stack_symbols", "$", "stack symbol")
    sset, gset = frozenset(states), frozenset(gamma)
    for i, s in enumerate(initial):
        if s not in sset:
            raise ModelError("domain", f"{s!r} is not a declared state", f"$.initial[{i}]")
    if kind == "vpa":
        finals = _ids(doc, "finals", "$", "state")
        for i, s in enumerate(finals):
            if s not in sset:
                raise ModelError("domain", f"{s!r} is not a declared state", f"$.finals[{i}]")
    elif "finals" in doc:
        raise ModelError("schema", f"a {kind} has no final states", "$.finals")
    ts = doc.get("transitions")
    if not isinstance(ts, list):
        raise ModelError("schema", "transitions must be a list", "$.transitions")
    parsed = []
    for i, t in enumerate(ts):
        here = f"$.transitions[{i}]"
        if not isinstance(t, dict) or set(t) != TRANSITION_KEYS:
            raise ModelError("schema", f"transition needs exactly the fields {sorted(TRANSITION_KEYS)}", here)
        for key in ("from", "stack", "to"):
            if not isinstance(t[key], str):
                raise ModelError("schema", f"{key} must be a string", f"{here}.{key}")
        if t["label"] is not None and not isinstance(t["label"], str):
            raise ModelError("schema", "label must be a string or null", f"{here}.label")
        tr = Transition(t["from"], t["label"], t["stack"], t["to"])
        problem = transition_problem(tr, alphabet, gset, sset)
        if problem:
            raise ModelError(problem[0], problem[1], here)
        if kind != "vpa" and tr.label is None and tr.src == tr.dst:
            raise ModelError("domain", "internal self-loops are not allowed", here)
        parsed.append(tr)
    if "fail_state" in doc and kind != "iovpts":
        raise ModelError("schema", "only an iovpts fault model has a fail state", "$.fail_state")
    try:
        if kind == "vpa":
            return Vpa(states, initial, alphabet, gamma, parsed, finals)
        if kind == "vpts":
            return Vpts(states, initial, alphabet, gamma, parsed)
        model = Iovpts(states, initial, alphabet, gamma, parsed)
        if "fail_state" in doc:
            return FaultModel(model, doc["fail_state"])
        return model
    except ModelError as e:
        raise ModelError(e.code, e.message, e.path or "$") from None


def to_document(model) -> dict:
    """Canonical document: sorted id lists, transitions sorted lexicographically."""
    fail = None
    if isinstance(model, FaultModel):
        model, fail = model.model, model.fail_state
    if isinstance(model, Vpa):
        kind = "vpa"
    elif isinstance(model, Iovpts):
        kind = "iovpts"
    elif isinstance(model, Vpts):
        kind = "vpts"
    else:
        raise ModelError("usage", f"cannot serialise {type(model).__name__}")
    a = model.alphabet
    alphabet = {"calls": sorted(a.calls), "returns": sorted(a.returns), "simples": sorted(a.simples)}
    if a.has_io:
        alphabet["inputs"] = sorted(a.inputs)
        alphabet["outputs"] = sorted(a.outputs)
    doc = {
        "kind": kind,
        "alphabet": alphabet,
        "states": sorted(model.states),
        "initial": sorted(model.initial),
        "stack_symbols": sorted(model.stack_symbols),
        "transitions": [{"from": t.src, "label": t.label, "stack": t.stack, "to": t.dst}
                        for t in sorted(model.transitions, key=transition_key)],
    }
    if kind == "vpa":
        doc["finals"] = sorted(model.finals)
    if fail is not None:
        doc["fail_state"] = fail
    return doc


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError("schema", f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return from_document(doc)


def dumps(model) -> str:
    return json.dumps(to_document(model), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def canonicalize(text: str) -> str:
    return dumps(loads(text))


def load(path):
    return loads(Path(path).read_text(encoding="utf-8"))


def save(model, path) -> None:
    Path(path).write_text(dumps(model), encoding="utf-8")


def corpus_names() -> list:
    root = resources.files("vpconf") / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_corpus(name: str):
    name = name[:-5] if name.endswith(".json") else name
    path = resources.files("vpconf") / "corpus" / f"{name}.json"
    if not path.is_file():
        raise ModelError("usage", f"no bundled model named {name!r}")
    return loads(path.read_text(encoding="utf-8"))


def resolve(arg: str):
    """Load a model from a path, falling back to a bundled corpus name."""
    p = Path(arg)
    if p.is_file():
        return load(p)
    try:
        return load_corpus(p.name)
    except ModelError:
        raise ModelError("usage", f"no such model file or bundled model: {arg!r}") from None
