"""(D, F)-visible conformance: the complete test suite and its decision procedure."""

from __future__ import annotations

from dataclasses import dataclass

from .balanced import Verdict
from .closures import (check_deterministic, complement, concat_suffix, empty_vpa, intersect,
                       is_empty, product, union, universal_vpa)
from .core import Vpa, Vpts, accepts
from .errors import ModelError
from .vpts import contract, induced_vpa, is_deterministic_exact


@dataclass(frozen=True)
class ConformanceSpec:
    desired: Vpa  # D
    forbidden: Vpa  # F


@dataclass(frozen=True)
class TestSuiteVpa:
    suite: Vpa
    bound: int  # (n_S n_F + 1)(n_S n_D + n_D + 1)

    __test__ = False  # not a pytest class


def suite_bound(n_s: int, n_d: int, n_f: int) -> int:
    return (n_s * n_f + 1) * (n_s * n_d + n_d + 1)


def _check_alphabets(spec: Vpts, cs: ConformanceSpec) -> None:
    for name, m in (("desired", cs.desired), ("forbidden", cs.forbidden)):
        if not m.alphabet.same_partition(spec.alphabet):
            raise ModelError("domain", f"{name} language uses a different alphabet partition")


def _spec_vpa(spec: Vpts) -> Vpa:
    if not is_deterministic_exact(spec):
        raise ModelError("precondition", "the specification must be deterministic")
    return induced_vpa(contract(spec, warn=False).result)


def build_test_suite(spec: Vpts, cs: ConformanceSpec) -> TestSuiteVpa:
    """VPA for (D & comp otr(S)) | (F & otr(S))."""
    _check_alphabets(spec, cs)
    for name, m in (("desired", cs.desired), ("forbidden", cs.forbidden)):
        if not check_deterministic(m).deterministic:
            raise ModelError("precondition", f"the {name} language VPA must be deterministic")
    a1 = _spec_vpa(spec)
    b1 = complement(a1)
    # reachable parts only; the language and the state bound are unaffected
    a2 = intersect(cs.forbidden, a1, reachable_only=True)
    b2 = intersect(cs.desired, b1, reachable_only=True)
    suite = union(a2, b2, reachable_only=True)
    bound = suite_bound(len(a1.states), len(cs.desired.states), len(cs.forbidden.states))
    if len(suite.states) > bound:  # pragma: no cover - guarded by construction
        raise AssertionError(f"suite has {len(suite.states)} states, bound {bound}")
    return TestSuiteVpa(suite, bound)


def violates(impl_vpa: Vpa, spec_vpa: Vpa, cs: ConformanceSpec, w) -> bool:
    """Direct check of the conformance conditions on one word."""
    if not accepts(impl_vpa, w):
        return False
    in_spec = accepts(spec_vpa, w)
    return (accepts(cs.desired, w) and not in_spec) or (accepts(cs.forbidden, w) and in_spec)


def check_conf(impl: Vpts, spec: Vpts, cs: ConformanceSpec) -> Verdict:
    """Decide impl conf_{D,F} spec as emptiness of otr(impl) & L(suite)."""
    if not impl.alphabet.same_partition(spec.alphabet):
        raise ModelError("domain", "specification and implementation alphabets differ")
    suite = build_test_suite(spec, cs)
    impl_vpa = induced_vpa(contract(impl, warn=False).result)
    notes = []
    if not is_deterministic_exact(impl):
        notes.append("implementation is not deterministic; a 'conforms' verdict is outside the proven hypothesis")
    meet = product(impl_vpa, suite.suite, reachable_only=True)
    res = is_empty(meet)
    stats = {"states": len(meet.states), "transitions": len(meet.transitions),
             "saturation_pairs": res.saturation_pairs}
    if res.empty:
        return Verdict(True, None, "; ".join(notes + ["suite and implementation traces are disjoint"]), stats)
    w = res.witness
    if not violates(impl_vpa, induced_vpa(spec), cs, w):  # pragma: no cover - consistency guard
        raise AssertionError(f"conformance witness {w} failed validation")
    return Verdict(False, w, "; ".join(notes + ["witness validated"]), stats)


def adheres(impl: Vpts, suite: TestSuiteVpa) -> bool:
    """otr(impl) & L(suite) is empty."""
    return is_empty(product(induced_vpa(impl), suite.suite, reachable_only=True)).empty


def otr_concat(spec: Vpts, b_set) -> Vpa:
    """VPA for otr(spec) . B."""
    return concat_suffix(induced_vpa(spec), b_set)


def ioco_spec(spec: Vpts) -> ConformanceSpec:
    """(D, F) = (otr(S) . L_U, {}) under which conformance coincides with ioco-like."""
    return ConformanceSpec(otr_concat(spec, spec.alphabet.outputs), empty_vpa(spec.alphabet))


__all__ = ["ConformanceSpec", "TestSuiteVpa", "adheres", "build_test_suite", "check_conf",
           "empty_vpa", "ioco_spec", "otr_concat", "suite_bound", "universal_vpa", "violates"]
