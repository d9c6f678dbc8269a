"""Visibly pushdown automata and transition systems with conformance checking."""

from .balanced import (Saturation, Verdict, check_ioco, find_balanced_run, saturate,
                       transform_empty_stack, transform_no_empty_pops)
from .closures import (DeterminismReport, EmptinessResult, check_deterministic, complement,
                       concat_suffix, empty_vpa, intersect, is_empty, make_non_blocking, product,
                       remove_epsilon, remove_epsilon_deterministic, union, universal_vpa)
from .conformance import (ConformanceSpec, TestSuiteVpa, adheres, build_test_suite, check_conf,
                          ioco_spec, otr_concat)
from .core import (BOT, DIA, TAU, Alphabet, Configuration, Iovpts, Transition, Vpa, Vpts,
                   accepts, enumerate_language, erase, run_closure, step, traces)
from .errors import ModelError
from .iovpts import FaultModel, after, build_fault_model, cross_product, out, passes
from .modelio import corpus_names, dumps, load, load_corpus, loads, save
from .vpts import (ContractionReport, check_vpts_deterministic, contract, induced_vpa,
                   induced_vpts, is_contracted)

__all__ = [
    "BOT", "DIA", "TAU", "Alphabet", "Configuration", "ConformanceSpec", "ContractionReport",
    "DeterminismReport", "EmptinessResult", "FaultModel", "Iovpts", "ModelError", "Saturation",
    "TestSuiteVpa", "Transition", "Verdict", "Vpa", "Vpts", "accepts", "adheres", "after",
    "build_fault_model", "build_test_suite", "corpus_names", "dumps", "load", "load_corpus", "loads",
    "save", "check_conf", "check_deterministic", "check_ioco",
    "check_vpts_deterministic", "complement", "concat_suffix", "contract", "cross_product",
    "empty_vpa", "enumerate_language", "erase", "find_balanced_run", "induced_vpa",
    "induced_vpts", "intersect", "ioco_spec", "is_contracted", "is_empty", "make_non_blocking",
    "otr_concat", "out", "passes", "product", "remove_epsilon", "remove_epsilon_deterministic",
    "run_closure", "saturate", "step", "traces", "transform_empty_stack",
    "transform_no_empty_pops", "union", "universal_vpa",
]
