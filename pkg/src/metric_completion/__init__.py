"""Metrics on bounded derived categories of Z, the Kronecker algebra and A_n,
their lattice of equivalence classes, and the classification of completions."""
from .errors import MetricCompletionError
from .fields import FiniteField, Rational, SymbolicUncountable, closed_point, formal_point, point
from .labels import all_primes, cofinite, everything, finite, primes, primes_from
from .indec import (DynkinAn, IntegerRing, Interval, Kronecker, KroneckerColimit, LocalizedFree,
                    Preinjective, Preprojective, Regular, ZFree, ZTorsion, euler_form,
                    hom_invariants, tau, tau_inverse)
from .derived import (ModuleMap, SplitObject, canonical_preprojective_map, cone_of_module_map,
                      graded_hom, integer_map, multiplication_map, shift)
from .thick import ThickDescriptor, exceptional, regular_part, thick_closure, torsion
from .metric import (MetricNF, Verdict, ball_contains, converges_uniformly, equivalent, finer_leq,
                     join, kernel_B, meet, mk_aisle, mk_coaisle, mk_constant, mk_nf, mk_t_structure,
                     mk_tail, normal_form_text, t_submetric)
from .classify import CompletionReport, classify, compact_support_index, is_member
from .cauchy import hocolim_model, is_cauchy, small_object_sequence
from .specfile import parse, parse_file

__version__ = "1.0.0"

__all__ = [
    "MetricCompletionError", "FiniteField", "Rational", "SymbolicUncountable", "closed_point",
    "formal_point", "point", "all_primes", "cofinite", "everything", "finite", "primes",
    "primes_from", "DynkinAn", "IntegerRing", "Interval", "Kronecker", "KroneckerColimit",
    "LocalizedFree", "Preinjective", "Preprojective", "Regular", "ZFree", "ZTorsion", "euler_form",
    "hom_invariants", "tau", "tau_inverse", "ModuleMap", "SplitObject",
    "canonical_preprojective_map", "cone_of_module_map", "graded_hom", "integer_map",
    "multiplication_map", "shift", "ThickDescriptor", "exceptional", "regular_part",
    "thick_closure", "torsion", "MetricNF", "Verdict", "ball_contains", "converges_uniformly",
    "equivalent", "finer_leq", "join", "kernel_B", "meet", "mk_aisle", "mk_coaisle", "mk_constant",
    "mk_nf", "mk_t_structure", "mk_tail", "normal_form_text", "t_submetric", "CompletionReport",
    "classify", "compact_support_index", "is_member", "hocolim_model", "is_cauchy",
    "small_object_sequence", "parse", "parse_file",
]
