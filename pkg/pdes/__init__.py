from pdes.benchmarks import BENCHMARKS, BoundaryKind, DomainSpec, IcTerm, PdeSpec, make_benchmark, residual_eval
from pdes.collocation import CollocationCounts, CollocationSet, sample_collocation

__all__ = [
    "BENCHMARKS",
    "BoundaryKind",
    "CollocationCounts",
    "CollocationSet",
    "DomainSpec",
    "IcTerm",
    "PdeSpec",
    "make_benchmark",
    "residual_eval",
    "sample_collocation",
]
