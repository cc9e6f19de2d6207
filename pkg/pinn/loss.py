"""Physics-informed loss: PDE residual, initial and boundary mismatch."""

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from numerics import tape as ad
from numerics.errors import NumericError
from numerics.jet import FieldFn, field_derivatives
from pdes.benchmarks import BoundaryKind, DomainSpec, PdeSpec, residual_rows
from pdes.collocation import CollocationSet
from pinn.mlp import MlpModel, mlp_field
from schemas.config import LossWeights
from schemas.reports import PinnLossReport


@dataclass
class PinnLossTerms:
    total: Any
    residual_term: Any
    ic_term: Any
    bc_term: Any

    def report(self, epoch: int = 0) -> PinnLossReport:
        return PinnLossReport(
            epoch=epoch,
            total=_scalar(self.total),
            residual_term=_scalar(self.residual_term),
            ic_term=_scalar(self.ic_term),
            bc_term=_scalar(self.bc_term),
        )


def _scalar(value: Any) -> float:
    return float(np.asarray(ad.value_of(value)).reshape(()))


def _mean_square(rows: Any) -> Any:
    """Sum over channels of the mean square over points."""
    if isinstance(rows, list):
        total = 0.0
        for row in rows:
            total = total + (row * row).mean()
        return total
    squared = rows * rows
    if isinstance(squared, ad.Var):
        return squared.mean(axis=1).sum() if squared.ndim == 2 else squared.mean()
    squared = np.asarray(squared)
    return squared.mean(axis=1).sum() if squared.ndim == 2 else squared.mean()


def _check(name: str, term: Any) -> Any:
    value = _scalar(term)
    if not np.isfinite(value):
        raise NumericError("non-finite loss term", value=value, context=name)
    return term


def _boundary_term(spec: PdeSpec, field: FieldFn, domain: DomainSpec, bc_t: np.ndarray) -> Any:
    lower = field_derivatives(field, np.full_like(bc_t, domain.x_min), bc_t, spec.bc_orders)
    upper = field_derivatives(field, np.full_like(bc_t, domain.x_max), bc_t, spec.bc_orders)
    if spec.bc_kind is BoundaryKind.PERIODIC:
        return _mean_square(lower[(0, 0)] - upper[(0, 0)]) + _mean_square(lower[(1, 0)] - upper[(1, 0)])
    term = 0.0
    for order in spec.bc_orders:
        term = term + _mean_square(lower[order]) + _mean_square(upper[order])
    return term


def pinn_loss(
    model: Optional[MlpModel],
    spec: PdeSpec,
    colloc: CollocationSet,
    domain: DomainSpec,
    *,
    params: Optional[dict[str, Any]] = None,
    weights: Optional[LossWeights] = None,
    field: Optional[FieldFn] = None,
) -> PinnLossTerms:
    """Assemble the loss; differentiable on the tape when ``params`` are ``Var``s.

    ``field`` replaces the network with any evaluator ``(X, T) -> Jet``.
    """
    weights = weights or LossWeights()
    field = field or mlp_field(model, params)

    x, t = colloc.residual_x, colloc.residual_t
    derivs = field_derivatives(field, x, t, spec.derivative_orders)
    residual_term = _check("residual", _mean_square(residual_rows(spec, derivs, x, t)))

    ic_x = colloc.ic_x
    ic_orders = [(0, term.order_t) for term in spec.ic_terms]
    ic_derivs = field_derivatives(field, ic_x, np.zeros_like(ic_x), ic_orders)
    ic_term = 0.0
    for term in spec.ic_terms:
        ic_term = ic_term + _mean_square(ic_derivs[(0, term.order_t)] - term.target(ic_x))
    ic_term = _check("ic", ic_term)

    bc_term = _check("bc", _boundary_term(spec, field, domain, colloc.bc_t))

    total = weights.residual * residual_term + weights.ic * ic_term + weights.bc * bc_term
    return PinnLossTerms(total=_check("total", total), residual_term=residual_term, ic_term=ic_term, bc_term=bc_term)
