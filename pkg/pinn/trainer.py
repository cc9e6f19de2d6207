"""PINN training loop: Adam and/or L-BFGS phases over a fixed collocation set."""

import logging
from typing import Optional

import numpy as np

from numerics.tape import Tape
from optim.adam import AdamState, adam_step
from optim.lbfgs import LbfgsState, lbfgs_step
from optim.params import Params, copy_params, flatten, unflatten
from pdes.benchmarks import DomainSpec, PdeSpec
from pdes.collocation import CollocationSet
from pinn.loss import PinnLossTerms, pinn_loss
from pinn.mlp import MlpModel
from schemas.config import PinnOptimizerConfig
from schemas.reports import PinnLossReport

logger = logging.getLogger("piml.pinn")


class _Objective:
    """Loss and gradient of the PINN loss as functions of the parameters."""

    def __init__(self, model: MlpModel, spec: PdeSpec, colloc: CollocationSet, domain: DomainSpec, cfg: PinnOptimizerConfig):
        self.model, self.spec, self.colloc, self.domain, self.cfg = model, spec, colloc, domain, cfg
        self._reports: dict[bytes, PinnLossReport] = {}

    def terms(self, params: Params) -> tuple[PinnLossTerms, Params]:
        tape = Tape()
        leaves = tape.leaves_from(params)
        terms = pinn_loss(self.model, self.spec, self.colloc, self.domain, params=leaves, weights=self.cfg.weights)
        return terms, tape.gradient(terms.total)

    def flat(self, vector: np.ndarray) -> tuple[float, np.ndarray]:
        terms, grads = self.terms(unflatten(vector, self.model.params))
        report = terms.report()
        self._reports[vector.tobytes()] = report
        return report.total, flatten(grads)

    def report_at(self, vector: np.ndarray) -> PinnLossReport:
        report = self._reports.get(vector.tobytes())
        if report is None:
            params = unflatten(vector, self.model.params)
            report = pinn_loss(self.model, self.spec, self.colloc, self.domain, params=params, weights=self.cfg.weights).report()
        self._reports = {vector.tobytes(): report}
        return report


def _plateaued(history: list[PinnLossReport], cfg: PinnOptimizerConfig) -> bool:
    if not cfg.plateau_stop or len(history) <= cfg.plateau_window:
        return False
    old = history[-1 - cfg.plateau_window].total
    new = history[-1].total
    return abs(old - new) <= cfg.plateau_tol * max(abs(old), np.finfo(float).tiny)


def train_pinn(
    model: MlpModel,
    spec: PdeSpec,
    colloc: CollocationSet,
    domain: DomainSpec,
    cfg: Optional[PinnOptimizerConfig] = None,
) -> tuple[MlpModel, list[PinnLossReport]]:
    """Run the configured optimizer phases; one history entry per epoch.

    A plateau ends the current phase only; the next phase still runs.
    Adam epochs record the loss at the iterate the step was taken from,
    L-BFGS epochs the loss at the accepted point.
    """
    cfg = cfg or PinnOptimizerConfig()
    objective = _Objective(model, spec, colloc, domain, cfg)
    params = copy_params(model.params)
    history: list[PinnLossReport] = []

    for phase in cfg.phases:
        if phase.epochs == 0:
            continue
        logger.info("pinn phase start", extra={"benchmark": spec.name, "optimizer": phase.kind, "epochs": phase.epochs})
        start = len(history)
        stopped = False
        if phase.kind == "adam":
            state = AdamState.create(params, lr=phase.lr)
            for _ in range(phase.epochs):
                terms, grads = objective.terms(params)
                history.append(terms.report(len(history)))
                params = adam_step(state, params, grads)
                _log_epoch(history[-1], cfg)
                stopped = _plateaued(history[start:], cfg)
                if stopped:
                    break
        else:
            state = LbfgsState()
            vector = flatten(params)
            for _ in range(phase.epochs):
                vector, _ = lbfgs_step(state, vector, objective.flat)
                report = objective.report_at(vector).model_copy(update={"epoch": len(history)})
                history.append(report)
                _log_epoch(history[-1], cfg)
                stopped = _plateaued(history[start:], cfg)
                if stopped:
                    break
            params = unflatten(vector, model.params)
            if state.fallbacks:
                logger.warning("lbfgs fallbacks during phase", extra={"benchmark": spec.name, "fallbacks": state.fallbacks})
        if stopped:
            logger.info("pinn phase plateaued", extra={"benchmark": spec.name, "optimizer": phase.kind, "epoch": history[-1].epoch})

    return model.with_params(params), history


def _log_epoch(last: PinnLossReport, cfg: PinnOptimizerConfig) -> None:
    if last.epoch % cfg.log_every == 0:
        logger.info(
            "pinn epoch",
            extra={"epoch": last.epoch, "total": last.total, "residual": last.residual_term, "ic": last.ic_term, "bc": last.bc_term},
        )
