from enum import Enum
from pathlib import Path
from typing import Annotated, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from pdes.benchmarks import BENCHMARKS
from schemas.grid import DEFAULT_MODES


class CellKind(str, Enum):
    CORNN = "cornn"
    LEM = "lem"
    RNN = "rnn"
    LSTM = "lstm"
    GRU = "gru"


class DampingMode(str, Enum):
    IMPLICIT = "implicit"
    EXPLICIT = "explicit"


class RolloutStart(str, Enum):
    TRAINING_BOUNDARY = "training_boundary"
    PINN_FIRST_TEST_LEVEL = "pinn_first_test_level"


class LossWeights(BaseModel):
    residual: Annotated[float, Field(ge=0)] = 1.0
    ic: Annotated[float, Field(ge=0)] = 1.0
    bc: Annotated[float, Field(ge=0)] = 1.0


class OptimizerPhase(BaseModel):
    kind: Literal["adam", "lbfgs"]
    epochs: Annotated[int, Field(ge=0)]
    lr: Annotated[float, Field(gt=0)] = 1e-3


class PinnOptimizerConfig(BaseModel):
    phases: list[OptimizerPhase] = Field(default_factory=lambda: [OptimizerPhase(kind="lbfgs", epochs=3500)])
    weights: LossWeights = Field(default_factory=LossWeights)
    plateau_stop: bool = False
    plateau_tol: Annotated[float, Field(gt=0)] = 1e-6
    plateau_window: Annotated[int, Field(ge=2)] = 200
    log_every: Annotated[int, Field(ge=1)] = 500

    @property
    def epochs(self) -> int:
        return sum(phase.epochs for phase in self.phases)


class PinnSection(PinnOptimizerConfig):
    hidden: list[Annotated[int, Field(ge=1)]] = Field(default_factory=lambda: [20, 20, 20, 20])
    residual_points: Annotated[int, Field(gt=0)] = 1000
    boundary_points: Annotated[int, Field(gt=0)] = 600
    ic_fraction: Annotated[float, Field(gt=0, lt=1)] = 0.5


class OscillatorConfig(BaseModel):
    """Cell kind and hyperparameters; ``d_in`` is filled in from the grid."""

    cell: CellKind = CellKind.LEM
    d_in: Annotated[int, Field(ge=1)] = 1
    hidden: Annotated[int, Field(ge=1)] = 32
    delta_t: Annotated[float, Field(gt=0, lt=1)] = 0.01
    gamma: Annotated[float, Field(gt=0)] = 1.0
    epsilon: Annotated[float, Field(gt=0)] = 0.01
    lr: Optional[Annotated[float, Field(gt=0)]] = None
    epochs: Annotated[int, Field(ge=0)] = 20000
    damping: DampingMode = DampingMode.IMPLICIT
    seed: int = 0
    log_every: Annotated[int, Field(ge=1)] = 1000


class RolloutSection(BaseModel):
    warm_start: bool = True
    first_input: RolloutStart = RolloutStart.TRAINING_BOUNDARY


class GridSection(BaseModel):
    k_t: Annotated[int, Field(ge=4)] = 80
    k_x: Annotated[int, Field(ge=2)] = 256

    @model_validator(mode="after")
    def _check_split(self):
        if self.k_t % 4:
            raise ValueError(f"k_t={self.k_t} must be divisible by 4 so the test horizon k_t/4 is integral")
        return self

    @property
    def horizon(self) -> int:
        return self.k_t // 4


class SolverSection(BaseModel):
    modes: Annotated[int, Field(ge=16)] = DEFAULT_MODES
    dt_max: Annotated[float, Field(gt=0)] = 1e-4
    dealias: bool = True


class BenchmarkSection(BaseModel):
    name: str = "burgers"
    nu: Optional[Annotated[float, Field(gt=0)]] = None
    t_test_end: Optional[Annotated[float, Field(gt=0)]] = None

    @model_validator(mode="after")
    def _check_name(self):
        if self.name not in BENCHMARKS:
            raise ValueError(f"unknown benchmark {self.name!r}; expected one of {BENCHMARKS}")
        return self

    def overrides(self) -> dict[str, float]:
        return {key: value for key, value in (("nu", self.nu), ("t_test_end", self.t_test_end)) if value is not None}


class MetricsSection(BaseModel):
    include_training_window: bool = False


class PathsSection(BaseModel):
    out: Path = Path("runs")
    cache: Path = Path(".cache/piml")


class SweepSection(BaseModel):
    cells: list[CellKind] = Field(default_factory=lambda: list(CellKind))
    delta_t: list[Annotated[float, Field(gt=0, lt=1)]] = Field(default_factory=lambda: [0.1, 0.3, 0.5, 0.7, 0.9])
    # (epsilon, gamma) pairs
    cornn_lattice: list[tuple[float, float]] = Field(
        default_factory=lambda: [(eps, gamma) for eps in (0.01, 0.1, 1.0) for gamma in (0.5, 1.0, 2.0)]
    )
    nu_train: list[Annotated[float, Field(gt=0)]] = Field(default_factory=lambda: [0.005, 0.015, 0.025, 0.035])
    nu_test: list[Annotated[float, Field(gt=0)]] = Field(default_factory=lambda: [0.05])
    pinn_epochs: list[Annotated[int, Field(ge=0)]] = Field(default_factory=lambda: [500, 1000, 2000, 3500])
    workers: Annotated[int, Field(ge=1)] = 1


class ExperimentConfig(BaseModel):
    benchmark: BenchmarkSection = Field(default_factory=BenchmarkSection)
    seed: int = 0
    replicates: Annotated[int, Field(ge=1)] = 1
    pinn: PinnSection = Field(default_factory=PinnSection)
    oscillator: OscillatorConfig = Field(default_factory=OscillatorConfig)
    rollout: RolloutSection = Field(default_factory=RolloutSection)
    grid: GridSection = Field(default_factory=GridSection)
    solver: SolverSection = Field(default_factory=SolverSection)
    metrics: MetricsSection = Field(default_factory=MetricsSection)
    paths: PathsSection = Field(default_factory=PathsSection)
    sweep: SweepSection = Field(default_factory=SweepSection)

    def for_replicate(self, replicate: int) -> "ExperimentConfig":
        return self.model_copy(update={"seed": self.seed + replicate}, deep=True)
