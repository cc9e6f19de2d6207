import typer
from dotenv import load_dotenv

from commands.report_commands import report
from commands.run_commands import run
from commands.stage_commands import evaluate, rollout, solve_reference, train_oscillator, train_pinn
from commands.sweep_commands import sweep
from middleware.exception_handlers import register_exception_handlers
from services.logging_setup import configure_logging

load_dotenv()

app = typer.Typer(
    name="piml",
    help="Train a PINN on the training window, hand its grid to a neural oscillator and extrapolate in time.",
    no_args_is_help=True,
    add_completion=False,
)


@app.callback()
def startup(log_level: str = typer.Option(None, "--log-level", help="Overrides PIML_LOG_LEVEL.")):
    configure_logging(log_level)


COMMANDS = {
    "run": run,
    "sweep": sweep,
    "report": report,
    "solve-reference": solve_reference,
    "train-pinn": train_pinn,
    "train-oscillator": train_oscillator,
    "rollout": rollout,
    "evaluate": evaluate,
}

for name, command in COMMANDS.items():
    app.command(name)(register_exception_handlers(command))


if __name__ == "__main__":
    app()
