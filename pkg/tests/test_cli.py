from pathlib import Path

from typer.testing import CliRunner

from main import app
from services.config_loader import dump_config

runner = CliRunner()


def _config_file(config, tmp_path: Path) -> Path:
    path = tmp_path / "tiny.yaml"
    path.write_text(dump_config(config))
    return path


def test_run_then_report(tiny_config, tmp_path):
    path = _config_file(tiny_config, tmp_path)
    result = runner.invoke(app, ["run", "--config", str(path)])
    assert result.exit_code == 0, result.output
    out = Path(tiny_config.paths.out)
    assert (out / "runs.db").exists()

    result = runner.invoke(app, ["report", "--config", str(path)])
    assert result.exit_code == 0, result.output
    assert (out / "report" / "summary.csv").exists()


def test_stage_commands_in_sequence(tiny_config, tmp_path):
    path = str(_config_file(tiny_config, tmp_path))
    for command in ("solve-reference", "train-pinn", "train-oscillator", "rollout", "evaluate"):
        result = runner.invoke(app, [command, "--config", path])
        assert result.exit_code == 0, f"{command}: {result.output}"


def test_invalid_config_exits_with_config_code(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("grid.k_t: 42\n")
    assert runner.invoke(app, ["run", "--config", str(path)]).exit_code == 2
    assert runner.invoke(app, ["run", "--config", str(tmp_path / "absent.yaml")]).exit_code == 2


def test_rollout_without_oscillator_exits_nonzero(tiny_config, tmp_path):
    result = runner.invoke(app, ["rollout", "--config", str(_config_file(tiny_config, tmp_path))])
    assert result.exit_code != 0
