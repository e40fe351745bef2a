import json
import sys
from pathlib import Path

import click
from loguru import logger
from pydantic import ValidationError

from apps.auto_binning.domain import ConfigError, DataError, RunConfig, SolverError, SynthSpec
from apps.auto_binning.domain.exceptions import config_error_from
from apps.auto_binning.pipelines import compare, fit, predict, synth
from apps.auto_binning.settings import settings
from apps.auto_binning.utils import drop_none, merge_dicts

COMPONENT_ERRORS = (DataError, ConfigError, SolverError, FileNotFoundError, click.UsageError, click.Abort)


class AutoBinningGroup(click.Group):
    """
    Click group that reports every failure as one `error:` line on stderr.

    Usage, data, configuration and solver errors exit with 1, anything else with 2.
    """
    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            return super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except COMPONENT_ERRORS as error:
            click.echo(f"error: {_message(error)}", err=True)
            sys.exit(1)
        except Exception as error:
            logger.opt(exception=error).debug("Unhandled failure")
            click.echo(f"error: {_message(error)}", err=True)
            sys.exit(2)


def _message(error: BaseException) -> str:
    if isinstance(error, click.ClickException):
        message = error.format_message()
    elif isinstance(error, click.Abort):
        message = "aborted"
    else:
        message = str(error) or type(error).__name__
    return " ".join(message.split())


def _configure_logging() -> None:
    logger.remove()
    logger.add(
        lambda message: sys.stderr.write(message),
        level=settings.LOG_LEVEL,
        format="{time:HH:mm:ss} | {level: <7} | {message}",
    )


def _read_config(config_path: Path | None) -> dict:
    """Values of a JSON config file, or an empty dict without one."""
    if config_path is None:
        return {}
    if not config_path.is_file():
        raise FileNotFoundError(f"config file not found: '{config_path}'")
    try:
        values = json.loads(config_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as error:
        raise ConfigError(f"invalid config '{config_path}': {error}") from None
    if not isinstance(values, dict):
        raise ConfigError(f"invalid config '{config_path}': expected a JSON object")
    return values


def _parse_multipliers(ctx: click.Context, param: click.Parameter, value: str | None) -> tuple[float, ...] | None:
    if value is None:
        return None
    try:
        return tuple(float(item) for item in value.split(",") if item.strip())
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got '{value}'") from None


def _run_config(config_path: Path | None, **flags) -> RunConfig:
    """Merge flags over the JSON config (flags win) and validate."""
    values = merge_dicts(_read_config(config_path), drop_none(flags))
    logger.debug(f"Run configuration: {values}")
    return RunConfig.build(values)


def run_options(command):
    """Flags shared by `fit` and `compare`."""
    options = [
        click.option("--config", "config_path", type=click.Path(path_type=Path), help="JSON run configuration; flags override it."),
        click.option("--input", "input", type=click.Path(path_type=Path), help="Training CSV with a header row."),
        click.option("--target", type=str, help="Name of the 0/1 target column (default y)."),
        click.option("--nbins", type=int, help="Fine grid size (default 20)."),
        click.option("--prebinning", type=click.Choice(["quantile", "uniform"]), help="Fine grid rule."),
        click.option("--group-weights", type=click.Choice(["sqrt_size", "unit"]), help="Group weight rule."),
        click.option("--folds", type=int, help="Cross-validation folds (default 5)."),
        click.option("--seed", type=int, help="Fold assignment seed (default 0)."),
        click.option("--lambda2-count", type=int, help="Number of lambda2 values on the path."),
        click.option("--lambda2-ratio", type=float, help="Smallest lambda2 as a fraction of lambda2_max."),
        click.option("--lambda1-multipliers", callback=_parse_multipliers, help="Comma-separated lambda1 / lambda2 ratios."),
        click.option("--tol", type=float, help="Merge and drop tolerance (default 1e-6)."),
        click.option("--out", type=click.Path(path_type=Path), help="Output directory."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


@click.group(cls=AutoBinningGroup)
def cli() -> None:
    """
    Supervised binning of continuous variables for logistic scorecards.
    """
    _configure_logging()


@cli.command("fit")
@run_options
@click.option(
    "--refit-merged/--no-refit-merged",
    default=None,
    help="Refit the merged bins without penalty.",
)
def fit_command(config_path: Path | None, **flags) -> None:
    """
    Fit a binning model and write model.json, grid.json, scorecard.csv and path.csv.
    """
    outcome = fit(_run_config(config_path, **flags))
    selected, model = outcome.path.selected, outcome.model

    click.echo(f"selected lambda1={selected.lambda1:.6g} lambda2={selected.lambda2:.6g}")
    click.echo(f"kept variables ({len(model.variables)} of {len(model.features)}): {', '.join(model.kept) or '-'}")
    click.echo(f"merged bins: {model.total_bins}")
    click.echo(
        f"cv AUC {selected.mean_auc:.4f} (sd {selected.sd_auc:.4f}), training AUC {model.provenance.train_auc:.4f}"
    )


@cli.command("predict")
@click.option("--model", "model_path", required=True, type=click.Path(path_type=Path), help="Model JSON from fit.")
@click.option("--input", "input_path", required=True, type=click.Path(path_type=Path), help="CSV to score.")
@click.option("--out", "output_path", required=True, type=click.Path(path_type=Path), help="Scores CSV file or directory.")
def predict_command(model_path: Path, input_path: Path, output_path: Path) -> None:
    """
    Score a CSV with a saved model; writes one "score" column.
    """
    scores = predict(model_path, input_path, output_path)
    click.echo(f"scored {scores.size} rows")


@cli.command("compare")
@run_options
@click.option("--no-abm", is_flag=True, default=False, help="Only evaluate the baselines.")
def compare_command(config_path: Path | None, no_abm: bool, **flags) -> None:
    """
    Compare automatic binning with the baselines on shared folds; writes comparison.csv.
    """
    table, output_path = compare(_run_config(config_path, **flags), include_abm=not no_abm)
    for row in table.rows:
        click.echo(
            f"{row.method}: mean AUC {row.mean_auc:.4f} (sd {row.sd_auc:.4f}), "
            f"{row.kept_vars} variables, {row.total_bins} bins"
        )
    click.echo(f"written {output_path}")


@cli.command("synth")
@click.option("--config", "config_path", type=click.Path(path_type=Path), help="JSON synthetic layout; overrides the flags.")
@click.option("--n", "n", type=int, default=5000, show_default=True, help="Rows.")
@click.option("--p", "p", type=int, default=5, show_default=True, help="Variables.")
@click.option("--informative", type=int, default=2, show_default=True, help="Leading informative variables.")
@click.option("--seed", type=int, default=0, show_default=True, help="Generator seed.")
@click.option("--out", "output_path", required=True, type=click.Path(path_type=Path), help="CSV file or directory.")
def synth_command(config_path: Path | None, n: int, p: int, informative: int, seed: int, output_path: Path) -> None:
    """
    Write a synthetic dataset with piecewise-constant logit and a "y" target column.
    """
    spec = None
    if config_path is not None:
        try:
            spec = SynthSpec.model_validate(_read_config(config_path))
        except ValidationError as error:
            raise config_error_from(error) from None
    elif n < 1 or p < 1 or informative < 0:
        raise ConfigError("invalid synth size: --n and --p must be positive, --informative nonnegative")

    data = synth(spec, output_path, n=n, p=p, informative=informative, seed=seed)
    click.echo(f"wrote {data.n_rows} rows x {data.n_features} variables")


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
