"""
Command-line entry point for the ex-ante influence maximization harness

    python -m app stats data/office.txt --n-bins 7
    python -m app run data/synthetic.txt --format snapshots --p 16 --lam 0.1 --k 5 --method nmf
    python -m app sweep data/synthetic.txt --format snapshots --p 16 --lam 0.1 --k 1 --k 3 --method oracle --method jc
    python -m app gen-synthetic data/synthetic.txt --seed 7

A ``--config`` TOML or JSON document overrides the corresponding flags.
The worker count comes from ``--workers`` or the IM_WORKERS variable.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import click
from pydantic import ValidationError

try:
    import tomllib
except ImportError:  # Python < 3.11
    tomllib = None

from app.config import settings
from app.core.errors import ExAnteIMError
from app.core.log import setup_logging
from app.models.experiment import (
    DATASET_DEFAULTS,
    DatasetFormat,
    DatasetRef,
    ExperimentSpec,
    ImAlgorithm,
    Method,
)
from app.models.network import AggregationScheme
from app.schemas.experiment_schema import SweepGrid
from app.services.datasets import dataset_stats, generate_stable_hub, write_snapshots
from app.services.pipeline import run_experiment
from app.services.sweep import run_sweep, write_results

logger = logging.getLogger(__name__)

FAILURES = (ExAnteIMError, ValidationError, ValueError, OSError)


def _load_config(path: Optional[Path]) -> Dict[str, Any]:
    """Read a TOML or JSON key-value document"""
    if path is None:
        return {}
    try:
        if path.suffix == ".json":
            return json.loads(path.read_text(encoding="utf-8"))
        if tomllib is None:
            raise click.ClickException(f"TOML config {path} needs Python 3.11+; use a .json config instead")
        with open(path, "rb") as f:
            return tomllib.load(f)
    except (OSError, ValueError) as e:
        raise click.ClickException(f"Could not read config {path}: {e}") from e


def _merge(flags: Dict[str, Any], config: Dict[str, Any]) -> Dict[str, Any]:
    """Config keys win over flags; nested tables are merged one level deep"""
    merged = {k: v for k, v in flags.items() if v is not None and v != ()}
    for key, value in config.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = value
    return merged


def _dataset_flags(dataset, fmt, n_bins, scheme) -> Dict[str, Any]:
    return {
        k: v for k, v in
        {"path": dataset, "format": fmt, "n_bins": n_bins, "scheme": scheme}.items()
        if v is not None
    }


def _preset(name: Optional[str]) -> Dict[str, Any]:
    """p, T, lam and IM algorithm reported for a public dataset"""
    if name is None:
        return {}
    d = DATASET_DEFAULTS[name]
    return {"p": d.p, "T": d.T, "lam": d.lam, "im_algorithm": d.im_algorithm.value}


def dataset_options(f):
    """Flags shared by every command that reads a dataset"""
    f = click.option(
        "--scheme", type=click.Choice([s.value for s in AggregationScheme]), default=None,
        help="Event binning scheme",
    )(f)
    f = click.option("--n-bins", type=int, default=None, help="Snapshots to aggregate events into")(f)
    f = click.option(
        "--format", "fmt", type=click.Choice([d.value for d in DatasetFormat]), default=None,
        help="Dataset file format [default: events]",
    )(f)
    return f


def experiment_options(f):
    """Flags mirroring ExperimentSpec fields that are not swept"""
    f = click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path),
                     default=None, help="TOML or JSON document overriding these flags")(f)
    f = click.option("--preset", type=click.Choice(sorted(DATASET_DEFAULTS)), default=None,
                     help="Use the reported p, T, lam and IM algorithm of a public dataset")(f)
    f = click.option("--q", type=int, default=None, help="NMF rank")(f)
    f = click.option("--phi", type=float, default=None, help="NMF attenuation")(f)
    f = click.option("--xi", type=float, default=None, help="Density decay for the edge budget")(f)
    f = click.option("--history", type=int, default=None, help="Train on the last HISTORY observed snapshots")(f)
    f = click.option("--seed", "rng_seed", type=int, default=None, help="Master RNG seed")(f)
    f = click.option("--mc-runs", type=int, default=None, help="Monte Carlo runs for evaluation")(f)
    f = click.option("--im-algorithm", type=click.Choice([a.value for a in ImAlgorithm]), default=None)(f)
    return f


def _hyper(xi, phi, q) -> Dict[str, Any]:
    return {k: v for k, v in {"xi": xi, "phi": phi, "q": q}.items() if v is not None}


@click.group()
@click.option("--log-level", default=settings.LOG_LEVEL, show_default=True, help="Logging level")
@click.option("--workers", type=int, default=None, help="Worker count [default: IM_WORKERS]")
@click.pass_context
def main(ctx: click.Context, log_level: str, workers: Optional[int]):
    """Ex-ante influence maximization on temporal networks."""
    setup_logging(log_level.upper())
    ctx.ensure_object(dict)
    ctx.obj["workers"] = workers or settings.IM_WORKERS


@main.command()
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@dataset_options
def stats(dataset: str, fmt: Optional[str], n_bins: Optional[int], scheme: Optional[str]):
    """Summary statistics and temporal measures of a dataset."""
    try:
        ref = DatasetRef(**_dataset_flags(dataset, fmt, n_bins, scheme))
        result = dataset_stats(ref)
    except FAILURES as e:
        raise click.ClickException(str(e)) from e
    click.echo(f"Dataset: {dataset}")
    for key, value in result.model_dump().items():
        shown = "n/a" if value is None else (f"{value:.4f}" if isinstance(value, float) else value)
        click.echo(f"  {key}: {shown}")


@main.command()
@click.argument("dataset", required=False)
@dataset_options
@experiment_options
@click.option("--p", "p", type=int, default=None, help="Observed snapshots")
@click.option("--T", "T", type=int, default=None, help="Horizon [default: all snapshots]")
@click.option("--lam", type=float, default=None, help="Infection probability")
@click.option("--k", "k", type=int, default=None, help="Seed set size")
@click.option("--method", type=click.Choice([m.value for m in Method]), default=None)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the result record as JSON")
@click.pass_context
def run(ctx: click.Context, dataset, fmt, n_bins, scheme, im_algorithm, mc_runs, rng_seed, history,
        xi, phi, q, preset, config_path, p, T, lam, k, method, out):
    """Run one observe, predict, select and evaluate experiment."""
    flags = {
        "dataset": _dataset_flags(dataset, fmt, n_bins, scheme),
        "p": p, "T": T, "lam": lam, "k": k, "method": method,
        "im_algorithm": im_algorithm, "mc_runs": mc_runs, "rng_seed": rng_seed, "history": history,
        "hyper": _hyper(xi, phi, q),
    }
    for key, value in _preset(preset).items():
        if flags.get(key) is None:
            flags[key] = value
    try:
        spec = ExperimentSpec.model_validate(_merge(flags, _load_config(config_path)))
        record = run_experiment(spec, workers=ctx.obj["workers"])
    except FAILURES as e:
        raise click.ClickException(str(e)) from e

    seeds = ", ".join(str(s) for s in record.seeds)
    click.echo(f"{record.method.value} ({record.selector.value}) k={record.k}: "
               f"spread {record.mean_spread:.3f} +/- {record.stderr:.3f}")
    click.echo(f"Seeds: {seeds}")
    if record.filled:
        click.echo(f"Filled {record.filled} seed(s) by historical degree ({record.n_active} active in prediction)")
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(record.model_dump_json(indent=2), encoding="utf-8")
        click.echo(f"Wrote {out}")


@main.command()
@click.argument("dataset", required=False)
@dataset_options
@experiment_options
@click.option("--p", "ps", type=int, multiple=True, help="Observed snapshots (repeatable)")
@click.option("--T", "Ts", type=int, multiple=True, help="Horizon (repeatable)")
@click.option("--lam", "lams", type=float, multiple=True, help="Infection probability (repeatable)")
@click.option("--k", "ks", type=int, multiple=True, help="Seed set size (repeatable)")
@click.option("--method", "methods", type=click.Choice([m.value for m in Method]), multiple=True,
              help="Method (repeatable) [default: all]")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Results directory [default: RESULTS_DIR]")
@click.option("--name", default="results", show_default=True, help="Base name of the result files")
@click.pass_context
def sweep(ctx: click.Context, dataset, fmt, n_bins, scheme, im_algorithm, mc_runs, rng_seed, history,
          xi, phi, q, preset, config_path, ps, Ts, lams, ks, methods, out, name):
    """Run every combination of k, method, lam, p and T; exit 1 if any spec fails."""
    defaults = _preset(preset)
    flags = {
        "dataset": _dataset_flags(dataset, fmt, n_bins, scheme),
        "ps": ps or ([defaults["p"]] if defaults else None),
        "Ts": Ts or ([defaults["T"]] if defaults else None),
        "lams": lams or ([defaults["lam"]] if defaults else None),
        "ks": ks, "methods": methods,
        "im_algorithm": im_algorithm or defaults.get("im_algorithm"),
        "mc_runs": mc_runs, "rng_seed": rng_seed, "history": history,
        "hyper": _hyper(xi, phi, q),
    }
    try:
        grid = SweepGrid.model_validate(_merge(flags, _load_config(config_path)))
        result = run_sweep(grid.expand(), workers=ctx.obj["workers"])
        paths = write_results(result, out or Path(settings.RESULTS_DIR), name)
    except FAILURES as e:
        raise click.ClickException(str(e)) from e

    click.echo(f"Sweep: {len(result.records)} of {len(result.specs)} specs succeeded")
    for path in paths:
        click.echo(f"Wrote {path}")
    if not result.ok:
        for failure in result.failures:
            click.echo(f"FAILED {failure.fingerprint} ({failure.spec.method.value}, k={failure.spec.k}): "
                       f"{failure.error}", err=True)
        ctx.exit(1)


@main.command("gen-synthetic")
@click.argument("out", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--n", "n", type=int, default=100, show_default=True, help="Nodes")
@click.option("--T", "T", type=int, default=20, show_default=True, help="Snapshots")
@click.option("--hubs", type=int, default=10, show_default=True, help="Planted hubs")
@click.option("--followers", type=int, default=12, show_default=True, help="Followers per hub")
@click.option("--presence", type=float, default=0.6, show_default=True, help="Hub edge presence probability")
@click.option("--churn", type=int, default=40, show_default=True, help="Random pairs per snapshot")
@click.option("--seed", type=int, default=0, show_default=True, help="Master RNG seed")
def gen_synthetic(out: Path, n: int, T: int, hubs: int, followers: int, presence: float, churn: int, seed: int):
    """Write the planted stable-hub synthetic dataset in snapshot format."""
    try:
        net = generate_stable_hub(
            n=n, T=T, n_hubs=hubs, followers=followers, presence=presence, churn=churn, seed=seed
        )
        path = write_snapshots(net, out)
    except FAILURES as e:
        raise click.ClickException(str(e)) from e
    click.echo(f"Wrote {path}: n={net.n}, T={net.T}, {sum(s.m for s in net.snapshots)} contacts")


if __name__ == "__main__":
    main()
