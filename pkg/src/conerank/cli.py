"""Command line interface.

Exit codes: 2 input validation, 3 improper/infeasible cone, 4 algorithm
precondition (non-pointed cone, no interior, non-separable labels). All
command output is canonical JSON, byte-identical to the HTTP service.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import api, plotting
from .classify import NotSeparableError
from .geometry import (
    GeometryError,
    ImproperConeError,
    NoInteriorError,
    NotPointedError,
)
from .ranking import DEFAULT_SEED, RankingInputError
from .store import CsvError, RevisionConflictError, Store, UnknownDatasetError, parse_csv

EXIT_VALIDATION = 2
EXIT_INFEASIBLE_CONE = 3
EXIT_PRECONDITION = 4


def _store(path: str | None) -> Store:
    root = path or os.environ.get("CONERANK_STORE") or "./conerank-store"
    return Store(root)


def _emit(payload: dict) -> None:
    sys.stdout.buffer.write(api.to_canonical_bytes(payload))
    sys.stdout.buffer.flush()


def _load_cone(cone_file: str, dim: int):
    try:
        config = json.loads(Path(cone_file).read_text())
    except FileNotFoundError:
        raise CliInputError(f"cone file not found: {cone_file}") from None
    except json.JSONDecodeError as e:
        raise CliInputError(f"cone file is not valid JSON: {e}") from None
    return api.resolve_cone(config, dim)


class CliInputError(ValueError):
    pass


def _run(fn):
    """Map library errors to the documented exit codes."""
    try:
        fn()
    except (ImproperConeError,) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_INFEASIBLE_CONE)
    except (NotPointedError, NoInteriorError, NotSeparableError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_PRECONDITION)
    except (
        CliInputError,
        CsvError,
        RankingInputError,
        GeometryError,
        UnknownDatasetError,
        RevisionConflictError,
        json.JSONDecodeError,
    ) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_VALIDATION)


def _get_dataset(store: Store, dataset: str | None, csv_file: str | None, revision: int | None):
    if (dataset is None) == (csv_file is None):
        raise CliInputError("give exactly one of --dataset or --csv")
    if csv_file is not None:
        try:
            text = Path(csv_file).read_text()
        except FileNotFoundError:
            raise CliInputError(f"CSV file not found: {csv_file}") from None
        return store.put_new(*parse_csv(text))
    return store.get(dataset, revision)


store_opt = click.option("--store", "store_path", default=None, help="Store directory (or CONERANK_STORE).")
dataset_opt = click.option("--dataset", default=None, help="Stored dataset id.")
csv_opt = click.option("--csv", "csv_file", default=None, help="Ad hoc CSV (ingested into the store).")
revision_opt = click.option("--revision", type=int, default=None, help="Dataset revision (default latest).")
cone_opt = click.option("--cone", "cone_file", required=True, help="Cone config JSON file.")


@click.group()
def main():
    """Exact cone rankings for multi-criteria alternatives."""


@main.command()
@click.argument("csv_path")
@store_opt
def ingest(csv_path, store_path):
    """Validate and persist a CSV dataset."""

    def go():
        store = _store(store_path)
        try:
            text = Path(csv_path).read_text()
        except FileNotFoundError:
            raise CliInputError(f"CSV file not found: {csv_path}") from None
        ds = store.ingest_csv(text)
        _emit(api.dataset_payload(ds))

    _run(go)


@main.command()
@dataset_opt
@csv_opt
@revision_opt
@cone_opt
@store_opt
@click.option("--point", "points", multiple=True, help="Extra query point 'x,y,...' (repeatable).")
@click.option("--oracle-samples", type=int, default=None, help="Also run the sampling oracle.")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True, help="Oracle RNG seed.")
@click.option("--plot", "plot_file", default=None, help="Write an SVG scatter to this path.")
@click.option("--axes", default="0,1", show_default=True, help="Coordinate pair to plot for d > 2.")
def rank(dataset, csv_file, revision, cone_file, store_path, points, oracle_samples, seed, plot_file, axes):
    """Exact cone ranks with witness weights."""

    def go():
        store = _store(store_path)
        ds = _get_dataset(store, dataset, csv_file, revision)
        cone = _load_cone(cone_file, ds.alternatives.dim)
        if ds.alternatives.size > 200 or ds.alternatives.dim > 4:
            click.echo(
                "warning: exact evaluation beyond N=200 or d=4 may be slow; "
                "consider --oracle-samples for an upper-bound survey",
                err=True,
            )
        query = [tuple(p.split(",")) for p in points] or None
        payload = api.rank_payload(ds, cone, query_points=query, oracle_samples=oracle_samples, seed=seed)
        if plot_file:
            ax = tuple(int(a) for a in axes.split(","))
            payload["plot"] = plotting.write_plot(payload, plot_file, axes=ax)
        _emit(payload)

    _run(go)


@main.command()
@dataset_opt
@csv_opt
@revision_opt
@cone_opt
@store_opt
@click.option("--sets", "sets_file", required=True, help='JSON file {"sets": {"A": ["id1", ...]}}.')
def setrank(dataset, csv_file, revision, cone_file, store_path, sets_file):
    """Set rankings: max cone rank and domination indicator per set."""

    def go():
        store = _store(store_path)
        ds = _get_dataset(store, dataset, csv_file, revision)
        cone = _load_cone(cone_file, ds.alternatives.dim)
        try:
            sets_def = json.loads(Path(sets_file).read_text())
        except FileNotFoundError:
            raise CliInputError(f"sets file not found: {sets_file}") from None
        if not isinstance(sets_def, dict) or "sets" not in sets_def:
            raise CliInputError('sets file must contain {"sets": {...}}')
        _emit(api.setrank_payload(ds, cone, sets_def["sets"]))

    _run(go)


@main.command()
@dataset_opt
@csv_opt
@revision_opt
@cone_opt
@store_opt
@click.option("--add", "add_file", default=None, help="JSON file with a list of points to add.")
@click.option("--remove", default=None, help="Comma-separated ids to remove.")
def reversal(dataset, csv_file, revision, cone_file, store_path, add_file, remove):
    """Rank-reversal report for a hypothetical edit."""

    def go():
        store = _store(store_path)
        ds = _get_dataset(store, dataset, csv_file, revision)
        cone = _load_cone(cone_file, ds.alternatives.dim)
        add = json.loads(Path(add_file).read_text()) if add_file else []
        removed = [s for s in (remove or "").split(",") if s]
        if not add and not removed:
            raise CliInputError("nothing to do: give --add and/or --remove")
        _emit(api.whatif_payload(ds, cone, add=add, remove=removed))

    _run(go)


@main.command()
@dataset_opt
@csv_opt
@revision_opt
@cone_opt
@store_opt
@click.option("--n", type=int, default=None, help="Fixed level-set threshold (skip fitting).")
@click.option("--alpha", type=float, default=None, help="Report the alpha-percent best group.")
def classify(dataset, csv_file, revision, cone_file, store_path, n, alpha):
    """Good/bad/ugly clustering plus threshold model when labels exist."""

    def go():
        store = _store(store_path)
        ds = _get_dataset(store, dataset, csv_file, revision)
        cone = _load_cone(cone_file, ds.alternatives.dim)
        _emit(api.classify_payload(ds, cone, n=n, alpha=alpha))

    _run(go)


@main.command()
@dataset_opt
@csv_opt
@revision_opt
@cone_opt
@store_opt
def align(dataset, csv_file, revision, cone_file, store_path):
    """Rotate the cone toward the max-margin direction of the labels."""

    def go():
        store = _store(store_path)
        ds = _get_dataset(store, dataset, csv_file, revision)
        cone = _load_cone(cone_file, ds.alternatives.dim)
        _emit(api.align_payload(ds, cone))

    _run(go)


@main.command()
@dataset_opt
@csv_opt
@revision_opt
@cone_opt
@store_opt
@click.option("--weights", default=None, help="Comma-separated weights for the baselines.")
def compare(dataset, csv_file, revision, cone_file, store_path, weights):
    """Side-by-side table: TOPSIS, weighted sum, cone rank."""

    def go():
        store = _store(store_path)
        ds = _get_dataset(store, dataset, csv_file, revision)
        cone = _load_cone(cone_file, ds.alternatives.dim)
        w = tuple(weights.split(",")) if weights else None
        _emit(api.compare_payload(ds, cone, weights=w))

    _run(go)


@main.command()
@click.option("--port", type=int, default=8008, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@store_opt
@click.option("--ui-dir", default=None, help="Static explorer UI directory to serve at /ui.")
def serve(port, host, store_path, ui_dir):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(_store(store_path), ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.argument("name", type=click.Choice(["concave-front", "reversal", "set-picture", "chain"]))
def fixture(name):
    """Print a demonstration dataset as CSV."""
    from . import fixtures

    rows = {
        "concave-front": fixtures.CONCAVE_FRONT_BASE + fixtures.CONCAVE_FRONT_EXTRA,
        "reversal": fixtures.REVERSAL_BASE,
        "set-picture": fixtures.SET_PICTURE,
        "chain": [(c, (str(k), str(k))) for k, c in enumerate("abcd")],
    }[name]
    sys.stdout.write(fixtures.as_csv(rows))


if __name__ == "__main__":
    main()
