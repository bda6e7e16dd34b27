"""Headless command-line interface over the same engine as the HTTP service.

Exit codes: 0 success, 1 operational failure, 2 usage error.
"""

from __future__ import annotations

import functools
import json
import sys
import time
from pathlib import Path

import click

from ..engine import (
    PatientFilters,
    QueryFilters,
    SeriesFilters,
    StationConfig,
    StudyFilters,
)
from ..mockpacs import load_manifest, seed, standard_fixture
from .core import Gateway, default_data_dir, resolve_tag


def _operational(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (click.ClickException, click.Abort):
            raise
        except Exception as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
    return wrapper


@click.group()
@click.option("--data-dir", type=click.Path(path_type=Path), default=None,
              envvar="BRIDGE_DATA_DIR",
              help="Settings/user-store directory (default ~/.pacsbridge).")
@click.pass_context
def main(ctx, data_dir: Path | None):
    """Query, retrieve and preview DICOM studies across PACS stations."""
    ctx.obj = data_dir or default_data_dir()


def _gateway(ctx) -> Gateway:
    return Gateway(ctx.obj)


@main.command()
@click.option("--station", default=None, help="Verify one station by name.")
@click.option("--all", "all_", is_flag=True, help="Verify every station (default).")
@click.pass_context
@_operational
def echo(ctx, station: str | None, all_: bool):
    """Verify station connectivity with C-ECHO."""
    gw = _gateway(ctx)
    statuses = gw.verify_stations(station if station and not all_ else "all")
    if not statuses:
        click.echo("no stations configured")
        return
    for s in statuses:
        state = "reachable" if s.reachable else f"unreachable ({s.detail})"
        latency = f" {s.latency * 1000:.0f} ms" if s.latency else ""
        click.echo(f"{s.station.name} [{s.station.ae_title}@{s.station.host}:"
                   f"{s.station.port}] {state}{latency}")


@main.command()
@click.option("--station", default="all", help='Station name or "all".')
@click.option("--all", "all_", is_flag=True, help="Query every station.")
@click.option("--study-date", default="")
@click.option("--study-time", default="")
@click.option("--study-id", default="")
@click.option("--referring-physician-name", default="")
@click.option("--accession-number", default="")
@click.option("--study-instance-uid", default="")
@click.option("--patient-id", default="")
@click.option("--patient-name", default="")
@click.option("--sex", default="")
@click.option("--birth-date", default="")
@click.option("--modality", default="")
@click.option("--series-instance-uid", default="")
@click.option("--series-number", default="")
@click.option("--custom", multiple=True, metavar="TAG=VALUE",
              help="Extra matching key; TAG is a keyword or GGGG,EEEE.")
@click.option("--exact", is_flag=True, help="Force exact matching.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="json")
@click.pass_context
@_operational
def query(ctx, station, all_, study_date, study_time, study_id,
          referring_physician_name, accession_number, study_instance_uid,
          patient_id, patient_name, sex, birth_date, modality,
          series_instance_uid, series_number, custom, exact, fmt):
    """Search studies and series across stations."""
    custom_fields = []
    for item in custom:
        tag_text, sep, value = item.partition("=")
        if not sep:
            raise click.UsageError(f"--custom needs TAG=VALUE, got {item!r}")
        custom_fields.append((resolve_tag(tag_text), value))

    filters = QueryFilters(
        study=StudyFilters(study_date, study_time, study_id,
                           referring_physician_name, accession_number,
                           study_instance_uid),
        patient=PatientFilters(patient_id, patient_name, sex, birth_date),
        series=SeriesFilters(modality, series_instance_uid, series_number),
        custom=tuple(custom_fields),
    )
    gw = _gateway(ctx)
    tree = gw.query("all" if all_ else station, filters,
                    exact_match_override=True if exact else None)
    if fmt == "json":
        click.echo(json.dumps(tree.to_document(), indent=2))
        return
    if not tree.studies:
        click.echo("no results")
    for study in tree.studies:
        click.echo(f"Study {study.study_instance_uid} [{study.station.name}] "
                   f"{study.patient_name} ({study.patient_id}) "
                   f"{study.study_date} {study.study_description}".rstrip())
        for extra_tag, extra_value in study.custom_values.items():
            click.echo(f"  {extra_tag} = {extra_value}")
        for series in study.series:
            count = (f"{series.instance_count} images"
                     if series.instance_count is not None else "images unknown")
            click.echo(f"  Series {series.series_instance_uid} "
                       f"{series.modality} #{series.series_number} "
                       f"{series.series_description} ({count})")
    for err in tree.errors:
        click.echo(f"station error: {err.station.name}: {err.message}", err=True)


@main.command()
@click.option("--station", required=True, help="Source station name.")
@click.option("--study", "study_uid", required=True, metavar="UID")
@click.option("--series", "series_uid", default=None, metavar="UID",
              help="Retrieve a single series of the study.")
@click.pass_context
@_operational
def retrieve(ctx, station: str, study_uid: str, series_uid: str | None):
    """Retrieve a study or one series into the local store."""
    gw = _gateway(ctx)
    with gw:
        scope = "series" if series_uid else "study"
        job_id = gw.submit_retrieve(scope, station, study_uid, series_uid)
        while True:
            job = gw.job(job_id)
            if job.state in ("completed", "failed"):
                break
            time.sleep(0.1)
        report = job.report
        click.echo(json.dumps(report.to_document(), indent=2))
        if job.state != "completed":
            sys.exit(1)


@main.command()
@click.option("--study", "study_uid", required=True, metavar="UID")
@click.option("--series", "series_uid", default=None, metavar="UID")
@click.pass_context
@_operational
def preview(ctx, study_uid: str, series_uid: str | None):
    """Export previews for retrieved images and print the manifest."""
    gw = _gateway(ctx)
    if series_uid:
        manifest = gw.previews.series_manifest(study_uid, series_uid)
    else:
        manifest = gw.previews.study_manifest(study_uid)
    click.echo(json.dumps(manifest, indent=2))


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
@click.pass_context
@_operational
def serve(ctx, host: str, port: int):
    """Run the HTTP gateway (store service included)."""
    import uvicorn

    from .service import create_app

    app = create_app(Gateway(ctx.obj))
    uvicorn.run(app, host=host, port=port, log_level="info")


@main.command("user-add")
@click.argument("username")
@click.option("--role", type=click.Choice(["admin", "user"]), default="user")
@click.option("--password", default=None,
              help="Password (prompted when omitted).")
@click.pass_context
@_operational
def user_add(ctx, username: str, role: str, password: str | None):
    """Register a user directly in the local user store."""
    if password is None:
        password = click.prompt("password", hide_input=True,
                                confirmation_prompt=True)
    gw = _gateway(ctx)
    record = gw.users.create(username, password, role)
    click.echo(f"created {record.role} {record.username!r}")


@main.group()
def station():
    """Manage configured PACS stations."""


@station.command("add")
@click.argument("name")
@click.option("--ae-title", required=True)
@click.option("--host", required=True)
@click.option("--port", required=True, type=int)
@click.pass_context
@_operational
def station_add(ctx, name: str, ae_title: str, host: str, port: int):
    gw = _gateway(ctx)
    gw.add_station(StationConfig(name, ae_title, host, port))
    click.echo(f"added {name} [{ae_title}@{host}:{port}]")


@station.command("list")
@click.pass_context
@_operational
def station_list(ctx):
    for s in _gateway(ctx).stations():
        click.echo(f"{s.name} [{s.ae_title}@{s.host}:{s.port}]")


@station.command("remove")
@click.argument("name")
@click.pass_context
@_operational
def station_remove(ctx, name: str):
    if not _gateway(ctx).remove_station(name):
        raise click.ClickException(f"no station named {name!r}")
    click.echo(f"removed {name}")


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=11112, type=int)
@click.option("--ae-title", default="MOCKPACS")
@click.option("--manifest", type=click.Path(exists=True, path_type=Path),
              default=None, help="Fixture manifest (default: built-in demo data).")
@click.option("--register", multiple=True, metavar="AE=HOST:PORT",
              help="Pre-register a move destination.")
@_operational
def mock(host: str, port: int, ae_title: str, manifest: Path | None,
         register: tuple[str, ...]):
    """Run a seeded mock PACS station (for demos and tests)."""
    fixture = load_manifest(manifest) if manifest else standard_fixture()
    for item in register:
        ae, sep, addr = item.partition("=")
        dest_host, sep2, dest_port = addr.partition(":")
        if not sep or not sep2:
            raise click.UsageError(f"--register needs AE=HOST:PORT, got {item!r}")
        fixture.ae_registry[ae] = (dest_host, int(dest_port))
    handle = seed(fixture, host=host, port=port, ae_title=ae_title)
    click.echo(f"mock PACS {ae_title} listening on {handle.host}:{handle.port} "
               f"with {len(fixture.instances)} instances (Ctrl-C to stop)")
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        pass
    finally:
        handle.stop()


if __name__ == "__main__":
    main()
