"""Command-line entry point: tables, search, verify, expand, char."""
from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from .bernoulli import enumerate_integral_pairs
from .case1 import admissible_pairs, parse_pair
from .catalog import catalog, find_record, resolve_form, verify_identity
from .characters import char_group
from .records import IdentityRecord

ROW_FIELDS = ["id", "level", "k", "l", "psi", "phi", "case", "table", "identity"]


def _emit_rows(header: list[str], rows: list[list]) -> None:
    out = csv.writer(sys.stdout, delimiter="\t", lineterminator="\n")
    out.writerow(header)
    out.writerows(rows)


def _record_row(r: IdentityRecord) -> list:
    return [r.id, r.level, r.k, r.l, r.psi, r.phi, r.case, r.table, r.text()]


@click.group()
def main() -> None:
    """Eigenform product identities: search, catalog and verification."""


@main.command()
@click.option("--id", "table_id", type=click.Choice(["1", "2", "3", "22"]), required=True)
@click.option("--json", "as_json", is_flag=True)
def tables(table_id: str, as_json: bool) -> None:
    """Integral 2k/B_{k,chi} values (1, 2, 3) or the admissible pairs (22)."""
    if table_id == "22":
        header = ["k", "character", "modulus", "branch", "scalar"]
        rows = [[p.k, p.psi.label, p.modulus, p.branch, p.omega.pretty()] for p in admissible_pairs()]
    else:
        header = ["k", "character", "modulus", "value"]
        rows = [
            [ip.k, ip.character.label, ip.character.modulus, ip.value.pretty()]
            for ip in enumerate_integral_pairs()
            if ip.table == int(table_id)
        ]
    if as_json:
        click.echo(json.dumps([dict(zip(header, r)) for r in rows], indent=2))
    else:
        _emit_rows(header, rows)
    click.echo(f"# {len(rows)} rows", err=True)


def _write_report(directory: Path, report) -> list[Path]:
    from .plots import identity_figures

    directory.mkdir(parents=True, exist_ok=True)
    tsv = directory / "identities.tsv"
    with tsv.open("w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(ROW_FIELDS)
        w.writerows(_record_row(r) for r in report.identities)
    written = [tsv]
    if report.matched:
        stats = directory / "statistics.json"
        stats.write_text(json.dumps(report.statistics(), indent=2))
        written.append(stats)
    written += identity_figures(report.identities, directory)
    return written


@main.command()
@click.option("--case", "case", type=click.Choice(["1", "2", "all"]), default="all", show_default=True)
@click.option("--pair", "pair_text", default=None, help="restrict Case 1 to one pair, e.g. 4,chi_{5,2}")
@click.option("--level-cap", type=int, default=100, show_default=True)
@click.option("--weight-cap", type=int, default=30, show_default=True, help="bound on k + l in Case 2")
@click.option("--terms", type=int, default=None, help="verification truncation")
@click.option("--json", "as_json", is_flag=True)
@click.option("--report", "report_dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="write identities.tsv, statistics.json and figures here")
def search(case, pair_text, level_cap, weight_cap, terms, as_json, report_dir) -> None:
    """Run the Case 1 and/or Case 2 search; with --case all, reconcile with the catalog."""
    from .survey import full_search

    if level_cap < 1:
        raise click.UsageError("--level-cap must be positive")
    if weight_cap < 4:
        raise click.UsageError("--weight-cap must be at least 4")
    if terms is not None and terms < 1:
        raise click.UsageError("--terms must be positive")
    pairs = None
    if pair_text is not None:
        if case != "1":
            raise click.UsageError("--pair only applies to --case 1")
        try:
            pairs = [parse_pair(pair_text)]
        except (ValueError, KeyError) as exc:
            raise click.UsageError(str(exc)) from exc
    report = full_search(case, pairs, level_cap, weight_cap, terms)
    if as_json:
        payload = {"identities": [r.to_json() for r in report.identities]}
        if case == "all":
            payload.update(
                match="exact" if report.exact else "mismatch",
                statistics=report.statistics(),
                unmatched_search=report.unmatched_search,
                ambiguous=report.ambiguous,
                unmatched_catalog=report.unmatched_catalog,
            )
        click.echo(json.dumps(payload, indent=2))
    else:
        _emit_rows(ROW_FIELDS, [_record_row(r) for r in report.identities])
        if case == "all":
            click.echo("---")
            for key, value in report.statistics().items():
                click.echo(f"{key}\t{value}")
            for label, items in (("unmatched search", report.unmatched_search), ("ambiguous", report.ambiguous),
                                 ("unmatched catalog", report.unmatched_catalog)):
                for item in items:
                    click.echo(f"{label}\t{item}")
            click.echo(report.summary())
        else:
            click.echo(f"{len(report.identities)} identities")
    if report_dir is not None:
        for path in _write_report(report_dir, report):
            click.echo(f"# wrote {path}", err=True)
    if case == "all" and not report.exact:
        sys.exit(1)


@main.command()
@click.option("--identity", "identity", required=True, help="catalog id, or 'all'")
@click.option("--terms", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
def verify(identity: str, terms: int | None, as_json: bool) -> None:
    """Check h = scalar*f*g, the Hecke recursions and the printed prefixes for catalog records."""
    if identity == "all":
        records = catalog()
    else:
        try:
            records = [find_record(identity)]
        except KeyError as exc:
            raise click.UsageError(f"unknown identity {identity}; see `search --case all` for ids") from exc
    reports = [verify_identity(r, terms) for r in records]
    if as_json:
        click.echo(json.dumps([r.to_json() for r in reports], indent=2))
    else:
        _emit_rows(
            ["id", "passed", "sturm", "checked_upto", "first_mismatch", "failures"],
            [[r.id, r.passed, r.sturm, r.checked_upto, r.first_mismatch or "", "; ".join(r.failures)] for r in reports],
        )
    sys.exit(0 if all(r.passed for r in reports) else 1)


@main.command()
@click.option("--form", "form", required=True, help="E4^{1_1,1_1}, Delta_{6,3}, Phi_{10,3}, ...")
@click.option("--terms", type=int, required=True)
@click.option("--json", "as_json", is_flag=True)
def expand(form: str, terms: int, as_json: bool) -> None:
    """q-expansion of a form descriptor through q^terms."""
    if terms < 1:
        raise click.UsageError("--terms must be positive")
    try:
        series = resolve_form(form, terms)
    except (ValueError, KeyError) as exc:
        raise click.UsageError(str(exc)) from exc
    if as_json:
        click.echo(json.dumps({"form": form, "coefficients": [c.to_record() for c in series]}, indent=2))
    else:
        _emit_rows(["n", "a(n)"], [[n, c.pretty()] for n, c in enumerate(series)])


@main.command("char")
@click.option("--modulus", type=int, required=True)
@click.option("--list", "as_list", is_flag=True, help="one row per character")
def char_cmd(modulus: int, as_list: bool) -> None:
    """Dirichlet characters modulo N."""
    if modulus < 1:
        raise click.UsageError("--modulus must be positive")
    group = char_group(modulus)
    if not as_list:
        click.echo(f"{len(group)} characters modulo {modulus}")
        return
    _emit_rows(
        ["label", "order", "conductor", "parity", "primitive"],
        [[c.label, c.order, c.conductor, c.parity, c.conductor == modulus] for c in group],
    )


if __name__ == "__main__":
    main()
