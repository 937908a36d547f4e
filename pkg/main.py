# Keycast command line: builders, checks, transforms, searches and the report archive
import functools
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd
import typer
from dotenv import load_dotenv

from src.analysis import CheckMode, FeasibilityReport, coords_from_text, format_rate, parse_rate
from src.coding import Gf2Matrix
from src.config import get_settings, reset_settings
from src.constructions import (
    EavesdropMode,
    fig1b_code,
    fig1b_instance,
    gap_instance,
    relay_code,
    relay_instance,
    sum_code,
    two_stage_gap_code,
)
from src.core.workbench import Workbench
from src.errors import KeycastError
from src.model import min_cut, validate
from src.search import CodeShape
from src.transforms import (
    apply_preencoding,
    lift_secure_code,
    linear_key_to_secure,
    preencoding_permutation,
    reduce_secure_to_key,
    restrict_key_code_to_secure,
    zero_redundant_columns,
)
from src.utils import DocumentLoader, code_to_dict, dumps, instance_to_dict, permutation_to_dict

load_dotenv()

logger = logging.getLogger("keycast")

app = typer.Typer(help="Multicast key dissemination workbench.", no_args_is_help=True, add_completion=False)
gen_app = typer.Typer(help="Emit reference instances and codes.", no_args_is_help=True)
transform_app = typer.Typer(help="Constructive code transformations.", no_args_is_help=True)
report_app = typer.Typer(help="Render and archive reports.", no_args_is_help=True)
app.add_typer(gen_app, name="gen")
app.add_typer(transform_app, name="transform")
app.add_typer(report_app, name="report")

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class State:
    def __init__(self, out: Optional[Path], workbench: Workbench):
        self.out = out
        self.workbench = workbench


def _state(ctx: typer.Context) -> State:
    return ctx.find_root().obj


def emit(ctx: typer.Context, document: Any) -> None:
    """Write one JSON document to --out or stdout."""
    text = dumps(document)
    out = _state(ctx).out
    if out is not None:
        out.write_text(text, encoding="utf-8")
        logger.info("✓ Wrote %s", out)
    else:
        typer.echo(text, nl=False)


def write_side_file(path: Optional[Path], document: Any) -> None:
    if path is not None:
        path.write_text(dumps(document), encoding="utf-8")
        logger.info("✓ Wrote %s", path)


def handled(command):
    """Report KeycastError as JSON on stderr with exit code 2, or 3 for resource limits."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except KeycastError as e:
            typer.echo(json.dumps(e.to_dict(), sort_keys=True, default=str), err=True)
            raise typer.Exit(EXIT_RESOURCE if e.is_resource_limit else EXIT_USAGE)

    return wrapper


@app.callback()
def main(
    ctx: typer.Context,
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the JSON result here instead of stdout."),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Overrides KEYCAST_LOG_LEVEL."),
):
    reset_settings()
    settings = get_settings()
    logging.basicConfig(
        level=(log_level or settings.log_level).upper(),
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )
    ctx.obj = State(out, Workbench(settings))


# gen

def _gap_mode(node_all: bool) -> EavesdropMode:
    return EavesdropMode.NODE_ALL if node_all else EavesdropMode.EDGE_SETS


@gen_app.command("gap")
@handled
def gen_gap(
    ctx: typer.Context,
    alpha: int = typer.Option(..., "--alpha", help="Gap parameter; the network has r = alpha + 1 sources."),
    node_all: bool = typer.Option(False, "--node-all", help="Let each eavesdropper also observe one source."),
):
    """The gap network."""
    emit(ctx, instance_to_dict(gap_instance(alpha, _gap_mode(node_all))))


@gen_app.command("sum-code")
@handled
def gen_sum_code(
    ctx: typer.Context,
    alpha: int = typer.Option(..., "--alpha"),
    node_all: bool = typer.Option(False, "--node-all"),
):
    """Rate-1 key code for the gap network: K is the sum of all source bits."""
    emit(ctx, code_to_dict(sum_code(gap_instance(alpha, _gap_mode(node_all)))))


@gen_app.command("two-stage-code")
@handled
def gen_two_stage_code(ctx: typer.Context, alpha: int = typer.Option(..., "--alpha")):
    """Rate-1/2 two-stage code for the gap network (r <= 3)."""
    emit(ctx, code_to_dict(two_stage_gap_code(gap_instance(alpha))))


@gen_app.command("fig1b")
@handled
def gen_fig1b(
    ctx: typer.Context,
    part: str = typer.Option("instance", "--part", help="instance | code"),
    key: str = typer.Option("xor", "--key", help="xor | b1"),
    no_observe: bool = typer.Option(False, "--no-observe", help="Drop the source-observing eavesdroppers."),
):
    """Two sources, one terminal; the XOR key example."""
    if part == "code":
        if key not in ("xor", "b1"):
            raise typer.BadParameter("key must be xor or b1", param_hint="--key")
        emit(ctx, code_to_dict(fig1b_code(key)))
    elif part == "instance":
        emit(ctx, instance_to_dict(fig1b_instance(observe_sources=not no_observe)))
    else:
        raise typer.BadParameter("part must be instance or code", param_hint="--part")


@gen_app.command("relay")
@handled
def gen_relay(
    ctx: typer.Context,
    bits: int = typer.Option(2, "--bits", help="Source bits per block for the code."),
    part: str = typer.Option("instance", "--part", help="instance | code"),
    eavesdrop_first_hop: bool = typer.Option(False, "--eavesdrop-first-hop"),
):
    """Single-source path s -> v -> d."""
    if part == "code":
        emit(ctx, code_to_dict(relay_code(bits)))
    elif part == "instance":
        emit(ctx, instance_to_dict(relay_instance(eavesdrop_first_hop=eavesdrop_first_hop)))
    else:
        raise typer.BadParameter("part must be instance or code", param_hint="--part")


# model

@app.command("validate")
@handled
def validate_command(ctx: typer.Context, instance_file: str = typer.Option("-", "--instance", "-i")):
    """Check an instance file against every structural rule; exit 1 on violations."""
    report = validate(DocumentLoader.load_instance(instance_file))
    emit(ctx, report.to_dict())
    if not report.ok:
        raise typer.Exit(EXIT_FAIL)


@app.command("mincut")
@handled
def mincut_command(
    ctx: typer.Context,
    instance_file: str = typer.Option("-", "--instance", "-i"),
    sources: str = typer.Option(..., "--sources", help="Comma-separated node ids."),
    sink: str = typer.Option(..., "--sink"),
):
    """Exact min-cut capacity from a set of nodes to a sink."""
    source_set = [s.strip() for s in sources.split(",") if s.strip()]
    value = min_cut(DocumentLoader.load_instance(instance_file), source_set, sink)
    emit(ctx, {"sink": sink, "sources": sorted(source_set), "value": format_rate(value)})


# analysis

@app.command("check")
@handled
def check_command(
    ctx: typer.Context,
    instance_file: str = typer.Option("-", "--instance", "-i"),
    code_file: str = typer.Option(..., "--code", "-c"),
    mode: CheckMode = typer.Option(CheckMode.KEY, "--mode"),
    rate: str = typer.Option(..., "--rate", help="Exact rate P/Q."),
    coords: Optional[str] = typer.Option(None, "--coords", help="Message coordinates for sec, e.g. s1:0,s2:0."),
    witness: Optional[str] = typer.Option(None, "--witness", help="Two-stage witness M for key2."),
    save: Optional[str] = typer.Option(None, "--save", help="Archive the report under this label."),
):
    """Feasibility verdicts for a code; exit 1 when any verdict fails."""
    state = _state(ctx)
    instance = DocumentLoader.load_instance(instance_file)
    code = DocumentLoader.load_code(code_file)
    chosen = witness if mode is CheckMode.KEY2 else coords
    report = state.workbench.check(instance, code, mode, parse_rate(rate),
                                   coords_from_text(chosen) if chosen is not None else None)
    document = report.to_dict()
    if save:
        state.workbench.save_report(save, document)
    emit(ctx, document)
    if not report.overall:
        raise typer.Exit(EXIT_FAIL)


# search

@app.command("search")
@handled
def search_command(
    ctx: typer.Context,
    instance_file: str = typer.Option("-", "--instance", "-i"),
    mode: CheckMode = typer.Option(CheckMode.KEY, "--mode"),
    shape: str = typer.Option("n=1,l=1,forward,tables", "--shape", help="e.g. n=1,l=1,forward,tables,k=1"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Overrides KEYCAST_BUDGET."),
    jobs: Optional[int] = typer.Option(None, "--jobs", help="Worker processes; results do not depend on it."),
    cursor: Optional[Path] = typer.Option(None, "--cursor", help="Cursor file to resume from and update."),
    start: int = typer.Option(0, "--start"),
    stop: Optional[int] = typer.Option(None, "--stop"),
    witness_out: Optional[Path] = typer.Option(None, "--witness-out", help="Also write the witness code file."),
    save: Optional[str] = typer.Option(None, "--save"),
):
    """Largest rate reachable by any code of the given shape."""
    state = _state(ctx)
    result = state.workbench.search(
        DocumentLoader.load_instance(instance_file), mode, CodeShape.parse(shape),
        budget=budget, start=start, stop=stop, jobs=jobs,
        cursor_path=str(cursor) if cursor is not None else None,
    )
    document = result.to_dict()
    if result.witness is not None:
        write_side_file(witness_out, code_to_dict(result.witness))
    if save:
        state.workbench.save_report(save, document)
    emit(ctx, document)


# transforms

@transform_app.command("preencode")
@handled
def transform_preencode(
    ctx: typer.Context,
    instance_file: str = typer.Option("-", "--instance", "-i"),
    code_file: str = typer.Option(..., "--code", "-c"),
    perm_out: Optional[Path] = typer.Option(None, "--perm-out", help="Also write the permutation."),
):
    """Single-source code whose uniform key becomes the first k source bits."""
    instance = DocumentLoader.load_instance(instance_file)
    code = DocumentLoader.load_code(code_file)
    perm = preencoding_permutation(code.key)
    write_side_file(perm_out, permutation_to_dict(perm.to_list(), perm.bits))
    emit(ctx, code_to_dict(apply_preencoding(instance, code, perm)))


@transform_app.command("zero-columns")
@handled
def transform_zero_columns(
    ctx: typer.Context,
    instance_file: str = typer.Option("-", "--instance", "-i"),
    code_file: str = typer.Option(..., "--code", "-c"),
):
    """Linear key code without eavesdroppers to a secure multicast code, freezing the key's redundant columns."""
    secure, _ = linear_key_to_secure(DocumentLoader.load_instance(instance_file), DocumentLoader.load_code(code_file))
    emit(ctx, code_to_dict(secure))


@transform_app.command("zero-matrix")
@handled
def transform_zero_matrix(
    ctx: typer.Context,
    rows: str = typer.Option(..., "--rows", help="Matrix rows as bitstrings, e.g. 110,011."),
):
    """Zero redundant columns of a GF(2) matrix until the surviving columns are independent."""
    matrix = Gf2Matrix.from_bitstrings([r.strip() for r in rows.split(",") if r.strip()])
    reduced, kept = zero_redundant_columns(matrix)
    emit(ctx, {"kept": kept, "rank": reduced.rank(), "rows": reduced.to_bitstrings()})


@transform_app.command("reduce")
@handled
def transform_reduce(
    ctx: typer.Context,
    instance_file: str = typer.Option("-", "--instance", "-i"),
    rate: str = typer.Option(..., "--rate"),
):
    """Secure-multicast instance to a key-dissemination instance with terminal d_key."""
    emit(ctx, instance_to_dict(reduce_secure_to_key(DocumentLoader.load_instance(instance_file), parse_rate(rate))))


@transform_app.command("lift")
@handled
def transform_lift(
    ctx: typer.Context,
    instance_file: str = typer.Option("-", "--instance", "-i"),
    code_file: str = typer.Option(..., "--code", "-c"),
    rate: str = typer.Option(..., "--rate"),
    coords: Optional[str] = typer.Option(None, "--coords"),
    instance_out: Optional[Path] = typer.Option(None, "--instance-out", help="Also write the reduced instance."),
):
    """Secure code to a key code on the reduced instance."""
    reduced, lifted = lift_secure_code(
        DocumentLoader.load_instance(instance_file), DocumentLoader.load_code(code_file), parse_rate(rate),
        coords_from_text(coords) if coords is not None else None,
    )
    write_side_file(instance_out, instance_to_dict(reduced))
    emit(ctx, code_to_dict(lifted))


@transform_app.command("restrict")
@handled
def transform_restrict(
    ctx: typer.Context,
    instance_file: str = typer.Option("-", "--instance", "-i"),
    code_file: str = typer.Option(..., "--code", "-c"),
    instance_out: Optional[Path] = typer.Option(None, "--instance-out", help="Also write the original instance."),
):
    """Key code on a reduced instance back to a secure code on the original one."""
    original, secure, _ = restrict_key_code_to_secure(
        DocumentLoader.load_instance(instance_file), DocumentLoader.load_code(code_file))
    write_side_file(instance_out, instance_to_dict(original))
    emit(ctx, code_to_dict(secure))


# reports

def verdict_table(document: Dict[str, Any]) -> pd.DataFrame:
    rows = [
        {"verdict": name, "ok": v["ok"], "applicable": v["applicable"], "detail": v["detail"]}
        for name, v in document["verdicts"].items()
    ]
    return pd.DataFrame(rows).set_index("verdict")


@report_app.command("show")
@handled
def report_show(
    ctx: typer.Context,
    report_file: str = typer.Argument("-"),
    table: bool = typer.Option(False, "--table", help="Print a verdict table instead of JSON."),
):
    """Re-render a check report (validated on the way in)."""
    document = FeasibilityReport.from_dict(DocumentLoader.load_json(report_file)).to_dict()
    if table:
        typer.echo(verdict_table(document).to_string())
        typer.echo(f"overall: {document['overall']} (mode={document['mode']}, R={document['rate']})")
        return
    emit(ctx, document)


@report_app.command("save")
@handled
def report_save(
    ctx: typer.Context,
    report_file: str = typer.Argument(...),
    label: str = typer.Option(..., "--label"),
    timestamps: bool = typer.Option(False, "--timestamps"),
):
    """Archive a check report or search result."""
    state = _state(ctx)
    document = DocumentLoader.load_json(report_file)
    record = state.workbench.save_report(label, document, timestamps=timestamps)
    logger.info("✓ %s", state.workbench.document_summary(document))
    emit(ctx, record.model_dump())


@report_app.command("list")
@handled
def report_list(
    ctx: typer.Context,
    label: Optional[str] = typer.Option(None, "--label"),
    limit: Optional[int] = typer.Option(None, "--limit"),
):
    emit(ctx, [r.model_dump() for r in _state(ctx).workbench.storage.list(label, limit)])


@report_app.command("delete")
@handled
def report_delete(ctx: typer.Context, report_id: str = typer.Argument(...)):
    deleted = _state(ctx).workbench.storage.delete(report_id)
    emit(ctx, {"deleted": deleted, "id": report_id})
    if not deleted:
        raise typer.Exit(EXIT_FAIL)


@report_app.command("stats")
@handled
def report_stats(ctx: typer.Context):
    emit(ctx, _state(ctx).workbench.storage.stats())


if __name__ == "__main__":
    app()
