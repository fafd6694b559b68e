"""Text form of compliance results.

Reports are line oriented like traces: '#%' tags the block type, then
simple `key value` lines.  Counterexamples embed a full trace between
begin-trace / end-trace so a report alone is enough to reproduce a failure.
parse_reports() inverts render_classify_report() for that purpose.
"""

from __future__ import annotations

from .compliance import (
    CELL_KEYS,
    CellVerdict,
    ComplianceReport,
    Counterexample,
    check_trace,  # noqa: F401  (re-exported for convenience)
)
from .engine import MappingConfig, parse_mapping_kind
from .errors import TraceError
from .gains import format_gain_spec, parse_gain_spec
from .traces import parse_trace, serialize_trace

REPORT_VERSION = 1

_COLUMNS = (
    ("dir-t", "directional translation"),
    ("dir-r", "directional rotation"),
    ("trans-t", "transitivity translation"),
    ("trans-r", "transitivity rotation"),
    ("nulling", "nulling pose"),
)


def _render_counterexample(key: str, ce: Counterexample) -> list[str]:
    lines = [
        f"begin-counterexample {key}",
        f"mapping {ce.config.kind.value}",
        f"gain-t {format_gain_spec(ce.config.gain_t)}",
        f"gain-r {format_gain_spec(ce.config.gain_r)}",
        f"ego-t {1 if ce.config.ego_t else 0}",
        f"ego-r {1 if ce.config.ego_r else 0}",
        "begin-trace",
    ]
    lines.extend(serialize_trace(ce.trace).rstrip("\n").splitlines())
    lines.append("end-trace")
    lines.append("end-counterexample")
    return lines


def render_classify_report(report: ComplianceReport) -> str:
    lines = [
        f"#%compliance-report v{REPORT_VERSION}",
        "mode classify",
        f"mapping {report.mapping.value}",
        f"seed {report.seed}",
        f"trials {report.trials}",
        f"tol {report.tol!r}",
    ]
    for key in CELL_KEYS:
        cell = report.cells[key]
        lines.append(f"cell {key} {cell.verdict}")
        lines.append(
            f"counts {key} general {cell.general_pass}/{cell.general_pass + cell.general_fail}"
            f" restricted {cell.restricted_pass}/{cell.restricted_pass + cell.restricted_fail}"
        )
        if cell.condition:
            lines.append(f"condition {key} {cell.condition}")
    for key in CELL_KEYS:
        ce = report.cells[key].counterexample
        if ce is not None:
            lines.extend(_render_counterexample(key, ce))
    return "\n".join(lines) + "\n"


def render_classify_summary(reports: list[ComplianceReport]) -> str:
    """Combined output: a verdict grid up front, full blocks after."""
    header = "# mapping   " + "".join(f"| {short:<12}" for short, _ in _COLUMNS)
    rows = ["#%compliance-summary v1", header]
    for rep in reports:
        row = f"# {rep.mapping.value:<10}"
        for _, key in _COLUMNS:
            row += f"| {rep.cells[key].verdict:<12}"
        rows.append(row)
    body = "".join(render_classify_report(rep) for rep in reports)
    return "\n".join(rows) + "\n" + body


def parse_reports(text: str) -> list[ComplianceReport]:
    """Parse one or more classify report blocks out of report text."""
    lines = text.splitlines()
    reports: list[ComplianceReport] = []
    i = 0
    n = len(lines)
    while i < n:
        line = lines[i].strip()
        if not line.startswith("#%compliance-report"):
            i += 1
            continue
        tag = line[len("#%compliance-report") :].strip()
        if tag != f"v{REPORT_VERSION}":
            raise TraceError(f"line {i + 1}: unsupported report version {tag!r}")
        i += 1
        mapping = None
        seed = trials = 0
        tol = 0.0
        verdicts: dict[str, str] = {}
        counts: dict[str, tuple[int, int, int, int]] = {}
        conditions: dict[str, str] = {}
        examples: dict[str, Counterexample] = {}
        while i < n:
            line = lines[i].strip()
            if line.startswith("#%compliance-report"):
                break
            i += 1
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            head = fields[0]
            if head == "mode":
                continue
            if head == "mapping":
                mapping = parse_mapping_kind(fields[1])
            elif head == "seed":
                seed = int(fields[1])
            elif head == "trials":
                trials = int(fields[1])
            elif head == "tol":
                tol = float(fields[1])
            elif head == "cell":
                verdicts[f"{fields[1]} {fields[2]}"] = fields[3]
            elif head == "counts":
                gp, gt = fields[4].split("/")
                rp, rt = fields[6].split("/")
                counts[f"{fields[1]} {fields[2]}"] = (
                    int(gp),
                    int(gt) - int(gp),
                    int(rp),
                    int(rt) - int(rp),
                )
            elif head == "condition":
                conditions[f"{fields[1]} {fields[2]}"] = " ".join(fields[3:])
            elif head == "begin-counterexample":
                key = f"{fields[1]} {fields[2]}"
                ce_kind = None
                ce_gt = ce_gr = None
                ce_ego_t = ce_ego_r = False
                trace_lines: list[str] = []
                in_trace = False
                while i < n:
                    ce_line = lines[i]
                    i += 1
                    stripped = ce_line.strip()
                    if stripped == "end-counterexample":
                        break
                    if stripped == "begin-trace":
                        in_trace = True
                        continue
                    if stripped == "end-trace":
                        in_trace = False
                        continue
                    if in_trace:
                        trace_lines.append(ce_line)
                        continue
                    f2 = stripped.split()
                    if not f2:
                        continue
                    if f2[0] == "mapping":
                        ce_kind = parse_mapping_kind(f2[1])
                    elif f2[0] == "gain-t":
                        ce_gt = parse_gain_spec(f2[1])
                    elif f2[0] == "gain-r":
                        ce_gr = parse_gain_spec(f2[1])
                    elif f2[0] == "ego-t":
                        ce_ego_t = f2[1] == "1"
                    elif f2[0] == "ego-r":
                        ce_ego_r = f2[1] == "1"
                if ce_kind is None or ce_gt is None or ce_gr is None:
                    raise TraceError(f"counterexample for {key} is incomplete")
                check, channel = key.split(" ")
                examples[key] = Counterexample(
                    check,
                    channel,
                    MappingConfig(ce_kind, ce_gt, ce_gr, ce_ego_t, ce_ego_r),
                    parse_trace("\n".join(trace_lines) + "\n"),
                )
            else:
                raise TraceError(f"unrecognized report line {line!r}")
        if mapping is None:
            raise TraceError("report block is missing its mapping line")
        cells = {}
        for key in CELL_KEYS:
            if key not in verdicts:
                raise TraceError(f"report for {mapping.value} is missing cell {key!r}")
            gp, gf, rp, rf = counts.get(key, (0, 0, 0, 0))
            cells[key] = CellVerdict(
                verdicts[key], conditions.get(key, ""), gp, gf, rp, rf, examples.get(key)
            )
        reports.append(ComplianceReport(mapping, seed, trials, tol, cells))
    return reports


# ---------------------------------------------------------------------------
# cmd_check output


def render_check_report(outcome) -> str:
    """Text form of a single-trace check (see compliance.check_trace)."""
    cfg: MappingConfig = outcome.config
    lines = [
        f"#%compliance-report v{REPORT_VERSION}",
        "mode check",
        f"mapping {cfg.kind.value}",
        f"gain-t {format_gain_spec(cfg.gain_t)}",
        f"gain-r {format_gain_spec(cfg.gain_r)}",
        f"ego-t {1 if cfg.ego_t else 0}",
        f"ego-r {1 if cfg.ego_r else 0}",
        f"tol {outcome.tol!r}",
        f"segments {outcome.segments}",
        f"steps {outcome.steps}",
        f"cell directional translation {'always' if outcome.noncompliant_t == 0 else 'never'}",
        f"cell directional rotation {'always' if outcome.noncompliant_r == 0 else 'never'}",
        f"noncompliant translation {outcome.noncompliant_t}",
        f"noncompliant rotation {outcome.noncompliant_r}",
        f"worst residual translation {outcome.worst_residual_t!r} at tick {outcome.worst_tick_t}",
        f"worst residual rotation {outcome.worst_residual_r!r} at tick {outcome.worst_tick_r}",
        f"nulling {outcome.nulling}",
    ]
    return "\n".join(lines) + "\n"
