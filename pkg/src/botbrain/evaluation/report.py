"""Report emission (markdown + CSV) and ratings CSV ingestion."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .experiment import ExperimentResult
from .krippendorff import RatingMatrix
from .stats import AnovaResult, TTestResult


@dataclass
class ReportInputs:
    experiment: ExperimentResult
    alphas: dict = field(default_factory=dict)  # criterion -> alpha
    anova: AnovaResult | None = None
    ttest: TTestResult | None = None


def emit_report(inputs: ReportInputs, out_dir: str | Path) -> tuple[Path, Path]:
    """Write report.md and accuracy.csv; returns both paths."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / "accuracy.csv"
        with csv_path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["task_count", "accuracy"])
            for count, accuracy in sorted(inputs.experiment.per_count_accuracy.items()):
                writer.writerow([count, repr(accuracy)])

        lines = ["# Task integration report", ""]
        lines.append("| task count | integration accuracy |")
        lines.append("|---:|---:|")
        for count, accuracy in sorted(inputs.experiment.per_count_accuracy.items()):
            lines.append(f"| {count} | {accuracy * 100:.2f}% |")
        lines.append("")
        lines.append(
            f"Task-level accuracy (pooled): "
            f"{inputs.experiment.task_level_accuracy * 100:.2f}%"
        )
        lines.append(
            f"Mean per-command fraction: "
            f"{inputs.experiment.mean_per_command_fraction * 100:.2f}%"
        )
        if inputs.anova:
            lines += [
                "",
                "## Accuracy vs task count (one-way ANOVA)",
                f"F({inputs.anova.df_between}, {inputs.anova.df_within}) = "
                f"{inputs.anova.f_statistic:.3f}, p = {inputs.anova.p_value:.4f}",
            ]
        if inputs.ttest:
            lines += [
                "",
                "## One-sample t-test",
                f"mean = {inputs.ttest.mean:.3f}, t({inputs.ttest.df}) = "
                f"{inputs.ttest.t_statistic:.3f}, critical = {inputs.ttest.critical_value:.3f}, "
                f"reject H0: {inputs.ttest.reject_null}",
            ]
        if inputs.alphas:
            lines += ["", "## Inter-rater reliability", "| criterion | Krippendorff's alpha |", "|---|---:|"]
            for criterion, alpha in sorted(inputs.alphas.items()):
                lines.append(f"| {criterion} | {alpha:.4f} |")
        md_path = out / "report.md"
        md_path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IOError(f"cannot write report into {out}: {exc}") from exc
    return md_path, csv_path


def load_accuracy_csv(path: str | Path) -> dict:
    out = {}
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            out[int(row["task_count"])] = float(row["accuracy"])
    return out


def load_ratings_csv(path: str | Path, scale_by_criterion: dict) -> dict:
    """Read (rater, item, criterion, score) rows into one RatingMatrix per
    criterion using the given scale mapping."""
    rows = []
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append(row)
    matrices = {}
    for criterion, scale in scale_by_criterion.items():
        subset = [r for r in rows if r["criterion"] == criterion]
        raters = sorted({r["rater"] for r in subset})
        items = sorted({r["item"] for r in subset})
        by_key = {(r["rater"], r["item"]): int(r["score"]) for r in subset}
        scores = [[by_key.get((rater, item)) for item in items] for rater in raters]
        matrices[criterion] = RatingMatrix(scores=scores, scale=scale)
    return matrices
