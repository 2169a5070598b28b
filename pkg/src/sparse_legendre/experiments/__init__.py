"""Reproducible batch experiments: specs, runners, summaries, CSV and SVG output."""
from .records import (SummaryRow, SummaryTable, TrialRecord, emit_csv, read_summary_csv,
                      read_trials_csv, summarize, wilson_interval, write_trials_csv)
from .runs import run_fig1, run_msweep, run_quintiles, run_ssweep
from .spec import (ExperimentSpec, apply_config, fig1_spec, load_config, msweep_spec,
                   quintiles_spec, ssweep_spec)
from .svg import PlotStyle, emit_svg, render_svg
