"""Threshold, limit formulas and simulation for M/GI/s+GI queues under SRPT."""

from ._core import (
    Distribution,
    Discipline,
    Family,
    Metric,
    SystemConfig,
    asymptotic_report,
    erlang_blocking,
    erlang_blocking_integral,
    fcfs_fluid_boundary_wait,
    fcfs_fluid_wait,
    figure1,
    figure2,
    figure3,
    lcfs_fluid_wait,
    loss_class1_throughput,
    run_coupled,
    simulate,
    solve_threshold,
    throughput_bound_oracle,
    verify,
)

__all__ = [
    "Distribution",
    "Discipline",
    "Family",
    "Metric",
    "SystemConfig",
    "asymptotic_report",
    "erlang_blocking",
    "erlang_blocking_integral",
    "fcfs_fluid_boundary_wait",
    "fcfs_fluid_wait",
    "figure1",
    "figure2",
    "figure3",
    "lcfs_fluid_wait",
    "loss_class1_throughput",
    "run_coupled",
    "simulate",
    "solve_threshold",
    "throughput_bound_oracle",
    "verify",
]
