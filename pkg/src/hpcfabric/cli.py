"""Batch command-line front end.

Subcommands: topology, plan, budget, sweep, scale, metrics. Each reads one
JSON input (the bundled example when the flag is omitted), prints a report
to stdout (aligned text, or the primary table as CSV) and optionally writes
every table as CSV into ``--out``.

Exit codes: 0 ok, 2 input/schema error, 3 channel collision,
4 unknown reference, 5 infeasible budget.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from typing import Sequence

from . import dwdm_plan, link_budget, media, metrics, topology
from .config import (
    ConfigError,
    UnknownReference,
    bundled,
    load_catalog,
    load_network,
    load_system,
)
from .power_math import mw_to_dbm
from .reports import Report, Table, fmt_ber, fmt_db, fmt_num, write_report

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_COLLISION = 3
EXIT_UNKNOWN_REF = 4
EXIT_INFEASIBLE = 5

DEFAULT_CONFIG = "system_6x6.json"
DEFAULT_NETWORK = "testbed_network.json"
DEFAULT_CATALOG = "catalog.json"


@dataclass
class Outcome:
    report: Report
    exit_code: int = EXIT_OK
    warnings: tuple[str, ...] = ()


def _pct(fraction: float) -> str:
    return f"{100.0 * fraction:.2f}"


# -- commands ----------------------------------------------------------------

def run_topology(config_path, command: str = "topology") -> Outcome:
    cfg, digest = load_system(config_path)
    report = Report(command, digest, primary="histogram")
    warnings = []

    hist = topology.length_histogram(cfg.grid)
    t = report.add_table(Table("histogram", ["length_cm", "count"]))
    for length, count in hist.bins.items():
        t.add(fmt_num(length), count)
    if hist.total == 0:
        warnings.append(f"{cfg.grid.rows}x{cfg.grid.cols} grid has no links; histogram is empty")

    report.notes.append(
        f"{cfg.grid.rows}x{cfg.grid.cols} nodes at {fmt_num(cfg.grid.pitch_cm)} cm pitch: "
        f"{hist.total} ordered links, longest {fmt_num(hist.max_length_cm)} cm"
    )

    splits = report.add_table(Table("splits", [
        "rate_gbps", "bd_limit_gbps_cm", "breakpoint_cm", "electrical_count", "optical_count",
        "total", "optical_percent", "quoted_optical_count", "quoted_optical_percent", "note",
    ]))
    for c in media.crossover_table(cfg.grid, cfg.rates_gbps, cfg.electrical_bd_limit):
        q_count = cfg.quoted_optical_count.get(c.rate_gbps)
        q_pct = cfg.quoted_optical_percent.get(c.rate_gbps)
        note = ""
        if q_count is not None and q_count != c.optical_count:
            note = f"computed {c.optical_count} links vs quoted {q_count}"
        elif q_pct is not None and abs(100.0 * c.optical_fraction - q_pct) > cfg.percent_tolerance:
            note = (f"discrepancy: computed {_pct(c.optical_fraction)}% vs quoted {fmt_num(q_pct)}%; "
                    "the quoted value is not reproducible from the Manhattan length model")
        if note:
            report.notes.append(f"{fmt_num(c.rate_gbps)} Gbps: {note}")
        splits.add(fmt_num(c.rate_gbps), fmt_num(c.bd_limit_gbps_cm), fmt_num(c.breakpoint_cm),
                   c.electrical_count, c.optical_count, c.total, _pct(c.optical_fraction),
                   fmt_num(q_count), fmt_num(q_pct), note)

    reach = report.add_table(Table("media_reach", ["medium", "class", "bd_gbps_cm"]
                                   + [f"reach_cm_at_{fmt_num(r)}g" for r in cfg.rates_gbps]))
    for m in cfg.media_catalog:
        reach.add(m.name, m.medium_class.value, fmt_num(m.bd_gbps_cm),
                  *[fmt_num(media.max_reach_cm(m, r)) for r in cfg.rates_gbps])
    return Outcome(report, EXIT_OK, tuple(warnings))


def run_plan(network_path, command: str = "plan") -> Outcome:
    plan, digest = load_network(network_path)
    net = plan.network
    report = Report(command, digest, primary="assignments")

    assign = report.add_table(Table("assignments", [
        "channel", "frequency_thz", "wavelength_nm", "quoted_wavelength_nm", "nodes"]))
    for ch, who in dwdm_plan.active_channel_assignments(net).items():
        c = net.channel(ch)
        assign.add(ch, f"{c.frequency_thz:.1f}", f"{c.wavelength_nm:.2f}",
                   fmt_num(plan.quoted_wavelength_nm.get(ch)), " ".join(who))

    collisions = dwdm_plan.detect_collisions(net)
    coll = report.add_table(Table("collisions", ["channel", "nodes"]))
    for ch, who in collisions:
        coll.add(ch, " ".join(who))

    tunables = report.add_table(Table("free_channels", ["node", "tuning_range", "free_channels"]))
    for node in net.nodes:
        for tx in node.transmitters:
            if tx.tunable:
                free = dwdm_plan.free_channels(net, tx.tuning, querying=node.name)
                tunables.add(node.name, _channel_list(tx.tuning), _channel_list(free))

    reach = report.add_table(Table("reachability", ["receiver", "select_channels", "hears"]))
    if collisions:
        for ch, who in collisions:
            report.notes.append(f"collision on channel {ch} between {', '.join(who)}")
        report.notes.append("reachability not evaluated while channels collide")
        return Outcome(report, EXIT_COLLISION)
    heard = dwdm_plan.reachability(net)
    for label, rx in net.receivers():
        reach.add(label, _channel_list(rx.select_channels), " ".join(sorted(heard[label])))
    return Outcome(report, EXIT_OK)


def _channel_list(channels) -> str:
    return " ".join(str(c) for c in sorted(channels))


def run_budget(network_path, path_name: str, command: str = "budget") -> Outcome:
    plan, digest = load_network(network_path)
    entry = plan.path(path_name)
    b = link_budget.compute_budget(entry.path)
    report = Report(command, digest, primary="stages")

    stages = report.add_table(Table("stages", ["stage", "loss_db", "power_dbm"]))
    for s in b.stages:
        stages.add(s.name, fmt_db(s.loss_db), fmt_db(s.power_dbm))

    summary = report.add_table(Table("summary", ["quantity", "computed", "quoted"]))
    summary.add("launch_oma_dbm", fmt_db(b.launch_oma_dbm), "")
    summary.add("total_loss_db", fmt_db(b.total_loss_db), "")
    summary.add("received_oma_dbm", fmt_db(b.received_oma_dbm), fmt_db(entry.quoted_received_dbm))
    summary.add("sensitivity_dbm", fmt_db(b.sensitivity_dbm), "")
    summary.add("margin_db", fmt_db(b.margin_db), fmt_db(entry.quoted_margin_db))

    if entry.description:
        report.notes.append(f"{path_name}: {entry.description}")
    launch = entry.path.launch
    if launch.average_mw > 0:
        report.notes.append(
            f"launch average power {fmt_db(mw_to_dbm(launch.average_mw))} dBm at "
            f"{fmt_num(launch.extinction_ratio_db)} dB extinction ratio (budget is OMA-referenced)"
        )
    if not b.feasible:
        report.notes.append(f"infeasible link: margin {fmt_db(b.margin_db)} dB")
    return Outcome(report, EXIT_OK)


def run_sweep(network_path, path_name: str, start: float, stop: float, step: float,
              command: str = "sweep") -> Outcome:
    plan, digest = load_network(network_path)
    entry = plan.path(path_name)
    rows = link_budget.attenuation_sweep(entry.path, start, stop, step, plan.ber_model)
    report = Report(command, digest, primary="sweep")
    t = report.add_table(Table("sweep", ["attenuation_db", "received_dbm", "ber"]))
    for r in rows:
        t.add(fmt_db(r.attenuation_db), fmt_db(r.received_dbm), fmt_ber(r.ber))
    margin = link_budget.compute_budget(entry.path).margin_db
    crossing = link_budget.ber_crossing_db(rows)
    if crossing is None:
        report.notes.append(f"BER stays at or below 1e-12 across the sweep (margin {fmt_db(margin)} dB)")
    else:
        report.notes.append(
            f"BER first exceeds 1e-12 at {fmt_db(crossing)} dB attenuation (margin {fmt_db(margin)} dB)"
        )
    return Outcome(report, EXIT_OK)


def run_scale(network_path, min_margin_db: float | None = None, command: str = "scale") -> Outcome:
    plan, digest = load_network(network_path)
    if not plan.scaling:
        raise UnknownReference("network file has no scaling ledger")
    report = Report(command, digest, primary="scaling")
    table = report.add_table(Table("scaling", [
        "ledger", "ports", "splitting_loss_db", "excess_delta_db", "predicted_margin_db",
        "quoted_margin_db", "feasible"]))
    summary = report.add_table(Table("max_ports", ["ledger", "min_margin_db", "max_ports"]))
    exit_code = EXIT_OK
    for entry in plan.scaling:
        ledger = entry.ledger
        if min_margin_db is not None:
            ledger = replace(ledger, min_margin_db=min_margin_db)
        for ports, margin in link_budget.scaling_rows(ledger):
            table.add(ledger.name, ports, fmt_db(link_budget.splitting_loss_db(ports)),
                      fmt_db(ledger.excess_delta(ports)), fmt_db(margin),
                      fmt_db(entry.quoted_margin_db.get(ports)),
                      margin >= ledger.min_margin_db)
        try:
            best = link_budget.max_broadcast_ports(ledger)
            summary.add(ledger.name, fmt_db(ledger.min_margin_db), best)
        except link_budget.InfeasibleError as exc:
            summary.add(ledger.name, fmt_db(ledger.min_margin_db), "")
            report.notes.append(f"{ledger.name}: {exc}")
            exit_code = EXIT_INFEASIBLE
        if ledger.excess_delta_db:
            report.notes.append(
                f"{ledger.name}: excess-loss deltas {dict(ledger.excess_delta_db)} dB are lower bounds"
            )
    return Outcome(report, exit_code)


def run_metrics(catalog_path, command: str = "metrics") -> Outcome:
    cat, digest = load_catalog(catalog_path)
    report = Report(command, digest, primary="transceivers")

    tx = report.add_table(Table("transceivers", [
        "name", "group", "lanes", "rate_per_lane_gbps", "total_power_mw",
        "derived_pj_per_bit", "printed_pj_per_bit", "pj_flag",
        "reach_m", "derived_bd_gbps_cm", "printed_bd_gbps_cm", "bd_flag"]))
    for row in metrics.comparison_table(cat.transceivers):
        tx.add(row.name, cat.groups.get(row.name, ""), row.lanes, fmt_num(row.rate_per_lane_gbps),
               fmt_num(row.total_power_mw), fmt_num(row.derived_pj_per_bit, 2),
               fmt_num(row.printed_pj_per_bit), row.pj_flag, fmt_num(row.reach_m),
               fmt_num(row.derived_bd_gbps_cm), fmt_num(row.printed_bd_gbps_cm), row.bd_flag)
        if row.pj_flag:
            report.notes.append(
                f"{row.name}: derived {row.derived_pj_per_bit:.2f} pJ/bit vs printed "
                f"{fmt_num(row.printed_pj_per_bit)} ({row.pj_flag})"
            )
        if row.bd_flag:
            report.notes.append(
                f"{row.name}: printed B*d {fmt_num(row.printed_bd_gbps_cm)} Gbps-cm is not "
                f"rate x reach ({fmt_num(row.derived_bd_gbps_cm)}); kept as printed"
            )

    if cat.energy_scaling:
        es = report.add_table(Table("energy_scaling", [
            "name", "base_pj_per_bit", "base_rate_gbps", "new_rate_gbps",
            "derived_pj_per_bit", "printed_pj_per_bit", "flag"]))
        for e in cat.energy_scaling:
            es.add(e.name, fmt_num(e.base_pj_per_bit), fmt_num(e.base_rate_gbps),
                   fmt_num(e.new_rate_gbps), fmt_num(e.derived_pj_per_bit, 2),
                   fmt_num(e.printed_pj_per_bit), e.flag)

    if cat.connectors:
        dens = report.add_table(Table("density", [
            "name", "bandwidth_gbps", "area_mm2", "derived_gbps_per_mm2",
            "printed_gbps_per_mm2", "flag"]))
        for d in metrics.density_table(cat.connectors):
            dens.add(d.name, fmt_num(d.bandwidth_gbps), fmt_num(d.area_mm2, 2),
                     fmt_num(d.derived_density, 3), fmt_num(d.printed_density), d.flag)
            if d.flag:
                report.notes.append(
                    f"{d.name}: derived {d.derived_density:.3f} Gbps/mm2 vs printed "
                    f"{fmt_num(d.printed_density)} ({d.flag})"
                )

    if cat.density_comparisons:
        ratios = report.add_table(Table("density_ratios", [
            "numerator", "denominator", "derived_ratio", "quoted_ratio"]))
        for num, den, quoted in cat.density_comparisons:
            r = metrics.density_ratio(cat.connector(num), cat.connector(den))
            ratios.add(num, den, fmt_num(r, 2), fmt_num(quoted))

    if cat.cost_bands:
        cost = report.add_table(Table("cost_zones", [
            "name", "low_usd_per_gbps", "high_usd_per_gbps", "zone_at_low", "zone_at_high"]))
        for name, lo, hi in cat.cost_bands:
            cost.add(name, fmt_num(lo), fmt_num(hi),
                     metrics.cost_crossover_zone(lo), metrics.cost_crossover_zone(hi))

    if cat.power_breakdowns:
        pb = report.add_table(Table("power_breakdown", ["name", "block", "fraction"]))
        for name, breakdown in cat.power_breakdowns:
            for block, frac in breakdown.blocks.items():
                pb.add(name, block, fmt_num(frac, 3))
    return Outcome(report, EXIT_OK)


# -- argument handling -------------------------------------------------------

def _atten_range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric attenuation range {text!r}") from None
    if step <= 0:
        raise argparse.ArgumentTypeError("step must be > 0")
    if stop < start:
        raise argparse.ArgumentTypeError("stop must not be below start")
    return start, stop, step


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hpcfabric",
        description="Plan electrical/optical fabrics: link lengths, DWDM channel plans, "
                    "optical budgets and comparison metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", metavar="DIR", help="write every table as CSV into DIR")
        p.add_argument("--format", choices=("text", "csv"), default="text",
                       help="stdout format: full text report or the primary table as CSV")

    p = sub.add_parser("topology", help="link-length histogram and electrical/optical split")
    p.add_argument("--config", help="system config JSON (default: bundled 6x6 example)")
    common(p)

    p = sub.add_parser("plan", help="validate a broadcast-and-select channel plan")
    p.add_argument("--network", help="network plan JSON (default: bundled 4-node plan)")
    common(p)

    p = sub.add_parser("budget", help="per-stage power budget and margin for one path")
    p.add_argument("--network")
    p.add_argument("--path", required=True, help="path name in the network file")
    common(p)

    p = sub.add_parser("sweep", help="BER versus inserted attenuation")
    p.add_argument("--network")
    p.add_argument("--path", required=True)
    p.add_argument("--atten", type=_atten_range, default=(0.0, 30.0, 0.5),
                   metavar="START:STOP:STEP", help="attenuation range in dB (default 0:30:0.5)")
    common(p)

    p = sub.add_parser("scale", help="star-coupler scaling limit from a margin ledger")
    p.add_argument("--network")
    p.add_argument("--min-margin", type=float, default=3.0, metavar="DB",
                   help="minimum acceptable margin in dB (default 3)")
    common(p)

    p = sub.add_parser("metrics", help="energy/bit, density and cost comparison tables")
    p.add_argument("--catalog", help="metric catalog JSON (default: bundled catalog)")
    common(p)
    return parser


def _echo(argv: Sequence[str]) -> str:
    # the output directory is left out so reports do not depend on where they land
    kept, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--out":
            skip = True
        elif not a.startswith("--out="):
            kept.append(a)
    return " ".join(["hpcfabric", *kept])


def dispatch(args: argparse.Namespace, echo: str) -> Outcome:
    if args.command == "topology":
        return run_topology(args.config or bundled(DEFAULT_CONFIG), echo)
    network = args.network if getattr(args, "network", None) else bundled(DEFAULT_NETWORK)
    if args.command == "plan":
        return run_plan(network, echo)
    if args.command == "budget":
        return run_budget(network, args.path, echo)
    if args.command == "sweep":
        start, stop, step = args.atten
        return run_sweep(network, args.path, start, stop, step, echo)
    if args.command == "scale":
        return run_scale(network, args.min_margin, echo)
    if args.command == "metrics":
        return run_metrics(args.catalog or bundled(DEFAULT_CATALOG), echo)
    raise AssertionError(args.command)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        outcome = dispatch(args, _echo(argv))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnknownReference as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_REF

    for w in outcome.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if outcome.exit_code == EXIT_COLLISION:
        for note in outcome.report.notes:
            if note.startswith("collision"):
                print(f"error: {note}", file=sys.stderr)

    if args.format == "csv":
        sys.stdout.write(outcome.report.primary_table().to_csv())
    else:
        sys.stdout.write(outcome.report.to_text())
    if args.out:
        write_report(outcome.report, args.out, args.command)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
