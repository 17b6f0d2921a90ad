"""Command line interface: ``lanesim simulate|preset|table1|verify``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .config import load_configs
from .errors import LanesimError
from .output import emit_run
from .scenarios import PRESETS, preset, reproduce_table1, run_many
from .verify import all_enforced_pass, verify_config

log = logging.getLogger("lanesim")


def _emit_all(configs, out: Path, workers):
    outputs = run_many(configs, workers)
    single = len(outputs) == 1
    for o in outputs:
        target = out if single else out / o.config.name
        emit_run(o, target)
        log.info("wrote %s (%d steps)", target, o.n_steps)
    return 0


def cmd_simulate(args):
    return _emit_all(load_configs(args.config), Path(args.out), args.workers)


def cmd_preset(args):
    return _emit_all(preset(args.name), Path(args.out), args.workers)


def cmd_table1(args):
    rows = reproduce_table1(args.workers)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "table1.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["nu", "kernel", "lane", "error", "published", "rel_dev", "flagged"])
        for r in rows:
            w.writerow([r.nu, r.kernel, r.lane, format(r.error, ".17g"), r.reference,
                        format(r.rel_dev, ".6f"), int(r.flagged)])
    print(f"{'nu':>6} {'kernel':>10} {'lane':>4} {'ours':>9} {'published':>9} {'dev':>8}")
    for r in rows:
        mark = "  <-- off by more than 15%" if r.flagged else ""
        print(f"{r.nu:>6} {r.kernel:>10} {r.lane:>4} {r.error:9.5f} {r.reference:9.4f} "
              f"{r.rel_dev:+8.2%}{mark}")
    return 1 if any(r.flagged for r in rows) else 0


def cmd_verify(args):
    report = []
    ok = True
    for cfg in load_configs(args.config):
        checks = verify_config(cfg)
        ok &= all_enforced_pass(checks)
        report.append({"run": cfg.name, "checks": [c.as_dict() for c in checks]})
    text = json.dumps(report if len(report) > 1 else report[0]["checks"], indent=2)
    if args.report:
        Path(args.report).parent.mkdir(parents=True, exist_ok=True)
        Path(args.report).write_text(text + "\n")
    print(text)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lanesim", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel runs (capped by LANESIM_THREADS)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a configuration file")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("preset", help="run a shipped experiment")
    s.add_argument("--name", required=True, choices=sorted(PRESETS))
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_preset)

    s = sub.add_parser("table1", help="reproduce the nu -> 0 error table")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_table1)

    s = sub.add_parser("verify", help="check discrete properties along a run")
    s.add_argument("--config", required=True)
    s.add_argument("--report", help="also write the JSON report here")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except LanesimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
