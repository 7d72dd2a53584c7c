"""Run the verification report for every construction and print a summary table.

    python3 scripts/run_verifications.py --n 2 3 --out reports/
"""

import argparse
import json
from dataclasses import dataclass, field
from pathlib import Path

from gpdgrid.cli import RunConfig, run_verify

DEFAULT = ("F", "Fprime", "pullback", "sublevel-rips", "sublevel-cech", "degree-rips",
           "degree-cech")


@dataclass
class SweepConfig:
    constructions: tuple = DEFAULT
    ns: list = field(default_factory=lambda: [2, 3])
    field_p: int = 2
    out: Path | None = None


def sweep(cfg: SweepConfig) -> list[dict]:
    rows = []
    for name in cfg.constructions:
        for n in cfg.ns:
            if name == "pullback" and n > 2:
                continue  # the 3-parameter run is only budgeted at n = 2
            rep = run_verify(RunConfig("verify", construction=name, n=n, p=cfg.field_p))
            failed = [r.check for r in rep.records if not r.passed and not r.informational]
            rows.append({"construction": name, "n": n, "passed": rep.passed,
                         "checks": len(rep.records), "failed": failed,
                         "seconds": round(rep.seconds, 3)})
            if cfg.out is not None:
                cfg.out.mkdir(parents=True, exist_ok=True)
                (cfg.out / f"{name}_n{n}.json").write_text(
                    json.dumps(rep.to_json(), sort_keys=True, indent=1))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--constructions", nargs="+", default=list(DEFAULT))
    ap.add_argument("--n", nargs="+", type=int, default=[2, 3])
    ap.add_argument("--field", type=int, default=2)
    ap.add_argument("--out", type=Path, default=None)
    a = ap.parse_args()
    rows = sweep(SweepConfig(tuple(a.constructions), a.n, a.field, a.out))
    print(f"{'construction':<15} {'n':>2} {'ok':>5} {'checks':>6} {'secs':>7}  failing")
    for r in rows:
        print(f"{r['construction']:<15} {r['n']:>2} {str(r['passed']):>5} {r['checks']:>6} "
              f"{r['seconds']:>7.2f}  {', '.join(r['failed'])}")


if __name__ == "__main__":
    main()
