"""Command-line driver: ``generate | gri | gpd | verify | bench``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O or
schema error. ``GPD_LOG`` sets the log level (e.g. ``INFO``, ``DEBUG``).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field

from . import constructions as C
from .bifiltration import Bifiltration
from .diagram import FORMAT, Diagram
from .grid import Interval2, contains, enumerate_intervals
from .inversion import (gpd_cover, gpd_direct, gpd_from_gri, roundtrip_failures,
                        support_size)
from .linalg import is_prime, rank
from .pmodule import GridModule, generalized_rank, gri, module_from_bifiltration

log = logging.getLogger("gpdgrid")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

CONSTRUCTIONS = ("F", "Fprime", "pullback", "sublevel-rips", "sublevel-cech",
                 "degree-rips", "degree-cech", "sublevel-rips-cloud", "degree-rips-cloud")
BENCH_CAP = 12


class UsageError(Exception):
    pass


class SchemaError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    construction: str | None = None
    n: int = 3
    m: int | None = None
    d: int = 3
    p: int = 2
    rows: tuple | None = None
    cols: tuple | None = None
    preset: str | None = None
    method: str = "recursive"
    input: str | None = None
    out: str | None = None
    threads: int = 1
    n_min: int = 2
    n_max: int = 8
    allow_large: bool = False
    support_max: int = 4

    def validate(self):
        if self.construction is not None and self.construction not in CONSTRUCTIONS:
            raise UsageError(f"unknown construction {self.construction!r}")
        if self.n < 1:
            raise UsageError("n must be at least 1")
        if not is_prime(self.p):
            raise UsageError(f"field characteristic must be prime, got {self.p}")
        if self.d not in (2, 3, 4):
            raise UsageError("d must be 2, 3 or 4")
        if self.m is not None and self.m < 0:
            raise UsageError("degree must be nonnegative")
        if self.threads < 1:
            raise UsageError("threads must be positive")
        if self.method not in ("recursive", "cover"):
            raise UsageError("method must be 'recursive' or 'cover'")
        if self.command == "bench":
            if self.n_min < 1 or self.n_max < self.n_min:
                raise UsageError("need 1 <= n-min <= n-max")
            if self.n_max > BENCH_CAP and not self.allow_large:
                raise UsageError(f"n-max above {BENCH_CAP} needs --allow-large")

    @property
    def degree(self) -> int:
        if self.m is not None:
            return self.m
        return 0 if self.construction in ("F", "pullback") else 1


@dataclass
class Record:
    check: str
    expected: object
    computed: object
    passed: bool
    informational: bool = False


@dataclass
class VerificationReport:
    construction: str
    n: int
    records: list = field(default_factory=list)
    seconds: float = 0.0

    def add(self, check, expected, computed, passed=None, informational=False):
        ok = (expected == computed) if passed is None else bool(passed)
        self.records.append(Record(check, expected, computed, ok, informational))

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records if not r.informational)

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "construction": self.construction,
            "n": self.n,
            "passed": self.passed,
            "total": len(self.records),
            "failed": sum(1 for r in self.records if not r.passed and not r.informational),
            "seconds": round(self.seconds, 3),
            "records": [asdict(r) for r in self.records],
        }


# ---------------------------------------------------------------------------
# argument parsing


def _range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        return int(a), int(b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gpdgrid", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, construction_required=False):
        sp.add_argument("--construction", choices=CONSTRUCTIONS, required=construction_required)
        sp.add_argument("--n", type=int, default=3)
        sp.add_argument("--m", "--degree", dest="m", type=int, default=None,
                        help="homology degree (F' also uses it as its parameter m)")
        sp.add_argument("--d", type=int, default=3, help="number of parameters for pullbacks")
        sp.add_argument("--field", dest="p", type=int, default=2)
        sp.add_argument("--out", default=None)
        sp.add_argument("--threads", type=int, default=1)

    def grids(sp):
        sp.add_argument("--input", default=None, help="bifiltration or module JSON")
        sp.add_argument("--rows", type=_range, default=None, help="first-axis index range a..b")
        sp.add_argument("--cols", type=_range, default=None, help="second-axis index range c..d")
        sp.add_argument("--preset", choices=("paper-restricted",), default=None)

    g = sub.add_parser("generate", help="write a filtration (JSON) or point cloud (CSV)")
    common(g, True)
    grids(g)
    for name in ("gri", "gpd"):
        sp = sub.add_parser(name, help=f"compute the {name.upper()}")
        common(sp)
        grids(sp)
        sp.add_argument("--method", choices=("recursive", "cover"), default="recursive")
    v = sub.add_parser("verify", help="check the expected invariants of a construction")
    common(v, True)
    b = sub.add_parser("bench", help="time the cover-subset evaluation of dgm(U_[n])")
    b.add_argument("--n-min", type=int, default=2)
    b.add_argument("--n-max", type=int, default=8)
    b.add_argument("--allow-large", action="store_true")
    b.add_argument("--support-max", type=int, default=4,
                   help="largest n whose full diagram support is computed")
    b.add_argument("--field", dest="p", type=int, default=2)
    b.add_argument("--out", default=None)
    b.add_argument("--threads", type=int, default=1)
    return ap


def config_from_args(ns) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for k in ("construction", "n", "m", "d", "p", "rows", "cols", "preset", "method",
              "input", "out", "threads", "n_min", "n_max", "allow_large", "support_max"):
        if hasattr(ns, k):
            setattr(cfg, k, getattr(ns, k))
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# building filtrations and modules


def _box(cfg: RunConfig, shape):
    if cfg.rows is None and cfg.cols is None:
        return None
    r = cfg.rows or (0, shape[0] - 1)
    c = cfg.cols or (0, shape[1] - 1)
    if not (0 <= r[0] <= r[1] < shape[0] and 0 <= c[0] <= c[1] < shape[1]):
        raise UsageError(f"subgrid {r}x{c} is outside the grid of shape {tuple(shape)}")
    return (r[0], c[0]), (r[1], c[1])


def build_filtration(cfg: RunConfig) -> Bifiltration:
    name, n = cfg.construction, cfg.n
    if name == "F":
        return C.filtration_F(n)
    if name == "Fprime":
        return C.filtration_Fprime(n, cfg.m if cfg.m is not None else 1)
    if name == "pullback":
        return C.pullback_filtration(C.filtration_F(n), cfg.d)
    if name in ("sublevel-rips", "sublevel-cech"):
        flavor = name.split("-")[1]
        if cfg.preset == "paper-restricted":
            return C.sublevel_blowup_filtration(n, flavor, cfg.degree)
        X, gamma, _ = C.pointcloud_sublevel(n)
        bf = C.sublevel_bifiltration(X, gamma, flavor, cfg.degree)
        box = _box(cfg, bf.shape)
        return bf if box is None else bf.restrict_to_box(*box)
    if name in ("degree-rips", "degree-cech"):
        flavor = name.split("-")[1]
        if cfg.preset == "paper-restricted":
            return C.degree_blowup_filtration(n, flavor, cfg.degree)
        X, _ = C.pointcloud_degree(n)
        bf = C.degree_bifiltration(X, flavor, cfg.degree)
        box = _box(cfg, bf.shape)
        return bf if box is None else bf.restrict_to_box(*box)
    raise UsageError(f"{name} is a point cloud, not a filtration")


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc


def load_module(cfg: RunConfig) -> GridModule:
    if cfg.input is not None:
        obj = _load_json(cfg.input)
        try:
            if "dims" in obj:
                M = GridModule.from_json(obj)
                if not M.check_commutative():
                    raise SchemaError("module arrows do not commute")
            else:
                bf = Bifiltration.from_json(obj)
                box = _box(cfg, bf.shape)
                if box is not None:
                    bf = bf.restrict_to_box(*box)
                M = module_from_bifiltration(bf, cfg.degree, cfg.p)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"invalid input {cfg.input}: {exc}") from exc
        return M
    if cfg.construction is None:
        raise UsageError("give --construction or --input")
    bf = build_filtration(cfg)
    if bf.ndim == 2 and cfg.construction in ("F", "Fprime"):
        box = _box(cfg, bf.shape)
        if box is not None:
            bf = bf.restrict_to_box(*box)
    return module_from_bifiltration(bf, cfg.degree, cfg.p)


# ---------------------------------------------------------------------------
# output


def _dump(obj, path: str | None):
    text = json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    _write(text, path)


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise SchemaError(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_generate(cfg: RunConfig) -> int:
    name, n = cfg.construction, cfg.n
    if name == "sublevel-rips-cloud":
        X, gamma, _ = C.pointcloud_sublevel(n)
        _write(X.to_csv(gamma), cfg.out)
        return EXIT_OK
    if name == "degree-rips-cloud":
        X, _ = C.pointcloud_degree(n)
        _write(X.to_csv(), cfg.out)
        return EXIT_OK
    bf = build_filtration(cfg)
    _dump(bf.to_json(), cfg.out)
    return EXIT_OK


def _product_ranks(M: GridModule, n2: int):
    """Ranks of ``I' x [n]^{d-2}`` for every 2-d interval ``I'``."""
    from .grid import Grid2
    grid = Grid2(M.shape[0] - 1, M.shape[1] - 1)
    extra = list(s - 1 for s in M.shape[2:])
    vals = {}
    for I in enumerate_intervals(grid):
        r = generalized_rank(M, C.product_interval(I, extra))
        if r:
            vals[I] = r
    return Diagram(grid, vals)


def compute_gri(cfg: RunConfig, M: GridModule) -> Diagram:
    if M.ndim == 2:
        return gri(M, threads=cfg.threads)
    log.info("%d-parameter module: ranks of product intervals only", M.ndim)
    return _product_ranks(M, M.shape[1] - 1)


def cmd_gri(cfg: RunConfig) -> int:
    M = load_module(cfg)
    rk = compute_gri(cfg, M)
    out = rk.to_json()
    out["kind"] = "gri"
    _dump(out, cfg.out)
    return EXIT_OK


def cmd_gpd(cfg: RunConfig) -> int:
    M = load_module(cfg)
    t = time.perf_counter()
    rk = compute_gri(cfg, M)
    if cfg.method == "recursive":
        dgm = gpd_from_gri(rk)
    else:
        dgm = gpd_cover(rk, threads=cfg.threads)
    bad = roundtrip_failures(rk, dgm)
    log.info("gpd computed in %.3fs", time.perf_counter() - t)
    if bad:
        log.error("round-trip check failed on %d intervals", len(bad))
        return EXIT_FAIL
    out = {"format": FORMAT, "kind": "gpd", "method": cfg.method,
           "gri": rk.to_json(), "gpd": dgm.to_json(),
           "support": {"gri": support_size(rk), "gpd": support_size(dgm)}}
    if cfg.out is not None:
        _dump(out, cfg.out)
    sys.stdout.write(f"gri_support={support_size(rk)} gpd_support={support_size(dgm)}\n")
    if cfg.out is None:
        _dump(out, None)
    return EXIT_OK


def _blowup_checks(rep: VerificationReport, M: GridModule, n: int, kind: str):
    expected = C.blowup_dims(n, kind)
    rep.add("dims_table", expected.tolist(), M.dims.tolist())
    rk = gri(M)
    dgm = gpd_from_gri(rk)
    ext = n + 1 if kind == "degree" else n
    U = C.blowup_U(n, ext)
    bottom = C.blowup_U_S(range(n + 1), n, kind)
    c1 = c2 = 0
    for J in enumerate_intervals(M.grid):
        proper = contains(U, J) and J != U
        if not proper and rk[J] != 0:
            c1 += 1
        if proper and contains(J, bottom) and rk[J] != 1:
            c2 += 1
    rep.add("rank_zero_off_proper_subintervals_of_U", 0, c1)
    rep.add("rank_one_between_bottom_and_U", 0, c2)
    for i in range(n + 1):
        rep.add(f"dgm_single_removal_{i}", 1, dgm[C.blowup_U_S([i], n, kind)])
    for k in range(1, n + 2):
        for S in itertools.combinations(range(n + 1), k):
            rep.add(f"dgm_removed_{'_'.join(map(str, S))}", (-1) ** (k + 1), dgm[C.blowup_U_S(S, n, kind)])
    lb = 2 ** (n + 1) - 1
    rep.add("support_lower_bound", f">= {lb}", support_size(dgm), support_size(dgm) >= lb)
    rep.add("roundtrip", 0, len(roundtrip_failures(rk, dgm)))
    rep.add("support_within_gri_support", True, all(rk[I] for I in dgm.entries))
    return rk, dgm


def _antidiagonal_arrows(rep, M, n, kind):
    """Arrows from antidiagonal points into ``F^{n+1}`` covers are injective."""
    bad = 0
    for i in range(n + 1):
        p = C.blowup_removed_point(i, n, kind)
        for axis in (0, 1):
            A = M.arrows.get((p, axis))
            if A is None or M.dim(_step(p, axis)) != n + 1:
                continue
            if A.shape != (n + 1, n) or rank(A, M.p) != n:
                bad += 1
    rep.add("antidiagonal_cover_arrows_injective", 0, bad)


def _step(p, axis):
    return (p[0] + 1, p[1]) if axis == 0 else (p[0], p[1] + 1)


def _verify_F(cfg, rep):
    n = cfg.n
    bf = build_filtration(cfg)
    if cfg.construction == "F":
        rep.add("simplex_count", (n + 1) * (n + 2) // 2, bf.num_simplices())
    M = module_from_bifiltration(bf, cfg.degree, cfg.p)
    rep.add("commutative", True, M.check_commutative())
    _antidiagonal_arrows(rep, M, n, "F")
    _blowup_checks(rep, M, n, "F")
    if cfg.construction == "F":
        res = gpd_direct(M, C.blowup_U_S(range(n + 1), n))
        rep.add("cover_sum_nonzero_terms", 2 ** (n + 1) - 1, res.nonzero_terms)
        rep.add("cover_sum_value", (-1) ** (n + 2), res.value)
    else:
        M0 = module_from_bifiltration(C.filtration_F(n), 0, cfg.p)
        same = (M0.dims == M.dims).all() and all(
            rank(M.arrows[k], M.p) == rank(M0.arrows[k], M.p) for k in M.arrows)
        rep.add("isomorphic_to_degree0_module", True, bool(same))


def _verify_pullback(cfg, rep):
    n, d = cfg.n, cfg.d
    if d == 2:
        raise UsageError("pullback needs d >= 3")
    M2 = module_from_bifiltration(C.filtration_F(n), 0, cfg.p)
    Md = module_from_bifiltration(C.pullback_filtration(C.filtration_F(n), d), 0, cfg.p)
    rep.add("commutative", True, Md.check_commutative())
    rk2 = gri(M2)
    rkd = _product_ranks(Md, n)
    rep.add("product_ranks_equal_planar_ranks", 0,
            sum(1 for I in enumerate_intervals(M2.grid) if rk2[I] != rkd[I]))
    dgm2 = gpd_from_gri(rk2)
    dgmd = gpd_from_gri(rkd)
    rep.add("product_family_diagram_equals_planar", True, dgm2 == dgmd)
    rep.add("product_family_roundtrip", 0, len(roundtrip_failures(rkd, dgmd)))


def _verify_sublevel(cfg, rep):
    n = cfg.n
    flavor = cfg.construction.split("-")[1]
    X, gamma, info = C.pointcloud_sublevel(n)
    rep.add("point_count", 4 * n * (n + 2), len(X))
    rep.add("gamma_values", list(range(n + 1)), sorted(int(g) for g in set(gamma)))
    T = C.distance_values(X)
    rep.add("T_prime_contiguous", True, C.is_contiguous_run(T, sorted(info["b"])))
    bf = C.sublevel_blowup_filtration(n, flavor, cfg.degree)
    M = module_from_bifiltration(bf, cfg.degree, cfg.p)
    _antidiagonal_arrows(rep, M, n, "F")
    _blowup_checks(rep, M, n, "F")


def _verify_degree(cfg, rep):
    n = cfg.n
    flavor = cfg.construction.split("-")[1]
    X, info = C.pointcloud_degree(n)
    rep.add("point_count", info["expected_size"], len(X))
    rep.add("point_count_stated", info["stated_size"], len(X), informational=True)
    N = len(X)
    rep.add("J_prime_inside_degree_axis", True, N - 1 >= n + 4)
    T = C.distance_values(X)
    rep.add("T_prime_contiguous", True, C.is_contiguous_run(T, info["b"]))
    bf = C.degree_blowup_filtration(n, flavor, cfg.degree)
    M = module_from_bifiltration(bf, cfg.degree, cfg.p)
    _antidiagonal_arrows(rep, M, n, "degree")
    _blowup_checks(rep, M, n, "degree")


def run_verify(cfg: RunConfig) -> VerificationReport:
    rep = VerificationReport(cfg.construction, cfg.n)
    t = time.perf_counter()
    name = cfg.construction
    if name in ("F", "Fprime"):
        _verify_F(cfg, rep)
    elif name == "pullback":
        _verify_pullback(cfg, rep)
    elif name in ("sublevel-rips", "sublevel-cech"):
        _verify_sublevel(cfg, rep)
    elif name in ("degree-rips", "degree-cech"):
        _verify_degree(cfg, rep)
    else:
        raise UsageError(f"nothing to verify for {name}")
    rep.seconds = time.perf_counter() - t
    return rep


def cmd_verify(cfg: RunConfig) -> int:
    rep = run_verify(cfg)
    _dump(rep.to_json(), cfg.out)
    for r in rep.records:
        if not r.passed:
            lvl = logging.INFO if r.informational else logging.WARNING
            log.log(lvl, "check %s: expected %r, computed %r", r.check, r.expected, r.computed)
    return EXIT_OK if rep.passed else EXIT_FAIL


def bench_rows(cfg: RunConfig) -> list[dict]:
    rows = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        M = module_from_bifiltration(C.filtration_F(n), 0, cfg.p)
        I = C.blowup_U_S(range(n + 1), n)
        t = time.perf_counter()
        res = gpd_direct(M, I)
        dt = time.perf_counter() - t
        supp = ""
        if n <= cfg.support_max:
            supp = support_size(gpd_from_gri(gri(M, threads=cfg.threads)))
        rows.append({"n": n, "nonzero_terms": res.nonzero_terms, "total_terms": res.total_terms,
                     "value": res.value, "seconds": f"{dt:.6f}", "support_size": supp})
        log.info("n=%d terms=%d %.4fs", n, res.nonzero_terms, dt)
    return rows


def cmd_bench(cfg: RunConfig) -> int:
    rows = bench_rows(cfg)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _write(buf.getvalue(), cfg.out)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "gri": cmd_gri, "gpd": cmd_gpd,
            "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None) -> int:
    level = getattr(logging, os.environ.get("GPD_LOG", "WARNING").upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except SchemaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
