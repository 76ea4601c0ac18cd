"""Command-line front end: Hilbert tables, point counts and verification suites."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

from . import bvariety, dualizing, invariants, modular, rvring
from .gfq import prime_power
from .linalg import (
    CAYLEY_TABLE_LIMIT,
    flag_count,
    flags,
    gaussian_binomial,
    group_order,
    subspaces,
    vspace,
)

OUTPUT_DIR_ENV = "QVCOMPACT_OUTPUT_DIR"

SUITES = (
    "relations",
    "freeness",
    "invariants",
    "dickson",
    "dualizing",
    "strange-maps",
    "strata",
    "charts",
    "singular-locus",
    "cohomology-identity",
    "boundary-orders",
)


class Infeasible(Exception):
    pass


@dataclass
class RunConfig:
    q: int
    r: int
    m: int = 1
    n_lo: int = 0
    n_hi: int = 3
    fmt: str = "json"
    verify: bool = False
    seed: int = 0
    samples: int = 500
    cap_vectors: int = 4096
    cap_group: int = 25000
    cap_dim: int = 2000
    cap_flags: int = 20000
    cap_points: int = 5000
    cap_bruteforce: int = 1 << 20

    @property
    def n_range(self) -> range:
        return range(self.n_lo, self.n_hi + 1)

    @property
    def n_reps(self) -> int:
        return (self.q**self.r - 1) // (self.q - 1)

    def params(self, n=None) -> dict:
        return {"q": self.q, "r": self.r, "m": self.m, "n": n}

    def require_vectors(self):
        n = self.q**self.r - 1
        if n > self.cap_vectors:
            raise Infeasible(f"{n} nonzero vectors exceed --cap-vectors {self.cap_vectors}")

    def require_flags(self):
        n = flag_count(self.r, self.q)
        if n > self.cap_flags:
            raise Infeasible(f"{n} flags exceed --cap-flags {self.cap_flags}")

    def require_points(self, what: str, n: int):
        if n > self.cap_points:
            raise Infeasible(f"{n} {what} exceed --cap-points {self.cap_points}")

    def require_enumeration(self, what: str, n: int):
        if n > self.cap_bruteforce:
            raise Infeasible(f"{n} {what} exceed --cap-bruteforce {self.cap_bruteforce}")

    def require_dim(self, n: int):
        h = rvring.hilbert_h(self.r, self.q, n)
        if h > self.cap_dim:
            raise Infeasible(f"dimension {h} in degree -{n} exceeds --cap-dim {self.cap_dim}")

    def require_group(self, kind: str):
        size = group_order(kind, self.r, self.q)
        if size > self.cap_group:
            raise Infeasible(f"|{kind}| = {size} exceeds --cap-group {self.cap_group}")

    def bruteforce_ok(self, size: int) -> bool:
        return size <= self.cap_bruteforce


@dataclass
class Row:
    params: dict
    value: object
    method: str
    verified: bool | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"params": self.params, "value": self.value, "method": self.method, "verified": self.verified}
        out.update(self.extra)
        return out


# -- tables ----------------------------------------------------------------------------

def cmd_hilbert(cfg: RunConfig) -> list[Row]:
    rows = []
    space = None
    for n in cfg.n_range:
        h = rvring.hilbert_h(cfg.r, cfg.q, n)
        row = Row(cfg.params(n), h, "formula")
        if cfg.verify:
            try:
                cfg.require_vectors()
                cfg.require_dim(n)
                space = space or vspace(cfg.r, cfg.q)
                row.verified = rvring.graded_rank(space, n) == h
                row.method = "formula+rank"
            except Infeasible as exc:
                row.extra["note"] = str(exc)
        rows.append(row)
    return rows


def _omega_row(cfg: RunConfig) -> list[Row]:
    value = modular.omega_count(cfg.q, cfg.r, cfg.m)
    row = Row(cfg.params(), value, "formula")
    if cfg.verify:
        cfg.require_vectors()
        size = cfg.q ** (cfg.m * cfg.r)
        if cfg.bruteforce_ok(size):
            amb = modular.Ambient.make(cfg.r, cfg.q, cfg.m)
            found = sum(1 for _ in modular.injective_maps(amb, modular.full_space(amb.space)))
            row.verified = found == value
            row.method = "formula+bruteforce"
        else:
            row.extra["note"] = "brute force exceeds cap"
    return [row]


def cmd_count_points(cfg: RunConfig, variety: str) -> list[Row]:
    q, r, m = cfg.q, cfg.r, cfg.m
    if variety == "Omega":
        return _omega_row(cfg)
    rows = []
    oracle = "bruteforce"
    if variety == "Q":
        for s in range(1, r + 1):
            rows.append(Row(cfg.params(), gaussian_binomial(r, s, q) * modular.omega_count(q, s, m), "formula",
                            extra={"stratum_dim": s}))
        total = modular.qv_count_formula(q, r, m)
        brute = None
        if cfg.verify:
            cfg.require_vectors()
            amb = modular.Ambient.make(r, q, m)
            if cfg.bruteforce_ok(amb.K.q**cfg.n_reps):
                brute = len(modular.qv_points_bruteforce(amb, cfg.cap_bruteforce))
            else:
                brute = len(modular.qv_points(amb))
                oracle = "classification"
    elif variety == "P":
        for s in range(1, r + 1):
            rows.append(Row(cfg.params(), gaussian_binomial(r, r - s, q) * modular.omega_count(q, s, m), "formula",
                            extra={"quotient_dim": s}))
        total = modular.pv_count(q, r, m)
        brute = None
        if cfg.verify:
            cfg.require_vectors()
            brute = len(modular.pv_points(modular.Ambient.make(r, q, m))) if cfg.bruteforce_ok(q ** (m * r)) else None
    elif variety == "B":
        cfg.require_flags()
        for F in flags(r, q):
            dims = [b.dim - a.dim for a, b in zip(F.members, F.members[1:])]
            count = 1
            for d in dims:
                count *= modular.omega_count(q, d, m)
            rows.append(Row(cfg.params(), count, "formula", extra={"flag_dims": [W.dim for W in F]}))
        total = bvariety.bv_count_strata(q, r, m)
        brute = None
        if cfg.verify:
            cfg.require_vectors()
            amb = modular.Ambient.make(r, q, m)
            if r <= 3 and amb.K.q <= 4:
                brute = len(bvariety.bv_points_bruteforce(amb))
            else:
                brute = len(bvariety.bv_points(amb))
                oracle = "enumeration"
    else:
        raise ValueError(f"unknown variety {variety!r}")
    if rows and sum(row.value for row in rows) != total:
        raise ArithmeticError("strata counts do not add up to the total")
    total_row = Row(cfg.params(), total, "formula", extra={"total": True})
    if brute is not None:
        total_row.verified = brute == total
        total_row.method = f"formula+{oracle}"
    return rows + [total_row]


# -- verification suites --------------------------------------------------------------------

@dataclass
class Check:
    name: str
    params: dict
    observed: object
    expected: object

    @property
    def passed(self) -> bool:
        return self.observed == self.expected

    def as_row(self) -> Row:
        return Row(self.params, self.observed, "check", self.passed, {"check": self.name, "expected": self.expected})


def _space(cfg: RunConfig):
    cfg.require_vectors()
    return vspace(cfg.r, cfg.q)


def suite_relations(cfg):
    space = _space(cfg)
    cfg.require_dim(2)
    res = rvring.relation_residues(space)
    bad = [x for x in res if not x.value.is_zero()]
    yield Check("relation residues vanish", cfg.params(), len(bad), 0)


def suite_freeness(cfg):
    space = _space(cfg)
    for n in cfg.n_range:
        cfg.require_dim(n)
    for n in cfg.n_range:
        row = rvring.freeness_check(space, n)[-1]
        yield Check("family size = rank = h(n)", cfg.params(n), [row.family_size, row.rank], [row.expected] * 2)
    yield Check("basis size", cfg.params(), len(rvring.delta_products(space)), cfg.q ** (cfg.r * (cfg.r - 1) // 2))


def suite_invariants(cfg):
    space = _space(cfg)
    cfg.require_group("GL")
    size = group_order("GL", cfg.r, cfg.q)
    if size > CAYLEY_TABLE_LIMIT:
        raise Infeasible(f"p-subgroup search needs a Cayley table; |GL| = {size} exceeds {CAYLEY_TABLE_LIMIT}")
    for k, H in enumerate(invariants.unipotent_subgroups(cfg.r, cfg.q)):
        for n in cfg.n_range:
            cfg.require_dim(n)
            yield Check(
                f"unipotent subgroup {k} (order {len(H)})",
                cfg.params(n),
                invariants.invariant_dim_bruteforce(space, H, n),
                invariants.unipotent_dim_formula(space, H, n),
            )


def suite_dickson(cfg):
    space = _space(cfg)
    cfg.require_dim(max(cfg.q**cfg.r - 1, cfg.n_hi))
    fixed = invariants.dickson_fixedness(space)
    yield Check("Dickson invariants fixed", cfg.params(), fixed, {"k": True, "g": True, "k_prime": True})
    hc = invariants.check_h_identity(space)
    yield Check("h(T) coefficients", cfg.params(), [hc.coefficients_match, hc.roots_ok], [True, True])
    yield Check("h_i lie in R_V", cfg.params(), all(c is not None for c in hc.members), True)
    for which in ("U", "G", "G'"):
        for row in invariants.invariant_hilbert_check(space, which, cfg.n_hi):
            if row.n >= cfg.n_lo:
                yield Check(f"{which}-invariant dimension", cfg.params(row.n), row.bruteforce, row.generators)


def suite_dualizing(cfg):
    space = _space(cfg)
    for n in [2 * cfg.r, *cfg.n_range]:
        cfg.require_dim(n)
    yield Check("pairing table is identity", cfg.params(), dualizing.pairing_is_identity(space), True)
    yield Check("M_r orthogonality", cfg.params(), dualizing.mr_orthogonality(space), True)
    for n in cfg.n_range:
        cfg.require_dim(n)
        row = dualizing.iv_dimension(space, n)
        yield Check("ideal dimension", cfg.params(n), [row.from_generators, row.hat_rank], [row.predicted] * 2)
    n = space.r + 1
    outside = [g.vectors for g in dualizing.iv_generators(space) if dualizing.iv_membership(g.frac(space), n) is None]
    yield Check("generators in hatted span", cfg.params(n), outside, [])


def suite_strange_maps(cfg):
    cfg.require_vectors()
    cfg.require_flags()
    cfg.require_points("points of Q_V", modular.qv_count_formula(cfg.q, cfg.r, cfg.m))
    amb = modular.Ambient.make(cfg.r, cfg.q, cfg.m)
    if cfg.bruteforce_ok(amb.K.q**cfg.n_reps):
        rep = modular.strange_maps_exhaustive(cfg.r, cfg.q, cfg.m)
        method = "exhaustive"
    else:
        rep = modular.strange_maps_sampled(cfg.r, cfg.q, cfg.m, cfg.samples, cfg.seed)
        method = f"sampled({cfg.samples}, seed {cfg.seed})"
    yield Check(f"composites are Frobenius [{method}]", cfg.params(), [repr(f) for f in rep.failures[:1]], [])
    yield Check("bijection on points", cfg.params(), modular.strange_bijection(amb), True)
    for W in subspaces(cfg.r, cfg.q):
        if 0 < W.dim < cfg.r:
            exhaustive = amb.K.q ** ((cfg.q**W.dim - 1) // (cfg.q - 1)) <= 4096
            rep = modular.gf_compat_check(amb, W, None if exhaustive else 20, cfg.seed)
            yield Check(f"compatibility squares for {W.basis}", cfg.params(), len(rep.failures), 0)


def suite_strata(cfg):
    cfg.require_vectors()
    cfg.require_flags()
    q, r, m = cfg.q, cfg.r, cfg.m
    cfg.require_points("points of B_V", bvariety.bv_count_strata(q, r, m))
    amb = modular.Ambient.make(r, q, m)
    pts = modular.qv_points(amb)
    yield Check("Q points = formula", cfg.params(), len(pts), modular.qv_count_formula(q, r, m))
    yield Check("Q strata disjoint", cfg.params(), len(set(pts)), len(pts))
    per = {}
    for p in pts:
        per.setdefault(modular.stratum_of(p), 0)
        per[modular.stratum_of(p)] += 1
    yield Check("Q strata sizes", cfg.params(), sorted((W.dim, c) for W, c in per.items()),
                sorted((W.dim, modular.omega_count(q, W.dim, m)) for W in subspaces(r, q) if W.dim and modular.omega_count(q, W.dim, m)))
    if cfg.bruteforce_ok(amb.K.q**cfg.n_reps):
        brute = set(modular.qv_points_bruteforce(amb, cfg.cap_bruteforce))
        yield Check("Q points = brute force", cfg.params(), [len(brute), brute == set(pts)], [len(pts), True])
    yield Check("P points", cfg.params(), [len(modular.pv_points(amb)), modular.pv_count_strata(q, r, m)],
                [modular.pv_count(q, r, m)] * 2)
    bpts = bvariety.bv_points(amb)
    yield Check("B points = strata formula", cfg.params(), len(bpts), bvariety.bv_count_strata(q, r, m))
    if r <= 3 and amb.K.q <= 4:
        brute = set(bvariety.bv_points_bruteforce(amb))
        yield Check("B points = brute force", cfg.params(), [len(brute), brute == set(bpts)], [len(bpts), True])
    if r == 3:
        yield Check("B points = blowup count", cfg.params(), len(bpts), bvariety.blowup_count(q, m))
    all_flags = flags(r, q)
    mismatched = []
    for p in bpts:
        F = bvariety.stratum_flag(p)
        hits = [G for G in all_flags if bvariety.in_stratum(p, G)]
        if hits != [F]:
            mismatched.append(p)
    yield Check("stratum flag = predicates", cfg.params(), len(mismatched), 0)
    bad_pi, bad_charts, uncovered = 0, 0, 0
    for p in bpts:
        F = bvariety.stratum_flag(p)
        rho = bvariety.pi_Q(p)
        bad_pi += modular.stratum_of(rho) != F.members[1]
        cover = bvariety.covering_flags(p)
        uncovered += not cover
        bad_charts += any(bvariety.pi_Q_via(p, G) != rho for G in cover)
    yield Check("pi_Q stratum compatibility", cfg.params(), bad_pi, 0)
    yield Check("pi_Q chart independence", cfg.params(), bad_charts, 0)
    yield Check("charts cover", cfg.params(), uncovered, 0)


def suite_charts(cfg):
    cfg.require_vectors()
    cfg.require_flags()
    complete = flags(cfg.r, cfg.q, complete_only=True)
    cfg.require_enumeration("chart tuples", len(complete) * (cfg.q**cfg.m) ** (cfg.r - 1))
    amb = modular.Ambient.make(cfg.r, cfg.q, cfg.m)
    for F in complete:
        rep = bvariety.chart_roundtrip(amb, F)
        yield Check(f"chart roundtrip {[W.basis[-1] for W in F.members[1:]]}", cfg.params(),
                    {"tuples": rep.tuples, "failures": rep.failures[:1]},
                    {"tuples": amb.K.q ** (cfg.r - 1), "failures": []})


def suite_singular_locus(cfg):
    cfg.require_vectors()
    cfg.require_flags()
    amb = modular.Ambient.make(cfg.r, cfg.q, cfg.m)
    r = cfg.r
    for W in sorted(subspaces(r, cfg.q)):
        if not W.dim:
            continue
        pts = modular.stratum_points(amb, W, limit=3)
        if not pts:
            continue
        dims = sorted({modular.tangent_dim(p) for p in pts})
        codim = r - W.dim
        if codim <= 1:
            yield Check(f"tangent dim, stratum {W.basis}", cfg.params(), dims, [r - 1])
        else:
            yield Check(f"tangent dim > r-1, stratum {W.basis} (observed {dims})", cfg.params(),
                        all(d > r - 1 for d in dims), True)


def suite_cohomology_identity(cfg):
    for n in cfg.n_range:
        lhs, rhs = rvring.cohomology_identity(cfg.r, cfg.q, n)
        yield Check("sum a_rs C(r-1+n-s, r-1) = h(n)", cfg.params(n), lhs, rhs)


def suite_boundary_orders(cfg):
    space = _space(cfg)
    r = cfg.r
    cfg.require_enumeration("candidate generators", comb(cfg.n_reps + r, r + 1))
    ref = space.unit(0)
    pattern_bad = []
    for j in range(1, r):
        Vj = space.coordinate_subspace(j)
        for v in space.nonzero:
            expected = 0 if v in Vj else 1
            if bvariety.boundary_order(v, ref, j, r, cfg.q) != expected:
                pattern_bad.append((v, j))
    yield Check("orders follow membership", cfg.params(), pattern_bad, [])
    if r >= 2:
        orders = bvariety.generator_orders(space, r - 1)
        yield Check("minimum generator order along a_(r-1) = 0", cfg.params(), min(orders), 2)


SUITE_FUNCS = {
    "relations": suite_relations,
    "freeness": suite_freeness,
    "invariants": suite_invariants,
    "dickson": suite_dickson,
    "dualizing": suite_dualizing,
    "strange-maps": suite_strange_maps,
    "strata": suite_strata,
    "charts": suite_charts,
    "singular-locus": suite_singular_locus,
    "cohomology-identity": suite_cohomology_identity,
    "boundary-orders": suite_boundary_orders,
}


def cmd_verify(cfg: RunConfig, suite: str) -> tuple[list[Row], Check | None]:
    if suite not in SUITE_FUNCS:
        raise ValueError(f"unknown suite {suite!r}")
    rows, first_fail = [], None
    for check in SUITE_FUNCS[suite](cfg):
        rows.append(check.as_row())
        if not check.passed and first_fail is None:
            first_fail = check
    return rows, first_fail


# -- output ----------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(repr(v) for v in x)
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    if isinstance(x, list):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return repr(x)


def render(rows: list[Row], fmt: str) -> str:
    dicts = [_jsonable(r.as_dict()) for r in rows]
    if fmt == "json":
        return json.dumps(dicts, indent=2, sort_keys=True) + "\n"
    cols = ["q", "r", "m", "n", "value", "method", "verified"]
    extras = sorted({k for d in dicts for k in d if k not in ("params", "value", "method", "verified")})
    table = [
        [d["params"][c] for c in ("q", "r", "m", "n")]
        + [d["value"], d["method"], d["verified"]]
        + [d.get(k) for k in extras]
        for d in dicts
    ]
    header = cols + extras
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in table:
            w.writerow([json.dumps(x) if isinstance(x, (list, dict)) else x for x in row])
        return buf.getvalue()
    cells = [[str(x) for x in header]] + [[str(x) for x in row] for row in table]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells) + "\n"


def _output_path(args, stem: str) -> Path | None:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if args.out:
        p = Path(args.out)
        return p if p.is_absolute() or not base else Path(base) / p
    if base:
        return Path(base) / f"{stem}.{args.format}"
    return None


# -- argument parsing --------------------------------------------------------------------

def _prime_power_arg(text: str) -> int:
    q = int(text)
    try:
        prime_power(q)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return q


def _n_range_arg(text: str) -> tuple[int, int]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo, hi = int(lo), int(hi)
    else:
        lo = hi = int(text)
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError("n range must be LO:HI with 0 <= LO <= HI")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=_prime_power_arg, required=True, help="field size (prime power)")
    common.add_argument("--r", type=int, required=True, help="dimension of V")
    common.add_argument("--m", type=int, default=1, help="extension degree of k over F_q")
    common.add_argument("--n", type=_n_range_arg, default=None, help="degree or range LO:HI")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--verify", action="store_true", help="cross-check formulas against oracles")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=500, help="samples for sampled checks")
    common.add_argument("--out", default=None, help=f"output file (relative to ${OUTPUT_DIR_ENV} if set)")
    common.add_argument("--cap-vectors", type=int, default=4096)
    common.add_argument("--cap-group", type=int, default=25000)
    common.add_argument("--cap-dim", type=int, default=2000)
    common.add_argument("--cap-flags", type=int, default=20000)
    common.add_argument("--cap-points", type=int, default=5000)
    common.add_argument("--cap-bruteforce", type=int, default=1 << 20)

    parser = argparse.ArgumentParser(prog="qvcompact", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("hilbert", parents=[common], help="Hilbert function table")
    cp = sub.add_parser("count-points", parents=[common], help="point counts over F_{q^m}")
    cp.add_argument("variety", choices=("P", "Q", "B", "Omega"))
    vp = sub.add_parser("verify", parents=[common], help="run a verification suite")
    vp.add_argument("suite", choices=SUITES)
    return parser


def config_from_args(args) -> RunConfig:
    if args.r < 1 or args.m < 1:
        raise ValueError("need r >= 1 and m >= 1")
    lo, hi = args.n if args.n is not None else (0, 3)
    return RunConfig(
        q=args.q, r=args.r, m=args.m, n_lo=lo, n_hi=hi, fmt=args.format, verify=args.verify,
        seed=args.seed, samples=args.samples, cap_vectors=args.cap_vectors, cap_group=args.cap_group,
        cap_dim=args.cap_dim, cap_flags=args.cap_flags, cap_points=args.cap_points, cap_bruteforce=args.cap_bruteforce,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    random.seed(cfg.seed)
    failure = None
    try:
        if args.command == "hilbert":
            rows = cmd_hilbert(cfg)
            stem = f"hilbert-q{cfg.q}-r{cfg.r}"
        elif args.command == "count-points":
            rows = cmd_count_points(cfg, args.variety)
            stem = f"count-{args.variety}-q{cfg.q}-r{cfg.r}-m{cfg.m}"
        else:
            rows, failure = cmd_verify(cfg, args.suite)
            stem = f"verify-{args.suite}-q{cfg.q}-r{cfg.r}-m{cfg.m}"
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    text = render(rows, cfg.fmt)
    path = _output_path(args, stem)
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        print(path)
    if failure is not None:
        print(
            f"FAIL {failure.name} at {failure.params}: observed {_jsonable(failure.observed)!r}, "
            f"expected {_jsonable(failure.expected)!r}",
            file=sys.stderr,
        )
    failed = any(r.verified is False for r in rows)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
