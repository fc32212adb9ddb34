"""Reproducible experiment runner.

Every experiment is a pure function of (config, seed): generation uses
numpy's default_rng (PCG64), records are serialized with sorted keys and
shortest-round-trip float encoding (17 significant decimal digits
suffice to re-parse exactly), and the config digest is the SHA-256 of
the canonical config JSON.  Wall time is reported in the run summary
only, never inside the record stream, so identical configs yield
byte-identical record files.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import bounds as bounds_mod
from . import grover as grover_mod
from . import instances as inst_mod
from . import phase as phase_mod
from . import subroutines as subs_mod
from .linalg import DEFAULT_TOL, TolerancePolicy

EXPERIMENT_KINDS = ("grover-weights", "simple-loop", "general-loop",
                    "bounds-compare", "full-suite")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n_list: tuple[int, ...] = (4, 16)
    t_list: tuple[int, ...] = (2, 4)
    z_list: tuple[int, ...] = (2, 4)
    regimes: tuple[str, ...] = inst_mod.REGIMES
    seed: int = 0
    num_seeds: int = 10
    assert_tol: float = DEFAULT_TOL.assert_tol
    output_dir: str | None = None
    formats: tuple[str, ...] = ("json",)

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        for r in self.regimes:
            if r not in inst_mod.REGIMES:
                raise ValueError(f"unknown regime {r!r}")
        if self.num_seeds < 1:
            raise ValueError("need at least one seed")

    def tolerance(self) -> TolerancePolicy:
        return TolerancePolicy(assert_tol=self.assert_tol)

    def canonical_json(self) -> str:
        """Canonical form of the experiment inputs.

        Emission details (output_dir, formats) are excluded: where the
        records land must not change what the records say.
        """
        payload = asdict(self)
        payload.pop("output_dir")
        payload.pop("formats")
        payload = {k: (list(v) if isinstance(v, tuple) else v)
                   for k, v in payload.items()}
        return json.dumps(payload, sort_keys=True)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


@dataclass
class ResultSet:
    config: ExperimentConfig
    records: list[dict] = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.get("passed", False) for r in self.records)

    def add(self, experiment: str, payload: dict, passed: bool):
        self.records.append({
            "experiment": experiment,
            "config_digest": self.config.digest(),
            "passed": bool(passed),
            "payload": payload,
        })


def run_experiment(config: ExperimentConfig) -> ResultSet:
    start = time.monotonic()
    results = ResultSet(config=config)
    dispatch = {
        "grover-weights": _run_grover_weights,
        "simple-loop": _run_simple_loop,
        "general-loop": _run_general_loop,
        "bounds-compare": _run_bounds_compare,
    }
    if config.kind == "full-suite":
        for kind, fn in dispatch.items():
            fn(config, results, prefix=kind)
    else:
        dispatch[config.kind](config, results, prefix=config.kind)
    results.wall_time_s = time.monotonic() - start
    if config.output_dir is not None:
        for fmt in config.formats:
            emit(results, fmt, Path(config.output_dir))
    return results


def _run_grover_weights(config, results, prefix):
    for n in config.n_list:
        oracle = grover_mod.OracleSpec(size=n, marked=frozenset({0}))
        table = grover_mod.query_weights(oracle)
        col_resid = table.column_sum_residual()
        closed = grover_mod.closed_form_weights(n, 0)
        closed_resid = float(np.max(np.abs(table.q - closed)))
        if n >= 4:
            cos_sum, cos_bound = grover_mod.lagrange_cos_sum(n)
        else:
            cos_sum, cos_bound = 0.0, 0.0
        passed = (col_resid <= 1e-12 and closed_resid <= 1e-10
                  and (n < 16 or abs(cos_sum) <= cos_bound + 1e-9))
        results.add(f"{prefix}", {
            "n": n, "num_queries": table.num_queries,
            "column_sum_residual": col_resid,
            "closed_form_residual": closed_resid,
            "lagrange_sum": cos_sum, "lagrange_bound": cos_bound,
            "q_bar": [float(x) for x in table.q_bar],
        }, passed)


def _run_simple_loop(config, results, prefix):
    tol = config.tolerance()
    for n in config.n_list:
        omega = float(n)  # promise of at least one marked element
        for marked in (frozenset(), frozenset({0})):
            oracle = grover_mod.OracleSpec(size=n, marked=marked)
            instance = inst_mod.build_simple_instance(oracle, omega)
            wf = instance.well_formedness_report(tol)
            witness = inst_mod.simple_witnesses(oracle, omega)
            report = inst_mod.verify_witnesses(instance, witness, tol)
            c_minus = 1.0 + 3.0 * omega
            decision = phase_mod.decide(instance, c_minus=c_minus, c_plus=4.0, tol=tol)
            refl_resid = phase_mod.verify_reflection_factorization(instance, tol)
            expect = "positive" if marked else "negative"
            passed = (wf["passed"] and report.passed(tol)
                      and decision.verdict == expect
                      and refl_resid <= tol.assert_tol)
            results.add(prefix, {
                "n": n, "marked": sorted(marked), "omega": omega,
                "witness": report.to_jsonable(),
                "decision": json.loads(decision.to_json()),
                "reflection_residual": refl_resid,
                "well_formed": wf,
            }, passed)


def _general_pair(seed: int, n: int, t_max: int, workspace: int):
    """A marked/unmarked subroutine pair with no step-1 halting mass."""
    fractions = np.zeros(t_max)
    fractions[1:] = 1.0 / (t_max - 1)
    marked_spec = subs_mod.random_subroutine(seed, n, t_max, workspace,
                                             halting_fractions=fractions,
                                             marked=(0,))
    empty_spec = subs_mod.random_subroutine(seed + 10_000, n, t_max, workspace,
                                            halting_fractions=fractions,
                                            marked=())
    return marked_spec, empty_spec


def _run_general_loop(config, results, prefix, decide_dim_cap: int = 600):
    tol = config.tolerance()
    for idx in range(config.num_seeds):
        seed = config.seed + idx
        rng = np.random.default_rng(seed)
        n = int(rng.choice(config.n_list))
        t_max = int(rng.choice([t for t in config.t_list if t >= 2]))
        workspace = int(rng.choice(config.z_list))
        marked_spec, empty_spec = _general_pair(seed, n, t_max, workspace)
        moments = {}
        for label, spec in (("marked", marked_spec), ("empty", empty_spec)):
            profs = [subs_mod.stopping_profile(spec, i) for i in range(n)]
            moments[label] = (np.array([p.moments()[0] for p in profs]),
                              np.array([p.moments()[1] for p in profs]))
        for regime in config.regimes:
            exp_t_m, exp_t2_m = moments["marked"]
            weights_pos = inst_mod.regime_parameters(regime, exp_t_m, exp_t2_m,
                                                     t_max, marked=(0,))
            pos = inst_mod.general_positive_witness(marked_spec, weights_pos)
            norm_sq = float(np.linalg.norm(pos.vector) ** 2)
            c_plus = norm_sq  # unit overlap with the initial state
            cap = 6.0 if regime == "ii-c" else 8.0
            exp_t_e, exp_t2_e = moments["empty"]
            weights_neg = inst_mod.regime_parameters(
                regime, exp_t_e, exp_t2_e, t_max,
                mu=weights_pos.mu, k=weights_pos.k)
            neg = inst_mod.general_negative_witness(empty_spec, weights_neg)
            neg_norm = float(np.linalg.norm(neg.w_a) ** 2)
            payload = {
                "seed": seed, "n": n, "t_max": t_max, "workspace": workspace,
                "regime": regime,
                "pos_norm_sq": norm_sq, "pos_norm_closed": pos.closed_norm_sq,
                "neg_norm_sq": neg_norm, "neg_norm_closed": neg.closed_norm_sq,
                "c_plus_effective": c_plus, "c_plus_cap": cap,
            }
            passed = (abs(norm_sq - pos.closed_norm_sq) <= 1e-8
                      and abs(neg_norm - neg.closed_norm_sq) <= 1e-8
                      and c_plus <= cap + 1e-9)
            dim = inst_mod.GeneralBasis.for_spec(marked_spec).dim
            if dim <= decide_dim_cap:
                c_minus = max(neg.closed_norm_sq, c_plus * 1.0, 1.0)
                verdicts = {}
                for label, spec, witness_cap in (("marked", marked_spec, c_plus),
                                                 ("empty", empty_spec, c_plus)):
                    weights = weights_pos if label == "marked" else weights_neg
                    instance = inst_mod.build_general_instance(spec, weights)
                    decision = phase_mod.decide(instance, c_minus=c_minus,
                                                c_plus=min(witness_cap, 50.0), tol=tol)
                    verdicts[label] = decision.verdict
                payload["verdicts"] = verdicts
                passed = passed and verdicts == {"marked": "positive",
                                                 "empty": "negative"}
            results.add(prefix, payload, passed)


def _run_bounds_compare(config, results, prefix):
    for idx in range(config.num_seeds):
        seed = config.seed + idx
        rng = np.random.default_rng(seed)
        n = int(rng.choice(config.n_list))
        times = rng.integers(1, 9, size=n).astype(float)
        profile = grover_mod.CostProfile.deterministic(times)
        promise = bounds_mod.PromiseDescriptor(unique_marked=True,
                                               t_max=float(np.max(times)))
        try:
            comparison = bounds_mod.compare_table(profile, promise)
            ok = comparison.ordering_holds
            payload = {
                "seed": seed, "n": n, "times": [float(x) for x in times],
                "l2": comparison.l2, "l1": comparison.l1, "l0": comparison.l0,
                "straight_line": comparison.straight_line,
                "naive": comparison.naive,
            }
        except AssertionError as exc:
            ok, payload = False, {"seed": seed, "error": str(exc)}
        results.add(prefix, payload, ok)


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def emit(results: ResultSet, fmt: str, outdir: Path) -> list[Path]:
    """Write records to disk; JSON lines plus per-experiment CSV tables."""
    if not results.records:
        raise ValueError("refusing to emit an empty result set")
    if fmt not in ("json", "csv"):
        raise ValueError(f"unknown output format {fmt!r}")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    echo = outdir / "config.echo"
    echo.write_text(results.config.canonical_json() + "\n")
    written.append(echo)

    if fmt == "json":
        path = outdir / "records.jsonl"
        with path.open("w") as fh:
            for record in results.records:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        written.append(path)
        summary = outdir / "summary.json"
        summary.write_text(json.dumps({
            "passed": results.passed,
            "record_count": len(results.records),
            "wall_time_s": results.wall_time_s,
            "config_digest": results.config.digest(),
        }, sort_keys=True) + "\n")
        written.append(summary)
    else:
        tables = outdir / "tables"
        tables.mkdir(exist_ok=True)
        by_kind: dict[str, list[dict]] = {}
        for record in results.records:
            by_kind.setdefault(record["experiment"], []).append(record)
        for kind, records in by_kind.items():
            path = tables / f"{kind}.csv"
            keys = sorted({k for r in records for k in r["payload"]
                           if isinstance(r["payload"][k], (int, float, str))})
            lines = [",".join(["passed"] + keys)]
            for r in records:
                row = [str(r["passed"])]
                for k in keys:
                    v = r["payload"].get(k, "")
                    row.append(repr(v) if isinstance(v, float) else str(v))
                lines.append(",".join(row))
            path.write_text("\n".join(lines) + "\n")
            written.append(path)
    return written
