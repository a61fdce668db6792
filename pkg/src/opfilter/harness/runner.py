"""Suite execution, reports and failing-instance dumps."""
from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import DomainViolation, NumericalFailure
from ..hermitian import substream
from .config import SuiteConfig
from .suites import Instance, get_suite

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialRecord:
    i: int
    seed: int
    slack: Optional[float]
    tol: Optional[float]
    passed: bool
    error: Optional[str] = None

    def to_json(self) -> dict:
        d = {"i": self.i, "seed": self.seed, "slack": self.slack, "tol": self.tol,
             "pass": self.passed}
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class SuiteReport:
    config: SuiteConfig
    trials: list
    wall_time: float = 0.0
    dumps: list = field(default_factory=list)

    @property
    def worst_slack(self) -> Optional[float]:
        slacks = [t.slack for t in self.trials if t.slack is not None]
        return min(slacks) if slacks else None

    @property
    def failures(self) -> int:
        return sum(1 for t in self.trials if t.slack is not None and not t.passed)

    @property
    def errors(self) -> int:
        return sum(1 for t in self.trials if t.error is not None)

    @property
    def exit_code(self) -> int:
        if self.errors:
            return 3
        return 1 if self.failures else 0

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "trials": [t.to_json() for t in self.trials],
            "worst_slack": self.worst_slack,
            "failures": self.failures,
            "errors": self.errors,
            "wall_time": self.wall_time,
            "dumps": list(self.dumps),
        }

    def dumps_json(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


def sample_trial(cfg: SuiteConfig, i: int) -> tuple[int, Instance]:
    seed, rng = substream(cfg.seed, i)
    return seed, get_suite(cfg.suite).sample(cfg, rng)


def run_trial(cfg: SuiteConfig, i: int) -> tuple[TrialRecord, Optional[dict]]:
    """Run trial ``i``; the instance JSON is returned when the trial does not pass."""
    suite = get_suite(cfg.suite)
    seed, rng = substream(cfg.seed, i)
    inst = None
    try:
        inst = suite.sample(cfg, rng)
        verdict = suite.check(inst)
    except (NumericalFailure, DomainViolation) as exc:
        rec = TrialRecord(i, seed, None, None, False, f"{type(exc).__name__}: {exc}")
        return rec, None if inst is None else inst.to_json()
    rec = TrialRecord(i, seed, verdict.min_slack, verdict.tol, verdict.holds)
    return rec, None if rec.passed else inst.to_json()


def _run_chunk(cfg: SuiteConfig, indices: list) -> list:
    return [(i, *run_trial(cfg, i)) for i in indices]


def run_suite(cfg: SuiteConfig, dump_dir: Optional[Path] = None) -> SuiteReport:
    """Run every trial of ``cfg`` and assemble the report in index order.

    Trials are keyed by ``(cfg.seed, index)`` so the report does not depend
    on ``cfg.workers``. Failing instances are written to ``dump_dir``.
    """
    suite = get_suite(cfg.suite)
    suite.validate(cfg)
    start = time.perf_counter()
    indices = list(range(cfg.trials))
    if cfg.workers > 1:
        chunks = [indices[k::cfg.workers] for k in range(cfg.workers)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = [r for part in pool.map(_run_chunk, [cfg] * len(chunks), chunks) for r in part]
    else:
        results = _run_chunk(cfg, indices)
    results.sort(key=lambda r: r[0])
    report = SuiteReport(cfg, [rec for _, rec, _ in results])
    report.wall_time = time.perf_counter() - start
    if dump_dir is not None:
        for i, rec, inst in results:
            if inst is None:
                continue
            path = write_dump(Path(dump_dir), cfg, rec, inst)
            report.dumps.append(str(path))
    log.info("%s: %d trials, %d failures, worst slack %s", cfg.suite, cfg.trials,
             report.failures, report.worst_slack)
    return report


def write_dump(dump_dir: Path, cfg: SuiteConfig, rec: TrialRecord, inst: dict) -> Path:
    dump_dir.mkdir(parents=True, exist_ok=True)
    path = dump_dir / f"{cfg.suite}_seed{cfg.seed}_trial{rec.i}.json"
    payload = {"config": cfg.to_json(), "record": rec.to_json(), "instance": inst}
    path.write_text(json.dumps(payload, indent=1, sort_keys=True))
    return path


def dump_instance(cfg: SuiteConfig, i: int, dump_dir: Path) -> Path:
    """Write trial ``i`` to ``dump_dir`` whether or not it fails."""
    seed, inst = sample_trial(cfg, i)
    verdict = get_suite(cfg.suite).check(inst)
    rec = TrialRecord(i, seed, verdict.min_slack, verdict.tol, verdict.holds)
    return write_dump(Path(dump_dir), cfg, rec, inst.to_json())


def replay(path) -> tuple[dict, TrialRecord]:
    """Re-run the check stored in a dump file; returns the recorded and replayed records."""
    payload = json.loads(Path(path).read_text())
    inst = Instance.from_json(payload["instance"])
    recorded = payload["record"]
    verdict = get_suite(inst.suite).check(inst)
    rec = TrialRecord(recorded["i"], recorded["seed"], verdict.min_slack, verdict.tol,
                      verdict.holds)
    return recorded, rec
