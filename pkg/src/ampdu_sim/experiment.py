"""Experiment grids, cross-product sweeps and CSV/JSON emission."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal
from itertools import product
from pathlib import Path
from typing import Any, Iterable, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .channel import ErrorModel, ber_from_per
from .engine import SimConfig
from .frame import PAPER_RATES_MBPS, FrameGeometry, Mode, PhyProfile, mpdu_element_bytes
from .strategy import BASE, PRESETS, parse_strategy
from .sweep import best_over_strategies, improvement_pct, k_curve

log = logging.getLogger(__name__)

SEED_ENV = "AMPDU_SIM_SEED"
DEFAULT_SEED = 1
MAX_WARMUP = 1_000

RUN_COLUMNS = ("mode", "msdu_bytes", "msdus_per_mpdu", "rate_mbps", "per", "strategy",
               "best_k", "attempts", "seed", "throughput_mbps", "ci95_mbps",
               "improvement_over_base_pct", "infeasible")
BEST_COLUMNS = ("mode", "msdu_bytes", "msdus_per_mpdu", "rate_mbps", "per", "ber",
                "best_strategy", "best_k", "attempts", "seed", "throughput_mbps", "ci95_mbps",
                "base_throughput_mbps", "improvement_over_base_pct", "infeasible")
SWEEP_K_COLUMNS = ("mode", "msdu_bytes", "msdus_per_mpdu", "rate_mbps", "per", "strategy",
                   "k", "attempts", "seed", "throughput_mbps", "ci95_mbps", "infeasible")

PAPER_PERS = tuple(round(0.05 * i, 2) for i in range(1, 11))


class SpecError(ValueError):
    pass


class ExperimentSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    msdu_bytes: list[int] = Field(default=[128, 512, 1024, 1500], min_length=1)
    msdus_per_mpdu: list[int] = Field(default=[1], min_length=1)
    mode: Mode = Mode.AMPDU
    rates_mbps: list[float] = Field(default=list(PAPER_RATES_MBPS), min_length=1)
    pers: list[float] = Field(default=list(PAPER_PERS), min_length=1)
    strategies: list[str] = Field(default=[s.name for s in PRESETS], min_length=1)
    window_w: int = Field(default=64, ge=1, le=64)
    attempts: int = Field(default=200_000, gt=20)
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    out: Optional[str] = None
    format: Literal["csv", "json"] = "csv"

    @field_validator("msdu_bytes")
    @classmethod
    def _msdu_range(cls, v):
        for x in v:
            if not 1 <= x <= 2304:
                raise ValueError(f"{x} outside 1..2304 bytes")
        return v

    @field_validator("msdus_per_mpdu")
    @classmethod
    def _m_range(cls, v):
        for x in v:
            if not 1 <= x <= 7:
                raise ValueError(f"{x} outside 1..7")
        return v

    @field_validator("rates_mbps")
    @classmethod
    def _rate_range(cls, v):
        for x in v:
            if not x > 0:
                raise ValueError(f"rate {x} must be > 0")
        return v

    @field_validator("pers")
    @classmethod
    def _per_range(cls, v):
        for x in v:
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"probability {x} outside [0, 1]")
        return v

    @field_validator("strategies")
    @classmethod
    def _known_strategies(cls, v):
        names = []
        for name in v:
            s = parse_strategy(name).name
            if s not in names:
                names.append(s)
        return names

    @property
    def warmup(self) -> int:
        return min(MAX_WARMUP, self.attempts // 10)

    def resolved_seed(self) -> int:
        if self.seed is not None:
            return self.seed
        env = os.environ.get(SEED_ENV)
        if env:
            try:
                return int(env, 0)
            except ValueError:
                raise SpecError(f"{SEED_ENV}={env!r} is not an integer seed") from None
        return DEFAULT_SEED


def paper_grid() -> ExperimentSpec:
    return ExperimentSpec()


def _describe(err: ValidationError) -> str:
    parts = []
    for e in err.errors():
        key = ".".join(str(p) for p in e["loc"]) or "<document>"
        parts.append(f"{key}: {e['msg']}")
    return "; ".join(parts)


def load_spec(path: Optional[str | Path] = None, paper: bool = False,
              overrides: Optional[dict[str, Any]] = None) -> ExperimentSpec:
    """Build a spec from a JSON file or the paper grid, then apply flag overrides."""
    if path is None and not paper:
        raise SpecError("need a spec file or the paper grid")
    doc: dict[str, Any] = {}
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as e:
            raise SpecError(f"cannot read spec {path}: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise SpecError(f"malformed spec {path}: {e}") from None
        if not isinstance(doc, dict):
            raise SpecError(f"spec {path} must be a JSON object")
    doc.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        spec = ExperimentSpec(**doc)
    except ValidationError as e:
        raise SpecError(_describe(e)) from None
    except ValueError as e:
        raise SpecError(str(e)) from None
    for m in spec.msdus_per_mpdu:
        for msdu in spec.msdu_bytes:
            try:
                FrameGeometry(msdu, m, spec.mode)
            except ValueError as e:
                raise SpecError(f"msdus_per_mpdu/msdu_bytes: {e}") from None
    return spec


def points(spec: ExperimentSpec) -> list[tuple[int, int, float, float]]:
    """(msdu_bytes, msdus_per_mpdu, rate, per) in lexicographic order."""
    return list(product(sorted(set(spec.msdu_bytes)), sorted(set(spec.msdus_per_mpdu)),
                        sorted(set(spec.rates_mbps)), sorted(set(spec.pers))))


def point_config(spec: ExperimentSpec, point, seed: int) -> SimConfig:
    msdu, m, rate, per = point
    return SimConfig(geom=FrameGeometry(msdu, m, spec.mode), phy=PhyProfile(rate),
                     model=ErrorModel(per), window_w=spec.window_w, k=spec.window_w,
                     attempts=spec.attempts, warmup_attempts=spec.warmup, seed=seed)


def _axes(spec: ExperimentSpec, point) -> dict[str, Any]:
    msdu, m, rate, per = point
    return {"mode": spec.mode.value, "msdu_bytes": msdu, "msdus_per_mpdu": m,
            "rate_mbps": rate, "per": per}


def _strategy_list(spec: ExperimentSpec):
    strats = [parse_strategy(n) for n in spec.strategies]
    return strats if BASE in strats else [BASE] + strats


def _eval_point(args) -> list[dict[str, Any]]:
    kind, spec, point, seed = args
    config = point_config(spec, point, seed)
    axes = _axes(spec, point)
    common = {"attempts": spec.attempts, "seed": seed}
    rows = []
    if kind == "sweep-k":
        for name in spec.strategies:
            curve = k_curve(config.with_(strategy=parse_strategy(name)))
            for k, res in curve.items():
                rows.append({**axes, "strategy": name, "k": k, **common,
                             "throughput_mbps": res.throughput_mbps,
                             "ci95_mbps": res.ci95_mbps, "infeasible": res.infeasible})
        log.info("point %s done", point)
        return rows
    outcome = best_over_strategies(config, _strategy_list(spec))
    if kind == "run":
        by_name = {o.strategy.name: o for o in outcome.outcomes}
        for name in spec.strategies:
            o = by_name[name]
            rows.append({**axes, "strategy": name, "best_k": o.best_k, **common,
                         "throughput_mbps": o.result.throughput_mbps,
                         "ci95_mbps": o.result.ci95_mbps,
                         "improvement_over_base_pct": improvement_pct(
                             o.throughput, outcome.base.throughput),
                         "infeasible": o.result.infeasible})
    else:
        per = point[3]
        bits = 8 * mpdu_element_bytes(config.geom)
        best = outcome.best
        rows.append({**axes, "ber": ber_from_per(per, bits) if per < 1 else None,
                     "best_strategy": best.strategy.name, "best_k": best.best_k, **common,
                     "throughput_mbps": best.throughput, "ci95_mbps": best.result.ci95_mbps,
                     "base_throughput_mbps": outcome.base.throughput,
                     "improvement_over_base_pct": outcome.improvement_pct,
                     "infeasible": best.result.infeasible})
    log.info("point %s done", point)
    return rows


def evaluate(kind: str, spec: ExperimentSpec, jobs: int = 1) -> list[dict[str, Any]]:
    """Rows for ``kind`` in {'run', 'best', 'sweep-k'}, in point order whatever ``jobs`` is."""
    if kind not in ("run", "best", "sweep-k"):
        raise ValueError(f"unknown table kind {kind!r}")
    seed = spec.resolved_seed()
    tasks = [(kind, spec, p, seed) for p in points(spec)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_eval_point, tasks))
    else:
        chunks = [_eval_point(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def format_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        # shortest round-trip repr, never scientific notation
        return format(Decimal(repr(v)), "f")
    return str(v)


def to_csv(rows: Iterable[dict[str, Any]], columns: tuple[str, ...]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def to_json(rows: Iterable[dict[str, Any]], columns: tuple[str, ...]) -> str:
    return json.dumps([{c: row.get(c) for c in columns} for row in rows], indent=2) + "\n"


def render(rows, columns, fmt: str) -> str:
    return to_json(rows, columns) if fmt == "json" else to_csv(rows, columns)


def read_csv(text: str) -> list[dict[str, Any]]:
    """Parse an emitted table back into typed values."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        parsed = {}
        for key, raw in row.items():
            if raw == "":
                parsed[key] = None
            elif raw in ("true", "false"):
                parsed[key] = raw == "true"
            elif key in ("mode", "strategy", "best_strategy"):
                parsed[key] = raw
            elif key in ("msdu_bytes", "msdus_per_mpdu", "best_k", "k", "attempts", "seed"):
                parsed[key] = int(raw)
            else:
                parsed[key] = float(raw)
        out.append(parsed)
    return out
