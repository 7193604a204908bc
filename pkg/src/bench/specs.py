"""
Experiment specifications and distribution files.

Distributions are described either densely, {"n": 4, "probs": [...]}, or by
family, {"n": 4, "kind": "bucket-ish", "params": {"eta": 0.95, "gap": 0.1}}.
Family parameters may also be given at the top level.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..artifacts.io import save_json
from ..attack import AttackConfig
from ..consensus import Statistic, make_statistic
from ..dists import (
    DEFAULT_ETA,
    DEFAULT_GAP,
    RankingDistribution,
    make_named,
    plackett_luce,
    point_mass,
    random_plackett_luce,
    uniform,
)
from ..perms import Permutation
from ..types import DistributionSpec


class SpecValidationError(ValueError):
    """Invalid experiment or distribution file, with the offending field path."""

    def __init__(self, path: str, message: str, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = path if line is None else f"{path} (line {line})"
        super().__init__(f"{where}: {message}")


def _require(data: Dict[str, Any], key: str, path: str):
    if key not in data:
        raise SpecValidationError(f"{path}.{key}", "missing required field")
    return data[key]


def _permutation(value, path: str) -> Permutation:
    try:
        return Permutation.from_json(value)
    except (TypeError, ValueError) as e:
        raise SpecValidationError(path, str(e)) from None


def parse_distribution(data: DistributionSpec, path: str = "distribution") -> RankingDistribution:
    if not isinstance(data, dict):
        raise SpecValidationError(path, f"expected an object, got {type(data).__name__}")
    params = dict(data.get("params", {}))
    params.update({k: v for k, v in data.items() if k not in ("params", "kind", "probs")})
    kind = str(data.get("kind", "dense" if "probs" in data else "")).lower().replace("-", "_")
    try:
        if kind == "dense":
            return RankingDistribution(int(_require(data, "n", path)), _require(data, "probs", path))
        if kind == "uniform":
            return uniform(int(_require(params, "n", path)))
        if kind == "point_mass":
            return point_mass(_permutation(_require(params, "sigma", path), f"{path}.sigma"))
        if kind in ("plackett_luce", "pl"):
            if "weights" in params:
                return plackett_luce(params["weights"], params.get("n"))
            return random_plackett_luce(int(_require(params, "n", path)), int(params.get("seed", 0)))
        if kind in ("uniform_ish", "pointmass_ish", "bucket_ish"):
            sigma0 = None
            if "sigma0" in params:
                sigma0 = _permutation(params["sigma0"], f"{path}.sigma0")
            return make_named(
                kind,
                sigma0=sigma0,
                eta=float(params.get("eta", DEFAULT_ETA)),
                gap=float(params.get("gap", DEFAULT_GAP)),
                n=params.get("n"),
                swap_rank=int(params.get("swap_rank", 1)),
            )
    except SpecValidationError:
        raise
    except (TypeError, ValueError) as e:
        field_path = f"{path}.probs" if kind == "dense" else path
        raise SpecValidationError(field_path, str(e)) from None
    raise SpecValidationError(f"{path}.kind", f"unknown distribution kind {data.get('kind')!r}")


def distribution_label(data: DistributionSpec) -> str:
    kind = str(data.get("kind", "dense"))
    params = dict(data.get("params", {}))
    params.update({k: v for k, v in data.items() if k not in ("params", "kind", "probs", "n")})
    extras = ",".join(f"{k}={params[k]}" for k in sorted(params) if k in ("eta", "gap", "seed"))
    return f"{kind}({extras})" if extras else kind


def _decode(text: str, path: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecValidationError(path, e.msg, e.lineno) from None


def save_distribution(path: str, p: RankingDistribution) -> None:
    save_json(path, p.to_json())


def load_distribution(path: str) -> RankingDistribution:
    data = _decode(Path(path).read_text(), str(path))
    return parse_distribution(data, "distribution")


@dataclass
class ExperimentSpec:
    distribution: DistributionSpec
    statistic: str = "kemeny"
    deltas: Optional[List[float]] = None
    attack: Dict[str, Any] = field(default_factory=dict)
    runs: int = 5
    seed: int = 0
    output_dir: str = "artifacts"
    merge_median: str = "kemeny"

    def build_distribution(self) -> RankingDistribution:
        return parse_distribution(self.distribution, "distribution")

    def build_statistic(self, theta: float = 0.05) -> Statistic:
        try:
            return make_statistic(self.statistic, theta, self.merge_median)
        except ValueError as e:
            raise SpecValidationError("statistic", str(e)) from None

    def attack_config(self, delta: float, seed: int) -> AttackConfig:
        try:
            return AttackConfig.from_dict(self.attack, delta=delta, seed=seed)
        except (TypeError, ValueError) as e:
            raise SpecValidationError("attack", str(e)) from None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentSpec":
        if not isinstance(data, dict):
            raise SpecValidationError("spec", "expected an object")
        unknown = set(data) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise SpecValidationError(sorted(unknown)[0], "unknown field")
        spec = cls(distribution=_require(data, "distribution", "spec"), **{
            k: v for k, v in data.items() if k != "distribution"
        })
        spec.validate()
        return spec

    def validate(self) -> None:
        self.build_distribution()
        self.build_statistic()
        if self.deltas is not None:
            if not isinstance(self.deltas, list) or not self.deltas:
                raise SpecValidationError("deltas", "expected a non-empty list or null")
            for i, d in enumerate(self.deltas):
                if not isinstance(d, (int, float)) or not 0.0 <= d <= 1.0:
                    raise SpecValidationError(f"deltas[{i}]", f"{d!r} is not in [0, 1]")
        if not isinstance(self.runs, int) or self.runs < 1:
            raise SpecValidationError("runs", f"{self.runs!r} must be a positive integer")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise SpecValidationError("seed", f"{self.seed!r} must be a nonnegative integer")
        self.attack_config(0.0, 0)


def load_spec(path: str) -> ExperimentSpec:
    return ExperimentSpec.from_dict(_decode(Path(path).read_text(), str(path)))
