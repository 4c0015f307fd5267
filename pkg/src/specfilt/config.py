"""Experiment table configuration files (JSON, see ``schema/experiment.schema.json``)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import jsonschema

from .basis import Extension
from .exceptions import ConfigError
from .filters import Family, FilterDesign, PassKind
from .modeling import ExperimentConfig, NoiseKind, NoiseSpec, Tone

#: Cutoff obtained by calibrating the third-order Butterworth filter against
#: its a-priori error values, rounded to a multiple of pi.
CALIBRATED_CUTOFF = 40 * math.pi


def _schema() -> dict:
    return json.loads(resources.files("specfilt").joinpath("schema/experiment.schema.json").read_text())


def _freq(value) -> float:
    if isinstance(value, dict):
        return float(value["pi"]) * math.pi
    return float(value)


def _freq_out(omega: float):
    k = omega / math.pi
    if abs(k - round(k)) <= 1e-12 * max(1.0, abs(k)):
        return {"pi": int(round(k))}
    return omega


def _tone(data) -> Tone:
    return Tone(data["kind"], _freq(data["omega"]))


def _tone_out(tone: Tone) -> dict:
    return {"kind": tone.kind, "omega": _freq_out(tone.omega)}


DEFAULT_SIGNAL = Tone("sin", 10 * math.pi)


@dataclass(frozen=True)
class TableConfig:
    """A family evaluated for every (order, L) pair."""

    name: str
    family: Family
    orders: tuple
    Ls: tuple
    ripple: float = 0.1
    cutoff: float = CALIBRATED_CUTOFF
    kind: PassKind = PassKind.LOWPASS
    T: float = 1.0
    signal: Tone = DEFAULT_SIGNAL
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    M: int = 10_000
    seed: int = 0
    shift_mode: Extension = Extension.NATURAL

    def design(self, order: int) -> FilterDesign:
        return FilterDesign(self.family, order, self.ripple, self.cutoff, self.kind)

    def experiment(self, order: int, L: int) -> ExperimentConfig:
        return ExperimentConfig(
            design=self.design(order),
            T=self.T,
            L=L,
            signal=self.signal,
            noise=self.noise,
            M=self.M,
            seed=self.seed,
            shift_mode=self.shift_mode,
        )

    @property
    def random(self) -> bool:
        return self.noise.kind is NoiseKind.RANDOM

    def to_dict(self) -> dict:
        noise = {"kind": self.noise.kind.value, "sigma": self.noise.sigma}
        if self.noise.kind is NoiseKind.DETERMINISTIC:
            noise["tones"] = [_tone_out(t) for t in self.noise.tones]
        return {
            "name": self.name,
            "family": self.family.value,
            "orders": list(self.orders),
            "L": list(self.Ls),
            "ripple": self.ripple,
            "cutoff": _freq_out(self.cutoff),
            "kind": self.kind.value,
            "T": self.T,
            "signal": _tone_out(self.signal),
            "noise": noise,
            "M": self.M,
            "seed": self.seed,
            "shift_mode": self.shift_mode.value,
        }


def _field_path(error: jsonschema.ValidationError) -> str:
    path = ".".join(str(p) for p in error.absolute_path)
    if error.validator == "required":
        missing = error.message.split("'")[1]
        return f"{path}.{missing}" if path else missing
    if error.validator == "additionalProperties":
        return path or error.message.split("'")[1]
    return path or "<root>"


def parse_config(data: dict) -> TableConfig:
    """Validate a decoded JSON document and build a :class:`TableConfig`."""
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        raise ConfigError(_field_path(errors[0]), errors[0].message)

    family = Family(data["family"])
    orders = tuple(data["orders"])
    if family is Family.LINKWITZ_RILEY:
        odd = [n for n in orders if n % 2]
        if odd:
            raise ConfigError("orders", f"Linkwitz-Riley orders must be even, got {odd}")

    noise_data = data.get("noise", {"kind": "deterministic"})
    kind = NoiseKind(noise_data["kind"])
    if kind is NoiseKind.DETERMINISTIC:
        tones = noise_data.get("tones")
        noise = NoiseSpec(
            kind,
            noise_data.get("sigma", 0.2),
            tuple(_tone(t) for t in tones) if tones is not None else NoiseSpec().tones,
        )
    elif kind is NoiseKind.RANDOM:
        if "tones" in noise_data:
            raise ConfigError("noise.tones", "random noise takes no tones")
        noise = NoiseSpec.random(noise_data.get("sigma", 0.01))
    else:
        noise = NoiseSpec.none()

    return TableConfig(
        name=data["name"],
        family=family,
        orders=orders,
        Ls=tuple(data["L"]),
        ripple=float(data.get("ripple", 0.1)),
        cutoff=_freq(data["cutoff"]) if "cutoff" in data else CALIBRATED_CUTOFF,
        kind=PassKind(data.get("kind", "lowpass")),
        T=float(data.get("T", 1.0)),
        signal=_tone(data["signal"]) if "signal" in data else DEFAULT_SIGNAL,
        noise=noise,
        M=int(data.get("M", 10_000)),
        seed=int(data.get("seed", 0)),
        shift_mode=Extension(data.get("shift_mode", "natural")),
    )


def dump_config(config: TableConfig) -> str:
    return json.dumps(config.to_dict(), indent=2) + "\n"


def bundled_names() -> list[str]:
    root = resources.files("specfilt").joinpath("tables")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_config(source) -> TableConfig:
    """Load a config from a path, or from a bundled table name such as ``bw_det``."""
    path = Path(source)
    if path.exists():
        text = path.read_text()
    else:
        name = path.name[:-5] if path.name.endswith(".json") else path.name
        if name not in bundled_names():
            raise ConfigError("config", f"no such file or bundled table: {source}")
        text = resources.files("specfilt").joinpath(f"tables/{name}.json").read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    return parse_config(data)


def with_overrides(config: TableConfig, seed=None, shift_mode=None, M=None) -> TableConfig:
    changes = {}
    if seed is not None:
        changes["seed"] = int(seed)
    if shift_mode is not None:
        changes["shift_mode"] = Extension(shift_mode)
    if M is not None:
        changes["M"] = int(M)
    return replace(config, **changes)
