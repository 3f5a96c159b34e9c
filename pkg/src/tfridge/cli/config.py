"""Run configuration: JSON schema, presets, and conversion to typed parameters."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from ..core import TimeGrid
from ..dimer import DimerParams
from ..exceptions import ConfigError
from ..synth import LINESHAPE_GRID, TOY_GRID, LineshapeParams, ToyComponent, ToyParams

SOURCES = ("toy", "lineshape", "dimer", "input_csv")
_TOP_KEYS = set(SOURCES) | {"grid", "cwt", "ridge", "fit", "out"}
_GRID_KEYS = {"t0", "t_end", "dt"}
_CWT_KEYS = {"f_min", "f_max", "voices", "omega0"}
_RIDGE_KEYS = {"threshold", "respect_coi"}
_FIT_KEYS = {"t_start", "t_end"}
_TOY_KEYS = {"components"}
_COMPONENT_KEYS = {"omega", "mu", "sigma"}
_LINESHAPE_KEYS = {"omega_eg", "lambda", "S", "omega_d", "g_re"}
_DIMER_KEYS = {"j", "g", "omega", "gamma", "n_max", "grid"}

DEFAULT_CWT = {
    "toy": {"f_min": 5.0, "f_max": 120.0, "voices": 16, "omega0": 6.0},
    "lineshape": {"f_min": 1.5, "f_max": 8.0, "voices": 48, "omega0": 6.0},
    "dimer": {"f_min": 0.2, "f_max": 4.0, "voices": 64, "omega0": 6.0},
    "input_csv": {"f_min": None, "f_max": None, "voices": 16, "omega0": 6.0},
}


@dataclass(frozen=True)
class CwtParams:
    """``None`` bounds are filled from the signal (see :class:`tfridge.wavelet.CWT`)."""

    f_min: float | None = None
    f_max: float | None = None
    voices: int = 16
    omega0: float = 6.0


@dataclass(frozen=True)
class RidgeOptions:
    threshold: float = 0.2
    respect_coi: bool = True


@dataclass(frozen=True)
class FitWindow:
    t_start: float | None = None
    t_end: float | None = None


@dataclass(frozen=True)
class RunConfig:
    source: str
    toy: ToyParams | None = None
    lineshape: LineshapeParams | None = None
    dimer: DimerParams | None = None
    input_csv: Path | None = None
    grid: TimeGrid | None = None
    cwt: CwtParams = CwtParams()
    ridge: RidgeOptions = RidgeOptions()
    fit: FitWindow = FitWindow()
    out: Path = Path(".")
    raw: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        """JSON-ready form that :func:`parse_config` maps back to an equal config."""
        return copy.deepcopy(self.raw)


def _check_keys(obj: Any, allowed: set, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    return obj


def _number(obj: dict, key: str, where: str, default=None, kind=float):
    if key not in obj or obj[key] is None:
        if default is ...:
            raise ConfigError(f"{where}.{key} is required")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {val!r}")
    if kind is int:
        if int(val) != val:
            raise ConfigError(f"{where}.{key} must be an integer, got {val!r}")
        return int(val)
    return float(val)


def _parse_grid(obj: dict, where: str) -> TimeGrid:
    _check_keys(obj, _GRID_KEYS, where)
    t0 = _number(obj, "t0", where, 0.0)
    return TimeGrid.from_span(t0, _number(obj, "t_end", where, ...), _number(obj, "dt", where, ...))


def _grid_dict(grid: TimeGrid) -> dict:
    return {"t0": grid.t0, "t_end": grid.t_end, "dt": grid.dt}


def _parse_toy(obj) -> ToyParams:
    _check_keys(obj, _TOY_KEYS, "toy")
    comps = obj.get("components")
    if not isinstance(comps, list) or not comps:
        raise ConfigError("toy.components must be a nonempty list")
    out = []
    for i, c in enumerate(comps):
        where = f"toy.components[{i}]"
        _check_keys(c, _COMPONENT_KEYS, where)
        out.append(ToyComponent(_number(c, "omega", where, ...), _number(c, "mu", where, ...),
                                _number(c, "sigma", where, ...)))
    return ToyParams(tuple(out))


def _parse_lineshape(obj) -> LineshapeParams:
    _check_keys(obj, _LINESHAPE_KEYS, "lineshape")
    if "lambda" in obj and "S" in obj and obj["lambda"] != obj["S"]:
        raise ConfigError("lineshape.lambda and its alias lineshape.S disagree")
    lam = _number(obj, "lambda", "lineshape", None)
    if lam is None:
        lam = _number(obj, "S", "lineshape", 2.0)
    return LineshapeParams(
        omega_eg=_number(obj, "omega_eg", "lineshape", 3.0),
        lambda_=lam,
        omega_d=_number(obj, "omega_d", "lineshape", 0.05),
        g_re=_number(obj, "g_re", "lineshape", 0.0),
    )


def _parse_dimer(obj) -> DimerParams:
    _check_keys(obj, _DIMER_KEYS, "dimer")
    defaults = DimerParams()
    grid = _parse_grid(obj["grid"], "dimer.grid") if "grid" in obj else defaults.grid
    return DimerParams(
        j=_number(obj, "j", "dimer", defaults.j),
        g=_number(obj, "g", "dimer", defaults.g),
        omega=_number(obj, "omega", "dimer", defaults.omega),
        gamma=_number(obj, "gamma", "dimer", defaults.gamma),
        n_max=_number(obj, "n_max", "dimer", defaults.n_max, kind=int),
        grid=grid,
    )


def parse_config(obj: dict) -> RunConfig:
    """Validate a config mapping; unknown keys and ambiguous sources are errors."""
    _check_keys(obj, _TOP_KEYS, "config")
    present = [s for s in SOURCES if obj.get(s) is not None]
    if len(present) != 1:
        raise ConfigError(
            f"exactly one signal source ({', '.join(SOURCES)}) is required, got {present or 'none'}"
        )
    source = present[0]
    kw: dict[str, Any] = {"source": source}
    if source == "toy":
        kw["toy"] = _parse_toy(obj["toy"])
        kw["grid"] = _parse_grid(obj["grid"], "grid") if "grid" in obj else TOY_GRID
    elif source == "lineshape":
        kw["lineshape"] = _parse_lineshape(obj["lineshape"])
        kw["grid"] = _parse_grid(obj["grid"], "grid") if "grid" in obj else LINESHAPE_GRID
    elif source == "dimer":
        if "grid" in obj:
            raise ConfigError("a dimer source takes its grid inside the dimer block")
        kw["dimer"] = _parse_dimer(obj["dimer"])
    else:
        if not isinstance(obj["input_csv"], str):
            raise ConfigError("input_csv must be a path string")
        if "grid" in obj:
            raise ConfigError("input_csv takes its grid from the file's time column")
        kw["input_csv"] = Path(obj["input_csv"])

    cwt_obj = _check_keys(obj.get("cwt", {}), _CWT_KEYS, "cwt")
    base = DEFAULT_CWT[source]
    kw["cwt"] = CwtParams(
        f_min=_number(cwt_obj, "f_min", "cwt", base["f_min"]),
        f_max=_number(cwt_obj, "f_max", "cwt", base["f_max"]),
        voices=_number(cwt_obj, "voices", "cwt", base["voices"], kind=int),
        omega0=_number(cwt_obj, "omega0", "cwt", base["omega0"]),
    )
    ridge_obj = _check_keys(obj.get("ridge", {}), _RIDGE_KEYS, "ridge")
    coi = ridge_obj.get("respect_coi", True)
    if not isinstance(coi, bool):
        raise ConfigError(f"ridge.respect_coi must be true or false, got {coi!r}")
    kw["ridge"] = RidgeOptions(_number(ridge_obj, "threshold", "ridge", 0.2), coi)
    fit_obj = _check_keys(obj.get("fit", {}), _FIT_KEYS, "fit")
    kw["fit"] = FitWindow(_number(fit_obj, "t_start", "fit"), _number(fit_obj, "t_end", "fit"))
    out = obj.get("out", ".")
    if not isinstance(out, str):
        raise ConfigError("out must be a path string")
    kw["out"] = Path(out)
    kw["raw"] = _canonical(kw)
    return RunConfig(**kw)


def _canonical(kw: dict) -> dict:
    """Fully resolved config mapping (defaults filled in) for provenance files."""
    out: dict[str, Any] = {}
    src = kw["source"]
    if src == "toy":
        out["toy"] = {"components": [
            {"omega": c.omega, "mu": c.mu, "sigma": c.sigma} for c in kw["toy"].components
        ]}
        out["grid"] = _grid_dict(kw["grid"])
    elif src == "lineshape":
        p = kw["lineshape"]
        out["lineshape"] = {"omega_eg": p.omega_eg, "lambda": p.lambda_,
                            "omega_d": p.omega_d, "g_re": p.g_re}
        out["grid"] = _grid_dict(kw["grid"])
    elif src == "dimer":
        p = kw["dimer"]
        out["dimer"] = {"j": p.j, "g": p.g, "omega": p.omega, "gamma": p.gamma,
                        "n_max": p.n_max, "grid": _grid_dict(p.grid)}
    else:
        out["input_csv"] = str(kw["input_csv"])
    c = kw["cwt"]
    out["cwt"] = {"f_min": c.f_min, "f_max": c.f_max, "voices": c.voices, "omega0": c.omega0}
    out["ridge"] = {"threshold": kw["ridge"].threshold, "respect_coi": kw["ridge"].respect_coi}
    out["fit"] = {"t_start": kw["fit"].t_start, "t_end": kw["fit"].t_end}
    out["out"] = str(kw["out"])
    return out


def load_presets() -> dict:
    text = resources.files("tfridge").joinpath("presets.json").read_text()
    return json.loads(text)


def preset_names() -> list[str]:
    return sorted(load_presets())


def preset_config(name: str) -> dict:
    presets = load_presets()
    if name not in presets:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(sorted(presets))}")
    return copy.deepcopy(presets[name])


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
