"""Plain-text key=value configuration for the simulation command.

Format (one ``key = value`` pair per line, ``#`` comments allowed)::

    noise = normal_mixture      # normal_mixture | t_mixture | beta_mixture |
                                # uniform | normal | laplace
    settings = 3,-3 | 2,-2      # one study column per setting:
                                #   mixture means lists, or for beta_mixture
                                #   shape pairs like 4,4;4,4 | 2,4;4,2
    sigma = 1                   # normal_mixture component sd
    df = 10                     # t_mixture degrees of freedom
    weights = random_uniform    # or fixed weights: 0.5,0.5
    a = 1                       # uniform(-a, a) half-width
    n = 100, 500, 2000          # sample sizes (grid rows)
    replications = 500
    seed = 20240601             # optional; drawn and printed when absent
    mode = test                 # test | plugin
    alpha = 0.05
    out = risk.csv              # optional output path
"""

from __future__ import annotations

from pathlib import Path

from .errors import TableParseError
from .simulate import MIXTURE_KINDS, NoiseSpec


def _parse_weights(text: str):
    text = text.strip()
    if text == "random_uniform":
        return "random_uniform"
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise TableParseError(f"bad weights value {text!r}") from None


def _parse_floats(text: str) -> tuple:
    return tuple(float(x) for x in text.split(",") if x.strip())


def build_noise_spec(kind: str, setting: str | None = None, sigma: float = 1.0,
                     df: int = 0, weights="random_uniform", a: float = 1.0) -> NoiseSpec:
    """Assemble a NoiseSpec from config-file fields."""
    if kind in ("normal_mixture", "t_mixture"):
        if not setting:
            raise TableParseError(f"{kind} needs a means setting like '3,-3'")
        means = _parse_floats(setting)
        if kind == "normal_mixture":
            return NoiseSpec(kind=kind, means=means, sigma=sigma, weights=weights)
        return NoiseSpec(kind=kind, means=means, df=df, weights=weights)
    if kind == "beta_mixture":
        if not setting:
            raise TableParseError("beta_mixture needs shape pairs like '4,4;4,4'")
        pairs = []
        for chunk in setting.split(";"):
            vals = _parse_floats(chunk)
            if len(vals) != 2:
                raise TableParseError(f"bad beta shape pair {chunk!r}")
            pairs.append((vals[0], vals[1]))
        return NoiseSpec(kind=kind, shape_pairs=tuple(pairs), weights=weights)
    if kind == "uniform":
        return NoiseSpec(kind=kind, a=a)
    return NoiseSpec(kind=kind)


def parse_simulation_config(path) -> dict:
    """Parse a study config into {specs, n, replications, seed, mode, alpha, out}."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TableParseError(f"cannot read config {path}: {exc}") from exc
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise TableParseError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        raw[key.strip().lower()] = value.strip()

    if "noise" not in raw:
        raise TableParseError(f"{path}: missing required key 'noise'")
    kind = raw["noise"]
    try:
        sigma = float(raw.get("sigma", "1"))
        df = int(raw.get("df", "0"))
        a = float(raw.get("a", "1"))
        weights = _parse_weights(raw.get("weights", "random_uniform"))
        ns = [int(float(x)) for x in raw.get("n", "").split(",") if x.strip()]
        replications = int(raw.get("replications", "0"))
        alpha = float(raw.get("alpha", "0.05"))
    except ValueError as exc:
        raise TableParseError(f"{path}: bad numeric value ({exc})") from exc
    if not ns:
        raise TableParseError(f"{path}: missing sample sizes 'n'")
    mode = raw.get("mode", "test")
    seed = int(raw["seed"]) if "seed" in raw else None

    if kind in MIXTURE_KINDS:
        settings = [s.strip() for s in raw.get("settings", "").split("|") if s.strip()]
        if not settings and "means" in raw:
            settings = [raw["means"]]
        if not settings:
            raise TableParseError(f"{path}: mixture config needs 'settings' or 'means'")
    else:
        settings = [None]
    specs = [build_noise_spec(kind, s, sigma=sigma, df=df, weights=weights, a=a)
             for s in settings]
    return {
        "specs": specs,
        "n": ns,
        "replications": replications,
        "seed": seed,
        "mode": mode,
        "alpha": alpha,
        "out": raw.get("out"),
    }
