"""Experiment configuration files, output manifests and atomic writing.

Config format: flat INI-style key/value sections.  A ``[meta]`` section
carries run-wide settings; every other section declares one experiment and
must carry a ``kind`` key.  Rational exponents may be written as ``a/b``
and infinity as ``inf``; they stay exact through exponent arithmetic.

Example::

    [meta]
    seed = 11
    output_dir = out

    [sweep:maximal]
    kind = sweep
    d = 1
    p = 2
    q = inf
    r = 2
    lambdas = 8,16,32,64
"""

from __future__ import annotations

import configparser
import datetime
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field

from .exponents import as_exponent

EXPERIMENT_KINDS = ("propagate", "sweep", "extremizer", "packing", "equivalence", "exponents", "bilinear")

_KNOWN_KEYS = {
    "propagate": {"kind", "datum", "n", "extent", "times", "p", "q", "r"},
    "sweep": {"kind", "d", "p", "q", "r", "lambdas", "interval", "random_trials", "ascent_iters"},
    "extremizer": {"kind", "family", "scale", "d", "eps"},
    "packing": {"kind", "lambda", "d", "resolution"},
    "equivalence": {"kind", "p", "q", "beta", "lambdas"},
    "exponents": {"kind", "d", "p", "q", "r", "q0"},
    "bilinear": {"kind", "p", "q", "r", "centers", "rho"},
}


class ConfigError(ValueError):
    pass


@dataclass
class Experiment:
    name: str
    kind: str
    options: dict


@dataclass
class RunConfig:
    seed: int
    output_dir: str
    experiments: list[Experiment]
    text: str

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()[:16]


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as e:
        raise ConfigError(f"config does not parse: {e}") from e
    seed = 0
    outdir = "schrodlab_out"
    experiments = []
    for section in cp.sections():
        items = dict(cp.items(section))
        if section == "meta":
            seed = int(items.get("seed", "0"))
            outdir = items.get("output_dir", outdir)
            continue
        if "kind" not in items:
            raise ConfigError(f"section [{section}] is missing the key 'kind'")
        kind = items["kind"]
        if kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"section [{section}]: unknown experiment kind {kind!r}")
        unknown = set(items) - _KNOWN_KEYS[kind]
        if unknown:
            raise ConfigError(
                f"section [{section}]: unknown key(s) {sorted(unknown)} for kind {kind!r}"
            )
        experiments.append(Experiment(section, kind, items))
    if not experiments:
        raise ConfigError("config declares no experiment sections")
    return RunConfig(seed, outdir, experiments, text)


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def parse_exponent_list(text: str):
    return [as_exponent(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def parse_float_list(text: str):
    return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def output_dir(cfg: RunConfig) -> str:
    return os.environ.get("SCHRODLAB_OUTDIR", cfg.output_dir)


def atomic_write(path: str, data: str) -> None:
    d = os.path.dirname(path) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp_")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class Manifest:
    config_hash: str
    seed: int
    grid: dict = field(default_factory=dict)
    version: str = ""
    started_at: str = ""
    finished_at: str = ""

    def write(self, path: str) -> None:
        atomic_write(path, json.dumps(self.__dict__, indent=1, sort_keys=True))


def now_iso() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()
