"""Run reports: named checks with their source anchors, tolerances and verdicts."""

from __future__ import annotations

import datetime as _dt
import json
import math
import platform
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__


@dataclass
class Check:
    name: str
    anchor: str          # where the checked statement comes from (see ANCHORS)
    residual: float
    tolerance: float
    verdict: bool = None
    mode: str = "max"    # "max": residual <= tol;  "min": residual >= tol

    def __post_init__(self):
        self.residual = float(self.residual)
        self.tolerance = float(self.tolerance)
        if self.verdict is None:
            ok = math.isfinite(self.residual)
            if self.mode == "min":
                self.verdict = ok and self.residual >= self.tolerance
            else:
                self.verdict = ok and self.residual <= self.tolerance
        self.verdict = bool(self.verdict)

    def line(self):
        op = ">=" if self.mode == "min" else "<="
        tag = "PASS" if self.verdict else "FAIL"
        return f"[{tag}] {self.name:<40s} {self.residual:11.3e} {op} {self.tolerance:9.2e}  ({self.anchor})"


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


@dataclass
class ReportDocument:
    command: str
    config: dict
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.meta.setdefault("timestamp", _dt.datetime.now(_dt.timezone.utc).isoformat())
        self.meta.setdefault("versions", {"chebnet": __version__, "numpy": np.__version__,
                                          "python": platform.python_version()})

    def add(self, name, key, residual, tolerance, mode="max"):
        """``key`` is looked up in ANCHORS by prefix; unknown keys are used verbatim."""
        a = anchor(key)
        c = Check(name, key if a == "unanchored" else a, residual, tolerance, mode=mode)
        self.checks.append(c)
        return c

    @property
    def verdict(self):
        return all(c.verdict for c in self.checks)

    def summary(self):
        lines = [f"chebnet {self.command}"]
        lines += [c.line() for c in self.checks]
        n_ok = sum(c.verdict for c in self.checks)
        lines.append(f"{n_ok}/{len(self.checks)} checks passed")
        return "\n".join(lines)

    def to_dict(self):
        return _plain({"command": self.command, "config": self.config,
                       "checks": [asdict(c) for c in self.checks],
                       "verdict": self.verdict, "data": self.data, "meta": self.meta})

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def write(self, path):
        from .export import _open
        with _open(path) as fh:
            fh.write(self.to_json() + "\n")


# Check-family -> source anchor.  Keys are the prefixes used by the CLI.
ANCHORS = {
    "identity": "App. A identities",
    "chebyshev": "Prop 4.1(iii)-(vi)",
    "symmetry": "Table A.3",
    "catalog_K": "catalog: K = -1",
    "rim_K": "Ex 9.2 rim curvature",
    "mapping_det": "Thm 8.2 proof: det s = 1",
    "mapping_xieta": "Thm 8.2 proof: xi eta = 1",
    "middle_K": "Thm 8.2: K of middle surface",
    "concordance": "Thm 8.2: concordant nets",
    "parallelogram": "Sec 4: parallelogram condition",
    "commutation": "Sec 4: Chebyshev grid closes",
    "conservation": "Prop 7.1",
    "gauss": "Thm 8.1(ii)",
    "asymptotic": "Thm 8.1(iv)",
    "tangency": "Thm 8.1(iii)",
    "detI": "Thm 8.1(i)",
    "mean": "Thm 8.1 (Hab)",
    "sine_gordon": "Cor 8.3",
    "sphere_speed": "Prop 8.4",
    "psi": "Prop 8.4(ii)",
    "lelieuvre": "Prop 8.4",
    "compat": "Cor 8.3",
    "round_trip": "Ex 9.1/9.2 round trip",
    "rate": "second-order convergence",
}


def anchor(name):
    for key in sorted(ANCHORS, key=len, reverse=True):
        if name.startswith(key):
            return ANCHORS[key]
    return "unanchored"
