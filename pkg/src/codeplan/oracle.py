"""Accuracy oracles: the stand-in for training a path and measuring it.

Three implementations share the ``evaluate(path, scenario)`` method:

* :class:`TableOracle` looks accuracies up in a fixture table.
* :class:`SyntheticOracle` derives them from the compute a path skips and
  borrows, plus seeded noise.
* :class:`ExternalOracle` asks a subprocess over newline-delimited JSON.
"""

from __future__ import annotations

import json
import math
import os
import queue
import subprocess
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .model import PathKind, PathSpec, Scenario, ValidationError

DEFAULT_TIMEOUT = 600.0
TIMEOUT_ENV = "PLAN_ORACLE_TIMEOUT"


class OracleError(RuntimeError):
    """Base class; ``path`` is filled in by the caller that knows it."""

    def __init__(self, message: str, path: Optional[PathSpec] = None):
        super().__init__(message)
        self.path = path

    def __str__(self):
        msg = super().__str__()
        if self.path is not None:
            return f"{msg} (path {self.path.label()})"
        return msg


class OracleMiss(OracleError):
    pass


class OracleTimeout(OracleError):
    pass


class ProtocolError(OracleError):
    pass


class AccuracyRangeError(OracleError):
    pass


def _check_fraction(value: float, what: str) -> float:
    if not (isinstance(value, (int, float)) and not isinstance(value, bool)):
        raise ValidationError(f"{what}: accuracy must be a number")
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{what}: accuracy {value!r} not in [0, 1]")
    return value


def _table_key(r: Sequence[Optional[int]], kind: str) -> tuple:
    kind = PathKind(kind)
    if kind is PathKind.SKIP:
        return ("skip", int(r[0]), int(r[3]))
    return ("cross",) + tuple(int(v) for v in r)


@dataclass
class TableOracle:
    """Fixed accuracies keyed by path; ``default`` covers missing paths."""

    entries: dict = field(default_factory=dict)
    default: Optional[float] = None
    cost_hint: str = "cheap"

    def __post_init__(self):
        for key, acc in self.entries.items():
            _check_fraction(acc, f"table entry {key}")
        if self.default is not None:
            self.default = _check_fraction(self.default, "table default")

    @classmethod
    def from_records(cls, records: Sequence[Mapping], default=None) -> "TableOracle":
        entries = {}
        for i, rec in enumerate(records):
            key = _table_key(rec["r_p"], rec.get("kind", "cross"))
            if key in entries:
                raise ValidationError(f"table record {i}: duplicate path {list(rec['r_p'])}")
            entries[key] = _check_fraction(rec["accuracy"], f"table record {i}")
        return cls(entries, default)

    @classmethod
    def from_json(cls, doc) -> "TableOracle":
        """Accepts a bare array of records or ``{"entries": [...], "default": x}``."""
        if isinstance(doc, list):
            return cls.from_records(doc)
        return cls.from_records(doc["entries"], doc.get("default"))

    @classmethod
    def load(cls, fname) -> "TableOracle":
        with open(fname, encoding="utf-8") as fin:
            return cls.from_json(json.load(fin))

    def to_json(self, n_f: int) -> object:
        records = []
        for key in sorted(self.entries, key=lambda k: (k[0] != "cross", k[1:])):
            if key[0] == "skip":
                r = [key[1], n_f, n_f, key[2]]
            else:
                r = list(key[1:])
            records.append({"r_p": r, "kind": key[0], "accuracy": self.entries[key]})
        if self.default is None:
            return records
        return {"entries": records, "default": self.default}

    def dump(self, fname, n_f: int) -> None:
        Path(fname).write_text(json.dumps(self.to_json(n_f), indent=1) + "\n", encoding="utf-8")

    def evaluate(self, path: PathSpec, scenario: Optional[Scenario] = None) -> float:
        acc = self.entries.get(path.key())
        if acc is not None:
            return acc
        if self.default is not None:
            return self.default
        raise OracleMiss("no table entry and no default", path)


def _compute_fraction(blocks, lo: int, hi: int) -> float:
    """Share of per-sample cost in blocks ``lo..hi`` inclusive."""
    costs = [b.per_sample_cost_c for b in blocks]
    return sum(costs[lo:hi + 1]) / sum(costs)


@dataclass(frozen=True)
class SyntheticOracle:
    """``base - alpha * skipped + beta * borrowed + noise``, clamped to [0, 1].

    ``skipped`` is the share of local per-sample compute the path bypasses,
    ``borrowed`` the share of host per-sample compute it runs through.
    """

    base: float = 0.85
    skip_penalty_alpha: float = 0.3
    host_recovery_beta: float = 0.2
    noise_sigma: float = 0.0
    seed: int = 0
    cost_hint: str = "cheap"

    def evaluate(self, path: PathSpec, scenario: Scenario) -> float:
        skipped = 0.0
        if path.lin - path.lout > 1:
            skipped = _compute_fraction(scenario.local.blocks, path.lout + 1, path.lin - 1)
        borrowed = 0.0
        if not path.is_skip:
            borrowed = _compute_fraction(scenario.host.blocks, path.hin, path.hout)
        acc = self.base - self.skip_penalty_alpha * skipped + self.host_recovery_beta * borrowed
        if self.noise_sigma > 0:
            # seeded per path so results do not depend on call order or n_f
            if path.is_skip:
                words = [self.seed, 1, path.lout, path.lin]
            else:
                words = [self.seed, 0, *path.r]
            rng = np.random.default_rng(words)
            acc += rng.normal(0.0, self.noise_sigma)
        return min(max(acc, 0.0), 1.0)


def _timeout_from_env(default: float) -> float:
    raw = os.environ.get(TIMEOUT_ENV)
    if raw is None:
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ValidationError(f"{TIMEOUT_ENV}={raw!r} is not a number") from None
    if not value > 0:
        raise ValidationError(f"{TIMEOUT_ENV} must be > 0")
    return value


class ExternalOracle:
    """Line-oriented JSON client for an external accuracy evaluator.

    The child process is started on first use and kept alive.  Each request
    is one JSON object on a line; the reply must be ``{"accuracy": x}``.
    A timed-out or misbehaving child is killed and restarted on the next
    request.
    """

    cost_hint = "expensive"

    def __init__(self, command: Sequence[str], timeout: Optional[float] = None, cwd=None):
        if not command:
            raise ValidationError("external oracle needs a command")
        self.command = list(command)
        self.timeout = _timeout_from_env(DEFAULT_TIMEOUT if timeout is None else float(timeout))
        self.cwd = cwd
        self._proc: Optional[subprocess.Popen] = None
        self._lines: "queue.Queue[Optional[str]]" = queue.Queue()
        self._lock = threading.Lock()

    def _start(self):
        self._proc = subprocess.Popen(
            self.command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
            cwd=self.cwd,
        )
        self._lines = queue.Queue()
        threading.Thread(
            target=self._pump, args=(self._proc.stdout, self._lines), daemon=True
        ).start()

    @staticmethod
    def _pump(stream, lines):
        for line in stream:
            lines.put(line)
        lines.put(None)

    def close(self):
        proc, self._proc = self._proc, None
        if proc is None:
            return
        if proc.poll() is None:
            proc.kill()
        proc.wait()
        for stream in (proc.stdin, proc.stdout):
            try:
                stream.close()
            except OSError:
                pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass

    @staticmethod
    def request(path: PathSpec, scenario: Scenario) -> dict:
        return {
            "r_p": list(path.vector(scenario.n_f)),
            "kind": path.kind.value,
            "s": scenario.s,
            "scenario_id": scenario.scenario_id,
        }

    @staticmethod
    def parse_reply(line: str) -> float:
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"reply is not JSON: {line.strip()!r} ({exc.msg})") from None
        if not isinstance(doc, dict) or "accuracy" not in doc:
            raise ProtocolError(f"reply lacks an 'accuracy' field: {line.strip()!r}")
        acc = doc["accuracy"]
        if isinstance(acc, bool) or not isinstance(acc, (int, float)) or not math.isfinite(acc):
            raise ProtocolError(f"accuracy must be a finite number, got {acc!r}")
        if not 0.0 <= acc <= 1.0:
            raise AccuracyRangeError(f"accuracy {acc!r} outside [0, 1]")
        return float(acc)

    def evaluate(self, path: PathSpec, scenario: Scenario) -> float:
        with self._lock:
            if self._proc is None or self._proc.poll() is not None:
                self.close()
                self._start()
            msg = json.dumps(self.request(path, scenario), separators=(",", ":"))
            try:
                self._proc.stdin.write(msg + "\n")
                self._proc.stdin.flush()
            except (BrokenPipeError, OSError) as exc:
                self.close()
                raise ProtocolError(f"oracle process closed its input: {exc}", path) from None
            try:
                line = self._lines.get(timeout=self.timeout)
            except queue.Empty:
                self.close()
                raise OracleTimeout(f"no reply within {self.timeout} s", path) from None
            if line is None:
                self.close()
                raise ProtocolError("oracle process exited without replying", path)
            try:
                return self.parse_reply(line)
            except OracleError as exc:
                exc.path = path
                raise
