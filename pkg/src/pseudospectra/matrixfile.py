"""JSON matrix files.

Complex numbers are always ``[re, im]`` pairs. Three kinds are supported::

    {"schema_version": "1.0", "kind": "dense",
     "payload": {"n": 2, "entries": [[0, 0], [1, 0], [0, 0], [0, 0]]}}

    {"schema_version": "1.0", "kind": "bidiagonal",
     "payload": {"N": 5, "k": 2, "diag_period": [[1, 0], [2, 0]],
                 "superdiag": [[1, 0], [1, 0], [1, 0], [1, 0]]}}

    {"schema_version": "1.0", "kind": "jordan_sum",
     "payload": {"blocks": [{"eigenvalue": [0, 0], "block_size": 3}]}}

Dense entries are row-major.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .asymptotics import JordanSum
from .bidiagonal import PeriodicBidiagonal
from .errors import InputDomainError

SCHEMA_VERSION = "1.0"
KINDS = ("dense", "bidiagonal", "jordan_sum")


class MatrixFileError(InputDomainError):
    """Malformed matrix file; message carries line/column when JSON itself is broken."""


def _pair(x, where: str) -> complex:
    if (not isinstance(x, (list, tuple)) or len(x) != 2
            or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in x)):
        raise MatrixFileError(f"{where}: expected [re, im] pair, got {x!r}")
    if not all(math.isfinite(t) for t in x):
        raise MatrixFileError(f"{where}: non-finite number")
    return complex(float(x[0]), float(x[1]))


def _pairs(xs, where: str) -> list[complex]:
    if not isinstance(xs, list):
        raise MatrixFileError(f"{where}: expected a list of [re, im] pairs")
    return [_pair(x, f"{where}[{i}]") for i, x in enumerate(xs)]


def _emit(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _int(x, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise MatrixFileError(f"{where}: expected an integer, got {x!r}")
    return x


@dataclass(frozen=True)
class MatrixFile:
    kind: str
    payload: dict
    schema_version: str = SCHEMA_VERSION

    # -- construction ----------------------------------------------------------

    @classmethod
    def from_dict(cls, doc) -> "MatrixFile":
        if not isinstance(doc, dict):
            raise MatrixFileError("top level must be a JSON object")
        for key in ("schema_version", "kind", "payload"):
            if key not in doc:
                raise MatrixFileError(f"missing field {key!r}")
        kind = doc["kind"]
        if kind not in KINDS:
            raise MatrixFileError(f"unknown kind {kind!r}; expected one of {KINDS}")
        p = doc["payload"]
        if not isinstance(p, dict):
            raise MatrixFileError("payload must be an object")
        try:
            if kind == "dense":
                n = _int(p["n"], "payload.n")
                entries = _pairs(p["entries"], "payload.entries")
                if n < 1 or len(entries) != n * n:
                    raise MatrixFileError(f"payload.entries: need n*n={n * n} entries, got {len(entries)}")
                payload = {"n": n, "entries": [_emit(z) for z in entries]}
            elif kind == "bidiagonal":
                N, k = _int(p["N"], "payload.N"), _int(p["k"], "payload.k")
                diag = _pairs(p["diag_period"], "payload.diag_period")
                sup = _pairs(p["superdiag"], "payload.superdiag")
                if len(diag) != k:
                    raise MatrixFileError(f"payload.diag_period: need k={k} values, got {len(diag)}")
                PeriodicBidiagonal(N, tuple(diag), tuple(sup))  # dimension checks
                payload = {"N": N, "k": k, "diag_period": [_emit(z) for z in diag],
                           "superdiag": [_emit(z) for z in sup]}
            else:
                blocks = p["blocks"]
                if not isinstance(blocks, list) or not blocks:
                    raise MatrixFileError("payload.blocks: expected a non-empty list")
                out = []
                for i, b in enumerate(blocks):
                    if not isinstance(b, dict):
                        raise MatrixFileError(f"payload.blocks[{i}]: expected an object")
                    lam = _pair(b["eigenvalue"], f"payload.blocks[{i}].eigenvalue")
                    size = _int(b["block_size"], f"payload.blocks[{i}].block_size")
                    if size < 1:
                        raise MatrixFileError(f"payload.blocks[{i}].block_size must be >= 1")
                    out.append({"eigenvalue": _emit(lam), "block_size": size})
                payload = {"blocks": out}
        except KeyError as exc:
            raise MatrixFileError(f"payload missing field {exc.args[0]!r}") from None
        except MatrixFileError:
            raise
        except InputDomainError as exc:
            raise MatrixFileError(str(exc)) from None
        return cls(kind=kind, payload=payload, schema_version=str(doc["schema_version"]))

    @classmethod
    def loads(cls, text: str) -> "MatrixFile":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(doc)

    @classmethod
    def load(cls, path) -> "MatrixFile":
        return cls.loads(Path(path).read_text())

    @classmethod
    def from_dense(cls, A) -> "MatrixFile":
        A = np.asarray(A, dtype=complex)
        return cls("dense", {"n": A.shape[0], "entries": [_emit(z) for z in A.ravel()]})

    @classmethod
    def from_bidiagonal(cls, spec: PeriodicBidiagonal) -> "MatrixFile":
        return cls("bidiagonal", {"N": spec.N, "k": spec.k, "diag_period": [_emit(z) for z in spec.diag_period],
                                  "superdiag": [_emit(z) for z in spec.superdiag]})

    @classmethod
    def from_jordan_sum(cls, js: JordanSum) -> "MatrixFile":
        return cls("jordan_sum", {"blocks": [{"eigenvalue": _emit(complex(l)), "block_size": int(s)}
                                             for l, s in js.blocks]})

    # -- output -------------------------------------------------------------------

    def to_dict(self) -> dict:
        return {"schema_version": self.schema_version, "kind": self.kind, "payload": self.payload}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def digest(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()

    # -- interpretation -------------------------------------------------------------

    def structure(self):
        """The structured description (``PeriodicBidiagonal`` / ``JordanSum``) or ``None`` for dense input."""
        p = self.payload
        if self.kind == "bidiagonal":
            return PeriodicBidiagonal(p["N"], tuple(complex(*z) for z in p["diag_period"]),
                                      tuple(complex(*z) for z in p["superdiag"]))
        if self.kind == "jordan_sum":
            return JordanSum(tuple((complex(*b["eigenvalue"]), b["block_size"]) for b in p["blocks"]))
        return None

    def matrix(self) -> np.ndarray:
        if self.kind == "dense":
            n = self.payload["n"]
            return np.array([complex(*z) for z in self.payload["entries"]], dtype=complex).reshape(n, n)
        return self.structure().realize()
