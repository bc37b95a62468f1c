"""Group specs, verification modes and law certificates (JSON schema)."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from . import word as _word
from .word import WordExpr

CERT_VERSION = 1


@dataclass(frozen=True)
class GroupSpec:
    """``sym:N``, ``alt:N``, ``gl:N:Q``, ``pgl:N:Q`` or ``symgen:N``.

    ``symgen:N`` is not a group: it stands for every pair of permutations
    generating Sym(k) or Alt(k) on k points, for some k <= N.
    """

    kind: str
    n: int
    q: int | None = None

    KINDS = ("sym", "alt", "gl", "pgl", "symgen")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("degree must be positive")
        if (self.kind in ("gl", "pgl")) != (self.q is not None):
            raise ValueError(f"{self.kind} needs a field size" if self.q is None else "unexpected field size")

    @classmethod
    def parse(cls, text: str) -> GroupSpec:
        m = re.fullmatch(r"\s*(sym|alt|symgen):(\d+)\s*", text)
        if m:
            return cls(m.group(1), int(m.group(2)))
        m = re.fullmatch(r"\s*(gl|pgl):(\d+):(\d+)\s*", text)
        if m:
            return cls(m.group(1), int(m.group(2)), int(m.group(3)))
        raise ValueError(f"bad group spec {text!r}; expected sym:N | alt:N | gl:N:Q | pgl:N:Q")

    def __str__(self) -> str:
        return f"{self.kind}:{self.n}" + (f":{self.q}" if self.q is not None else "")


@dataclass(frozen=True)
class VerifyMode:
    kind: str = "exhaustive"
    seed: int | None = None
    trials: int | None = None

    KINDS = ("exhaustive", "class_reduced", "sampled", "none")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown verification mode {self.kind!r}")

    @classmethod
    def parse(cls, text: str, seed: int | None = None, trials: int = 10_000) -> VerifyMode:
        t = text.strip().lower().replace("-", "_")
        if t in ("classes", "class", "class_reduced"):
            return cls("class_reduced")
        if t in ("exhaustive", "none"):
            return cls(t)
        m = re.fullmatch(r"sampled(?::(\d+))?(?::(\d+))?", t)
        if m:
            s = int(m.group(1)) if m.group(1) else seed
            k = int(m.group(2)) if m.group(2) else trials
            return cls("sampled", s if s is not None else 0, k)
        raise ValueError(f"bad verification mode {text!r}")

    def to_json(self) -> dict:
        out: dict[str, Any] = {"mode": self.kind}
        if self.kind == "sampled":
            out.update(seed=self.seed, trials=self.trials)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> VerifyMode:
        return cls(obj["mode"], obj.get("seed"), obj.get("trials"))


@dataclass
class Outcome:
    status: str  # verified | counterexample | unverified
    pairs_checked: int = 0
    witness: list | None = None
    value: Any = None

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def to_json(self) -> dict:
        out: dict[str, Any] = {"status": self.status, "pairs_checked": self.pairs_checked}
        if self.witness is not None:
            out["witness"] = self.witness
            out["value"] = self.value
        return out

    @classmethod
    def from_json(cls, obj: dict) -> Outcome:
        return cls(obj["status"], obj.get("pairs_checked", 0), obj.get("witness"), obj.get("value"))


METHODS = ("landau", "random", "recursive", "order", "lie", "given")


@dataclass
class LawCertificate:
    law: WordExpr
    target: GroupSpec
    method: str
    mode: VerifyMode
    outcome: Outcome
    nominal_length: int
    reduced_length: int | None
    seed: int | None = None
    details: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.outcome.verified

    def to_json(self) -> dict:
        return {
            "version": CERT_VERSION,
            "method": self.method,
            "target": str(self.target),
            "law": _word.to_json(self.law),
            "verification": self.mode.to_json(),
            "outcome": self.outcome.to_json(),
            "nominal_length": self.nominal_length,
            "reduced_length": self.reduced_length,
            "seed": self.seed,
            "details": self.details,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> LawCertificate:
        return cls(
            law=_word.from_json(obj["law"]),
            target=GroupSpec.parse(obj["target"]),
            method=obj["method"],
            mode=VerifyMode.from_json(obj["verification"]),
            outcome=Outcome.from_json(obj["outcome"]),
            nominal_length=int(obj["nominal_length"]),
            reduced_length=obj.get("reduced_length"),
            seed=obj.get("seed"),
            details=obj.get("details", {}),
        )

    @classmethod
    def loads(cls, text: str) -> LawCertificate:
        return cls.from_json(json.loads(text))


def reduced_length_or_none(e: WordExpr, cap: int = _word.DEFAULT_FLATTEN_CAP) -> int | None:
    try:
        return len(_word.flatten(e, cap=cap))
    except _word.SizeError:
        return None
