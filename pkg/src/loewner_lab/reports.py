"""Structured verdicts for one inequality instance, with JSON round-tripping."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .hypotheses import HypothesisReport
from .spectral import LoewnerVerdict, SymMatrix


def fmt17(x: float) -> str:
    return format(float(x), ".17g")


def input_digest(*items) -> str:
    """sha256 over matrices, functions and numbers at 17 significant digits."""
    h = hashlib.sha256()
    for item in items:
        if isinstance(item, SymMatrix):
            item = np.asarray(item)
        if isinstance(item, np.ndarray):
            h.update((",".join(fmt17(x) for x in item.ravel()) + f"|{item.shape}").encode())
        elif isinstance(item, (int, float, np.floating)):
            h.update(fmt17(item).encode())
        else:
            h.update(json.dumps(item, sort_keys=True, default=str).encode())
        h.update(b";")
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class ChainLink:
    label: str
    verdict: LoewnerVerdict

    def to_dict(self) -> dict:
        return {"label": self.label, "verdict": self.verdict.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "ChainLink":
        return cls(d["label"], LoewnerVerdict.from_dict(d["verdict"]))


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of checking lhs <= rhs; ``verdict`` classifies rhs - lhs."""

    theorem_id: str
    hypothesis: HypothesisReport | None
    lhs: SymMatrix
    rhs: SymMatrix
    verdict: LoewnerVerdict
    chain_links: tuple[ChainLink, ...] = ()
    notes: str = ""
    constants: dict = field(default_factory=dict)
    digest: str = ""

    @property
    def holds(self) -> bool:
        if self.chain_links:
            return all(link.verdict.holds for link in self.chain_links)
        return self.verdict.holds

    @property
    def hypothesis_held(self) -> bool | None:
        return None if self.hypothesis is None else self.hypothesis.holds

    @property
    def margin(self) -> float:
        """Smallest eigenvalue of rhs - lhs, over all links for chains."""
        if self.chain_links:
            return min(link.verdict.min_eig_of_difference for link in self.chain_links)
        return self.verdict.min_eig_of_difference

    @property
    def difference(self) -> SymMatrix:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "hypothesis": "not applicable" if self.hypothesis is None else self.hypothesis.to_dict(),
            "lhs": self.lhs.to_list(),
            "rhs": self.rhs.to_list(),
            "verdict": self.verdict.to_dict(),
            "chain_links": [link.to_dict() for link in self.chain_links],
            "notes": self.notes,
            "constants": self.constants,
            "digest": self.digest,
            "holds": self.holds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "InequalityReport":
        hyp = d["hypothesis"]
        return cls(
            d["theorem_id"],
            None if hyp == "not applicable" else HypothesisReport.from_dict(hyp),
            SymMatrix(d["lhs"]),
            SymMatrix(d["rhs"]),
            LoewnerVerdict.from_dict(d["verdict"]),
            tuple(ChainLink.from_dict(x) for x in d.get("chain_links", [])),
            d.get("notes", ""),
            d.get("constants", {}),
            d.get("digest", ""),
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "InequalityReport":
        return cls.from_dict(json.loads(text))
