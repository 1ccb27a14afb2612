from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import numpy as np

from engine.api.adapter_base import Adapter, BuiltGraph, Features
from engine.api.errors import InvalidModel, SchemaError
from engine.graph.dag import GraphBuilder, Op

logger = logging.getLogger(__name__)

STOCHASTIC_TOL = 1e-9


@dataclass
class Trellis:
    initial: np.ndarray      # (K,)
    transition: np.ndarray   # (K, K), row j holds P(next = k | current = j)
    emission: np.ndarray     # (K, V), P(symbol | state)
    observations: Tuple[int, ...]

    def __post_init__(self):
        self.initial = np.asarray(self.initial, dtype=float)
        self.transition = np.asarray(self.transition, dtype=float)
        self.emission = np.asarray(self.emission, dtype=float)
        self.observations = tuple(int(o) for o in self.observations)
        K = self.initial.shape[0] if self.initial.ndim == 1 else 0
        if K == 0:
            raise InvalidModel("initial must be a non-empty vector")
        if self.transition.shape != (K, K):
            raise InvalidModel(f"transition must be {K}x{K}, got {self.transition.shape}")
        if self.emission.ndim != 2 or self.emission.shape[0] != K:
            raise InvalidModel(f"emission must have {K} rows, got shape {self.emission.shape}")
        if not self.observations:
            raise InvalidModel("observations must be non-empty")
        V = self.emission.shape[1]
        bad = [o for o in self.observations if not 0 <= o < V]
        if bad:
            raise InvalidModel(f"observation symbols {bad} outside 0..{V - 1}")
        for name, arr in (("initial", self.initial), ("transition", self.transition),
                          ("emission", self.emission)):
            if (arr < 0).any():
                raise InvalidModel(f"{name} has negative entries")
        if abs(self.initial.sum() - 1.0) > STOCHASTIC_TOL:
            raise InvalidModel(f"initial sums to {self.initial.sum()!r}, not 1")
        rows = self.transition.sum(axis=1)
        if np.abs(rows - 1.0).max() > STOCHASTIC_TOL:
            raise InvalidModel("transition rows must sum to 1")

    @property
    def num_states(self) -> int:
        return self.initial.shape[0]

    @property
    def horizon(self) -> int:
        return len(self.observations)


def trellis_to_cg(t: Trellis) -> BuiltGraph:
    """
    Time slice 0 holds one source per state (initial * first emission).
    Each later slice multiplies every previous state value by a transition
    source, sums per state, then multiplies by that state's emission source.
    """
    b = GraphBuilder()
    xi: Dict[int, float] = {}
    legend: Dict[int, str] = {}
    keys: Dict[Tuple[Any, ...], int] = {}

    def source(key: Tuple[Any, ...], value: float, text: str) -> int:
        v = b.source()
        xi[v] = float(value)
        legend[v] = text
        keys[key] = v
        return v

    K, obs = t.num_states, t.observations
    alpha = [source(("res", 0, k), t.initial[k] * t.emission[k, obs[0]],
                    f"t=0 state={k} obs={obs[0]} (initial*emission)")
             for k in range(K)]
    for step in range(1, t.horizon):
        nxt = []
        for k in range(K):
            total = b.node(Op.ADD)
            for j in range(K):
                a = source(("trans", step, j, k), t.transition[j, k], f"t={step} transition {j}->{k}")
                m = b.node(Op.MUL)
                b.arc(alpha[j], m)
                b.arc(a, m)
                b.arc(m, total)
            r = source(("res", step, k), t.emission[k, obs[step]], f"t={step} state={k} obs={obs[step]} (emission)")
            node = b.node(Op.MUL)
            b.arc(total, node)
            b.arc(r, node)
            nxt.append(node)
        alpha = nxt

    g = b.build()
    logger.debug("trellis K=%d T=%d -> %r", K, t.horizon, g)
    return BuiltGraph(graph=g, xi=xi, legend=legend, keys=keys, model=t)


def trellis_features(built: BuiltGraph) -> Features:
    """Indicator families for state residence, transitions and emissions."""
    t: Trellis = built.model
    K, T = t.num_states, t.horizon
    families: Features = []
    for step in range(T):
        for k in range(K):
            families.append((f"state[t={step},k={k}]", {built.source("res", step, k): 1.0}))
    for j in range(K):
        for k in range(K):
            feats = {built.source("trans", step, j, k): 1.0 for step in range(1, T)}
            families.append((f"trans[{j}->{k}]", feats))
    for k in range(K):
        for o in sorted(set(t.observations)):
            feats = {built.source("res", step, k): 1.0 for step in range(T) if t.observations[step] == o}
            families.append((f"emit[k={k},o={o}]", feats))
    return families


def _array(doc: Mapping[str, Any], key: str) -> np.ndarray:
    if key not in doc:
        raise SchemaError("missing field", key)
    try:
        return np.asarray(doc[key], dtype=float)
    except (TypeError, ValueError):
        raise SchemaError("expected numbers", key) from None


class TrellisAdapter(Adapter):
    kind = "trellis"

    def parse(self, doc: Mapping[str, Any]) -> Trellis:
        obs = doc.get("observations")
        if not isinstance(obs, list) or not all(isinstance(o, int) for o in obs):
            raise SchemaError("expected an array of integer symbols", "observations")
        return Trellis(_array(doc, "initial"), _array(doc, "transition"), _array(doc, "emission"), tuple(obs))

    def build(self, model: Trellis) -> BuiltGraph:
        return trellis_to_cg(model)

    def default_features(self, built: BuiltGraph) -> Features:
        return trellis_features(built)


def get_adapter() -> Adapter:
    return TrellisAdapter()
