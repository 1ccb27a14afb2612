"""Random model generators and brute-force oracles shared by the tests."""
from __future__ import annotations
import itertools
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from engine.adapters.factor_graph import FactorGraph, FactorTable
from engine.adapters.hypergraph import Hypergraph
from engine.adapters.tape import AdTape, Tag
from engine.adapters.trellis import Trellis
from engine.adapters.zdd import Zdd, ZddNode
from engine.api.adapter_base import BuiltGraph
from engine.graph.dag import ComputationGraph, GraphBuilder, Op


def random_graph(rng: np.random.Generator, max_sources: int = 6, max_elements: int = 30,
                 max_in: int = 3, distinct_tails: bool = False) -> ComputationGraph:
    b = GraphBuilder()
    n_src = int(rng.integers(1, max_sources + 1))
    nodes = [b.source() for _ in range(n_src)]
    used = n_src
    while True:
        k = int(rng.integers(1, max_in + 1))
        if distinct_tails:
            k = min(k, len(nodes))
        if used + 1 + k > max_elements:
            break
        v = b.node(Op.ADD if rng.random() < 0.5 else Op.MUL)
        if distinct_tails:
            tails = rng.choice(len(nodes), size=k, replace=False)
        else:
            tails = rng.integers(0, len(nodes), size=k)
        for i in tails:
            b.arc(nodes[int(i)], v)
        nodes.append(v)
        used += 1 + k
    return b.build()


def stochastic(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    m = rng.uniform(0.1, 1.0, size=shape)
    return m / m.sum(axis=-1, keepdims=True)


def random_trellis(rng: np.random.Generator, K: int, T: int, V: int = 3) -> Trellis:
    obs = tuple(int(o) for o in rng.integers(0, V, size=T))
    return Trellis(stochastic(rng, (K,)), stochastic(rng, (K, K)), stochastic(rng, (K, V)), obs)


def path_sources(built: BuiltGraph, states: Sequence[int]) -> List[int]:
    """Sources a state sequence multiplies together in a trellis graph."""
    out = [built.source("res", 0, states[0])]
    for t in range(1, len(states)):
        out.append(built.source("trans", t, states[t - 1], states[t]))
        out.append(built.source("res", t, states[t]))
    return out


def trellis_sequences(built: BuiltGraph) -> Iterator[Tuple[Tuple[int, ...], float, List[int]]]:
    """(states, joint weight, sources on the path) for every state sequence."""
    t: Trellis = built.model
    for states in itertools.product(range(t.num_states), repeat=t.horizon):
        sources = path_sources(built, states)
        yield states, float(np.prod([built.xi[v] for v in sources])), sources


def textbook_forward_backward(t: Trellis) -> Tuple[float, np.ndarray]:
    """Likelihood and state posteriors gamma[t, k] by the usual matrix recursions."""
    T, K = t.horizon, t.num_states
    b = t.emission[:, list(t.observations)].T  # (T, K)
    alpha = np.zeros((T, K))
    alpha[0] = t.initial * b[0]
    for i in range(1, T):
        alpha[i] = (alpha[i - 1] @ t.transition) * b[i]
    beta = np.ones((T, K))
    for i in range(T - 2, -1, -1):
        beta[i] = t.transition @ (b[i + 1] * beta[i + 1])
    z = alpha[-1].sum()
    return float(z), alpha * beta / z


def random_tree_factor_graph(rng: np.random.Generator, n: int) -> FactorGraph:
    names = [f"x{i}" for i in range(n)]
    variables = {name: int(rng.integers(2, 4)) for name in names}
    factors = []
    for i in range(1, n):
        j = int(rng.integers(0, i))
        scope = (names[j], names[i])
        factors.append(FactorTable(f"p{i}", scope, rng.uniform(0.1, 2.0, size=tuple(variables[v] for v in scope))))
    for name in names:
        if rng.random() < 0.5:
            factors.append(FactorTable(f"u_{name}", (name,), rng.uniform(0.1, 2.0, size=(variables[name],))))
    return FactorGraph(variables, factors)


def kschischang_factor_graph(rng: np.random.Generator) -> FactorGraph:
    """f_A(x1) f_B(x2) f_C(x1,x2,x3) f_D(x3,x4) f_E(x3,x5), all binary."""
    variables = {f"x{i}": 2 for i in range(1, 6)}
    scopes = {"fA": ("x1",), "fB": ("x2",), "fC": ("x1", "x2", "x3"), "fD": ("x3", "x4"), "fE": ("x3", "x5")}
    factors = [FactorTable(name, scope, rng.uniform(0.1, 2.0, size=(2,) * len(scope)))
               for name, scope in scopes.items()]
    return FactorGraph(variables, factors)


def configurations(fg: FactorGraph) -> Iterator[Tuple[Dict[str, int], float]]:
    names = list(fg.variables)
    for values in itertools.product(*(range(fg.variables[v]) for v in names)):
        assignment = dict(zip(names, values))
        w = 1.0
        for f in fg.factors:
            w *= f.table[tuple(assignment[v] for v in f.scope)]
        yield assignment, w


def random_zdd(rng: np.random.Generator, n_vars: int = 4) -> Zdd:
    nodes: Dict[int, ZddNode] = {}
    by_var: Dict[int, List[int]] = {}
    for var in range(n_vars - 1, -1, -1):
        for _ in range(int(rng.integers(1, 3))):
            below = [nid for v, ids in by_var.items() if v > var for nid in ids]
            choices: List = [False, True] + below
            lo = choices[int(rng.integers(len(choices)))]
            hi = choices[1 + int(rng.integers(len(choices) - 1))]  # never bottom
            nid = len(nodes)
            nodes[nid] = ZddNode(var, lo, hi)
            by_var.setdefault(var, []).append(nid)
    root = by_var[0][0]
    weights = tuple(float(w) for w in rng.uniform(0.5, 2.0, size=n_vars))
    return Zdd(tuple(f"v{i}" for i in range(n_vars)), nodes, root, weights)


def zdd_members(z: Zdd) -> List[frozenset]:
    """Truth table: every subset of variables the diagram accepts."""

    def member(ref, s: frozenset) -> bool:
        if ref is True:
            return not s
        if ref is False:
            return False
        node = z.nodes[ref]
        if any(v < node.var for v in s):
            return False
        if node.var in s:
            return member(node.hi, s - {node.var})
        return member(node.lo, s)

    n = len(z.variables)
    subsets = (frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r))
    return [s for s in subsets if member(z.root, s)]


def derivation_weights(h: Hypergraph, vertex: str) -> List[float]:
    """One product of hyperedge weights per derivation tree of vertex."""
    out: List[float] = []
    for e in h.edges:
        if e.head != vertex:
            continue
        for parts in itertools.product(*(derivation_weights(h, t) for t in e.tails)):
            out.append(e.weight * float(np.prod(parts)))
    return out


POSITIVE_TAGS = ("input", "exp", "pow", "sqrt", "const")


def random_tape(rng: np.random.Generator, m: Optional[int] = None, max_nodes: int = 6) -> AdTape:
    """Positive-valued tapes at points in [0.8, 1.2]; no graph exceeds 40 elements."""
    m = m or int(rng.integers(1, 9))
    b = GraphBuilder()
    n_src = int(rng.integers(1, 9))
    nodes = [b.source() for _ in range(n_src)]
    tags: Dict[int, Tag] = {}
    for v in nodes:
        fn = POSITIVE_TAGS[int(rng.integers(len(POSITIVE_TAGS)))]
        i = int(rng.integers(m))
        coef = float(rng.uniform(0.5, 1.5))
        if fn == "const":
            tags[v] = Tag.const(coef)
        elif fn == "pow":
            tags[v] = Tag("pow", index=i, coef=coef, power=float(rng.integers(2, 4)))
        else:
            tags[v] = Tag(fn, index=i, coef=coef)
    for _ in range(int(rng.integers(0, max_nodes + 1))):
        v = b.node(Op.ADD if rng.random() < 0.5 else Op.MUL)
        k = min(len(nodes), int(rng.integers(2, 4)))
        for j in rng.choice(len(nodes), size=k, replace=False):
            b.arc(nodes[int(j)], v)
        nodes.append(v)
    point = tuple(float(x) for x in rng.uniform(0.8, 1.2, size=m))
    return AdTape(b.build(), tags, point)


def central_difference(f, point: Sequence[float], k: int, h: float = 1e-5) -> float:
    up = list(point)
    down = list(point)
    up[k] += h
    down[k] -= h
    return (f(up) - f(down)) / (2 * h)
