import math

import pytest

from engine.algebra.homs import exp_hom
from engine.algebra.instances import maxplus, real
from engine.algebra.natpoly import natpoly_eval, natpoly_semiring
from engine.algebra.semiring import OpCounter
from engine.api.config import CheckpointPolicy
from engine.api.errors import (
    InsufficientCheckpoints,
    NotCancellative,
    SchemaError,
    SemiringMismatch,
    ShapeMismatch,
    SourceValueMissing,
    UnknownElement,
)
from engine.graph.cutset import Direction, cutset_chain, initial_cutset
from engine.graph.dag import build_graph
from engine.passes.backward import forward_backward
from engine.passes.checkpoint import Checkpoints, checkpointed_replay
from engine.passes.forward import forward, free_forward, parametrized_forward
from engine.passes.projections import join_projections, project0, project1
from engine.semialgebra.spec import Factor, SemialgebraSpec, bc_semialgebra, semialgebra_from_semiring, tensor_product
from engine.semialgebra.tensor import tensor_eq

from support import random_graph

EXACT = real(exact=True)

POLICIES = [CheckpointPolicy.all(), CheckpointPolicy.nodes(),
            CheckpointPolicy.cutsets(1), CheckpointPolicy.cutsets(2), CheckpointPolicy.cutsets(5)]


def small_graph(rng):
    """Keeps polynomial degrees and term counts small enough for exact arithmetic."""
    return random_graph(rng, max_sources=5, max_elements=16, max_in=2)


def random_xi(g, s, rng):
    return {v: s.sample(rng) for v in g.sources}


class TestForward:
    def test_diamond(self, diamond):
        result = forward(diamond, real(), {0: 3.0})
        assert result.sink_sum == 6.0
        assert result.all_values() == {0: 3.0, 2: 3.0, 3: 3.0, 1: 6.0}

    def test_missing_source_value(self, diamond):
        with pytest.raises(SourceValueMissing):
            forward(diamond, real(), {})

    def test_value_on_non_source(self, diamond):
        with pytest.raises(UnknownElement):
            forward(diamond, real(), {0: 1.0, 1: 2.0})

    def test_wrong_value_type(self, diamond):
        with pytest.raises(SemiringMismatch):
            forward(diamond, real(), {0: "3"})

    def test_several_sinks(self):
        g = build_graph([0, 1, 2, 3], {4: (0, 2), 5: (1, 2), 6: (0, 3)}, {2: "mul", 3: "add"})
        result = forward(g, real(), {0: 2.0, 1: 5.0})
        assert result.sink_values() == {2: 10.0, 3: 2.0}
        assert result.sink_sum == 12.0

    def test_free_forward_substitution(self, rng):
        for _ in range(200):
            g = small_graph(rng)
            p = free_forward(g).sink_sum
            xi = random_xi(g, EXACT, rng)
            values = [xi[v] for v in g.source_order]
            assert natpoly_eval(p, EXACT, values) == forward(g, EXACT, xi).sink_sum

    def test_free_forward_diamond(self, diamond):
        counter = OpCounter()
        p = free_forward(diamond, counter=counter).sink_sum
        assert str(p) == "2*x0"
        assert counter.adds == 1

    def test_free_forward_is_over_natpoly(self, diamond):
        assert free_forward(diamond).semiring.name == natpoly_semiring(1).name

    def test_parametrized(self, diamond):
        result = parametrized_forward(diamond, exp_hom(), {0: math.log(3)})
        assert result.sink_sum == pytest.approx(6.0)
        with pytest.raises(SourceValueMissing):
            parametrized_forward(diamond, exp_hom(), {})

    def test_parametrized_matches_polynomial(self, rng):
        s = real()
        for _ in range(100):
            g = small_graph(rng)
            phi = {v: float(rng.uniform(-1.0, 1.0)) for v in g.sources}
            got = parametrized_forward(g, exp_hom(), phi).sink_sum
            point = [math.exp(phi[v]) for v in g.source_order]
            expected = natpoly_eval(free_forward(g).sink_sum, s, point)
            assert got == pytest.approx(expected, rel=1e-9, abs=1e-9)

    def test_maxplus_is_forward_only(self, diamond):
        assert forward(diamond, maxplus(), {0: 2.0}).sink_sum == 2.0


class TestCheckpoints:
    def test_parse(self):
        assert CheckpointPolicy.parse("nodes") == CheckpointPolicy.nodes()
        assert CheckpointPolicy.parse("cutsets:3") == CheckpointPolicy.cutsets(3)
        assert str(CheckpointPolicy.cutsets(3)) == "cutsets:3"
        for bad in ("some", "cutsets:", "cutsets:0"):
            with pytest.raises(SchemaError):
                CheckpointPolicy.parse(bad)

    def test_policies_agree(self, rng):
        for _ in range(50):
            g = small_graph(rng)
            xi = random_xi(g, EXACT, rng)
            expected = forward(g, EXACT, xi).all_values()
            for policy in POLICIES[1:]:
                assert forward(g, EXACT, xi, policy).all_values() == expected

    def test_storage(self, diamond):
        nodes = forward(diamond, real(), {0: 3.0}, CheckpointPolicy.nodes())
        assert set(nodes.values) == {0, 1}
        sparse = forward(diamond, real(), {0: 3.0}, CheckpointPolicy.cutsets(2))
        assert set(sparse.values) == {1}
        assert set(sparse.checkpoints.frames) == {0, 2}
        assert sparse.alpha(3) == 3.0

    def test_insufficient(self, diamond):
        with pytest.raises(InsufficientCheckpoints):
            checkpointed_replay(diamond, real(), CheckpointPolicy.cutsets(1), Checkpoints(), 2)
        with pytest.raises(InsufficientCheckpoints):
            checkpointed_replay(diamond, real(), CheckpointPolicy.all(), Checkpoints(), 1)


def tensor_setup(s, a=None):
    a = a or semialgebra_from_semiring(s)
    tspec = tensor_product(a, bc_semialgebra(s, 1))
    return a, tspec


class TestForwardBackward:
    def test_diamond(self, diamond):
        a, tspec = tensor_setup(real())
        xi = {0: tspec.element([3.0, 1.0])}
        result = forward_backward(diamond, a, xi)
        assert tspec.coordinates(result.combined) == [6.0, 2.0]
        assert result.beta[0].coefficient((0,)) == 2.0
        assert result.beta_at(2).coefficient((0,)) == 1.0

    def test_mul_arc_adjoints(self):
        g = build_graph([0, 1, 2], {3: (0, 2), 4: (1, 2)}, {2: "mul"})
        a, tspec = tensor_setup(real())
        xi = {0: tspec.element([2.0, 0.0]), 1: tspec.element([5.0, 0.0])}
        result = forward_backward(g, a, xi)
        assert result.beta_at(3).coefficient((0,)) == 5.0
        assert result.beta_at(4).coefficient((0,)) == 2.0
        assert result.beta[0].coefficient((0,)) == 5.0

    def test_combined_equals_forward(self, rng):
        for _ in range(200):
            g = small_graph(rng)
            a, tspec = tensor_setup(EXACT)
            t = tspec.as_semiring()
            xi = random_xi(g, t, rng)
            assert forward_backward(g, a, xi).combined == forward(g, t, xi).sink_sum

    def test_combined_equals_forward_richer_algebra(self, rng):
        inner = tensor_product(semialgebra_from_semiring(EXACT), bc_semialgebra(EXACT, 1))
        a, tspec = tensor_setup(EXACT, inner)
        t = tspec.as_semiring()
        for _ in range(50):
            g = small_graph(rng)
            xi = random_xi(g, t, rng)
            assert forward_backward(g, a, xi).combined == forward(g, t, xi).sink_sum

    def test_cutset_sums_are_invariant(self, rng):
        for _ in range(20):
            g = small_graph(rng)
            a, tspec = tensor_setup(EXACT)
            t = tspec.as_semiring()
            A = a.as_semiring()
            xi = random_xi(g, t, rng)
            result = forward_backward(g, a, xi)
            alpha = forward(g, t, xi)
            expected = project1(result.combined)
            chain = cutset_chain(g, Direction.BACKWARD)
            cutsets = [initial_cutset(g, Direction.BACKWARD)] + [step.c_next for step in chain]
            for c in cutsets:
                total = A.sum(A.mul(project1(alpha.alpha(x)), result.beta_at(x)) for x in c)
                assert tensor_eq(total, expected)

    def test_beta_is_the_partial_derivative(self, rng):
        for _ in range(50):
            g = small_graph(rng)
            a, tspec = tensor_setup(EXACT)
            values = {v: EXACT.sample(rng) for v in g.sources}
            xi = {v: tspec.element([values[v], 0]) for v in g.sources}
            result = forward_backward(g, a, xi)
            p = free_forward(g).sink_sum
            point = [values[v] for v in g.source_order]
            for i, v in enumerate(g.source_order):
                assert result.beta[v].coefficient((0,)) == natpoly_eval(p.derivative(i), EXACT, point)

    def test_policies_are_bit_identical(self, rng):
        a, tspec = tensor_setup(real())
        t = tspec.as_semiring()
        for _ in range(30):
            g = small_graph(rng)
            xi = random_xi(g, t, rng)
            runs = [forward_backward(g, a, xi, policy) for policy in POLICIES]
            for r in runs[1:]:
                assert r.combined.coeffs == runs[0].combined.coeffs
                assert {v: b.coeffs for v, b in r.beta.items()} == {v: b.coeffs for v, b in runs[0].beta.items()}

    def test_needs_cancellative_scalars(self, diamond):
        s = maxplus()
        a = SemialgebraSpec(s, (Factor("maxplus", ("1",), {(0, 0): {0: s.one}}, (s.one,)),))
        with pytest.raises(NotCancellative):
            forward_backward(diamond, a, {})

    def test_xi_must_live_in_the_tensor(self, diamond):
        a, _ = tensor_setup(real())
        with pytest.raises(SemiringMismatch):
            forward_backward(diamond, a, {0: a.lift(3.0)})


class TestProjections:
    def test_round_trip(self):
        a, tspec = tensor_setup(real())
        t = tspec.element([3.0, 4.0])
        p0, p1 = project0(t), project1(t)
        assert a.coordinates(p0) == [3.0]
        assert a.coordinates(p1) == [4.0]
        assert join_projections(tspec, p0, p1) == t

    def test_shape(self):
        s = real()
        with pytest.raises(ShapeMismatch):
            project0(semialgebra_from_semiring(s).lift(1.0))
        wide = tensor_product(semialgebra_from_semiring(s), bc_semialgebra(s, 2))
        with pytest.raises(ShapeMismatch):
            project1(wide.unit)
