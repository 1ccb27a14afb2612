import math
from dataclasses import replace
from fractions import Fraction

import pytest

from engine.algebra.binomial import BCValue, bc_mul, bc_semiring
from engine.algebra.homs import cos_sin_hom, exp_hom, identity_hom, powers_hom
from engine.algebra.instances import complex2, logreal, maxplus, parse_semiring, real, semiring_instance, split_args
from engine.algebra.natpoly import NatPoly, natpoly_add, natpoly_eval, natpoly_semiring
from engine.algebra.semiring import OpCounter
from engine.api.errors import ArityMismatch, ExponentOverflow, OrderMismatch, SchemaError, UnknownInstance
from engine.app.validate import DEFAULT_SUITE, LAWS, check_laws, validate_instance


class TestNatPoly:
    def test_str(self):
        p = NatPoly(2, {(2, 0): 3, (0, 1): 1})
        assert str(p) == "3*x0^2 + x1"
        assert str(NatPoly.zero(2)) == "0"
        assert str(NatPoly.one(2)) == "1"
        assert str(NatPoly.constant(4, 1)) == "4"

    def test_canonical(self):
        assert NatPoly(1, {(1,): 0}) == NatPoly.zero(1)
        assert NatPoly(2, {(1, 0): 2}) != NatPoly(2, {(1, 0): 3})
        x, y = NatPoly.variable(0, 2), NatPoly.variable(1, 2)
        assert (x + y) * (x + y) == NatPoly(2, {(2, 0): 1, (1, 1): 2, (0, 2): 1})

    def test_derivative(self):
        p = NatPoly(2, {(2, 0): 3, (0, 1): 1})
        assert p.derivative(0) == NatPoly(2, {(1, 0): 6})
        assert p.derivative(1) == NatPoly.one(2)
        assert p.derivative(0).derivative(0).derivative(0) == NatPoly.zero(2)

    def test_arity(self):
        with pytest.raises(ArityMismatch):
            NatPoly.one(1) + NatPoly.one(2)
        with pytest.raises(ArityMismatch):
            NatPoly.variable(2, 2)
        with pytest.raises(ArityMismatch):
            NatPoly(2, {(1,): 1})

    def test_overflow(self):
        with pytest.raises(ExponentOverflow):
            NatPoly(1, {(2 ** 32,): 1})

    def test_add(self):
        x, y = NatPoly.variable(0, 2), NatPoly.variable(1, 2)
        assert natpoly_add(x, x) == NatPoly(2, {(1, 0): 2})
        assert natpoly_add(x, NatPoly.zero(2)) == x
        assert str(natpoly_add(y, x)) == str(natpoly_add(x, y))

    def test_eval(self):
        p = NatPoly(2, {(2, 0): 3, (0, 1): 1})
        assert natpoly_eval(p, real(exact=True), [Fraction(2), Fraction(5)]) == 17
        with pytest.raises(ArityMismatch):
            natpoly_eval(p, real(), [1.0])

    def test_semiring(self):
        s = natpoly_semiring(3)
        assert s.accepts(NatPoly.one(3))
        assert not s.accepts(NatPoly.one(2))
        assert s.times(4, NatPoly.variable(1, 3)) == NatPoly(3, {(0, 1, 0): 4})


class TestBinomialConvolution:
    def test_product(self):
        s = real(exact=True)
        a = BCValue((1, 2, 3))
        b = BCValue((4, 5, 6))
        # c2 = a0 b2 + 2 a1 b1 + a2 b0
        assert bc_mul(a, b, s).components == (4, 13, 6 + 20 + 12)

    def test_order_mismatch(self):
        s = real()
        with pytest.raises(OrderMismatch):
            bc_mul(BCValue((1.0, 2.0)), BCValue((1.0, 2.0, 3.0)), s)
        with pytest.raises(OrderMismatch):
            bc_semiring(s, 65)

    def test_powers_are_a_homomorphism(self, rng):
        s = real(exact=True)
        for n in range(6):
            hom = powers_hom(s, n)
            target = hom.target
            for _ in range(1000 // 6):
                a, b = s.sample(rng), s.sample(rng)
                assert hom(s.add(a, b)) == target.mul(hom(a), hom(b))
            assert hom(s.zero) == target.one

    def test_parse_and_fmt(self):
        s = bc_semiring(real(), 2)
        v = s.parse("(1;2.5;-3)")
        assert v == BCValue((1.0, 2.5, -3.0))
        assert s.fmt(v) == "(1;2.5;-3)"
        with pytest.raises(SchemaError):
            s.parse("(1;2)")

    def test_nested(self):
        s = parse_semiring("bc(bc(real,1),1)")
        assert s.name == "bc(bc(real,1),1)"
        v = s.parse("((1;2);(3;4))")
        assert v[1] == BCValue((3.0, 4.0))


class TestInstances:
    def test_logreal(self):
        s = logreal()
        assert s.add(math.log(2), math.log(3)) == pytest.approx(math.log(5))
        assert s.mul(math.log(2), math.log(3)) == pytest.approx(math.log(6))
        assert s.add(s.zero, 1.5) == 1.5
        assert s.lift(0.0) == s.zero
        assert s.times(3, math.log(2)) == pytest.approx(math.log(6))

    def test_maxplus(self):
        s = maxplus()
        assert s.add(1.0, 3.0) == 3.0
        assert s.mul(1.0, 3.0) == 4.0
        assert not s.cancellative

    def test_complex2(self):
        s = complex2()
        assert s.mul((0.0, 1.0), (0.0, 1.0)) == (-1.0, 0.0)
        assert s.parse("1,-2") == (1.0, -2.0)
        with pytest.raises(SchemaError):
            s.parse("1")

    def test_exact_real(self):
        s = real(exact=True)
        assert s.parse("1/3") == Fraction(1, 3)
        assert s.sum([Fraction(1, 3)] * 3) == 1
        with pytest.raises(SchemaError):
            s.parse("one")

    def test_real_tolerance(self):
        assert real().eq(1.0, 1.0 + 1e-12)
        assert not real(atol=0.0, rtol=0.0).eq(1.0, 1.0 + 1e-12)

    def test_parse_names(self):
        assert parse_semiring("natpoly(3)").name == "natpoly(3)"
        assert parse_semiring("bc(real,2)").name == "bc(real,2)"
        assert parse_semiring(" logreal ").name == "logreal"
        for bad in ("nope", "natpoly", "real(3)", "bc(real)", "bc(real,x)", "bc(real,2"):
            with pytest.raises(UnknownInstance):
                parse_semiring(bad)

    def test_semiring_instance(self):
        assert semiring_instance("real", {"exact": True}).parse("1/3") == Fraction(1, 3)
        assert semiring_instance("natpoly", {"n": 2}).name == "natpoly(2)"
        assert semiring_instance("bc", {"n": 2}).name == "bc(real,2)"
        with pytest.raises(UnknownInstance):
            semiring_instance("natpoly")
        with pytest.raises(UnknownInstance):
            semiring_instance("tropical")

    def test_split_args(self):
        assert split_args("tensor(bc(real,1),bc(real,3))") == ("tensor", ["bc(real,1)", "bc(real,3)"])
        assert split_args("real") == ("real", [])

    def test_empty_reductions(self):
        s = real()
        assert s.sum([]) == s.zero
        assert s.product([]) == s.one
        assert s.power(2.0, 0) == 1.0
        assert s.power(2.0, 10) == 1024.0

    def test_homs(self):
        assert exp_hom()(math.log(3)) == pytest.approx(3.0)
        c, s = cos_sin_hom()(math.pi / 2)
        assert c == pytest.approx(0.0, abs=1e-12)
        assert s == pytest.approx(1.0)


class TestOpCounter:
    def test_counts(self):
        counter = OpCounter()
        s = real().counted(counter)
        s.sum([1.0, 2.0, 3.0])
        s.product([2.0, 3.0])
        s.sum([])
        assert (counter.adds, counter.muls, counter.total) == (2, 1, 3)
        counter.reset()
        assert counter.total == 0

    def test_counted_keeps_semantics(self):
        s = real().counted(OpCounter())
        assert s.name == "real"
        assert s.cancellative
        assert s.add(1.0, 2.0) == 3.0


class TestLaws:
    @pytest.mark.parametrize("name", DEFAULT_SUITE)
    def test_suite(self, name):
        results = validate_instance(name, 100, 0)
        assert len(results) >= len(LAWS)
        failed = [(r.law, r.example) for r in results if not r.passed]
        assert failed == []

    def test_structure_constants_reported(self):
        results = validate_instance("tensor(real,bc1)", 10, 0)
        assert results[-1].law == "structure constants"
        assert results[-1].passed

    def test_float_real_fails_exactly(self):
        results = validate_instance("real", 1000, 0, {"atol": 0.0, "rtol": 0.0})
        assert not all(r.passed for r in results)

    def test_needs_sampler(self, rng):
        s = real()
        with pytest.raises(SchemaError):
            check_laws(replace(s, sample=None), 1, rng)


def _flat(value):
    if isinstance(value, BCValue):
        return list(value.components)
    if isinstance(value, tuple):
        return list(value)
    return [value]


class TestHomomorphisms:
    @pytest.mark.parametrize("hom", [identity_hom(real()), exp_hom(), cos_sin_hom(), powers_hom(real(), 3)],
                             ids=lambda h: h.name)
    def test_random_pairs(self, hom, rng):
        target = hom.target
        assert _flat(hom(hom.source_identity)) == pytest.approx(_flat(target.one), abs=1e-12)
        for _ in range(1000):
            a, b = float(rng.uniform(-1.0, 1.0)), float(rng.uniform(-1.0, 1.0))
            lhs = hom(hom.source_combine(a, b))
            rhs = target.mul(hom(a), hom(b))
            assert _flat(lhs) == pytest.approx(_flat(rhs), abs=1e-12, rel=1e-12)

    def test_bc1_is_the_dual_numbers(self, rng):
        s = real(exact=True)
        bc = bc_semiring(s, 1)
        for _ in range(1000):
            a0, a1, b0, b1 = (s.sample(rng) for _ in range(4))
            a, b = BCValue((a0, a1)), BCValue((b0, b1))
            assert bc.mul(a, b).components == (a0 * b0, a0 * b1 + a1 * b0)
            assert bc.add(a, b).components == (a0 + b0, a1 + b1)
