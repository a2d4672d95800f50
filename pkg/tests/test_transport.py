import random
from fractions import Fraction as F

import pytest

from lipfree import (
    Functional,
    LipschitzPotential,
    PairMeasure,
    SignedMeasure,
    NotARepresentation,
    apply_representation,
    delta,
    evaluate,
    free_norm,
    functional_of,
    is_optimal,
    molecule,
    molecule_decomposition,
    norming_functions_check,
    optimal_coupling,
    reflect,
    restrict,
    validate_metric,
)
from lipfree.instances import random_functional, random_space
from lipfree.oracles import transport_cost_by_vertex_enumeration

LINE = [[0, 1, 2], [1, 0, 1], [2, 1, 0]]


def test_free_norm_molecule_and_delta():
    sp = random_space(7, seed=1)
    assert free_norm(molecule(2, 5, sp), sp) == 1
    for x in range(1, sp.n):
        assert free_norm(delta(x, sp), sp) == sp.d(x, 0)


def test_free_norm_matches_vertex_oracle():
    for seed in range(40):
        sp = random_space(3 + seed % 4, seed)
        phi = random_functional(sp, seed + 500, max_support=4)
        assert free_norm(phi, sp) == transport_cost_by_vertex_enumeration(phi, sp)


def test_optimal_coupling_single_pair():
    sp = random_space(6, seed=2)
    a, b = 2, 4
    phi = delta(a, sp).plus(delta(b, sp).scaled(-1, sp), sp)
    res = optimal_coupling(phi, sp)
    assert res.coupling.mass == {(a, b): F(1)}
    assert res.value == sp.d(a, b)
    assert res.representation.mass == {(a, b): sp.d(a, b)}


def test_optimal_coupling_zero_functional():
    sp = random_space(4, seed=3)
    res = optimal_coupling(Functional.zero(sp), sp)
    assert res.value == 0 and len(res.coupling) == 0 and len(res.representation) == 0
    assert all(v == 0 for v in res.potential.values)


def test_optimal_coupling_two_sources_to_base():
    sp = validate_metric(LINE, ["0", "a", "b"])
    phi = Functional({1: F(1), 2: F(1)}, sp)
    res = optimal_coupling(phi, sp)
    assert res.value == 3
    assert res.coupling.mass == {(1, 0): F(1), (2, 0): F(1)}


def test_strong_duality_and_certificates():
    for seed in range(60):
        sp = random_space(3 + seed % 9, seed + 40)
        phi = random_functional(sp, seed + 900)
        res = optimal_coupling(phi, sp)
        assert res.potential.lip <= 1
        assert evaluate(phi, res.potential) == res.value
        assert res.representation.total_variation() == res.value
        assert norming_functions_check(phi, res.potential, res.representation, sp)


def test_norm_axioms_on_random_instances():
    for seed in range(25):
        sp = random_space(6, seed + 70)
        phi = random_functional(sp, seed + 100)
        psi = random_functional(sp, seed + 200)
        c = F(-7, 3)
        assert free_norm(phi.scaled(c, sp), sp) == abs(c) * free_norm(phi, sp)
        assert free_norm(phi.plus(psi, sp), sp) <= free_norm(phi, sp) + free_norm(psi, sp)


def test_apply_representation_examples():
    sp = random_space(6, seed=5)
    rng = random.Random(0)
    vals = [F(0)] + [F(rng.randint(-6, 6), 2) for _ in range(sp.n - 1)]
    f = LipschitzPotential.build(vals, sp)
    mu = PairMeasure.dirac(2, 4)
    assert apply_representation(mu, f, sp) == (f.values[2] - f.values[4]) / sp.d(2, 4)

    const = LipschitzPotential.build([0] * sp.n, sp)
    assert apply_representation(mu, const, sp) == 0

    phi = random_functional(sp, seed=77)
    res = optimal_coupling(phi, sp)
    assert apply_representation(res.representation, res.potential, sp) == res.value


def test_functional_of_examples_and_dual_path():
    sp = random_space(6, seed=6)
    x, y = 1, 3
    mu = PairMeasure.dirac(x, y, sp.d(x, y))
    want = delta(x, sp).plus(delta(y, sp).scaled(-1, sp), sp)
    assert functional_of(mu, sp) == want

    sym = PairMeasure.dirac(x, y).plus(PairMeasure.dirac(y, x))
    assert functional_of(sym, sp).is_zero()

    rng = random.Random(9)
    mu = PairMeasure(
        {(1, 2): F(3, 2), (2, 5): F(1, 3), (4, 0): F(2)}, sp
    )
    phi = functional_of(mu, sp)
    for _ in range(100):
        vals = [F(0)] + [F(rng.randint(-9, 9), rng.choice([1, 2])) for _ in range(sp.n - 1)]
        f = LipschitzPotential.build(vals, sp)
        assert evaluate(phi, f) == apply_representation(mu, f, sp)


def test_is_optimal_examples():
    sp = random_space(6, seed=7)
    assert is_optimal(PairMeasure.dirac(1, 4, F(7, 2)), sp)
    x, y = 2, 3
    sym = PairMeasure.dirac(x, y).plus(PairMeasure.dirac(y, x))
    assert not is_optimal(sym, sp)
    with pytest.raises(SignedMeasure):
        is_optimal(PairMeasure.dirac(1, 2, -1), sp)

    # arbitrary positive masses on an optimal support stay optimal
    phi = random_functional(sp, seed=123)
    support = optimal_coupling(phi, sp).coupling.support
    rng = random.Random(3)
    mu = PairMeasure({p: F(rng.randint(1, 9), 2) for p in support}, sp)
    assert is_optimal(mu, sp)


def test_restrict_preserves_optimality():
    rng = random.Random(17)
    for seed in range(20):
        sp = random_space(7, seed + 300)
        phi = random_functional(sp, seed + 400)
        mu = optimal_coupling(phi, sp).representation
        assert restrict(mu, lambda p: True) == mu
        assert len(restrict(mu, lambda p: False)) == 0
        keep = {p for p in mu.support if rng.random() < 0.5}
        sub = restrict(mu, keep.__contains__)
        assert is_optimal(sub, sp)


def test_reflect_examples():
    sp = random_space(5, seed=8)
    assert reflect(PairMeasure.dirac(1, 3)).mass == {(3, 1): F(1)}
    mu = PairMeasure({(1, 2): F(2), (3, 0): F(1, 2), (2, 4): F(5)}, sp)
    assert reflect(reflect(mu)) == mu
    assert functional_of(mu.plus(reflect(mu)), sp).is_zero()


def test_phi_star_nonexpansive():
    for seed in range(20):
        sp = random_space(6, seed + 600)
        rng = random.Random(seed)
        mass = {}
        for _ in range(rng.randint(1, 6)):
            x, y = rng.sample(range(sp.n), 2)
            mass[(x, y)] = F(rng.randint(-5, 5) or 1, 2)
        mu = PairMeasure(mass, sp)
        assert free_norm(functional_of(mu, sp), sp) <= mu.total_variation()


def test_molecule_decomposition_examples():
    sp = random_space(6, seed=9)
    m = molecule(2, 5, sp)
    terms = molecule_decomposition(m, sp)
    assert len(terms) == 1
    c, mol = terms[0]
    assert c == 1 and (mol.x, mol.y) == (2, 5)

    a, b = 1, 4
    phi = delta(a, sp).plus(delta(b, sp).scaled(-1, sp), sp)
    terms = molecule_decomposition(phi, sp)
    assert terms == [(sp.d(a, b), mol)] or (
        len(terms) == 1 and terms[0][0] == sp.d(a, b) and (terms[0][1].x, terms[0][1].y) == (a, b)
    )

    for seed in range(20):
        phi = random_functional(sp, seed + 800)
        terms = molecule_decomposition(phi, sp)
        assert all(c > 0 for c, _ in terms)
        assert sum((c for c, _ in terms), start=F(0)) == free_norm(phi, sp)
        recon = Functional.zero(sp)
        for c, mol in terms:
            recon = recon.plus(mol.to_functional(sp).scaled(c, sp), sp)
        assert recon == phi


def test_norming_functions_check_examples():
    sp = random_space(6, seed=10)
    x, y = 1, 3
    m = molecule(x, y, sp)
    f = LipschitzPotential.build([sp.d(z, y) - sp.d(0, y) for z in sp.points], sp)
    mu = PairMeasure.dirac(x, y)
    assert norming_functions_check(m, f, mu, sp)

    zero_f = LipschitzPotential.build([0] * sp.n, sp)
    assert not norming_functions_check(m, zero_f, mu, sp)

    with pytest.raises(NotARepresentation):
        norming_functions_check(delta(2, sp), f, mu, sp)


def test_support_of_coupling_is_cyclically_monotone():
    from lipfree import PairSet, check_cyclically_monotone

    for seed in range(25):
        sp = random_space(8, seed + 1000)
        phi = random_functional(sp, seed + 1100)
        support = optimal_coupling(phi, sp).coupling.support
        if support:
            C = PairSet.of(support, sp)
            assert check_cyclically_monotone(C, sp).monotone


def test_float_mode_duality_gap():
    for seed in range(25):
        sp = random_space(9, seed + 1200).with_mode(exact=False)
        phi = random_functional(sp.with_mode(exact=True), seed + 1300)
        fphi = Functional({i: float(c) for i, c in phi.coeffs.items()}, sp)
        res = optimal_coupling(fphi, sp)
        assert abs(res.value - evaluate(fphi, res.potential)) <= 1e-9
        assert res.potential.lip <= 1 + 1e-9
