import random

import pytest

from curtis import linalg
from curtis.coeffring import Cyc, lcm_all, root_of_unity_order
from curtis.tameweil import (
    PLAIN,
    RECTIFIED,
    IrrRep,
    SSRep,
    TameParams,
    all_orbits,
    count_ssreps,
    enumerate_ssreps,
    induce_factor,
    irrep_matrices,
    metacyclic_oracle,
    normalize_word,
    orbit_of,
    rho_of_factors,
    trace_at,
)

P32 = TameParams(ell=3, q=2, n_max=6)  # depth cap 2, torsion modulus 9
P32_SMALL = TameParams(ell=3, q=2, n_max=2)  # torsion modulus 3
P23 = TameParams(ell=2, q=3, n_max=4)


def test_params_basic():
    assert P32.order_of_q == 2
    assert P32.depth(1) == 0 and P32.depth(2) == 1 and P32.depth(6) == 2
    assert P32.depth_cap == 2 and P32.torsion_modulus == 9
    assert P32.relevant_degrees == (1, 2, 6)
    assert P23.order_of_q == 1
    assert P23.relevant_degrees == (1, 2, 4)
    # depth positive exactly on multiples of the order of q
    for d in range(1, 7):
        assert (P32.depth(d) > 0) == (d % 2 == 0)


def test_params_validation():
    with pytest.raises(ValueError):
        TameParams(ell=4, q=3, n_max=2)
    with pytest.raises(ValueError):
        TameParams(ell=3, q=6, n_max=2)
    with pytest.raises(ValueError):
        TameParams(ell=3, q=9, n_max=2)


def test_orbits_mod_nine():
    assert orbit_of(P32, 0).members(2) == [0]
    orb3 = orbit_of(P32, 3)
    assert sorted(orb3.members(2)) == [3, 6] and orb3.size == 2
    orb1 = orbit_of(P32, 1)
    assert sorted(orb1.members(2)) == [1, 2, 4, 5, 7, 8] and orb1.size == 6
    # orbit sizes are always relevant degrees
    for orb in all_orbits(P32):
        assert orb.size in P32.relevant_degrees


def test_induce_factor_irreducible_case():
    alpha = Cyc.zeta(12).embed(72)
    for mode in (PLAIN, RECTIFIED):
        out = induce_factor(P32, 2, 3, alpha, mode)
        assert len(out) == 1
        assert out[0].orbit == orbit_of(P32, 3)
        assert out[0].phi == alpha * mode.sign(2)


def test_induce_factor_split_case():
    one = Cyc.one(24)
    plain = induce_factor(P32, 2, 0, one, PLAIN)
    assert {r.phi.min_key() for r in plain} == {one.min_key(), (-one).min_key()}
    rect = induce_factor(P32, 2, 0, one, RECTIFIED)
    z4 = Cyc.zeta(4)
    assert {r.phi.min_key() for r in rect} == {z4.min_key(), (-z4).min_key()}


def test_dim_additivity():
    rng = random.Random(0)
    for _ in range(40):
        d = rng.choice([1, 2, 3, 4, 6])
        c = rng.choice([c for c in range(9) if d % orbit_of(P32, c).size == 0])
        conductor = lcm_all([9, 2, 12 * d])
        alpha = Cyc.root_of_unity(12, rng.randrange(12), conductor)
        out = induce_factor(P32, d, c, alpha, rng.choice([PLAIN, RECTIFIED]))
        assert sum(r.dim for r in out) == d


def test_rho_of_split_torus():
    beta = Cyc.zeta(12).embed(24)
    rep = rho_of_factors(P32_SMALL, [(1, 0, beta), (1, 0, -beta)], RECTIFIED)
    assert rep.n == 2
    assert {p.phi.min_key() for p in rep.pieces} == {beta.min_key(), (-beta).min_key()}


def test_rho_equivalence_modes():
    # degree-2 factor vs split torus: rectified needs beta^2 = -alpha
    alpha = Cyc.one(24)
    betas = [Cyc.zeta(4).embed(24), -Cyc.zeta(4).embed(24)]
    rep2 = rho_of_factors(P32_SMALL, [(2, 0, alpha)], RECTIFIED)
    rep11 = rho_of_factors(P32_SMALL, [(1, 0, betas[0]), (1, 0, betas[1])], RECTIFIED)
    assert rep2 == rep11
    # plain: beta^2 = alpha
    rep2p = rho_of_factors(P32_SMALL, [(2, 0, alpha)], PLAIN)
    rep11p = rho_of_factors(P32_SMALL, [(1, 0, Cyc.one(24)), (1, 0, -Cyc.one(24))], PLAIN)
    assert rep2p == rep11p
    assert rep2p != rep11


def matrix_trace_oracle(params, rep, word, conductor):
    """Independent trace: build induced-model matrices and take the trace."""
    e, f = word
    zero = Cyc.zero(conductor)
    one = Cyc.one(conductor)
    total = Cyc.zero(conductor)
    for piece in rep.pieces:
        fr, sigma = irrep_matrices(params, piece, conductor)
        se = linalg.mat_pow(sigma, e, zero, one)
        if f >= 0:
            ff = linalg.mat_pow(fr, f, zero, one)
        else:
            inv = linalg.mat_inv(fr, zero, one)
            ff = linalg.mat_pow(inv, -f, zero, one)
        prod = linalg.mat_mul(se, ff, zero)
        for i in range(len(prod)):
            total = total + prod[i][i]
    return total


def test_irrep_matrices_satisfy_relation():
    piece = IrrRep(orbit_of(P32, 3), Cyc.zeta(12).embed(72))
    fr, sigma = irrep_matrices(P32, piece, 72)
    zero, one = Cyc.zero(72), Cyc.one(72)
    inv = linalg.mat_inv(fr, zero, one)
    lhs = linalg.mat_mul(linalg.mat_mul(fr, sigma, zero), inv, zero)
    rhs = linalg.mat_pow(sigma, P32.q, zero, one)
    assert lhs == rhs


def test_trace_examples():
    phi = Cyc.zeta(12).embed(72)
    rep = SSRep([IrrRep(orbit_of(P32, 3), phi)])
    assert trace_at(P32, rep, (1, 0)) == Cyc.integer(-1)
    assert trace_at(P32, rep, (0, 1)).is_zero()
    assert trace_at(P32, rep, (0, 2)) == 2 * phi


def test_trace_against_matrix_model():
    rng = random.Random(5)
    conductor = 72
    for _ in range(25):
        pieces = []
        total = 0
        while total < 4:
            c = rng.randrange(9)
            orb = orbit_of(P32, c)
            if total + orb.size > 4:
                break
            pieces.append(IrrRep(orb, Cyc.zeta(conductor, rng.randrange(1, conductor))))
            total += orb.size
        if not pieces:
            continue
        rep = SSRep(pieces)
        for _ in range(4):
            word = (rng.randrange(9), rng.randrange(-3, 4))
            assert trace_at(P32, rep, word) == matrix_trace_oracle(P32, rep, word, conductor)


def test_trace_at_identity_is_dimension():
    rng = random.Random(11)
    for _ in range(20):
        reps = enumerate_ssreps(P32_SMALL, 2, 2, conductor=24)
        rep = rng.choice(reps)
        assert trace_at(P32_SMALL, rep, (0, 0)) == Cyc.integer(rep.n)


def test_normalize_word():
    # Fr sigma = sigma^q Fr
    assert normalize_word([("f", 1), ("s", 1)], P32) == (2, 1)
    assert normalize_word([("s", 1), ("f", 1)], P32) == (1, 1)
    assert normalize_word([("f", -1), ("s", 1), ("f", 1)], P32) == (5, 0)  # q^-1 = 5 mod 9


def test_metacyclic_trivial_induction():
    alpha = Cyc.zeta(12)
    out = metacyclic_oracle(P32, 1, 0, alpha)
    assert out == [IrrRep(orbit_of(P32, 0), alpha)]


def test_metacyclic_split_example():
    out = metacyclic_oracle(P32, 2, 0, Cyc.one(12))
    expect = induce_factor(P32, 2, 0, Cyc.one(12), PLAIN)
    assert sorted(r.key() for r in out) == sorted(r.key() for r in expect)


def test_metacyclic_agreement_small_grid():
    # fast subgrid; the exhaustive d <= 6 grid runs in the acceptance suite
    for d in (1, 2, 3):
        for c in range(9):
            if d % orbit_of(P32, c).size != 0:
                continue
            for t in (0, 1, 7):
                alpha = Cyc.root_of_unity(12, t, lcm_all([9, 2, 12 * d]))
                for mode in (PLAIN, RECTIFIED):
                    got = metacyclic_oracle(P32, d, c, alpha, order_bound=12, mode=mode)
                    expect = induce_factor(P32, d, c, alpha, mode)
                    assert sorted(r.key() for r in got) == sorted(r.key() for r in expect)


def test_enumerate_ssreps_counts():
    p1 = TameParams(ell=3, q=2, n_max=1)
    assert [r.key() for r in enumerate_ssreps(p1, 1, 1)] == [
        SSRep([IrrRep(orbit_of(p1, 0), Cyc.one(2))]).key()
    ]
    p2 = TameParams(ell=2, q=3, n_max=1)
    assert len(enumerate_ssreps(p2, 1, 1)) == 2
    assert count_ssreps(p2, 1, 1) == 2


def test_enumerate_ssreps_cross_check():
    # all rho_of values over characters of both tori of dimension 2, alpha in mu_4
    params = P32_SMALL
    conductor = 24
    enumerated = enumerate_ssreps(params, 2, 2, conductor=conductor)
    # brute-force rho_of over all characters of both tori, alpha in mu_4,
    # restricted to reps whose Frobenius values land in mu_2
    filtered = set()
    for c in range(3):
        for t in range(4):
            alpha = Cyc.zeta(4, t).embed(conductor)
            rep = rho_of_factors(params, [(2, c, alpha)], RECTIFIED)
            if all(root_of_unity_order(p.phi) in (1, 2) for p in rep.pieces):
                filtered.add(rep.key())
    for t1 in range(4):
        for t2 in range(4):
            b1, b2 = Cyc.zeta(4, t1).embed(conductor), Cyc.zeta(4, t2).embed(conductor)
            rep = rho_of_factors(params, [(1, 0, b1), (1, 0, b2)], RECTIFIED)
            if all(root_of_unity_order(p.phi) in (1, 2) for p in rep.pieces):
                filtered.add(rep.key())
    assert filtered == {r.key() for r in enumerated}


def test_frobenius_twist_covariance():
    rng = random.Random(3)
    conductor = 72
    t_exp = 6  # twist scalar zeta_12
    t = Cyc.zeta(conductor, t_exp)
    for _ in range(20):
        d = rng.choice([1, 2, 3, 6])
        c = rng.choice([c for c in range(9) if d % orbit_of(P32, c).size == 0])
        alpha = Cyc.root_of_unity(12, rng.randrange(12), conductor)
        mode = rng.choice([PLAIN, RECTIFIED])
        twisted = induce_factor(P32, d, c, alpha * t ** d, mode)
        direct = induce_factor(P32, d, c, alpha, mode)
        shifted = [IrrRep(r.orbit, r.phi * t ** r.orbit.size) for r in direct]
        assert sorted(r.key() for r in twisted) == sorted(r.key() for r in shifted)


def test_equivalence_is_equivalence_relation():
    rng = random.Random(9)
    conductor = 24
    chars = []
    for _ in range(12):
        kind = rng.choice(["2", "11"])
        if kind == "2":
            chars.append([(2, rng.randrange(3), Cyc.zeta(12, rng.randrange(12)).embed(conductor))])
        else:
            chars.append(
                [
                    (1, 0, Cyc.zeta(12, rng.randrange(12)).embed(conductor)),
                    (1, 0, Cyc.zeta(12, rng.randrange(12)).embed(conductor)),
                ]
            )
    reps = [rho_of_factors(P32_SMALL, ch, RECTIFIED) for ch in chars]
    for i in range(len(reps)):
        assert reps[i] == reps[i]
        for j in range(len(reps)):
            assert (reps[i] == reps[j]) == (reps[j] == reps[i])
            for k in range(len(reps)):
                if reps[i] == reps[j] and reps[j] == reps[k]:
                    assert reps[i] == reps[k]
